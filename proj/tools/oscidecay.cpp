// Command-line front end: problem ingestion, decision commands, strategy
// enumeration, and numeric decay estimation.
//
// Exit status: 0 = certificate / positive verdict, 1 = no certificate /
// negative verdict, 2 = input error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "oscidecay/report.hpp"

namespace {

using namespace oscidecay;

struct CommonOpts {
  std::string preset;
  std::string problem_path;
  std::string phase_override;
  int degree_bound = 0;
  std::string json_path;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--preset", o.preset, "built-in problem preset (lightcone6, flex1, flex2)");
  cmd->add_option("--problem", o.problem_path, "path to a problem file");
  cmd->add_option("--phase", o.phase_override, "override the phase expression");
  cmd->add_option("--degree-bound", o.degree_bound, "degree bound for span computations");
}

ProblemFile load_problem(const CommonOpts& o) {
  if (!o.preset.empty() && !o.problem_path.empty())
    throw Error("--preset and --problem are mutually exclusive");
  if (!o.preset.empty()) return ProblemFile::preset(o.preset);
  if (!o.problem_path.empty()) return ProblemFile::load(o.problem_path);
  throw Error("no problem given: use --preset or --problem");
}

Functional build_functional(const ProblemFile& pf, const CommonOpts& o) {
  std::optional<std::string> phase;
  if (!o.phase_override.empty()) phase = o.phase_override;
  std::optional<unsigned> d;
  if (o.degree_bound > 0) d = static_cast<unsigned>(o.degree_bound);
  return pf.to_functional(phase, d);
}

void emit(const Json& report, const std::string& json_path) {
  if (json_path.empty()) return;
  std::ofstream out(json_path);
  if (!out) throw Error("cannot write JSON report to " + json_path);
  out << report.dump(2) << "\n";
}

std::string verdict_line(const UniformityVerdict& v) {
  std::string s = "verdict: " + v.status_string();
  if (!v.vanish_witness.empty()) s += " (" + v.vanish_witness + ")";
  if (!v.note.empty()) s += " [" + v.note + "]";
  return s;
}

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

int run_check_degenerate(const CommonOpts& o) {
  ProblemFile pf = load_problem(o);
  Functional fn = build_functional(pf, o);
  DegeneracyVerdict v = degeneracy_decompose(fn.phase, fn.sys, fn.degree_bound);
  if (v.degenerate) {
    std::cout << "degenerate: phase decomposes through the projections\n";
    for (std::size_t j = 0; j < v.decomposition.size(); ++j) {
      VarSet tv({"t"});
      std::cout << "  p_" << j + 1 << "(t) = "
                << v.decomposition[j].to_multipoly(tv, "t").to_string() << "\n";
    }
  } else {
    std::cout << "nondegenerate: squared distance to the degenerate span = "
              << v.distance_sq.to_string() << "\n";
  }
  emit(make_report("check-degenerate", problem_json(pf, fn), to_json(v)), o.json_path);
  return v.degenerate ? 1 : 0;
}

int run_general_position(const CommonOpts& o) {
  ProblemFile pf = load_problem(o);
  Functional fn = build_functional(pf, o);
  GeneralPositionResult gp = general_position(fn.sys);
  if (gp.holds) {
    std::cout << "general position holds for all " << fn.sys.factor_count() << " factors\n";
  } else {
    std::cout << "general position fails on factors {";
    for (std::size_t i = 0; i < gp.offending.size(); ++i)
      std::cout << (i ? "," : "") << gp.offending[i] + 1;
    std::cout << "}\n";
  }
  emit(make_report("general-position", problem_json(pf, fn), to_json(gp)), o.json_path);
  return gp.holds ? 0 : 1;
}

DiffOperator parse_operator(const std::string& text, const ProblemFile& pf,
                            const std::size_t dim) {
  DiffOperator op;
  for (const auto& dir : split_list(text, ';')) {
    auto entries = split_list(dir, ',');
    if (entries.size() != dim)
      throw Error("operator direction needs " + std::to_string(dim) + " entries");
    ScalarVector v;
    for (const auto& e : entries) v.push_back(parse_scalar(e, pf.radicand));
    op.directions.push_back(std::move(v));
  }
  if (op.directions.empty()) throw Error("empty operator");
  return op;
}

int run_hyp_check(const CommonOpts& o, const std::string& freeze, const std::string& op_text) {
  ProblemFile pf = load_problem(o);
  Functional fn = build_functional(pf, o);
  const VarSet& vars = fn.sys.vars;

  std::vector<std::string> frozen = split_list(freeze, ',');
  if (frozen.empty()) {
    // Default: freeze everything beyond the first two coordinates.
    for (std::size_t i = 2; i < vars.size(); ++i) frozen.push_back(vars.name(i));
  }

  DiffOperator D;
  if (!op_text.empty()) {
    D = parse_operator(op_text, pf, vars.size());
  } else {
    // Default operator d_u d_v (d_u - d_v) on the first two free coordinates.
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      bool is_frozen = false;
      for (const auto& f : frozen)
        if (vars.name(i) == f) is_frozen = true;
      if (!is_frozen) free.push_back(i);
    }
    if (free.size() != 2)
      throw Error("default operator needs exactly two free coordinates; pass --op");
    ScalarVector du(vars.size(), QuadExt(0)), dv(vars.size(), QuadExt(0)),
        diff(vars.size(), QuadExt(0));
    du[free[0]] = QuadExt(1);
    dv[free[1]] = QuadExt(1);
    diff[free[0]] = QuadExt(1);
    diff[free[1]] = QuadExt(-1);
    D.directions = {du, dv, diff};
  }

  UniformityVerdict v = hyp_check(fn.phase, frozen, D);
  std::cout << "hyp-check with operator " << D.to_string() << ", frozen {";
  for (std::size_t i = 0; i < frozen.size(); ++i) std::cout << (i ? "," : "") << frozen[i];
  std::cout << "}\n" << verdict_line(v) << "\n";
  if (v.op_image) std::cout << "operator image: " << v.op_image->to_string() << "\n";
  emit(make_report("hyp-check", problem_json(pf, fn), to_json(v)), o.json_path);
  return v.positive() ? 0 : 1;
}

int run_diff_phase(const CommonOpts& o, int pivot_1based, std::string direction) {
  ProblemFile pf = load_problem(o);
  Functional fn = build_functional(pf, o);
  const std::size_t n = fn.sys.factor_count();
  if (pivot_1based < 1 || static_cast<std::size_t>(pivot_1based) > n)
    throw Error("pivot out of range 1.." + std::to_string(n));
  const std::size_t pivot = static_cast<std::size_t>(pivot_1based) - 1;
  if (direction.empty()) {
    for (std::size_t i = 0; i < fn.sys.vars.size(); ++i) {
      if (fn.sys.vectors[pivot][i].is_zero()) {
        direction = fn.sys.vars.name(i);
        break;
      }
    }
    if (direction.empty()) direction = fn.sys.vars.name(0);
  }
  ProjectionSystem rest = fn.sys.without(pivot);
  UniformityVerdict v = difference_phase_check(fn.phase, direction, rest, fn.degree_bound);
  std::cout << "difference-phase check, pivot " << pivot + 1 << ", shift direction " << direction
            << "\n"
            << verdict_line(v) << "\n";
  if (v.box_image) std::cout << "wave operator image: " << v.box_image->to_string() << "\n";
  emit(make_report("diff-phase-check", problem_json(pf, fn), to_json(v)), o.json_path);
  return v.positive() ? 0 : 1;
}

int run_strategy(const CommonOpts& o, int max_freeze_opt) {
  ProblemFile pf = load_problem(o);
  Functional fn = build_functional(pf, o);
  const std::size_t m = fn.sys.ambient_dim();
  std::size_t max_freeze = m - 2;
  if (max_freeze_opt >= 0) max_freeze = static_cast<std::size_t>(max_freeze_opt);
  auto certs = enumerate_strategies(fn, max_freeze);
  if (certs.empty()) {
    std::cout << "no certificate found (this is not a proof that decay fails)\n";
  } else {
    for (std::size_t i = 0; i < certs.size(); ++i) {
      const auto& c = certs[i];
      std::cout << i + 1 << ". route=" << c.route;
      if (c.freeze) {
        std::cout << " frozen={";
        for (std::size_t k = 0; k < c.freeze->frozen.size(); ++k)
          std::cout << (k ? "," : "") << c.freeze->frozen[k];
        std::cout << "}";
      }
      if (c.cs) std::cout << " pivot=" << c.cs->pivot + 1 << " direction=" << c.cs->direction;
      std::cout << "\n   norms: " << c.norms_string() << "\n";
    }
  }
  Json arr = Json::array();
  for (const auto& c : certs) arr.push_back(to_json(c));
  emit(make_report("strategy", problem_json(pf, fn),
                   Json{{"certificates", arr}}),
       o.json_path);
  return certs.empty() ? 1 : 0;
}

int run_estimate_decay(const CommonOpts& o, double lmin, double lmax, int steps, double rel_tol,
                       const std::string& csv_path) {
  ProblemFile pf = load_problem(o);
  Functional fn = build_functional(pf, o);
  if (pf.factor_specs.empty())
    throw Error("estimate-decay needs factor_spec lines in the problem file");
  if (pf.factor_specs.size() != fn.sys.factor_count())
    throw Error("factor_spec count does not match factor count");
  if (steps < 6) throw Error("--lambda-steps must be at least 6");
  QuadratureConfig cfg;
  cfg.rel_tol = rel_tol;
  CutoffSpec cutoff = CutoffSpec::bump_product(fn.cutoff_radii);
  DecayFit fit;
  try {
    fit = decay_exponent(fn, pf.factor_specs, cutoff,
                         geometric_grid(lmin, lmax, static_cast<std::size_t>(steps)), cfg);
  } catch (const Error& e) {
    std::cout << "decay estimation failed: " << e.what() << "\n";
    return 1;
  }
  std::cout.precision(6);
  std::cout << "fitted epsilon = " << fit.epsilon << " (fit quality R^2 = " << fit.fit_quality
            << ") over lambda in [" << lmin << ", " << lmax << "]\n";
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) throw Error("cannot write CSV to " + csv_path);
    out << fit.csv();
  } else {
    std::cout << fit.csv();
  }
  emit(make_report("estimate-decay", problem_json(pf, fn), to_json(fit)), o.json_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"oscidecay: decay certificates and numeric decay estimation for "
               "multilinear oscillatory integrals"};
  app.require_subcommand(1);

  CommonOpts common;
  std::string freeze, op_text, direction, csv_path;
  int pivot = 1, max_freeze = -1, steps = 9;
  double lmin = 16, lmax = 256, rel_tol = 1e-4;

  auto* cd = app.add_subcommand("check-degenerate",
                                "decide whether the phase decomposes through the projections");
  add_common(cd, common);
  cd->add_option("--json", common.json_path, "write the JSON report here");

  auto* gp = app.add_subcommand("general-position", "check general position of the projections");
  add_common(gp, common);
  gp->add_option("--json", common.json_path, "write the JSON report here");

  auto* hc = app.add_subcommand("hyp-check",
                                "uniform positivity of an annihilator image over frozen variables");
  add_common(hc, common);
  hc->add_option("--freeze", freeze, "comma-separated frozen variables (default: all but first 2)");
  hc->add_option("--op", op_text,
                 "operator as semicolon-separated directions, e.g. \"1,0,0;0,1,0;1,-1,0\"");
  hc->add_option("--json", common.json_path, "write the JSON report here");

  auto* dp = app.add_subcommand("diff-phase-check",
                                "uniform nondegeneracy of the shifted difference phase");
  add_common(dp, common);
  dp->add_option("--pivot", pivot, "peeled factor index, 1-based (default 1)");
  dp->add_option("--direction", direction, "shift coordinate (default: orthogonal to pivot)");
  dp->add_option("--json", common.json_path, "write the JSON report here");

  auto* st = app.add_subcommand("strategy", "enumerate and rank decay certificates");
  add_common(st, common);
  st->add_option("--max-freeze", max_freeze, "largest frozen-set size (default m-2)");
  st->add_option("--json", common.json_path, "write the JSON report here");

  auto* ed = app.add_subcommand("estimate-decay", "lambda sweep and decay exponent fit");
  add_common(ed, common);
  ed->add_option("--lambda-min", lmin, "smallest lambda (default 16)");
  ed->add_option("--lambda-max", lmax, "largest lambda (default 256)");
  ed->add_option("--lambda-steps", steps, "grid size (default 9)");
  ed->add_option("--rel-tol", rel_tol, "quadrature relative tolerance (default 1e-4)");
  ed->add_option("--csv", csv_path, "write the sweep CSV here instead of stdout");
  ed->add_option("--json", common.json_path, "write the JSON report here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cd->parsed()) return run_check_degenerate(common);
    if (gp->parsed()) return run_general_position(common);
    if (hc->parsed()) return run_hyp_check(common, freeze, op_text);
    if (dp->parsed()) return run_diff_phase(common, pivot, direction);
    if (st->parsed()) return run_strategy(common, max_freeze);
    if (ed->parsed()) return run_estimate_decay(common, lmin, lmax, steps, rel_tol, csv_path);
  } catch (const oscidecay::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
