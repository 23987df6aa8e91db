#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "oscidecay/uniformity.hpp"

namespace oscidecay {

enum class Norm { L2, Linfty };

inline std::string norm_string(Norm n) { return n == Norm::L2 ? "L2" : "Linf"; }

/// A multilinear oscillatory functional: projection system, polynomial phase,
/// degree bound for all span computations, and the cutoff bump radii used by
/// the numeric evaluator.
struct Functional {
  ProjectionSystem sys;
  MultiPoly phase;
  unsigned degree_bound;
  std::vector<double> cutoff_radii;

  Functional(ProjectionSystem s, MultiPoly p, unsigned d, std::vector<double> radii = {})
      : sys(std::move(s)), phase(std::move(p)), degree_bound(d), cutoff_radii(std::move(radii)) {
    if (phase.vars() != sys.vars)
      throw Error("phase and projection system use different variables");
    if (degree_bound < phase.degree())
      throw Error("degree bound below the phase degree");
    if (cutoff_radii.empty()) cutoff_radii.assign(sys.ambient_dim(), 1.0);
    if (cutoff_radii.size() != sys.ambient_dim())
      throw Error("cutoff radius count does not match ambient dimension");
  }
};

inline bool is_parallel(const ScalarVector& a, const ScalarVector& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = i + 1; k < a.size(); ++k)
      if (!(a[i] * b[k] - a[k] * b[i]).is_zero()) return false;
  return true;
}

/// Result of freezing a coordinate subset S: factor grouping by parallel
/// free parts, the reduced projection system, and the three admissibility
/// checks (factor count, general position of representatives, uniform
/// nondegeneracy of the reduced phase over the frozen parameters).
struct FreezeAnalysis {
  std::vector<std::string> frozen;
  std::size_t reduced_dim = 0;
  VarSet free_vars;
  std::vector<std::vector<std::size_t>> groups;  // 0-based factor indices, each nonempty
  std::vector<std::size_t> passthrough;          // factors with zero free part
  std::vector<ScalarVector> representatives;     // free part of each group's first member

  struct CountCheck {
    std::size_t n_prime = 0, bound = 0;
    bool pass = false;
  } count;
  struct GpCheck {
    bool pass = true;
    std::vector<std::size_t> offending;
  } gp;
  UniformityVerdict uniform;

  bool accepted = false;
  std::vector<std::string> reasons;
};

inline FreezeAnalysis analyze_freezing(const Functional& fn,
                                       const std::vector<std::string>& frozen) {
  const VarSet& vars = fn.sys.vars;
  const std::size_t m = vars.size();
  if (frozen.empty()) throw Error("freeze set must be nonempty");
  std::vector<std::size_t> fro;
  for (const auto& name : frozen) {
    std::size_t i = vars.require(name);
    for (std::size_t f : fro)
      if (f == i) throw Error("duplicate frozen variable: " + name);
    fro.push_back(i);
  }
  if (frozen.size() > m - 2)
    throw Error("freezing " + std::to_string(frozen.size()) +
                " of " + std::to_string(m) + " coordinates leaves fewer than 2 free");

  FreezeAnalysis fa;
  fa.frozen = frozen;
  std::vector<std::size_t> fre = detail::free_indices(vars, fro);
  fa.reduced_dim = fre.size();
  std::vector<std::string> free_names;
  for (std::size_t i : fre) free_names.push_back(vars.name(i));
  fa.free_vars = VarSet(free_names);

  for (std::size_t j = 0; j < fn.sys.factor_count(); ++j) {
    ScalarVector part;
    for (std::size_t i : fre) part.push_back(fn.sys.vectors[j][i]);
    if (is_zero_vector(part)) {
      fa.passthrough.push_back(j);
      continue;
    }
    bool placed = false;
    for (std::size_t g = 0; g < fa.groups.size(); ++g) {
      if (is_parallel(part, fa.representatives[g])) {
        fa.groups[g].push_back(j);
        placed = true;
        break;
      }
    }
    if (!placed) {
      fa.groups.push_back({j});
      fa.representatives.push_back(std::move(part));
    }
  }

  fa.count.n_prime = fa.groups.size();
  fa.count.bound = 2 * fa.reduced_dim;
  fa.count.pass = fa.count.n_prime < fa.count.bound;
  if (!fa.count.pass)
    fa.reasons.push_back("factor count: " + std::to_string(fa.count.n_prime) + " !< " +
                         std::to_string(fa.count.bound));

  // Re-verify pairwise independence of the representatives (always true for
  // a freshly built grouping; certificate validation depends on the re-check).
  for (std::size_t a = 0; a < fa.representatives.size() && fa.gp.pass; ++a)
    for (std::size_t b = a + 1; b < fa.representatives.size(); ++b)
      if (is_parallel(fa.representatives[a], fa.representatives[b])) {
        fa.gp.pass = false;
        fa.gp.offending = {fa.groups[a][0], fa.groups[b][0]};
        fa.reasons.push_back("representatives of groups are not pairwise independent");
        break;
      }

  ProjectionSystem reduced(fa.free_vars, fa.representatives);
  fa.uniform = reduced_phase_uniformity(fn.phase, frozen, reduced, fn.degree_bound);
  if (!fa.uniform.positive()) {
    switch (fa.uniform.status) {
      case UniformityVerdict::Status::IdenticallyZero:
        fa.reasons.push_back(
            "uniformity identically-zero: reduced phase degenerate for every frozen value");
        break;
      case UniformityVerdict::Status::VanishesAt:
        fa.reasons.push_back("uniformity vanishes-at " + fa.uniform.vanish_witness);
        break;
      default:
        fa.reasons.push_back("uniformity undecided-multiparameter");
        break;
    }
  }

  fa.accepted = fa.count.pass && fa.gp.pass && fa.uniform.positive();
  return fa;
}

/// Evidence carried by a Cauchy-Schwarz (difference-phase) certificate.
struct CsEvidence {
  std::size_t pivot = 0;  // 0-based factor index
  std::string direction;
  std::optional<std::size_t> second;  // partner factor that keeps its L2 norm
  std::size_t inner_n = 0, inner_bound = 0;
  GeneralPositionResult gp;
  UniformityVerdict verdict;
};

struct AnnihilatorEvidence {
  DiffOperator op;
  MultiPoly image;
  std::string conditional;
};

struct DecayCertificate {
  std::string route;  // "direct-L2" | "grouped" | "cauchy-schwarz" | "annihilator-Linfty"
  std::vector<Norm> norms;
  std::optional<ClttResult> direct;
  std::optional<FreezeAnalysis> freeze;
  std::optional<CsEvidence> cs;
  std::optional<AnnihilatorEvidence> annihilator;

  std::size_t l2_count() const {
    std::size_t c = 0;
    for (Norm n : norms)
      if (n == Norm::L2) ++c;
    return c;
  }
  std::size_t frozen_count() const { return freeze ? freeze->frozen.size() : 0; }

  std::string norms_string() const {
    std::string s;
    for (std::size_t i = 0; i < norms.size(); ++i) {
      if (i) s += " ";
      s += "|f" + std::to_string(i + 1) + "|_" + (norms[i] == Norm::L2 ? "2" : "inf");
    }
    return s;
  }
};

/// Norm assignment of a grouped certificate: within every group the lowest
/// factor index keeps L2, everything else (including zero-free-part
/// passthrough factors) is L-infinity.
inline std::vector<Norm> grouped_norms(const FreezeAnalysis& fa, std::size_t n) {
  std::vector<Norm> norms(n, Norm::Linfty);
  for (const auto& g : fa.groups) {
    std::size_t lead = *std::min_element(g.begin(), g.end());
    norms[lead] = Norm::L2;
  }
  return norms;
}

struct CsRejection {
  std::string reason;
  std::optional<UniformityVerdict> verdict;
};

using CsOutcome = std::variant<DecayCertificate, CsRejection>;

inline CsOutcome cauchy_schwarz_certificate(const Functional& fn, std::size_t pivot,
                                            const std::string& direction) {
  const std::size_t n = fn.sys.factor_count();
  if (pivot >= n) throw Error("pivot factor index out of range");
  const std::size_t dir = fn.sys.vars.require(direction);
  if (!fn.sys.vectors[pivot][dir].is_zero())
    return CsRejection{"shift direction " + direction + " is not orthogonal to the pivot vector",
                       std::nullopt};

  CsEvidence ev;
  ev.pivot = pivot;
  ev.direction = direction;
  ev.inner_n = n - 1;
  ev.inner_bound = 2 * fn.sys.ambient_dim();
  if (!(ev.inner_n < ev.inner_bound))
    return CsRejection{"inner factor count: " + std::to_string(ev.inner_n) + " !< " +
                           std::to_string(ev.inner_bound),
                       std::nullopt};

  ProjectionSystem rest = fn.sys.without(pivot);
  ev.gp = general_position(rest);
  if (!ev.gp.holds)
    return CsRejection{"remaining projections fail general position", std::nullopt};

  ev.verdict = difference_phase_check(fn.phase, direction, rest, fn.degree_bound);
  if (!ev.verdict.positive())
    return CsRejection{"difference phase " + ev.verdict.status_string(), ev.verdict};

  for (std::size_t j = 0; j < n; ++j) {
    if (j == pivot) continue;
    if (fn.sys.vectors[j][dir].is_zero()) {
      ev.second = j;
      break;
    }
  }

  DecayCertificate cert;
  cert.route = "cauchy-schwarz";
  cert.norms.assign(n, Norm::Linfty);
  cert.norms[pivot] = Norm::L2;
  if (ev.second) cert.norms[*ev.second] = Norm::L2;
  cert.cs = std::move(ev);
  return cert;
}

static constexpr const char* kAnnihilatorConditionalNote =
    "conditional: relies on the simple-nondegeneracy hypothesis of the external "
    "L-infinity decay theorem, which this tool does not verify";

/// Enumerate every certificate route and rank the results: more L2 norms
/// first, then fewer frozen variables, then route name; the enumeration order
/// itself is deterministic, so full ties keep a stable order.
inline std::vector<DecayCertificate> enumerate_strategies(const Functional& fn,
                                                          std::size_t max_freeze) {
  const std::size_t n = fn.sys.factor_count();
  const std::size_t m = fn.sys.ambient_dim();
  if (max_freeze > m - 2)
    throw Error("max_freeze exceeds m - 2 = " + std::to_string(m - 2));

  std::vector<DecayCertificate> out;

  ClttResult direct = cltt_l2_predicate(fn.phase, fn.sys, fn.degree_bound);
  if (direct.accepted) {
    DecayCertificate cert;
    cert.route = "direct-L2";
    cert.norms.assign(n, Norm::L2);
    cert.direct = std::move(direct);
    out.push_back(std::move(cert));
  }

  // Coordinate subsets by size, then lexicographically by index.
  for (std::size_t size = 1; size <= max_freeze; ++size) {
    std::vector<std::size_t> idx(size);
    for (std::size_t i = 0; i < size; ++i) idx[i] = i;
    for (;;) {
      std::vector<std::string> subset;
      for (std::size_t i : idx) subset.push_back(fn.sys.vars.name(i));
      FreezeAnalysis fa = analyze_freezing(fn, subset);
      if (fa.accepted) {
        DecayCertificate cert;
        cert.route = "grouped";
        cert.norms = grouped_norms(fa, n);
        cert.freeze = std::move(fa);
        out.push_back(std::move(cert));
      }
      std::size_t i = size;
      bool done = true;
      while (i-- > 0) {
        if (idx[i] != i + m - size) {
          ++idx[i];
          for (std::size_t k = i + 1; k < size; ++k) idx[k] = idx[k - 1] + 1;
          done = false;
          break;
        }
      }
      if (done) break;
    }
  }

  for (std::size_t pivot = 0; pivot < n; ++pivot) {
    for (std::size_t dir = 0; dir < m; ++dir) {
      if (!fn.sys.vectors[pivot][dir].is_zero()) continue;
      CsOutcome o = cauchy_schwarz_certificate(fn, pivot, fn.sys.vars.name(dir));
      if (auto* cert = std::get_if<DecayCertificate>(&o)) out.push_back(std::move(*cert));
    }
  }

  if (auto w = annihilator_witness(fn.phase, fn.sys, default_witness_pool(fn.sys))) {
    DecayCertificate cert;
    cert.route = "annihilator-Linfty";
    cert.norms.assign(n, Norm::Linfty);
    cert.annihilator = AnnihilatorEvidence{w->op, w->image, kAnnihilatorConditionalNote};
    out.push_back(std::move(cert));
  }

  std::stable_sort(out.begin(), out.end(),
                   [](const DecayCertificate& a, const DecayCertificate& b) {
                     if (a.l2_count() != b.l2_count()) return a.l2_count() > b.l2_count();
                     if (a.frozen_count() != b.frozen_count())
                       return a.frozen_count() < b.frozen_count();
                     return a.route < b.route;
                   });
  return out;
}

struct ValidationResult {
  bool pass = true;
  std::string reason;
};

/// Re-derive every check recorded in a certificate from scratch.
inline ValidationResult validate_certificate(const DecayCertificate& cert,
                                             const Functional& fn) {
  const std::size_t n = fn.sys.factor_count();
  auto fail = [](std::string why) { return ValidationResult{false, std::move(why)}; };
  if (cert.norms.size() != n) return fail("norm list length mismatch");

  if (cert.route == "direct-L2") {
    ClttResult r = cltt_l2_predicate(fn.phase, fn.sys, fn.degree_bound);
    if (!r.accepted) return fail("direct route: " + r.rejection);
    for (Norm nn : cert.norms)
      if (nn != Norm::L2) return fail("direct route must assign L2 to every factor");
    return {};
  }

  if (cert.route == "grouped") {
    if (!cert.freeze) return fail("grouped certificate without freeze analysis");
    FreezeAnalysis fa = analyze_freezing(fn, cert.freeze->frozen);
    if (!fa.accepted) {
      std::string why = "grouped route checks fail:";
      for (const auto& r : fa.reasons) why += " " + r;
      return fail(why);
    }
    if (fa.groups != cert.freeze->groups || fa.passthrough != cert.freeze->passthrough)
      return fail("recorded grouping does not match recomputation");
    std::vector<Norm> expected = grouped_norms(fa, n);
    for (const auto& g : fa.groups) {
      std::size_t l2_in_group = 0;
      for (std::size_t j : g)
        if (cert.norms[j] == Norm::L2) ++l2_in_group;
      if (l2_in_group != 1) return fail("group norm rule: exactly one L2 per group required");
    }
    if (cert.norms != expected) return fail("group norm rule: L2 must sit on the lowest index");
    return {};
  }

  if (cert.route == "cauchy-schwarz") {
    if (!cert.cs) return fail("cauchy-schwarz certificate without evidence");
    CsOutcome o = cauchy_schwarz_certificate(fn, cert.cs->pivot, cert.cs->direction);
    auto* fresh = std::get_if<DecayCertificate>(&o);
    if (!fresh) return fail("cauchy-schwarz route: " + std::get<CsRejection>(o).reason);
    if (fresh->norms != cert.norms) return fail("cauchy-schwarz norm assignment mismatch");
    return {};
  }

  if (cert.route == "annihilator-Linfty") {
    if (!cert.annihilator) return fail("annihilator certificate without evidence");
    if (auto gap = annihilation_gap(cert.annihilator->op, fn.sys))
      return fail("operator does not annihilate projection #" + std::to_string(*gap + 1));
    MultiPoly image = cert.annihilator->op.apply(fn.phase, fn.sys.vars);
    if (image.is_zero()) return fail("recorded operator annihilates the phase");
    if (image != cert.annihilator->image) return fail("recorded operator image mismatch");
    for (Norm nn : cert.norms)
      if (nn != Norm::Linfty) return fail("annihilator route must assign L-infinity norms");
    return {};
  }

  return fail("unknown route: " + cert.route);
}

}  // namespace oscidecay
