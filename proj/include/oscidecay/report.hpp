#pragma once

#include <json.hpp>

#include <complex>
#include <string>

#include "oscidecay/problem.hpp"

namespace oscidecay {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "oscidecay-report/1";

/// Exact scalars serialize as {rat, irr, m} triples with string rationals;
/// they are never rendered as floats in the machine block.
inline Json to_json(const QuadExt& s) {
  return Json{{"rat", s.rat().to_string()}, {"irr", s.irr().to_string()},
              {"m", s.radicand()}};
}

inline Json to_json(const ScalarVector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

/// Polynomials serialize as their canonical grammar string (exact, re-parseable).
inline Json to_json(const MultiPoly& p) { return Json(p.to_string()); }

inline Json to_json(const Univariate& p, const std::string& var = "t") {
  VarSet vars({var});
  return Json(p.to_multipoly(vars, var).to_string());
}

inline Json to_json(const DiffOperator& op) {
  Json dirs = Json::array();
  for (const auto& u : op.directions) dirs.push_back(to_json(u));
  return Json{{"directions", dirs}, {"display", op.to_string()}};
}

inline Json to_json(const GeneralPositionResult& gp) {
  Json j{{"holds", gp.holds}};
  if (!gp.holds) {
    Json off = Json::array();
    for (std::size_t i : gp.offending) off.push_back(i + 1);
    j["offending_factors"] = off;
  }
  return j;
}

inline Json to_json(const DegeneracyVerdict& v) {
  Json j{{"degenerate", v.degenerate}};
  if (v.degenerate) {
    Json ps = Json::array();
    for (const auto& p : v.decomposition) ps.push_back(to_json(p));
    j["decomposition"] = ps;
  } else {
    j["distance_sq"] = to_json(v.distance_sq);
  }
  return j;
}

inline Json to_json(const UniformityVerdict& v) {
  Json j{{"status", v.status_string()}};
  Json comps = Json::array();
  for (const auto& c : v.components) comps.push_back(to_json(c));
  j["components"] = comps;
  if (v.component_gcd) j["gcd"] = to_json(*v.component_gcd);
  if (!v.vanish_witness.empty()) j["vanishes_at"] = v.vanish_witness;
  if (v.witness_op) j["operator"] = to_json(*v.witness_op);
  if (v.op_image) j["operator_image"] = to_json(*v.op_image);
  if (v.box_image) j["wave_operator_image"] = to_json(*v.box_image);
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

inline Json to_json(const FreezeAnalysis& fa) {
  Json j;
  j["frozen"] = fa.frozen;
  j["reduced_dim"] = fa.reduced_dim;
  Json groups = Json::array();
  for (const auto& g : fa.groups) {
    Json gg = Json::array();
    for (std::size_t i : g) gg.push_back(i + 1);
    groups.push_back(gg);
  }
  j["groups"] = groups;
  Json pass = Json::array();
  for (std::size_t i : fa.passthrough) pass.push_back(i + 1);
  j["passthrough"] = pass;
  Json reps = Json::array();
  for (const auto& r : fa.representatives) reps.push_back(to_json(r));
  j["representatives"] = reps;
  j["checks"] = Json{{"count", Json{{"n_prime", fa.count.n_prime},
                                    {"bound", fa.count.bound},
                                    {"pass", fa.count.pass}}},
                     {"general_position", Json{{"pass", fa.gp.pass}}},
                     {"uniformity", to_json(fa.uniform)}};
  j["accepted"] = fa.accepted;
  if (!fa.reasons.empty()) j["reasons"] = fa.reasons;
  return j;
}

inline Json to_json(const ClttResult& r) {
  Json j{{"accepted", r.accepted}, {"n", r.n}, {"m", r.m}};
  if (!r.rejection.empty()) j["rejection"] = r.rejection;
  if (r.gp) j["general_position"] = to_json(*r.gp);
  if (r.verdict) j["degeneracy"] = to_json(*r.verdict);
  return j;
}

inline Json to_json(const CsEvidence& ev) {
  Json j;
  j["pivot"] = ev.pivot + 1;
  j["direction"] = ev.direction;
  if (ev.second) j["l2_partner"] = *ev.second + 1;
  j["inner_count"] = Json{{"n", ev.inner_n}, {"bound", ev.inner_bound}};
  j["general_position"] = to_json(ev.gp);
  j["difference_phase"] = to_json(ev.verdict);
  return j;
}

inline Json to_json(const DecayCertificate& cert) {
  Json j;
  j["route"] = cert.route;
  Json norms = Json::array();
  for (Norm n : cert.norms) norms.push_back(norm_string(n));
  j["norms"] = norms;
  j["l2_count"] = cert.l2_count();
  if (cert.direct) j["direct"] = to_json(*cert.direct);
  if (cert.freeze) j["freezing"] = to_json(*cert.freeze);
  if (cert.cs) j["cauchy_schwarz"] = to_json(*cert.cs);
  if (cert.annihilator) {
    j["annihilator"] = Json{{"operator", to_json(cert.annihilator->op)},
                            {"image", to_json(cert.annihilator->image)},
                            {"conditional", cert.annihilator->conditional}};
  }
  return j;
}

inline Json to_json(const DecayFit& fit) {
  Json j;
  j["lambdas"] = fit.lambdas;
  Json vals = Json::array();
  for (const auto& v : fit.values) vals.push_back(Json{{"re", v.real()}, {"im", v.imag()}});
  j["values"] = vals;
  j["magnitudes"] = fit.magnitudes;
  j["envelope"] = fit.envelope;
  j["epsilon"] = fit.epsilon;
  j["fit_quality"] = fit.fit_quality;
  return j;
}

inline Json problem_json(const ProblemFile& pf, const Functional& fn) {
  Json j;
  j["variables"] = pf.variables;
  j["radicand"] = pf.radicand;
  j["phase"] = fn.phase.to_string();
  j["degree_bound"] = fn.degree_bound;
  Json factors = Json::array();
  for (const auto& v : fn.sys.vectors) factors.push_back(to_json(v));
  j["factors"] = factors;
  return j;
}

/// Machine block of a report: schema header, command, problem echo, result.
inline Json make_report(const std::string& command, Json problem, Json result) {
  Json j;
  j["schema"] = kReportSchema;
  j["command"] = command;
  j["problem"] = std::move(problem);
  j["result"] = std::move(result);
  return j;
}

}  // namespace oscidecay
