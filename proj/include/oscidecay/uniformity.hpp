#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oscidecay/nondegeneracy.hpp"

namespace oscidecay {

/// Verdict on "nondegeneracy holds uniformly over the parameter family".
///
/// Core reduction (proved once, used everywhere): let the residual components
/// r_i(t) of the phase against the degenerate span be polynomials in the
/// parameter t. The uniform quantity inf_t sum_i r_i(t)^2 over a closed
/// domain is positive iff the r_i are not all identically zero and have no
/// common real root in the domain. Indeed sum_i r_i(t)^2 is a polynomial; if
/// it is a nonzero constant the infimum equals it, and if it is nonconstant
/// and everywhere positive on the closed domain it tends to +infinity for
/// large |t| (positive even degree), so its infimum over the domain is
/// attained at some point and is therefore positive. Conversely a common real
/// root in the domain makes the infimum zero. The same argument applies to
/// the coefficient family q_alpha of an annihilator image, since positivity
/// of max_alpha |q_alpha(t)| and of sum_alpha q_alpha(t)^2 are equivalent on
/// a fixed finite-dimensional coefficient space.
struct UniformityVerdict {
  enum class Status { Positive, VanishesAt, IdenticallyZero, UndecidedMultiparameter };
  Status status = Status::IdenticallyZero;

  std::vector<MultiPoly> components;  // residual components / q_alpha, in the parameter vars
  std::optional<MultiPoly> component_gcd;  // univariate gcd when the Sturm path ran
  std::string vanish_witness;              // parameter location for VanishesAt
  std::optional<DiffOperator> witness_op;  // annihilator evidence, when used
  std::optional<MultiPoly> op_image;       // Q = D.P
  std::optional<MultiPoly> box_image;      // wave-operator image (difference-phase route)
  std::string note;

  bool positive() const { return status == Status::Positive; }

  std::string status_string() const {
    switch (status) {
      case Status::Positive:
        return "positive";
      case Status::VanishesAt:
        return "vanishes-at";
      case Status::IdenticallyZero:
        return "identically-zero";
      case Status::UndecidedMultiparameter:
        return "undecided-multiparameter";
    }
    return "";
  }
};

namespace detail {

/// Classify a family of nonzero polynomials in the parameter variables:
/// all-constant => positive; one active parameter => gcd + Sturm on the
/// domain; more => undecided.
inline UniformityVerdict classify_parameter_family(std::vector<MultiPoly> components,
                                                   const RootDomain& domain) {
  UniformityVerdict v;
  v.components = std::move(components);
  if (v.components.empty()) {
    v.status = UniformityVerdict::Status::IdenticallyZero;
    return v;
  }
  bool all_const = true;
  std::vector<std::size_t> active;
  std::vector<bool> seen;
  for (const auto& c : v.components) {
    if (seen.empty()) seen.assign(c.vars().size(), false);
    for (std::size_t i : c.active_vars()) {
      if (!seen[i]) {
        seen[i] = true;
        active.push_back(i);
      }
      all_const = false;
    }
  }
  if (all_const) {
    v.status = UniformityVerdict::Status::Positive;
    v.note = "all components constant in the parameters";
    return v;
  }
  if (active.size() > 1) {
    v.status = UniformityVerdict::Status::UndecidedMultiparameter;
    v.note = "nonconstant components in more than one parameter";
    return v;
  }
  MultiPoly g = gcd_univariate(v.components);
  v.component_gcd = g;
  if (g.is_constant()) {
    v.status = UniformityVerdict::Status::Positive;
    v.note = "components have no common root (trivial gcd)";
    return v;
  }
  const long roots = count_real_roots(g, domain);
  if (roots == 0) {
    v.status = UniformityVerdict::Status::Positive;
    v.note = "gcd has no real root in " + domain.to_string();
    return v;
  }
  v.status = UniformityVerdict::Status::VanishesAt;
  const std::string pname = g.vars().name(g.active_vars().at(0));
  if (auto w = find_root_witness(Univariate::from_multipoly(g), domain))
    v.vanish_witness = w->to_string(pname);
  return v;
}

inline std::vector<std::size_t> frozen_indices(const VarSet& vars,
                                               const std::vector<std::string>& frozen) {
  std::vector<std::size_t> idx;
  for (const auto& name : frozen) idx.push_back(vars.require(name));
  return idx;
}

inline std::vector<std::size_t> free_indices(const VarSet& vars,
                                             const std::vector<std::size_t>& frozen) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    bool is_frozen = false;
    for (std::size_t f : frozen)
      if (f == i) is_frozen = true;
    if (!is_frozen) out.push_back(i);
  }
  return out;
}

}  // namespace detail

/// Hypothesis-style check: apply the operator D to P, expand the image in
/// free-variable monomials, and decide positivity of the coefficient family
/// q_alpha over the frozen parameters.
inline UniformityVerdict hyp_check(const MultiPoly& P, const std::vector<std::string>& frozen,
                                   const DiffOperator& D) {
  const VarSet& vars = P.vars();
  auto fro = detail::frozen_indices(vars, frozen);
  for (const auto& u : D.directions) {
    if (u.size() != vars.size()) throw Error("operator direction length mismatch");
    for (std::size_t f : fro)
      if (!u[f].is_zero())
        throw Error("operator direction has a nonzero component on frozen variable " +
                    vars.name(f));
  }
  UniformityVerdict v;
  MultiPoly Q = P;
  for (const auto& u : D.directions) Q = Q.directional_derivative(u);
  v.witness_op = D;
  v.op_image = Q;
  if (Q.is_zero()) {
    v.status = UniformityVerdict::Status::IdenticallyZero;
    return v;
  }
  auto fre = detail::free_indices(vars, fro);
  std::vector<MultiPoly> q_alpha;
  for (auto& [alpha, coeff] : Q.collect_by(fre)) q_alpha.push_back(coeff);
  UniformityVerdict cls = detail::classify_parameter_family(std::move(q_alpha),
                                                            RootDomain::all_reals());
  cls.witness_op = v.witness_op;
  cls.op_image = v.op_image;
  return cls;
}

/// Exact residual route: expand P in powers of the frozen variables, project
/// each coefficient vector onto the orthogonal complement of the degenerate
/// span of the reduced system, and classify the resulting residual-component
/// polynomials of the parameters. Complete for zero or one parameter.
inline UniformityVerdict residual_uniformity(const MultiPoly& P,
                                             const std::vector<std::string>& frozen,
                                             const ProjectionSystem& reduced_sys, unsigned d,
                                             const RootDomain& domain) {
  const VarSet& vars = P.vars();
  auto fro = detail::frozen_indices(vars, frozen);

  // Parameter-only variable set for the residual components.
  std::vector<std::string> frozen_names;
  for (std::size_t f : fro) frozen_names.push_back(vars.name(f));
  VarSet frozen_vars(frozen_names);

  DegenerateSpan span(reduced_sys, d);
  auto orth = orthogonalize(span.columns);

  std::vector<std::pair<Exponents, ScalarVector>> residuals;
  for (auto& [beta, coeff] : P.collect_by(fro)) {
    MultiPoly reduced = coeff.with_vars(reduced_sys.vars);
    ScalarVector r = residual_against(span.basis.coefficient_vector(reduced), orth);
    residuals.emplace_back(beta, std::move(r));
  }

  std::vector<MultiPoly> components;
  const std::size_t space = span.basis.size();
  for (std::size_t i = 0; i < space; ++i) {
    MultiPoly comp(frozen_vars);
    for (const auto& [beta, r] : residuals) comp.add_term(beta, r[i]);
    if (!comp.is_zero()) components.push_back(std::move(comp));
  }
  return detail::classify_parameter_family(std::move(components), domain);
}

/// Spec'd single-parameter entry point.
inline UniformityVerdict uniform_residual_positive(const MultiPoly& P, const std::string& param,
                                                   const ProjectionSystem& reduced_sys, unsigned d,
                                                   const RootDomain& domain) {
  return residual_uniformity(P, {param}, reduced_sys, d, domain);
}

/// Second-order operator sum of d^2/dx_i^2 with a minus sign on the last of
/// the three ambient coordinates. Annihilates every p(v . x) when all system
/// vectors satisfy v1^2 + v2^2 - v3^2 = 0, which is exactly the light-cone
/// situation; used as corroborating evidence in the difference-phase route.
inline std::optional<MultiPoly> wave_operator_image(const MultiPoly& p, const VarSet& ambient,
                                                    const ProjectionSystem& sys) {
  if (ambient.size() != 3) return std::nullopt;
  for (const auto& v : sys.vectors) {
    QuadExt iso = v[0] * v[0] + v[1] * v[1] - v[2] * v[2];
    if (!iso.is_zero()) return std::nullopt;
  }
  MultiPoly out(p.vars());
  const int signs[3] = {1, 1, -1};
  for (std::size_t i = 0; i < 3; ++i) {
    std::size_t vi = p.vars().require(ambient.name(i));
    MultiPoly second = p.derivative(vi).derivative(vi);
    out += signs[i] == 1 ? second : -second;
  }
  return out;
}

/// Pick a shift-parameter name that does not collide with existing variables.
inline std::string fresh_param_name(const VarSet& vars, std::string base = "zeta") {
  while (vars.contains(base)) base += "_";
  return base;
}

/// Difference-phase check: is P(x) - P(x + zeta e_dir) uniformly nondegenerate
/// with respect to the remaining projections for all |zeta| >= 1? A positive
/// verdict licenses the Cauchy-Schwarz route with the split at
/// rho = |lambda|^{-1/2}.
inline UniformityVerdict difference_phase_check(const MultiPoly& P, const std::string& direction,
                                                const ProjectionSystem& sys_minus_pivot,
                                                unsigned d) {
  if (!P.vars().contains(direction)) throw Error("unknown shift direction: " + direction);
  const std::string param = fresh_param_name(P.vars());
  MultiPoly delta = shift_difference(P, direction, param);
  UniformityVerdict v = residual_uniformity(delta, {param}, sys_minus_pivot, d,
                                            RootDomain::complement(Rational(1)));
  if (auto box = wave_operator_image(delta, P.vars(), sys_minus_pivot)) v.box_image = *box;
  if (v.positive()) {
    v.note += (v.note.empty() ? "" : "; ");
    v.note += "split at rho = |lambda|^(-1/2)";
  }
  return v;
}

/// Uniformity decision used by the freezing route: the exact residual test,
/// with an annihilator-pool fallback for multi-parameter families whose image
/// coefficients are constant.
inline UniformityVerdict reduced_phase_uniformity(const MultiPoly& phase,
                                                  const std::vector<std::string>& frozen,
                                                  const ProjectionSystem& reduced_sys,
                                                  unsigned d) {
  UniformityVerdict v = residual_uniformity(phase, frozen, reduced_sys, d,
                                            RootDomain::all_reals());
  if (v.status != UniformityVerdict::Status::UndecidedMultiparameter) return v;

  auto fro = detail::frozen_indices(phase.vars(), frozen);
  auto fre = detail::free_indices(phase.vars(), fro);
  for (const auto& op : default_witness_pool(reduced_sys)) {
    // Embed reduced-space directions into the ambient variables (zero on the
    // frozen block) and test the hypothesis-style constant-coefficient rule.
    std::vector<ScalarVector> embedded;
    for (const auto& u : op.directions) {
      ScalarVector full(phase.vars().size(), QuadExt(0));
      for (std::size_t i = 0; i < reduced_sys.vars.size(); ++i)
        full[phase.vars().require(reduced_sys.vars.name(i))] = u[i];
      embedded.push_back(std::move(full));
    }
    MultiPoly Q = phase;
    for (const auto& u : embedded) Q = Q.directional_derivative(u);
    if (Q.is_zero()) continue;
    std::vector<MultiPoly> q_alpha;
    bool all_const = true;
    for (auto& [alpha, coeff] : Q.collect_by(fre)) {
      if (!coeff.active_vars().empty()) all_const = false;
      q_alpha.push_back(coeff);
    }
    if (!all_const) continue;
    UniformityVerdict w;
    w.status = UniformityVerdict::Status::Positive;
    w.components = std::move(q_alpha);
    w.witness_op = op;
    w.op_image = Q;
    w.note = "annihilator image constant in the frozen variables";
    return w;
  }
  return v;
}

}  // namespace oscidecay
