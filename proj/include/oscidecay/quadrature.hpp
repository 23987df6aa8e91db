#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oscidecay/strategy.hpp"

namespace oscidecay {

/// Concrete factor function used for numerical evaluation. All kinds are
/// bounded on the whole line.
struct FactorSpec {
  enum class Kind { Gaussian, TrigPoly, One };
  Kind kind = Kind::One;
  double center = 0.0, width = 1.0;   // gaussian
  std::vector<double> coeffs;         // trig polynomial c0 + sum_k c_k cos(k t)

  static FactorSpec gaussian(double center, double width) {
    if (!(width > 0)) throw Error("gaussian width must be positive");
    FactorSpec f;
    f.kind = Kind::Gaussian;
    f.center = center;
    f.width = width;
    return f;
  }
  static FactorSpec trig(std::vector<double> coeffs) {
    FactorSpec f;
    f.kind = Kind::TrigPoly;
    f.coeffs = std::move(coeffs);
    return f;
  }
  static FactorSpec one() { return FactorSpec{}; }

  double eval(double t) const {
    switch (kind) {
      case Kind::Gaussian: {
        const double u = (t - center) / width;
        return std::exp(-u * u);
      }
      case Kind::TrigPoly: {
        double s = 0;
        for (std::size_t k = 0; k < coeffs.size(); ++k)
          s += coeffs[k] * (k == 0 ? 1.0 : std::cos(static_cast<double>(k) * t));
        return s;
      }
      case Kind::One:
        return 1.0;
    }
    return 1.0;
  }

  std::string to_string() const {
    switch (kind) {
      case Kind::Gaussian: {
        std::ostringstream os;
        os << "gaussian " << center << " " << width;
        return os.str();
      }
      case Kind::TrigPoly: {
        std::ostringstream os;
        os << "trig";
        for (double c : coeffs) os << " " << c;
        return os.str();
      }
      case Kind::One:
        return "one";
    }
    return "one";
  }
};

/// Smooth compactly supported bump: exp(1 - 1/(1 - t^2)) inside |t| < 1.
inline double bump(double t) {
  if (!(std::abs(t) < 1.0)) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

/// Product-of-bumps cutoff with one radius per coordinate.
struct CutoffSpec {
  std::vector<double> radii;

  static CutoffSpec bump_product(std::vector<double> r) {
    for (double x : r)
      if (!(x > 0)) throw Error("cutoff radii must be positive");
    return CutoffSpec{std::move(r)};
  }
};

struct QuadratureConfig {
  double rel_tol = 1e-4;
  int max_refinements = 12;
  long long max_points = 1LL << 27;
  int nodes_per_panel = 10;
  unsigned threads = 0;  // 0 = hardware concurrency
};

/// Error carrying the last two refinement iterates.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& msg, std::complex<double> prev, std::complex<double> last)
      : Error(msg), prev_(prev), last_(last) {}
  std::complex<double> previous_iterate() const { return prev_; }
  std::complex<double> last_iterate() const { return last_; }

 private:
  std::complex<double> prev_, last_;
};

namespace detail {

/// Nodes and weights of n-point Gauss-Legendre on [-1, 1] by Newton iteration
/// on the Legendre recurrence.
inline void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const double pi = 3.14159265358979323846;
  for (int k = 0; k < (n + 1) / 2; ++k) {
    double x = std::cos(pi * (k + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int j = 2; j <= n; ++j) {
      double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    nodes[k] = -x;
    nodes[n - 1 - k] = x;
    weights[k] = weights[n - 1 - k] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

/// Fixed-shape pairwise (tree) summation; the reduction order depends only on
/// the slot count, so results are reproducible and worker-independent.
inline std::complex<double> pairwise_sum(std::vector<std::complex<double>>& v) {
  if (v.empty()) return {0.0, 0.0};
  std::size_t n = v.size();
  while (n > 1) {
    std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i + half < n; ++i) v[i] += v[i + half];
    n = half;
  }
  return v[0];
}

struct CompiledTerm {
  std::vector<unsigned> exps;
  double coeff;
};

inline std::vector<CompiledTerm> compile_poly(const MultiPoly& p) {
  std::vector<CompiledTerm> out;
  for (const auto& [e, c] : p.terms()) out.push_back({e, c.to_double()});
  return out;
}

}  // namespace detail

/// Everything the tensor-product evaluator needs: compiled phase, factor
/// functions with their projection directions, and the cutoff radii giving
/// the integration box.
struct OscillatoryIntegrand {
  std::size_t dim = 0;
  std::vector<detail::CompiledTerm> phase_terms;
  std::vector<std::vector<detail::CompiledTerm>> gradient_terms;  // one per coordinate
  std::vector<unsigned> max_degree;                               // per coordinate
  std::vector<std::pair<std::vector<double>, FactorSpec>> factors;
  std::vector<double> radii;

  OscillatoryIntegrand(const MultiPoly& phase,
                       std::vector<std::pair<std::vector<double>, FactorSpec>> factor_list,
                       std::vector<double> box_radii)
      : dim(phase.vars().size()),
        phase_terms(detail::compile_poly(phase)),
        factors(std::move(factor_list)),
        radii(std::move(box_radii)) {
    if (radii.size() != dim) throw Error("cutoff radius count does not match dimension");
    for (const auto& [v, spec] : factors)
      if (v.size() != dim) throw Error("factor direction length mismatch");
    max_degree.assign(dim, 0);
    for (std::size_t i = 0; i < dim; ++i) {
      max_degree[i] = phase.degree_in(i);
      gradient_terms.push_back(detail::compile_poly(phase.derivative(i)));
    }
  }
};

/// Build the numeric integrand of a functional with concrete factor choices.
inline OscillatoryIntegrand make_integrand(const Functional& fn,
                                           const std::vector<FactorSpec>& specs,
                                           const CutoffSpec& cutoff) {
  if (specs.size() != fn.sys.factor_count())
    throw Error("factor spec count does not match projection count");
  if (cutoff.radii.size() != fn.sys.ambient_dim())
    throw Error("cutoff radius count does not match ambient dimension");
  std::vector<std::pair<std::vector<double>, FactorSpec>> fs;
  for (std::size_t j = 0; j < specs.size(); ++j) {
    std::vector<double> v;
    for (const auto& x : fn.sys.vectors[j]) v.push_back(x.to_double());
    fs.emplace_back(std::move(v), specs[j]);
  }
  return OscillatoryIntegrand(fn.phase, std::move(fs), cutoff.radii);
}

/// Composite tensor-product Gauss-Legendre with the given per-coordinate
/// panel counts. Panel values land in fixed slots and are tree-summed.
inline std::complex<double> evaluate_fixed(const OscillatoryIntegrand& f, double lambda,
                                           const std::vector<long long>& panels,
                                           const QuadratureConfig& cfg = {}) {
  const std::size_t dim = f.dim;
  if (panels.size() != dim) throw Error("panel count list length mismatch");
  const int order = cfg.nodes_per_panel;
  std::vector<double> nodes, weights;
  detail::gauss_legendre(order, nodes, weights);

  // Per-coordinate grids: all panel*order abscissas with weights, plus power
  // tables for the phase terms and tabulated one-dimensional bump values.
  std::vector<std::vector<double>> xs(dim), ws(dim), bumps(dim);
  std::vector<std::vector<double>> pows(dim);  // [i][point * (deg+1) + k] = x^k
  long long total_panels = 1;
  for (std::size_t i = 0; i < dim; ++i) {
    const long long pi = panels[i];
    total_panels *= pi;
    const double lo = -f.radii[i];
    const double h = 2.0 * f.radii[i] / static_cast<double>(pi);
    xs[i].resize(static_cast<std::size_t>(pi) * order);
    ws[i].resize(xs[i].size());
    bumps[i].resize(xs[i].size());
    const unsigned degp1 = f.max_degree[i] + 1;
    pows[i].resize(xs[i].size() * degp1);
    for (long long p = 0; p < pi; ++p) {
      const double a = lo + h * static_cast<double>(p);
      for (int q = 0; q < order; ++q) {
        const std::size_t idx = static_cast<std::size_t>(p) * order + q;
        const double x = a + 0.5 * h * (nodes[q] + 1.0);
        xs[i][idx] = x;
        ws[i][idx] = 0.5 * h * weights[q];
        bumps[i][idx] = bump(x / f.radii[i]);
        double pk = 1.0;
        for (unsigned k = 0; k < degp1; ++k) {
          pows[i][idx * degp1 + k] = pk;
          pk *= x;
        }
      }
    }
  }

  std::vector<std::complex<double>> panel_sums(static_cast<std::size_t>(total_panels));

  constexpr std::size_t kMaxDim = 8;
  if (dim > kMaxDim) throw Error("dimension above the supported limit");

  auto eval_panel = [&](long long flat) {
    // Decode the flat panel index (last coordinate fastest).
    std::size_t offs[kMaxDim];
    long long rest = flat;
    for (std::size_t i = dim; i-- > 0;) {
      offs[i] = static_cast<std::size_t>(rest % panels[i]) * order;
      rest /= panels[i];
    }

    std::complex<double> acc(0.0, 0.0);
    std::size_t q[kMaxDim] = {0};
    double x[kMaxDim];
    for (;;) {
      double w = 1.0, cut = 1.0;
      for (std::size_t i = 0; i < dim; ++i) {
        const std::size_t idx = offs[i] + q[i];
        x[i] = xs[i][idx];
        w *= ws[i][idx];
        cut *= bumps[i][idx];
      }
      if (cut != 0.0) {
        double amp = w * cut;
        for (const auto& [v, spec] : f.factors) {
          double t = 0;
          for (std::size_t i = 0; i < dim; ++i) t += v[i] * x[i];
          amp *= spec.eval(t);
        }
        if (amp != 0.0) {
          double phase = 0;
          for (const auto& term : f.phase_terms) {
            double m = term.coeff;
            for (std::size_t i = 0; i < dim; ++i) {
              const unsigned e = term.exps[i];
              if (e) m *= pows[i][(offs[i] + q[i]) * (f.max_degree[i] + 1) + e];
            }
            phase += m;
          }
          const double arg = lambda * phase;
          acc += std::complex<double>(amp * std::cos(arg), amp * std::sin(arg));
        }
      }
      std::size_t i = dim;
      bool done = true;
      while (i-- > 0) {
        if (static_cast<int>(++q[i]) < order) {
          done = false;
          break;
        }
        q[i] = 0;
      }
      if (done) break;
    }
    panel_sums[static_cast<std::size_t>(flat)] = acc;
  };

  unsigned nthreads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  if (nthreads <= 1 || total_panels < 64) {
    for (long long p = 0; p < total_panels; ++p) eval_panel(p);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) {
      pool.emplace_back([&, t]() {
        for (long long p = t; p < total_panels; p += nthreads) eval_panel(p);
      });
    }
    for (auto& th : pool) th.join();
  }
  return detail::pairwise_sum(panel_sums);
}

/// Per-coordinate panel counts so that lambda times the estimated phase
/// variation across one panel stays below pi/2. The gradient bound is sampled
/// on a coarse grid over the support.
inline std::vector<long long> initial_panels(const OscillatoryIntegrand& f, double lambda) {
  const std::size_t dim = f.dim;
  const int samples = 5;
  std::vector<double> grad_max(dim, 0.0);
  std::vector<int> s(dim, 0);
  std::vector<double> x(dim);
  for (;;) {
    for (std::size_t i = 0; i < dim; ++i)
      x[i] = -f.radii[i] + 2.0 * f.radii[i] * s[i] / (samples - 1);
    for (std::size_t i = 0; i < dim; ++i) {
      double g = 0;
      for (const auto& term : f.gradient_terms[i]) {
        double m = term.coeff;
        for (std::size_t k = 0; k < dim; ++k)
          for (unsigned e = 0; e < term.exps[k]; ++e) m *= x[k];
        g += m;
      }
      grad_max[i] = std::max(grad_max[i], std::abs(g));
    }
    std::size_t i = dim;
    bool done = true;
    while (i-- > 0) {
      if (++s[i] < samples) {
        done = false;
        break;
      }
      s[i] = 0;
    }
    if (done) break;
  }
  const double pi_half = 1.57079632679489661923;
  std::vector<long long> panels(dim, 1);
  for (std::size_t i = 0; i < dim; ++i) {
    const double variation = std::abs(lambda) * 1.2 * grad_max[i] * 2.0 * f.radii[i];
    panels[i] = std::max<long long>(1, static_cast<long long>(std::ceil(variation / pi_half)));
  }
  return panels;
}

inline long long total_points(const std::vector<long long>& panels, int order) {
  long long t = 1;
  for (long long p : panels) {
    t *= p * order;
    if (t < 0) return 1LL << 62;  // overflow guard
  }
  return t;
}

/// Adaptive evaluation: start from the pi/2 paneling rule and double every
/// coordinate until two successive values agree to cfg.rel_tol relatively.
inline std::complex<double> evaluate_oscillatory(const OscillatoryIntegrand& f, double lambda,
                                                 const QuadratureConfig& cfg = {}) {
  std::vector<long long> panels = initial_panels(f, lambda);
  if (total_points(panels, cfg.nodes_per_panel) > cfg.max_points)
    throw Error("quadrature point budget exceeded before refinement");
  std::complex<double> prev = evaluate_fixed(f, lambda, panels, cfg);
  for (int r = 0; r < cfg.max_refinements; ++r) {
    for (auto& p : panels) p *= 2;
    if (total_points(panels, cfg.nodes_per_panel) > cfg.max_points)
      throw QuadratureError("quadrature point budget exceeded during refinement", prev, prev);
    std::complex<double> cur = evaluate_fixed(f, lambda, panels, cfg);
    const double scale = std::max(std::abs(cur), 1e-300);
    if (std::abs(cur - prev) <= cfg.rel_tol * scale) return cur;
    prev = cur;
  }
  throw QuadratureError("quadrature did not converge within the refinement budget",
                        prev, prev);
}

/// Spec'd entry point: evaluate the functional for concrete factors/cutoff.
inline std::complex<double> evaluate_functional(const Functional& fn,
                                                const std::vector<FactorSpec>& specs,
                                                const CutoffSpec& cutoff, double lambda,
                                                const QuadratureConfig& cfg = {}) {
  return evaluate_oscillatory(make_integrand(fn, specs, cutoff), lambda, cfg);
}

/// Fitted lambda-power decay exponent from a sweep.
struct DecayFit {
  std::vector<double> lambdas;
  std::vector<std::complex<double>> values;
  std::vector<double> magnitudes;
  std::vector<double> envelope;
  double epsilon = 0.0;
  double fit_quality = 0.0;  // coefficient of determination of the envelope fit

  std::string csv() const {
    std::ostringstream os;
    os.precision(12);
    os << "lambda,re,im,abs\n";
    for (std::size_t i = 0; i < lambdas.size(); ++i)
      os << lambdas[i] << "," << values[i].real() << "," << values[i].imag() << ","
         << magnitudes[i] << "\n";
    return os.str();
  }
};

inline std::vector<double> geometric_grid(double lo, double hi, std::size_t steps) {
  if (steps < 2) throw Error("grid needs at least two points");
  std::vector<double> g(steps);
  const double ratio = std::pow(hi / lo, 1.0 / static_cast<double>(steps - 1));
  for (std::size_t i = 0; i < steps; ++i) g[i] = lo * std::pow(ratio, static_cast<double>(i));
  return g;
}

/// Magnitude sweep over a geometric lambda grid, sliding-window (3) maximum
/// envelope, and least-squares line on the log-log envelope. The fitted
/// epsilon is the negated slope clamped below at zero.
inline DecayFit decay_exponent(const OscillatoryIntegrand& f, const std::vector<double>& grid,
                               const QuadratureConfig& cfg = {}) {
  if (grid.size() < 6) throw Error("lambda grid needs at least 6 points");
  const double min_ratio = std::sqrt(2.0) - 1e-9;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (!(grid[i + 1] > grid[i])) throw Error("lambda grid must be increasing");
    if (grid[i + 1] / grid[i] < min_ratio) throw Error("lambda grid ratio below sqrt(2)");
  }
  if (grid.front() < 1.0) throw Error("lambda grid must start at 1 or above");

  DecayFit fit;
  fit.lambdas = grid;
  for (double lambda : grid) {
    try {
      fit.values.push_back(evaluate_oscillatory(f, lambda, cfg));
      fit.magnitudes.push_back(std::abs(fit.values.back()));
    } catch (const Error& e) {
      throw Error("evaluation failed at lambda = " + std::to_string(lambda) + ": " + e.what());
    }
  }

  const std::size_t n = grid.size();
  fit.envelope.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double m = fit.magnitudes[i];
    if (i > 0) m = std::max(m, fit.magnitudes[i - 1]);
    if (i + 1 < n) m = std::max(m, fit.magnitudes[i + 1]);
    fit.envelope[i] = m;
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    lx[i] = std::log(grid[i]);
    ly[i] = std::log(std::max(fit.envelope[i], 1e-300));
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double dn = static_cast<double>(n);
  const double slope = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / dn;
  double ss_res = 0, ss_tot = 0;
  const double mean_y = sy / dn;
  for (std::size_t i = 0; i < n; ++i) {
    const double pred = slope * lx[i] + intercept;
    ss_res += (ly[i] - pred) * (ly[i] - pred);
    ss_tot += (ly[i] - mean_y) * (ly[i] - mean_y);
  }
  fit.epsilon = std::max(0.0, -slope);
  fit.fit_quality = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

inline DecayFit decay_exponent(const Functional& fn, const std::vector<FactorSpec>& specs,
                               const CutoffSpec& cutoff, const std::vector<double>& grid,
                               const QuadratureConfig& cfg = {}) {
  return decay_exponent(make_integrand(fn, specs, cutoff), grid, cfg);
}

}  // namespace oscidecay
