#pragma once

// Picard iteration with the convergence bookkeeping of the convex-contraction
// theorem: the per-step bound alpha^{floor(n/m)} mu, the Cauchy tail estimate
// (e^{rho sigma} - 1)/rho, and the orbit-boundedness constants of the
// quasi-contraction argument.

#include "supra/contraction.hpp"
#include "supra/space.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace supra {

struct StoppingCriteria {
  int max_iters = 1000;
  double displacement_tol = 0.0;  // stop when d(x_n, x_{n+1}) <= tol
  double tail_bound_tol = -1.0;   // stop when the estimated Cauchy tail bound <= tol; < 0 disables
};

template <class P>
struct OrbitTrace {
  std::vector<P> points;                // x_0 .. x_N (fixed point not repeated)
  std::vector<double> displacements;    // d(x_n, x_{n+1}), size points-1
  std::vector<double> cum_tail;         // suffix sums of displacements
  std::vector<double> bounds;           // optional theoretical per-step bounds
  bool converged = false;
  double residual = 0.0;                // d(x_N, T x_N)
  std::string halt_reason;
};

inline double cauchy_tail_bound(double sigma, double rho);

template <class P>
struct DomainEscape : std::runtime_error {
  P offender;
  explicit DomainEscape(P point, const std::string& repr)
      : std::runtime_error("map leaves the domain at " + repr), offender(std::move(point)) {}
};

/// Run the Picard iteration from x0 until a stopping criterion fires.
template <class Space, class P = typename Space::Point>
OrbitTrace<P> iterate(const Space& space, const SelfMap<P>& map, const P& x0,
                      const StoppingCriteria& stop) {
  if (stop.max_iters < 1 && stop.displacement_tol < 0.0 && stop.tail_bound_tol < 0.0)
    throw std::invalid_argument("iterate: no active stopping criterion");
  if (!space.contains(x0)) throw DomainEscape<P>(x0, space.describe(x0));

  OrbitTrace<P> trace;
  trace.points.push_back(x0);
  P current = x0;
  double prev_disp = -1.0;
  for (int n = 0; n < stop.max_iters; ++n) {
    P next = map(current);
    if (!space.contains(next)) throw DomainEscape<P>(next, space.describe(next));
    const double disp = space.distance(current, next);
    if (disp <= stop.displacement_tol) {
      trace.converged = true;
      trace.residual = disp;
      trace.halt_reason = "displacement tolerance";
      break;
    }
    if (stop.tail_bound_tol >= 0.0 && prev_disp > 0.0 && disp < prev_disp) {
      // Geometric tail estimate from the observed one-step ratio.
      const double r = disp / prev_disp;
      const double sigma = disp * r / (1.0 - r);
      if (cauchy_tail_bound(sigma, space.rho()) <= stop.tail_bound_tol) {
        trace.points.push_back(next);
        trace.displacements.push_back(disp);
        trace.converged = true;
        trace.residual = space.distance(next, map(next));
        trace.halt_reason = "tail bound tolerance";
        break;
      }
    }
    trace.points.push_back(next);
    trace.displacements.push_back(disp);
    prev_disp = disp;
    current = next;
  }
  if (!trace.converged) {
    trace.residual = space.distance(trace.points.back(), map(trace.points.back()));
    trace.halt_reason = "max iterations";
  }
  trace.cum_tail.resize(trace.displacements.size());
  double tail = 0.0;
  for (std::size_t i = trace.displacements.size(); i-- > 0;) {
    tail += trace.displacements[i];
    trace.cum_tail[i] = tail;
  }
  return trace;
}

/// mu = sum of the first m displacements of the orbit.
template <class P>
double mu_initial(const OrbitTrace<P>& trace, int m) {
  if (m < 1) throw std::invalid_argument("mu_initial: m must be >= 1");
  if (trace.points.size() < static_cast<std::size_t>(m) + 1)
    throw std::invalid_argument("mu_initial: trace too short");
  double mu = 0.0;
  for (int i = 0; i < m; ++i) mu += trace.displacements[static_cast<std::size_t>(i)];
  return mu;
}

/// alpha^{floor(n/m)} mu.
inline double apriori_step_bound(int n, int m, double alpha, double mu) {
  if (n < 0) throw std::invalid_argument("apriori_step_bound: n must be >= 0");
  if (m < 1) throw std::invalid_argument("apriori_step_bound: m must be >= 1");
  if (alpha < 0.0 || alpha >= 1.0)
    throw std::invalid_argument("apriori_step_bound: alpha not in [0,1)");
  return std::pow(alpha, n / m) * mu;
}

/// (e^{rho sigma} - 1)/rho, with the rho = 0 limit sigma.  Branch switch near
/// zero avoids cancellation in the quotient.
inline double cauchy_tail_bound(double sigma, double rho) {
  if (sigma < 0.0) throw std::invalid_argument("cauchy_tail_bound: sigma must be >= 0");
  if (rho < 0.0) throw std::invalid_argument("cauchy_tail_bound: rho must be >= 0");
  if (rho < 1e-12) return sigma;
  return std::expm1(rho * sigma) / rho;
}

namespace detail {

// Closed-form tail sum: sum_{k>=N} alpha^{floor(k/m)} mu, grouped into blocks
// of m equal terms.
inline double apriori_tail_sum(int N, int m, double alpha, double mu) {
  if (alpha == 0.0) return (N < m) ? mu * (m - N) : 0.0;  // 0^0 = 1 convention
  const int q0 = N / m;
  const int r = N % m;
  const double head = (m - r) * std::pow(alpha, q0);
  const double rest = m * std::pow(alpha, q0 + 1) / (1.0 - alpha);
  return mu * (head + rest);
}

}  // namespace detail

/// Smallest N whose a-priori displacement tail, pushed through the Cauchy
/// estimate, drops below eps.
inline int iterations_for_tolerance(double eps, double alpha, double mu, int m, double rho) {
  if (eps <= 0.0) throw std::invalid_argument("iterations_for_tolerance: eps must be > 0");
  if (alpha < 0.0 || alpha >= 1.0)
    throw std::invalid_argument("iterations_for_tolerance: alpha not in [0,1)");
  if (mu < 0.0) throw std::invalid_argument("iterations_for_tolerance: mu must be >= 0");
  if (m < 1) throw std::invalid_argument("iterations_for_tolerance: m must be >= 1");
  for (int N = 0;; ++N) {
    if (cauchy_tail_bound(detail::apriori_tail_sum(N, m, alpha, mu), rho) < eps) return N;
    if (N > 100'000'000) throw std::runtime_error("iterations_for_tolerance: no N found");
  }
}

struct BoundViolation {
  int index = 0;
  double displacement = 0.0;
  double bound = 0.0;
};

struct TraceBoundReport {
  double mu = 0.0;
  std::vector<BoundViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Check every displacement from index m onwards against alpha^{floor(n/m)} mu.
template <class P>
TraceBoundReport verify_trace_bounds(const OrbitTrace<P>& trace, int m, double alpha,
                                     double tol = kDefaultTol) {
  TraceBoundReport report;
  report.mu = mu_initial(trace, m);
  for (std::size_t n = static_cast<std::size_t>(m); n < trace.displacements.size(); ++n) {
    const double bound = apriori_step_bound(static_cast<int>(n), m, alpha, report.mu);
    if (trace.displacements[n] > bound + tol)
      report.violations.push_back({static_cast<int>(n), trace.displacements[n], bound});
  }
  return report;
}

/// Fill trace.bounds with the a-priori per-step displacement bounds (NaN below index m).
template <class P>
void annotate_bounds(OrbitTrace<P>& trace, int m, double alpha) {
  const double mu = mu_initial(trace, m);
  trace.bounds.assign(trace.displacements.size(), std::nan(""));
  for (std::size_t n = static_cast<std::size_t>(m); n < trace.displacements.size(); ++n)
    trace.bounds[n] = apriori_step_bound(static_cast<int>(n), m, alpha, mu);
}

/// Orbit bound C = C0 (1 + rho C0) / (1 - lambda) from the quasi-contraction argument.
inline double ciric_orbit_bound(double C0, double rho, double lambda) {
  if (C0 < 0.0 || rho < 0.0) throw std::invalid_argument("ciric_orbit_bound: negative input");
  if (lambda < 0.0 || lambda >= 1.0)
    throw std::invalid_argument("ciric_orbit_bound: lambda not in [0,1)");
  return C0 * (1.0 + rho * C0) / (1.0 - lambda);
}

/// lambda' = lambda (1 + rho C) / (1 + rho lambda C); always in [lambda, 1).
inline double transformed_factor(double lambda, double rho, double C) {
  if (lambda < 0.0 || lambda >= 1.0)
    throw std::invalid_argument("transformed_factor: lambda not in [0,1)");
  if (rho < 0.0 || C < 0.0) throw std::invalid_argument("transformed_factor: negative input");
  return lambda * (1.0 + rho * C) / (1.0 + rho * lambda * C);
}

}  // namespace supra
