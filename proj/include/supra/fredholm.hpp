#pragma once

// Fredholm integral equation of the second kind, solved by Picard iteration
// in the sup-norm suprametric d(f,g) = u(u + lambda), u = ||f-g||_inf.
// The certificate records M = max |K|, L = M(b-a) and the convex-contraction
// coefficients a0 = L^2, a1 = 0.

#include "supra/picard.hpp"
#include "supra/space.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace supra {

enum class QuadRule { Trapezoid, Simpson };

/// Kernel supplied either as a callable K(x,t) or as node samples.
class Kernel {
 public:
  static Kernel from_function(std::function<double(double, double)> f) {
    Kernel k;
    k.fn_ = std::move(f);
    return k;
  }
  static Kernel from_grid(Eigen::MatrixXd samples) {
    Kernel k;
    k.grid_ = std::move(samples);
    return k;
  }

  bool is_grid() const { return grid_.has_value(); }

  double at(double x, double t) const {
    if (!fn_) throw std::logic_error("Kernel: grid-sampled kernel has no off-node values");
    return fn_(x, t);
  }

  /// Node-sample matrix on the given grid.
  Eigen::MatrixXd sample(const Eigen::VectorXd& nodes) const {
    if (grid_) {
      if (grid_->rows() != nodes.size() || grid_->cols() != nodes.size())
        throw std::invalid_argument("Kernel: grid samples do not match the node count");
      return *grid_;
    }
    Eigen::MatrixXd m(nodes.size(), nodes.size());
    for (Eigen::Index i = 0; i < nodes.size(); ++i)
      for (Eigen::Index j = 0; j < nodes.size(); ++j) m(i, j) = fn_(nodes(i), nodes(j));
    return m;
  }

 private:
  std::function<double(double, double)> fn_;
  std::optional<Eigen::MatrixXd> grid_;
};

struct FredholmProblem {
  double a = 0.0, b = 1.0;
  Kernel kernel = Kernel::from_function([](double, double) { return 0.0; });
  std::function<double(double)> g;  // absent = homogeneous equation
  int grid_n = 101;
  QuadRule rule = QuadRule::Trapezoid;
  double lambda_supra = 1.0;

  void validate() const {
    if (!(a < b)) throw std::invalid_argument("FredholmProblem: need a < b");
    if (grid_n < 2) throw std::invalid_argument("FredholmProblem: grid_n must be >= 2");
    if (rule == QuadRule::Simpson && grid_n % 2 == 0)
      throw std::invalid_argument("FredholmProblem: Simpson requires an odd node count");
    if (lambda_supra <= 0.0)
      throw std::invalid_argument("FredholmProblem: lambda_supra must be positive");
  }
};

struct GridFunction {
  Eigen::VectorXd nodes;
  Eigen::VectorXd values;
};

struct Certificate {
  double M = 0.0;   // kernel bound on the tensor grid
  double L = 0.0;   // M (b - a)
  double a0 = 0.0;  // L^2
  double a1 = 0.0;
  bool valid = false;
};

inline Eigen::VectorXd make_grid(double a, double b, int n) {
  Eigen::VectorXd nodes(n);
  for (int i = 0; i < n; ++i)
    nodes(i) = (i == n - 1) ? b : a + (b - a) * static_cast<double>(i) / (n - 1);
  nodes(0) = a;
  return nodes;
}

inline Eigen::VectorXd quadrature_weights(double a, double b, int n, QuadRule rule) {
  if (n < 2) throw std::invalid_argument("quadrature_weights: need n >= 2");
  const double h = (b - a) / (n - 1);
  Eigen::VectorXd w(n);
  if (rule == QuadRule::Trapezoid) {
    w.setConstant(h);
    w(0) = w(n - 1) = h / 2.0;
  } else {
    if (n % 2 == 0) throw std::invalid_argument("quadrature_weights: Simpson needs odd n");
    w.setZero();
    for (int i = 0; i + 2 < n; i += 2) {
      w(i) += h / 3.0;
      w(i + 1) += 4.0 * h / 3.0;
      w(i + 2) += h / 3.0;
    }
  }
  return w;
}

/// M = max |K| over the grid_n x grid_n tensor grid.
inline double kernel_bound(const FredholmProblem& problem) {
  problem.validate();
  const Eigen::VectorXd nodes = make_grid(problem.a, problem.b, problem.grid_n);
  return problem.kernel.sample(nodes).cwiseAbs().maxCoeff();
}

inline Certificate certify(const FredholmProblem& problem) {
  Certificate cert;
  cert.M = kernel_bound(problem);
  cert.L = cert.M * (problem.b - problem.a);
  cert.a0 = cert.L * cert.L;
  cert.a1 = 0.0;
  cert.valid = cert.L < 1.0;
  return cert;
}

/// Discretized operator: (Tf) = g + A f with A_{ij} = K(x_i, t_j) w_j.
inline Eigen::MatrixXd operator_matrix(const FredholmProblem& problem) {
  problem.validate();
  const Eigen::VectorXd nodes = make_grid(problem.a, problem.b, problem.grid_n);
  const Eigen::VectorXd w = quadrature_weights(problem.a, problem.b, problem.grid_n, problem.rule);
  return problem.kernel.sample(nodes) * w.asDiagonal();
}

inline Eigen::VectorXd inhomogeneous_term(const FredholmProblem& problem) {
  const Eigen::VectorXd nodes = make_grid(problem.a, problem.b, problem.grid_n);
  Eigen::VectorXd gv = Eigen::VectorXd::Zero(problem.grid_n);
  if (problem.g)
    for (int i = 0; i < problem.grid_n; ++i) gv(i) = problem.g(nodes(i));
  return gv;
}

inline GridFunction apply_operator(const FredholmProblem& problem, const GridFunction& f) {
  problem.validate();
  if (f.values.size() != problem.grid_n)
    throw std::invalid_argument("apply_operator: grid mismatch");
  GridFunction out;
  out.nodes = make_grid(problem.a, problem.b, problem.grid_n);
  out.values = inhomogeneous_term(problem) + operator_matrix(problem) * f.values;
  return out;
}

inline double supra_distance(const GridFunction& f, const GridFunction& g, double lambda_supra) {
  if (f.values.size() != g.values.size())
    throw std::invalid_argument("supra_distance: grid mismatch");
  const double u = (f.values - g.values).lpNorm<Eigen::Infinity>();
  return u * (u + lambda_supra);
}

/// Sup-norm suprametric space over grid-function values; lets the generic
/// contraction verifiers run on the integral operator.
class SupNormSpace {
 public:
  using Point = Eigen::VectorXd;
  explicit SupNormSpace(double lambda_supra) : lambda_(lambda_supra), rho_(2.0 / lambda_supra) {
    if (lambda_supra <= 0.0) throw std::invalid_argument("SupNormSpace: lambda must be positive");
  }
  double distance(const Point& f, const Point& g) const {
    const double u = (f - g).lpNorm<Eigen::Infinity>();
    return u * (u + lambda_);
  }
  double rho() const { return rho_; }
  double lambda_supra() const { return lambda_; }
  bool contains(const Point&) const { return true; }
  std::string describe(const Point& f) const {
    return "grid-function(sup=" + std::to_string(f.lpNorm<Eigen::Infinity>()) + ")";
  }

 private:
  double lambda_, rho_;
};

struct SolveResult {
  GridFunction solution;
  Certificate certificate;
  int iterations = 0;
  bool converged = false;
  bool diverged = false;
  double residual_sup = 0.0;               // ||T f - f||_inf at the final iterate
  std::vector<double> iterate_sup_norms;   // ||f_n||_inf including f_0
  std::vector<double> sup_displacements;   // ||f_{n+1} - f_n||_inf
  std::vector<double> supra_displacements; // same steps in the suprametric
};

struct CertificateRefused : std::runtime_error {
  Certificate certificate;
  explicit CertificateRefused(const Certificate& cert)
      : std::runtime_error("certificate invalid: L = " + std::to_string(cert.L) + " >= 1"),
        certificate(cert) {}
};

/// Picard iteration f_{n+1} = g + A f_n from f0 (default 0).
inline SolveResult solve(const FredholmProblem& problem, const StoppingCriteria& stop,
                         const std::optional<Eigen::VectorXd>& f0 = std::nullopt,
                         bool allow_invalid_certificate = false) {
  problem.validate();
  SolveResult result;
  result.certificate = certify(problem);
  if (!result.certificate.valid && !allow_invalid_certificate)
    throw CertificateRefused(result.certificate);

  const Eigen::MatrixXd A = operator_matrix(problem);
  const Eigen::VectorXd gv = inhomogeneous_term(problem);
  Eigen::VectorXd f = f0 ? *f0 : Eigen::VectorXd::Zero(problem.grid_n);
  if (f.size() != problem.grid_n) throw std::invalid_argument("solve: f0 grid mismatch");

  result.iterate_sup_norms.push_back(f.lpNorm<Eigen::Infinity>());
  int growth_streak = 0;
  for (int n = 0; n < stop.max_iters; ++n) {
    const Eigen::VectorXd next = gv + A * f;
    const double disp = (next - f).lpNorm<Eigen::Infinity>();
    const double u = disp;
    result.sup_displacements.push_back(disp);
    result.supra_displacements.push_back(u * (u + problem.lambda_supra));
    result.iterate_sup_norms.push_back(next.lpNorm<Eigen::Infinity>());
    ++result.iterations;
    f = next;
    if (disp <= stop.displacement_tol) {
      result.converged = true;
      break;
    }
    const std::size_t steps = result.sup_displacements.size();
    if (steps >= 2 && result.sup_displacements[steps - 1] > result.sup_displacements[steps - 2])
      ++growth_streak;
    else
      growth_streak = 0;
    if (growth_streak >= 5) {
      result.diverged = true;
      break;
    }
  }
  result.solution.nodes = make_grid(problem.a, problem.b, problem.grid_n);
  result.solution.values = f;
  result.residual_sup = (gv + A * f - f).lpNorm<Eigen::Infinity>();
  return result;
}

/// Closed-form fixed point for a separable kernel K(x,t) = phi(x) psi(t):
/// f*(x) = g(x) + c phi(x), c = (I psi g) / (1 - I psi phi), integrals by
/// Simpson quadrature on a 4x-refined grid.
inline GridFunction separable_oracle(const std::function<double(double)>& phi,
                                     const std::function<double(double)>& psi,
                                     const std::function<double(double)>& g,
                                     const FredholmProblem& problem) {
  problem.validate();
  const int refined = 4 * (problem.grid_n - 1) + 1;  // odd by construction
  const Eigen::VectorXd rn = make_grid(problem.a, problem.b, refined);
  const Eigen::VectorXd rw = quadrature_weights(problem.a, problem.b, refined, QuadRule::Simpson);
  double psi_phi = 0.0, psi_g = 0.0;
  for (int i = 0; i < refined; ++i) {
    psi_phi += rw(i) * psi(rn(i)) * phi(rn(i));
    if (g) psi_g += rw(i) * psi(rn(i)) * g(rn(i));
  }
  const double denom = 1.0 - psi_phi;
  if (std::abs(denom) < 1e-9)
    throw std::invalid_argument("separable_oracle: resonant kernel (denominator near zero)");
  const double c = psi_g / denom;
  GridFunction out;
  out.nodes = make_grid(problem.a, problem.b, problem.grid_n);
  out.values.resize(problem.grid_n);
  for (int i = 0; i < problem.grid_n; ++i)
    out.values(i) = (g ? g(out.nodes(i)) : 0.0) + c * phi(out.nodes(i));
  return out;
}

}  // namespace supra
