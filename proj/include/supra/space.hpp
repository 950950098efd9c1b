#pragma once

// Suprametric spaces: d(x,y) <= d(x,z) + d(z,y) + rho * d(x,z) * d(z,y).
// Finite spaces materialize the full distance matrix; interval spaces
// evaluate distances on demand.

#include <Eigen/Dense>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace supra {

inline constexpr double kDefaultTol = 1e-9;

/// Witness triple (i, k, j) where the relaxed triangle inequality fails by `defect`.
struct AxiomViolation {
  int i = 0, k = 0, j = 0;
  double defect = 0.0;
};

struct AxiomReport {
  bool identity_ok = false;
  bool symmetry_ok = false;
  bool supra_ok = false;
  std::vector<AxiomViolation> violations;
  double minimal_rho = 0.0;

  bool all_ok() const { return identity_ok && symmetry_ok && supra_ok; }
};

/// A finite point set with explicit distance matrix and relaxation constant.
class FiniteSpace {
 public:
  using Point = int;

  FiniteSpace(std::vector<std::string> labels, Eigen::MatrixXd dist, double rho)
      : labels_(std::move(labels)), dist_(std::move(dist)), rho_(rho) {
    if (dist_.rows() != dist_.cols())
      throw std::invalid_argument("FiniteSpace: distance matrix is not square");
    if (static_cast<Eigen::Index>(labels_.size()) != dist_.rows())
      throw std::invalid_argument("FiniteSpace: labels do not match matrix size");
    if (rho_ < 0.0) throw std::invalid_argument("FiniteSpace: rho must be nonnegative");
  }

  int size() const { return static_cast<int>(dist_.rows()); }
  double distance(int i, int j) const { return dist_(i, j); }
  double rho() const { return rho_; }
  const Eigen::MatrixXd& matrix() const { return dist_; }
  const std::vector<std::string>& labels() const { return labels_; }

  bool contains(int i) const { return i >= 0 && i < size(); }
  std::string describe(int i) const { return contains(i) ? labels_[i] : "?"; }

  int index_of(const std::string& label) const {
    for (int i = 0; i < size(); ++i)
      if (labels_[i] == label) return i;
    throw std::invalid_argument("FiniteSpace: unknown point label '" + label + "'");
  }

  FiniteSpace with_rho(double rho) const { return FiniteSpace(labels_, dist_, rho); }

 private:
  std::vector<std::string> labels_;
  Eigen::MatrixXd dist_;
  double rho_;
};

/// A real interval [a,b] with one of three distance forms.
class IntervalSpace {
 public:
  using Point = double;
  enum class Form { Absolute, Poly, Exponential };

  static IntervalSpace absolute(double a, double b, double rho = 0.0) {
    return IntervalSpace(a, b, Form::Absolute, 0.0, rho);
  }
  // d(x,y) = |x-y| (|x-y| + lambda), rho = 2/lambda.
  static IntervalSpace poly(double a, double b, double lambda_supra) {
    if (lambda_supra <= 0.0)
      throw std::invalid_argument("IntervalSpace::poly: lambda_supra must be positive");
    return IntervalSpace(a, b, Form::Poly, lambda_supra, 2.0 / lambda_supra);
  }
  // d(x,y) = alpha (e^{|x-y|} - 1).
  static IntervalSpace exponential(double a, double b, double alpha_exp, double rho) {
    if (alpha_exp <= 0.0)
      throw std::invalid_argument("IntervalSpace::exponential: alpha_exp must be positive");
    return IntervalSpace(a, b, Form::Exponential, alpha_exp, rho);
  }

  double distance(double x, double y) const {
    const double u = std::abs(x - y);
    switch (form_) {
      case Form::Absolute: return u;
      case Form::Poly: return u * (u + param_);
      case Form::Exponential: return param_ * std::expm1(u);
    }
    return u;
  }

  double a() const { return a_; }
  double b() const { return b_; }
  double rho() const { return rho_; }
  Form form() const { return form_; }
  double param() const { return param_; }

  bool contains(double x) const {
    const double slack = 1e-12 * std::max(1.0, std::abs(b_ - a_));
    return x >= a_ - slack && x <= b_ + slack;
  }

  std::string describe(double x) const {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
  }

  /// Uniform grid of n points spanning [a,b]; endpoints exact.
  std::vector<double> grid(int n) const {
    if (n < 2) throw std::invalid_argument("IntervalSpace::grid: need n >= 2");
    std::vector<double> pts(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      pts[static_cast<std::size_t>(i)] =
          (i == n - 1) ? b_ : a_ + (b_ - a_) * static_cast<double>(i) / (n - 1);
    pts[0] = a_;
    return pts;
  }

 private:
  IntervalSpace(double a, double b, Form form, double param, double rho)
      : a_(a), b_(b), form_(form), param_(param), rho_(rho) {
    if (!(a < b)) throw std::invalid_argument("IntervalSpace: need a < b");
    if (rho_ < 0.0) throw std::invalid_argument("IntervalSpace: rho must be nonnegative");
  }

  double a_, b_;
  Form form_;
  double param_;  // lambda for Poly, alpha for Exponential, unused for Absolute
  double rho_;
};

namespace detail {

inline void require_valid_entries(const FiniteSpace& space) {
  const auto& d = space.matrix();
  for (Eigen::Index i = 0; i < d.rows(); ++i)
    for (Eigen::Index j = 0; j < d.cols(); ++j)
      if (d(i, j) < 0.0)
        throw std::invalid_argument("distance matrix has a negative entry at (" +
                                    std::to_string(i) + "," + std::to_string(j) + ")");
}

inline bool identity_holds(const FiniteSpace& space) {
  const auto& d = space.matrix();
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    if (d(i, i) != 0.0) return false;
    for (Eigen::Index j = 0; j < d.cols(); ++j)
      if (i != j && d(i, j) <= 0.0) return false;
  }
  return true;
}

inline bool symmetry_holds(const FiniteSpace& space) {
  const auto& d = space.matrix();
  for (Eigen::Index i = 0; i < d.rows(); ++i)
    for (Eigen::Index j = i + 1; j < d.cols(); ++j)
      if (d(i, j) != d(j, i)) return false;
  return true;
}

}  // namespace detail

/// Defect of the relaxed triangle inequality at (x, z, y); positive means violated.
template <class Space>
double triangle_defect(const Space& space, const typename Space::Point& x,
                       const typename Space::Point& z, const typename Space::Point& y) {
  const double dxz = space.distance(x, z);
  const double dzy = space.distance(z, y);
  return space.distance(x, y) - dxz - dzy - space.rho() * dxz * dzy;
}

/// Smallest rho making the suprametric axiom hold; requires identity and symmetry.
inline double minimal_rho(const FiniteSpace& space) {
  detail::require_valid_entries(space);
  if (!detail::identity_holds(space))
    throw std::invalid_argument("minimal_rho: identity axiom violated");
  if (!detail::symmetry_holds(space))
    throw std::invalid_argument("minimal_rho: symmetry axiom violated");
  const int n = space.size();
  double best = 0.0;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) {
        if (i == k || k == j || i == j) continue;
        const double prod = space.distance(i, k) * space.distance(k, j);
        if (prod <= 0.0) continue;
        const double need =
            (space.distance(i, j) - space.distance(i, k) - space.distance(k, j)) / prod;
        best = std::max(best, need);
      }
  return best;
}

/// Exhaustive axiom check over all ordered triples of distinct points.
inline AxiomReport check_axioms(const FiniteSpace& space, double tol = kDefaultTol) {
  detail::require_valid_entries(space);
  AxiomReport report;
  report.identity_ok = detail::identity_holds(space);
  report.symmetry_ok = detail::symmetry_holds(space);
  const int n = space.size();
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) {
        if (i == k || k == j || i == j) continue;
        const double defect = triangle_defect(space, i, k, j);
        if (defect > tol) report.violations.push_back({i, k, j, defect});
      }
  report.supra_ok = report.violations.empty();
  if (report.identity_ok && report.symmetry_ok) report.minimal_rho = minimal_rho(space);
  return report;
}

/// delta^lambda transform: every distance u becomes u(u + lambda), rho = 2/lambda.
inline FiniteSpace from_metric_poly(const FiniteSpace& metric, double lambda_supra) {
  if (lambda_supra <= 0.0)
    throw std::invalid_argument("from_metric_poly: lambda_supra must be positive");
  const AxiomReport base = check_axioms(metric.with_rho(0.0));
  if (!base.all_ok())
    throw std::invalid_argument("from_metric_poly: input is not a metric");
  Eigen::MatrixXd d = metric.matrix();
  d = d.array() * (d.array() + lambda_supra);
  return FiniteSpace(metric.labels(), std::move(d), 2.0 / lambda_supra);
}

inline IntervalSpace from_metric_poly(const IntervalSpace& metric, double lambda_supra) {
  if (lambda_supra <= 0.0)
    throw std::invalid_argument("from_metric_poly: lambda_supra must be positive");
  if (metric.form() != IntervalSpace::Form::Absolute)
    throw std::invalid_argument("from_metric_poly: interval input must use the absolute form");
  return IntervalSpace::poly(metric.a(), metric.b(), lambda_supra);
}

/// Exponential transform d = alpha (e^{d1} - 1); rho is the computed minimal one.
inline FiniteSpace from_metric_exp(const FiniteSpace& metric, double alpha_exp) {
  if (alpha_exp <= 0.0)
    throw std::invalid_argument("from_metric_exp: alpha_exp must be positive");
  const AxiomReport base = check_axioms(metric.with_rho(0.0));
  if (!base.all_ok())
    throw std::invalid_argument("from_metric_exp: input is not a metric");
  Eigen::MatrixXd d = metric.matrix();
  d = alpha_exp * (d.array().exp() - 1.0);
  FiniteSpace out(metric.labels(), d, 0.0);
  return out.with_rho(minimal_rho(out));
}

/// D(x,y) = d/(1 + rho d); the metric Lipschitz-equivalent to d on bounded orbits.
inline double d_transform(double d_value, double rho) {
  if (d_value < 0.0) throw std::invalid_argument("d_transform: negative distance");
  if (rho < 0.0) throw std::invalid_argument("d_transform: negative rho");
  return d_value / (1.0 + rho * d_value);
}

}  // namespace supra
