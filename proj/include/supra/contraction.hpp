#pragma once

// Verifiers for the contraction hypotheses (Banach, convex of order m,
// Ciric and Sehgal quasi-contractions, the fixed-n Ciric variant, Fisher)
// plus the continuity-type diagnostics used at orbit limits.
//
// Continuous domains are checked on explicit test sets; "satisfied" always
// means satisfied on the tested set.

#include "supra/space.hpp"

#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace supra {

template <class P>
using SelfMap = std::function<P(const P&)>;

template <class P>
P iterate_point(const SelfMap<P>& map, P x, int times) {
  for (int i = 0; i < times; ++i) x = map(x);
  return x;
}

/// Tagged description of one contraction hypothesis.
struct ContractionSpec {
  enum class Kind { Banach, ConvexM, Ciric, Sehgal, CiricVariant, Fisher };

  Kind kind = Kind::Banach;
  double alpha = 0.0;               // Banach
  std::vector<double> coeffs;       // ConvexM: a_0 .. a_{m-1}
  double lambda = 0.0;              // Ciric / Sehgal / CiricVariant / Fisher
  std::map<std::string, int> n_map; // Ciric / Sehgal on finite spaces
  int n = 1;                        // CiricVariant, or constant n for interval spaces
  int p = 1, q = 1;                 // Fisher

  void validate() const {
    switch (kind) {
      case Kind::Banach:
        if (alpha < 0.0 || alpha >= 1.0)
          throw std::invalid_argument("ContractionSpec: alpha must be in [0,1)");
        break;
      case Kind::ConvexM: {
        if (coeffs.empty()) throw std::invalid_argument("ContractionSpec: empty coeffs");
        double sum = 0.0;
        for (double c : coeffs) {
          if (c < 0.0) throw std::invalid_argument("ContractionSpec: negative coefficient");
          sum += c;
        }
        if (sum >= 1.0) throw std::invalid_argument("ContractionSpec: sum of coeffs must be < 1");
        break;
      }
      case Kind::Ciric:
      case Kind::Sehgal:
      case Kind::CiricVariant:
        if (lambda < 0.0 || lambda >= 1.0)
          throw std::invalid_argument("ContractionSpec: lambda must be in [0,1)");
        if (n < 1) throw std::invalid_argument("ContractionSpec: n must be >= 1");
        for (const auto& [key, value] : n_map)
          if (value < 1)
            throw std::invalid_argument("ContractionSpec: n(" + key + ") must be >= 1");
        break;
      case Kind::Fisher:
        if (lambda < 0.0 || lambda >= 1.0)
          throw std::invalid_argument("ContractionSpec: lambda must be in [0,1)");
        if (p < 1 || q < 1) throw std::invalid_argument("ContractionSpec: p,q must be >= 1");
        break;
    }
  }
};

struct Witness {
  std::size_t pair_index = 0;
  std::string x, y;
  double lhs = 0.0;
  double rhs_max = 0.0;  // the bound base, before scaling by the rate constant
  double ratio = 0.0;    // lhs / (rate * rhs_max), 0/0 -> 0
};

struct VerificationReport {
  bool satisfied = true;
  std::size_t pairs_tested = 0;
  double worst_ratio = 0.0;
  std::vector<Witness> witnesses;  // nonempty iff violated
};

namespace detail {

// Deterministic aggregation: pairs are visited in input order, so the worst
// witness resolves ties by smallest pair index.
class ReportBuilder {
 public:
  explicit ReportBuilder(double rate, double tol) : rate_(rate), tol_(tol) {}

  void record(std::size_t index, std::string x, std::string y, double lhs, double rhs_max) {
    ++report_.pairs_tested;
    const double scaled = rate_ * rhs_max;
    double ratio = 0.0;
    if (lhs > 0.0) ratio = (scaled > 0.0) ? lhs / scaled : std::numeric_limits<double>::infinity();
    report_.worst_ratio = std::max(report_.worst_ratio, ratio);
    if (lhs > scaled + tol_)
      report_.witnesses.push_back({index, std::move(x), std::move(y), lhs, rhs_max, ratio});
  }

  VerificationReport finish() {
    report_.satisfied = report_.witnesses.empty();
    return std::move(report_);
  }

 private:
  double rate_, tol_;
  VerificationReport report_;
};

}  // namespace detail

/// M(x,y) = max over d(x, T^i y), 0<=i<=n, and d(x, T^j x), 0<=j<=n.
template <class Space, class P = typename Space::Point>
double m_value(const Space& space, const SelfMap<P>& map, const P& x, const P& y, int n) {
  if (n < 1) throw std::invalid_argument("m_value: n must be >= 1");
  double best = 0.0;
  P ty = y;
  P tx = x;
  best = std::max(space.distance(x, ty), space.distance(x, tx));
  for (int i = 1; i <= n; ++i) {
    ty = map(ty);
    tx = map(tx);
    best = std::max(best, space.distance(x, ty));
    best = std::max(best, space.distance(x, tx));
  }
  return best;
}

/// d(Tx,Ty) <= alpha d(x,y) on every pair.
template <class Space, class P = typename Space::Point>
VerificationReport verify_banach(const Space& space, const SelfMap<P>& map,
                                 const std::vector<std::pair<P, P>>& pairs, double alpha,
                                 double tol = kDefaultTol) {
  if (alpha < 0.0 || alpha >= 1.0) throw std::invalid_argument("verify_banach: alpha not in [0,1)");
  if (pairs.empty()) throw std::invalid_argument("verify_banach: empty test set");
  detail::ReportBuilder builder(alpha, tol);
  for (std::size_t idx = 0; idx < pairs.size(); ++idx) {
    const auto& [x, y] = pairs[idx];
    builder.record(idx, space.describe(x), space.describe(y),
                   space.distance(map(x), map(y)), space.distance(x, y));
  }
  return builder.finish();
}

/// d(T^m x, T^m y) <= sum_i a_i d(T^i x, T^i y), m = coeffs.size().
template <class Space, class P = typename Space::Point>
VerificationReport verify_convex_m(const Space& space, const SelfMap<P>& map,
                                   const std::vector<std::pair<P, P>>& pairs,
                                   const std::vector<double>& coeffs, double tol = kDefaultTol) {
  if (coeffs.empty()) throw std::invalid_argument("verify_convex_m: empty coeffs");
  double sum = 0.0;
  for (double c : coeffs) sum += c;
  if (sum >= 1.0) throw std::invalid_argument("verify_convex_m: coefficients must sum below 1");
  if (pairs.empty()) throw std::invalid_argument("verify_convex_m: empty test set");
  const int m = static_cast<int>(coeffs.size());
  // Rate 1: the bound base already carries the coefficients.
  detail::ReportBuilder builder(1.0, tol);
  for (std::size_t idx = 0; idx < pairs.size(); ++idx) {
    P tx = pairs[idx].first;
    P ty = pairs[idx].second;
    double rhs = 0.0;
    for (int i = 0; i < m; ++i) {
      rhs += coeffs[static_cast<std::size_t>(i)] * space.distance(tx, ty);
      tx = map(tx);
      ty = map(ty);
    }
    builder.record(idx, space.describe(pairs[idx].first), space.describe(pairs[idx].second),
                   space.distance(tx, ty), rhs);
  }
  return builder.finish();
}

/// d(T^{n(x)} x, T^{n(x)} y) <= lambda M(x,y) for every (x,y).
template <class Space, class P = typename Space::Point>
VerificationReport verify_ciric(const Space& space, const SelfMap<P>& map,
                                const std::vector<P>& test_points_x,
                                const std::vector<P>& test_points_y, double lambda,
                                const std::function<int(const P&)>& n_of,
                                double tol = kDefaultTol) {
  if (lambda < 0.0 || lambda >= 1.0) throw std::invalid_argument("verify_ciric: lambda not in [0,1)");
  if (test_points_x.empty() || test_points_y.empty())
    throw std::invalid_argument("verify_ciric: empty test set");
  detail::ReportBuilder builder(lambda, tol);
  std::size_t idx = 0;
  for (const P& x : test_points_x) {
    const int n = n_of(x);
    if (n < 1) throw std::invalid_argument("verify_ciric: n(x) must be >= 1");
    const P tnx = iterate_point(map, x, n);
    for (const P& y : test_points_y) {
      builder.record(idx++, space.describe(x), space.describe(y),
                     space.distance(tnx, iterate_point(map, y, n)),
                     m_value(space, map, x, y, n));
    }
  }
  return builder.finish();
}

/// d(T^{n(x)} y, T^{n(x)} x) <= lambda d(y,x).
template <class Space, class P = typename Space::Point>
VerificationReport verify_sehgal(const Space& space, const SelfMap<P>& map,
                                 const std::vector<std::pair<P, P>>& pairs, double lambda,
                                 const std::function<int(const P&)>& n_of,
                                 double tol = kDefaultTol) {
  if (lambda < 0.0 || lambda >= 1.0)
    throw std::invalid_argument("verify_sehgal: lambda not in [0,1)");
  if (pairs.empty()) throw std::invalid_argument("verify_sehgal: empty test set");
  detail::ReportBuilder builder(lambda, tol);
  for (std::size_t idx = 0; idx < pairs.size(); ++idx) {
    const auto& [x, y] = pairs[idx];
    const int n = n_of(x);
    if (n < 1) throw std::invalid_argument("verify_sehgal: n(x) must be >= 1");
    builder.record(idx, space.describe(x), space.describe(y),
                   space.distance(iterate_point(map, y, n), iterate_point(map, x, n)),
                   space.distance(y, x));
  }
  return builder.finish();
}

/// Fixed global n: d(T^n x, T^n y) <= lambda max{d(x,T^i y) 0<=i<=n,
/// d(x,T^j x) 1<=j<=n, d(x,y)}.
template <class Space, class P = typename Space::Point>
VerificationReport verify_ciric_variant(const Space& space, const SelfMap<P>& map,
                                        const std::vector<std::pair<P, P>>& pairs, double lambda,
                                        int n, double tol = kDefaultTol) {
  if (lambda < 0.0 || lambda >= 1.0)
    throw std::invalid_argument("verify_ciric_variant: lambda not in [0,1)");
  if (n < 1) throw std::invalid_argument("verify_ciric_variant: n must be >= 1");
  if (pairs.empty()) throw std::invalid_argument("verify_ciric_variant: empty test set");
  detail::ReportBuilder builder(lambda, tol);
  for (std::size_t idx = 0; idx < pairs.size(); ++idx) {
    const auto& [x, y] = pairs[idx];
    double rhs = space.distance(x, y);
    P ty = y;
    P tx = x;
    for (int i = 1; i <= n; ++i) {
      ty = map(ty);
      tx = map(tx);
      rhs = std::max({rhs, space.distance(x, ty), space.distance(x, tx)});
    }
    builder.record(idx, space.describe(x), space.describe(y),
                   space.distance(iterate_point(map, x, n), iterate_point(map, y, n)), rhs);
  }
  return builder.finish();
}

/// Fisher condition: d(T^p x, T^q y) <= lambda max over mixed iterate distances.
template <class Space, class P = typename Space::Point>
VerificationReport verify_fisher(const Space& space, const SelfMap<P>& map,
                                 const std::vector<std::pair<P, P>>& pairs, double lambda, int p,
                                 int q, double tol = kDefaultTol) {
  if (lambda < 0.0 || lambda >= 1.0)
    throw std::invalid_argument("verify_fisher: lambda not in [0,1)");
  if (p < 1 || q < 1) throw std::invalid_argument("verify_fisher: p,q must be >= 1");
  if (pairs.empty()) throw std::invalid_argument("verify_fisher: empty test set");
  detail::ReportBuilder builder(lambda, tol);
  for (std::size_t idx = 0; idx < pairs.size(); ++idx) {
    const auto& [x, y] = pairs[idx];
    std::vector<P> xs(static_cast<std::size_t>(p) + 1);
    std::vector<P> ys(static_cast<std::size_t>(q) + 1);
    xs[0] = x;
    ys[0] = y;
    for (int i = 1; i <= p; ++i) xs[static_cast<std::size_t>(i)] = map(xs[static_cast<std::size_t>(i - 1)]);
    for (int j = 1; j <= q; ++j) ys[static_cast<std::size_t>(j)] = map(ys[static_cast<std::size_t>(j - 1)]);
    double rhs = 0.0;
    for (int i = 0; i <= p; ++i)
      for (int j = 0; j <= q; ++j)
        rhs = std::max(rhs, space.distance(xs[static_cast<std::size_t>(i)], ys[static_cast<std::size_t>(j)]));
    for (int i = 0; i <= p; ++i)
      for (int i2 = 0; i2 <= p; ++i2)
        rhs = std::max(rhs, space.distance(xs[static_cast<std::size_t>(i)], xs[static_cast<std::size_t>(i2)]));
    for (int j = 0; j <= q; ++j)
      for (int j2 = 0; j2 <= q; ++j2)
        rhs = std::max(rhs, space.distance(ys[static_cast<std::size_t>(j)], ys[static_cast<std::size_t>(j2)]));
    builder.record(idx, space.describe(x), space.describe(y),
                   space.distance(xs[static_cast<std::size_t>(p)], ys[static_cast<std::size_t>(q)]), rhs);
  }
  return builder.finish();
}

// ---------------------------------------------------------------------------
// Continuity-type diagnostics.  Limits are approximated over a trailing
// window: the last 20% of the sequence, at least 5 entries.

inline std::size_t trailing_window_start(std::size_t length) {
  if (length == 0) return 0;
  std::size_t window = std::max<std::size_t>(5, (length + 4) / 5);
  if (window > length) window = length;
  return length - window;
}

struct DiagnosticResult {
  bool holds = false;
  bool vacuous = false;  // premise failed, diagnostic is vacuously true
  double limit_value = 0.0;
  double window_value = 0.0;
  std::string detail;
};

/// k-continuity along a sequence: T^{k-1} x_n -> z should force T^k x_n -> Tz.
template <class Space, class P = typename Space::Point>
DiagnosticResult check_k_continuity(const Space& space, const SelfMap<P>& map,
                                    const std::vector<P>& sequence, const P& limit_z, int k,
                                    double tol = kDefaultTol) {
  if (sequence.empty()) throw std::invalid_argument("check_k_continuity: empty sequence");
  if (k < 1) throw std::invalid_argument("check_k_continuity: k must be >= 1");
  const std::size_t start = trailing_window_start(sequence.size());
  double premise = 0.0;
  double conclusion = 0.0;
  const P tz = map(limit_z);
  for (std::size_t i = start; i < sequence.size(); ++i) {
    const P tk1 = iterate_point(map, sequence[i], k - 1);
    premise = std::max(premise, space.distance(tk1, limit_z));
    conclusion = std::max(conclusion, space.distance(map(tk1), tz));
  }
  DiagnosticResult out;
  if (premise > tol) {
    out.holds = true;
    out.vacuous = true;
    out.detail = "premise T^{k-1}x_n -> z not met on the trailing window";
    return out;
  }
  out.holds = conclusion <= tol;
  out.window_value = conclusion;
  out.detail = out.holds ? "T^k x_n -> Tz on the trailing window"
                         : "T^k x_n stays away from Tz";
  return out;
}

/// Orbital lower semicontinuity of D(x) = d(x, Tx) at the orbit limit.
template <class Space, class P = typename Space::Point>
DiagnosticResult check_orbital_lsc(const Space& space, const SelfMap<P>& map,
                                   const std::vector<P>& orbit, const P& limit_z,
                                   double tol = kDefaultTol) {
  if (orbit.empty()) throw std::invalid_argument("check_orbital_lsc: empty orbit");
  const std::size_t start = trailing_window_start(orbit.size());
  double liminf = std::numeric_limits<double>::infinity();
  for (std::size_t i = start; i < orbit.size(); ++i)
    liminf = std::min(liminf, space.distance(orbit[i], map(orbit[i])));
  DiagnosticResult out;
  out.limit_value = space.distance(limit_z, map(limit_z));
  out.window_value = liminf;
  out.holds = out.limit_value <= liminf + tol;
  return out;
}

/// Condition (C;k): D(z) <= k limsup D(x_n), limsup over the trailing window.
template <class Space, class P = typename Space::Point>
DiagnosticResult check_condition_C(const Space& space, const SelfMap<P>& map,
                                   const std::vector<P>& orbit, const P& limit_z, double k,
                                   double tol = kDefaultTol) {
  if (orbit.empty()) throw std::invalid_argument("check_condition_C: empty orbit");
  if (k < 0.0) throw std::invalid_argument("check_condition_C: k must be >= 0");
  const std::size_t start = trailing_window_start(orbit.size());
  double limsup = 0.0;
  for (std::size_t i = start; i < orbit.size(); ++i)
    limsup = std::max(limsup, space.distance(orbit[i], map(orbit[i])));
  DiagnosticResult out;
  out.limit_value = space.distance(limit_z, map(limit_z));
  out.window_value = limsup;
  out.holds = out.limit_value <= k * limsup + tol;
  return out;
}

}  // namespace supra
