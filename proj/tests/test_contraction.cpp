#include "supra/contraction.hpp"
#include "supra/corpus.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace supra;

namespace {

std::vector<std::pair<double, double>> grid_pairs(const IntervalSpace& space, int n) {
  const auto grid = space.grid(n);
  std::vector<std::pair<double, double>> pairs;
  for (double x : grid)
    for (double y : grid) pairs.emplace_back(x, y);
  return pairs;
}

std::vector<std::pair<int, int>> all_pairs(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) pairs.emplace_back(i, j);
  return pairs;
}

}  // namespace

TEST_CASE("m_value") {
  const FiniteSpace four = corpus::make_4pt_space();
  const SelfMap<int> map4 = corpus::assignment_map(corpus::make_4pt_assignment());
  // x against w with two iterations: the maximum is d(x,y) = 3, reached both
  // at T^2 w = y and at T x = y.
  CHECK(m_value(four, map4, four.index_of("x"), four.index_of("w"), 2) == doctest::Approx(3.0));

  const FiniteSpace five = corpus::make_5pt_space();
  const SelfMap<int> map5 = corpus::assignment_map(corpus::make_5pt_assignment());
  CHECK(m_value(five, map5, 3, 3, 4) == 0.0);  // w is fixed

  const IntervalSpace poly = corpus::make_interval_T3_space();
  const SelfMap<double> third = corpus::make_interval_T3_map();
  CHECK(m_value(poly, third, 1.0, 0.0, 1) == doctest::Approx(2.0));

  CHECK_THROWS_AS(m_value(poly, third, 1.0, 0.0, 0), std::invalid_argument);
}

TEST_CASE("verify_banach") {
  const IntervalSpace flat = IntervalSpace::absolute(0.0, 2.0);
  const SelfMap<double> third = [](const double& x) { return x / 3.0; };
  const auto pairs = grid_pairs(flat, 100);

  const auto ok = verify_banach(flat, third, pairs, 1.0 / 3.0);
  CHECK(ok.satisfied);
  CHECK(ok.pairs_tested == pairs.size());
  CHECK(ok.worst_ratio == doctest::Approx(1.0).epsilon(1e-9));

  const SelfMap<double> ident = [](const double& x) { return x; };
  const auto bad = verify_banach(flat, ident, pairs, 0.9);
  CHECK_FALSE(bad.satisfied);
  CHECK_FALSE(bad.witnesses.empty());
  CHECK(bad.worst_ratio == doctest::Approx(1.0 / 0.9));

  // In the poly suprametric the same map still contracts at rate 1/3:
  // (u/3)(u/3 + 1) <= (1/3) u (u + 1) on [0,2].
  const IntervalSpace poly = corpus::make_interval_T3_space();
  const auto poly_report = verify_banach(poly, third, grid_pairs(poly, 100), 1.0 / 3.0);
  CHECK(poly_report.satisfied);
  CHECK(poly_report.worst_ratio <= 1.0 + 1e-12);

  CHECK_THROWS_AS(verify_banach(flat, third, {}, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(verify_banach(flat, third, pairs, 1.0), std::invalid_argument);
}

TEST_CASE("verify_convex_m") {
  const FiniteSpace five = corpus::make_5pt_space();
  const SelfMap<int> map5 = corpus::assignment_map(corpus::make_5pt_assignment());

  const auto report = verify_convex_m(five, map5, all_pairs(5), {0.3, 0.3, 0.3});
  CHECK(report.satisfied);
  CHECK(report.worst_ratio == 0.0);  // T^3 is constant, every lhs vanishes

  const std::vector<std::pair<int, int>> diag = {{1, 1}};
  const auto vac = verify_convex_m(five, map5, diag, {0.2, 0.2});
  CHECK(vac.satisfied);
  CHECK(vac.worst_ratio == 0.0);  // 0/0 pairs count as ratio 0

  CHECK_THROWS_AS(verify_convex_m(five, map5, all_pairs(5), {}), std::invalid_argument);
  CHECK_THROWS_AS(verify_convex_m(five, map5, all_pairs(5), {0.6, 0.6}), std::invalid_argument);
}

TEST_CASE("banach implies a convex certificate of any order") {
  const IntervalSpace flat = IntervalSpace::absolute(0.0, 2.0);
  const SelfMap<double> third = [](const double& x) { return x / 3.0; };
  const auto pairs = grid_pairs(flat, 60);
  const double alpha = 1.0 / 3.0;
  REQUIRE(verify_banach(flat, third, pairs, alpha).satisfied);

  for (int m : {2, 3}) {
    // Worst observed m-step ratio; must not exceed alpha^m.
    double alpha_prime = 0.0;
    for (const auto& [x, y] : pairs) {
      const double base = flat.distance(x, y);
      if (base == 0.0) continue;
      alpha_prime = std::max(
          alpha_prime,
          flat.distance(iterate_point(third, x, m), iterate_point(third, y, m)) / base);
    }
    CHECK(alpha_prime <= std::pow(alpha, m) + 1e-9);
    std::vector<double> coeffs(static_cast<std::size_t>(m), 0.0);
    coeffs[0] = alpha_prime;
    CHECK(verify_convex_m(flat, third, pairs, coeffs).satisfied);
  }
}

TEST_CASE("verify_ciric on the 4-point example") {
  const FiniteSpace space = corpus::make_4pt_space();
  const SelfMap<int> map = corpus::assignment_map(corpus::make_4pt_assignment());
  const std::vector<int> points = {0, 1, 2, 3};
  const std::function<int(const int&)> n_of = [](const int& p) { return p <= 1 ? 2 : 3; };

  const auto report = verify_ciric(space, map, points, points, 1.0 / 3.0, n_of, 1e-12);
  CHECK(report.satisfied);
  CHECK(report.pairs_tested == 16);
  CHECK(report.worst_ratio == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(verify_ciric(space, map, {}, points, 0.5, n_of), std::invalid_argument);
  const std::function<int(const int&)> bad_n = [](const int&) { return 0; };
  CHECK_THROWS_AS(verify_ciric(space, map, points, points, 0.5, bad_n), std::invalid_argument);
}

TEST_CASE("verify_ciric on Tx = x/3 over the poly interval") {
  const IntervalSpace space = corpus::make_interval_T3_space();
  const SelfMap<double> map = corpus::make_interval_T3_map();
  const auto grid = space.grid(50);
  const std::function<int(const double&)> n3 = [](const double&) { return 3; };
  const auto report = verify_ciric(space, map, grid, grid, 29.0 / 729.0, n3, 1e-12);
  CHECK(report.satisfied);
  CHECK(report.pairs_tested == 2500);
}

TEST_CASE("verify_sehgal") {
  const IntervalSpace flat = IntervalSpace::absolute(0.0, 2.0);
  const SelfMap<double> third = [](const double& x) { return x / 3.0; };
  const std::function<int(const double&)> n1 = [](const double&) { return 1; };
  const auto pairs = grid_pairs(flat, 40);

  CHECK(verify_sehgal(flat, third, pairs, 0.5, n1).satisfied);

  const SelfMap<double> ident = [](const double& x) { return x; };
  CHECK_FALSE(verify_sehgal(flat, ident, pairs, 0.5, n1).satisfied);

  // On the 4-point space the plain d(y,x) bound is too weak: at (x,w) the
  // left side is d(T^2 w, T^2 x) = d(y,z) = 1 while d(w,x) = 1.
  const FiniteSpace four = corpus::make_4pt_space();
  const SelfMap<int> map4 = corpus::assignment_map(corpus::make_4pt_assignment());
  const std::function<int(const int&)> n_of = [](const int& p) { return p <= 1 ? 2 : 3; };
  const auto report = verify_sehgal(four, map4, all_pairs(4), 1.0 / 3.0, n_of);
  CHECK_FALSE(report.satisfied);
  bool found = false;
  for (const auto& w : report.witnesses)
    if (w.x == "x" && w.y == "w") {
      found = true;
      CHECK(w.lhs == doctest::Approx(1.0));
      CHECK(w.rhs_max == doctest::Approx(1.0));
    }
  CHECK(found);
}

TEST_CASE("sehgal implies the quasi-contraction with n = 1") {
  const IntervalSpace flat = IntervalSpace::absolute(0.0, 2.0);
  const SelfMap<double> third = [](const double& x) { return x / 3.0; };
  const std::function<int(const double&)> n1 = [](const double&) { return 1; };
  const auto grid = flat.grid(40);
  REQUIRE(verify_sehgal(flat, third, grid_pairs(flat, 40), 0.5, n1).satisfied);
  // d(x,y) is among the max terms, so the bound can only grow.
  CHECK(verify_ciric(flat, third, grid, grid, 0.5, n1).satisfied);
}

TEST_CASE("verify_ciric_variant on the jump map") {
  const IntervalSpace space = corpus::make_no_fixed_point_space();
  const SelfMap<double> map = corpus::make_no_fixed_point_map();

  const auto violated = verify_ciric_variant(space, map, {{0.1, 0.0}}, 0.5, 2);
  REQUIRE_FALSE(violated.satisfied);
  REQUIRE(violated.witnesses.size() == 1);
  CHECK(violated.witnesses.front().lhs == doctest::Approx(0.975).epsilon(1e-12));
  CHECK(violated.witnesses.front().rhs_max == doctest::Approx(1.9).epsilon(1e-12));

  CHECK(verify_ciric_variant(space, map, {{0.0, 0.1}}, 0.5, 2).satisfied);
  CHECK(verify_ciric_variant(space, map, {{0.3, 0.3}}, 0.5, 2).satisfied);

  CHECK_THROWS_AS(verify_ciric_variant(space, map, {{0.1, 0.0}}, 0.5, 0), std::invalid_argument);
}

TEST_CASE("verify_fisher") {
  const IntervalSpace flat = IntervalSpace::absolute(0.0, 2.0);
  const SelfMap<double> third = [](const double& x) { return x / 3.0; };
  const auto report = verify_fisher(flat, third, grid_pairs(flat, 40), 0.5, 1, 1);
  CHECK(report.satisfied);
  CHECK(report.worst_ratio <= (1.0 / 3.0) / 0.5 + 1e-12);

  const FiniteSpace five = corpus::make_5pt_space();
  const SelfMap<int> map5 = corpus::assignment_map(corpus::make_5pt_assignment());
  const auto zero_lhs = verify_fisher(five, map5, all_pairs(5), 0.5, 3, 3);
  CHECK(zero_lhs.satisfied);
  CHECK(zero_lhs.worst_ratio == 0.0);

  const std::vector<std::pair<double, double>> diag = {{0.7, 0.7}};
  CHECK(verify_fisher(flat, third, diag, 0.5, 2, 2).worst_ratio == 0.0);

  CHECK_THROWS_AS(verify_fisher(flat, third, diag, 0.5, 0, 1), std::invalid_argument);
}

TEST_CASE("violated reports reproduce their witnesses exactly") {
  const FiniteSpace four = corpus::make_4pt_space();
  const SelfMap<int> map4 = corpus::assignment_map(corpus::make_4pt_assignment());
  const std::function<int(const int&)> n_of = [](const int& p) { return p <= 1 ? 2 : 3; };
  const auto report = verify_sehgal(four, map4, all_pairs(4), 1.0 / 3.0, n_of);
  REQUIRE_FALSE(report.satisfied);
  for (const auto& w : report.witnesses) {
    const int x = four.index_of(w.x), y = four.index_of(w.y);
    const int n = n_of(x);
    const double lhs = four.distance(iterate_point(map4, y, n), iterate_point(map4, x, n));
    CHECK(lhs == w.lhs);
    CHECK(four.distance(y, x) == w.rhs_max);
    CHECK(lhs > (1.0 / 3.0) * w.rhs_max + kDefaultTol);
  }
}

TEST_CASE("reports are deterministic") {
  const IntervalSpace space = corpus::make_interval_T3_space();
  const SelfMap<double> map = corpus::make_interval_T3_map();
  const auto grid = space.grid(30);
  const std::function<int(const double&)> n3 = [](const double&) { return 3; };
  const auto a = verify_ciric(space, map, grid, grid, 29.0 / 729.0, n3);
  const auto b = verify_ciric(space, map, grid, grid, 29.0 / 729.0, n3);
  CHECK(a.satisfied == b.satisfied);
  CHECK(a.pairs_tested == b.pairs_tested);
  CHECK(a.worst_ratio == b.worst_ratio);
  CHECK(a.witnesses.size() == b.witnesses.size());
}

TEST_CASE("contraction spec validation") {
  ContractionSpec spec;
  spec.kind = ContractionSpec::Kind::Banach;
  spec.alpha = 0.5;
  CHECK_NOTHROW(spec.validate());
  spec.alpha = 1.0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

  spec.kind = ContractionSpec::Kind::ConvexM;
  spec.coeffs = {0.5, 0.6};
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.coeffs = {0.6, 0.4};
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);  // sum not < 1
  spec.coeffs = {0.5, 0.3};
  CHECK_NOTHROW(spec.validate());

  spec.kind = ContractionSpec::Kind::Ciric;
  spec.lambda = 0.5;
  spec.n_map = {{"x", 0}};
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.n_map = {{"x", 2}};
  CHECK_NOTHROW(spec.validate());

  spec.kind = ContractionSpec::Kind::Fisher;
  spec.p = 0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("k-continuity diagnostic") {
  const IntervalSpace space = corpus::make_no_fixed_point_space();
  const SelfMap<double> jump = corpus::make_no_fixed_point_map();

  std::vector<double> seq;
  for (int n = 0; n <= 60; ++n) seq.push_back(2.0 / std::pow(2.0, n));
  for (int k : {1, 2, 3}) {
    const auto r = check_k_continuity(space, jump, seq, 0.0, k);
    CHECK_FALSE(r.holds);
    CHECK_FALSE(r.vacuous);
  }

  // Constant sequence at a fixed point.
  const IntervalSpace flat = IntervalSpace::absolute(0.0, 2.0);
  const SelfMap<double> third = [](const double& x) { return x / 3.0; };
  const std::vector<double> at_zero(10, 0.0);
  CHECK(check_k_continuity(flat, third, at_zero, 0.0, 3).holds);

  // x_n = 1/n with a tolerance wide enough for the finite tail.
  std::vector<double> harmonic;
  for (int n = 1; n <= 2000; ++n) harmonic.push_back(1.0 / n);
  const auto r = check_k_continuity(flat, third, harmonic, 0.0, 2, 1e-3);
  CHECK(r.holds);
  CHECK_FALSE(r.vacuous);

  // Premise failure is reported as vacuous truth.
  const std::vector<double> away(10, 1.0);
  const auto vac = check_k_continuity(flat, third, away, 0.0, 1);
  CHECK(vac.holds);
  CHECK(vac.vacuous);

  CHECK_THROWS_AS(check_k_continuity(flat, third, {}, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(check_k_continuity(flat, third, at_zero, 0.0, 0), std::invalid_argument);
}

TEST_CASE("orbital lower semicontinuity diagnostic") {
  const IntervalSpace space = corpus::make_no_fixed_point_space();
  const SelfMap<double> jump = corpus::make_no_fixed_point_map();
  const auto orbit = iterate(space, jump, 1.0, {.max_iters = 80, .displacement_tol = -1.0});
  const auto bad = check_orbital_lsc(space, jump, orbit.points, 0.0);
  CHECK_FALSE(bad.holds);
  CHECK(bad.limit_value == 2.0);

  const IntervalSpace flat = IntervalSpace::absolute(0.0, 2.0);
  const SelfMap<double> third = [](const double& x) { return x / 3.0; };
  const auto shrink = iterate(flat, third, 2.0, {.max_iters = 60, .displacement_tol = -1.0});
  CHECK(check_orbital_lsc(flat, third, shrink.points, 0.0).holds);

  const FiniteSpace four = corpus::make_4pt_space();
  const SelfMap<int> map4 = corpus::assignment_map(corpus::make_4pt_assignment());
  const auto t4 = iterate(four, map4, 3, {.max_iters = 10, .displacement_tol = 0.0});
  CHECK(check_orbital_lsc(four, map4, t4.points, 2).holds);
}

TEST_CASE("condition (C;k) diagnostic") {
  const IntervalSpace space = corpus::make_no_fixed_point_space();
  const SelfMap<double> jump = corpus::make_no_fixed_point_map();
  const auto orbit = iterate(space, jump, 1.0, {.max_iters = 80, .displacement_tol = -1.0});
  for (double k : {1.0, 10.0, 1e6}) CHECK_FALSE(check_condition_C(space, jump, orbit.points, 0.0, k).holds);

  const IntervalSpace flat = IntervalSpace::absolute(0.0, 2.0);
  const SelfMap<double> third = [](const double& x) { return x / 3.0; };
  const auto shrink = iterate(flat, third, 2.0, {.max_iters = 60, .displacement_tol = -1.0});
  CHECK(check_condition_C(flat, third, shrink.points, 0.0, 1.0).holds);
  CHECK(check_condition_C(flat, third, shrink.points, 0.0, 0.0).holds);  // D(z) = 0

  CHECK_THROWS_AS(check_condition_C(flat, third, shrink.points, 0.0, -1.0),
                  std::invalid_argument);
}

TEST_CASE("trailing window sizing") {
  CHECK(trailing_window_start(0) == 0);
  CHECK(trailing_window_start(3) == 0);   // window clamps to the whole sequence
  CHECK(trailing_window_start(10) == 5);  // min window of 5
  CHECK(trailing_window_start(100) == 80);
}
