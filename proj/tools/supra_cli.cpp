// Command-line front end: batch axiom verification, contraction checking,
// Picard orbits with bound annotation, Fredholm solving and the example
// corpus.
//
// Exit codes: 0 success, 1 verification failure (witnesses printed),
// 2 input/validation error, 3 non-convergence, 4 certificate refusal.

#include "supra/contraction.hpp"
#include "supra/corpus.hpp"
#include "supra/fredholm.hpp"
#include "supra/io.hpp"
#include "supra/kexpr.hpp"
#include "supra/picard.hpp"
#include "supra/space.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolated = 1;
constexpr int kExitInput = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitCertificate = 4;

void print_report(const supra::VerificationReport& report) {
  std::printf("verdict: %s\n", report.satisfied ? "satisfied" : "violated");
  std::printf("pairs tested: %zu\n", report.pairs_tested);
  std::printf("worst ratio: %.12g\n", report.worst_ratio);
  const std::size_t shown = std::min<std::size_t>(report.witnesses.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) {
    const auto& w = report.witnesses[i];
    std::printf("witness: (%s, %s) lhs=%.12g rhs_max=%.12g ratio=%.12g\n", w.x.c_str(),
                w.y.c_str(), w.lhs, w.rhs_max, w.ratio);
  }
  if (report.witnesses.size() > shown)
    std::printf("... and %zu more witnesses\n", report.witnesses.size() - shown);
}

int run_verify_space(const std::string& space_file, double tol) {
  const supra::io::AnySpace any = supra::io::load_space(space_file);
  if (!std::holds_alternative<supra::FiniteSpace>(any)) {
    std::fprintf(stderr, "verify-space requires a finite space file\n");
    return kExitInput;
  }
  const auto& space = std::get<supra::FiniteSpace>(any);
  const supra::AxiomReport report = supra::check_axioms(space, tol);
  std::printf("identity: %s\n", report.identity_ok ? "ok" : "violated");
  std::printf("symmetry: %s\n", report.symmetry_ok ? "ok" : "violated");
  std::printf("suprametric (rho = %.12g): %s\n", space.rho(), report.supra_ok ? "ok" : "violated");
  if (report.identity_ok && report.symmetry_ok)
    std::printf("minimal rho = %.12g\n", report.minimal_rho);
  for (const auto& v : report.violations)
    std::printf("violation: triple (%s, %s, %s) defect %.12g\n", space.describe(v.i).c_str(),
                space.describe(v.k).c_str(), space.describe(v.j).c_str(), v.defect);
  return report.all_ok() ? kExitOk : kExitViolated;
}

template <class Space, class P = typename Space::Point>
supra::VerificationReport dispatch_spec(const Space& space, const supra::SelfMap<P>& map,
                                        const std::vector<P>& points,
                                        const supra::ContractionSpec& spec,
                                        const std::function<int(const P&)>& n_of, double tol) {
  std::vector<std::pair<P, P>> pairs;
  for (const P& x : points)
    for (const P& y : points) pairs.emplace_back(x, y);
  using Kind = supra::ContractionSpec::Kind;
  switch (spec.kind) {
    case Kind::Banach: return supra::verify_banach(space, map, pairs, spec.alpha, tol);
    case Kind::ConvexM: return supra::verify_convex_m(space, map, pairs, spec.coeffs, tol);
    case Kind::Ciric: return supra::verify_ciric(space, map, points, points, spec.lambda, n_of, tol);
    case Kind::Sehgal: return supra::verify_sehgal(space, map, pairs, spec.lambda, n_of, tol);
    case Kind::CiricVariant:
      return supra::verify_ciric_variant(space, map, pairs, spec.lambda, spec.n, tol);
    case Kind::Fisher: return supra::verify_fisher(space, map, pairs, spec.lambda, spec.p, spec.q, tol);
  }
  throw std::logic_error("unhandled contraction kind");
}

int run_verify_contraction(const std::string& space_file, const std::string& map_file,
                           const std::string& spec_file, int grid, int samples, unsigned seed,
                           double tol) {
  const supra::io::AnySpace any_space = supra::io::load_space(space_file);
  const supra::io::AnyMap any_map = supra::io::load_map(map_file);
  const supra::ContractionSpec spec = supra::io::load_contraction_spec(spec_file);

  supra::VerificationReport report;
  if (std::holds_alternative<supra::FiniteSpace>(any_space)) {
    const auto& space = std::get<supra::FiniteSpace>(any_space);
    if (!std::holds_alternative<supra::io::FiniteMapFile>(any_map))
      throw supra::io::FileError("finite space needs a finite map file");
    const auto map = supra::io::bind_map(space, std::get<supra::io::FiniteMapFile>(any_map));
    std::vector<int> points(static_cast<std::size_t>(space.size()));
    for (int i = 0; i < space.size(); ++i) points[static_cast<std::size_t>(i)] = i;
    const std::function<int(const int&)> n_of = [&space, &spec](const int& p) {
      if (!spec.n_map.empty()) {
        const auto it = spec.n_map.find(space.labels()[static_cast<std::size_t>(p)]);
        if (it == spec.n_map.end())
          throw std::invalid_argument("n_map does not cover point '" +
                                      space.labels()[static_cast<std::size_t>(p)] + "'");
        return it->second;
      }
      return spec.n;
    };
    report = dispatch_spec(space, map, points, spec, n_of, tol);
  } else {
    const auto& space = std::get<supra::IntervalSpace>(any_space);
    if (!std::holds_alternative<supra::io::IntervalMapFile>(any_map))
      throw supra::io::FileError("interval space needs an expression map file");
    const auto map = supra::io::bind_map(space, std::get<supra::io::IntervalMapFile>(any_map));
    std::vector<double> points = space.grid(grid);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uniform(space.a(), space.b());
    for (int i = 0; i < samples; ++i) points.push_back(uniform(rng));
    const std::function<int(const double&)> n_of = [&spec](const double&) { return spec.n; };
    report = dispatch_spec(space, map, points, spec, n_of, tol);
  }
  print_report(report);
  return report.satisfied ? kExitOk : kExitViolated;
}

int run_orbit(const std::string& space_file, const std::string& map_file, const std::string& start,
              int max_iters, double tol, const std::string& bounds, const std::string& out_file) {
  const supra::io::AnySpace any_space = supra::io::load_space(space_file);
  const supra::io::AnyMap any_map = supra::io::load_map(map_file);

  int bounds_m = 0;
  double bounds_alpha = 0.0;
  if (!bounds.empty()) {
    if (std::sscanf(bounds.c_str(), "%d,%lf", &bounds_m, &bounds_alpha) != 2 || bounds_m < 1 ||
        bounds_alpha < 0.0 || bounds_alpha >= 1.0)
      throw std::invalid_argument("--bounds expects m,alpha with m >= 1 and alpha in [0,1)");
  }

  const auto finish = [&](const auto& space, auto trace) -> int {
    if (bounds_m > 0 && trace.points.size() > static_cast<std::size_t>(bounds_m)) {
      supra::annotate_bounds(trace, bounds_m, bounds_alpha);
      const auto bound_report = supra::verify_trace_bounds(trace, bounds_m, bounds_alpha);
      for (const auto& v : bound_report.violations)
        std::printf("bound violation at step %d: displacement %.12g > bound %.12g\n", v.index,
                    v.displacement, v.bound);
      if (bound_report.ok()) std::printf("all displacements within the a-priori bound\n");
    }
    if (!out_file.empty()) supra::io::save_trace_csv(out_file, space, trace);
    std::printf("steps: %zu\n", trace.displacements.size());
    std::printf("final point: %s\n", space.describe(trace.points.back()).c_str());
    std::printf("residual: %.12g\n", trace.residual);
    std::printf("halt: %s\n", trace.halt_reason.c_str());
    if (trace.converged) return kExitOk;
    // Near-convergence followed by a displacement spike means the orbit is
    // approaching a point the map jumps away from.
    double min_disp = std::numeric_limits<double>::infinity();
    bool spiked = false;
    for (double d : trace.displacements) {
      if (d < min_disp) min_disp = d;
      if (min_disp < 1e-6 && d > std::max(1000.0 * min_disp, 1e-3)) spiked = true;
    }
    if (spiked) std::printf("limit is not a fixed point\n");
    else std::printf("did not converge\n");
    return kExitNoConvergence;
  };

  supra::StoppingCriteria stop{.max_iters = max_iters, .displacement_tol = tol};
  if (std::holds_alternative<supra::FiniteSpace>(any_space)) {
    const auto& space = std::get<supra::FiniteSpace>(any_space);
    if (!std::holds_alternative<supra::io::FiniteMapFile>(any_map))
      throw supra::io::FileError("finite space needs a finite map file");
    const auto map = supra::io::bind_map(space, std::get<supra::io::FiniteMapFile>(any_map));
    return finish(space, supra::iterate(space, map, space.index_of(start), stop));
  }
  const auto& space = std::get<supra::IntervalSpace>(any_space);
  if (!std::holds_alternative<supra::io::IntervalMapFile>(any_map))
    throw supra::io::FileError("interval space needs an expression map file");
  const auto map = supra::io::bind_map(space, std::get<supra::io::IntervalMapFile>(any_map));
  return finish(space, supra::iterate(space, map, std::stod(start), stop));
}

int run_solve_fredholm(const std::string& problem_file, const std::string& out_file,
                       const std::string& trace_file, bool allow_invalid, int max_iters,
                       double tol, double f0_const) {
  const supra::FredholmProblem problem = supra::io::load_fredholm(problem_file);
  supra::SolveResult result;
  try {
    const Eigen::VectorXd f0 = Eigen::VectorXd::Constant(problem.grid_n, f0_const);
    result = supra::solve(problem, {.max_iters = max_iters, .displacement_tol = tol},
                          f0, allow_invalid);
  } catch (const supra::CertificateRefused& e) {
    std::printf("certificate: M=%.12g L=%.12g a0=%.12g a1=0 -> invalid\n", e.certificate.M,
                e.certificate.L, e.certificate.a0);
    std::printf("refusing to solve (use --allow-invalid-certificate to override)\n");
    return kExitCertificate;
  }
  const auto& cert = result.certificate;
  std::printf("certificate: M=%.12g L=%.12g a0=%.12g a1=0 -> %s\n", cert.M, cert.L, cert.a0,
              cert.valid ? "valid" : "invalid");
  std::printf("iterations: %d\n", result.iterations);
  std::printf("residual sup-norm: %.12g\n", result.residual_sup);
  if (result.diverged) std::printf("divergence detected: residual grew over a window\n");
  if (!out_file.empty()) supra::io::save_solution_csv(out_file, result.solution);
  if (!trace_file.empty()) {
    std::ofstream out(trace_file);
    if (!out) throw supra::io::FileError("cannot write '" + trace_file + "'");
    out << "n,point,displacement,bound,tail\n";
    std::vector<double> tail(result.supra_displacements.size() + 1, 0.0);
    for (std::size_t i = result.supra_displacements.size(); i-- > 0;)
      tail[i] = tail[i + 1] + result.supra_displacements[i];
    for (std::size_t n = 0; n < result.iterate_sup_norms.size(); ++n) {
      out << n << ",sup=" << supra::io::format_number(result.iterate_sup_norms[n]) << ',';
      if (n < result.supra_displacements.size())
        out << supra::io::format_number(result.supra_displacements[n]);
      out << ",,";
      if (n < result.supra_displacements.size()) out << supra::io::format_number(tail[n]);
      out << '\n';
    }
  }
  if (!cert.valid) return kExitNoConvergence;
  return result.converged || result.residual_sup <= tol ? kExitOk : kExitNoConvergence;
}

int run_corpus(bool list, const std::string& run_name, bool run_all) {
  if (list) {
    for (const auto& name : supra::corpus::fixture_names()) std::printf("%s\n", name.c_str());
    return kExitOk;
  }
  std::vector<supra::corpus::FixtureResult> results;
  if (run_all) {
    results = supra::corpus::run_all();
  } else {
    results.push_back(supra::corpus::run_by_name(run_name));
  }
  bool all_pass = true;
  for (const auto& fixture : results) {
    const bool pass = fixture.all_pass();
    all_pass = all_pass && pass;
    std::printf("%-28s %s\n", fixture.name.c_str(), pass ? "PASS" : "FAIL");
    for (const auto& fact : fixture.facts)
      std::printf("  [%s]%s %s\n", fact.pass ? "ok" : "FAIL", fact.discrepancy ? " (discrepancy)" : "",
                  fact.name.c_str());
  }
  return all_pass ? kExitOk : kExitViolated;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Suprametric fixed-point toolkit"};
  app.require_subcommand(1);

  std::string space_file, map_file, spec_file, problem_file, out_file, trace_file;
  std::string start, bounds, run_name;
  double tol = supra::kDefaultTol;
  int grid = 50, samples = 0, max_iters = 1000;
  unsigned seed = 0;
  bool allow_invalid = false, list = false, run_all = false;
  double f0_const = 0.0;

  auto* vs = app.add_subcommand("verify-space", "Check suprametric axioms of a finite space");
  vs->add_option("space", space_file, "space file")->required();
  vs->add_option("--tol", tol, "axiom tolerance");

  auto* vc = app.add_subcommand("verify-contraction", "Verify a contraction hypothesis");
  vc->add_option("space", space_file, "space file")->required();
  vc->add_option("map", map_file, "map file")->required();
  vc->add_option("spec", spec_file, "contraction spec file")->required();
  vc->add_option("--grid", grid, "grid points for interval domains");
  vc->add_option("--samples", samples, "extra random samples");
  vc->add_option("--seed", seed, "random seed");
  vc->add_option("--tol", tol, "comparison tolerance");

  auto* ob = app.add_subcommand("orbit", "Run a Picard orbit and export the trace");
  ob->add_option("space", space_file, "space file")->required();
  ob->add_option("map", map_file, "map file")->required();
  ob->add_option("--start", start, "start point (label or number)")->required();
  ob->add_option("--max-iters", max_iters, "iteration cap");
  ob->add_option("--tol", tol, "displacement tolerance");
  ob->add_option("--bounds", bounds, "m,alpha: annotate and check a-priori bounds");
  ob->add_option("--out", out_file, "trace CSV output path");

  auto* sf = app.add_subcommand("solve-fredholm", "Solve a Fredholm problem by Picard iteration");
  sf->add_option("problem", problem_file, "problem file")->required();
  sf->add_option("--out", out_file, "solution CSV output path");
  sf->add_option("--trace", trace_file, "trace CSV output path");
  sf->add_option("--max-iters", max_iters, "iteration cap");
  sf->add_option("--tol", tol, "residual tolerance");
  sf->add_option("--f0", f0_const, "constant initial iterate value");
  sf->add_flag("--allow-invalid-certificate", allow_invalid, "solve even when L >= 1");

  auto* co = app.add_subcommand("corpus", "Run the example corpus");
  co->add_flag("--list", list, "list fixtures");
  co->add_option("--run", run_name, "run one fixture");
  co->add_flag("--run-all", run_all, "run every fixture");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (vs->parsed()) return run_verify_space(space_file, tol);
    if (vc->parsed()) return run_verify_contraction(space_file, map_file, spec_file, grid, samples,
                                                    seed, tol);
    if (ob->parsed()) return run_orbit(space_file, map_file, start, max_iters, tol, bounds, out_file);
    if (sf->parsed())
      return run_solve_fredholm(problem_file, out_file, trace_file, allow_invalid, max_iters, tol,
                                f0_const);
    if (co->parsed()) {
      if (!list && !run_all && run_name.empty()) {
        std::fprintf(stderr, "corpus: need --list, --run or --run-all\n");
        return kExitInput;
      }
      return run_corpus(list, run_name, run_all);
    }
  } catch (const supra::io::FileError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  } catch (const supra::kexpr::ParseError& e) {
    std::fprintf(stderr, "expression error: %s\n", e.what());
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  }
  return kExitInput;
}
