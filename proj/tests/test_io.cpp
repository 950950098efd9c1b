#include "supra/corpus.hpp"
#include "supra/io.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace supra;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "supra_io_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("finite space JSON round trip") {
  const FiniteSpace space = corpus::make_4pt_space();
  const auto path = temp_file("space4.json");
  io::save_json(path.string(), io::space_to_json(space));
  const io::AnySpace loaded = io::load_space(path.string());
  REQUIRE(std::holds_alternative<FiniteSpace>(loaded));
  const auto& back = std::get<FiniteSpace>(loaded);
  CHECK(back.labels() == space.labels());
  CHECK(back.rho() == space.rho());
  CHECK((back.matrix() - space.matrix()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("interval space JSON round trip") {
  const IntervalSpace space = corpus::make_interval_T3_space();
  const auto path = temp_file("interval.json");
  io::save_json(path.string(), io::space_to_json(space));
  const io::AnySpace loaded = io::load_space(path.string());
  REQUIRE(std::holds_alternative<IntervalSpace>(loaded));
  const auto& back = std::get<IntervalSpace>(loaded);
  CHECK(back.form() == IntervalSpace::Form::Poly);
  CHECK(back.rho() == doctest::Approx(2.0));
  CHECK(back.distance(0.0, 2.0) == doctest::Approx(6.0));
}

TEST_CASE("malformed files raise FileError") {
  const auto path = temp_file("broken.json");
  std::ofstream(path) << "{oops";
  CHECK_THROWS_AS(io::load_space(path.string()), io::FileError);
  CHECK_THROWS_AS(io::load_space((temp_file("missing").string() + ".nope")), io::FileError);
  CHECK_THROWS_AS(io::space_from_json(io::json{{"points", {"a"}}}), io::FileError);
}

TEST_CASE("finite map binding") {
  const FiniteSpace space = corpus::make_4pt_space();
  io::FiniteMapFile file;
  file.assign = {{"x", "y"}, {"y", "z"}, {"z", "z"}, {"w", "x"}};
  const SelfMap<int> map = io::bind_map(space, file);
  CHECK(map(space.index_of("x")) == space.index_of("y"));
  CHECK(map(space.index_of("z")) == space.index_of("z"));

  io::FiniteMapFile incomplete;
  incomplete.assign = {{"x", "y"}};
  CHECK_THROWS_AS(io::bind_map(space, incomplete), io::FileError);
}

TEST_CASE("interval map binding with overrides") {
  const IntervalSpace space = corpus::make_no_fixed_point_space();
  io::IntervalMapFile file;
  file.expr = "x/2";
  file.overrides = {{0.0, 2.0}};
  const SelfMap<double> map = io::bind_map(space, file);
  CHECK(map(1.0) == doctest::Approx(0.5));
  CHECK(map(0.0) == 2.0);
  CHECK(map(5e-10) == 2.0);   // within the override tolerance
  CHECK(map(1e-8) == doctest::Approx(5e-9));  // outside it

  io::IntervalMapFile bad;
  bad.expr = "x++t";
  CHECK_THROWS_AS(io::bind_map(space, bad), kexpr::ParseError);
}

TEST_CASE("contraction spec parsing") {
  using io::json;
  const ContractionSpec ciric = io::contraction_spec_from_json(
      json{{"kind", "ciric"},
           {"params", {{"lambda", 1.0 / 3.0}}},
           {"n_map", {{"x", 2}, {"y", 2}, {"z", 3}, {"w", 3}}}});
  CHECK(ciric.kind == ContractionSpec::Kind::Ciric);
  CHECK(ciric.lambda == doctest::Approx(1.0 / 3.0));
  CHECK(ciric.n_map.at("z") == 3);

  const ContractionSpec convex = io::contraction_spec_from_json(
      json{{"kind", "convex_m"}, {"coeffs", {0.3, 0.3, 0.3}}});
  CHECK(convex.coeffs.size() == 3);

  CHECK_THROWS_AS(io::contraction_spec_from_json(json{{"kind", "nope"}}), io::FileError);
  CHECK_THROWS_AS(io::contraction_spec_from_json(
                      json{{"kind", "banach"}, {"params", {{"alpha", 1.2}}}}),
                  std::invalid_argument);
}

TEST_CASE("fredholm problem parsing") {
  using io::json;
  const FredholmProblem p = io::fredholm_from_json(json{{"a", 0.0},
                                                        {"b", 1.0},
                                                        {"kernel_expr", "x*t/2"},
                                                        {"g_expr", "x"},
                                                        {"grid_n", 11},
                                                        {"rule", "simpson"}});
  CHECK(p.rule == QuadRule::Simpson);
  CHECK(p.kernel.at(1.0, 0.5) == doctest::Approx(0.25));
  CHECK(p.g(0.7) == doctest::Approx(0.7));
  CHECK_THROWS_AS(io::fredholm_from_json(json{{"a", 0.0}, {"b", 1.0}, {"grid_n", 11}}),
                  io::FileError);
}

TEST_CASE("trace CSV export") {
  const FiniteSpace space = corpus::make_4pt_space();
  const SelfMap<int> map = corpus::assignment_map(corpus::make_4pt_assignment());
  auto trace = iterate(space, map, 3, {.max_iters = 10, .displacement_tol = 0.0});
  annotate_bounds(trace, 1, 0.9);
  std::ostringstream out;
  io::write_trace_csv(out, space, trace);
  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "n,point,displacement,bound,tail");
  std::getline(lines, line);
  CHECK(line.rfind("0,w,1,,", 0) == 0);
  int rows = 1;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 4);  // one per orbit point
}

TEST_CASE("solution CSV export") {
  GridFunction f{make_grid(0.0, 1.0, 3), Eigen::VectorXd::LinSpaced(3, 0.0, 2.0)};
  const auto path = temp_file("solution.csv");
  io::save_solution_csv(path.string(), f);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "node,value");
  std::getline(in, line);
  CHECK(line == "0,0");
  std::getline(in, line);
  CHECK(line == "0.5,1");
}
