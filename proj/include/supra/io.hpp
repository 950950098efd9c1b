#pragma once

// File formats: JSON for spaces, maps, contraction specs and Fredholm
// problems; CSV for traces and solutions.

#include "supra/contraction.hpp"
#include "supra/fredholm.hpp"
#include "supra/kexpr.hpp"
#include "supra/picard.hpp"
#include "supra/space.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace supra::io {

using json = nlohmann::json;

struct FileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw FileError("parse error in '" + path + "': " + e.what());
  }
  return j;
}

inline void save_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw FileError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Spaces.  Finite: {"points": [...], "rho": r, "d": [[...]]}.
// Interval: {"interval": {"a":..,"b":..,"form":..,"lambda_supra"/"alpha_exp":..,"rho":..}}.

using AnySpace = std::variant<FiniteSpace, IntervalSpace>;

inline AnySpace space_from_json(const json& j) {
  try {
    if (j.contains("interval")) {
      const json& spec = j.at("interval");
      const std::string form = spec.at("form").get<std::string>();
      const double a = spec.at("a").get<double>();
      const double b = spec.at("b").get<double>();
      if (form == "absolute")
        return IntervalSpace::absolute(a, b, spec.value("rho", 0.0));
      if (form == "poly")
        return IntervalSpace::poly(a, b, spec.at("lambda_supra").get<double>());
      if (form == "exponential")
        return IntervalSpace::exponential(a, b, spec.at("alpha_exp").get<double>(),
                                          spec.value("rho", 0.0));
      throw FileError("unknown interval form '" + form + "'");
    }
    const auto labels = j.at("points").get<std::vector<std::string>>();
    const auto rows = j.at("d").get<std::vector<std::vector<double>>>();
    Eigen::MatrixXd d(rows.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size()) throw FileError("distance matrix is not square");
      for (std::size_t k = 0; k < rows[i].size(); ++k)
        d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
    }
    return FiniteSpace(labels, d, j.at("rho").get<double>());
  } catch (const json::exception& e) {
    throw FileError(std::string("malformed space file: ") + e.what());
  }
}

inline AnySpace load_space(const std::string& path) { return space_from_json(load_json(path)); }

inline json space_to_json(const FiniteSpace& space) {
  json j;
  j["points"] = space.labels();
  j["rho"] = space.rho();
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(space.size()));
  for (int i = 0; i < space.size(); ++i) {
    rows[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(space.size()));
    for (int k = 0; k < space.size(); ++k)
      rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = space.distance(i, k);
  }
  j["d"] = rows;
  return j;
}

inline json space_to_json(const IntervalSpace& space) {
  json spec;
  spec["a"] = space.a();
  spec["b"] = space.b();
  spec["rho"] = space.rho();
  switch (space.form()) {
    case IntervalSpace::Form::Absolute: spec["form"] = "absolute"; break;
    case IntervalSpace::Form::Poly:
      spec["form"] = "poly";
      spec["lambda_supra"] = space.param();
      break;
    case IntervalSpace::Form::Exponential:
      spec["form"] = "exponential";
      spec["alpha_exp"] = space.param();
      break;
  }
  return json{{"interval", spec}};
}

// ---------------------------------------------------------------------------
// Maps.  Finite: {"assign": {"x": "y", ...}}.
// Interval: {"expr": "x/3", "overrides": [[0, 2]]}; overrides match the input
// point within 1e-9 and take precedence over the expression.

struct FiniteMapFile {
  std::map<std::string, std::string> assign;
};

struct IntervalMapFile {
  std::string expr;
  std::vector<std::pair<double, double>> overrides;
  static constexpr double kOverrideTol = 1e-9;
};

using AnyMap = std::variant<FiniteMapFile, IntervalMapFile>;

inline AnyMap map_from_json(const json& j) {
  try {
    if (j.contains("assign")) {
      FiniteMapFile f;
      for (const auto& [key, value] : j.at("assign").items())
        f.assign[key] = value.get<std::string>();
      return f;
    }
    IntervalMapFile f;
    f.expr = j.at("expr").get<std::string>();
    if (j.contains("overrides"))
      for (const auto& entry : j.at("overrides"))
        f.overrides.emplace_back(entry.at(0).get<double>(), entry.at(1).get<double>());
    return f;
  } catch (const json::exception& e) {
    throw FileError(std::string("malformed map file: ") + e.what());
  }
}

inline AnyMap load_map(const std::string& path) { return map_from_json(load_json(path)); }

inline SelfMap<int> bind_map(const FiniteSpace& space, const FiniteMapFile& file) {
  std::vector<int> assign(static_cast<std::size_t>(space.size()), -1);
  for (const auto& [from, to] : file.assign)
    assign[static_cast<std::size_t>(space.index_of(from))] = space.index_of(to);
  for (int i = 0; i < space.size(); ++i)
    if (assign[static_cast<std::size_t>(i)] < 0)
      throw FileError("map file does not cover point '" + space.labels()[static_cast<std::size_t>(i)] + "'");
  return [assign](const int& i) { return assign[static_cast<std::size_t>(i)]; };
}

inline SelfMap<double> bind_map(const IntervalSpace&, const IntervalMapFile& file) {
  kexpr::Expr expr = kexpr::parse(file.expr);
  auto overrides = file.overrides;
  return [expr, overrides](const double& x) {
    for (const auto& [at, value] : overrides)
      if (std::abs(x - at) <= IntervalMapFile::kOverrideTol) return value;
    return kexpr::eval(expr, x, 0.0);
  };
}

// ---------------------------------------------------------------------------
// Contraction specs: {"kind": .., "params": {..}, "coeffs": [..], "n_map": {..}}.

inline ContractionSpec contraction_spec_from_json(const json& j) {
  ContractionSpec spec;
  try {
    const std::string kind = j.at("kind").get<std::string>();
    const json params = j.value("params", json::object());
    if (kind == "banach") {
      spec.kind = ContractionSpec::Kind::Banach;
      spec.alpha = params.at("alpha").get<double>();
    } else if (kind == "convex_m") {
      spec.kind = ContractionSpec::Kind::ConvexM;
      spec.coeffs = j.at("coeffs").get<std::vector<double>>();
    } else if (kind == "ciric" || kind == "sehgal") {
      spec.kind = kind == "ciric" ? ContractionSpec::Kind::Ciric : ContractionSpec::Kind::Sehgal;
      spec.lambda = params.at("lambda").get<double>();
      if (j.contains("n_map"))
        for (const auto& [key, value] : j.at("n_map").items()) spec.n_map[key] = value.get<int>();
      spec.n = params.value("n", 1);
    } else if (kind == "ciric_variant") {
      spec.kind = ContractionSpec::Kind::CiricVariant;
      spec.lambda = params.at("lambda").get<double>();
      spec.n = params.at("n").get<int>();
    } else if (kind == "fisher") {
      spec.kind = ContractionSpec::Kind::Fisher;
      spec.lambda = params.at("lambda").get<double>();
      spec.p = params.at("p").get<int>();
      spec.q = params.at("q").get<int>();
    } else {
      throw FileError("unknown contraction kind '" + kind + "'");
    }
  } catch (const json::exception& e) {
    throw FileError(std::string("malformed contraction spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

inline ContractionSpec load_contraction_spec(const std::string& path) {
  return contraction_spec_from_json(load_json(path));
}

// ---------------------------------------------------------------------------
// Fredholm problems: {"a","b","kernel_expr"|"kernel_grid","g_expr","grid_n",
// "rule","lambda_supra"}.

inline FredholmProblem fredholm_from_json(const json& j) {
  FredholmProblem problem;
  try {
    problem.a = j.at("a").get<double>();
    problem.b = j.at("b").get<double>();
    problem.grid_n = j.at("grid_n").get<int>();
    const std::string rule = j.value("rule", "trapezoid");
    if (rule == "trapezoid") problem.rule = QuadRule::Trapezoid;
    else if (rule == "simpson") problem.rule = QuadRule::Simpson;
    else throw FileError("unknown quadrature rule '" + rule + "'");
    problem.lambda_supra = j.value("lambda_supra", 1.0);
    if (j.contains("kernel_expr")) {
      kexpr::Expr expr = kexpr::parse(j.at("kernel_expr").get<std::string>());
      problem.kernel =
          Kernel::from_function([expr](double x, double t) { return kexpr::eval(expr, x, t); });
    } else if (j.contains("kernel_grid")) {
      const auto rows = j.at("kernel_grid").get<std::vector<std::vector<double>>>();
      Eigen::MatrixXd m(rows.size(), rows.size());
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size()) throw FileError("kernel_grid is not square");
        for (std::size_t k = 0; k < rows[i].size(); ++k)
          m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
      }
      problem.kernel = Kernel::from_grid(m);
    } else {
      throw FileError("problem file needs kernel_expr or kernel_grid");
    }
    if (j.contains("g_expr")) {
      kexpr::Expr expr = kexpr::parse(j.at("g_expr").get<std::string>());
      problem.g = [expr](double x) { return kexpr::eval(expr, x, 0.0); };
    }
  } catch (const json::exception& e) {
    throw FileError(std::string("malformed problem file: ") + e.what());
  }
  problem.validate();
  return problem;
}

inline FredholmProblem load_fredholm(const std::string& path) {
  return fredholm_from_json(load_json(path));
}

// ---------------------------------------------------------------------------
// CSV exports.

inline std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

/// Trace rows: n, point, displacement, bound, tail.  The final row carries
/// the point only.
template <class Space, class P = typename Space::Point>
void write_trace_csv(std::ostream& out, const Space& space, const OrbitTrace<P>& trace) {
  out << "n,point,displacement,bound,tail\n";
  for (std::size_t n = 0; n < trace.points.size(); ++n) {
    out << n << ',' << space.describe(trace.points[n]) << ',';
    if (n < trace.displacements.size()) out << format_number(trace.displacements[n]);
    out << ',';
    if (n < trace.bounds.size() && !std::isnan(trace.bounds[n])) out << format_number(trace.bounds[n]);
    out << ',';
    if (n < trace.cum_tail.size()) out << format_number(trace.cum_tail[n]);
    out << '\n';
  }
}

template <class Space, class P = typename Space::Point>
void save_trace_csv(const std::string& path, const Space& space, const OrbitTrace<P>& trace) {
  std::ofstream out(path);
  if (!out) throw FileError("cannot write '" + path + "'");
  write_trace_csv(out, space, trace);
}

inline void save_solution_csv(const std::string& path, const GridFunction& f) {
  std::ofstream out(path);
  if (!out) throw FileError("cannot write '" + path + "'");
  out << "node,value\n";
  for (Eigen::Index i = 0; i < f.nodes.size(); ++i)
    out << format_number(f.nodes(i)) << ',' << format_number(f.values(i)) << '\n';
}

}  // namespace supra::io
