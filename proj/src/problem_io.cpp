#include "vilab/problem_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace vilab {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error("problem file: " + where + ": " + what);
}

Eigen::VectorXd parse_vector(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a nonempty array of numbers");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) fail(where, "expected a number at index " + std::to_string(i));
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

Eigen::MatrixXd parse_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a nonempty array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  Eigen::MatrixXd m;
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array()) fail(where, "row " + std::to_string(r) + " is not an array");
    if (r == 0) {
      cols = j[r].size();
      m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    }
    if (j[r].size() != cols) fail(where, "ragged rows");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) fail(where, "non-numeric entry");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
    }
  }
  return m;
}

ConvexSet parse_set(const json& j, Eigen::Index dim) {
  if (!j.is_object() || !j.contains("type")) fail("set", "expected an object with a \"type\"");
  const std::string type = j.at("type").get<std::string>();
  try {
    if (type == "box")
      return ConvexSet(Box{parse_vector(j.at("lo"), "set.lo"), parse_vector(j.at("hi"), "set.hi")});
    if (type == "ball")
      return ConvexSet(
          Ball{parse_vector(j.at("center"), "set.center"), j.at("radius").get<double>()});
    if (type == "halfspace")
      return ConvexSet(
          Halfspace{parse_vector(j.at("normal"), "set.normal"), j.at("offset").get<double>()});
    if (type == "simplex") return ConvexSet(Simplex{dim});
  } catch (const json::exception& e) {
    fail("set", e.what());
  }
  fail("set.type", "unknown variant \"" + type + "\"");
}

Mapping parse_mapping(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("type")) fail(where, "expected an object with a \"type\"");
  const std::string type = j.at("type").get<std::string>();
  try {
    if (type == "affine")
      return Mapping(AffineMap{parse_matrix(j.at("matrix"), where + ".matrix"),
                               parse_vector(j.at("offset"), where + ".offset")});
    if (type == "scaled_identity") return Mapping(ScaledIdentity{j.at("scale").get<double>()});
    if (type == "constant") return Mapping::constant(parse_vector(j.at("value"), where + ".value"));
    if (type == "residual_of_contraction")
      return Mapping::residual_of(parse_mapping(j.at("inner"), where + ".inner"),
                                  j.value("declared_alpha", 0.0));
  } catch (const json::exception& e) {
    fail(where, e.what());
  }
  fail(where + ".type", "unknown variant \"" + type + "\"");
}

}  // namespace

Problem parse_problem(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("problem file: ") + e.what());  // carries line and column
  }
  if (!j.is_object()) throw Error("problem file: top level must be an object");

  try {
    const int version = j.value("schema_version", kSchemaVersion);
    if (version != kSchemaVersion)
      fail("schema_version", "unsupported version " + std::to_string(version));

    if (!j.contains("space")) fail("space", "missing");
    const Eigen::Index dim = j.at("space").at("dim").get<Eigen::Index>();
    const double p = j.at("space").at("p").get<double>();
    if (dim < 1) fail("space.dim", "must be >= 1");
    if (!valid_exponent(p)) fail("space.p", "must satisfy 1 < p < inf");

    if (!j.contains("set")) fail("set", "missing");
    if (!j.contains("mapping")) fail("mapping", "missing");

    Problem prob(parse_set(j.at("set"), dim), parse_mapping(j.at("mapping"), "mapping"));
    prob.schema_version = version;
    prob.dim = dim;
    prob.p = p;
    if (prob.set.dim() != dim) fail("set", "dimension disagrees with space.dim");
    if (const AffineMap* a = prob.mapping.get_if<AffineMap>())
      if (a->A.cols() != dim) fail("mapping", "dimension disagrees with space.dim");

    if (j.contains("constants")) {
      const json& c = j.at("constants");
      DeclaredConstants k{c.at("u").get<double>(), c.at("v").get<double>(),
                          c.at("mu").get<double>()};
      if (!(k.u > 0.0 && k.v > 0.0 && k.mu > 0.0)) fail("constants", "u, v, mu must be positive");
      prob.constants = k;
      prob.solver.constants = k;
    }

    prob.solver.mode = prob.constants ? SolveMode::Certified : SolveMode::Empirical;
    if (j.contains("solver")) {
      const json& s = j.at("solver");
      if (s.contains("mode")) {
        const std::string mode = s.at("mode").get<std::string>();
        if (mode == "certified") prob.solver.mode = SolveMode::Certified;
        else if (mode == "empirical") prob.solver.mode = SolveMode::Empirical;
        else fail("solver.mode", "expected \"certified\" or \"empirical\"");
        prob.mode_specified = true;
      }
      if (s.contains("lambda") && !(s.at("lambda").is_string())) {
        const double lambda = s.at("lambda").get<double>();
        if (!(lambda > 0.0)) fail("solver.lambda", "must be positive");
        prob.solver.lambda = lambda;
      }
      if (s.contains("tol")) prob.solver.tol = s.at("tol").get<double>();
      if (!(prob.solver.tol > 0.0)) fail("solver.tol", "must be positive");
      if (s.contains("max_iter")) prob.solver.max_iter = s.at("max_iter").get<long>();
      if (prob.solver.max_iter < 1) fail("solver.max_iter", "must be >= 1");
      if (s.contains("x0") && !s.at("x0").is_string()) {
        Eigen::VectorXd x0 = parse_vector(s.at("x0"), "solver.x0");
        if (x0.size() != dim) fail("solver.x0", "dimension disagrees with space.dim");
        prob.solver.x0 = std::move(x0);
      }
    }
    if (prob.solver.mode == SolveMode::Certified && !prob.constants)
      fail("constants", "required for certified mode");

    prob.seed = j.value("seed", std::uint64_t{0});
    return prob;
  } catch (const json::exception& e) {
    throw Error(std::string("problem file: ") + e.what());
  }
}

Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open problem file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

namespace {

nlohmann::ordered_json vector_json(const Eigen::VectorXd& v) {
  nlohmann::ordered_json a = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

}  // namespace

nlohmann::ordered_json to_json(const StepSizeWindow& w) {
  return {{"c", w.c},
          {"lambda_lo", w.lambda_lo},
          {"lambda_hi", w.lambda_hi},
          {"chosen_lambda", w.chosen_lambda},
          {"certified_q", w.certified_q}};
}

nlohmann::ordered_json to_json(const SolveReport& r) {
  nlohmann::ordered_json j{{"record", "solve_report"},
                           {"status", to_string(r.status)},
                           {"iterations", r.iterations},
                           {"lambda", r.lambda_used},
                           {"fixed_point_residual", r.fixed_point_residual},
                           {"solution", vector_json(r.solution.coords())}};
  if (r.certified_q) j["certified_q"] = *r.certified_q;
  if (r.a_posteriori_bound) j["a_posteriori_bound"] = *r.a_posteriori_bound;
  if (r.window) j["window"] = to_json(*r.window);
  return j;
}

nlohmann::ordered_json to_json(const ViCertificate& c) {
  return {{"record", "vi_certificate"},
          {"pass", c.pass},
          {"min_margin", c.min_margin},
          {"witness", vector_json(c.witness)},
          {"fixed_point_residual", c.fixed_point_residual},
          {"samples", c.samples_evaluated}};
}

nlohmann::ordered_json to_json(const ConstantsEstimate& e) {
  nlohmann::ordered_json j{{"record", "constants_estimate"},
                           {"lipschitz_hat", e.lipschitz_hat},
                           {"strong_monotone_hat", e.strong_monotone_hat},
                           {"sample_count", e.sample_count},
                           {"seed", e.seed}};
  if (e.lipschitz_exact) j["lipschitz_exact"] = *e.lipschitz_exact;
  return j;
}

nlohmann::ordered_json to_json(const FeasibilityVerdict& v) {
  return {{"record", "feasibility_verdict"},
          {"feasible", v.feasible},
          {"t_min", v.t_min},
          {"t_max", v.t_max},
          {"max_admissible_v", v.max_admissible_v},
          {"window_min_v", v.window_min_v},
          {"v_meets_window_floor", v.v_meets_window_floor},
          {"window_floor_attainable", v.window_floor_attainable}};
}

void write_trace_csv(const std::string& path, const SolveReport& r) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw Error("cannot open trace file: " + path);
  std::fprintf(f, "k,step_norm,residual\n");
  const std::size_t n = r.step_norms.size();
  for (std::size_t k = 0; k < n; ++k) {
    // Row k+1 describes iterate x_{k+1}: the step that produced it and the
    // fixed-point residual at it (the next step, or the final residual).
    const double residual = k + 1 < n ? r.step_norms[k + 1] : r.fixed_point_residual;
    std::fprintf(f, "%zu,%.17g,%.17g\n", k + 1, r.step_norms[k], residual);
  }
  std::fclose(f);
}

}  // namespace vilab
