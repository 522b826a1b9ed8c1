#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "vilab/convex_set.hpp"
#include "vilab/mapping.hpp"
#include "vilab/solver.hpp"

namespace vilab {

/// Current problem-file schema.
inline constexpr int kSchemaVersion = 1;

/// A fully validated problem instance as read from a JSON problem file.
struct Problem {
  Problem(ConvexSet s, Mapping m) : set(std::move(s)), mapping(std::move(m)) {}

  int schema_version = kSchemaVersion;
  Eigen::Index dim = 0;
  double p = 2.0;
  ConvexSet set;
  Mapping mapping;
  std::optional<DeclaredConstants> constants;
  SolverConfig solver;  // overrides merged over defaults
  bool mode_specified = false;
  std::uint64_t seed = 0;
};

/// Parses a problem from JSON text. Throws Error with a line-anchored
/// message on malformed JSON and a field-anchored message on invalid
/// content.
Problem parse_problem(const std::string& text);

/// Reads and parses a problem file.
Problem load_problem(const std::string& path);

/// Machine-readable records (stable key order, one line when dumped).
nlohmann::ordered_json to_json(const SolveReport& r);
nlohmann::ordered_json to_json(const ViCertificate& c);
nlohmann::ordered_json to_json(const ConstantsEstimate& e);
nlohmann::ordered_json to_json(const FeasibilityVerdict& v);
nlohmann::ordered_json to_json(const StepSizeWindow& w);

/// Writes the per-iteration trace CSV: header "k,step_norm,residual",
/// 17 significant digits.
void write_trace_csv(const std::string& path, const SolveReport& r);

}  // namespace vilab
