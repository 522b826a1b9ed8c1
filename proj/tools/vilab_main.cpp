// Command-line front end: solve / certify / estimate / lab over JSON problem
// files. Exit codes: 0 ok, 1 input error, 2 quantitative failure,
// 3 hypothesis violation.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vilab/inequality_lab.hpp"
#include "vilab/problem_io.hpp"
#include "vilab/sampling.hpp"
#include "vilab/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitQuantitative = 2;
constexpr int kExitHypothesis = 3;

void emit_line(const nlohmann::ordered_json& j) { std::cout << j.dump() << "\n"; }

std::string format_vector(const Eigen::VectorXd& v) {
  std::ostringstream os;
  os.precision(17);
  os << "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << "]";
  return os.str();
}

struct SolveOptions {
  std::string problem_path;
  std::string mode;    // "", "certified", "empirical"
  std::string lambda;  // "", "auto", or a number
  double tol = -1.0;
  long max_iter = -1;
  std::string trace_path;
  std::optional<std::uint64_t> seed;
  bool empirical_fallback = false;
  bool json = false;
};

vilab::SolverConfig merge_solver_config(const vilab::Problem& prob, const SolveOptions& opt) {
  vilab::SolverConfig cfg = prob.solver;
  if (opt.mode == "certified") cfg.mode = vilab::SolveMode::Certified;
  if (opt.mode == "empirical") cfg.mode = vilab::SolveMode::Empirical;
  if (!opt.lambda.empty()) {
    if (opt.lambda == "auto") cfg.lambda.reset();
    else cfg.lambda = std::stod(opt.lambda);
  }
  if (opt.tol > 0.0) cfg.tol = opt.tol;
  if (opt.max_iter > 0) cfg.max_iter = opt.max_iter;
  cfg.empirical_fallback = opt.empirical_fallback;
  if (cfg.mode == vilab::SolveMode::Certified && !cfg.constants)
    throw vilab::Error("certified mode requires a constants block in the problem file");
  return cfg;
}

void print_solve_report(const vilab::SolveReport& r) {
  std::cout << "status               " << vilab::to_string(r.status) << "\n";
  std::cout << "iterations           " << r.iterations << "\n";
  std::cout << "lambda               " << r.lambda_used << "\n";
  if (r.certified_q) std::cout << "certified q          " << *r.certified_q << "\n";
  if (r.a_posteriori_bound) std::cout << "a-posteriori bound   " << *r.a_posteriori_bound << "\n";
  std::cout << "fixed-point residual " << r.fixed_point_residual << "\n";
  std::cout << "solution             " << format_vector(r.solution.coords()) << "\n";
}

int cmd_solve(const SolveOptions& opt) {
  vilab::Problem prob = vilab::load_problem(opt.problem_path);
  const vilab::SolverConfig cfg = merge_solver_config(prob, opt);
  vilab::SolveReport report = [&] {
    try {
      return vilab::solve_vi(prob.mapping, prob.set, prob.p, cfg);
    } catch (const vilab::HypothesisViolated& e) {
      if (opt.json) emit_line(vilab::to_json(e.verdict));
      else {
        std::cout << "hypothesis violated: " << e.what() << "\n";
        std::cout << "  max admissible v  " << e.verdict.max_admissible_v << "\n";
        std::cout << "  window floor      v > " << e.verdict.window_min_v << "\n";
        std::cout << "rerun with --empirical to iterate without a certificate\n";
      }
      std::exit(kExitHypothesis);
    }
  }();
  if (!opt.trace_path.empty()) vilab::write_trace_csv(opt.trace_path, report);
  if (opt.json) emit_line(vilab::to_json(report));
  else print_solve_report(report);
  return report.status == vilab::SolveStatus::MaxIter ? kExitQuantitative : kExitOk;
}

Eigen::VectorXd parse_candidate_string(const std::string& text) {
  std::vector<double> vals;
  std::string token;
  std::stringstream ss(text);
  while (std::getline(ss, token, ',')) {
    if (token.find_first_not_of(" \t") == std::string::npos) continue;
    vals.push_back(std::stod(token));
  }
  if (vals.empty()) throw vilab::Error("empty candidate");
  return Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

Eigen::VectorXd read_candidate_file(const std::string& path) {
  std::stringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw vilab::Error("cannot open candidate file: " + path);
    buf << in.rdbuf();
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw vilab::Error(std::string("candidate file: ") + e.what());
  }
  const nlohmann::json& arr = j.is_object() && j.contains("solution") ? j.at("solution") : j;
  if (!arr.is_array() || arr.empty()) throw vilab::Error("candidate file: expected an array or a solve report");
  Eigen::VectorXd v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  return v;
}

int cmd_certify(const std::string& problem_path, const std::string& candidate,
                const std::string& candidate_file, int samples, std::uint64_t seed, double tol,
                bool json) {
  vilab::Problem prob = vilab::load_problem(problem_path);
  if (candidate.empty() == candidate_file.empty())
    throw vilab::Error("provide exactly one of --candidate or --candidate-file");
  const Eigen::VectorXd cand =
      candidate.empty() ? read_candidate_file(candidate_file) : parse_candidate_string(candidate);
  if (cand.size() != prob.dim) throw vilab::Error("candidate dimension disagrees with space.dim");

  const vilab::ViCertificate cert = vilab::certify_vi_solution(
      vilab::SpacePoint(cand, prob.p), prob.mapping, prob.set, samples, seed, tol);
  if (json) {
    emit_line(vilab::to_json(cert));
  } else {
    std::cout << "certificate          " << (cert.pass ? "pass" : "fail") << "\n";
    std::cout << "min margin           " << cert.min_margin << "\n";
    if (!cert.pass) std::cout << "witness              " << format_vector(cert.witness) << "\n";
    std::cout << "fixed-point residual " << cert.fixed_point_residual << "\n";
    std::cout << "samples              " << cert.samples_evaluated << "\n";
  }
  return cert.pass ? kExitOk : kExitQuantitative;
}

int cmd_estimate(const std::string& problem_path, int n, std::uint64_t seed,
                 std::optional<double> u_flag, std::optional<double> v_flag, bool json) {
  vilab::Problem prob = vilab::load_problem(problem_path);
  const vilab::ConstantsEstimate est =
      vilab::estimate_constants(prob.mapping, prob.set, prob.p, n, seed);

  std::optional<double> u = u_flag, v = v_flag;
  if (!u && prob.constants) u = prob.constants->u;
  if (!v && prob.constants) v = prob.constants->v;

  std::optional<vilab::FeasibilityVerdict> verdict;
  std::optional<double> v_ceiling;
  if (u && *u > 0.0) {
    v_ceiling = vilab::max_certifiable_v(prob.mapping, *u, prob.set, prob.p, n, seed);
    if (v && *v > 0.0 && est.lipschitz_hat > 0.0)
      verdict = vilab::feasibility_analysis(*u, *v, est.lipschitz_hat);
  }

  if (json) {
    emit_line(vilab::to_json(est));
    if (v_ceiling) emit_line({{"record", "max_certifiable_v"}, {"u", *u}, {"value", *v_ceiling}});
    if (verdict) emit_line(vilab::to_json(*verdict));
  } else {
    std::cout << "lipschitz (sampled)  " << est.lipschitz_hat << "\n";
    if (est.lipschitz_exact) std::cout << "lipschitz (exact)    " << *est.lipschitz_exact << "\n";
    std::cout << "strong monotonicity  " << est.strong_monotone_hat << "\n";
    if (v_ceiling) std::cout << "max certifiable v    " << *v_ceiling << " (u = " << *u << ")\n";
    if (verdict) {
      std::cout << "feasibility          "
                << (verdict->feasible ? "feasible" : "infeasible") << ", max admissible v = "
                << verdict->max_admissible_v << "\n";
      std::cout << "window floor         v > " << verdict->window_min_v
                << (verdict->window_floor_attainable ? "" : " (unsatisfiable with the ceiling above)")
                << "\n";
    }
  }
  return kExitOk;
}

struct LabOptions {
  std::vector<double> ps{1.5, 2.0, 3.0};
  int dims = 16;
  long pairs = 10000;
  std::uint64_t seed = 2024;
  std::string csv_path;
  std::vector<double> remark44;  // r gamma mu s
  std::string chain_problem;
  int chain_pairs = 16;
  bool json = false;
};

int cmd_lab(const LabOptions& opt) {
  if (!opt.remark44.empty()) {
    const double factor =
        vilab::earlier_bound_factor(opt.remark44[0], opt.remark44[1], opt.remark44[2], opt.remark44[3]);
    if (opt.json)
      emit_line({{"record", "remark44"},
                 {"r", opt.remark44[0]},
                 {"gamma", opt.remark44[1]},
                 {"mu", opt.remark44[2]},
                 {"s", opt.remark44[3]},
                 {"factor", factor}});
    else
      std::printf("%g\n", factor);
    return kExitOk;
  }

  if (!opt.chain_problem.empty()) {
    vilab::Problem prob = vilab::load_problem(opt.chain_problem);
    if (!prob.constants) throw vilab::Error("--chain requires a constants block in the problem file");
    const double lambda = prob.solver.lambda.value_or(1.0);
    vilab::Rng rng(opt.seed);
    std::cout << "pair,L1,L2,L3,L4,L5,L6,L7,s1,s2,s3,s4,s5,s6\n";
    bool any_fail = false;
    for (int i = 0; i < opt.chain_pairs; ++i) {
      const Eigen::VectorXd xv = vilab::sample_in_set(prob.set, rng);
      const Eigen::VectorXd yv = vilab::sample_in_set(prob.set, rng);
      const vilab::ProofChainReport rep = vilab::verify_proof_chain(
          vilab::SpacePoint(xv, prob.p), vilab::SpacePoint(yv, prob.p), prob.mapping, prob.set,
          prob.constants->u, prob.constants->v, prob.constants->mu, lambda);
      std::printf("%d", i);
      for (double line : rep.lines) std::printf(",%.17g", line);
      for (const vilab::ChainStep& s : rep.steps) std::printf(",%s", vilab::to_string(s.status));
      std::printf("\n");
      if (!rep.all_ordered) any_fail = true;
    }
    return any_fail ? kExitQuantitative : kExitOk;
  }

  if (opt.pairs < 1) throw vilab::Error("--pairs must be >= 1");
  if (opt.dims < 1) throw vilab::Error("--dims must be >= 1");

  std::FILE* csv = nullptr;
  if (!opt.csv_path.empty()) {
    csv = std::fopen(opt.csv_path.c_str(), "w");
    if (!csv) throw vilab::Error("cannot open csv file: " + opt.csv_path);
    std::fprintf(csv, "p,pair,dim,lhs,rhs,holds\n");
  }

  long total_violations = 0;
  for (double p : opt.ps) {
    std::vector<vilab::PairingInequalityRecord> records;
    const vilab::PairingInequalityBatch batch =
        vilab::pairing_inequality_batch(p, opt.dims, opt.pairs, opt.seed, vilab::kLabRelTol,
                               csv ? &records : nullptr);
    total_violations += batch.violations;
    if (csv)
      for (const vilab::PairingInequalityRecord& r : records)
        std::fprintf(csv, "%.17g,%ld,%d,%.17g,%.17g,%d\n", p, r.id, r.dim, r.lhs, r.rhs,
                     r.holds ? 1 : 0);
    if (opt.json)
      emit_line({{"record", "pairing_inequality_batch"},
                 {"p", p},
                 {"pairs", batch.pairs},
                 {"violations", batch.violations},
                 {"worst_rel_slack", batch.worst_rel_slack}});
    else
      std::cout << "p = " << p << ": " << batch.violations << " violations in " << batch.pairs
                << " pairs (worst relative slack " << batch.worst_rel_slack << ")\n";
  }
  if (csv) std::fclose(csv);
  return total_violations == 0 ? kExitOk : kExitQuantitative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"variational inequality solver and inequality lab for finite-dimensional lp spaces"};
  app.require_subcommand(1);

  SolveOptions solve_opt;
  CLI::App* solve = app.add_subcommand("solve", "run the projected fixed-point iteration");
  solve->add_option("problem", solve_opt.problem_path, "problem JSON file")->required();
  solve->add_option("--mode", solve_opt.mode, "certified | empirical")
      ->check(CLI::IsMember({"certified", "empirical"}));
  solve->add_option("--lambda", solve_opt.lambda, "step size, or 'auto'");
  solve->add_option("--tol", solve_opt.tol, "stopping tolerance");
  solve->add_option("--max-iter", solve_opt.max_iter, "iteration cap");
  solve->add_option("--trace", solve_opt.trace_path, "write per-iteration CSV trace");
  solve->add_option("--seed", solve_opt.seed, "seed override (recorded in reports)");
  solve->add_flag("--empirical", solve_opt.empirical_fallback,
                  "fall back to empirical mode when the hypothesis is infeasible");
  solve->add_flag("--json", solve_opt.json, "machine-readable line-delimited output");

  std::string certify_problem, certify_candidate, certify_candidate_file;
  int certify_samples = 4096;
  std::uint64_t certify_seed = 7;
  double certify_tol = 1e-9;
  bool certify_json = false;
  CLI::App* certify = app.add_subcommand("certify", "check a candidate VI solution");
  certify->add_option("problem", certify_problem, "problem JSON file")->required();
  certify->add_option("--candidate", certify_candidate, "comma-separated coordinates");
  certify->add_option("--candidate-file", certify_candidate_file,
                      "JSON array or solve report ('-' for stdin)");
  certify->add_option("--samples", certify_samples, "random members of C to test");
  certify->add_option("--seed", certify_seed, "sampling seed");
  certify->add_option("--tol", certify_tol, "margin tolerance");
  certify->add_flag("--json", certify_json, "machine-readable output");

  std::string estimate_problem;
  int estimate_n = vilab::kDefaultSampleCount;
  std::uint64_t estimate_seed = 7;
  double estimate_u = -1.0, estimate_v = -1.0;
  bool estimate_json = false;
  CLI::App* estimate = app.add_subcommand("estimate", "sample B's analytic constants");
  estimate->add_option("problem", estimate_problem, "problem JSON file")->required();
  estimate->add_option("--n", estimate_n, "sample pairs");
  estimate->add_option("--seed", estimate_seed, "sampling seed");
  estimate->add_option("--u", estimate_u, "cocoercivity u for the feasibility verdict");
  estimate->add_option("--v", estimate_v, "requested v for the feasibility verdict");
  estimate->add_flag("--json", estimate_json, "machine-readable output");

  LabOptions lab_opt;
  CLI::App* lab = app.add_subcommand("lab", "inequality verification batch");
  lab->add_option("--p", lab_opt.ps, "space exponents");
  lab->add_option("--dims", lab_opt.dims, "max dimension (cycled 1..dims)");
  lab->add_option("--pairs", lab_opt.pairs, "random pairs per exponent");
  lab->add_option("--seed", lab_opt.seed, "sampling seed");
  lab->add_option("--csv", lab_opt.csv_path, "write per-pair CSV");
  lab->add_option("--remark44", lab_opt.remark44, "r gamma mu s: print the flawed factor")
      ->expected(4);
  lab->add_option("--chain", lab_opt.chain_problem, "run the proof chain on a problem file");
  lab->add_option("--chain-pairs", lab_opt.chain_pairs, "pairs for --chain");
  lab->add_flag("--json", lab_opt.json, "machine-readable output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(solve_opt);
    if (certify->parsed())
      return cmd_certify(certify_problem, certify_candidate, certify_candidate_file,
                         certify_samples, certify_seed, certify_tol, certify_json);
    if (estimate->parsed())
      return cmd_estimate(estimate_problem, estimate_n, estimate_seed,
                          estimate_u > 0.0 ? std::optional<double>(estimate_u) : std::nullopt,
                          estimate_v > 0.0 ? std::optional<double>(estimate_v) : std::nullopt,
                          estimate_json);
    if (lab->parsed()) return cmd_lab(lab_opt);
  } catch (const vilab::HypothesisViolated& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitHypothesis;
  } catch (const vilab::NonFiniteIterate& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitQuantitative;
  } catch (const vilab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
