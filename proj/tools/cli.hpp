#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "ncsdp/benchmarks.hpp"
#include "ncsdp/outer_solver.hpp"

namespace ncsdp::cli {

struct RunConfig {
  // problem
  std::string problem = "psf";  // psf | scalar | file
  int m = 5;
  int n = 5;
  int q = 4;
  double r = 0.3;
  std::uint64_t seed = 0;
  std::string instance;
  double c = 1.0;
  std::optional<double> ball_radius;
  // method and schedule
  std::string method = "pdipm";  // pdipm | primal | pdipm-no-nc
  double mu_init = 0.3;
  double mu_min = 1e-8;
  int max_outer = 60;
  int max_inner = 10000;
  std::optional<long> budget;
  std::optional<double> fixed_nu;
  std::string order = "1,2,3";
  // step mode
  std::string step_mode = "backtracking";  // backtracking | fixed
  double beta = 0.5;
  double alpha_floor_rel = 1e-16;
  // outputs
  std::string trace_path;
  std::string summary_path;
  // compare
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6};
  std::string method_a = "pdipm";
  std::string method_b = "pdipm-no-nc";
  std::string out_dir = ".";
  int jobs = 1;
  // verify
  int samples = 10;
  std::string report_path;
  double corrupt_gradient = 0.0;
  // generate
  std::string out_path;

  /// Throws SolverError(kConfig / kInvalidInput) on inconsistent settings.
  void validate() const;
};

/// A constructed problem plus what is needed to start it.
struct ProblemSetup {
  /// Uncorrupted problem; `problem` may wrap it.
  std::shared_ptr<NsdpProblem> base;
  std::shared_ptr<NsdpProblem> problem;
  std::optional<PsfInstance> instance;
  PsfConfig psf;
  Vec x0;
};

ProblemSetup build_problem(const RunConfig& cfg);
Schedule build_schedule(const RunConfig& cfg);
IpmParams build_ipm(const RunConfig& cfg);
std::array<Procedure, 3> parse_order(const std::string& text);

struct RunOutcome {
  OuterResult result;
  std::string trace_jsonl;
  double wall_time_s = 0.0;
  long nc_steps = 0;
  long total_steps = 0;
  /// (global step index, f after the step, procedure) for plotting.
  std::vector<std::tuple<long, double, Procedure>> f_history;
};

/// Runs the configured method once on an already constructed problem.
RunOutcome run_method(const RunConfig& cfg, const ProblemSetup& setup);

int exit_code(OuterStatus status);

std::string summary_json(const RunConfig& cfg, const ProblemSetup& setup, const RunOutcome& run);

struct CompareRow {
  std::uint64_t seed = 0;
  std::string method;
  long nc_count = 0;
  double final_f = 0.0;
  double wall_time = 0.0;
  OuterStatus status = OuterStatus::kConverged;
  std::vector<std::tuple<long, double, Procedure>> f_history;
};

/// Both methods over every seed; rows ordered by seed, then method a, b.
std::vector<CompareRow> run_compare(const RunConfig& cfg);

/// Writes content to path via a temporary file and rename.
void write_atomic(const std::string& path, const std::string& content);

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_compare(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_generate(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses argv (CLI11) and dispatches; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ncsdp::cli
