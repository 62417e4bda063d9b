#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "ncsdp/certificates.hpp"
#include "ncsdp/error.hpp"
#include "ncsdp/primal.hpp"
#include "ncsdp/verification.hpp"

namespace ncsdp::cli {

using nlohmann::json;

namespace {

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json residuals_json(const EpsResiduals& r) {
  return {{"r_g", num(r.r_g)}, {"r_mu", num(r.r_mu)}, {"r_H", num(r.r_H)}};
}

json vec_json(const Vec& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json step_json(long step, int k, const IpmParams& p, const StepRecord& r, const Vec& x) {
  return {{"step", step},
          {"k", k},
          {"mu", p.mu},
          {"nu", p.nu},
          {"iter", r.iter},
          {"procedure", std::string(to_string(r.procedure))},
          {"alpha", r.alpha},
          {"merit_before", r.merit_before},
          {"merit_after", r.merit_after},
          {"f_after", r.f_after},
          {"guaranteed_sigma", num(r.guaranteed_sigma)},
          {"target_decrease", num(r.target_decrease)},
          {"residuals", residuals_json(r.residuals)},
          {"step_norm", r.step_norm},
          {"step_cap", r.step_cap},
          {"L0_used", num(r.L0_used)},
          {"backtracks", r.backtracks},
          {"x", vec_json(x)}};
}

json check_json(const PropertyCheck& c) {
  return {{"name", c.name},
          {"samples", c.samples},
          {"violations", c.violations},
          {"worst", num(c.worst)},
          {"passed", c.passed()}};
}

bool is_method(const std::string& m) {
  return m == "pdipm" || m == "primal" || m == "pdipm-no-nc";
}

}  // namespace

void RunConfig::validate() const {
  require(problem == "psf" || problem == "scalar" || problem == "file", ErrorKind::kConfig,
          "unknown problem '" + problem + "' (psf | scalar | file)");
  require(is_method(method), ErrorKind::kConfig,
          "unknown method '" + method + "' (pdipm | primal | pdipm-no-nc)");
  require(is_method(method_a) && is_method(method_b), ErrorKind::kConfig,
          "unknown method in compare pair");
  require(step_mode == "backtracking" || step_mode == "fixed", ErrorKind::kConfig,
          "unknown step mode '" + step_mode + "' (backtracking | fixed)");
  if (problem == "psf") PsfConfig{m, n, q, r, seed}.validate();
  if (problem == "file") require(!instance.empty(), ErrorKind::kConfig, "--instance is required");
  if (problem == "scalar") {
    require(std::isfinite(c) && c > 0.0, ErrorKind::kInvalidInput, "c must be > 0");
  }
  require(std::isfinite(mu_init) && mu_init > 0.0, ErrorKind::kInvalidInput, "mu-init must be > 0");
  require(mu_min >= 0.0 && mu_min < mu_init, ErrorKind::kInvalidInput,
          "mu-min must lie in [0, mu-init)");
  require(max_outer >= 1 && max_inner >= 1, ErrorKind::kInvalidInput,
          "iteration caps must be >= 1");
  require(!budget || *budget >= 0, ErrorKind::kInvalidInput, "budget must be >= 0");
  require(beta > 0.0 && beta < 1.0, ErrorKind::kInvalidInput, "beta must lie in (0,1)");
  require(!fixed_nu || *fixed_nu >= 0.0, ErrorKind::kInvalidInput, "fixed nu must be >= 0");
  require(!ball_radius || *ball_radius > 0.0, ErrorKind::kInvalidInput, "ball radius must be > 0");
  require(jobs >= 1, ErrorKind::kInvalidInput, "jobs must be >= 1");
  require(samples >= 1, ErrorKind::kInvalidInput, "samples must be >= 1");
  require(!seeds.empty(), ErrorKind::kInvalidInput, "at least one seed is required");
  parse_order(order);
}

std::array<Procedure, 3> parse_order(const std::string& text) {
  std::array<Procedure, 3> out{};
  std::istringstream in(text);
  std::string tok;
  int count = 0;
  while (std::getline(in, tok, ',')) {
    require(count < 3, ErrorKind::kConfig, "order must list 1, 2, 3 once each");
    if (tok == "1") {
      out[count++] = Procedure::kDualGrad;
    } else if (tok == "2") {
      out[count++] = Procedure::kPrimalGrad;
    } else if (tok == "3") {
      out[count++] = Procedure::kNegCurvature;
    } else {
      fail(ErrorKind::kConfig, "bad order entry '" + tok + "'");
    }
  }
  require(count == 3 && out[0] != out[1] && out[1] != out[2] && out[0] != out[2],
          ErrorKind::kConfig, "order must list 1, 2, 3 once each");
  return out;
}

ProblemSetup build_problem(const RunConfig& cfg) {
  ProblemSetup s;
  if (cfg.problem == "scalar") {
    s.base = analytic_scalar_problem(cfg.c);
    s.x0 = Vec::Ones(1);
  } else {
    if (cfg.problem == "psf") {
      s.psf = PsfConfig{cfg.m, cfg.n, cfg.q, cfg.r, cfg.seed};
      s.instance = generate_psf(s.psf);
    } else {
      std::ifstream in(cfg.instance);
      require(static_cast<bool>(in), ErrorKind::kIo, "cannot open instance '" + cfg.instance + "'");
      auto [inst, psf] = read_psf_instance(in);
      s.instance = std::move(inst);
      s.psf = psf;
    }
    auto psf_prob = psf_as_nsdp(*s.instance, s.psf, cfg.ball_radius);
    s.x0 = psf_initial_point(*psf_prob, s.psf, cfg.mu_init).x();
    s.base = std::move(psf_prob);
  }
  s.problem = s.base;
  if (cfg.corrupt_gradient != 0.0) {
    s.problem = std::shared_ptr<NsdpProblem>(corrupt_gradient(*s.base, cfg.corrupt_gradient));
  }
  return s;
}

Schedule build_schedule(const RunConfig& cfg) {
  Schedule s = default_schedule();
  s.mu_init = cfg.mu_init;
  s.mu_min = cfg.mu_min;
  s.max_outer_iters = cfg.max_outer;
  return s;
}

IpmParams build_ipm(const RunConfig& cfg) {
  IpmParams p;
  p.max_inner_iters = cfg.max_inner;
  p.order = parse_order(cfg.order);
  p.negative_curvature = cfg.method != "pdipm-no-nc";
  if (cfg.step_mode == "fixed") {
    p.step_mode = FixedLipschitz{};
  } else {
    p.step_mode = Backtracking{cfg.beta, cfg.alpha_floor_rel};
  }
  return p;
}

RunOutcome run_method(const RunConfig& cfg, const ProblemSetup& setup) {
  const NsdpProblem& prob = *setup.problem;
  const Schedule schedule = build_schedule(cfg);
  const IpmParams ipm = build_ipm(cfg);
  std::ostringstream trace;
  std::vector<std::tuple<long, double, Procedure>> history;
  long step = 0;
  long nc_steps = 0;
  OuterStepObserver observer = [&](int k, const IpmParams& p, const Iterate&, const Iterate& after,
                                   const StepRecord& r) {
    trace << step_json(step, k, p, r, after.x()).dump() << '\n';
    history.emplace_back(step, r.f_after, r.procedure);
    if (r.procedure == Procedure::kNegCurvature) ++nc_steps;
    ++step;
  };
  const auto t0 = std::chrono::steady_clock::now();
  auto solve = [&]() {
    if (cfg.method == "primal") {
      return run_outer_primal(prob, setup.x0, schedule, ipm, ScalingOps::identity(), cfg.budget,
                              observer);
    }
    OuterOptions options;
    options.fixed_nu = cfg.fixed_nu;
    options.total_inner_budget = cfg.budget;
    return run_outer(prob, central_iterate(prob, setup.x0, schedule.mu_init), schedule, ipm,
                     ScalingOps::identity(), options, observer);
  };
  OuterResult result = solve();
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return RunOutcome{std::move(result), trace.str(), wall, nc_steps, step, std::move(history)};
}

int exit_code(OuterStatus status) { return status == OuterStatus::kPartialProgress ? 2 : 0; }

std::string summary_json(const RunConfig& cfg, const ProblemSetup& setup, const RunOutcome& run) {
  const NsdpProblem& prob = *setup.problem;
  const OuterResult& res = run.result;
  const Iterate& it = res.final;
  MeritParams mp{cfg.mu_init, cfg.method == "primal" ? 0.0 : default_schedule().nu_of_mu(cfg.mu_init)};
  if (cfg.fixed_nu) mp.nu = *cfg.fixed_nu;
  if (!res.trace.empty()) mp = {res.trace.back().mu, res.trace.back().nu};

  long counts[3] = {0, 0, 0};
  for (const OuterRecord& r : res.trace) {
    counts[0] += r.dual_steps;
    counts[1] += r.primal_steps;
    counts[2] += r.negcurv_steps;
  }
  const SymMat lambda = lambda_surrogate(it, mp);
  const KktResiduals kkt = kkt_residuals(prob, it.x(), lambda);
  const FjScaled fj = fj_scaled_multipliers(prob, it, mp);
  const WsospCheck ws = wsosp_curvature_check(prob, it.x(), lambda);

  json outer = json::array();
  for (const OuterRecord& r : res.trace) {
    outer.push_back({{"k", r.k},
                     {"mu", r.mu},
                     {"nu", r.nu},
                     {"eps_g", r.eps_g},
                     {"eps_mu", r.eps_mu},
                     {"eps_H", r.eps_H},
                     {"inner_iters", r.inner_iters},
                     {"inner_status", std::string(to_string(r.inner_status))},
                     {"f", r.f},
                     {"merit", r.merit},
                     {"residuals", residuals_json(r.check.residuals)},
                     {"kkt_stationarity", r.kkt.stationarity},
                     {"kkt_complementarity", r.kkt.complementarity},
                     {"fj_lambda", r.fj.lambda_k},
                     {"fj_scaled_stationarity", r.fj.scaled_stationarity},
                     {"central_path_gap", r.central_path_gap},
                     {"lambda_z_gap", r.lambda_z_gap},
                     {"eps_mu_ratio", num(r.eps_mu_ratio)}});
  }

  json j = {
      {"problem", prob.name()},
      {"method", cfg.method},
      {"seed", cfg.problem == "scalar" ? json(nullptr) : json(setup.psf.seed)},
      {"status", std::string(to_string(res.status))},
      {"diagnostic", res.diagnostic},
      {"final_f", prob.eval_f(it.x())},
      {"final_merit", merit_value(prob, it, mp)},
      {"final_mu", mp.mu},
      {"final_nu", mp.nu},
      {"outer_iterations", res.trace.size()},
      {"inner_iterations", run.total_steps},
      {"counts", {{"dual", counts[0]}, {"primal", counts[1]}, {"negative_curvature", counts[2]}}},
      {"wall_time_s", run.wall_time_s},
      {"certificates",
       {{"kkt",
         {{"stationarity", kkt.stationarity},
          {"primal_feas", kkt.primal_feas},
          {"dual_feas", kkt.dual_feas},
          {"complementarity", kkt.complementarity}}},
        {"fj", {{"lambda", fj.lambda_k}, {"omega_norm", fj.omega_k.frobenius_norm()},
                {"scaled_stationarity", fj.scaled_stationarity}}},
        {"wsosp", {{"min_restricted_curvature", num(ws.min_restricted_curvature)},
                   {"subspace_dim", ws.subspace_dim}}}}},
      {"outer", outer},
      {"final_x", vec_json(it.x())},
  };
  return j.dump(2) + "\n";
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), ErrorKind::kIo, "cannot open '" + tmp + "' for writing");
    out << content;
    out.flush();
    require(static_cast<bool>(out), ErrorKind::kIo, "failed writing '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  require(!ec, ErrorKind::kIo, "cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
}

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  cfg.validate();
  const ProblemSetup setup = build_problem(cfg);
  const RunOutcome run = run_method(cfg, setup);
  if (!cfg.trace_path.empty()) write_atomic(cfg.trace_path, run.trace_jsonl);
  const std::string summary = summary_json(cfg, setup, run);
  if (!cfg.summary_path.empty()) {
    write_atomic(cfg.summary_path, summary);
  } else {
    out << summary;
  }
  return exit_code(run.result.status);
}

std::vector<CompareRow> run_compare(const RunConfig& cfg) {
  cfg.validate();
  std::vector<RunConfig> runs;
  for (std::uint64_t seed : cfg.seeds) {
    for (const std::string& method : {cfg.method_a, cfg.method_b}) {
      RunConfig c = cfg;
      c.seed = seed;
      c.method = method;
      if (!c.budget) c.budget = 300;
      runs.push_back(c);
    }
  }
  std::vector<CompareRow> rows(runs.size());
  std::vector<std::exception_ptr> errors(runs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < runs.size(); i = next++) {
      try {
        const ProblemSetup setup = build_problem(runs[i]);
        RunOutcome run = run_method(runs[i], setup);
        CompareRow& row = rows[i];
        row.seed = runs[i].seed;
        row.method = runs[i].method;
        row.nc_count = run.nc_steps;
        row.final_f = setup.problem->eval_f(run.result.final.x());
        row.wall_time = run.wall_time_s;
        row.status = run.result.status;
        row.f_history = std::move(run.f_history);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads = std::min<int>(cfg.jobs, static_cast<int>(runs.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const std::vector<CompareRow> rows = run_compare(cfg);
  std::filesystem::create_directories(cfg.out_dir);
  std::ostringstream csv;
  csv << std::setprecision(17) << "seed,method,nc_count,final_f,wall_time\n";
  int code = 0;
  for (const CompareRow& row : rows) {
    csv << row.seed << ',' << row.method << ',' << row.nc_count << ',' << row.final_f << ','
        << std::setprecision(6) << row.wall_time << std::setprecision(17) << '\n';
    std::ostringstream plot;
    plot << std::setprecision(17) << "iteration,f,procedure\n";
    for (const auto& [step, f, proc] : row.f_history) {
      plot << step << ',' << f << ',' << to_string(proc) << '\n';
    }
    write_atomic((std::filesystem::path(cfg.out_dir) /
                  ("plot_seed" + std::to_string(row.seed) + "_" + row.method + ".csv"))
                     .string(),
                 plot.str());
    code = std::max(code, exit_code(row.status));
  }
  const std::string csv_path = (std::filesystem::path(cfg.out_dir) / "compare.csv").string();
  write_atomic(csv_path, csv.str());
  out << csv.str();
  return code;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  cfg.validate();
  const ProblemSetup setup = build_problem(cfg);
  const NsdpProblem& prob = *setup.problem;
  const Schedule schedule = build_schedule(cfg);
  const MeritParams mp{cfg.mu_init, schedule.nu_of_mu(cfg.mu_init)};
  SplitMix64 rng(cfg.seed, 7);
  VerificationReport report;
  auto guarded = [&](const std::string& name, auto&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      report.checks.push_back({name, 1, 1, std::numeric_limits<double>::quiet_NaN()});
      err << name << ": " << e.what() << '\n';
    }
  };

  const bool scalar = cfg.problem == "scalar";
  const Vec center = scalar ? Vec::Ones(1) : Vec::Zero(prob.num_vars());
  const double radius = scalar ? 0.8 : 0.1;
  const std::vector<Iterate> points = sample_interior_iterates(prob, center, radius, cfg.samples, rng);

  guarded("problem_derivatives",
          [&] { report.checks.push_back(check_problem_derivatives(prob, points, 1e-5)); });
  guarded("merit_derivatives", [&] {
    for (auto& c : check_merit_derivatives(prob, points, mp, 1e-5, 1e-4)) report.checks.push_back(c);
  });
  guarded("surrogate_identities",
          [&] { report.checks.push_back(check_surrogate_identities(prob, points, mp, 1e-10)); });

  // Constants on a ball for the Lipschitz sampling and the fixed-step run.
  const double R = cfg.ball_radius.value_or(2.0);
  std::unique_ptr<PsfProblem> ball;
  std::unique_ptr<NsdpProblem> ball_corrupted;
  const NsdpProblem* bounded = setup.problem.get();
  if (!scalar) {
    ball = std::make_unique<PsfProblem>(setup.instance->V, setup.psf.q, setup.psf.r, R);
    bounded = ball.get();
    if (cfg.corrupt_gradient != 0.0) {
      ball_corrupted = corrupt_gradient(*ball, cfg.corrupt_gradient);
      bounded = ball_corrupted.get();
    }
  }
  guarded("local_lipschitz", [&] {
    std::vector<Iterate> anchors(points.begin(), points.begin() + std::min<std::size_t>(points.size(), 5));
    for (auto& c : check_local_lipschitz(*bounded, anchors, mp, 20, rng)) report.checks.push_back(c);
  });

  guarded("fixed_step_run", [&] {
    StepAuditor auditor(*bounded);
    RunConfig fixed = cfg;
    fixed.step_mode = "fixed";
    IpmParams ipm = build_ipm(fixed);
    PropertyCheck ball_check{"iterates_in_ball", 0, 0, 0.0};
    OuterStepObserver obs = [&](int, const IpmParams& p, const Iterate& b, const Iterate& a,
                                const StepRecord& r) {
      auditor.observe(p, b, a, r);
      if (!scalar) {
        ++ball_check.samples;
        ball_check.worst = std::max(ball_check.worst, a.x().norm() / R);
        if (a.x().norm() > R) ++ball_check.violations;
      }
    };
    Schedule s = schedule;
    OuterOptions options;
    if (scalar) {
      s.max_outer_iters = std::min(s.max_outer_iters, 10);
      ipm.max_inner_iters = std::min(ipm.max_inner_iters, 200000);
    } else {
      s.max_outer_iters = 1;
      options.total_inner_budget = 30;
    }
    run_outer(*bounded, central_iterate(*bounded, setup.x0, s.mu_init), s, ipm,
              ScalingOps::identity(), options, obs);
    for (auto& c : auditor.checks()) {
      c.name = "fixed_" + c.name;
      report.checks.push_back(c);
    }
    if (!scalar) report.checks.push_back(ball_check);
  });

  guarded("backtracking_run", [&] {
    StepAuditor auditor(prob);
    RunConfig bt = cfg;
    bt.step_mode = "backtracking";
    if (!bt.budget) bt.budget = 100;
    IpmParams ipm = build_ipm(bt);
    OuterOptions options;
    options.total_inner_budget = bt.budget;
    options.fixed_nu = bt.fixed_nu;
    OuterStepObserver obs = [&](int, const IpmParams& p, const Iterate& b, const Iterate& a,
                                const StepRecord& r) { auditor.observe(p, b, a, r); };
    run_outer(prob, central_iterate(prob, setup.x0, schedule.mu_init), schedule, ipm,
              ScalingOps::identity(), options, obs);
    for (auto& c : auditor.checks()) {
      c.name = "backtracking_" + c.name;
      report.checks.push_back(c);
    }
  });

  json checks = json::array();
  for (const PropertyCheck& c : report.checks) checks.push_back(check_json(c));
  const json doc = {{"problem", prob.name()}, {"passed", report.all_passed()}, {"checks", checks}};
  const std::string text = doc.dump(2) + "\n";
  if (!cfg.report_path.empty()) {
    write_atomic(cfg.report_path, text);
  } else {
    out << text;
  }
  return report.all_passed() ? 0 : 2;
}

int cmd_generate(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  cfg.validate();
  const PsfConfig psf{cfg.m, cfg.n, cfg.q, cfg.r, cfg.seed};
  const PsfInstance inst = generate_psf(psf);
  std::ostringstream text;
  write_psf_instance(text, inst, psf);
  if (cfg.out_path.empty()) {
    out << text.str();
  } else {
    write_atomic(cfg.out_path, text.str());
  }
  return 0;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Interior-point solver for nonlinear semidefinite programs"};
  app.set_config("--config", "", "Config file (key = value, one [section] per subcommand)");
  app.require_subcommand(1);
  RunConfig cfg;
  double ball_radius = 0.0;
  long budget = 0;
  double fixed_nu = 0.0;
  std::vector<CLI::Option*> ball_opts, budget_opts, nu_opts;

  auto add_problem = [&](CLI::App* sub) {
    sub->add_option("--problem", cfg.problem, "psf | scalar | file")->capture_default_str();
    sub->add_option("--m", cfg.m, "PSF rows of V")->capture_default_str();
    sub->add_option("--n", cfg.n, "PSF columns of V")->capture_default_str();
    sub->add_option("--q", cfg.q, "PSF block order")->capture_default_str();
    sub->add_option("--r", cfg.r, "PSF shift")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "Instance seed")->envname("NC_SDP_SEED")->capture_default_str();
    sub->add_option("--instance", cfg.instance, "Instance file for --problem file");
    sub->add_option("--c", cfg.c, "Slope of the scalar problem")->capture_default_str();
    ball_opts.push_back(sub->add_option("--ball-radius", ball_radius,
                                        "Report PSF Lipschitz constants valid on ||x|| <= R"));
  };
  auto add_method = [&](CLI::App* sub) {
    sub->add_option("--method", cfg.method, "pdipm | primal | pdipm-no-nc")->capture_default_str();
    sub->add_option("--mu-init", cfg.mu_init, "Initial barrier parameter")->capture_default_str();
    sub->add_option("--mu-min", cfg.mu_min, "Stop once mu falls to this value")->capture_default_str();
    sub->add_option("--max-outer", cfg.max_outer, "Outer iteration cap")->capture_default_str();
    sub->add_option("--max-inner", cfg.max_inner, "Inner iteration cap per outer iteration")
        ->capture_default_str();
    budget_opts.push_back(sub->add_option("--budget,--max-outer-iterations-as-total", budget,
                                          "Total inner steps over all outer iterations"));
    nu_opts.push_back(sub->add_option("--fixed-nu", fixed_nu, "Use this nu at every outer iteration"));
    sub->add_option("--order", cfg.order, "Procedure test order, e.g. 1,2,3")->capture_default_str();
    sub->add_option("--step-mode", cfg.step_mode, "backtracking | fixed")->capture_default_str();
    sub->add_option("--beta", cfg.beta, "Backtracking factor")->capture_default_str();
  };

  CLI::App* solve = app.add_subcommand("solve", "Run one method and write trace and summary");
  add_problem(solve);
  add_method(solve);
  solve->add_option("--trace", cfg.trace_path, "JSON-lines step trace path");
  solve->add_option("--summary", cfg.summary_path, "Summary JSON path (stdout if omitted)");

  CLI::App* compare = app.add_subcommand("compare", "Run two methods over several seeds");
  add_problem(compare);
  add_method(compare);
  compare->add_option("--seeds", cfg.seeds, "Comma-separated seeds")->delimiter(',');
  compare->add_option("--method-a", cfg.method_a)->capture_default_str();
  compare->add_option("--method-b", cfg.method_b)->capture_default_str();
  compare->add_option("--out-dir", cfg.out_dir, "Directory for CSV and plot data")
      ->capture_default_str();
  compare->add_option("--jobs", cfg.jobs, "Worker threads")->capture_default_str();

  CLI::App* verify = app.add_subcommand("verify", "Run the derivative and invariant checks");
  add_problem(verify);
  add_method(verify);
  verify->add_option("--samples", cfg.samples, "Random interior points")->capture_default_str();
  verify->add_option("--report", cfg.report_path, "Report JSON path (stdout if omitted)");
  verify->add_option("--corrupt-gradient", cfg.corrupt_gradient)->group("");

  CLI::App* generate = app.add_subcommand("generate", "Write a PSF instance file");
  add_problem(generate);
  generate->add_option("--out", cfg.out_path, "Output path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }
  for (CLI::Option* o : ball_opts) {
    if (o->count() > 0) cfg.ball_radius = ball_radius;
  }
  for (CLI::Option* o : budget_opts) {
    if (o->count() > 0) cfg.budget = budget;
  }
  for (CLI::Option* o : nu_opts) {
    if (o->count() > 0) cfg.fixed_nu = fixed_nu;
  }

  try {
    if (solve->parsed()) return cmd_solve(cfg, out, err);
    if (compare->parsed()) return cmd_compare(cfg, out, err);
    if (verify->parsed()) return cmd_verify(cfg, out, err);
    return cmd_generate(cfg, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace ncsdp::cli
