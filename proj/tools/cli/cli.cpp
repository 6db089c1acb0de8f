#include "cli/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "factorbreak/diagnostics.hpp"
#include "factorbreak/kernels.hpp"
#include "factorbreak/report.hpp"
#include "factorbreak/selection.hpp"

namespace factorbreak::cli {

namespace {

constexpr std::uint64_t kDefaultSeed = 42;

struct HelpRequested {
  std::string text;
};

// Raw flag values collected by CLI11 before validation.
struct RawFlags {
  std::string input;
  std::string out;
  std::string sim_out;
  std::string time_col = "auto";
  std::string from;
  std::string to;
  bool keep_incomplete = false;
  bool standardize = true;
  std::string crit = "simulated";
  std::string null_sim = "factor_model";
  std::string gram = "auto";
  std::string dgp;
  std::string grid = "2,3,4,5,auto";
  std::string r_grid = "1..8";
  std::string seed;
  double h = 0.0;
  int lag = 0;
  int T = 0;
  int N = 0;
  double factor_drift = 0.5;
  int burn_in = 200;
};

void add_test_flags(CLI::App* sub, Command& cmd, RawFlags& raw) {
  sub->add_option("--B", cmd.test.B, "Simulated null statistics (default 1000)");
  sub->add_option("--alpha", cmd.test.alpha, "Significance level (default 0.05)");
  sub->add_option("--seed", raw.seed, "Seed (fallback: $FACTORBREAK_SEED, then 42)");
  sub->add_option("--h", raw.h, "Bandwidth override in (0, 1)");
  sub->add_option("--h-scale", cmd.test.h_scale, "Multiplier on h = (TN)^(-1/5)");
  sub->add_option("--l", raw.lag, "HAC lag override");
  sub->add_option("--crit", raw.crit, "simulated | asymptotic")
      ->check(CLI::IsMember({"simulated", "asymptotic"}));
  sub->add_option("--null-sim", raw.null_sim, "factor_model | pure_noise")
      ->check(CLI::IsMember({"factor_model", "pure_noise"}));
  sub->add_option("--gram", raw.gram, "auto | time | cross")
      ->check(CLI::IsMember({"auto", "time", "cross"}));
  sub->add_option("--threads", cmd.test.threads, "Worker threads (results do not depend on it)");
}

void add_input_flags(CLI::App* sub, RawFlags& raw) {
  sub->add_option("--input", raw.input, "Panel CSV (rows = periods, columns = series)");
  sub->add_option("--time-col", raw.time_col, "auto | first | none")
      ->check(CLI::IsMember({"auto", "first", "none"}));
  sub->add_option("--from", raw.from, "First time label to keep");
  sub->add_option("--to", raw.to, "Last time label to keep");
  sub->add_flag("--keep-incomplete", raw.keep_incomplete,
                "Fail on missing values instead of dropping incomplete columns");
  sub->add_flag("--standardize,!--no-standardize", raw.standardize,
                "Standardize each series before estimation (default on)");
}

std::uint64_t parse_seed(const std::string& text, const std::string& source) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError(source + ": malformed seed '" + text + "'");
  }
  return v;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& flag) {
  std::vector<int> out;
  try {
    for (const auto& g : parse_grid(text)) {
      if (g.is_auto()) throw UsageError(flag + ": 'auto' is not allowed here");
      out.push_back(g.r_tilde);
    }
  } catch (const UsageError&) {
    throw;
  } catch (const ConfigError& e) {
    throw UsageError(flag + ": " + e.what());
  }
  return out;
}

void finish(Command& cmd, const RawFlags& raw, const CLI::App& sub) {
  const bool needs_input = cmd.subcommand != Subcommand::kSimulate;
  if (needs_input) {
    if (raw.input.empty()) throw UsageError("missing --input");
    cmd.input = raw.input;
    cmd.ingest.time_column = raw.time_col == "first" ? TimeColumn::kFirst
                             : raw.time_col == "none" ? TimeColumn::kNone
                                                      : TimeColumn::kAuto;
    cmd.ingest.drop_incomplete_columns = !raw.keep_incomplete;
    if (!raw.from.empty()) cmd.ingest.first_label = raw.from;
    if (!raw.to.empty()) cmd.ingest.last_label = raw.to;
    cmd.test.standardize_input = raw.standardize;
  } else {
    cmd.test.standardize_input = false;
  }

  if (sub.get_option_no_throw("--seed") != nullptr && sub.count("--seed") > 0) {
    cmd.test.seed = parse_seed(raw.seed, "--seed");
  } else if (const char* env = std::getenv("FACTORBREAK_SEED"); env != nullptr && *env != '\0') {
    cmd.test.seed = parse_seed(env, "FACTORBREAK_SEED");
  } else {
    cmd.test.seed = kDefaultSeed;
  }

  if (sub.get_option_no_throw("--h") != nullptr && sub.count("--h") > 0) cmd.test.h_override = raw.h;
  if (sub.get_option_no_throw("--l") != nullptr && sub.count("--l") > 0) cmd.test.lag_override = raw.lag;
  cmd.test.crit = raw.crit == "asymptotic" ? CriticalValueRule::kAsymptotic
                                           : CriticalValueRule::kSimulated;
  cmd.test.null_sim = raw.null_sim == "pure_noise" ? NullSimulation::kPureNoise
                                                   : NullSimulation::kFactorModel;
  cmd.test.gram_path = raw.gram == "time"    ? GramPath::kTime
                       : raw.gram == "cross" ? GramPath::kCross
                                             : GramPath::kAuto;
  if (!raw.out.empty()) cmd.out = raw.out;
  if (!raw.sim_out.empty()) cmd.sim_out = raw.sim_out;

  switch (cmd.subcommand) {
    case Subcommand::kTest:
      break;
    case Subcommand::kSimulate: {
      if (raw.dgp.empty()) throw UsageError("missing --dgp");
      if (sub.count("--T") == 0) throw UsageError("missing --T");
      if (sub.count("--N") == 0) throw UsageError("missing --N");
      if (raw.T < 2) throw UsageError("--T must be at least 2");
      if (raw.N < 1) throw UsageError("--N must be at least 1");
      if (cmd.replications < 1) throw UsageError("--reps must be at least 1");
      try {
        cmd.dgp = make_dgp(parse_dgp_family(raw.dgp), raw.T, raw.N);
        cmd.grid = parse_grid(raw.grid);
      } catch (const ConfigError& e) {
        throw UsageError(e.what());
      }
      cmd.dgp.factor_drift = raw.factor_drift;
      if (raw.burn_in < 0) throw UsageError("--burn-in must be nonnegative");
      cmd.dgp.burn_in = raw.burn_in;
      break;
    }
    case Subcommand::kSelectFactors:
      if (cmd.r_max < 1) throw UsageError("--r-max must be at least 1");
      break;
    case Subcommand::kDiagnose:
      cmd.r_grid = parse_int_list(raw.r_grid, "--r-grid");
      if (cmd.lbq_lags < 0) throw UsageError("--lbq-lags must be positive");
      if (!(cmd.test.alpha > 0.0 && cmd.test.alpha < 1.0)) throw UsageError("--alpha must lie in (0, 1)");
      return;  // diagnose does not run the test
  }

  if (cmd.test.r_tilde < 1) throw UsageError("--r must be at least 1");
  try {
    cmd.test.validate();
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
}

std::string config_line(const Command& cmd, const KernelSpec* kernel, long T, long N,
                        bool with_threads) {
  std::ostringstream os;
  os << "# factorbreak " << to_string(cmd.subcommand);
  if (cmd.subcommand == Subcommand::kSimulate) {
    os << " dgp=" << factorbreak::to_string(cmd.dgp.family) << " reps=" << cmd.replications
       << " grid=";
    for (std::size_t i = 0; i < cmd.grid.size(); ++i) os << (i ? "," : "") << cmd.grid[i].label();
    os << " factor_drift=" << format_double(cmd.dgp.factor_drift)
       << " burn_in=" << cmd.dgp.burn_in << " r_max=" << cmd.r_max;
  } else {
    os << " input=" << cmd.input.string() << " standardize=" << (cmd.test.standardize_input ? 1 : 0);
  }
  os << " T=" << T << " N=" << N;
  if (cmd.subcommand == Subcommand::kTest) os << " r_tilde=" << cmd.test.r_tilde;
  if (cmd.subcommand == Subcommand::kSelectFactors) os << " r_max=" << cmd.r_max;
  if (kernel != nullptr) {
    os << " kernel=" << factorbreak::to_string(kernel->kind()) << " h=" << format_double(kernel->h())
       << " l=" << kernel->hac_lag();
  }
  if (cmd.subcommand != Subcommand::kDiagnose) {
    os << " B=" << cmd.test.B << " alpha=" << format_double(cmd.test.alpha)
       << " crit=" << factorbreak::to_string(cmd.test.crit)
       << " null_sim=" << factorbreak::to_string(cmd.test.null_sim) << " seed=" << cmd.test.seed;
  } else {
    os << " alpha=" << format_double(cmd.test.alpha);
  }
  if (with_threads) os << " threads=" << cmd.test.threads;
  return os.str();
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + path.string() + "'");
  return f;
}

void run_test_cmd(const Command& cmd, std::ostream& out) {
  const PanelData panel = load_csv(cmd.input, cmd.ingest);
  const KernelSpec kernel = resolve_kernel(cmd.test, panel.T(), panel.N());
  out << config_line(cmd, &kernel, panel.T(), panel.N(), true) << '\n';

  const TestResult res = run_test(panel, cmd.test);
  out << "L_NT        = " << format_double(res.l_nt) << '\n'
      << "sigma2_hat  = " << format_double(res.sigma2_hat) << '\n'
      << "L_hat       = " << format_double(res.l_hat) << '\n'
      << "critical    = " << format_double(res.crit_value) << " ("
      << factorbreak::to_string(res.crit_rule) << ", 1-alpha = " << format_double(1.0 - res.alpha)
      << ")\n"
      << "p-value     = " << format_double(res.p_value) << '\n'
      << "decision    = "
      << (res.reject ? "reject H0: loadings are not constant" : "fail to reject H0: constant loadings")
      << " at alpha = " << format_double(res.alpha) << '\n';
  for (const auto& w : res.warnings) out << "warning: " << w << '\n';

  if (cmd.out) {
    auto f = open_out(*cmd.out);
    f << to_json(res) << '\n';
  }
  if (cmd.sim_out) {
    auto f = open_out(*cmd.sim_out);
    write_sim_stats_csv(res, f);
  }
}

void run_simulate_cmd(const Command& cmd, std::ostream& out) {
  McConfig mc;
  mc.dgp = cmd.dgp;
  mc.replications = cmd.replications;
  mc.test_cfg = cmd.test;
  mc.grid = cmd.grid;
  mc.base_seed = cmd.test.seed;
  mc.r_max = cmd.r_max;
  mc.threads = cmd.test.threads;

  const KernelSpec kernel = resolve_kernel(cmd.test, cmd.dgp.T, cmd.dgp.N);
  out << config_line(cmd, &kernel, cmd.dgp.T, cmd.dgp.N, true) << '\n';
  const RateTable table = run_experiment(mc);
  write_rate_table_csv(table, out);

  if (cmd.out) {
    auto f = open_out(*cmd.out);
    f << config_line(cmd, &kernel, cmd.dgp.T, cmd.dgp.N, false) << '\n';
    write_rate_table_csv(table, f);
  }
}

void run_select_cmd(const Command& cmd, std::ostream& out) {
  const PanelData panel = load_csv(cmd.input, cmd.ingest);
  const KernelSpec kernel = resolve_kernel(cmd.test, panel.T(), panel.N());
  out << config_line(cmd, &kernel, panel.T(), panel.N(), true) << '\n';

  const SelectionResult sel = sequential_factor_number(panel, cmd.r_max, cmd.test);
  write_selection_csv(sel, out);
  out << "r_hat = " << (sel.r_hat ? std::to_string(*sel.r_hat) : "none up to r_max=" + std::to_string(sel.r_max))
      << '\n';
  if (cmd.out) {
    auto f = open_out(*cmd.out);
    f << config_line(cmd, &kernel, panel.T(), panel.N(), false) << '\n';
    write_selection_csv(sel, f);
  }
}

void run_diagnose_cmd(const Command& cmd, std::ostream& out) {
  const PanelData raw = load_csv(cmd.input, cmd.ingest);
  if (raw.N() < 2) throw InputError("CD requires N >= 2");
  const PanelData panel = cmd.test.standardize_input ? standardize(raw) : raw;
  out << config_line(cmd, nullptr, panel.T(), panel.N(), false) << '\n';

  std::vector<DiagnosticsReport> rows;
  for (int r : cmd.r_grid) rows.push_back(diagnose(panel, r, cmd.lbq_lags, cmd.test.alpha));
  write_diagnostics_csv(rows, out);
  if (cmd.out) {
    auto f = open_out(*cmd.out);
    f << config_line(cmd, nullptr, panel.T(), panel.N(), false) << '\n';
    write_diagnostics_csv(rows, f);
  }
}

}  // namespace

const char* to_string(Subcommand s) noexcept {
  switch (s) {
    case Subcommand::kTest: return "test";
    case Subcommand::kSimulate: return "simulate";
    case Subcommand::kSelectFactors: return "select-factors";
    case Subcommand::kDiagnose: return "diagnose";
  }
  return "?";
}

Command parse(const std::vector<std::string>& argv) {
  Command cmd;
  RawFlags raw;

  CLI::App app{"Specification test for structural change in factor loadings"};
  app.name(argv.empty() ? "factorbreak" : argv.front());
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1, 1);

  auto* test = app.add_subcommand("test", "Test a panel for time-varying loadings");
  add_input_flags(test, raw);
  test->add_option("--r", cmd.test.r_tilde, "Number of factors (default 2)");
  add_test_flags(test, cmd, raw);
  test->add_option("--out", raw.out, "Write the result as JSON");
  test->add_option("--sim-out", raw.sim_out, "Write the simulated null statistics as CSV");

  auto* sim = app.add_subcommand("simulate", "Monte Carlo rejection rates for a design");
  sim->add_option("--dgp", raw.dgp, "S1-S3, L1-L6, G1-G3");
  sim->add_option("--T", raw.T, "Time periods");
  sim->add_option("--N", raw.N, "Cross-section size");
  sim->add_option("--reps", cmd.replications, "Replications (default 1000)");
  sim->add_option("--grid", raw.grid, "Factor numbers, e.g. 2,3,4,5,auto");
  sim->add_option("--r-max", cmd.r_max, "Upper bound for 'auto' (default 8)");
  sim->add_option("--factor-drift", raw.factor_drift, "Factor AR(1) intercept (default 0.5)");
  sim->add_option("--burn-in", raw.burn_in, "AR burn-in periods (default 200)");
  add_test_flags(sim, cmd, raw);
  sim->add_option("--out", raw.out, "Write the rate table as CSV");

  auto* sel = app.add_subcommand("select-factors", "Sequential factor-number selection");
  add_input_flags(sel, raw);
  sel->add_option("--r-max", cmd.r_max, "Largest factor number tried (default 8)");
  add_test_flags(sel, cmd, raw);
  sel->add_option("--out", raw.out, "Write the per-j table as CSV");

  auto* diag = app.add_subcommand("diagnose", "Residual CD and Ljung-Box diagnostics");
  add_input_flags(diag, raw);
  diag->add_option("--r-grid", raw.r_grid, "Factor numbers, e.g. 1..8");
  diag->add_option("--lbq-lags", cmd.lbq_lags, "Ljung-Box lags (default min(10, T/5))");
  diag->add_option("--alpha", cmd.test.alpha, "Level for the Ljung-Box rejections");
  diag->add_option("--out", raw.out, "Write the table as CSV");

  std::vector<const char*> cargv;
  cargv.reserve(argv.size() + 1);
  if (argv.empty()) cargv.push_back("factorbreak");
  for (const auto& a : argv) cargv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::CallForHelp&) {
    const CLI::App* active = &app;
    for (const auto* s : app.get_subcommands()) active = s;
    throw HelpRequested{active->help()};
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  const CLI::App* chosen = app.get_subcommands().front();
  if (chosen == test) cmd.subcommand = Subcommand::kTest;
  else if (chosen == sim) cmd.subcommand = Subcommand::kSimulate;
  else if (chosen == sel) cmd.subcommand = Subcommand::kSelectFactors;
  else cmd.subcommand = Subcommand::kDiagnose;
  finish(cmd, raw, *chosen);
  return cmd;
}

void execute(const Command& cmd, std::ostream& out) {
  switch (cmd.subcommand) {
    case Subcommand::kTest: run_test_cmd(cmd, out); break;
    case Subcommand::kSimulate: run_simulate_cmd(cmd, out); break;
    case Subcommand::kSelectFactors: run_select_cmd(cmd, out); break;
    case Subcommand::kDiagnose: run_diagnose_cmd(cmd, out); break;
  }
}

int exit_code_for_current_exception(std::ostream& err) {
  try {
    throw;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nRun with --help for usage.\n";
    return kExitConfig;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitOther;
  }
}

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  try {
    const Command cmd = parse(argv);
    execute(cmd, out);
    return kExitOk;
  } catch (const HelpRequested& h) {
    out << h.text;
    return kExitOk;
  } catch (...) {
    return exit_code_for_current_exception(err);
  }
}

}  // namespace factorbreak::cli
