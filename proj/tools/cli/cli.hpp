#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "factorbreak/error.hpp"
#include "factorbreak/montecarlo.hpp"
#include "factorbreak/panel.hpp"
#include "factorbreak/psytest.hpp"

namespace factorbreak::cli {

enum class Subcommand { kTest, kSimulate, kSelectFactors, kDiagnose };

const char* to_string(Subcommand s) noexcept;

/// Malformed command line. Maps to the configuration exit code.
class UsageError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

struct Command {
  Subcommand subcommand = Subcommand::kTest;

  // Panel input (test, select-factors, diagnose).
  std::filesystem::path input;
  IngestOptions ingest;

  // Test settings; r_tilde doubles as the single-test factor number.
  TestConfig test;

  // simulate
  DgpSpec dgp;
  int replications = 1000;
  std::vector<GridEntry> grid;

  // select-factors and the "auto" grid entry
  int r_max = 8;

  // diagnose
  std::vector<int> r_grid;
  int lbq_lags = 0;  // 0 = default_lbq_lags(T)

  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> sim_out;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitOther = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitConfig = 4;

/// Parses argv (argv[0] is the program name). Throws UsageError naming the
/// offending flag. The seed falls back to $FACTORBREAK_SEED, then 42.
Command parse(const std::vector<std::string>& argv);

/// Runs the command, printing a summary to `out`. Library errors propagate.
void execute(const Command& cmd, std::ostream& out);

/// parse + execute with errors mapped to exit codes and reported on `err`.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

/// Exit code for the active exception.
int exit_code_for_current_exception(std::ostream& err);

}  // namespace factorbreak::cli
