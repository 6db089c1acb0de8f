#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "factorbreak/panel.hpp"
#include "factorbreak/psytest.hpp"

namespace factorbreak {

/// Simulation designs. S*: constant loadings. L1-L3: smooth local departure
/// of the first loading. L4-L6: local mid-sample shift. G1-G3: fixed
/// mid-sample shift. The digit selects the error design:
///   S1/L1/L4/G1  iid N(0, Sigma), Sigma_ij = 0.3^|i-j|
///   S2/L2/L5/G2  e_t = 0.2 e_{t-1} + N(0, I)
///   S3/L3/L6/G3  e_t = 0.2 e_{t-1} + N(0, Sigma)
enum class DgpFamily { S1, S2, S3, L1, L2, L3, L4, L5, L6, G1, G2, G3 };

const char* to_string(DgpFamily f) noexcept;
/// Accepts "S1", "s1", "DGP.S1". Throws ConfigError otherwise.
DgpFamily parse_dgp_family(std::string_view name);

enum class LoadingPath { kConstant, kLogistic, kMidSampleShift };

struct DgpSpec {
  DgpFamily family = DgpFamily::S1;
  int T = 100;
  int N = 100;
  int r = 2;

  // f_t = drift + ar f_{t-1} + N(0, I_r)
  double factor_drift = 0.5;
  double factor_ar = 0.3;

  double loading_mean = 1.0;  // lambda_i0 entries iid N(mean, sd^2)
  double loading_sd = 1.0;

  double error_ar = 0.0;
  double toeplitz_rho = 0.0;

  LoadingPath path = LoadingPath::kConstant;
  // Logistic departure: multiplier * a_TN * [G(10 t / T; scale, locations), 0].
  double logistic_multiplier = 10.0;
  double logistic_scale = 0.1;
  std::vector<double> logistic_locations{1.0, 3.0, 7.0, 9.0};
  // Mid-sample shift b for t > T / 2, times a_TN when `shift_local`.
  std::array<double, 2> shift{0.0, 0.0};
  bool shift_local = false;

  int burn_in = 200;
};

/// Default parameters of a design.
DgpSpec make_dgp(DgpFamily family, int T, int N);

/// (T N)^(-1/2) h^(-1/4).
double local_departure_rate(double T, double N, double h);

/// [1 + exp(-scale prod_l (y - locations_l))]^(-1).
double logistic_g(double y, double scale, const std::vector<double>& locations);

/// Departure lambda_it - lambda_i0 at period t (1-based); identical for all i.
Eigen::Vector2d loading_departure(const DgpSpec& spec, int t);

/// x_it = lambda_it' f_t + e_it. Loadings, factors and errors come from
/// independent streams derived from `seed` (indices 0, 1, 2).
PanelData generate_panel(const DgpSpec& spec, std::uint64_t seed);

/// Grid entry: a fixed r_tilde, or 0 for "auto" (sequential selection, then
/// the test at the selected value).
struct GridEntry {
  int r_tilde = 0;
  bool is_auto() const noexcept { return r_tilde == 0; }
  std::string label() const;
};

std::vector<GridEntry> parse_grid(std::string_view text);

struct McConfig {
  DgpSpec dgp;
  int replications = 1000;
  TestConfig test_cfg;  // r_tilde is taken from the grid
  std::vector<GridEntry> grid{{2}, {3}, {4}, {5}};
  std::uint64_t base_seed = 42;
  int r_max = 8;  // for "auto" entries
  int threads = 1;

  void validate() const;
};

struct RateRow {
  DgpFamily family = DgpFamily::S1;
  int T = 0;
  int N = 0;
  std::string r_tilde;  // "2".."n" or "auto"
  int rejections = 0;
  int replications = 0;  // attempted
  int failures = 0;      // excluded from the rate
  double rate = 0.0;     // rejections / (replications - failures)
};

struct RateTable {
  std::vector<RateRow> rows;
};

/// Replication rep draws its panel from derive_seed(derive_seed(base, rep), 0)
/// and tests grid value r from derive_seed(derive_seed(derive_seed(base, rep), 1), r).
/// An "auto" entry selects r_hat with seed derive_seed(<test seed>, 0) and
/// then reuses the fixed-r stream for r_hat; if no j <= r_max is accepted it
/// counts as a rejection. Replications run in parallel and merge in order.
RateTable run_experiment(const McConfig& cfg);

}  // namespace factorbreak
