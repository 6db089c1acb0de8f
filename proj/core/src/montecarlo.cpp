#include "factorbreak/montecarlo.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <string>

#include "factorbreak/error.hpp"
#include "factorbreak/kernels.hpp"
#include "factorbreak/parallel.hpp"
#include "factorbreak/rng.hpp"
#include "factorbreak/selection.hpp"

namespace factorbreak {

namespace {

constexpr DgpFamily kFamilies[] = {DgpFamily::S1, DgpFamily::S2, DgpFamily::S3,
                                   DgpFamily::L1, DgpFamily::L2, DgpFamily::L3,
                                   DgpFamily::L4, DgpFamily::L5, DgpFamily::L6,
                                   DgpFamily::G1, DgpFamily::G2, DgpFamily::G3};

// Logistic departures are evaluated at G(10 t / T).
constexpr double kLogisticTimeScale = 10.0;

int parse_int(std::string_view s, std::string_view what) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("malformed " + std::string(what) + " '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

const char* to_string(DgpFamily f) noexcept {
  switch (f) {
    case DgpFamily::S1: return "S1";
    case DgpFamily::S2: return "S2";
    case DgpFamily::S3: return "S3";
    case DgpFamily::L1: return "L1";
    case DgpFamily::L2: return "L2";
    case DgpFamily::L3: return "L3";
    case DgpFamily::L4: return "L4";
    case DgpFamily::L5: return "L5";
    case DgpFamily::L6: return "L6";
    case DgpFamily::G1: return "G1";
    case DgpFamily::G2: return "G2";
    case DgpFamily::G3: return "G3";
  }
  return "?";
}

DgpFamily parse_dgp_family(std::string_view name) {
  std::string upper(name);
  for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (upper.rfind("DGP.", 0) == 0) upper.erase(0, 4);
  for (DgpFamily f : kFamilies) {
    if (upper == to_string(f)) return f;
  }
  throw ConfigError("unknown DGP '" + std::string(name) + "'");
}

DgpSpec make_dgp(DgpFamily family, int T, int N) {
  DgpSpec spec;
  spec.family = family;
  spec.T = T;
  spec.N = N;

  const auto index = static_cast<int>(family);
  // Error design by position within the family triple: 0, 1, 2.
  switch (index % 3) {
    case 0: spec.error_ar = 0.0; spec.toeplitz_rho = 0.3; break;
    case 1: spec.error_ar = 0.2; spec.toeplitz_rho = 0.0; break;
    default: spec.error_ar = 0.2; spec.toeplitz_rho = 0.3; break;
  }
  switch (family) {
    case DgpFamily::S1: case DgpFamily::S2: case DgpFamily::S3:
      spec.path = LoadingPath::kConstant;
      break;
    case DgpFamily::L1: case DgpFamily::L2: case DgpFamily::L3:
      spec.path = LoadingPath::kLogistic;
      break;
    case DgpFamily::L4: case DgpFamily::L5: case DgpFamily::L6:
      spec.path = LoadingPath::kMidSampleShift;
      spec.shift = {2.0, 2.0};
      spec.shift_local = true;
      break;
    case DgpFamily::G1: case DgpFamily::G2: case DgpFamily::G3:
      spec.path = LoadingPath::kMidSampleShift;
      spec.shift = {0.25, 0.25};
      spec.shift_local = false;
      break;
  }
  return spec;
}

double local_departure_rate(double T, double N, double h) {
  return std::pow(T * N, -0.5) * std::pow(h, -0.25);
}

double logistic_g(double y, double scale, const std::vector<double>& locations) {
  double prod = 1.0;
  for (double b : locations) prod *= (y - b);
  return 1.0 / (1.0 + std::exp(-scale * prod));
}

Eigen::Vector2d loading_departure(const DgpSpec& spec, int t) {
  Eigen::Vector2d d = Eigen::Vector2d::Zero();
  const double a_tn = local_departure_rate(spec.T, spec.N, rule_of_thumb_h(spec.T, spec.N));
  switch (spec.path) {
    case LoadingPath::kConstant:
      break;
    case LoadingPath::kLogistic: {
      const double y = kLogisticTimeScale * static_cast<double>(t) / spec.T;
      d(0) = spec.logistic_multiplier * a_tn *
             logistic_g(y, spec.logistic_scale, spec.logistic_locations);
      break;
    }
    case LoadingPath::kMidSampleShift:
      if (2 * t > spec.T) {
        const double m = spec.shift_local ? a_tn : 1.0;
        d << m * spec.shift[0], m * spec.shift[1];
      }
      break;
  }
  return d;
}

PanelData generate_panel(const DgpSpec& spec, std::uint64_t seed) {
  if (spec.T < 2 || spec.N < 1) throw ConfigError("DGP needs T >= 2 and N >= 1");
  if (spec.r != 2) throw ConfigError("DGP designs use r = 2 factors");
  if (!(std::abs(spec.factor_ar) < 1.0) || !(std::abs(spec.error_ar) < 1.0)) {
    throw ConfigError("AR coefficients must lie in (-1, 1)");
  }
  if (spec.burn_in < 0) throw ConfigError("burn-in must be nonnegative");

  const int T = spec.T;
  const int N = spec.N;
  const int r = spec.r;
  Rng loading_rng(derive_seed(seed, 0));
  Rng factor_rng(derive_seed(seed, 1));
  Rng error_rng(derive_seed(seed, 2));

  Eigen::MatrixXd lambda0(N, r);
  for (int i = 0; i < N; ++i)
    for (int k = 0; k < r; ++k)
      lambda0(i, k) = spec.loading_mean + spec.loading_sd * loading_rng.normal();

  // Factors start at the stationary mean.
  Eigen::MatrixXd f(T, r);
  Eigen::VectorXd ft = Eigen::VectorXd::Constant(r, spec.factor_drift / (1.0 - spec.factor_ar));
  for (int step = 0; step < spec.burn_in + T; ++step) {
    for (int k = 0; k < r; ++k) ft(k) = spec.factor_drift + spec.factor_ar * ft(k) + factor_rng.normal();
    if (step >= spec.burn_in) f.row(step - spec.burn_in) = ft.transpose();
  }

  // Innovations N(0, Sigma) with Sigma_ij = rho^|i-j| via its Cholesky factor.
  Eigen::MatrixXd chol;
  if (spec.toeplitz_rho != 0.0) {
    Eigen::MatrixXd sigma(N, N);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) sigma(i, j) = std::pow(spec.toeplitz_rho, std::abs(i - j));
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) throw NumericError("error covariance is not positive definite");
    chol = llt.matrixL();
  }
  const int error_burn = spec.error_ar != 0.0 ? spec.burn_in : 0;
  Eigen::MatrixXd e(T, N);
  Eigen::VectorXd et = Eigen::VectorXd::Zero(N);
  Eigen::VectorXd z(N);
  for (int step = 0; step < error_burn + T; ++step) {
    for (int i = 0; i < N; ++i) z(i) = error_rng.normal();
    if (spec.toeplitz_rho != 0.0) z = chol.triangularView<Eigen::Lower>() * z;
    et = spec.error_ar * et + z;
    if (step >= error_burn) e.row(step - error_burn) = et.transpose();
  }

  Eigen::MatrixXd x = f * lambda0.transpose() + e;
  for (int t = 0; t < T; ++t) {
    const double shift = loading_departure(spec, t + 1).dot(f.row(t).transpose());
    if (shift != 0.0) x.row(t).array() += shift;
  }
  return PanelData::from_matrix(std::move(x));
}

std::string GridEntry::label() const {
  return is_auto() ? "auto" : std::to_string(r_tilde);
}

std::vector<GridEntry> parse_grid(std::string_view text) {
  std::vector<GridEntry> grid;
  while (!text.empty()) {
    const auto comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (item == "auto" || item == "r_hat") {
      grid.push_back({0});
    } else if (const auto dots = item.find(".."); dots != std::string_view::npos) {
      const int lo = parse_int(item.substr(0, dots), "grid range");
      const int hi = parse_int(item.substr(dots + 2), "grid range");
      if (lo < 1 || hi < lo) throw ConfigError("bad grid range '" + std::string(item) + "'");
      for (int r = lo; r <= hi; ++r) grid.push_back({r});
    } else {
      const int r = parse_int(item, "grid value");
      if (r < 1) throw ConfigError("grid values must be at least 1");
      grid.push_back({r});
    }
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (grid.empty()) throw ConfigError("empty r_tilde grid");
  return grid;
}

void McConfig::validate() const {
  if (replications < 1) throw ConfigError("replications must be at least 1");
  if (grid.empty()) throw ConfigError("empty r_tilde grid");
  if (threads < 1) throw ConfigError("threads must be at least 1");
  if (r_max < 1) throw ConfigError("r_max must be at least 1");
  const int cap = std::min(dgp.T, dgp.N);
  for (const auto& g : grid) {
    if (!g.is_auto() && g.r_tilde > cap) {
      throw ConfigError("grid value " + std::to_string(g.r_tilde) + " exceeds min(T, N)");
    }
  }
  test_cfg.validate();
}

RateTable run_experiment(const McConfig& cfg) {
  cfg.validate();
  const std::size_t reps = static_cast<std::size_t>(cfg.replications);
  const std::size_t cols = cfg.grid.size();
  const int r_max = std::min({cfg.r_max, cfg.dgp.T, cfg.dgp.N});

  // 1 = reject, 0 = accept, -1 = failed.
  std::vector<signed char> outcome(reps * cols, -1);

  parallel_for(reps, cfg.threads, [&](std::size_t rep) {
    const std::uint64_t rep_seed = derive_seed(cfg.base_seed, rep);
    const std::uint64_t test_seed = derive_seed(rep_seed, 1);
    std::optional<PanelData> panel;
    try {
      panel = generate_panel(cfg.dgp, derive_seed(rep_seed, 0));
    } catch (const Error&) {
      return;
    }

    std::map<int, bool> fixed;
    auto test_at = [&](int r) {
      if (auto it = fixed.find(r); it != fixed.end()) return it->second;
      TestConfig tc = cfg.test_cfg;
      tc.r_tilde = r;
      tc.seed = derive_seed(test_seed, static_cast<std::uint64_t>(r));
      tc.threads = 1;
      const bool reject = run_test(*panel, tc).reject;
      fixed.emplace(r, reject);
      return reject;
    };

    for (std::size_t c = 0; c < cols; ++c) {
      try {
        bool reject;
        if (cfg.grid[c].is_auto()) {
          TestConfig tc = cfg.test_cfg;
          tc.seed = derive_seed(test_seed, 0);
          tc.threads = 1;
          const SelectionResult sel = sequential_factor_number(*panel, r_max, tc);
          reject = sel.r_hat ? test_at(*sel.r_hat) : true;
        } else {
          reject = test_at(cfg.grid[c].r_tilde);
        }
        outcome[rep * cols + c] = reject ? 1 : 0;
      } catch (const Error&) {
        outcome[rep * cols + c] = -1;
      }
    }
  });

  RateTable table;
  for (std::size_t c = 0; c < cols; ++c) {
    RateRow row;
    row.family = cfg.dgp.family;
    row.T = cfg.dgp.T;
    row.N = cfg.dgp.N;
    row.r_tilde = cfg.grid[c].label();
    row.replications = cfg.replications;
    for (std::size_t rep = 0; rep < reps; ++rep) {
      const signed char o = outcome[rep * cols + c];
      if (o < 0) ++row.failures;
      else row.rejections += o;
    }
    const int ok = row.replications - row.failures;
    row.rate = ok > 0 ? static_cast<double>(row.rejections) / ok : 0.0;
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace factorbreak
