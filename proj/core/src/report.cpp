#include "factorbreak/report.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <ostream>

namespace factorbreak {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string to_json(const TestResult& r, int indent) {
  auto num = [](double v) -> nlohmann::json {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
  };
  nlohmann::json j;
  j["T"] = r.T;
  j["N"] = r.N;
  j["r_tilde"] = r.r_tilde;
  j["l_nt"] = num(r.l_nt);
  j["sigma2_hat"] = num(r.sigma2_hat);
  j["l_hat"] = num(r.l_hat);
  j["crit_value"] = num(r.crit_value);
  j["p_value"] = num(r.p_value);
  j["reject"] = r.reject;
  j["h"] = r.h_used;
  j["hac_lag"] = r.l_used;
  j["nu0"] = r.nu0;
  j["kernel"] = "bartlett";
  j["B"] = r.B;
  j["alpha"] = r.alpha;
  j["seed"] = r.seed;
  j["crit_rule"] = to_string(r.crit_rule);
  j["null_sim"] = to_string(r.null_sim);
  j["standardized"] = r.standardized;
  j["warnings"] = r.warnings;
  return j.dump(indent);
}

void write_sim_stats_csv(const TestResult& result, std::ostream& out) {
  out << "b,l_hat\n";
  for (std::size_t b = 0; b < result.sim_stats.size(); ++b) {
    out << b << ',' << format_double(result.sim_stats[b]) << '\n';
  }
}

void write_rate_table_csv(const RateTable& table, std::ostream& out) {
  out << "family,T,N,r_tilde,rate,replications,failures\n";
  for (const auto& row : table.rows) {
    out << to_string(row.family) << ',' << row.T << ',' << row.N << ',' << row.r_tilde << ','
        << format_double(row.rate) << ',' << row.replications << ',' << row.failures << '\n';
  }
}

void write_selection_csv(const SelectionResult& sel, std::ostream& out) {
  out << "j,l_hat,crit_value,p_value,reject\n";
  for (const auto& step : sel.per_j) {
    out << step.j << ',' << format_double(step.result.l_hat) << ','
        << format_double(step.result.crit_value) << ',' << format_double(step.result.p_value)
        << ',' << (step.result.reject ? 1 : 0) << '\n';
  }
}

void write_diagnostics_csv(const std::vector<DiagnosticsReport>& rows, std::ostream& out) {
  out << "r_tilde,cd,lbq_fraction,lbq_lags,lbq_skipped\n";
  for (const auto& d : rows) {
    out << d.r_tilde << ',' << format_double(d.cd_stat) << ','
        << format_double(d.lbq_reject_fraction) << ',' << d.lbq_lags << ',' << d.lbq_skipped
        << '\n';
  }
}

}  // namespace factorbreak
