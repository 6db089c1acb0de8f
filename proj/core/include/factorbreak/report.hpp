#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "factorbreak/diagnostics.hpp"
#include "factorbreak/montecarlo.hpp"
#include "factorbreak/psytest.hpp"
#include "factorbreak/selection.hpp"

namespace factorbreak {

/// Every scalar field of the result plus the effective configuration.
/// sim_stats and the residual series are left out.
std::string to_json(const TestResult& result, int indent = 2);

/// One simulated statistic per line under a "b,l_hat" header.
void write_sim_stats_csv(const TestResult& result, std::ostream& out);

/// Columns: family,T,N,r_tilde,rate,replications,failures
void write_rate_table_csv(const RateTable& table, std::ostream& out);

/// Columns: j,l_hat,crit_value,p_value,reject
void write_selection_csv(const SelectionResult& sel, std::ostream& out);

/// Columns: r_tilde,cd,lbq_fraction,lbq_lags,lbq_skipped
void write_diagnostics_csv(const std::vector<DiagnosticsReport>& rows, std::ostream& out);

/// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

}  // namespace factorbreak
