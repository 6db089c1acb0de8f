#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace factorbreak {

/// Balanced T x N panel. Rows are time periods, columns are series.
///
/// Invariants (checked by the constructor): T >= 2, N >= 1, all entries
/// finite, one label per row and column, series ids unique.
class PanelData {
 public:
  PanelData(Eigen::MatrixXd values, std::vector<std::string> time_labels,
            std::vector<std::string> series_ids);

  /// Panel with synthetic labels "1".."T" and "x1".."xN".
  static PanelData from_matrix(Eigen::MatrixXd values);

  const Eigen::MatrixXd& values() const noexcept { return values_; }
  const std::vector<std::string>& time_labels() const noexcept { return time_labels_; }
  const std::vector<std::string>& series_ids() const noexcept { return series_ids_; }

  int T() const noexcept { return static_cast<int>(values_.rows()); }
  int N() const noexcept { return static_cast<int>(values_.cols()); }

 private:
  Eigen::MatrixXd values_;
  std::vector<std::string> time_labels_;
  std::vector<std::string> series_ids_;
};

enum class TimeColumn {
  kAuto,   // first column is labels if its header looks like a date/time name
           // or any of its cells is non-numeric
  kFirst,  // first column always holds labels
  kNone,   // every column is a series
};

struct IngestOptions {
  TimeColumn time_column = TimeColumn::kAuto;
  /// Drop any column with at least one NA cell. When false, an NA cell is an
  /// error. Rows are never dropped.
  bool drop_incomplete_columns = true;
  /// Skip a FRED-MD "Transform:" row of transformation codes. The codes are
  /// not applied.
  bool skip_transform_row = true;
  /// Optional inclusive row window selected by time label, applied before the
  /// NA scan. Requires a time column.
  std::optional<std::string> first_label;
  std::optional<std::string> last_label;
};

/// True for the NA tokens: empty, "NA", "NaN" (case-insensitive, after trim).
bool is_na_token(std::string_view cell);

PanelData read_csv(std::istream& in, const IngestOptions& opts = {});
PanelData load_csv(const std::filesystem::path& path, const IngestOptions& opts = {});

/// Writes a header row ("time", ids...) and one row per period, values at
/// round-trip precision.
void write_csv(const PanelData& panel, std::ostream& out);
void write_csv(const PanelData& panel, const std::filesystem::path& path);

/// Centers each column and scales it to unit sample standard deviation
/// (denominator T-1). Throws InputError naming the first constant series.
PanelData standardize(const PanelData& panel);

}  // namespace factorbreak
