#include "factorbreak/panel.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "factorbreak/error.hpp"
#include "factorbreak/report.hpp"

namespace factorbreak {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string_view rest = line;
  if (!rest.empty() && rest.back() == '\r') rest.remove_suffix(1);
  for (;;) {
    const auto comma = rest.find(',');
    cells.emplace_back(trim(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return cells;
}

bool parse_number(std::string_view cell, double& out) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

bool looks_like_time_header(std::string_view name) {
  for (std::string_view known : {"date", "sasdate", "time", "period", "t", "index", "year",
                                 "month", "quarter", "obs", ""}) {
    if (iequals(name, known)) return true;
  }
  return false;
}

}  // namespace

PanelData::PanelData(Eigen::MatrixXd values, std::vector<std::string> time_labels,
                     std::vector<std::string> series_ids)
    : values_(std::move(values)),
      time_labels_(std::move(time_labels)),
      series_ids_(std::move(series_ids)) {
  if (values_.rows() < 2) throw InputError("panel needs at least 2 time periods");
  if (values_.cols() < 1) throw InputError("panel needs at least 1 series");
  if (!values_.allFinite()) throw InputError("panel contains non-finite values");
  if (static_cast<Eigen::Index>(time_labels_.size()) != values_.rows()) {
    throw InputError("expected " + std::to_string(values_.rows()) + " time labels, got " +
                     std::to_string(time_labels_.size()));
  }
  if (static_cast<Eigen::Index>(series_ids_.size()) != values_.cols()) {
    throw InputError("expected " + std::to_string(values_.cols()) + " series ids, got " +
                     std::to_string(series_ids_.size()));
  }
  std::unordered_set<std::string> seen;
  for (const auto& id : series_ids_) {
    if (!seen.insert(id).second) throw InputError("duplicate series id '" + id + "'");
  }
}

PanelData PanelData::from_matrix(Eigen::MatrixXd values) {
  std::vector<std::string> times(values.rows());
  std::vector<std::string> ids(values.cols());
  for (std::size_t t = 0; t < times.size(); ++t) times[t] = std::to_string(t + 1);
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = "x" + std::to_string(i + 1);
  return PanelData(std::move(values), std::move(times), std::move(ids));
}

bool is_na_token(std::string_view cell) {
  cell = trim(cell);
  return cell.empty() || iequals(cell, "NA") || iequals(cell, "NaN");
}

PanelData read_csv(std::istream& in, const IngestOptions& opts) {
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (!trim(line).empty()) {
      header = split_row(line);
      break;
    }
  }
  if (header.empty()) throw InputError("CSV has no header row");

  std::vector<std::vector<std::string>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_row(line);
    if (cells.size() != header.size()) {
      throw InputError("ragged CSV: line " + std::to_string(line_no) + " has " +
                       std::to_string(cells.size()) + " cells, header has " +
                       std::to_string(header.size()));
    }
    rows.push_back(std::move(cells));
  }

  bool has_time = false;
  switch (opts.time_column) {
    case TimeColumn::kFirst: has_time = true; break;
    case TimeColumn::kNone: has_time = false; break;
    case TimeColumn::kAuto: {
      has_time = looks_like_time_header(header.front());
      double dummy;
      for (const auto& r : rows) {
        if (has_time) break;
        if (!is_na_token(r.front()) && !parse_number(r.front(), dummy)) has_time = true;
      }
      break;
    }
  }

  if (has_time && opts.skip_transform_row && !rows.empty() &&
      iequals(rows.front().front(), "Transform:")) {
    rows.erase(rows.begin());
  }

  if (opts.first_label || opts.last_label) {
    if (!has_time) throw InputError("row window by label requires a time column");
    auto find_label = [&](const std::string& label) {
      auto it = std::find_if(rows.begin(), rows.end(),
                             [&](const auto& r) { return r.front() == label; });
      if (it == rows.end()) throw InputError("time label '" + label + "' not found");
      return it;
    };
    auto first = opts.first_label ? find_label(*opts.first_label) : rows.begin();
    auto last = opts.last_label ? find_label(*opts.last_label) + 1 : rows.end();
    if (first >= last) throw InputError("empty row window");
    rows = std::vector<std::vector<std::string>>(first, last);
  }

  const std::size_t first_col = has_time ? 1 : 0;
  const std::size_t T = rows.size();
  std::vector<std::size_t> keep;
  std::vector<std::vector<double>> columns;
  for (std::size_t c = first_col; c < header.size(); ++c) {
    std::vector<double> col(T);
    bool complete = true;
    for (std::size_t t = 0; t < T; ++t) {
      const auto& cell = rows[t][c];
      if (is_na_token(cell)) {
        complete = false;
        continue;
      }
      if (!parse_number(cell, col[t])) {
        throw InputError("non-numeric cell '" + cell + "' in column '" + header[c] +
                         "', data row " + std::to_string(t + 1));
      }
    }
    if (!complete) {
      if (opts.drop_incomplete_columns) continue;
      throw InputError("column '" + header[c] + "' has missing values");
    }
    keep.push_back(c);
    columns.push_back(std::move(col));
  }
  if (keep.empty()) throw InputError("no usable columns after removing incomplete series");

  Eigen::MatrixXd values(T, static_cast<Eigen::Index>(keep.size()));
  std::vector<std::string> ids;
  for (std::size_t j = 0; j < keep.size(); ++j) {
    values.col(static_cast<Eigen::Index>(j)) =
        Eigen::Map<const Eigen::VectorXd>(columns[j].data(), static_cast<Eigen::Index>(T));
    ids.push_back(header[keep[j]].empty() ? "col" + std::to_string(keep[j] + 1) : header[keep[j]]);
  }
  std::vector<std::string> times(T);
  for (std::size_t t = 0; t < T; ++t) times[t] = has_time ? rows[t].front() : std::to_string(t + 1);
  return PanelData(std::move(values), std::move(times), std::move(ids));
}

PanelData load_csv(const std::filesystem::path& path, const IngestOptions& opts) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  try {
    return read_csv(in, opts);
  } catch (...) {
    rethrow_with_context(path.string());
  }
}

void write_csv(const PanelData& panel, std::ostream& out) {
  out << "time";
  for (const auto& id : panel.series_ids()) out << ',' << id;
  out << '\n';
  const auto& x = panel.values();
  for (int t = 0; t < panel.T(); ++t) {
    out << panel.time_labels()[t];
    for (int i = 0; i < panel.N(); ++i) out << ',' << format_double(x(t, i));
    out << '\n';
  }
}

void write_csv(const PanelData& panel, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  write_csv(panel, out);
}

PanelData standardize(const PanelData& panel) {
  const auto& x = panel.values();
  Eigen::MatrixXd z(x.rows(), x.cols());
  const double dof = static_cast<double>(x.rows() - 1);
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    const double mean = x.col(i).mean();
    const Eigen::VectorXd centered = x.col(i).array() - mean;
    const double sd = std::sqrt(centered.squaredNorm() / dof);
    const double scale = std::max(1.0, x.col(i).cwiseAbs().maxCoeff());
    if (!(sd > 1e-12 * scale)) {
      throw InputError("constant series '" + panel.series_ids()[i] + "' cannot be standardized");
    }
    z.col(i) = centered / sd;
  }
  return PanelData(std::move(z), panel.time_labels(), panel.series_ids());
}

}  // namespace factorbreak
