#include "prv/table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "prv/error.hpp"
#include "prv/summation.hpp"

namespace prv {

namespace {

constexpr double kMassTolerance = 1e-12;

bool is_permutation(std::span<const Eigen::Index> perm, Eigen::Index n) {
  if (static_cast<Eigen::Index>(perm.size()) != n) return false;
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (Eigen::Index k : perm) {
    if (k < 0 || k >= n || seen[static_cast<std::size_t>(k)]) return false;
    seen[static_cast<std::size_t>(k)] = true;
  }
  return true;
}

void check_permutations(std::span<const Eigen::Index> row_perm,
                        std::span<const Eigen::Index> col_perm, Eigen::Index rows,
                        Eigen::Index cols) {
  if (!is_permutation(row_perm, rows))
    throw Error(ErrorCode::InvalidPermutation, "row permutation is not a bijection on 0.." +
                                                   std::to_string(rows - 1));
  if (!is_permutation(col_perm, cols))
    throw Error(ErrorCode::InvalidPermutation, "column permutation is not a bijection on 0.." +
                                                   std::to_string(cols - 1));
}

template <typename Matrix>
Matrix permuted(const Matrix& m, std::span<const Eigen::Index> row_perm,
                std::span<const Eigen::Index> col_perm) {
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(row_perm[i], col_perm[j]);
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool looks_numeric(std::string_view cell) {
  if (cell.empty()) return false;
  double v = 0;
  const auto* first = cell.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, cell.data() + cell.size(), v);
  return ec == std::errc() && ptr == cell.data() + cell.size();
}

std::int64_t parse_count(std::string_view cell, std::size_t line, std::size_t column) {
  const auto where = " at line " + std::to_string(line) + ", column " + std::to_string(column);
  std::int64_t v = 0;
  const auto* first = cell.data();
  const auto* last = cell.data() + cell.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last) {
    throw Error(ErrorCode::NonIntegerCell, "'" + std::string(cell) + "' is not a base-10 integer" + where);
  }
  if (v < 0) throw Error(ErrorCode::NegativeCount, std::to_string(v) + where);
  return v;
}

}  // namespace

ContingencyTable::ContingencyTable(CountMatrix counts, std::vector<std::string> row_labels,
                                   std::vector<std::string> col_labels)
    : counts_(std::move(counts)),
      row_labels_(std::move(row_labels)),
      col_labels_(std::move(col_labels)) {
  if (counts_.rows() < 2 || counts_.cols() < 2) {
    throw Error(ErrorCode::TooSmall, "table is " + std::to_string(counts_.rows()) + "x" +
                                         std::to_string(counts_.cols()) + ", need at least 2x2");
  }
  if ((counts_.array() < 0).any()) throw Error(ErrorCode::NegativeCount, "negative cell count");
  if (!row_labels_.empty() && static_cast<Eigen::Index>(row_labels_.size()) != counts_.rows())
    throw Error(ErrorCode::InvalidTable, "row label count does not match rows");
  if (!col_labels_.empty() && static_cast<Eigen::Index>(col_labels_.size()) != counts_.cols())
    throw Error(ErrorCode::InvalidTable, "column label count does not match columns");
  total_ = counts_.sum();
}

Eigen::Index ContingencyTable::zero_cells() const { return (counts_.array() == 0).count(); }

ProbabilityTable::ProbabilityTable(Eigen::MatrixXd p) : p_(std::move(p)) {
  if (p_.rows() < 1 || p_.cols() < 1) throw Error(ErrorCode::TooSmall, "empty probability table");
  if (!p_.allFinite() || (p_.array() < 0.0).any())
    throw Error(ErrorCode::InvalidTable, "probabilities must be finite and nonnegative");
  const double mass = compensated_sum(p_);
  if (std::abs(mass - 1.0) > kMassTolerance) {
    std::ostringstream msg;
    msg << std::setprecision(17) << "probabilities sum to " << mass;
    throw Error(ErrorCode::InvalidTable, msg.str());
  }
  row_ = compensated_row_sums(p_);
  col_ = compensated_col_sums(p_);
  for (Eigen::Index j = 0; j < col_.size(); ++j) {
    if (!(col_(j) > 0.0))
      throw Error(ErrorCode::EmptyColumn, "column " + std::to_string(j + 1) + " has zero mass");
  }
}

ProbabilityTable ProbabilityTable::normalized(const Eigen::MatrixXd& weights) {
  const double mass = compensated_sum(weights);
  if (!(mass > 0.0)) throw Error(ErrorCode::ZeroTotal, "table has no mass");
  return ProbabilityTable(weights / mass);
}

double ProbabilityTable::independence_gap() const {
  return (p_ - row_ * col_.transpose()).cwiseAbs().maxCoeff();
}

ProbabilityTable from_counts(const ContingencyTable& t, double smoothing) {
  if (!(smoothing >= 0.0) || !std::isfinite(smoothing))
    throw Error(ErrorCode::BadParameter, "smoothing must be finite and nonnegative");
  if (t.total() == 0 && smoothing == 0.0) throw Error(ErrorCode::ZeroTotal, "table total is 0");
  if (smoothing == 0.0) {
    for (Eigen::Index j = 0; j < t.cols(); ++j) {
      if (t.counts().col(j).sum() == 0)
        throw Error(ErrorCode::EmptyColumn,
                    "column " + std::to_string(j + 1) + " has no observations (use compact)");
    }
  }
  const Eigen::MatrixXd shifted = t.counts().cast<double>().array() + smoothing;
  const double denom = static_cast<double>(t.total()) +
                       smoothing * static_cast<double>(t.rows() * t.cols());
  return ProbabilityTable(shifted / denom);
}

ProbabilityTable permute(const ProbabilityTable& p, std::span<const Eigen::Index> row_perm,
                         std::span<const Eigen::Index> col_perm) {
  check_permutations(row_perm, col_perm, p.rows(), p.cols());
  return ProbabilityTable(permuted(p.matrix(), row_perm, col_perm));
}

ContingencyTable permute(const ContingencyTable& t, std::span<const Eigen::Index> row_perm,
                         std::span<const Eigen::Index> col_perm) {
  check_permutations(row_perm, col_perm, t.rows(), t.cols());
  auto relabel = [](const std::vector<std::string>& labels, std::span<const Eigen::Index> perm) {
    std::vector<std::string> out;
    if (labels.empty()) return out;
    for (Eigen::Index k : perm) out.push_back(labels[static_cast<std::size_t>(k)]);
    return out;
  };
  return ContingencyTable(permuted(t.counts(), row_perm, col_perm),
                          relabel(t.row_labels(), row_perm), relabel(t.col_labels(), col_perm));
}

ContingencyTable compact(const ContingencyTable& t) {
  std::vector<Eigen::Index> keep_rows;
  std::vector<Eigen::Index> keep_cols;
  for (Eigen::Index i = 0; i < t.rows(); ++i)
    if (t.counts().row(i).sum() > 0) keep_rows.push_back(i);
  for (Eigen::Index j = 0; j < t.cols(); ++j)
    if (t.counts().col(j).sum() > 0) keep_cols.push_back(j);

  CountMatrix out(static_cast<Eigen::Index>(keep_rows.size()),
                  static_cast<Eigen::Index>(keep_cols.size()));
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  for (std::size_t a = 0; a < keep_rows.size(); ++a) {
    for (std::size_t b = 0; b < keep_cols.size(); ++b)
      out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = t(keep_rows[a], keep_cols[b]);
    if (!t.row_labels().empty()) row_labels.push_back(t.row_labels()[keep_rows[a]]);
  }
  if (!t.col_labels().empty())
    for (Eigen::Index j : keep_cols) col_labels.push_back(t.col_labels()[j]);
  return ContingencyTable(std::move(out), std::move(row_labels), std::move(col_labels));
}

ContingencyTable parse_csv(std::string_view text, const CsvOptions& options) {
  std::vector<std::vector<std::string_view>> grid;
  std::vector<std::size_t> line_numbers;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    const auto line = text.substr(start, end == std::string_view::npos ? end : end - start);
    ++line_no;
    if (!trim(line).empty()) {
      grid.push_back(split(line, ','));
      line_numbers.push_back(line_no);
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  if (grid.empty()) throw Error(ErrorCode::TooSmall, "no data rows");

  const bool header = options.header_row.value_or(
      std::any_of(grid.front().begin(), grid.front().end(),
                  [](std::string_view c) { return !looks_numeric(c); }));
  const std::size_t first_row = header ? 1 : 0;
  bool labels = false;
  if (options.label_col) {
    labels = *options.label_col;
  } else {
    for (std::size_t r = first_row; r < grid.size(); ++r)
      if (!grid[r].empty() && !looks_numeric(grid[r].front())) labels = true;
  }
  const std::size_t first_col = labels ? 1 : 0;

  const std::size_t width = grid[first_row < grid.size() ? first_row : 0].size();
  for (std::size_t r = 0; r < grid.size(); ++r) {
    if (grid[r].size() != width) {
      throw Error(ErrorCode::RaggedRows, "line " + std::to_string(line_numbers[r]) + " has " +
                                             std::to_string(grid[r].size()) + " cells, expected " +
                                             std::to_string(width));
    }
  }
  const auto rows = static_cast<Eigen::Index>(grid.size() - first_row);
  const auto cols = static_cast<Eigen::Index>(width - first_col);
  if (rows < 2 || cols < 2) {
    throw Error(ErrorCode::TooSmall, "table is " + std::to_string(rows) + "x" +
                                         std::to_string(cols) + ", need at least 2x2");
  }

  CountMatrix counts(rows, cols);
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto r = first_row + static_cast<std::size_t>(i);
    if (labels) row_labels.emplace_back(grid[r].front());
    for (Eigen::Index j = 0; j < cols; ++j) {
      const auto c = first_col + static_cast<std::size_t>(j);
      counts(i, j) = parse_count(grid[r][c], line_numbers[r], c + 1);
    }
  }
  if (header)
    for (std::size_t c = first_col; c < width; ++c) col_labels.emplace_back(grid.front()[c]);
  return ContingencyTable(std::move(counts), std::move(row_labels), std::move(col_labels));
}

std::string to_csv(const ContingencyTable& t) {
  std::ostringstream out;
  const bool labels = !t.row_labels().empty();
  if (!t.col_labels().empty()) {
    if (labels) out << ',';
    for (std::size_t j = 0; j < t.col_labels().size(); ++j)
      out << (j ? "," : "") << t.col_labels()[j];
    out << '\n';
  }
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    if (labels) out << t.row_labels()[static_cast<std::size_t>(i)] << ',';
    for (Eigen::Index j = 0; j < t.cols(); ++j) out << (j ? "," : "") << t(i, j);
    out << '\n';
  }
  return out.str();
}

std::string to_csv(const ProbabilityTable& p, int precision) {
  std::ostringstream out;
  out << std::setprecision(precision);
  if (precision <= 10) out << std::fixed;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) out << (j ? "," : "") << p(i, j);
    out << '\n';
  }
  return out.str();
}

}  // namespace prv
