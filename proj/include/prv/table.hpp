#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace prv {

using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Observed R x C frequencies. Immutable once built; R, C >= 2.
class ContingencyTable {
 public:
  explicit ContingencyTable(CountMatrix counts, std::vector<std::string> row_labels = {},
                            std::vector<std::string> col_labels = {});

  Eigen::Index rows() const { return counts_.rows(); }
  Eigen::Index cols() const { return counts_.cols(); }
  std::int64_t total() const { return total_; }
  std::int64_t operator()(Eigen::Index i, Eigen::Index j) const { return counts_(i, j); }
  const CountMatrix& counts() const { return counts_; }
  const std::vector<std::string>& row_labels() const { return row_labels_; }
  const std::vector<std::string>& col_labels() const { return col_labels_; }

  /// Number of cells holding a zero count.
  Eigen::Index zero_cells() const;

  friend bool operator==(const ContingencyTable& a, const ContingencyTable& b) {
    return a.counts_ == b.counts_;
  }

 private:
  CountMatrix counts_;
  std::int64_t total_ = 0;
  std::vector<std::string> row_labels_;
  std::vector<std::string> col_labels_;
};

/// Joint distribution p_ij with cached marginals.
///
/// Invariants checked at construction: all cells finite and nonnegative,
/// total mass within 1e-12 of one, every column marginal strictly positive.
/// Row marginals may be zero; such rows carry no weight in any measure.
class ProbabilityTable {
 public:
  explicit ProbabilityTable(Eigen::MatrixXd p);

  /// Divides by the (compensated) total before validating.
  static ProbabilityTable normalized(const Eigen::MatrixXd& weights);

  Eigen::Index rows() const { return p_.rows(); }
  Eigen::Index cols() const { return p_.cols(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return p_(i, j); }
  const Eigen::MatrixXd& matrix() const { return p_; }
  const Eigen::VectorXd& row_marginals() const { return row_; }
  const Eigen::VectorXd& col_marginals() const { return col_; }

  /// Largest |p_ij - p_i. p_.j|.
  double independence_gap() const;

 private:
  Eigen::MatrixXd p_;
  Eigen::VectorXd row_;
  Eigen::VectorXd col_;
};

/// Plug-in estimate p_ij = (n_ij + smoothing) / (n + R C smoothing).
ProbabilityTable from_counts(const ContingencyTable& t, double smoothing = 0.0);

/// Output cell (i, j) is input cell (row_perm[i], col_perm[j]); permutations are 0-based.
ProbabilityTable permute(const ProbabilityTable& p, std::span<const Eigen::Index> row_perm,
                         std::span<const Eigen::Index> col_perm);

ContingencyTable permute(const ContingencyTable& t, std::span<const Eigen::Index> row_perm,
                         std::span<const Eigen::Index> col_perm);

/// Drops all-zero rows and all-zero columns. Throws TooSmall if fewer than
/// two of either survive.
ContingencyTable compact(const ContingencyTable& t);

struct CsvOptions {
  /// nullopt means auto-detect from non-numeric cells.
  std::optional<bool> header_row;
  std::optional<bool> label_col;
};

ContingencyTable parse_csv(std::string_view text, const CsvOptions& options = {});

std::string to_csv(const ContingencyTable& t);
std::string to_csv(const ProbabilityTable& p, int precision = 17);

}  // namespace prv
