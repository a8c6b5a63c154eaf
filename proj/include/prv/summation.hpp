#pragma once

#include <cmath>

#include <Eigen/Core>

namespace prv {

/// Neumaier's variant of Kahan summation.
template <typename Scalar>
class CompensatedSum {
 public:
  void add(Scalar x) {
    const Scalar t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(Scalar x) {
    add(x);
    return *this;
  }

  CompensatedSum& operator-=(Scalar x) {
    add(-x);
    return *this;
  }

  Scalar value() const { return sum_ + carry_; }

 private:
  Scalar sum_{0};
  Scalar carry_{0};
};

template <typename Derived>
typename Derived::Scalar compensated_sum(const Eigen::DenseBase<Derived>& x) {
  CompensatedSum<typename Derived::Scalar> acc;
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i) acc.add(x(i, j));
  return acc.value();
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> compensated_row_sums(
    const Eigen::DenseBase<Derived>& x) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> out(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) out(i) = compensated_sum(x.row(i));
  return out;
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> compensated_col_sums(
    const Eigen::DenseBase<Derived>& x) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> out(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) out(j) = compensated_sum(x.col(j));
  return out;
}

}  // namespace prv
