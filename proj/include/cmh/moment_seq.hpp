#pragma once

// Forward differences of finite sequence prefixes and the numerical
// complete-monotonicity test Δ^k a_n ≥ 0.

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cmh/error.hpp"

namespace cmh {

/// Triangular table D[k][n] = Δ^k a_n for n + k ≤ N.
///
/// Row k is built from row k-1 left to right as D[k-1][n] - D[k-1][n+1]; no
/// other arithmetic touches the entries.
class DifferenceTable {
public:
  explicit DifferenceTable(const std::vector<double> &values) {
    rows_.reserve(values.size());
    rows_.push_back(values);
    for (std::size_t k = 1; k < values.size(); ++k) {
      const std::vector<double> &prev = rows_.back();
      std::vector<double> row(prev.size() - 1);
      for (std::size_t n = 0; n < row.size(); ++n) row[n] = prev[n] - prev[n + 1];
      rows_.push_back(std::move(row));
    }
  }

  /// N, the last index of the underlying prefix.
  std::size_t last_index() const noexcept { return rows_.front().size() - 1; }

  double at(std::size_t k, std::size_t n) const {
    if (k > last_index() || n + k > last_index()) throw IndexOutOfRange(k, n, last_index());
    return rows_[k][n];
  }

  const std::vector<double> &row(std::size_t k) const {
    if (k > last_index()) throw IndexOutOfRange(k, 0, last_index());
    return rows_[k];
  }

private:
  std::vector<std::vector<double>> rows_;
};

/// Finite prefix a_0..a_N of a candidate completely monotone sequence.
class MomentSequence {
public:
  explicit MomentSequence(std::vector<double> values) : table_(check(values)) {
    normalized_ = std::abs(values.front() - 1.0) <= 1e-12;
    values_ = std::move(values);
  }

  const std::vector<double> &values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::size_t last_index() const noexcept { return values_.size() - 1; }
  bool normalized() const noexcept { return normalized_; }
  const DifferenceTable &differences() const noexcept { return table_; }

  double operator[](std::size_t n) const { return values_.at(n); }

private:
  static const std::vector<double> &check(const std::vector<double> &values) {
    if (values.empty()) throw DomainError("moment sequence must have at least one term");
    for (double v : values)
      if (!std::isfinite(v)) throw DomainError("moment sequence entries must be finite");
    return values;
  }

  std::vector<double> values_;
  bool normalized_ = false;
  DifferenceTable table_;
};

/// Δ^k a_n; requires n + k ≤ N.
inline double forward_difference(const MomentSequence &seq, std::size_t k, std::size_t n) {
  return seq.differences().at(k, n);
}

/// Outcome of the prefix test. `holds` only means no entry of the difference
/// table falls below -tol ("prefix-feasible"); it is not a proof of complete
/// monotonicity of any infinite extension.
struct CMVerdict {
  bool holds = true;
  std::size_t last_index = 0; // N
  // First violation in (k, n) lexicographic order, when !holds.
  std::size_t k = 0;
  std::size_t n = 0;
  double value = 0.0;
};

inline CMVerdict is_completely_monotone(const MomentSequence &seq, double tol = 0.0) {
  if (!(tol >= 0.0)) throw DomainError("tolerance must be non-negative");
  CMVerdict verdict;
  verdict.last_index = seq.last_index();
  const DifferenceTable &table = seq.differences();
  for (std::size_t k = 0; k <= table.last_index(); ++k) {
    const std::vector<double> &row = table.row(k);
    for (std::size_t n = 0; n < row.size(); ++n) {
      if (row[n] < -tol) {
        verdict.holds = false;
        verdict.k = k;
        verdict.n = n;
        verdict.value = row[n];
        return verdict;
      }
    }
  }
  return verdict;
}

/// Coefficientwise product {a_n b_n}.
inline MomentSequence hadamard(const MomentSequence &a, const MomentSequence &b) {
  if (a.size() != b.size())
    throw LengthMismatch("hadamard: lengths differ (" + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()) + ")");
  std::vector<double> out(a.size());
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = a[n] * b[n];
  return MomentSequence(std::move(out));
}

/// Binomial coefficient as a double; exact while the value fits in 53 bits.
inline double binomial(std::size_t k, std::size_t j) {
  if (j > k) return 0.0;
  if (j > k - j) j = k - j;
  double b = 1.0;
  for (std::size_t i = 1; i <= j; ++i) b = b * static_cast<double>(k - j + i) / static_cast<double>(i);
  return b;
}

/// Σ_{j=0}^{k} C(k,j) Δ^{k-j}a_{n+j} Δ^j b_n, the product rule for Δ^k(a_n b_n).
///
/// Terms are accumulated for j = 0, 1, ..., k, each as (C(k,j)·Δ^{k-j}a_{n+j})·Δ^j b_n.
inline double leibniz_difference(const MomentSequence &a, const MomentSequence &b, std::size_t k,
                                 std::size_t n) {
  if (a.size() != b.size()) throw LengthMismatch("leibniz_difference: lengths differ");
  double sum = 0.0;
  for (std::size_t j = 0; j <= k; ++j)
    sum += (binomial(k, j) * forward_difference(a, k - j, n + j)) * forward_difference(b, j, n);
  return sum;
}

} // namespace cmh
