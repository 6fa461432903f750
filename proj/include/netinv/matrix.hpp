// Copyright (c) netinv contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "netinv/rational.hpp"

namespace netinv {

/// Dense rational matrix, row major. Sizes here are desk scale; exactness
/// matters, asymptotics do not.
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Mat from_rows(const std::vector<std::vector<Rational>>& rows) {
    Mat m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_) throw std::invalid_argument("ragged matrix rows");
      for (std::size_t j = 0; j < m.cols_; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Mat transposed() const {
    Mat t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  friend Mat operator*(const Mat& a, const Mat& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product shape mismatch");
    Mat out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a.at(i, k).is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out.at(i, j) += a.at(i, k) * b.at(k, j);
      }
    return out;
  }

  std::vector<Rational> apply(const std::vector<Rational>& v) const {
    if (v.size() != cols_) throw std::invalid_argument("matrix-vector shape mismatch");
    std::vector<Rational> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i] += at(i, j) * v[j];
    return out;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

}  // namespace netinv
