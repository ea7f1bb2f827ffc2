#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace orderflow {

// Dense row-major rectangular array. Small (r <= 10 in practice), so no
// attempt at anything clever.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<T>& data() const { return data_; }
  std::vector<T>& data() { return data_; }

  T row_sum(std::size_t i) const {
    T sum{};
    for (std::size_t j = 0; j < cols_; ++j) sum += (*this)(i, j);
    return sum;
  }

  T col_sum(std::size_t j) const {
    T sum{};
    for (std::size_t i = 0; i < rows_; ++i) sum += (*this)(i, j);
    return sum;
  }

  T total() const {
    T sum{};
    for (const T& v : data_) sum += v;
    return sum;
  }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RealMatrix = Matrix<double>;
using CountMatrix = Matrix<std::uint64_t>;

}  // namespace orderflow
