#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lexiport {

// Row-major V x d matrix of finite binary32 values, one row per token.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;

  // Throws InvariantError if values.size() != rows * dim or any value is
  // NaN or infinite (the message names the offending row and column).
  EmbeddingMatrix(std::size_t rows, std::size_t dim, std::vector<float> values);

  static EmbeddingMatrix zeros(std::size_t rows, std::size_t dim);

  std::size_t rows() const { return rows_; }
  std::size_t dim() const { return dim_; }

  std::span<const float> row(std::size_t r) const { return {values_.data() + r * dim_, dim_}; }
  float value(std::size_t r, std::size_t c) const { return values_[r * dim_ + c]; }
  std::span<const float> values() const { return values_; }

  void reserve_rows(std::size_t rows) { values_.reserve(rows * dim_); }
  // Appends one row; throws InvariantError on a wrong length or a non-finite value.
  void append_row(std::span<const float> row);

  // Bitwise comparison: -0.0f and 0.0f are different.
  friend bool operator==(const EmbeddingMatrix& a, const EmbeddingMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t dim_ = 0;
  std::vector<float> values_;
};

}  // namespace lexiport
