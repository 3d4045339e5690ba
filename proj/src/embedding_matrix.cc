#include "lexiport/embedding_matrix.h"

#include <cmath>
#include <cstring>
#include <string>

#include "lexiport/error.h"

namespace lexiport {

EmbeddingMatrix::EmbeddingMatrix(std::size_t rows, std::size_t dim, std::vector<float> values)
    : rows_(rows), dim_(dim), values_(std::move(values)) {
  if (dim_ != 0 && rows_ > values_.max_size() / dim_) throw InvariantError("embedding shape overflows");
  if (values_.size() != rows_ * dim_) {
    throw InvariantError("embedding shape [" + std::to_string(rows_) + "," + std::to_string(dim_) + "] needs " +
                         std::to_string(rows_ * dim_) + " values, got " + std::to_string(values_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw InvariantError("non-finite embedding value at row " + std::to_string(i / dim_) + ", column " +
                           std::to_string(i % dim_));
    }
  }
}

EmbeddingMatrix EmbeddingMatrix::zeros(std::size_t rows, std::size_t dim) {
  return EmbeddingMatrix(rows, dim, std::vector<float>(rows * dim, 0.0f));
}

void EmbeddingMatrix::append_row(std::span<const float> row) {
  if (row.size() != dim_) {
    throw InvariantError("row of length " + std::to_string(row.size()) + " appended to matrix of dim " +
                         std::to_string(dim_));
  }
  for (std::size_t c = 0; c < row.size(); ++c) {
    if (!std::isfinite(row[c])) {
      throw InvariantError("non-finite embedding value at row " + std::to_string(rows_) + ", column " +
                           std::to_string(c));
    }
  }
  values_.insert(values_.end(), row.begin(), row.end());
  ++rows_;
}

bool operator==(const EmbeddingMatrix& a, const EmbeddingMatrix& b) {
  return a.rows_ == b.rows_ && a.dim_ == b.dim_ &&
         (a.values_.empty() || std::memcmp(a.values_.data(), b.values_.data(), a.values_.size() * sizeof(float)) == 0);
}

}  // namespace lexiport
