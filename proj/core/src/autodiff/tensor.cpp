#include "tpem/autodiff/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "tpem/error.hpp"

namespace tpem::ad {

Tensor::Tensor(std::size_t rows, std::size_t cols, double fill) : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

Tensor::Tensor(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows * cols) {
    throw ShapeError("tensor: " + std::to_string(values_.size()) + " values do not fill shape " +
                     ad::shape_string(rows, cols));
  }
}

Tensor::Tensor(std::size_t rows, std::size_t cols, std::initializer_list<double> values)
    : Tensor(rows, cols, std::vector<double>(values)) {}

Tensor Tensor::column(std::vector<double> values) {
  const std::size_t n = values.size();
  return Tensor(n, 1, std::move(values));
}

Tensor Tensor::identity(std::size_t n) {
  Tensor t(n, n);
  for (std::size_t i = 0; i < n; ++i) t(i, i) = 1.0;
  return t;
}

void Tensor::fill(double v) { std::fill(values_.begin(), values_.end(), v); }

void Tensor::reset(std::size_t rows, std::size_t cols) {
  rows_ = rows;
  cols_ = cols;
  values_.assign(rows * cols, 0.0);
}

bool Tensor::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

std::string Tensor::shape_string() const { return ad::shape_string(rows_, cols_); }

bool Tensor::bit_equal(const Tensor& other) const noexcept {
  if (!same_shape(other)) return false;
  return values_.empty() || std::memcmp(values_.data(), other.values_.data(), values_.size() * sizeof(double)) == 0;
}

std::string shape_string(std::size_t rows, std::size_t cols) {
  return "[" + std::to_string(rows) + "x" + std::to_string(cols) + "]";
}

}  // namespace tpem::ad
