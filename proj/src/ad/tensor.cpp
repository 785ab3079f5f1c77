#include "gw/ad/tensor.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "gw/core/error.hpp"

namespace gw::ad {

std::string to_string(const Shape& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

std::size_t element_count(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

Tensor::Tensor(Shape shape, double fill)
    : shape_(std::move(shape)), values_(element_count(shape_), fill) {}

Tensor::Tensor(Shape shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  if (values_.size() != element_count(shape_)) {
    throw DimensionError("tensor", "value count " + std::to_string(values_.size()) +
                                       " does not match shape " + to_string(shape_));
  }
}

Tensor Tensor::row(std::vector<double> values) {
  const std::size_t n = values.size();
  return Tensor({1, n}, std::move(values));
}

Tensor Tensor::matrix(std::size_t rows, std::size_t cols, std::vector<double> values) {
  return Tensor({rows, cols}, std::move(values));
}

std::size_t Tensor::rows() const {
  if (shape_.size() > 2) throw DimensionError("tensor", "rank > 2 has no matrix view");
  return shape_.size() == 2 ? shape_[0] : 1;
}

std::size_t Tensor::cols() const {
  if (shape_.size() > 2) throw DimensionError("tensor", "rank > 2 has no matrix view");
  if (shape_.empty()) return 1;
  return shape_.back();
}

void Tensor::fill(double v) { std::fill(values_.begin(), values_.end(), v); }

}  // namespace gw::ad
