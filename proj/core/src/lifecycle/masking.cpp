#include "tpem/lifecycle/masking.hpp"

#include "tpem/error.hpp"

namespace tpem::lifecycle {

std::vector<std::uint8_t> binarize(std::span<const double> real, double tau) {
  std::vector<std::uint8_t> bits(real.size());
  for (std::size_t i = 0; i < real.size(); ++i) bits[i] = real[i] > tau ? 1 : 0;
  return bits;
}

BinaryMask BinaryMask::pack(std::span<const std::uint8_t> bits, std::size_t rows, std::size_t cols) {
  if (bits.size() != rows * cols) throw ShapeError("mask pack: bit count does not match shape");
  BinaryMask m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.bytes_.assign(bytes_for(bits.size()), 0);
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) m.bytes_[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  return m;
}

BinaryMask BinaryMask::from_bytes(std::vector<std::uint8_t> bytes, std::size_t rows, std::size_t cols) {
  if (bytes.size() != bytes_for(rows * cols)) throw ShapeError("mask: byte count does not match shape");
  BinaryMask m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.bytes_ = std::move(bytes);
  return m;
}

BinaryMask BinaryMask::ones(std::size_t rows, std::size_t cols) {
  return pack(std::vector<std::uint8_t>(rows * cols, 1), rows, cols);
}

std::vector<std::uint8_t> BinaryMask::unpack() const {
  std::vector<std::uint8_t> bits(size());
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = bit(i) ? 1 : 0;
  return bits;
}

RealMask RealMask::initial(const std::vector<const ad::Tensor*>& shapes, double tau) {
  RealMask m;
  for (const ad::Tensor* t : shapes) {
    m.values.emplace_back(t->rows(), t->cols(), 2.0 * tau);
    m.state.emplace_back();
  }
  return m;
}

std::vector<std::vector<std::uint8_t>> RealMask::binarized(double tau) const {
  std::vector<std::vector<std::uint8_t>> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(binarize(v.values(), tau));
  return out;
}

ad::Tensor effective_grid(const ad::Tensor& weights, const OwnershipGrid& owners, TaskLabel task,
                          std::span<const std::uint8_t> mask, FreeElements free, std::size_t rows, std::size_t cols) {
  if (weights.rows() != owners.rows() || weights.cols() != owners.cols()) {
    throw ShapeError("effective weights: ownership grid does not match " + weights.shape_string());
  }
  if (rows > weights.rows() || cols > weights.cols()) throw ShapeError("effective weights: view exceeds grid");
  if (!mask.empty() && mask.size() != rows * cols) throw ShapeError("effective weights: mask does not match view");
  ad::Tensor out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const TaskLabel owner = owners.at(r, c);
      const double w = weights(r, c);
      double v = 0.0;
      if (owner == task) {
        v = w;
      } else if (owner == kFree) {
        v = free == FreeElements::Active ? w : 0.0;
      } else if (owner < task) {
        v = (mask.empty() || mask[r * cols + c]) ? w : 0.0;
      }
      out(r, c) = v;
    }
  }
  return out;
}

ad::Tensor mask_backward(const ad::Tensor& effective_grad, const ad::Tensor& weights, const OwnershipGrid& owners,
                         TaskLabel task) {
  if (!effective_grad.same_shape(weights) || weights.size() != owners.size()) {
    throw ShapeError("mask backward: gradient, weight and ownership grids differ");
  }
  ad::Tensor out(weights.rows(), weights.cols());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const TaskLabel owner = owners[i];
    if (owner != kFree && owner < task) out[i] = effective_grad[i] * weights[i];
  }
  return out;
}

}  // namespace tpem::lifecycle
