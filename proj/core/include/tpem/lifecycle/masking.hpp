#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tpem/autodiff/adam.hpp"
#include "tpem/autodiff/tensor.hpp"
#include "tpem/lifecycle/ownership.hpp"

namespace tpem::lifecycle {

// M = 1 iff real > tau (strict).
std::vector<std::uint8_t> binarize(std::span<const double> real, double tau);

// Bit-packed 0/1 grid: row-major element order, element i stored in byte
// i / 8 at bit i % 8 (least significant bit first).
class BinaryMask {
 public:
  BinaryMask() = default;

  static BinaryMask pack(std::span<const std::uint8_t> bits, std::size_t rows, std::size_t cols);
  static BinaryMask from_bytes(std::vector<std::uint8_t> bytes, std::size_t rows, std::size_t cols);
  static BinaryMask ones(std::size_t rows, std::size_t cols);

  std::vector<std::uint8_t> unpack() const;
  bool bit(std::size_t i) const { return (bytes_[i / 8] >> (i % 8)) & 1u; }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return rows_ * cols_; }
  std::size_t byte_size() const noexcept { return bytes_.size(); }
  const std::vector<std::uint8_t>& bytes() const noexcept { return bytes_; }

  static std::size_t bytes_for(std::size_t n) { return (n + 7) / 8; }

  bool operator==(const BinaryMask&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint8_t> bytes_;
};

// Real-valued mask weights of the task in training, one grid per shared
// parameter, with their own optimizer state.
struct RealMask {
  std::vector<ad::Tensor> values;
  std::vector<ad::AdamState> state;

  // Every element starts at 2 * tau, i.e. an all-ones binary mask.
  static RealMask initial(const std::vector<const ad::Tensor*>& shapes, double tau);
  std::vector<std::vector<std::uint8_t>> binarized(double tau) const;
};

enum class FreeElements { Active, Zero };

// Effective weights seen by the forward pass of task `task` over the
// top-left rows x cols block:
//   owner in [1, task)  -> w * mask   (mask empty means all ones)
//   owner == task       -> w
//   FREE                -> w if Active, 0 if Zero
//   owner > task        -> 0
ad::Tensor effective_grid(const ad::Tensor& weights, const OwnershipGrid& owners, TaskLabel task,
                          std::span<const std::uint8_t> mask, FreeElements free, std::size_t rows, std::size_t cols);

// Straight-through gradient of the real mask: dL/dM~ = dL/dw_eff * w on
// elements owned by older tasks, 0 elsewhere.
ad::Tensor mask_backward(const ad::Tensor& effective_grad, const ad::Tensor& weights, const OwnershipGrid& owners,
                         TaskLabel task);

}  // namespace tpem::lifecycle
