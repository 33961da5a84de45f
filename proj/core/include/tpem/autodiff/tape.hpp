#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "tpem/autodiff/tensor.hpp"

namespace tpem::ad {

class Tape;

// Handle to a value recorded on a Tape. Only meaningful for the tape that
// produced it.
class Var {
 public:
  Var() = default;
  std::uint32_t index() const noexcept { return index_; }
  bool valid() const noexcept { return index_ != kInvalid; }

 private:
  friend class Tape;
  static constexpr std::uint32_t kInvalid = 0xffffffffu;
  explicit Var(std::uint32_t index) : index_(index) {}
  std::uint32_t index_ = kInvalid;
};

// Reverse-mode tape. Records are appended in evaluation order, which is a
// topological order; backward() walks them in exact reverse push order.
//
// Leaves come in three flavours:
//   constant()  owned value, never differentiated
//   leaf()      owned value, gradient readable through grad()
//   bind()      borrowed value; gradient accumulated into a caller-owned
//               tensor (nullptr disables differentiation, i.e. frozen)
class Tape {
 public:
  Var constant(Tensor value);
  Var leaf(Tensor value, bool requires_grad = true);
  Var bind(const Tensor& value, Tensor* grad_sink);

  const Tensor& value(Var v) const;
  // Gradient of the last backward() w.r.t. v. Zero grid if v did not
  // contribute; the caller-owned sink for bound leaves.
  Tensor grad(Var v) const;
  bool requires_grad(Var v) const;

  Var matmul(Var a, Var b);
  Var transpose(Var a);
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);
  // scale * a + shift, elementwise.
  Var affine(Var a, double scale, double shift = 0.0);
  Var concat(std::span<const Var> parts, int axis);
  Var sigmoid(Var a);
  Var tanh(Var a);
  // Softmax over all elements (callers pass n x 1 columns).
  Var softmax(Var a);
  // Row `id` of `table` as a d x 1 column.
  Var embedding(Var table, std::size_t id);
  // Sum of rows `ids` of `table` as a d x 1 column; zeros for an empty bag.
  Var embedding_bag(Var table, std::span<const int> ids);
  Var sum(Var a);
  // -log softmax(logits)[target], fused for stability. Scalar result.
  Var cross_entropy(Var logits, std::size_t target);
  // Mean binary cross-entropy of sigmoid(logits) against labels in [0,1].
  Var binary_cross_entropy(Var logits, std::span<const double> labels);

  void backward(Var loss);

  std::size_t size() const noexcept { return nodes_.size(); }
  void clear();

 private:
  struct Node {
    Tensor value;
    const Tensor* borrowed = nullptr;
    Tensor grad;
    Tensor* grad_sink = nullptr;
    bool requires_grad = false;
    std::function<void(Tape&, std::uint32_t)> backward;
  };

  Var push(Tensor value, bool requires_grad, std::function<void(Tape&, std::uint32_t)> backward);
  void check(Var v, std::string_view op) const;
  Tensor& grad_mut(std::uint32_t index);
  const Tensor& value_at(std::uint32_t index) const;
  bool needs(std::uint32_t index) const { return nodes_[index].requires_grad; }

  std::vector<Node> nodes_;
};

}  // namespace tpem::ad
