#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "tpem/autodiff/tensor.hpp"

namespace tpem::glmp {

using ad::Tensor;
using Rng = std::mt19937_64;

inline constexpr double kInitStddev = 0.1;

enum class Role { SharedEncoder, SharedMemory, Embedding, TaskDecoder };

const char* role_name(Role role);

// What a parameter dimension is sized by.
enum class Axis { Hidden, TwiceHidden, Vocab, Embed, One };

struct ModelDims {
  std::size_t embed = 128;
  std::size_t hidden = 128;
  std::size_t vocab = 0;
  std::size_t hops = 3;

  bool operator==(const ModelDims&) const = default;
};

std::size_t extent(Axis axis, const ModelDims& dims);

struct ParameterInfo {
  std::string id;
  Role role;
  Axis rows;
  Axis cols;
  int task = 0;  // owning task for TaskDecoder parameters
};

struct GruWeights {
  Tensor w_z, u_z, b_z;
  Tensor w_r, u_r, b_r;
  Tensor w_n, u_n, b_n;
};

// Parameters shared by all tasks and managed by the lifecycle: word
// embeddings, the bidirectional encoder and the hops + 1 memory embedding
// matrices (adjacent weight tying).
struct SharedWeights {
  Tensor embedding;  // V x E
  GruWeights forward;
  GruWeights backward;
  std::vector<Tensor> memory;  // hops + 1 matrices, V x H

  static std::vector<ParameterInfo> layout(std::size_t hops);
  // Tensors in layout() order.
  std::vector<Tensor*> tensors();
  std::vector<const Tensor*> tensors() const;

  static SharedWeights random(const ModelDims& dims, Rng& rng);
  static SharedWeights zeros_like(const SharedWeights& other);
};

// Private local memory decoder of one task.
struct DecoderWeights {
  GruWeights gru;  // input E, state H
  Tensor init_w;   // H x 2H, maps [encoder final; memory readout] to h0
  Tensor init_b;   // H x 1
  Tensor out_w;    // V_k x H
  Tensor out_b;    // V_k x 1

  static std::vector<ParameterInfo> layout(int task);
  std::vector<Tensor*> tensors();
  std::vector<const Tensor*> tensors() const;

  static DecoderWeights random(const ModelDims& dims, Rng& rng);
  static DecoderWeights zeros_like(const DecoderWeights& other);
};

// Copy of `t` resized to rows x cols. Elements inside the old extent keep
// their row/column index; new elements are drawn from N(0, 0.1) in
// row-major order.
Tensor grow(const Tensor& t, std::size_t rows, std::size_t cols, Rng& rng);
// Top-left rows x cols block.
Tensor truncate(const Tensor& t, std::size_t rows, std::size_t cols);
Tensor random_normal(std::size_t rows, std::size_t cols, Rng& rng);

std::size_t parameter_count(const std::vector<const Tensor*>& tensors);

}  // namespace tpem::glmp
