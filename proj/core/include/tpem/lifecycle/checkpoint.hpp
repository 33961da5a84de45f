#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tpem/glmp/weights.hpp"
#include "tpem/lifecycle/masking.hpp"
#include "tpem/lifecycle/ownership.hpp"

namespace tpem::lifecycle {

inline constexpr char kCheckpointMagic[] = "TPEMCKPT";
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct ParameterShape {
  std::string id;
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;

  bool operator==(const ParameterShape&) const = default;
};

// Evaluation outputs recorded when a task is finalized.
struct Fingerprint {
  double loss = 0.0;
  std::vector<std::vector<std::string>> outputs;

  // Loss compared bitwise, outputs exactly.
  bool matches(const Fingerprint& other) const;
  bool operator==(const Fingerprint& other) const { return matches(other); }
};

// Frozen record of a finished task: hidden size and vocabulary at training
// time, the bit-packed mask per shared parameter and the private decoder.
struct TaskCheckpoint {
  TaskLabel task = 0;
  std::uint32_t hidden = 0;
  std::uint32_t embed = 0;
  std::uint32_t vocab = 0;
  std::uint32_t hops = 0;
  std::vector<ParameterShape> shared_manifest;
  std::vector<BinaryMask> masks;  // empty when the task trained without masking
  glmp::DecoderWeights decoder;
  std::vector<std::string> vocabulary_additions;
  Fingerprint fingerprint;

  glmp::ModelDims dims() const { return {embed, hidden, vocab, hops}; }
  std::size_t mask_bytes() const;
};

bool operator==(const TaskCheckpoint& a, const TaskCheckpoint& b);

// Layout, all integers little-endian:
//   "TPEMCKPT" u32 version u32 task u32 hidden u32 embed u32 vocab u32 hops
//   u8 has_masks
//   u32 n_shared  { u16 len, name, u32 rows, u32 cols }*
//   u32 n_decoder { u16 len, name, u32 rows, u32 cols }*
//   u32 crc32 of the mask section
//   mask section: per shared parameter ceil(rows*cols/8) bytes (if has_masks)
//   decoder values: f64 per element, row-major, manifest order
//   u32 n_vocab { u16 len, token }*
//   fingerprint: f64 loss, u32 n { u32 len { u16 len, token }* }*
std::vector<std::uint8_t> serialize(const TaskCheckpoint& checkpoint);
TaskCheckpoint deserialize(std::span<const std::uint8_t> bytes);

void save_checkpoint(const TaskCheckpoint& checkpoint, const std::string& path);
TaskCheckpoint load_checkpoint(const std::string& path);

}  // namespace tpem::lifecycle
