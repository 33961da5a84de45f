#include "tpem/lifecycle/checkpoint.hpp"

#include <cstring>

#include "tpem/error.hpp"
#include "tpem/io/binary.hpp"

namespace tpem::lifecycle {
namespace {

using Kind = CheckpointError::Kind;

void write_manifest(io::ByteWriter& w, const std::vector<ParameterShape>& manifest) {
  w.u32(static_cast<std::uint32_t>(manifest.size()));
  for (const auto& p : manifest) {
    w.str(p.id);
    w.u32(p.rows);
    w.u32(p.cols);
  }
}

std::vector<ParameterShape> read_manifest(io::ByteReader& r) {
  const std::uint32_t n = r.u32();
  if (n > 4096) throw CheckpointError(Kind::Malformed, "checkpoint: implausible manifest length " + std::to_string(n));
  std::vector<ParameterShape> manifest(n);
  for (auto& p : manifest) {
    p.id = r.str();
    p.rows = r.u32();
    p.cols = r.u32();
  }
  return manifest;
}

}  // namespace

bool Fingerprint::matches(const Fingerprint& other) const {
  return std::memcmp(&loss, &other.loss, sizeof(double)) == 0 && outputs == other.outputs;
}

std::size_t TaskCheckpoint::mask_bytes() const {
  std::size_t n = 0;
  for (const auto& m : masks) n += m.byte_size();
  return n;
}

bool operator==(const TaskCheckpoint& a, const TaskCheckpoint& b) { return serialize(a) == serialize(b); }

std::vector<std::uint8_t> serialize(const TaskCheckpoint& c) {
  const auto decoder_layout = glmp::DecoderWeights::layout(c.task);
  const auto decoder_tensors = c.decoder.tensors();
  if (!c.masks.empty() && c.masks.size() != c.shared_manifest.size()) {
    throw CheckpointError(Kind::Malformed, "checkpoint: mask count does not match manifest");
  }

  io::ByteWriter w;
  w.magic(std::string_view(kCheckpointMagic, 8));
  w.u32(kCheckpointVersion);
  w.u32(c.task);
  w.u32(c.hidden);
  w.u32(c.embed);
  w.u32(c.vocab);
  w.u32(c.hops);
  w.u8(c.masks.empty() ? 0 : 1);
  write_manifest(w, c.shared_manifest);

  std::vector<ParameterShape> decoder_manifest;
  for (std::size_t i = 0; i < decoder_layout.size(); ++i) {
    decoder_manifest.push_back({decoder_layout[i].id, static_cast<std::uint32_t>(decoder_tensors[i]->rows()),
                                static_cast<std::uint32_t>(decoder_tensors[i]->cols())});
  }
  write_manifest(w, decoder_manifest);

  io::ByteWriter masks;
  for (std::size_t i = 0; i < c.masks.size(); ++i) {
    const auto& m = c.masks[i];
    if (m.rows() != c.shared_manifest[i].rows || m.cols() != c.shared_manifest[i].cols) {
      throw CheckpointError(Kind::Malformed, "checkpoint: mask shape differs from manifest for " +
                                                 c.shared_manifest[i].id);
    }
    masks.raw(m.bytes());
  }
  w.u32(io::crc32(masks.bytes()));
  w.raw(masks.bytes());

  for (const ad::Tensor* t : decoder_tensors)
    for (double v : t->values()) w.f64(v);

  w.u32(static_cast<std::uint32_t>(c.vocabulary_additions.size()));
  for (const auto& tok : c.vocabulary_additions) w.str(tok);

  w.f64(c.fingerprint.loss);
  w.u32(static_cast<std::uint32_t>(c.fingerprint.outputs.size()));
  for (const auto& seq : c.fingerprint.outputs) {
    w.u32(static_cast<std::uint32_t>(seq.size()));
    for (const auto& tok : seq) w.str(tok);
  }
  return w.take();
}

TaskCheckpoint deserialize(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) throw CheckpointError(Kind::Truncated, "checkpoint: empty input");
  io::ByteReader r(bytes);
  if (bytes.size() < 8 || !r.magic(std::string_view(kCheckpointMagic, 8))) {
    throw CheckpointError(Kind::BadMagic, "checkpoint: bad magic");
  }
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion) {
    throw CheckpointError(Kind::VersionMismatch, "checkpoint: version " + std::to_string(version) +
                                                     ", expected " + std::to_string(kCheckpointVersion));
  }
  TaskCheckpoint c;
  const std::uint32_t task = r.u32();
  if (task == 0 || task > 0xffff) throw CheckpointError(Kind::Malformed, "checkpoint: invalid task id");
  c.task = static_cast<TaskLabel>(task);
  c.hidden = r.u32();
  c.embed = r.u32();
  c.vocab = r.u32();
  c.hops = r.u32();
  const bool has_masks = r.u8() != 0;
  c.shared_manifest = read_manifest(r);
  const auto decoder_manifest = read_manifest(r);

  const auto layout = glmp::DecoderWeights::layout(c.task);
  if (decoder_manifest.size() != layout.size()) {
    throw CheckpointError(Kind::Malformed, "checkpoint: decoder manifest has " +
                                               std::to_string(decoder_manifest.size()) + " entries");
  }
  const glmp::ModelDims dims = c.dims();
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const auto& p = decoder_manifest[i];
    if (p.id != layout[i].id || p.rows != glmp::extent(layout[i].rows, dims) ||
        p.cols != glmp::extent(layout[i].cols, dims)) {
      throw CheckpointError(Kind::Malformed, "checkpoint: unexpected decoder parameter " + p.id);
    }
  }

  const std::uint32_t expected_crc = r.u32();
  std::size_t mask_section = 0;
  if (has_masks)
    for (const auto& p : c.shared_manifest) mask_section += BinaryMask::bytes_for(std::size_t{p.rows} * p.cols);
  const auto mask_bytes = r.raw(mask_section);
  if (io::crc32(mask_bytes) != expected_crc) {
    throw CheckpointError(Kind::CorruptMask, "checkpoint: mask section checksum mismatch");
  }
  if (has_masks) {
    std::size_t offset = 0;
    for (const auto& p : c.shared_manifest) {
      const std::size_t n = BinaryMask::bytes_for(std::size_t{p.rows} * p.cols);
      c.masks.push_back(BinaryMask::from_bytes(
          std::vector<std::uint8_t>(mask_bytes.begin() + static_cast<std::ptrdiff_t>(offset),
                                    mask_bytes.begin() + static_cast<std::ptrdiff_t>(offset + n)),
          p.rows, p.cols));
      offset += n;
    }
  }

  auto tensors = c.decoder.tensors();
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    const std::size_t n = std::size_t{decoder_manifest[i].rows} * decoder_manifest[i].cols;
    if (r.remaining() / 8 < n) throw CheckpointError(Kind::Truncated, "checkpoint: decoder values truncated");
    ad::Tensor t(decoder_manifest[i].rows, decoder_manifest[i].cols);
    for (double& v : t.values()) v = r.f64();
    *tensors[i] = std::move(t);
  }

  const std::uint32_t n_vocab = r.u32();
  for (std::uint32_t i = 0; i < n_vocab; ++i) c.vocabulary_additions.push_back(r.str());

  c.fingerprint.loss = r.f64();
  const std::uint32_t n_outputs = r.u32();
  for (std::uint32_t i = 0; i < n_outputs; ++i) {
    const std::uint32_t len = r.u32();
    std::vector<std::string> seq;
    for (std::uint32_t j = 0; j < len; ++j) seq.push_back(r.str());
    c.fingerprint.outputs.push_back(std::move(seq));
  }
  if (!r.done()) throw CheckpointError(Kind::Malformed, "checkpoint: trailing bytes");
  return c;
}

void save_checkpoint(const TaskCheckpoint& checkpoint, const std::string& path) {
  io::write_file(path, serialize(checkpoint));
}

TaskCheckpoint load_checkpoint(const std::string& path) { return deserialize(io::read_file(path)); }

}  // namespace tpem::lifecycle
