#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "support.hpp"
#include "tpem/error.hpp"
#include "tpem/lifecycle/checkpoint.hpp"
#include "tpem/lifecycle/expansion.hpp"
#include "tpem/lifecycle/masking.hpp"
#include "tpem/lifecycle/ownership.hpp"
#include "tpem/lifecycle/pruning.hpp"

using namespace tpem;
using namespace tpem::lifecycle;
using ad::Tensor;

TEST_CASE("claiming moves every free element to the task and growth keeps labels in place") {
  OwnershipMap map({OwnershipGrid(2, 2), OwnershipGrid(1, 3)});
  CHECK(map.total() == 7);
  CHECK(map.claim_free(1) == 7);
  CHECK(map.free_count() == 0);
  map.grid(0).grow(3, 3);
  CHECK(map.grid(0).at(1, 1) == 1);
  CHECK(map.grid(0).at(2, 2) == kFree);
  CHECK(map.grid(0).at(0, 2) == kFree);
  CHECK(map.free_count() == 5);
  CHECK(map.claim_free(2) == 5);
  CHECK(map.count(1) == 7);
  CHECK(map.owned_gate(0, 2)[8] == 1);
  CHECK(map.older_gate(0, 2)[0] == 1);
  CHECK(map.older_gate(0, 2)[8] == 0);
}

TEST_CASE("pruning releases the smallest magnitudes of the task, breaking ties by index") {
  Tensor w(2, 4, {0.5, -0.1, 0.1, 3.0, -0.1, 9.0, 0.2, 0.05});
  OwnershipGrid owners(2, 4, 1);
  owners[7] = 2;  // another task's element is never touched
  const std::size_t released = prune_grid(w, owners, 1, 0.5);
  CHECK(released == 3);  // floor(0.5 * 7)
  // |w| among task-1 elements: 0.1 at 1, 2 and 4; ties resolved by index.
  CHECK(owners[1] == kFree);
  CHECK(owners[2] == kFree);
  CHECK(owners[4] == kFree);
  CHECK(owners[6] == 1);
  CHECK(w[1] == 0.0);
  CHECK(w[7] == 0.05);
  CHECK(owners[7] == 2);
  CHECK_THROWS_AS(prune_grid(w, owners, 1, 1.0), ConfigError);
  CHECK_THROWS_AS(prune_grid(w, owners, 1, -0.1), ConfigError);
  CHECK(prune_grid(w, owners, 1, 0.0) == 0);
}

TEST_CASE("pruning matches a sort-based oracle on random grids") {
  std::mt19937_64 rng(9);
  for (std::size_t n : {1, 2, 7, 100, 5000}) {
    Tensor w = testing::random_tensor(1, n, rng);
    OwnershipGrid owners(1, n);
    for (std::size_t i = 0; i < n; ++i) owners[i] = static_cast<TaskLabel>(rng() % 3);
    const Tensor before = w;
    const OwnershipGrid labels_before = owners;

    std::vector<std::size_t> mine;
    for (std::size_t i = 0; i < n; ++i)
      if (labels_before[i] == 2) mine.push_back(i);
    std::sort(mine.begin(), mine.end(), [&](std::size_t a, std::size_t b) {
      return std::abs(before[a]) != std::abs(before[b]) ? std::abs(before[a]) < std::abs(before[b]) : a < b;
    });
    const std::size_t expected = mine.size() / 2;
    CHECK(prune_grid(w, owners, 2, 0.5) == expected);
    for (std::size_t r = 0; r < mine.size(); ++r) CHECK((owners[mine[r]] == kFree) == (r < expected));
    for (std::size_t i = 0; i < n; ++i) {
      if (labels_before[i] != 2) {
        CHECK(owners[i] == labels_before[i]);
        CHECK(w[i] == before[i]);
      }
    }
  }
}

TEST_CASE("prune over a map records per-grid counts") {
  std::mt19937_64 rng(1);
  Tensor a = testing::random_tensor(3, 3, rng), b = testing::random_tensor(2, 5, rng);
  OwnershipMap map({OwnershipGrid(3, 3, 1), OwnershipGrid(2, 5, 1)});
  const auto record = prune({&a, &b}, map, {"a", "b"}, 1, 0.5);
  REQUIRE(record.grids.size() == 2);
  CHECK(record.grids[0].released == 4);
  CHECK(record.grids[1].released == 5);
  CHECK(record.released() == 9);
  CHECK(record.owned() == 19);
  CHECK(map.free_count() == 9);
}

TEST_CASE("expansion formula on the worked case and the no-growth cases") {
  ExpansionParams p;
  p.hidden_prev = 128;
  p.prune_ratio_prev = 0.5;
  p.free_fraction = 0.2;
  p.batches = 50;
  p.alpha = 32;
  p.beta = 50;
  const auto d = compute_new_hidden(p);
  CHECK(d.raw == doctest::Approx(128 + 32 * 0.3 * std::log(2.0)));
  CHECK(d.hidden_new == 134);

  p.free_fraction = 0.5;
  CHECK(compute_new_hidden(p).hidden_new == 128);
  p.free_fraction = 0.9;
  CHECK(compute_new_hidden(p).hidden_new == 128);
  p.free_fraction = 0.0;
  p.batches = 0;
  CHECK(compute_new_hidden(p).hidden_new == 128);

  p.batches = 50;
  p.log_base = LogBase::Two;
  CHECK(compute_new_hidden(p).hidden_new == 128 + 16);
  p.log_base = LogBase::Ten;
  CHECK(compute_new_hidden(p).hidden_new == static_cast<std::size_t>(std::floor(128 + 16 * std::log10(2.0))));

  CHECK(batches_per_epoch(100, 32) == 4);
  CHECK(batches_per_epoch(96, 32) == 3);
  OwnershipMap map({OwnershipGrid(2, 2, 1), OwnershipGrid(1, 4)});
  CHECK(compute_free_fraction(map) == 0.5);
  CHECK(compute_free_fraction(OwnershipMap{}) == 1.0);
}

TEST_CASE("binarization is strict and masks pack least significant bit first") {
  const double real[] = {0.005, 0.0051, -1.0, 0.01};
  CHECK(binarize(real, 0.005) == std::vector<std::uint8_t>{0, 1, 0, 1});

  const std::vector<std::uint8_t> bits{1, 0, 0, 0, 0, 0, 0, 1, 0, 1};
  const auto mask = BinaryMask::pack(bits, 2, 5);
  REQUIRE(mask.byte_size() == 2);
  CHECK(mask.bytes()[0] == 0x81);
  CHECK(mask.bytes()[1] == 0x02);
  CHECK(mask.unpack() == bits);
  CHECK(BinaryMask::from_bytes(mask.bytes(), 2, 5) == mask);
  CHECK(BinaryMask::bytes_for(64) == 8);
  CHECK(BinaryMask::bytes_for(65) == 9);
  CHECK(BinaryMask::ones(1, 3).unpack() == std::vector<std::uint8_t>{1, 1, 1});
}

TEST_CASE("effective weights follow the owner table") {
  const Tensor w(2, 3, {1, 2, 3, 4, 5, 6});
  OwnershipGrid owners(2, 3);
  owners[0] = 1;
  owners[1] = 1;
  owners[2] = 2;
  owners[3] = 3;
  owners[4] = kFree;
  owners[5] = 2;
  const std::uint8_t mask[] = {1, 0, 1, 1, 1, 1};
  const Tensor active = effective_grid(w, owners, 2, mask, FreeElements::Active, 2, 3);
  CHECK(active.values()[0] == 1.0);  // older, kept
  CHECK(active.values()[1] == 0.0);  // older, masked out
  CHECK(active.values()[2] == 3.0);  // own
  CHECK(active.values()[3] == 0.0);  // later task
  CHECK(active.values()[4] == 5.0);  // free, still training
  CHECK(effective_grid(w, owners, 2, mask, FreeElements::Zero, 2, 3).values()[4] == 0.0);
  const Tensor top = effective_grid(w, owners, 2, {}, FreeElements::Zero, 1, 2);
  CHECK(top.rows() == 1);
  CHECK(top.values()[1] == 2.0);

  const Tensor g(2, 3, {10, 10, 10, 10, 10, 10});
  const Tensor mg = mask_backward(g, w, owners, 2);
  CHECK(mg.values()[0] == 10.0);
  CHECK(mg.values()[1] == 20.0);
  CHECK(mg.values()[2] == 0.0);
  CHECK(mg.values()[4] == 0.0);
}

TEST_CASE("real masks start at twice tau, i.e. all ones") {
  const Tensor a(2, 2), b(1, 3);
  const auto m = RealMask::initial({&a, &b}, 5e-3);
  CHECK(m.values[1][2] == 1e-2);
  for (const auto& bits : m.binarized(5e-3))
    for (auto bit : bits) CHECK(bit == 1);
}

namespace {

TaskCheckpoint sample_checkpoint(bool with_masks) {
  glmp::Rng rng(4);
  const glmp::ModelDims dims{3, 2, 9, 1};
  TaskCheckpoint c;
  c.task = 2;
  c.hidden = 2;
  c.embed = 3;
  c.vocab = 9;
  c.hops = 1;
  for (const auto& p : glmp::SharedWeights::layout(1)) {
    const auto rows = static_cast<std::uint32_t>(glmp::extent(p.rows, dims));
    const auto cols = static_cast<std::uint32_t>(glmp::extent(p.cols, dims));
    c.shared_manifest.push_back({p.id, rows, cols});
    if (with_masks) {
      std::vector<std::uint8_t> bits(rows * cols);
      for (auto& b : bits) b = rng() & 1u;
      c.masks.push_back(BinaryMask::pack(bits, rows, cols));
    }
  }
  c.decoder = glmp::DecoderWeights::random(dims, rng);
  return c;
}

}  // namespace

TEST_CASE("checkpoints round-trip byte for byte") {
  TaskCheckpoint c = sample_checkpoint(true);
  c.vocabulary_additions = {"hello", "@poi"};
  c.fingerprint = {1.25, {{"a", "b"}, {}}};
  const auto bytes = serialize(c);
  const TaskCheckpoint back = deserialize(bytes);
  CHECK(back == c);
  CHECK(back.fingerprint.matches(c.fingerprint));
  CHECK(serialize(back) == bytes);

  std::size_t expected_mask = 0;
  for (const auto& p : c.shared_manifest) expected_mask += (p.rows * p.cols + 7) / 8;
  CHECK(c.mask_bytes() == expected_mask);
  // Masks add exactly their packed bytes; everything else is shared.
  CHECK(serialize(sample_checkpoint(true)).size() - serialize(sample_checkpoint(false)).size() == expected_mask);
}

TEST_CASE("damaged checkpoints raise distinct errors") {
  const TaskCheckpoint c = sample_checkpoint(true);
  const auto good = serialize(c);
  auto kind_of = [](std::vector<std::uint8_t> bytes) {
    try {
      deserialize(bytes);
    } catch (const CheckpointError& e) {
      return e.kind();
    }
    FAIL("expected a checkpoint error");
    return CheckpointError::Kind::Malformed;
  };

  CHECK(kind_of({}) == CheckpointError::Kind::Truncated);
  auto bad_magic = good;
  bad_magic[0] = 'X';
  CHECK(kind_of(bad_magic) == CheckpointError::Kind::BadMagic);
  auto bad_version = good;
  bad_version[8] = 2;
  CHECK(kind_of(bad_version) == CheckpointError::Kind::VersionMismatch);
  CHECK(kind_of(std::vector<std::uint8_t>(good.begin(), good.end() - 10)) == CheckpointError::Kind::Truncated);

  // The mask section ends where the decoder values begin; with no vocabulary
  // additions and an empty fingerprint the tail is fixed-size.
  const std::size_t decoder_bytes = 8 * glmp::parameter_count(c.decoder.tensors());
  const std::size_t tail = decoder_bytes + 4 + 8 + 4;
  auto corrupt = good;
  corrupt[good.size() - tail - 1] ^= 0x10;
  CHECK(kind_of(corrupt) == CheckpointError::Kind::CorruptMask);

  CHECK_THROWS_AS(load_checkpoint("/nonexistent/dir/task.ckpt"), CheckpointError);
}
