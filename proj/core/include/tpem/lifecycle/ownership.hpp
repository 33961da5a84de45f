#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace tpem::lifecycle {

using TaskLabel = std::uint16_t;
inline constexpr TaskLabel kFree = 0;

// Per-element owner labels of one shared parameter, same shape as it.
class OwnershipGrid {
 public:
  OwnershipGrid() = default;
  OwnershipGrid(std::size_t rows, std::size_t cols, TaskLabel fill = kFree);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return labels_.size(); }

  TaskLabel operator[](std::size_t i) const { return labels_[i]; }
  TaskLabel& operator[](std::size_t i) { return labels_[i]; }
  TaskLabel at(std::size_t r, std::size_t c) const { return labels_[r * cols_ + c]; }
  const std::vector<TaskLabel>& labels() const noexcept { return labels_; }

  std::size_t count(TaskLabel label) const;
  // New elements are FREE; old labels keep their row/column index.
  void grow(std::size_t rows, std::size_t cols);

  bool operator==(const OwnershipGrid&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<TaskLabel> labels_;
};

// Owner labels for every shared parameter, index-aligned with
// SharedWeights::layout().
class OwnershipMap {
 public:
  OwnershipMap() = default;
  explicit OwnershipMap(std::vector<OwnershipGrid> grids) : grids_(std::move(grids)) {}

  std::size_t grid_count() const noexcept { return grids_.size(); }
  OwnershipGrid& grid(std::size_t i) { return grids_[i]; }
  const OwnershipGrid& grid(std::size_t i) const { return grids_[i]; }
  const std::vector<OwnershipGrid>& grids() const noexcept { return grids_; }

  std::size_t total() const;
  std::size_t count(TaskLabel label) const;
  std::size_t free_count() const { return count(kFree); }

  // Relabels every FREE element as owned by `task`; returns how many.
  std::size_t claim_free(TaskLabel task);

  // 1 where the label is FREE.
  std::vector<std::uint8_t> free_gate(std::size_t grid) const;
  // 1 where the label equals `task`.
  std::vector<std::uint8_t> owned_gate(std::size_t grid, TaskLabel task) const;
  // 1 where the label is an older task (1 <= label < task).
  std::vector<std::uint8_t> older_gate(std::size_t grid, TaskLabel task) const;

  bool operator==(const OwnershipMap&) const = default;

 private:
  std::vector<OwnershipGrid> grids_;
};

}  // namespace tpem::lifecycle
