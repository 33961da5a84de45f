#include "tpem/lifecycle/ownership.hpp"

#include <algorithm>

#include "tpem/error.hpp"

namespace tpem::lifecycle {

OwnershipGrid::OwnershipGrid(std::size_t rows, std::size_t cols, TaskLabel fill)
    : rows_(rows), cols_(cols), labels_(rows * cols, fill) {}

std::size_t OwnershipGrid::count(TaskLabel label) const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), label));
}

void OwnershipGrid::grow(std::size_t rows, std::size_t cols) {
  if (rows < rows_ || cols < cols_) throw ShapeError("ownership grid: cannot shrink");
  if (rows == rows_ && cols == cols_) return;
  std::vector<TaskLabel> next(rows * cols, kFree);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) next[r * cols + c] = labels_[r * cols_ + c];
  labels_ = std::move(next);
  rows_ = rows;
  cols_ = cols;
}

std::size_t OwnershipMap::total() const {
  std::size_t n = 0;
  for (const auto& g : grids_) n += g.size();
  return n;
}

std::size_t OwnershipMap::count(TaskLabel label) const {
  std::size_t n = 0;
  for (const auto& g : grids_) n += g.count(label);
  return n;
}

std::size_t OwnershipMap::claim_free(TaskLabel task) {
  std::size_t n = 0;
  for (auto& g : grids_) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g[i] == kFree) {
        g[i] = task;
        ++n;
      }
    }
  }
  return n;
}

std::vector<std::uint8_t> OwnershipMap::free_gate(std::size_t grid) const {
  const auto& g = grids_.at(grid);
  std::vector<std::uint8_t> gate(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) gate[i] = g[i] == kFree;
  return gate;
}

std::vector<std::uint8_t> OwnershipMap::owned_gate(std::size_t grid, TaskLabel task) const {
  const auto& g = grids_.at(grid);
  std::vector<std::uint8_t> gate(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) gate[i] = g[i] == task;
  return gate;
}

std::vector<std::uint8_t> OwnershipMap::older_gate(std::size_t grid, TaskLabel task) const {
  const auto& g = grids_.at(grid);
  std::vector<std::uint8_t> gate(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) gate[i] = g[i] != kFree && g[i] < task;
  return gate;
}

}  // namespace tpem::lifecycle
