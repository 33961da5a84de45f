#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tpem/autodiff/tensor.hpp"
#include "tpem/lifecycle/ownership.hpp"

namespace tpem::lifecycle {

struct GridPruneRecord {
  std::string parameter;
  std::size_t owned = 0;     // elements owned by the task before pruning
  std::size_t released = 0;  // floor(ratio * owned)
};

struct PruneRecord {
  TaskLabel task = 0;
  double ratio = 0.0;
  std::vector<GridPruneRecord> grids;

  std::size_t released() const;
  std::size_t owned() const;
};

// Releases the floor(ratio * n) smallest-magnitude elements owned by `task`
// in one grid: their value becomes 0 and their label FREE. Ties are broken
// by ascending flat index. Throws ConfigError unless 0 <= ratio < 1.
std::size_t prune_grid(ad::Tensor& weights, OwnershipGrid& owners, TaskLabel task, double ratio);

// Applies prune_grid to every grid independently.
PruneRecord prune(const std::vector<ad::Tensor*>& weights, OwnershipMap& owners,
                  const std::vector<std::string>& names, TaskLabel task, double ratio);

}  // namespace tpem::lifecycle
