#include "tpem/lifecycle/pruning.hpp"

#include <algorithm>
#include <cmath>

#include "tpem/error.hpp"

namespace tpem::lifecycle {

std::size_t PruneRecord::released() const {
  std::size_t n = 0;
  for (const auto& g : grids) n += g.released;
  return n;
}

std::size_t PruneRecord::owned() const {
  std::size_t n = 0;
  for (const auto& g : grids) n += g.owned;
  return n;
}

std::size_t prune_grid(ad::Tensor& weights, OwnershipGrid& owners, TaskLabel task, double ratio) {
  if (!(ratio >= 0.0 && ratio < 1.0)) {
    throw ConfigError("prune: ratio " + std::to_string(ratio) + " outside [0, 1)");
  }
  if (weights.size() != owners.size()) throw ShapeError("prune: weight and ownership grids differ in size");

  std::vector<std::size_t> owned;
  for (std::size_t i = 0; i < owners.size(); ++i)
    if (owners[i] == task) owned.push_back(i);
  const auto release = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(owned.size())));
  if (release == 0) return 0;

  auto smaller = [&](std::size_t a, std::size_t b) {
    const double ma = std::abs(weights[a]), mb = std::abs(weights[b]);
    return ma < mb || (ma == mb && a < b);
  };
  std::nth_element(owned.begin(), owned.begin() + static_cast<std::ptrdiff_t>(release - 1), owned.end(), smaller);
  for (std::size_t j = 0; j < release; ++j) {
    weights[owned[j]] = 0.0;
    owners[owned[j]] = kFree;
  }
  return release;
}

PruneRecord prune(const std::vector<ad::Tensor*>& weights, OwnershipMap& owners,
                  const std::vector<std::string>& names, TaskLabel task, double ratio) {
  if (weights.size() != owners.grid_count() || names.size() != weights.size()) {
    throw ShapeError("prune: weight, ownership and name lists differ in length");
  }
  PruneRecord record{task, ratio, {}};
  for (std::size_t i = 0; i < weights.size(); ++i) {
    GridPruneRecord g{names[i], owners.grid(i).count(task), 0};
    g.released = prune_grid(*weights[i], owners.grid(i), task, ratio);
    record.grids.push_back(std::move(g));
  }
  return record;
}

}  // namespace tpem::lifecycle
