#include "tpem/lifecycle/expansion.hpp"

#include <algorithm>
#include <cmath>

#include "tpem/error.hpp"

namespace tpem::lifecycle {

ExpansionDecision compute_new_hidden(const ExpansionParams& p) {
  if (!(p.alpha > 0.0) || !(p.beta > 0.0)) throw ConfigError("expansion: alpha and beta must be positive");
  if (p.hidden_prev < 1) throw ConfigError("expansion: previous hidden size must be at least 1");
  if (!(p.prune_ratio_prev >= 0.0 && p.prune_ratio_prev < 1.0)) {
    throw ConfigError("expansion: previous pruning ratio outside [0, 1)");
  }
  if (!(p.free_fraction >= 0.0 && p.free_fraction <= 1.0)) {
    throw ConfigError("expansion: free fraction outside [0, 1]");
  }
  const double x = 1.0 + static_cast<double>(p.batches) / p.beta;
  double log_term = std::log(x);
  if (p.log_base == LogBase::Two) log_term = std::log2(x);
  if (p.log_base == LogBase::Ten) log_term = std::log10(x);

  ExpansionDecision d;
  d.hidden_prev = p.hidden_prev;
  d.free_fraction = p.free_fraction;
  d.batches = p.batches;
  d.raw = static_cast<double>(p.hidden_prev) + p.alpha * (p.prune_ratio_prev - p.free_fraction) * log_term;
  const double floored = std::floor(d.raw);
  d.hidden_new = floored > static_cast<double>(p.hidden_prev) ? static_cast<std::size_t>(floored) : p.hidden_prev;
  return d;
}

double compute_free_fraction(const OwnershipMap& owners) {
  const std::size_t total = owners.total();
  if (total == 0) return 1.0;
  return static_cast<double>(owners.free_count()) / static_cast<double>(total);
}

std::size_t batches_per_epoch(std::size_t samples, std::size_t batch_size) {
  if (batch_size == 0) throw ConfigError("batch size must be positive");
  return (samples + batch_size - 1) / batch_size;
}

}  // namespace tpem::lifecycle
