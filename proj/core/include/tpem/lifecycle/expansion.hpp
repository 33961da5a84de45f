#pragma once

#include <cstddef>

#include "tpem/lifecycle/ownership.hpp"

namespace tpem::lifecycle {

enum class LogBase { Natural, Two, Ten };

struct ExpansionParams {
  double alpha = 32.0;
  double beta = 50.0;
  std::size_t hidden_prev = 128;
  double prune_ratio_prev = 0.5;  // P_{k-1}
  double free_fraction = 1.0;     // F_k
  std::size_t batches = 0;        // N_k
  LogBase log_base = LogBase::Natural;
};

struct ExpansionDecision {
  std::size_t hidden_prev = 0;
  double free_fraction = 0.0;
  std::size_t batches = 0;
  double raw = 0.0;
  std::size_t hidden_new = 0;
};

// H_k = max(H_{k-1}, floor(H_{k-1} + alpha * (P_{k-1} - F_k) * log(1 + N_k / beta))).
ExpansionDecision compute_new_hidden(const ExpansionParams& params);

// FREE elements over all shared elements; 1.0 for an empty map.
double compute_free_fraction(const OwnershipMap& owners);

// Batches per epoch, ceil(samples / batch_size).
std::size_t batches_per_epoch(std::size_t samples, std::size_t batch_size);

}  // namespace tpem::lifecycle
