#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tpem/autodiff/tensor.hpp"

namespace tpem::ad {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Per-element moments and step counts. An element whose gate is 0 keeps its
// moments and its step count, so bias correction resumes where it left off.
struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::vector<std::uint32_t> steps;

  void ensure(std::size_t n);
};

class Adam {
 public:
  explicit Adam(AdamConfig config = {}) : config_(config) {}

  const AdamConfig& config() const noexcept { return config_; }

  // Updates `value` in place where gate[i] != 0 (everywhere if the gate is
  // empty). Gated-off elements are left bit-identical.
  void step(Tensor& value, const Tensor& grad, AdamState& state, std::span<const std::uint8_t> gate = {});

 private:
  double correction(std::vector<double>& cache, double beta, std::uint32_t t);

  AdamConfig config_;
  std::vector<double> correction1_;
  std::vector<double> correction2_;
};

}  // namespace tpem::ad
