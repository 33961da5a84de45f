#include "tpem/autodiff/adam.hpp"

#include <cmath>
#include <string>

#include "tpem/error.hpp"

namespace tpem::ad {

void AdamState::ensure(std::size_t n) {
  if (m.size() == n) return;
  m.resize(n, 0.0);
  v.resize(n, 0.0);
  steps.resize(n, 0);
}

double Adam::correction(std::vector<double>& cache, double beta, std::uint32_t t) {
  while (cache.size() <= t) cache.push_back(1.0 - std::pow(beta, static_cast<double>(cache.size())));
  return cache[t];
}

void Adam::step(Tensor& value, const Tensor& grad, AdamState& state, std::span<const std::uint8_t> gate) {
  if (!value.same_shape(grad)) {
    throw ShapeError("optimizer_step: parameter " + value.shape_string() + " vs gradient " + grad.shape_string());
  }
  if (!gate.empty() && gate.size() != value.size()) {
    throw ShapeError("optimizer_step: gate of " + std::to_string(gate.size()) + " elements for parameter " +
                     value.shape_string());
  }
  state.ensure(value.size());
  const double b1 = config_.beta1, b2 = config_.beta2;
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (!gate.empty() && gate[i] == 0) continue;
    const double g = grad[i];
    const std::uint32_t t = ++state.steps[i];
    state.m[i] = b1 * state.m[i] + (1.0 - b1) * g;
    state.v[i] = b2 * state.v[i] + (1.0 - b2) * g * g;
    const double m_hat = state.m[i] / correction(correction1_, b1, t);
    const double v_hat = state.v[i] / correction(correction2_, b2, t);
    value[i] -= config_.learning_rate * m_hat / (std::sqrt(v_hat) + config_.epsilon);
  }
}

}  // namespace tpem::ad
