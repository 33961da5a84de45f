#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "tpem/autodiff/tensor.hpp"
#include "tpem/glmp/sample.hpp"
#include "tpem/lifecycle/learner.hpp"
#include "tpem/taskstream/corpus.hpp"

namespace tpem::testing {

// Central difference of f around t[i]; t is restored afterwards.
inline double numeric_partial(ad::Tensor& t, std::size_t i, const std::function<double()>& f, double h = 1e-5) {
  const double saved = t[i];
  t[i] = saved + h;
  const double up = f();
  t[i] = saved - h;
  const double down = f();
  t[i] = saved;
  return (up - down) / (2.0 * h);
}

// |a - n| / max(|a|, |n|, floor). The floor keeps near-zero partials from
// dominating through rounding noise alone.
inline double relative_error(double analytic, double numeric, double floor = 1e-6) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), floor});
}

inline ad::Tensor random_tensor(std::size_t rows, std::size_t cols, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> dist(0.0, scale);
  ad::Tensor t(rows, cols);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = dist(rng);
  return t;
}

inline std::vector<std::string> words(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// "where is the pizza_hut" / KB (pizza_hut, address, 5_main_st) / response
// "pizza_hut is at 5_main_st".
inline glmp::DialogueSample toy_sample() {
  glmp::DialogueSample s;
  s.history = words("where is the pizza_hut");
  s.kb = {{"pizza_hut", "poi", "pizza_hut"}, {"pizza_hut", "address", "5_main_st"}, {"cafe_rio", "poi", "cafe_rio"},
          {"cafe_rio", "address", "9_oak_ave"}};
  s.response = words("pizza_hut is at 5_main_st");
  s.gold_entities = {"5_main_st", "pizza_hut"};
  s.sketch_response = glmp::derive_sketch(s);
  return s;
}

inline lifecycle::LifecycleOptions small_options() {
  lifecycle::LifecycleOptions o;
  o.embed = 12;
  o.base_hidden = 12;
  o.hops = 2;
  o.batch_size = 8;
  o.adam.learning_rate = 5e-3;
  o.patience = 100;
  o.max_decode_len = 16;
  o.alpha = 32.0;
  o.beta = 50.0;
  return o;
}

// A small spec-generated corpus for lifecycle tests.
inline stream::Corpus small_corpus(const std::string& domain, std::size_t train, std::size_t eval,
                                   std::uint64_t seed = 7) {
  for (auto spec : stream::default_stream(1.0, seed)) {
    if (spec.name != domain) continue;
    spec.n_train = train;
    spec.n_val = eval;
    spec.n_test = eval;
    return stream::generate_task(spec);
  }
  throw std::runtime_error("unknown domain " + domain);
}

}  // namespace tpem::testing
