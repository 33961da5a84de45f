#include "tpem/glmp/weights.hpp"

#include "tpem/error.hpp"

namespace tpem::glmp {
namespace {

void gru_layout(std::vector<ParameterInfo>& out, const std::string& prefix, Role role, int task) {
  for (const char* gate : {"z", "r", "n"}) {
    out.push_back({prefix + ".w_" + gate, role, Axis::Hidden, Axis::Embed, task});
    out.push_back({prefix + ".u_" + gate, role, Axis::Hidden, Axis::Hidden, task});
    out.push_back({prefix + ".b_" + gate, role, Axis::Hidden, Axis::One, task});
  }
}

template <class G, class T>
void gru_tensors(G& g, std::vector<T*>& out) {
  for (T* t : {&g.w_z, &g.u_z, &g.b_z, &g.w_r, &g.u_r, &g.b_r, &g.w_n, &g.u_n, &g.b_n}) out.push_back(t);
}

template <class W>
void fill_random(W& weights, const std::vector<ParameterInfo>& layout, const ModelDims& dims, Rng& rng) {
  auto tensors = weights.tensors();
  for (std::size_t i = 0; i < layout.size(); ++i) {
    *tensors[i] = random_normal(extent(layout[i].rows, dims), extent(layout[i].cols, dims), rng);
  }
}

template <class W>
W zeros_from(const W& other) {
  W out = other;
  for (Tensor* t : out.tensors()) t->fill(0.0);
  return out;
}

}  // namespace

const char* role_name(Role role) {
  switch (role) {
    case Role::SharedEncoder: return "shared-encoder";
    case Role::SharedMemory: return "shared-memory";
    case Role::Embedding: return "embedding";
    case Role::TaskDecoder: return "task-decoder";
  }
  return "unknown";
}

std::size_t extent(Axis axis, const ModelDims& dims) {
  switch (axis) {
    case Axis::Hidden: return dims.hidden;
    case Axis::TwiceHidden: return 2 * dims.hidden;
    case Axis::Vocab: return dims.vocab;
    case Axis::Embed: return dims.embed;
    case Axis::One: return 1;
  }
  return 0;
}

std::vector<ParameterInfo> SharedWeights::layout(std::size_t hops) {
  std::vector<ParameterInfo> out;
  out.push_back({"embedding", Role::Embedding, Axis::Vocab, Axis::Embed, 0});
  gru_layout(out, "encoder.fwd", Role::SharedEncoder, 0);
  gru_layout(out, "encoder.bwd", Role::SharedEncoder, 0);
  for (std::size_t h = 0; h <= hops; ++h)
    out.push_back({"memory." + std::to_string(h), Role::SharedMemory, Axis::Vocab, Axis::Hidden, 0});
  return out;
}

std::vector<Tensor*> SharedWeights::tensors() {
  std::vector<Tensor*> out{&embedding};
  gru_tensors(forward, out);
  gru_tensors(backward, out);
  for (Tensor& m : memory) out.push_back(&m);
  return out;
}

std::vector<const Tensor*> SharedWeights::tensors() const {
  std::vector<const Tensor*> out{&embedding};
  gru_tensors(forward, out);
  gru_tensors(backward, out);
  for (const Tensor& m : memory) out.push_back(&m);
  return out;
}

SharedWeights SharedWeights::random(const ModelDims& dims, Rng& rng) {
  if (dims.hops == 0) throw ConfigError("model: hop count must be at least 1");
  SharedWeights w;
  w.memory.resize(dims.hops + 1);
  fill_random(w, layout(dims.hops), dims, rng);
  return w;
}

SharedWeights SharedWeights::zeros_like(const SharedWeights& other) { return zeros_from(other); }

std::vector<ParameterInfo> DecoderWeights::layout(int task) {
  std::vector<ParameterInfo> out;
  const std::string prefix = "decoder." + std::to_string(task);
  gru_layout(out, prefix + ".gru", Role::TaskDecoder, task);
  out.push_back({prefix + ".init_w", Role::TaskDecoder, Axis::Hidden, Axis::TwiceHidden, task});
  out.push_back({prefix + ".init_b", Role::TaskDecoder, Axis::Hidden, Axis::One, task});
  out.push_back({prefix + ".out_w", Role::TaskDecoder, Axis::Vocab, Axis::Hidden, task});
  out.push_back({prefix + ".out_b", Role::TaskDecoder, Axis::Vocab, Axis::One, task});
  return out;
}

std::vector<Tensor*> DecoderWeights::tensors() {
  std::vector<Tensor*> out;
  gru_tensors(gru, out);
  for (Tensor* t : {&init_w, &init_b, &out_w, &out_b}) out.push_back(t);
  return out;
}

std::vector<const Tensor*> DecoderWeights::tensors() const {
  std::vector<const Tensor*> out;
  gru_tensors(gru, out);
  for (const Tensor* t : {&init_w, &init_b, &out_w, &out_b}) out.push_back(t);
  return out;
}

DecoderWeights DecoderWeights::random(const ModelDims& dims, Rng& rng) {
  DecoderWeights w;
  fill_random(w, layout(0), dims, rng);
  return w;
}

DecoderWeights DecoderWeights::zeros_like(const DecoderWeights& other) { return zeros_from(other); }

Tensor random_normal(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, kInitStddev);
  Tensor t(rows, cols);
  for (double& v : t.values()) v = normal(rng);
  return t;
}

Tensor grow(const Tensor& t, std::size_t rows, std::size_t cols, Rng& rng) {
  if (rows < t.rows() || cols < t.cols()) {
    throw ShapeError("grow: cannot shrink " + t.shape_string() + " to " + ad::shape_string(rows, cols));
  }
  if (rows == t.rows() && cols == t.cols()) return t;
  std::normal_distribution<double> normal(0.0, kInitStddev);
  Tensor out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = (r < t.rows() && c < t.cols()) ? t(r, c) : normal(rng);
  return out;
}

Tensor truncate(const Tensor& t, std::size_t rows, std::size_t cols) {
  if (rows > t.rows() || cols > t.cols()) {
    throw ShapeError("truncate: " + t.shape_string() + " is smaller than " + ad::shape_string(rows, cols));
  }
  Tensor out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = t(r, c);
  return out;
}

std::size_t parameter_count(const std::vector<const Tensor*>& tensors) {
  std::size_t n = 0;
  for (const Tensor* t : tensors) n += t->size();
  return n;
}

}  // namespace tpem::glmp
