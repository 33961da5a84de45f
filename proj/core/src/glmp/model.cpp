#include "tpem/glmp/model.hpp"

#include <algorithm>

#include "tpem/error.hpp"

namespace tpem::glmp {
namespace {

ad::GruVars bind_gru(Tape& tape, const GruWeights& w, GruWeights* g) {
  auto b = [&](const Tensor& t, Tensor GruWeights::*member) { return tape.bind(t, g ? &(g->*member) : nullptr); };
  return {b(w.w_z, &GruWeights::w_z), b(w.u_z, &GruWeights::u_z), b(w.b_z, &GruWeights::b_z),
          b(w.w_r, &GruWeights::w_r), b(w.u_r, &GruWeights::u_r), b(w.b_r, &GruWeights::b_r),
          b(w.w_n, &GruWeights::w_n), b(w.u_n, &GruWeights::u_n), b(w.b_n, &GruWeights::b_n)};
}

std::size_t argmax(const Tensor& t, std::size_t begin, std::size_t end) {
  std::size_t best = begin;
  for (std::size_t i = begin + 1; i < end; ++i)
    if (t[i] > t[best]) best = i;
  return best;
}

}  // namespace

EncodedSample encode_sample(const DialogueSample& sample, const Vocabulary& vocab, std::size_t vocab_limit,
                            bool strict) {
  auto id = [&](const std::string& token) {
    const int v = vocab.id_or_unk(token, vocab_limit);
    if (strict && v == Vocabulary::kUnk && token != vocab.token(Vocabulary::kUnk)) {
      throw DataError("encode: token '" + token + "' is out of vocabulary");
    }
    return v;
  };

  EncodedSample out;
  out.task_id = sample.task_id;
  out.response = sample.response;
  for (const auto& tok : sample.history) out.history.push_back(id(tok));

  for (const auto& triple : sample.kb) {
    out.cells.push_back({{id(triple.subject), id(triple.relation), id(triple.object)}, triple.object, -1});
  }
  for (std::size_t t = 0; t < sample.history.size(); ++t) {
    out.cells.push_back({{out.history[t]}, sample.history[t], static_cast<int>(t)});
  }
  out.cells.push_back({{Vocabulary::kNull}, std::string(), -1});

  for (const auto& tok : sample.sketch_response) out.sketch.push_back(id(tok));

  const std::size_t kb_cells = sample.kb.size();
  out.copy_targets.assign(sample.response.size(), -1);
  for (std::size_t t = 0; t < sample.response.size(); ++t) {
    if (!Vocabulary::is_tag_token(sample.sketch_response[t])) continue;
    const std::string& word = sample.response[t];
    int target = static_cast<int>(out.null_cell());
    for (std::size_t c = 0; c < kb_cells; ++c) {
      if (out.cells[c].object == word) {
        target = static_cast<int>(c);
        break;
      }
    }
    if (target == static_cast<int>(out.null_cell())) {
      for (std::size_t c = out.null_cell(); c-- > kb_cells;) {
        if (out.cells[c].object == word) {
          target = static_cast<int>(c);
          break;
        }
      }
    }
    out.copy_targets[t] = target;
  }

  out.pointer_labels.assign(out.cells.size(), 0.0);
  for (std::size_t c = 0; c + 1 < out.cells.size(); ++c) {
    if (std::find(sample.response.begin(), sample.response.end(), out.cells[c].object) != sample.response.end())
      out.pointer_labels[c] = 1.0;
  }
  return out;
}

SharedVars bind(Tape& tape, const SharedWeights& weights, SharedWeights* grads) {
  SharedVars v;
  v.embedding = tape.bind(weights.embedding, grads ? &grads->embedding : nullptr);
  v.forward = bind_gru(tape, weights.forward, grads ? &grads->forward : nullptr);
  v.backward = bind_gru(tape, weights.backward, grads ? &grads->backward : nullptr);
  if (grads && grads->memory.size() != weights.memory.size()) grads->memory.resize(weights.memory.size());
  for (std::size_t h = 0; h < weights.memory.size(); ++h)
    v.memory.push_back(tape.bind(weights.memory[h], grads ? &grads->memory[h] : nullptr));
  return v;
}

DecoderVars bind(Tape& tape, const DecoderWeights& weights, DecoderWeights* grads) {
  DecoderVars v;
  v.gru = bind_gru(tape, weights.gru, grads ? &grads->gru : nullptr);
  v.init_w = tape.bind(weights.init_w, grads ? &grads->init_w : nullptr);
  v.init_b = tape.bind(weights.init_b, grads ? &grads->init_b : nullptr);
  v.out_w = tape.bind(weights.out_w, grads ? &grads->out_w : nullptr);
  v.out_b = tape.bind(weights.out_b, grads ? &grads->out_b : nullptr);
  return v;
}

EncoderOutput encode(Tape& tape, const SharedVars& shared, const EncodedSample& sample) {
  if (sample.history.empty()) throw DataError("encode: empty history");
  if (shared.memory.size() < 2) throw ShapeError("encode: need at least one memory hop");
  const std::size_t n = sample.history.size();
  const std::size_t hidden = tape.value(shared.forward.u_z).rows();

  std::vector<Var> inputs;
  inputs.reserve(n);
  for (int id : sample.history) inputs.push_back(tape.embedding(shared.embedding, static_cast<std::size_t>(id)));

  const Var zero = tape.constant(Tensor(hidden, 1));
  std::vector<Var> fwd(n), bwd(n);
  Var h = zero;
  for (std::size_t t = 0; t < n; ++t) fwd[t] = h = ad::gru_cell(tape, shared.forward, inputs[t], h);
  h = zero;
  for (std::size_t t = n; t-- > 0;) bwd[t] = h = ad::gru_cell(tape, shared.backward, inputs[t], h);

  EncoderOutput out;
  out.context.reserve(n);
  for (std::size_t t = 0; t < n; ++t) out.context.push_back(tape.add(fwd[t], bwd[t]));
  out.final_state = tape.add(fwd[n - 1], bwd[0]);

  for (const Var table : shared.memory) {
    std::vector<Var> columns;
    columns.reserve(sample.cells.size());
    for (const auto& cell : sample.cells) {
      Var c = tape.embedding_bag(table, cell.tokens);
      if (cell.history_pos >= 0) c = tape.add(c, out.context[static_cast<std::size_t>(cell.history_pos)]);
      columns.push_back(c);
    }
    out.memory.push_back(tape.concat(columns, 1));
  }

  Var query = out.final_state;
  const std::size_t hops = shared.memory.size() - 1;
  for (std::size_t hop = 0; hop < hops; ++hop) {
    const Var logits = tape.matmul(tape.transpose(out.memory[hop]), query);
    const Var attention = tape.softmax(logits);
    const Var read = tape.matmul(out.memory[hop + 1], attention);
    if (hop + 1 == hops) {
      out.pointer_logits = logits;
      out.readout = read;
    }
    query = tape.add(query, read);
  }
  out.global_pointer = tape.sigmoid(out.pointer_logits);
  return out;
}

Var initial_state(Tape& tape, const DecoderVars& decoder, const EncoderOutput& enc) {
  const Var joined = tape.concat(std::vector<Var>{enc.final_state, enc.readout}, 0);
  return tape.tanh(tape.add(tape.matmul(decoder.init_w, joined), decoder.init_b));
}

DecoderStep decode_step(Tape& tape, const SharedVars& shared, const DecoderVars& decoder, const EncoderOutput& enc,
                        Var state, int prev_token, bool with_distributions) {
  DecoderStep step;
  const Var x = tape.embedding(shared.embedding, static_cast<std::size_t>(prev_token));
  step.state = ad::gru_cell(tape, decoder.gru, x, state);
  step.sketch_logits = tape.add(tape.matmul(decoder.out_w, step.state), decoder.out_b);
  const Var scores = tape.matmul(tape.transpose(enc.memory.front()), step.state);
  step.copy_logits = tape.mul(scores, enc.global_pointer);
  if (with_distributions) {
    step.sketch_distribution = tape.softmax(step.sketch_logits);
    step.copy_distribution = tape.softmax(step.copy_logits);
  }
  return step;
}

Var sample_loss(Tape& tape, const SharedVars& shared, const DecoderVars& decoder, const EncodedSample& sample) {
  const EncoderOutput enc = encode(tape, shared, sample);
  const std::size_t vocab_k = tape.value(decoder.out_w).rows();
  Var state = initial_state(tape, decoder, enc);

  std::vector<Var> sketch_terms, copy_terms;
  int prev = Vocabulary::kSos;
  for (std::size_t t = 0; t <= sample.sketch.size(); ++t) {
    const DecoderStep step = decode_step(tape, shared, decoder, enc, state, prev);
    const int target = t < sample.sketch.size() ? sample.sketch[t] : Vocabulary::kEos;
    if (static_cast<std::size_t>(target) >= vocab_k) {
      throw DataError("loss: sketch token id " + std::to_string(target) + " outside decoder vocabulary of " +
                      std::to_string(vocab_k));
    }
    sketch_terms.push_back(tape.cross_entropy(step.sketch_logits, static_cast<std::size_t>(target)));
    if (t < sample.sketch.size() && sample.copy_targets[t] >= 0) {
      copy_terms.push_back(tape.cross_entropy(step.copy_logits, static_cast<std::size_t>(sample.copy_targets[t])));
    }
    state = step.state;
    prev = target;
  }

  auto mean = [&](const std::vector<Var>& terms) {
    return tape.affine(tape.sum(tape.concat(terms, 0)), 1.0 / static_cast<double>(terms.size()));
  };
  Var total = tape.add(mean(sketch_terms), tape.binary_cross_entropy(enc.pointer_logits, sample.pointer_labels));
  if (!copy_terms.empty()) total = tape.add(total, mean(copy_terms));
  return total;
}

double loss(const ModelView& model, const EncodedSample& sample) {
  Tape tape;
  const SharedVars shared = bind(tape, model.shared, nullptr);
  const DecoderVars decoder = bind(tape, model.decoder, nullptr);
  return tape.value(sample_loss(tape, shared, decoder, sample))[0];
}

double accumulate_gradients(const ModelView& model, const EncodedSample& sample, SharedWeights* shared_grad,
                            DecoderWeights* decoder_grad, double scale) {
  Tape tape;
  const SharedVars shared = bind(tape, model.shared, shared_grad);
  const DecoderVars decoder = bind(tape, model.decoder, decoder_grad);
  const Var l = sample_loss(tape, shared, decoder, sample);
  const double value = tape.value(l)[0];
  tape.backward(scale == 1.0 ? l : tape.affine(l, scale));
  return value;
}

std::vector<std::string> generate(const ModelView& model, const EncodedSample& sample, const Vocabulary& vocab,
                                  std::size_t max_len) {
  std::vector<std::string> out;
  if (max_len == 0) return out;
  Tape tape;
  const SharedVars shared = bind(tape, model.shared, nullptr);
  const DecoderVars decoder = bind(tape, model.decoder, nullptr);
  const EncoderOutput enc = encode(tape, shared, sample);
  Var state = initial_state(tape, decoder, enc);
  int prev = Vocabulary::kSos;
  const std::size_t null_cell = sample.null_cell();
  while (out.size() < max_len) {
    const DecoderStep step = decode_step(tape, shared, decoder, enc, state, prev);
    const Tensor& sketch = tape.value(step.sketch_logits);
    const int token = static_cast<int>(argmax(sketch, 0, sketch.size()));
    if (token == Vocabulary::kEos) break;
    if (vocab.is_tag(token) && null_cell > 0) {
      const std::size_t cell = argmax(tape.value(step.copy_logits), 0, null_cell);
      out.push_back(sample.cells[cell].object);
    } else {
      out.push_back(vocab.token(token));
    }
    state = step.state;
    prev = token;
  }
  return out;
}

}  // namespace tpem::glmp
