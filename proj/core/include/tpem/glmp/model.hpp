#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tpem/autodiff/gru.hpp"
#include "tpem/autodiff/tape.hpp"
#include "tpem/glmp/sample.hpp"
#include "tpem/glmp/vocabulary.hpp"
#include "tpem/glmp/weights.hpp"

namespace tpem::glmp {

using ad::Tape;
using ad::Var;

// One addressable memory cell. KB cells hold the bag (subject, relation,
// object); history cells hold a single token and receive the encoder's
// context state; the trailing null cell means "copy nothing".
struct MemoryCell {
  std::vector<int> tokens;
  std::string object;  // copy target word; empty for the null cell
  int history_pos = -1;
};

struct EncodedSample {
  std::vector<int> history;
  std::vector<MemoryCell> cells;  // |kb| + |history| + 1
  std::vector<int> sketch;        // sketch token ids, EOS excluded
  std::vector<int> copy_targets;  // per response position: cell index at tags, -1 elsewhere
  std::vector<double> pointer_labels;
  std::vector<std::string> response;
  int task_id = 1;

  std::size_t null_cell() const { return cells.size() - 1; }
};

// Maps a sample onto ids below `vocab_limit`. Unknown tokens become UNK
// unless `strict`, in which case they raise DataError.
EncodedSample encode_sample(const DialogueSample& sample, const Vocabulary& vocab, std::size_t vocab_limit,
                            bool strict = false);

struct SharedVars {
  Var embedding;
  ad::GruVars forward;
  ad::GruVars backward;
  std::vector<Var> memory;
};

struct DecoderVars {
  ad::GruVars gru;
  Var init_w, init_b, out_w, out_b;
};

// Records the weights on `tape`. A null gradient pointer freezes them.
SharedVars bind(Tape& tape, const SharedWeights& weights, SharedWeights* grads);
DecoderVars bind(Tape& tape, const DecoderWeights& weights, DecoderWeights* grads);

struct EncoderOutput {
  std::vector<Var> context;  // H x 1 per history token, forward + backward
  Var final_state;           // H x 1
  std::vector<Var> memory;   // per hop matrix, H x cells
  Var pointer_logits;        // cells x 1
  Var global_pointer;        // cells x 1, sigmoid(pointer_logits)
  Var readout;               // H x 1
};

EncoderOutput encode(Tape& tape, const SharedVars& shared, const EncodedSample& sample);

Var initial_state(Tape& tape, const DecoderVars& decoder, const EncoderOutput& enc);

struct DecoderStep {
  Var state;
  Var sketch_logits;  // V_k x 1
  Var copy_logits;    // cells x 1, pre-scaled by the global pointer
  Var sketch_distribution;
  Var copy_distribution;
};

DecoderStep decode_step(Tape& tape, const SharedVars& shared, const DecoderVars& decoder, const EncoderOutput& enc,
                        Var state, int prev_token, bool with_distributions = false);

// Sketch CE (teacher forced, EOS-terminated) + global pointer BCE + copy CE
// at tag positions, each averaged over its positions and summed.
Var sample_loss(Tape& tape, const SharedVars& shared, const DecoderVars& decoder, const EncodedSample& sample);

// Borrowed weights of a complete model for one task.
struct ModelView {
  const SharedWeights& shared;
  const DecoderWeights& decoder;
};

double loss(const ModelView& model, const EncodedSample& sample);

// Accumulates scale * d(loss)/d(weights) into the gradient holders and
// returns the unscaled loss. Null holders are treated as frozen.
double accumulate_gradients(const ModelView& model, const EncodedSample& sample, SharedWeights* shared_grad,
                            DecoderWeights* decoder_grad, double scale = 1.0);

// Greedy decoding. A non-tag sketch token is emitted as is; a sketch tag is
// replaced by the object word of the most likely non-null memory cell.
std::vector<std::string> generate(const ModelView& model, const EncodedSample& sample, const Vocabulary& vocab,
                                  std::size_t max_len);

}  // namespace tpem::glmp
