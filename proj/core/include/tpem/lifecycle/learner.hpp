#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tpem/autodiff/adam.hpp"
#include "tpem/glmp/model.hpp"
#include "tpem/glmp/sample.hpp"
#include "tpem/glmp/vocabulary.hpp"
#include "tpem/glmp/weights.hpp"
#include "tpem/lifecycle/checkpoint.hpp"
#include "tpem/lifecycle/expansion.hpp"
#include "tpem/lifecycle/masking.hpp"
#include "tpem/lifecycle/ownership.hpp"
#include "tpem/lifecycle/pruning.hpp"

namespace tpem::lifecycle {

struct LifecycleOptions {
  // Per-element ownership gating. Off means plain fine-tuning: every shared
  // element is trainable for every task and nothing is preserved.
  bool ownership = true;
  bool prune = true;
  bool expand = true;
  bool mask = true;
  // New decoders start as a copy of the previous task's decoder, and every
  // task is served by the latest one (a single fine-tuned model).
  bool inherit_decoder = false;

  double prune_ratio = 0.5;
  std::size_t prune_rounds = 1;  // >1 splits the release over several prune/retrain rounds
  double alpha = 32.0;
  double beta = 50.0;
  LogBase log_base = LogBase::Natural;
  bool batches_over_all_epochs = false;  // N_k = batches per epoch unless set
  double tau = 5e-3;

  std::size_t embed = 128;
  std::size_t base_hidden = 128;
  std::size_t hops = 3;
  std::size_t batch_size = 32;
  std::size_t train_epochs = 30;  // only used for N_k when batches_over_all_epochs
  ad::AdamConfig adam{};
  std::size_t patience = 5;
  std::size_t max_retrain_epochs = 5;
  std::size_t max_decode_len = 30;
  std::uint64_t seed = 1;
};

struct EpochLog {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  std::size_t mask_bits_off = 0;  // older-task elements currently masked out
  std::size_t mask_flips = 0;     // bits that changed during this epoch
};

struct TrainingLog {
  std::vector<EpochLog> epochs;
  bool early_stopped = false;
};

// A self-contained model for one task, as used at inference time.
struct InferenceModel {
  TaskLabel task = 0;
  glmp::ModelDims dims;
  glmp::SharedWeights shared;
  glmp::DecoderWeights decoder;

  glmp::ModelView view() const { return {shared, decoder}; }
};

struct EvaluationOutput {
  double loss = 0.0;
  std::vector<std::vector<std::string>> outputs;
};

// Mean loss and greedy outputs of `model` over `samples`.
EvaluationOutput evaluate(const InferenceModel& model, const glmp::Vocabulary& vocab,
                          std::span<const glmp::DialogueSample> samples, std::size_t max_decode_len);

// Owns the shared weights, their ownership labels, the vocabulary and the
// frozen record of every finished task, and drives the per-task lifecycle:
//
//   begin_task -> train_task -> prune -> retrain -> finalize_task
//
// Any finished task can be served by reconstruct_for_inference().
class ContinualLearner {
 public:
  explicit ContinualLearner(LifecycleOptions options);

  const LifecycleOptions& options() const noexcept { return options_; }

  // Registers the next task: adds its training vocabulary, grows the model
  // (Eq. 1 when expansion is enabled), creates its decoder and real mask.
  TaskLabel begin_task(std::span<const glmp::DialogueSample> train);
  // Same, with an explicit hidden size instead of Eq. 1.
  TaskLabel begin_task(std::span<const glmp::DialogueSample> train, std::size_t hidden);

  // Adds tokens of `samples` to the vocabulary without creating a task.
  void absorb_vocabulary(std::span<const glmp::DialogueSample> samples);

  ExpansionDecision plan_expansion(std::size_t training_samples) const;
  const std::optional<ExpansionDecision>& last_expansion() const noexcept { return last_expansion_; }
  // Grows hidden-sized dimensions to `hidden` and vocabulary-sized ones to
  // the current vocabulary. New elements are N(0, 0.1) and FREE.
  void expand_model(std::size_t hidden);

  TrainingLog train_task(TaskLabel task, std::span<const glmp::DialogueSample> train,
                         std::span<const glmp::DialogueSample> val, std::size_t epochs);
  PruneRecord prune(TaskLabel task, double ratio);
  TrainingLog retrain(TaskLabel task, std::span<const glmp::DialogueSample> train,
                      std::span<const glmp::DialogueSample> val, std::size_t epochs);
  const TaskCheckpoint& finalize_task(TaskLabel task, std::span<const glmp::DialogueSample> val);

  InferenceModel reconstruct_for_inference(TaskLabel task) const;
  // Weights seen by the forward pass of the task in training.
  glmp::SharedWeights masked_effective_weights(TaskLabel task) const;

  double free_fraction() const { return compute_free_fraction(owners_); }

  const glmp::SharedWeights& shared() const noexcept { return shared_; }
  glmp::SharedWeights& mutable_shared() noexcept { return shared_; }
  const OwnershipMap& owners() const noexcept { return owners_; }
  const glmp::Vocabulary& vocabulary() const noexcept { return vocab_; }
  const std::vector<glmp::ParameterInfo>& layout() const noexcept { return layout_; }
  glmp::ModelDims dims() const { return {options_.embed, hidden_, vocab_.size(), options_.hops}; }
  std::size_t hidden() const noexcept { return hidden_; }
  TaskLabel current_task() const noexcept { return current_; }
  std::size_t task_count() const noexcept { return checkpoints_.size(); }
  const std::vector<TaskCheckpoint>& checkpoints() const noexcept { return checkpoints_; }
  const TaskCheckpoint& checkpoint(TaskLabel task) const;
  const glmp::DecoderWeights& live_decoder() const;
  const std::optional<RealMask>& real_mask() const noexcept { return real_mask_; }
  std::vector<std::string> parameter_names() const;

  std::vector<std::uint8_t> serialize_state() const;
  static ContinualLearner deserialize_state(std::span<const std::uint8_t> bytes);
  void save_state(const std::string& path) const;
  static ContinualLearner load_state(const std::string& path);

 private:
  enum class Phase { Train, Retrain };

  TrainingLog run_epochs(TaskLabel task, std::span<const glmp::DialogueSample> train,
                         std::span<const glmp::DialogueSample> val, std::size_t epochs, Phase phase);
  std::vector<std::vector<std::uint8_t>> current_mask_bits(TaskLabel task) const;
  glmp::SharedWeights view_with(TaskLabel task, const std::vector<std::vector<std::uint8_t>>& bits) const;
  void require_current(TaskLabel task, const char* op) const;
  std::vector<glmp::EncodedSample> encode_all(std::span<const glmp::DialogueSample> samples) const;

  LifecycleOptions options_;
  std::vector<glmp::ParameterInfo> layout_;
  glmp::Rng rng_;
  glmp::Vocabulary vocab_;
  std::size_t hidden_;
  glmp::SharedWeights shared_;
  OwnershipMap owners_;
  std::vector<TaskCheckpoint> checkpoints_;

  TaskLabel current_ = 0;
  bool trained_ = false;
  bool pruned_ = false;
  std::size_t vocab_before_task_ = 0;
  std::optional<glmp::DecoderWeights> decoder_;
  std::optional<RealMask> real_mask_;
  std::optional<ExpansionDecision> last_expansion_;
};

}  // namespace tpem::lifecycle
