#include "tpem/lifecycle/learner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "tpem/error.hpp"
#include "tpem/io/binary.hpp"

namespace tpem::lifecycle {
namespace {

using glmp::DecoderWeights;
using glmp::SharedWeights;

constexpr char kStateMagic[] = "TPEMSTAT";
constexpr std::uint32_t kStateVersion = 1;

double mean_loss(const glmp::ModelView& view, const std::vector<glmp::EncodedSample>& samples) {
  if (samples.empty()) return 0.0;
  double total = 0.0;
  for (const auto& s : samples) total += glmp::loss(view, s);
  return total / static_cast<double>(samples.size());
}

std::size_t count_differences(const std::vector<std::vector<std::uint8_t>>& a,
                              const std::vector<std::vector<std::uint8_t>>& b) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i)
    for (std::size_t j = 0; j < a[i].size() && j < b[i].size(); ++j) n += a[i][j] != b[i][j];
  return n;
}

void zero(SharedWeights& w) {
  for (ad::Tensor* t : w.tensors()) t->fill(0.0);
}

void zero(DecoderWeights& w) {
  for (ad::Tensor* t : w.tensors()) t->fill(0.0);
}

}  // namespace

EvaluationOutput evaluate(const InferenceModel& model, const glmp::Vocabulary& vocab,
                          std::span<const glmp::DialogueSample> samples, std::size_t max_decode_len) {
  EvaluationOutput out;
  if (samples.empty()) return out;
  const auto view = model.view();
  for (const auto& sample : samples) {
    const auto encoded = glmp::encode_sample(sample, vocab, model.dims.vocab);
    out.loss += glmp::loss(view, encoded);
    out.outputs.push_back(glmp::generate(view, encoded, vocab, max_decode_len));
  }
  out.loss /= static_cast<double>(samples.size());
  return out;
}

ContinualLearner::ContinualLearner(LifecycleOptions options)
    : options_(options),
      layout_(SharedWeights::layout(options.hops)),
      rng_(options.seed),
      hidden_(options.base_hidden) {
  if (options_.embed == 0 || options_.base_hidden == 0) throw ConfigError("learner: sizes must be positive");
  if (options_.hops == 0) throw ConfigError("learner: hop count must be at least 1");
  if (options_.batch_size == 0) throw ConfigError("learner: batch size must be positive");
  if (!(options_.prune_ratio >= 0.0 && options_.prune_ratio < 1.0)) {
    throw ConfigError("learner: pruning ratio outside [0, 1)");
  }
  if (!std::isfinite(options_.tau)) throw ConfigError("learner: mask threshold must be finite");
  shared_ = SharedWeights::random(dims(), rng_);
  std::vector<OwnershipGrid> grids;
  for (const ad::Tensor* t : std::as_const(shared_).tensors()) grids.emplace_back(t->rows(), t->cols());
  owners_ = OwnershipMap(std::move(grids));
}

std::vector<std::string> ContinualLearner::parameter_names() const {
  std::vector<std::string> names;
  for (const auto& info : layout_) names.push_back(info.id);
  return names;
}

const TaskCheckpoint& ContinualLearner::checkpoint(TaskLabel task) const {
  if (task == 0 || task > checkpoints_.size()) {
    throw CheckpointError(CheckpointError::Kind::Missing,
                          "no checkpoint for task " + std::to_string(task) + " (finished tasks: 1.." +
                              std::to_string(checkpoints_.size()) + ")");
  }
  return checkpoints_[task - 1];
}

const glmp::DecoderWeights& ContinualLearner::live_decoder() const {
  if (!decoder_) throw Error(Error::Category::Usage, "no task in training");
  return *decoder_;
}

void ContinualLearner::require_current(TaskLabel task, const char* op) const {
  if (current_ == 0 || task != current_) {
    std::string registered;
    for (std::size_t k = 1; k <= checkpoints_.size(); ++k) registered += (registered.empty() ? "" : ",") + std::to_string(k);
    throw Error(Error::Category::Usage, std::string(op) + ": task " + std::to_string(task) +
                                            " is not in training (current " + std::to_string(current_) +
                                            ", finished [" + registered + "])");
  }
}

void ContinualLearner::absorb_vocabulary(std::span<const glmp::DialogueSample> samples) {
  for (const auto& s : samples) {
    for (const auto& t : s.history) vocab_.add(t);
    for (const auto& triple : s.kb) {
      vocab_.add(triple.subject);
      vocab_.add(triple.relation);
      vocab_.add(triple.object);
    }
    for (const auto& t : s.response) vocab_.add(t);
    for (const auto& t : s.sketch_response) vocab_.add(t);
  }
}

ExpansionDecision ContinualLearner::plan_expansion(std::size_t training_samples) const {
  std::size_t batches = batches_per_epoch(training_samples, options_.batch_size);
  if (options_.batches_over_all_epochs) batches *= options_.train_epochs;
  ExpansionParams params;
  params.alpha = options_.alpha;
  params.beta = options_.beta;
  params.hidden_prev = hidden_;
  params.prune_ratio_prev = options_.prune_ratio;
  params.free_fraction = free_fraction();
  params.batches = batches;
  params.log_base = options_.log_base;
  return compute_new_hidden(params);
}

void ContinualLearner::expand_model(std::size_t hidden) {
  if (hidden < hidden_) {
    throw ConfigError("expand_model: new hidden size " + std::to_string(hidden) + " is below current " +
                      std::to_string(hidden_));
  }
  if (decoder_) throw Error(Error::Category::Usage, "expand_model: cannot expand while a decoder is live");
  const glmp::ModelDims next{options_.embed, hidden, vocab_.size(), options_.hops};
  auto tensors = shared_.tensors();
  for (std::size_t i = 0; i < layout_.size(); ++i) {
    const std::size_t rows = glmp::extent(layout_[i].rows, next);
    const std::size_t cols = glmp::extent(layout_[i].cols, next);
    *tensors[i] = glmp::grow(*tensors[i], rows, cols, rng_);
    owners_.grid(i).grow(rows, cols);
  }
  hidden_ = hidden;
}

TaskLabel ContinualLearner::begin_task(std::span<const glmp::DialogueSample> train) {
  if (train.empty()) throw DataError("begin_task: empty training set");
  std::optional<ExpansionDecision> decision;
  if (options_.expand && options_.ownership && !checkpoints_.empty()) decision = plan_expansion(train.size());
  const std::size_t hidden = decision ? decision->hidden_new : hidden_;
  const TaskLabel task = begin_task(train, hidden);
  last_expansion_ = decision;
  return task;
}

TaskLabel ContinualLearner::begin_task(std::span<const glmp::DialogueSample> train, std::size_t hidden) {
  if (current_ != 0) throw Error(Error::Category::Usage, "begin_task: task " + std::to_string(current_) + " not finalized");
  if (train.empty()) throw DataError("begin_task: empty training set");
  if (checkpoints_.size() >= 0xfffe) throw Error(Error::Category::Usage, "begin_task: too many tasks");
  vocab_before_task_ = vocab_.size();
  absorb_vocabulary(train);
  expand_model(hidden);
  last_expansion_.reset();

  const auto task = static_cast<TaskLabel>(checkpoints_.size() + 1);
  const glmp::ModelDims d = dims();
  if (options_.inherit_decoder && !checkpoints_.empty()) {
    DecoderWeights prev = checkpoints_.back().decoder;
    const auto layout = DecoderWeights::layout(task);
    auto tensors = prev.tensors();
    for (std::size_t i = 0; i < layout.size(); ++i) {
      *tensors[i] = glmp::grow(*tensors[i], glmp::extent(layout[i].rows, d), glmp::extent(layout[i].cols, d), rng_);
    }
    decoder_ = std::move(prev);
  } else {
    decoder_ = DecoderWeights::random(d, rng_);
  }
  if (options_.mask && options_.ownership && task > 1) {
    real_mask_ = RealMask::initial(std::as_const(shared_).tensors(), options_.tau);
  } else {
    real_mask_.reset();
  }
  current_ = task;
  trained_ = false;
  pruned_ = false;
  return task;
}

std::vector<glmp::EncodedSample> ContinualLearner::encode_all(std::span<const glmp::DialogueSample> samples) const {
  std::vector<glmp::EncodedSample> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(glmp::encode_sample(s, vocab_, vocab_.size()));
  return out;
}

std::vector<std::vector<std::uint8_t>> ContinualLearner::current_mask_bits(TaskLabel task) const {
  if (real_mask_ && task == current_ && task > 1) return real_mask_->binarized(options_.tau);
  return std::vector<std::vector<std::uint8_t>>(layout_.size());
}

SharedWeights ContinualLearner::view_with(TaskLabel task, const std::vector<std::vector<std::uint8_t>>& bits) const {
  SharedWeights view = shared_;
  if (!options_.ownership) return view;
  auto out = view.tensors();
  const auto in = shared_.tensors();
  for (std::size_t i = 0; i < layout_.size(); ++i) {
    *out[i] = effective_grid(*in[i], owners_.grid(i), task, bits[i], FreeElements::Active, in[i]->rows(),
                             in[i]->cols());
  }
  return view;
}

SharedWeights ContinualLearner::masked_effective_weights(TaskLabel task) const {
  return view_with(task, current_mask_bits(task));
}

TrainingLog ContinualLearner::run_epochs(TaskLabel task, std::span<const glmp::DialogueSample> train,
                                         std::span<const glmp::DialogueSample> val, std::size_t epochs,
                                         Phase phase) {
  const auto encoded_train = encode_all(train);
  const auto encoded_val = encode_all(val);
  const std::size_t grids = layout_.size();

  std::vector<std::vector<std::uint8_t>> gates(grids), older(grids);
  const bool mask_active = options_.ownership && real_mask_.has_value();
  const bool mask_trainable = mask_active && phase == Phase::Train;
  if (options_.ownership) {
    for (std::size_t i = 0; i < grids; ++i) {
      gates[i] = phase == Phase::Train ? owners_.free_gate(i) : owners_.owned_gate(i, task);
      if (mask_trainable) older[i] = owners_.older_gate(i, task);
    }
  }

  ad::Adam adam(options_.adam);
  std::vector<ad::AdamState> shared_state(grids), decoder_state(decoder_->tensors().size());
  SharedWeights shared_grad = SharedWeights::zeros_like(shared_);
  DecoderWeights decoder_grad = DecoderWeights::zeros_like(*decoder_);

  std::vector<std::size_t> order(encoded_train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  TrainingLog log;
  double best = std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    const auto bits_at_start = mask_active ? real_mask_->binarized(options_.tau)
                                           : std::vector<std::vector<std::uint8_t>>(grids);
    std::shuffle(order.begin(), order.end(), rng_);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += options_.batch_size) {
      const std::size_t end = std::min(order.size(), start + options_.batch_size);
      const double scale = 1.0 / static_cast<double>(end - start);

      std::optional<SharedWeights> masked;
      if (mask_active) masked = view_with(task, real_mask_->binarized(options_.tau));
      const SharedWeights& view = masked ? *masked : shared_;

      zero(shared_grad);
      zero(decoder_grad);
      for (std::size_t j = start; j < end; ++j) {
        epoch_loss += glmp::accumulate_gradients({view, *decoder_}, encoded_train[order[j]], &shared_grad,
                                                 &decoder_grad, scale);
      }

      auto weights = shared_.tensors();
      auto grads = shared_grad.tensors();
      for (std::size_t i = 0; i < grids; ++i) {
        if (mask_trainable) {
          const ad::Tensor mask_grad = mask_backward(*grads[i], *weights[i], owners_.grid(i), task);
          adam.step(real_mask_->values[i], mask_grad, real_mask_->state[i], older[i]);
        }
        adam.step(*weights[i], *grads[i], shared_state[i], gates[i]);
      }
      auto dec = decoder_->tensors();
      auto dec_grad = decoder_grad.tensors();
      for (std::size_t i = 0; i < dec.size(); ++i) adam.step(*dec[i], *dec_grad[i], decoder_state[i]);
    }

    EpochLog entry;
    entry.epoch = epoch + 1;
    entry.train_loss = epoch_loss / static_cast<double>(std::max<std::size_t>(1, order.size()));
    const SharedWeights val_view = masked_effective_weights(task);
    entry.val_loss = mean_loss({val_view, *decoder_}, encoded_val);
    if (mask_active) {
      const auto bits = real_mask_->binarized(options_.tau);
      entry.mask_flips = count_differences(bits_at_start, bits);
      for (std::size_t i = 0; i < grids; ++i) {
        const auto older_gate = owners_.older_gate(i, task);
        for (std::size_t j = 0; j < bits[i].size(); ++j) entry.mask_bits_off += older_gate[j] && !bits[i][j];
      }
    }
    log.epochs.push_back(entry);

    if (phase == Phase::Train && !encoded_val.empty()) {
      if (entry.val_loss < best) {
        best = entry.val_loss;
        since_best = 0;
      } else if (++since_best >= options_.patience) {
        log.early_stopped = true;
        break;
      }
    }
  }
  return log;
}

TrainingLog ContinualLearner::train_task(TaskLabel task, std::span<const glmp::DialogueSample> train,
                                         std::span<const glmp::DialogueSample> val, std::size_t epochs) {
  require_current(task, "train_task");
  if (train.empty()) throw DataError("train_task: empty training corpus");
  if (trained_) throw Error(Error::Category::Usage, "train_task: task already trained");
  TrainingLog log = run_epochs(task, train, val, epochs, Phase::Train);
  if (options_.ownership) owners_.claim_free(task);
  trained_ = true;
  return log;
}

PruneRecord ContinualLearner::prune(TaskLabel task, double ratio) {
  require_current(task, "prune");
  if (!trained_) throw Error(Error::Category::Usage, "prune: task not trained");
  if (!options_.ownership) throw Error(Error::Category::Usage, "prune: ownership tracking is disabled");
  PruneRecord record = lifecycle::prune(shared_.tensors(), owners_, parameter_names(), task, ratio);
  pruned_ = true;
  return record;
}

TrainingLog ContinualLearner::retrain(TaskLabel task, std::span<const glmp::DialogueSample> train,
                                      std::span<const glmp::DialogueSample> val, std::size_t epochs) {
  require_current(task, "retrain");
  if (!pruned_) throw Error(Error::Category::Usage, "retrain: task not pruned");
  if (train.empty()) throw DataError("retrain: empty training corpus");
  if (epochs > options_.max_retrain_epochs) {
    throw ConfigError("retrain: " + std::to_string(epochs) + " epochs exceeds the maximum of " +
                      std::to_string(options_.max_retrain_epochs));
  }
  return run_epochs(task, train, val, epochs, Phase::Retrain);
}

const TaskCheckpoint& ContinualLearner::finalize_task(TaskLabel task, std::span<const glmp::DialogueSample> val) {
  require_current(task, "finalize_task");
  if (!trained_) throw Error(Error::Category::Usage, "finalize_task: task not trained");

  TaskCheckpoint c;
  c.task = task;
  c.hidden = static_cast<std::uint32_t>(hidden_);
  c.embed = static_cast<std::uint32_t>(options_.embed);
  c.vocab = static_cast<std::uint32_t>(vocab_.size());
  c.hops = static_cast<std::uint32_t>(options_.hops);
  const auto tensors = shared_.tensors();
  for (std::size_t i = 0; i < layout_.size(); ++i) {
    c.shared_manifest.push_back({layout_[i].id, static_cast<std::uint32_t>(tensors[i]->rows()),
                                 static_cast<std::uint32_t>(tensors[i]->cols())});
  }
  if (real_mask_) {
    auto bits = real_mask_->binarized(options_.tau);
    for (std::size_t i = 0; i < layout_.size(); ++i) {
      const auto older = owners_.older_gate(i, task);
      for (std::size_t j = 0; j < bits[i].size(); ++j)
        if (!older[j]) bits[i][j] = 1;
      c.masks.push_back(BinaryMask::pack(bits[i], tensors[i]->rows(), tensors[i]->cols()));
    }
  }
  c.decoder = std::move(*decoder_);
  for (std::size_t id = vocab_before_task_; id < vocab_.size(); ++id)
    c.vocabulary_additions.push_back(vocab_.token(static_cast<int>(id)));

  decoder_.reset();
  real_mask_.reset();
  checkpoints_.push_back(std::move(c));
  current_ = 0;
  trained_ = pruned_ = false;

  const InferenceModel model = reconstruct_for_inference(task);
  const EvaluationOutput eval = evaluate(model, vocab_, val, options_.max_decode_len);
  checkpoints_.back().fingerprint = {eval.loss, eval.outputs};
  return checkpoints_.back();
}

InferenceModel ContinualLearner::reconstruct_for_inference(TaskLabel task) const {
  const TaskCheckpoint& own = checkpoint(task);
  const TaskCheckpoint& source = options_.inherit_decoder ? checkpoints_.back() : own;
  InferenceModel model;
  model.task = task;
  model.dims = source.dims();
  model.decoder = source.decoder;
  model.shared.memory.resize(options_.hops + 1);

  auto out = model.shared.tensors();
  const auto in = shared_.tensors();
  for (std::size_t i = 0; i < layout_.size(); ++i) {
    const std::size_t rows = glmp::extent(layout_[i].rows, model.dims);
    const std::size_t cols = glmp::extent(layout_[i].cols, model.dims);
    if (options_.ownership) {
      std::vector<std::uint8_t> bits;
      if (!own.masks.empty()) bits = own.masks[i].unpack();
      *out[i] = effective_grid(*in[i], owners_.grid(i), task, bits, FreeElements::Zero, rows, cols);
    } else {
      *out[i] = glmp::truncate(*in[i], rows, cols);
    }
  }
  return model;
}

std::vector<std::uint8_t> ContinualLearner::serialize_state() const {
  if (current_ != 0) throw Error(Error::Category::Usage, "save_state: task " + std::to_string(current_) + " is mid-training");
  io::ByteWriter w;
  w.magic(std::string_view(kStateMagic, 8));
  w.u32(kStateVersion);
  const auto& o = options_;
  w.u8(static_cast<std::uint8_t>(o.ownership | (o.prune << 1) | (o.expand << 2) | (o.mask << 3) |
                                 (o.inherit_decoder << 4) | (o.batches_over_all_epochs << 5)));
  w.f64(o.prune_ratio);
  w.u32(static_cast<std::uint32_t>(o.prune_rounds));
  w.f64(o.alpha);
  w.f64(o.beta);
  w.u8(static_cast<std::uint8_t>(o.log_base));
  w.f64(o.tau);
  for (std::size_t v : {o.embed, o.base_hidden, o.hops, o.batch_size, o.train_epochs, o.patience,
                        o.max_retrain_epochs, o.max_decode_len}) {
    w.u32(static_cast<std::uint32_t>(v));
  }
  w.f64(o.adam.learning_rate);
  w.f64(o.adam.beta1);
  w.f64(o.adam.beta2);
  w.f64(o.adam.epsilon);
  w.u64(o.seed);

  w.u32(static_cast<std::uint32_t>(hidden_));
  w.u32(static_cast<std::uint32_t>(vocab_.size()));
  for (std::size_t id = glmp::Vocabulary::kReserved; id < vocab_.size(); ++id) w.str(vocab_.token(static_cast<int>(id)));
  std::ostringstream rng_state;
  rng_state << rng_;
  w.str(rng_state.str());

  const auto tensors = shared_.tensors();
  w.u32(static_cast<std::uint32_t>(tensors.size()));
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    w.str(layout_[i].id);
    w.u32(static_cast<std::uint32_t>(tensors[i]->rows()));
    w.u32(static_cast<std::uint32_t>(tensors[i]->cols()));
    for (double v : tensors[i]->values()) w.f64(v);
    for (TaskLabel label : owners_.grid(i).labels()) w.u16(label);
  }

  w.u32(static_cast<std::uint32_t>(checkpoints_.size()));
  for (const auto& c : checkpoints_) {
    const auto bytes = serialize(c);
    w.u64(bytes.size());
    w.raw(bytes);
  }
  return w.take();
}

ContinualLearner ContinualLearner::deserialize_state(std::span<const std::uint8_t> bytes) {
  using Kind = CheckpointError::Kind;
  if (bytes.empty()) throw CheckpointError(Kind::Truncated, "state: empty input");
  io::ByteReader r(bytes);
  if (bytes.size() < 8 || !r.magic(std::string_view(kStateMagic, 8))) {
    throw CheckpointError(Kind::BadMagic, "state: bad magic");
  }
  const std::uint32_t version = r.u32();
  if (version != kStateVersion) {
    throw CheckpointError(Kind::VersionMismatch,
                          "state: version " + std::to_string(version) + ", expected " + std::to_string(kStateVersion));
  }
  LifecycleOptions o;
  const std::uint8_t flags = r.u8();
  o.ownership = flags & 1;
  o.prune = flags & 2;
  o.expand = flags & 4;
  o.mask = flags & 8;
  o.inherit_decoder = flags & 16;
  o.batches_over_all_epochs = flags & 32;
  o.prune_ratio = r.f64();
  o.prune_rounds = r.u32();
  o.alpha = r.f64();
  o.beta = r.f64();
  const std::uint8_t base = r.u8();
  if (base > 2) throw CheckpointError(Kind::Malformed, "state: unknown log base");
  o.log_base = static_cast<LogBase>(base);
  o.tau = r.f64();
  for (std::size_t* v : {&o.embed, &o.base_hidden, &o.hops, &o.batch_size, &o.train_epochs, &o.patience,
                         &o.max_retrain_epochs, &o.max_decode_len}) {
    *v = r.u32();
  }
  o.adam.learning_rate = r.f64();
  o.adam.beta1 = r.f64();
  o.adam.beta2 = r.f64();
  o.adam.epsilon = r.f64();
  o.seed = r.u64();
  if (o.hops == 0 || o.hops > 64) throw CheckpointError(Kind::Malformed, "state: invalid hop count");

  ContinualLearner learner(o);
  learner.hidden_ = r.u32();
  const std::uint32_t vocab_size = r.u32();
  if (vocab_size < glmp::Vocabulary::kReserved) throw CheckpointError(Kind::Malformed, "state: vocabulary too small");
  for (std::uint32_t id = glmp::Vocabulary::kReserved; id < vocab_size; ++id) learner.vocab_.add(r.str());
  if (learner.vocab_.size() != vocab_size) throw CheckpointError(Kind::Malformed, "state: duplicate vocabulary tokens");
  std::istringstream rng_state(r.str());
  rng_state >> learner.rng_;
  if (!rng_state) throw CheckpointError(Kind::Malformed, "state: unreadable generator state");

  const std::uint32_t n = r.u32();
  if (n != learner.layout_.size()) throw CheckpointError(Kind::Malformed, "state: unexpected parameter count");
  auto tensors = learner.shared_.tensors();
  const glmp::ModelDims d = learner.dims();
  for (std::size_t i = 0; i < n; ++i) {
    const std::string id = r.str();
    const std::uint32_t rows = r.u32(), cols = r.u32();
    if (id != learner.layout_[i].id || rows != glmp::extent(learner.layout_[i].rows, d) ||
        cols != glmp::extent(learner.layout_[i].cols, d)) {
      throw CheckpointError(Kind::Malformed, "state: unexpected parameter " + id);
    }
    const std::size_t count = std::size_t{rows} * cols;
    if (r.remaining() / 10 < count) throw CheckpointError(Kind::Truncated, "state: parameter " + id + " truncated");
    ad::Tensor t(rows, cols);
    for (double& v : t.values()) v = r.f64();
    OwnershipGrid grid(rows, cols);
    for (std::size_t j = 0; j < count; ++j) grid[j] = r.u16();
    *tensors[i] = std::move(t);
    learner.owners_.grid(i) = std::move(grid);
  }

  const std::uint32_t tasks = r.u32();
  for (std::uint32_t k = 0; k < tasks; ++k) {
    const std::uint64_t len = r.u64();
    if (len > r.remaining()) throw CheckpointError(Kind::Truncated, "state: task checkpoint truncated");
    TaskCheckpoint c = deserialize(r.raw(static_cast<std::size_t>(len)));
    if (c.task != k + 1) throw CheckpointError(Kind::Malformed, "state: checkpoints out of order");
    learner.checkpoints_.push_back(std::move(c));
  }
  if (!r.done()) throw CheckpointError(Kind::Malformed, "state: trailing bytes");
  return learner;
}

void ContinualLearner::save_state(const std::string& path) const { io::write_file(path, serialize_state()); }

ContinualLearner ContinualLearner::load_state(const std::string& path) {
  return deserialize_state(io::read_file(path));
}

}  // namespace tpem::lifecycle
