#include "tpem/harness/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <random>

#include "tpem/error.hpp"
#include "tpem/metrics/bleu.hpp"
#include "tpem/metrics/entity_f1.hpp"

namespace tpem::harness {
namespace {

namespace fs = std::filesystem;
using lifecycle::ContinualLearner;
using lifecycle::InferenceModel;

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::uint64_t digest(const std::vector<std::vector<std::string>>& outputs) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](unsigned char c) {
    h ^= c;
    h *= 0x100000001b3ULL;
  };
  for (const auto& sentence : outputs) {
    for (const auto& tok : sentence) {
      for (unsigned char c : tok) mix(c);
      mix(' ');
    }
    mix('\n');
  }
  return h;
}

double mean_of(const std::vector<TaskMetrics>& row, double TaskMetrics::*field) {
  if (row.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& m : row) sum += m.*field;
  return sum / static_cast<double>(row.size());
}

void say(const RunOptions& options, const std::string& message) {
  if (options.progress) options.progress(message);
}

std::size_t decoder_parameters(const glmp::DecoderWeights& d) { return glmp::parameter_count(d.tensors()); }

std::string task_dir(const std::string& root, std::size_t index) {
  return (fs::path(root) / ("task_" + std::to_string(index))).string();
}

// TPEM, its ablations and naive fine-tuning share one learner across tasks.
RunReport run_shared(const ExperimentConfig& config, const std::vector<LoadedTask>& tasks, const RunOptions& options,
                     RunReport report) {
  const auto opts = config.lifecycle_options();
  ContinualLearner learner(opts);
  const bool prune = opts.ownership && opts.prune && config.prune_ratio > 0.0;
  // Per-round ratio such that the rounds together release the configured fraction.
  const double round_ratio = 1.0 - std::pow(1.0 - config.prune_ratio, 1.0 / static_cast<double>(config.prune_rounds));

  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto& corpus = tasks[i].corpus;
    TaskRunLog log;
    log.task = i + 1;
    log.name = tasks[i].name;
    const auto start = std::chrono::steady_clock::now();
    try {
      log.hidden_before = learner.hidden();
      const auto k = learner.begin_task(corpus.train);
      log.expansion = learner.last_expansion();
      log.hidden_after = learner.hidden();
      say(options, tasks[i].name + ": training (hidden " + std::to_string(log.hidden_after) + ")");

      const auto trained = learner.train_task(k, corpus.train, corpus.val, config.train_epochs);
      log.train_epochs = trained.epochs.size();
      log.early_stopped = trained.early_stopped;
      if (!trained.epochs.empty()) log.mask_bits_off = trained.epochs.back().mask_bits_off;
      if (opts.ownership) log.owned_after_train = learner.owners().count(k);

      if (prune) {
        for (std::size_t r = 0; r < config.prune_rounds; ++r) {
          log.released += learner.prune(k, round_ratio).released();
          if (config.retrain_epochs > 0) {
            log.retrain_epochs += learner.retrain(k, corpus.train, corpus.val, config.retrain_epochs).epochs.size();
          }
        }
      }
      const auto& checkpoint = learner.finalize_task(k, corpus.val);
      log.mask_bytes = checkpoint.mask_bytes();
      log.shared_parameters = glmp::parameter_count(learner.shared().tensors());
      log.decoder_parameters = decoder_parameters(checkpoint.decoder);
      log.free_fraction_after = opts.ownership ? learner.free_fraction() : 0.0;

      std::vector<TaskMetrics> row;
      for (std::size_t j = 0; j <= i; ++j) {
        const InferenceModel model = learner.reconstruct_for_inference(static_cast<lifecycle::TaskLabel>(j + 1));
        row.push_back(evaluate_task(model, learner.vocabulary(), tasks[j].corpus, config.max_decode_len,
                                    config.eval_limit));
      }
      report.matrix.push_back(std::move(row));

      if (!options.output_dir.empty() && config.save_checkpoints) {
        fs::create_directories(options.output_dir);
        lifecycle::save_checkpoint(checkpoint, (fs::path(options.output_dir) / ("task_" + std::to_string(k) + ".ckpt")).string());
        learner.save_state((fs::path(options.output_dir) / "state.bin").string());
      }
    } catch (const TaskError&) {
      throw;
    } catch (const Error& e) {
      throw TaskError(static_cast<int>(i + 1), e);
    }
    log.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    say(options, tasks[i].name + ": done in " + std::to_string(log.seconds) + " s, BLEU " +
                     std::to_string(report.matrix.back().back().bleu) + ", entity F1 " +
                     std::to_string(report.matrix.back().back().entity_f1));
    report.logs.push_back(std::move(log));
  }

  const auto& last = report.logs.back();
  std::size_t decoders = 0;
  if (opts.inherit_decoder) {
    decoders = last.decoder_parameters;
  } else {
    for (const auto& l : report.logs) decoders += l.decoder_parameters;
  }
  report.storage.weight_bytes = 8 * (last.shared_parameters + decoders);
  for (const auto& l : report.logs) report.storage.mask_bytes += l.mask_bytes;
  report.storage.models = 1;
  return report;
}

// Re-init baselines: a fresh network per task, each stored separately.
RunReport run_reinit(const ExperimentConfig& config, const std::vector<LoadedTask>& tasks, const RunOptions& options,
                     RunReport report) {
  const bool expand = config.mode == Mode::ReinitExpand;
  std::size_t hidden = config.hidden;
  std::vector<TaskMetrics> own;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto& corpus = tasks[i].corpus;
    TaskRunLog log;
    log.task = i + 1;
    log.name = tasks[i].name;
    const auto start = std::chrono::steady_clock::now();
    try {
      auto opts = config.lifecycle_options();
      opts.seed = config.seed + i;
      ContinualLearner learner(opts);
      log.hidden_before = hidden;
      if (expand && i > 0) {
        // Every earlier unit counts as used, so Eq. 1 runs with F = 0.
        lifecycle::ExpansionParams params;
        params.alpha = opts.alpha;
        params.beta = opts.beta;
        params.hidden_prev = hidden;
        params.prune_ratio_prev = config.prune_ratio;
        params.free_fraction = 0.0;
        params.batches = lifecycle::batches_per_epoch(corpus.train.size(), config.batch_size);
        if (config.batches_over_all_epochs) params.batches *= config.train_epochs;
        params.log_base = opts.log_base;
        log.expansion = lifecycle::compute_new_hidden(params);
        hidden = log.expansion->hidden_new;
      }
      const auto k = learner.begin_task(corpus.train, hidden);
      log.hidden_after = learner.hidden();
      say(options, tasks[i].name + ": training fresh model (hidden " + std::to_string(hidden) + ")");
      const auto trained = learner.train_task(k, corpus.train, corpus.val, config.train_epochs);
      log.train_epochs = trained.epochs.size();
      log.early_stopped = trained.early_stopped;
      const auto& checkpoint = learner.finalize_task(k, corpus.val);
      log.shared_parameters = glmp::parameter_count(learner.shared().tensors());
      log.decoder_parameters = decoder_parameters(checkpoint.decoder);

      own.push_back(evaluate_task(learner.reconstruct_for_inference(k), learner.vocabulary(), corpus,
                                  config.max_decode_len, config.eval_limit));
      // Stored models never change after their task, so earlier columns repeat.
      report.matrix.push_back(own);

      if (!options.output_dir.empty() && config.save_checkpoints) {
        const auto dir = task_dir(options.output_dir, i + 1);
        fs::create_directories(dir);
        lifecycle::save_checkpoint(checkpoint, (fs::path(dir) / "task_1.ckpt").string());
        learner.save_state((fs::path(dir) / "state.bin").string());
      }
    } catch (const TaskError&) {
      throw;
    } catch (const Error& e) {
      throw TaskError(static_cast<int>(i + 1), e);
    }
    log.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    say(options, tasks[i].name + ": done in " + std::to_string(log.seconds) + " s, BLEU " +
                     std::to_string(own.back().bleu) + ", entity F1 " + std::to_string(own.back().entity_f1));
    report.storage.weight_bytes += 8 * (log.shared_parameters + log.decoder_parameters);
    report.logs.push_back(std::move(log));
  }
  report.storage.models = tasks.size();
  return report;
}

}  // namespace

const std::vector<TaskMetrics>& RunReport::final_metrics() const {
  if (matrix.empty()) throw Error(Error::Category::Usage, "run report has no evaluations");
  return matrix.back();
}

double RunReport::average_bleu() const { return mean_of(final_metrics(), &TaskMetrics::bleu); }
double RunReport::average_entity_f1() const { return mean_of(final_metrics(), &TaskMetrics::entity_f1); }

std::vector<LoadedTask> load_tasks(const ExperimentConfig& config) {
  std::vector<LoadedTask> out;
  std::optional<std::vector<stream::TaskSpec>> defaults;
  for (const auto& entry : config.tasks) {
    const fs::path path = fs::path(entry).is_absolute() ? fs::path(entry) : fs::path(config.base_dir) / entry;
    if (ends_with(entry, ".jsonl")) {
      auto corpus = stream::load_corpus(path.string());
      out.push_back({corpus.name.empty() ? path.stem().string() : corpus.name, std::move(corpus)});
    } else if (ends_with(entry, ".json")) {
      for (const auto& spec : stream::load_task_specs(path.string())) out.push_back({spec.name, stream::generate_task(spec)});
    } else {
      if (!defaults) defaults = stream::default_stream(config.stream_scale, config.stream_seed);
      auto it = std::find_if(defaults->begin(), defaults->end(), [&](const auto& s) { return s.name == entry; });
      if (it == defaults->end()) throw ConfigError("unknown task '" + entry + "' (not a default domain or a file)");
      out.push_back({entry, stream::generate_task(*it)});
    }
  }
  return out;
}

TaskMetrics evaluate_task(const InferenceModel& model, const glmp::Vocabulary& vocab, const stream::Corpus& corpus,
                          std::size_t max_decode_len, std::size_t limit) {
  std::span<const glmp::DialogueSample> samples(corpus.test);
  if (limit > 0 && limit < samples.size()) samples = samples.first(limit);
  const auto eval = lifecycle::evaluate(model, vocab, samples, max_decode_len);
  std::vector<metrics::Tokens> refs;
  std::vector<std::vector<std::string>> gold;
  for (const auto& s : samples) {
    refs.push_back(s.response);
    gold.push_back(s.gold_entities);
  }
  TaskMetrics m;
  m.loss = eval.loss;
  m.bleu = metrics::bleu(eval.outputs, refs);
  m.entity_f1 = metrics::entity_f1(eval.outputs, gold, corpus.entities());
  m.output_digest = digest(eval.outputs);
  return m;
}

RunReport run_sequence(const ExperimentConfig& config, const std::vector<LoadedTask>& tasks, const RunOptions& options) {
  config.validate();
  if (tasks.empty()) throw ConfigError("run_sequence: no tasks");
  RunReport report;
  report.name = config.name;
  report.mode = mode_name(config.mode);
  for (const auto& t : tasks) report.tasks.push_back(t.name);
  if (config.mode == Mode::Reinit || config.mode == Mode::ReinitExpand) {
    return run_reinit(config, tasks, options, std::move(report));
  }
  return run_shared(config, tasks, options, std::move(report));
}

RunReport run_sequence(const ExperimentConfig& config, const RunOptions& options) {
  return run_sequence(config, load_tasks(config), options);
}

std::vector<std::vector<std::size_t>> sample_orders(std::size_t tasks, std::size_t n_orders, std::uint64_t seed) {
  if (n_orders == 0) throw ConfigError("sample_orders: need at least one order");
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::size_t>> orders;
  for (std::size_t n = 0; n < n_orders; ++n) {
    std::vector<std::size_t> order(tasks);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    orders.push_back(std::move(order));
  }
  return orders;
}

double ShuffleReport::mean_bleu() const {
  double sum = 0.0;
  for (const auto& r : runs) sum += r.average_bleu();
  return runs.empty() ? 0.0 : sum / static_cast<double>(runs.size());
}

double ShuffleReport::mean_entity_f1() const {
  double sum = 0.0;
  for (const auto& r : runs) sum += r.average_entity_f1();
  return runs.empty() ? 0.0 : sum / static_cast<double>(runs.size());
}

ShuffleReport run_order_shuffles(const ExperimentConfig& config, std::size_t n_orders, std::uint64_t seed,
                                 const RunOptions& options) {
  const auto tasks = load_tasks(config);
  ShuffleReport out;
  out.orders = sample_orders(tasks.size(), n_orders, seed);
  for (std::size_t n = 0; n < out.orders.size(); ++n) {
    std::vector<LoadedTask> ordered;
    ExperimentConfig c = config;
    c.tasks.clear();
    for (std::size_t idx : out.orders[n]) {
      ordered.push_back(tasks[idx]);
      c.tasks.push_back(tasks[idx].name);
    }
    c.name = config.name + "-order" + std::to_string(n + 1);
    RunOptions o = options;
    if (!o.output_dir.empty()) o.output_dir = (fs::path(options.output_dir) / ("order_" + std::to_string(n + 1))).string();
    say(options, "order " + std::to_string(n + 1) + " of " + std::to_string(out.orders.size()));
    out.runs.push_back(run_sequence(c, ordered, o));
  }
  return out;
}

}  // namespace tpem::harness
