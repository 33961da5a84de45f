// tpem: command line front end for running and inspecting continual
// learning experiments.
//
//   tpem run CONFIG [--out DIR] [--mode MODE | --all-modes]
//   tpem shuffle-run CONFIG N_ORDERS SEED [--out DIR]
//   tpem eval STATE TASK CORPUS [--split test|val|train] [--limit N]
//   tpem report RUN_DIR
//   tpem gen-tasks SPEC|default OUT_DIR [--scale S] [--seed N]
//
// Runs land in --out, else $TPEM_RUN_ROOT/<name>/<mode>, else ./runs/...

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "tpem/error.hpp"
#include "tpem/harness/config.hpp"
#include "tpem/harness/experiment.hpp"
#include "tpem/harness/report.hpp"
#include "tpem/lifecycle/learner.hpp"
#include "tpem/taskstream/corpus.hpp"

namespace fs = std::filesystem;
using namespace tpem;

namespace {

fs::path run_root() {
  if (const char* env = std::getenv("TPEM_RUN_ROOT"); env && *env) return env;
  return "runs";
}

harness::RunOptions run_options(const std::string& dir, bool quiet) {
  harness::RunOptions o;
  o.output_dir = dir;
  if (!quiet) o.progress = [](const std::string& m) { std::cerr << "[tpem] " << m << '\n'; };
  return o;
}

std::vector<harness::RunReport> run_config(harness::ExperimentConfig config, const fs::path& dir, bool quiet) {
  const auto tasks = harness::load_tasks(config);
  std::vector<harness::RunReport> reports;
  for (std::size_t r = 0; r < config.repeats; ++r) {
    harness::ExperimentConfig c = config;
    c.seed = config.seed + r;
    fs::path out = dir;
    if (config.repeats > 1) {
      c.name = config.name + "-repeat" + std::to_string(r + 1);
      out /= "repeat_" + std::to_string(r + 1);
    }
    if (!quiet) std::cerr << "[tpem] " << c.name << " (" << harness::mode_name(c.mode) << ")\n";
    reports.push_back(harness::run_sequence(c, tasks, run_options(out.string(), quiet)));
    harness::write_report_files({reports.back()}, out.string());
  }
  return reports;
}

int cmd_run(const std::string& config_path, const std::string& out, const std::string& mode, bool all_modes,
            bool quiet) {
  auto config = harness::load_config(config_path);
  if (!mode.empty()) config.mode = harness::parse_mode(mode);
  const fs::path base = out.empty() ? run_root() / config.name : fs::path(out);
  std::vector<harness::RunReport> reports;
  if (all_modes) {
    for (auto m : harness::all_modes()) {
      config.mode = m;
      for (auto& r : run_config(config, base / harness::mode_name(m), quiet)) reports.push_back(std::move(r));
    }
  } else {
    const fs::path dir = out.empty() ? base / harness::mode_name(config.mode) : base;
    reports = run_config(config, dir, quiet);
  }
  const auto summary = harness::regenerate_report(base.string());
  std::cout << harness::render_table(summary);
  std::cout << "results: " << base.string() << '\n';
  return 0;
}

int cmd_shuffle(const std::string& config_path, std::size_t n_orders, std::uint64_t seed, const std::string& out,
                bool quiet) {
  const auto config = harness::load_config(config_path);
  const fs::path dir =
      out.empty() ? run_root() / config.name / (std::string(harness::mode_name(config.mode)) + "-shuffles") : fs::path(out);
  const auto report = harness::run_order_shuffles(config, n_orders, seed, run_options(dir.string(), quiet));
  for (std::size_t n = 0; n < report.runs.size(); ++n) {
    harness::write_report_files({report.runs[n]}, (dir / ("order_" + std::to_string(n + 1))).string());
  }
  std::ofstream(dir / "shuffles.csv") << harness::render_shuffles(report);
  std::cout << harness::render_shuffles(report);
  std::cout << "results: " << dir.string() << '\n';
  return 0;
}

int cmd_eval(const std::string& state_path, int task, const std::string& corpus_path, const std::string& split,
             std::size_t limit, std::size_t show) {
  const auto learner = lifecycle::ContinualLearner::load_state(state_path);
  if (task < 1 || static_cast<std::size_t>(task) > learner.task_count()) {
    throw Error(Error::Category::Usage, "eval: state holds tasks 1.." + std::to_string(learner.task_count()) +
                                            ", asked for task " + std::to_string(task));
  }
  auto corpus = stream::load_corpus(corpus_path);
  if (split == "val") {
    corpus.test = corpus.val;
  } else if (split == "train") {
    corpus.test = corpus.train;
  } else if (split != "test") {
    throw Error(Error::Category::Usage, "eval: unknown split '" + split + "'");
  }
  const auto label = static_cast<lifecycle::TaskLabel>(task);
  const auto model = learner.reconstruct_for_inference(label);
  const auto m = harness::evaluate_task(model, learner.vocabulary(), corpus, learner.options().max_decode_len, limit);
  std::cout << "task " << task << " on " << corpus.name << " (" << split << "): BLEU " << m.bleu << ", entity F1 "
            << m.entity_f1 << ", loss " << m.loss << '\n';
  if (show > 0) {
    std::span<const glmp::DialogueSample> shown(corpus.test);
    shown = shown.first(std::min(show, shown.size()));
    const auto outputs = lifecycle::evaluate(model, learner.vocabulary(), shown, learner.options().max_decode_len).outputs;
    auto join = [](const std::vector<std::string>& words) {
      std::string s;
      for (const auto& w : words) s += (s.empty() ? "" : " ") + w;
      return s;
    };
    for (std::size_t i = 0; i < shown.size(); ++i) {
      std::cout << "  ref: " << join(shown[i].response) << "\n  hyp: " << join(outputs[i]) << '\n';
    }
  }
  if (split == "val" && limit == 0) {
    const auto eval = lifecycle::evaluate(model, learner.vocabulary(), corpus.val, learner.options().max_decode_len);
    const bool match = lifecycle::Fingerprint{eval.loss, eval.outputs}.matches(learner.checkpoint(label).fingerprint);
    std::cout << "fingerprint: " << (match ? "match" : "MISMATCH") << '\n';
    if (!match) return static_cast<int>(Error::Category::Checkpoint);
  }
  return 0;
}

int cmd_report(const std::string& dir) {
  const auto reports = harness::regenerate_report(dir);
  std::cout << harness::render_table(reports);
  std::cout << "wrote " << (fs::path(dir) / "table.txt").string() << " and " << (fs::path(dir) / "series.csv").string()
            << '\n';
  return 0;
}

int cmd_gen(const std::string& spec, const std::string& out, double scale, std::uint64_t seed) {
  const auto specs = spec == "default" ? stream::default_stream(scale, seed) : stream::load_task_specs(spec);
  fs::create_directories(out);
  for (const auto& s : specs) {
    const auto corpus = stream::generate_task(s);
    const auto path = fs::path(out) / (s.name + ".jsonl");
    stream::save_corpus(corpus, path.string());
    std::cout << path.string() << ": " << corpus.train.size() << " train, " << corpus.val.size() << " val, "
              << corpus.test.size() << " test\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continual learning of task-oriented dialogue with pruning, expansion and masking"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Suppress progress messages");

  std::string config_path, out, mode, state_path, corpus_path, split = "test", dir, spec;
  bool all_modes = false;
  std::size_t n_orders = 5, limit = 0, show = 0;
  std::uint64_t seed = 1;
  int task = 1;
  double scale = 1.0;

  auto* run = app.add_subcommand("run", "Train a task sequence and write its report");
  run->add_option("config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "Output directory");
  auto* mode_opt = run->add_option("--mode", mode, "Override the config's mode");
  run->add_flag("--all-modes", all_modes, "Run every mode")->excludes(mode_opt);

  auto* shuffle = app.add_subcommand("shuffle-run", "Run the sequence under several random task orders");
  shuffle->add_option("config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  shuffle->add_option("n_orders", n_orders, "Number of orders")->required()->check(CLI::PositiveNumber);
  shuffle->add_option("seed", seed, "Shuffle seed")->required();
  shuffle->add_option("--out", out, "Output directory");

  auto* eval = app.add_subcommand("eval", "Evaluate one task of a saved state on a corpus");
  eval->add_option("state", state_path, "Learner state file (state.bin)")->required()->check(CLI::ExistingFile);
  eval->add_option("task", task, "Task number within the state")->required();
  eval->add_option("corpus", corpus_path, "Corpus file (JSONL)")->required()->check(CLI::ExistingFile);
  eval->add_option("--split", split, "test, val or train");
  eval->add_option("--limit", limit, "Evaluate at most this many samples");
  eval->add_option("--show", show, "Print this many reference/hypothesis pairs");

  auto* report = app.add_subcommand("report", "Rebuild table.txt and series.csv from a run directory");
  report->add_option("run_dir", dir, "Run directory")->required()->check(CLI::ExistingDirectory);

  auto* gen = app.add_subcommand("gen-tasks", "Generate corpus files from task specs");
  gen->add_option("spec", spec, "Spec file, or 'default' for the built-in stream")->required();
  gen->add_option("out_dir", out, "Output directory")->required();
  gen->add_option("--scale", scale, "Split size multiplier (default stream only)");
  gen->add_option("--seed", seed, "Generation seed (default stream only)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(Error::Category::Usage);
  }

  try {
    if (*run) return cmd_run(config_path, out, mode, all_modes, quiet);
    if (*shuffle) return cmd_shuffle(config_path, n_orders, seed, out, quiet);
    if (*eval) return cmd_eval(state_path, task, corpus_path, split, limit, show);
    if (*report) return cmd_report(dir);
    if (*gen) return cmd_gen(spec, out, scale, seed);
  } catch (const Error& e) {
    std::cerr << "tpem: " << e.what() << '\n';
    return static_cast<int>(e.category());
  } catch (const std::exception& e) {
    std::cerr << "tpem: internal error: " << e.what() << '\n';
    return static_cast<int>(Error::Category::Internal);
  }
  return 0;
}
