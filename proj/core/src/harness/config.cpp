#include "tpem/harness/config.hpp"

#include <json.hpp>

#include <array>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "tpem/error.hpp"

namespace tpem::harness {
namespace {

using nlohmann::json;

struct ModeInfo {
  Mode mode;
  const char* name;
  const char* label;
};

constexpr std::array<ModeInfo, 7> kModes{{
    {Mode::Tpem, "tpem", "TPEM"},
    {Mode::TpemNoPrune, "tpem-no-prune", "w/o Pruning"},
    {Mode::TpemNoExpand, "tpem-no-expand", "w/o Expansion"},
    {Mode::TpemNoMask, "tpem-no-mask", "w/o Masking"},
    {Mode::NaiveFinetune, "naive-finetune", "GLMP"},
    {Mode::Reinit, "reinit", "Re-init"},
    {Mode::ReinitExpand, "reinit-expand", "Re-init-expand"},
}};

const ModeInfo& info(Mode mode) {
  for (const auto& m : kModes)
    if (m.mode == mode) return m;
  throw Error(Error::Category::Internal, "unknown mode value");
}

lifecycle::LogBase parse_log_base(const std::string& name) {
  if (name == "e" || name == "natural") return lifecycle::LogBase::Natural;
  if (name == "2") return lifecycle::LogBase::Two;
  if (name == "10") return lifecycle::LogBase::Ten;
  throw ConfigError("log_base must be one of e, 2, 10 (got '" + name + "')");
}

template <class T>
void take(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

const char* mode_name(Mode mode) { return info(mode).name; }
const char* mode_label(Mode mode) { return info(mode).label; }

Mode parse_mode(std::string_view name) {
  for (const auto& m : kModes)
    if (name == m.name) return m.mode;
  std::string known;
  for (const auto& m : kModes) known += std::string(known.empty() ? "" : ", ") + m.name;
  throw ConfigError("unknown mode '" + std::string(name) + "' (expected one of " + known + ")");
}

const std::vector<Mode>& all_modes() {
  static const std::vector<Mode> modes = [] {
    std::vector<Mode> out;
    for (const auto& m : kModes) out.push_back(m.mode);
    return out;
  }();
  return modes;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& why) { throw ConfigError("config: " + why); };
  if (name.empty()) fail("name must not be empty");
  if (tasks.empty()) fail("task list is empty");
  if (!(prune_ratio >= 0.0 && prune_ratio < 1.0)) fail("prune_ratio must be in [0, 1)");
  if (prune_rounds == 0) fail("prune_rounds must be at least 1");
  if (!(alpha >= 0.0)) fail("alpha must be non-negative");
  if (!(beta > 0.0)) fail("beta must be positive");
  parse_log_base(log_base);
  if (!(tau > 0.0)) fail("tau must be positive");
  if (hidden == 0 || embed == 0) fail("hidden and embed must be positive");
  if (!(learning_rate > 0.0)) fail("learning_rate must be positive");
  if (batch_size == 0) fail("batch_size must be positive");
  if (train_epochs == 0) fail("train_epochs must be positive");
  if (retrain_epochs > 5) fail("retrain_epochs must be at most 5");
  if (max_decode_len == 0) fail("max_decode_len must be positive");
  if (repeats == 0) fail("repeats must be positive");
  if (!(stream_scale > 0.0)) fail("stream_scale must be positive");
}

lifecycle::LifecycleOptions ExperimentConfig::lifecycle_options() const {
  lifecycle::LifecycleOptions o;
  switch (mode) {
    case Mode::Tpem:
      break;
    case Mode::TpemNoPrune:
      o.prune = false;
      break;
    case Mode::TpemNoExpand:
      o.expand = false;
      break;
    case Mode::TpemNoMask:
      o.mask = false;
      break;
    case Mode::NaiveFinetune:
      o.ownership = o.prune = o.expand = o.mask = false;
      o.inherit_decoder = true;
      break;
    case Mode::Reinit:
    case Mode::ReinitExpand:
      o.ownership = o.prune = o.expand = o.mask = false;
      break;
  }
  o.prune_ratio = prune_ratio;
  o.prune_rounds = prune_rounds;
  o.alpha = alpha;
  o.beta = beta;
  o.log_base = parse_log_base(log_base);
  o.batches_over_all_epochs = batches_over_all_epochs;
  o.tau = tau;
  o.embed = embed;
  o.base_hidden = hidden;
  o.hops = hops;
  o.batch_size = batch_size;
  o.train_epochs = train_epochs;
  o.adam.learning_rate = learning_rate;
  o.patience = patience;
  o.max_retrain_epochs = 5;
  o.max_decode_len = max_decode_len;
  o.seed = seed;
  return o;
}

ExperimentConfig parse_config(std::string_view text, const std::string& base_dir) {
  static const std::set<std::string> known{
      "name",        "mode",          "tasks",        "stream_scale", "stream_seed",   "prune_ratio",
      "prune_rounds", "alpha",        "beta",         "log_base",     "batches_over_all_epochs",
      "tau",         "hidden",        "embed",        "learning_rate", "batch_size",   "hops",
      "train_epochs", "retrain_epochs", "patience",   "max_decode_len", "eval_limit", "repeats",
      "seed",        "save_checkpoints"};
  ExperimentConfig c;
  c.base_dir = base_dir;
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    for (const auto& [key, value] : j.items()) {
      if (!known.count(key)) throw ConfigError("config: unknown key '" + key + "'");
    }
    take(j, "name", c.name);
    if (j.contains("mode")) c.mode = parse_mode(j.at("mode").get<std::string>());
    take(j, "tasks", c.tasks);
    take(j, "stream_scale", c.stream_scale);
    take(j, "stream_seed", c.stream_seed);
    take(j, "prune_ratio", c.prune_ratio);
    take(j, "prune_rounds", c.prune_rounds);
    take(j, "alpha", c.alpha);
    take(j, "beta", c.beta);
    take(j, "log_base", c.log_base);
    take(j, "batches_over_all_epochs", c.batches_over_all_epochs);
    take(j, "tau", c.tau);
    take(j, "hidden", c.hidden);
    take(j, "embed", c.embed);
    take(j, "learning_rate", c.learning_rate);
    take(j, "batch_size", c.batch_size);
    take(j, "hops", c.hops);
    take(j, "train_epochs", c.train_epochs);
    take(j, "retrain_epochs", c.retrain_epochs);
    take(j, "patience", c.patience);
    take(j, "max_decode_len", c.max_decode_len);
    take(j, "eval_limit", c.eval_limit);
    take(j, "repeats", c.repeats);
    take(j, "seed", c.seed);
    take(j, "save_checkpoints", c.save_checkpoints);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const auto parent = std::filesystem::path(path).parent_path();
  return parse_config(buffer.str(), parent.empty() ? "." : parent.string());
}

std::string to_json(const ExperimentConfig& c) {
  json j{{"name", c.name},
         {"mode", mode_name(c.mode)},
         {"tasks", c.tasks},
         {"stream_scale", c.stream_scale},
         {"stream_seed", c.stream_seed},
         {"prune_ratio", c.prune_ratio},
         {"prune_rounds", c.prune_rounds},
         {"alpha", c.alpha},
         {"beta", c.beta},
         {"log_base", c.log_base},
         {"batches_over_all_epochs", c.batches_over_all_epochs},
         {"tau", c.tau},
         {"hidden", c.hidden},
         {"embed", c.embed},
         {"learning_rate", c.learning_rate},
         {"batch_size", c.batch_size},
         {"hops", c.hops},
         {"train_epochs", c.train_epochs},
         {"retrain_epochs", c.retrain_epochs},
         {"patience", c.patience},
         {"max_decode_len", c.max_decode_len},
         {"eval_limit", c.eval_limit},
         {"repeats", c.repeats},
         {"seed", c.seed},
         {"save_checkpoints", c.save_checkpoints}};
  return j.dump(2);
}

}  // namespace tpem::harness
