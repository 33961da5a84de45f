#include <doctest.h>

#include <filesystem>

#include "support.hpp"
#include "tpem/error.hpp"
#include "tpem/harness/config.hpp"
#include "tpem/harness/experiment.hpp"
#include "tpem/harness/report.hpp"

using namespace tpem;
using namespace tpem::harness;

namespace {

ExperimentConfig tiny_config(Mode mode) {
  ExperimentConfig c;
  c.name = "tiny";
  c.mode = mode;
  c.tasks = {"schedule", "weather", "camrest"};
  c.stream_scale = 0.1;
  c.hidden = 8;
  c.embed = 8;
  c.hops = 1;
  c.batch_size = 8;
  c.learning_rate = 5e-3;
  c.train_epochs = 2;
  c.retrain_epochs = 1;
  c.max_decode_len = 12;
  return c;
}

const std::vector<LoadedTask>& tiny_tasks() {
  static const auto tasks = load_tasks(tiny_config(Mode::Tpem));
  return tasks;
}

}  // namespace

TEST_CASE("config defaults match the reference hyperparameters") {
  const auto c = parse_config("{}");
  CHECK(c.mode == Mode::Tpem);
  CHECK(c.prune_ratio == 0.5);
  CHECK(c.alpha == 32.0);
  CHECK(c.beta == 50.0);
  CHECK(c.tau == 5e-3);
  CHECK(c.hidden == 128);
  CHECK(c.embed == 128);
  CHECK(c.learning_rate == 1e-3);
  CHECK(c.batch_size == 32);
  CHECK(c.hops == 3);
  CHECK(c.retrain_epochs <= 5);
  CHECK(c.tasks.size() == 7);
  CHECK(parse_config(to_json(c)).tasks == c.tasks);
}

TEST_CASE("config errors are reported as config errors") {
  CHECK_THROWS_AS(parse_config("{\"mode\": \"nonsense\"}"), ConfigError);
  CHECK_THROWS_AS(parse_config("{\"hiden\": 3}"), ConfigError);
  CHECK_THROWS_AS(parse_config("{\"prune_ratio\": 1.5}"), ConfigError);
  CHECK_THROWS_AS(parse_config("{\"retrain_epochs\": 9}"), ConfigError);
  CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigError);
  CHECK_THROWS_AS(parse_config("{oops"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
  CHECK_THROWS_AS(load_tasks(parse_config("{\"tasks\": [\"atlantis\"]}")), ConfigError);
}

TEST_CASE("modes map onto lifecycle switches") {
  CHECK(all_modes().size() == 7);
  for (auto m : all_modes()) CHECK(parse_mode(mode_name(m)) == m);
  ExperimentConfig c;
  c.mode = Mode::TpemNoPrune;
  CHECK_FALSE(c.lifecycle_options().prune);
  c.mode = Mode::TpemNoExpand;
  CHECK_FALSE(c.lifecycle_options().expand);
  c.mode = Mode::TpemNoMask;
  CHECK_FALSE(c.lifecycle_options().mask);
  c.mode = Mode::NaiveFinetune;
  CHECK_FALSE(c.lifecycle_options().ownership);
  CHECK(c.lifecycle_options().inherit_decoder);
  CHECK(std::string(mode_label(Mode::NaiveFinetune)) == "GLMP");
}

TEST_CASE("tpem runs fill the lower triangle and never forget") {
  const auto report = run_sequence(tiny_config(Mode::Tpem), tiny_tasks());
  REQUIRE(report.matrix.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    REQUIRE(report.matrix[i].size() == i + 1);
    for (std::size_t j = 0; j < i; ++j) CHECK(report.matrix[i][j] == report.matrix[j][j]);
  }
  CHECK(report.final_metrics() == report.matrix.back());
  CHECK(report.logs.size() == 3);
  std::size_t masks = 0;
  for (const auto& l : report.logs) {
    CHECK(l.released > 0);
    masks += l.mask_bytes;
  }
  CHECK(report.storage.mask_bytes == masks);
  CHECK(report.logs[0].mask_bytes == 0);
  CHECK(report.logs[1].mask_bytes > 0);
  CHECK(report.storage.models == 1);
}

TEST_CASE("re-init keeps one network per task") {
  const auto report = run_sequence(tiny_config(Mode::Reinit), tiny_tasks());
  CHECK(report.storage.models == 3);
  CHECK(report.storage.mask_bytes == 0);
  for (const auto& l : report.logs) CHECK(l.released == 0);

  const auto grown = run_sequence(tiny_config(Mode::ReinitExpand), tiny_tasks());
  CHECK(grown.logs[2].hidden_after >= grown.logs[1].hidden_after);
  CHECK(grown.logs[1].expansion.has_value());
  CHECK(grown.logs[1].expansion->free_fraction == 0.0);
}

TEST_CASE("naive fine-tuning and ablations complete") {
  for (auto mode : {Mode::NaiveFinetune, Mode::TpemNoPrune, Mode::TpemNoExpand, Mode::TpemNoMask}) {
    const auto report = run_sequence(tiny_config(mode), tiny_tasks());
    CHECK(report.matrix.size() == 3);
    if (mode == Mode::TpemNoPrune) CHECK(report.logs[0].released == 0);
    if (mode == Mode::TpemNoMask) CHECK(report.storage.mask_bytes == 0);
  }
}

TEST_CASE("records round-trip and render as table and series") {
  const auto report = run_sequence(tiny_config(Mode::Tpem), tiny_tasks());
  const auto back = from_records(to_records(report));
  REQUIRE(back.size() == 1);
  CHECK(back[0].matrix == report.matrix);
  CHECK(back[0].tasks == report.tasks);
  CHECK(back[0].logs.size() == report.logs.size());
  CHECK(back[0].storage.mask_bytes == report.storage.mask_bytes);
  CHECK(to_records(back[0]) == to_records(report));

  const auto table = render_table({report});
  CHECK(table.find("TPEM") != std::string::npos);
  CHECK(table.find("Avg.") != std::string::npos);
  CHECK(table.find("camrest") != std::string::npos);
  const auto series = render_series({report});
  CHECK(std::count(series.begin(), series.end(), '\n') == 1 + 6);

  CHECK_THROWS_AS(from_records("{\"kind\":\"matrix\"}\n"), DataError);
  CHECK_THROWS_AS(from_records("not json\n"), DataError);

  const auto dir = std::filesystem::temp_directory_path() / "tpem_report_test";
  std::filesystem::remove_all(dir);
  write_report_files({report}, dir.string());
  std::filesystem::remove(dir / "table.txt");
  CHECK(regenerate_report(dir.string()).size() == 1);
  CHECK(std::filesystem::exists(dir / "table.txt"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("order sampling is seeded and shuffled runs match direct runs") {
  CHECK(sample_orders(7, 5, 42) == sample_orders(7, 5, 42));
  CHECK(sample_orders(7, 5, 42) != sample_orders(7, 5, 43));
  for (const auto& order : sample_orders(7, 5, 1)) {
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6});
  }
  CHECK_THROWS_AS(sample_orders(3, 0, 1), ConfigError);

  const auto config = tiny_config(Mode::Tpem);
  const auto shuffled = run_order_shuffles(config, 1, 9);
  REQUIRE(shuffled.runs.size() == 1);
  std::vector<LoadedTask> ordered;
  for (auto idx : shuffled.orders[0]) ordered.push_back(tiny_tasks()[idx]);
  const auto direct = run_sequence(config, ordered);
  CHECK(direct.matrix == shuffled.runs[0].matrix);
  CHECK(shuffled.mean_bleu() == doctest::Approx(direct.average_bleu()));
}

TEST_CASE("failures carry the task position") {
  auto tasks = tiny_tasks();
  tasks[1].corpus.train.clear();
  try {
    run_sequence(tiny_config(Mode::Tpem), tasks);
    FAIL("expected TaskError");
  } catch (const TaskError& e) {
    CHECK(e.task_index() == 2);
    CHECK(e.category() == Error::Category::Data);
  }
}
