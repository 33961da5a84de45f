#include "tpem/harness/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tpem/error.hpp"

namespace tpem::harness {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string row_label(const RunReport& r) {
  try {
    return mode_label(parse_mode(r.mode));
  } catch (const ConfigError&) {
    return r.mode;
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << text;
}

json expansion_json(const std::optional<lifecycle::ExpansionDecision>& e) {
  if (!e) return nullptr;
  return json{{"hidden_prev", e->hidden_prev}, {"free_fraction", e->free_fraction}, {"batches", e->batches},
              {"raw", e->raw},                 {"hidden_new", e->hidden_new}};
}

std::optional<lifecycle::ExpansionDecision> expansion_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  lifecycle::ExpansionDecision e;
  e.hidden_prev = j.at("hidden_prev").get<std::size_t>();
  e.free_fraction = j.at("free_fraction").get<double>();
  e.batches = j.at("batches").get<std::size_t>();
  e.raw = j.at("raw").get<double>();
  e.hidden_new = j.at("hidden_new").get<std::size_t>();
  return e;
}

}  // namespace

std::string to_records(const RunReport& r) {
  std::string out;
  auto line = [&](const json& j) { out += j.dump() + '\n'; };
  line({{"kind", "run"}, {"name", r.name}, {"mode", r.mode}, {"tasks", r.tasks}});
  for (std::size_t i = 0; i < r.matrix.size(); ++i) {
    for (std::size_t j = 0; j < r.matrix[i].size(); ++j) {
      const auto& m = r.matrix[i][j];
      line({{"kind", "matrix"},
            {"after", i + 1},
            {"task", j + 1},
            {"bleu", m.bleu},
            {"entity_f1", m.entity_f1},
            {"loss", m.loss},
            {"digest", m.output_digest}});
    }
  }
  if (!r.matrix.empty()) {
    const auto& final_row = r.final_metrics();
    for (std::size_t j = 0; j < final_row.size(); ++j) {
      line({{"kind", "final"},
            {"task", r.tasks.at(j)},
            {"bleu", final_row[j].bleu},
            {"entity_f1", final_row[j].entity_f1}});
    }
    line({{"kind", "average"}, {"bleu", r.average_bleu()}, {"entity_f1", r.average_entity_f1()}});
  }
  for (const auto& l : r.logs) {
    line({{"kind", "task_log"},
          {"task", l.task},
          {"name", l.name},
          {"hidden_before", l.hidden_before},
          {"hidden_after", l.hidden_after},
          {"expansion", expansion_json(l.expansion)},
          {"owned_after_train", l.owned_after_train},
          {"released", l.released},
          {"train_epochs", l.train_epochs},
          {"retrain_epochs", l.retrain_epochs},
          {"early_stopped", l.early_stopped},
          {"mask_bits_off", l.mask_bits_off},
          {"mask_bytes", l.mask_bytes},
          {"shared_parameters", l.shared_parameters},
          {"decoder_parameters", l.decoder_parameters},
          {"free_fraction_after", l.free_fraction_after},
          {"seconds", l.seconds}});
  }
  line({{"kind", "storage"},
        {"weight_bytes", r.storage.weight_bytes},
        {"mask_bytes", r.storage.mask_bytes},
        {"models", r.storage.models}});
  return out;
}

std::vector<RunReport> from_records(std::string_view text, const std::string& source) {
  std::vector<RunReport> reports;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    try {
      const json j = json::parse(line);
      const std::string kind = j.at("kind").get<std::string>();
      if (kind == "run") {
        RunReport r;
        r.name = j.at("name").get<std::string>();
        r.mode = j.at("mode").get<std::string>();
        r.tasks = j.at("tasks").get<std::vector<std::string>>();
        reports.push_back(std::move(r));
        continue;
      }
      if (reports.empty()) throw DataError("record before any run header");
      RunReport& r = reports.back();
      if (kind == "matrix") {
        const auto after = j.at("after").get<std::size_t>();
        const auto task = j.at("task").get<std::size_t>();
        if (after == 0 || task == 0 || task > after) throw DataError("matrix entry outside the lower triangle");
        if (r.matrix.size() < after) r.matrix.resize(after);
        auto& row = r.matrix[after - 1];
        if (row.size() < task) row.resize(task);
        row[task - 1] = {j.at("bleu").get<double>(), j.at("entity_f1").get<double>(), j.at("loss").get<double>(),
                         j.at("digest").get<std::uint64_t>()};
      } else if (kind == "task_log") {
        TaskRunLog l;
        l.task = j.at("task").get<std::size_t>();
        l.name = j.at("name").get<std::string>();
        l.hidden_before = j.at("hidden_before").get<std::size_t>();
        l.hidden_after = j.at("hidden_after").get<std::size_t>();
        l.expansion = expansion_from(j.at("expansion"));
        l.owned_after_train = j.at("owned_after_train").get<std::size_t>();
        l.released = j.at("released").get<std::size_t>();
        l.train_epochs = j.at("train_epochs").get<std::size_t>();
        l.retrain_epochs = j.at("retrain_epochs").get<std::size_t>();
        l.early_stopped = j.at("early_stopped").get<bool>();
        l.mask_bits_off = j.at("mask_bits_off").get<std::size_t>();
        l.mask_bytes = j.at("mask_bytes").get<std::size_t>();
        l.shared_parameters = j.at("shared_parameters").get<std::size_t>();
        l.decoder_parameters = j.at("decoder_parameters").get<std::size_t>();
        l.free_fraction_after = j.at("free_fraction_after").get<double>();
        l.seconds = j.at("seconds").get<double>();
        r.logs.push_back(std::move(l));
      } else if (kind == "storage") {
        r.storage.weight_bytes = j.at("weight_bytes").get<std::size_t>();
        r.storage.mask_bytes = j.at("mask_bytes").get<std::size_t>();
        r.storage.models = j.at("models").get<std::size_t>();
      } else if (kind != "final" && kind != "average") {
        throw DataError("unknown record kind '" + kind + "'");
      }
    } catch (const json::exception& e) {
      throw DataError(where + ": malformed record: " + e.what());
    } catch (const DataError& e) {
      throw DataError(where + ": " + e.what());
    }
  }
  for (const auto& r : reports) {
    for (std::size_t i = 0; i < r.matrix.size(); ++i) {
      if (r.matrix[i].size() != i + 1) {
        throw DataError(source + ": run '" + r.name + "' is missing evaluations after task " + std::to_string(i + 1));
      }
    }
  }
  return reports;
}

std::string render_table(const std::vector<RunReport>& reports) {
  std::string out;
  const std::vector<std::string>* current = nullptr;
  constexpr std::size_t kLabel = 16;
  constexpr std::size_t kCell = 16;
  for (const auto& r : reports) {
    if (r.matrix.empty()) continue;
    if (!current || *current != r.tasks) {
      current = &r.tasks;
      if (!out.empty()) out += '\n';
      std::string head = pad("Model", kLabel), sub = pad("", kLabel);
      for (const auto& t : r.tasks) {
        head += "| " + pad(t, kCell);
        sub += "| " + pad("BLEU   F1", kCell);
      }
      head += "| Avg.";
      sub += "| BLEU   F1";
      out += head + '\n' + sub + '\n' + std::string(head.size() + 6, '-') + '\n';
    }
    std::string row = pad(row_label(r), kLabel);
    for (const auto& m : r.final_metrics()) row += "| " + pad(pad(fixed(m.bleu, 2), 7) + fixed(100.0 * m.entity_f1, 2), kCell);
    row += "| " + pad(fixed(r.average_bleu(), 2), 7) + fixed(100.0 * r.average_entity_f1(), 2);
    out += row + '\n';
  }
  return out;
}

std::string render_series(const std::vector<RunReport>& reports) {
  std::string out = "run,mode,after_task,after_name,task,task_name,bleu,entity_f1\n";
  for (const auto& r : reports) {
    for (std::size_t i = 0; i < r.matrix.size(); ++i) {
      for (std::size_t j = 0; j < r.matrix[i].size(); ++j) {
        out += r.name + ',' + r.mode + ',' + std::to_string(i + 1) + ',' + r.tasks.at(i) + ',' + std::to_string(j + 1) +
               ',' + r.tasks.at(j) + ',' + fixed(r.matrix[i][j].bleu, 4) + ',' + fixed(r.matrix[i][j].entity_f1, 6) +
               '\n';
      }
    }
  }
  return out;
}

std::string render_shuffles(const ShuffleReport& report) {
  std::string out = "order,tasks,avg_bleu,avg_entity_f1\n";
  for (std::size_t n = 0; n < report.runs.size(); ++n) {
    std::string tasks;
    for (const auto& t : report.runs[n].tasks) tasks += (tasks.empty() ? "" : " ") + t;
    out += std::to_string(n + 1) + ',' + tasks + ',' + fixed(report.runs[n].average_bleu(), 4) + ',' +
           fixed(report.runs[n].average_entity_f1(), 6) + '\n';
  }
  out += "mean,," + fixed(report.mean_bleu(), 4) + ',' + fixed(report.mean_entity_f1(), 6) + '\n';
  return out;
}

void write_report_files(const std::vector<RunReport>& reports, const std::string& dir) {
  fs::create_directories(dir);
  std::string records;
  for (const auto& r : reports) records += to_records(r);
  write_text(fs::path(dir) / "records.jsonl", records);
  write_text(fs::path(dir) / "table.txt", render_table(reports));
  write_text(fs::path(dir) / "series.csv", render_series(reports));
}

std::vector<RunReport> regenerate_report(const std::string& dir) {
  if (!fs::is_directory(dir)) throw DataError("run directory '" + dir + "' does not exist");
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && name.rfind("records", 0) == 0 && entry.path().extension() == ".jsonl") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw DataError("no records*.jsonl files under '" + dir + "'");
  std::vector<RunReport> reports;
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    for (auto& r : from_records(buffer.str(), f.string())) reports.push_back(std::move(r));
  }
  write_text(fs::path(dir) / "table.txt", render_table(reports));
  write_text(fs::path(dir) / "series.csv", render_series(reports));
  return reports;
}

}  // namespace tpem::harness
