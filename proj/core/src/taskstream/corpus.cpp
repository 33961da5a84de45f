#include "tpem/taskstream/corpus.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "tpem/error.hpp"

namespace tpem::stream {
namespace {

using glmp::DialogueSample;
using nlohmann::json;

json sample_json(const DialogueSample& s, const char* split) {
  json kb = json::array();
  for (const auto& t : s.kb) kb.push_back({t.subject, t.relation, t.object});
  return json{{"split", split},          {"task", s.task_id},
              {"history", s.history},    {"kb", kb},
              {"response", s.response},  {"sketch_response", s.sketch_response},
              {"entities", s.gold_entities}};
}

DialogueSample sample_from(const json& j, int default_task) {
  DialogueSample s;
  s.task_id = j.value("task", default_task);
  s.history = j.at("history").get<std::vector<std::string>>();
  for (const auto& t : j.at("kb")) {
    if (!t.is_array() || t.size() != 3) throw DataError("kb entries must be [subject, relation, object]");
    s.kb.push_back({t[0].get<std::string>(), t[1].get<std::string>(), t[2].get<std::string>()});
  }
  s.response = j.at("response").get<std::vector<std::string>>();
  auto entities = j.at("entities").get<std::vector<std::string>>();
  std::sort(entities.begin(), entities.end());
  entities.erase(std::unique(entities.begin(), entities.end()), entities.end());
  s.gold_entities = std::move(entities);
  if (j.contains("sketch_response")) {
    s.sketch_response = j.at("sketch_response").get<std::vector<std::string>>();
  } else {
    s.sketch_response = glmp::derive_sketch(s);
  }
  return s;
}

}  // namespace

std::vector<std::string> Corpus::entities() const {
  std::set<std::string> all;
  for (const auto& [type, words] : lexicon) all.insert(words.begin(), words.end());
  return {all.begin(), all.end()};
}

std::string corpus_to_jsonl(const Corpus& corpus) {
  std::string out;
  json meta{{"kind", "lexicon"}, {"name", corpus.name}, {"task", corpus.task_id}, {"entities", corpus.lexicon}};
  out += meta.dump() + '\n';
  auto emit = [&](const std::vector<DialogueSample>& samples, const char* split) {
    for (const auto& s : samples) out += sample_json(s, split).dump() + '\n';
  };
  emit(corpus.train, "train");
  emit(corpus.val, "val");
  emit(corpus.test, "test");
  return out;
}

Corpus corpus_from_jsonl(std::string_view text, const std::string& source) {
  Corpus corpus;
  bool have_lexicon = false;
  bool have_task = false;
  std::size_t records = 0;
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
      if (!j.is_object()) throw DataError("record is not a JSON object");
      if (j.value("kind", "") == "lexicon") {
        corpus.name = j.value("name", corpus.name);
        if (j.contains("task")) {
          corpus.task_id = j.at("task").get<int>();
          have_task = true;
        }
        corpus.lexicon = j.at("entities").get<std::map<std::string, std::vector<std::string>>>();
        have_lexicon = true;
        continue;
      }
      auto sample = sample_from(j, have_task ? corpus.task_id : 1);
      glmp::validate(sample, where);
      if (!have_task) {
        corpus.task_id = sample.task_id;
        have_task = true;
      }
      const std::string split = j.value("split", "train");
      if (split == "train") {
        corpus.train.push_back(std::move(sample));
      } else if (split == "val") {
        corpus.val.push_back(std::move(sample));
      } else if (split == "test") {
        corpus.test.push_back(std::move(sample));
      } else {
        throw DataError("unknown split '" + split + "'");
      }
      ++records;
    } catch (const json::exception& e) {
      throw DataError(where + ": malformed record: " + e.what());
    } catch (const DataError& e) {
      const std::string msg = e.what();
      if (msg.rfind(where, 0) == 0) throw;
      throw DataError(where + ": " + msg);
    }
  }
  if (records == 0) throw DataError(source + ": corpus has no dialogue records");

  if (!have_lexicon) {
    std::map<std::string, std::set<std::string>> types;
    for (const auto* split : {&corpus.train, &corpus.val, &corpus.test})
      for (const auto& s : *split)
        for (const auto& t : s.kb) types[t.relation].insert(t.object);
    for (auto& [type, words] : types) corpus.lexicon[type].assign(words.begin(), words.end());
  }
  return corpus;
}

void save_corpus(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write corpus '" + path + "'");
  out << corpus_to_jsonl(corpus);
  if (!out) throw DataError("failed writing corpus '" + path + "'");
}

Corpus load_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open corpus '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return corpus_from_jsonl(buffer.str(), path);
}

}  // namespace tpem::stream
