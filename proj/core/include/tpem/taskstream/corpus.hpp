#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tpem/glmp/sample.hpp"
#include "tpem/taskstream/task_spec.hpp"

namespace tpem::stream {

// Train/validation/test dialogues of one task plus its entity lexicon
// (entity type -> entities of that type).
struct Corpus {
  std::string name;
  int task_id = 1;
  std::vector<glmp::DialogueSample> train;
  std::vector<glmp::DialogueSample> val;
  std::vector<glmp::DialogueSample> test;
  std::map<std::string, std::vector<std::string>> lexicon;

  std::vector<std::string> entities() const;  // sorted union of the lexicon
  std::size_t size() const { return train.size() + val.size() + test.size(); }
  bool operator==(const Corpus&) const = default;
};

// Deterministic in the spec (including its seed). Samples are unique across
// all three splits; throws ConfigError if the spec cannot produce enough
// distinct dialogues.
Corpus generate_task(const TaskSpec& spec);

// JSON-lines: an optional leading {"kind":"lexicon",...} record followed by
// one {"split":...,"history":[...],"kb":[[s,r,o],...],"response":[...],
// "sketch_response":[...],"entities":[...]} record per dialogue.
// A missing sketch_response is derived from the entities; a missing lexicon
// record is rebuilt from KB relations.
std::string corpus_to_jsonl(const Corpus& corpus);
Corpus corpus_from_jsonl(std::string_view text, const std::string& source = "<memory>");

void save_corpus(const Corpus& corpus, const std::string& path);
Corpus load_corpus(const std::string& path);

// The seven-domain stream used by the experiments: schedule, navigation,
// weather, restaurant, hotel, attraction, camrest. Entity lexicons are
// disjoint across domains. `scale` multiplies every split size (minimum 4).
std::vector<TaskSpec> default_stream(double scale = 1.0, std::uint64_t seed = 1);

}  // namespace tpem::stream
