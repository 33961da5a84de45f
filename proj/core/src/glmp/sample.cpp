#include "tpem/glmp/sample.hpp"

#include <algorithm>

#include "tpem/error.hpp"
#include "tpem/glmp/vocabulary.hpp"

namespace tpem::glmp {
namespace {

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

void validate(const DialogueSample& sample, const std::string& label) {
  auto fail = [&](const std::string& why) { throw DataError("sample " + label + ": " + why); };
  if (sample.task_id <= 0) fail("task id must be positive");
  if (sample.history.empty()) fail("empty history");
  if (sample.response.empty()) fail("empty response");
  if (sample.sketch_response.size() != sample.response.size()) fail("sketch and response lengths differ");
  if (!std::is_sorted(sample.gold_entities.begin(), sample.gold_entities.end()) ||
      std::adjacent_find(sample.gold_entities.begin(), sample.gold_entities.end()) != sample.gold_entities.end()) {
    fail("gold entities must be sorted and unique");
  }
  for (const auto& tok : sample.history)
    if (Vocabulary::is_tag_token(tok)) fail("history token '" + tok + "' looks like a sketch tag");
  for (std::size_t i = 0; i < sample.response.size(); ++i) {
    const auto& word = sample.response[i];
    const auto& sketch = sample.sketch_response[i];
    if (Vocabulary::is_tag_token(word)) fail("response token '" + word + "' looks like a sketch tag");
    if (word == sketch) continue;
    if (!Vocabulary::is_tag_token(sketch)) fail("position " + std::to_string(i) + " differs without a sketch tag");
    if (!std::binary_search(sample.gold_entities.begin(), sample.gold_entities.end(), word)) {
      fail("tagged word '" + word + "' is not a gold entity");
    }
  }
  for (const auto& entity : sample.gold_entities) {
    const bool in_kb = std::any_of(sample.kb.begin(), sample.kb.end(), [&](const KbTriple& t) { return t.object == entity; });
    if (!in_kb && !contains(sample.history, entity)) fail("gold entity '" + entity + "' not in KB objects or history");
  }
}

std::string entity_tag(const DialogueSample& sample, const std::string& entity) {
  for (const auto& t : sample.kb)
    if (t.object == entity) return "@" + t.relation;
  return "@entity";
}

std::vector<std::string> derive_sketch(const DialogueSample& sample) {
  std::vector<std::string> sketch;
  sketch.reserve(sample.response.size());
  for (const auto& word : sample.response) {
    if (std::binary_search(sample.gold_entities.begin(), sample.gold_entities.end(), word))
      sketch.push_back(entity_tag(sample, word));
    else
      sketch.push_back(word);
  }
  return sketch;
}

}  // namespace tpem::glmp
