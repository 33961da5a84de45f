#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "tpem/error.hpp"
#include "tpem/taskstream/corpus.hpp"

namespace tpem::stream {
namespace {

using glmp::DialogueSample;
using glmp::KbTriple;

std::vector<std::string> split_words(const std::string& text) {
  std::vector<std::string> words;
  std::istringstream in(text);
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

template <class T>
const T& pick(const std::vector<T>& items, std::mt19937_64& rng) {
  return items[std::uniform_int_distribution<std::size_t>(0, items.size() - 1)(rng)];
}

// Expands a template word by word. A word that is exactly "{slot}" becomes
// the entity; `tags` receives "@slot" in the same position.
void fill(const std::string& text, const std::map<std::string, std::string>& values,
          std::vector<std::string>& words, std::vector<std::string>* tags, std::set<std::string>* entities) {
  for (const auto& w : split_words(text)) {
    if (w.size() > 2 && w.front() == '{' && w.back() == '}') {
      const std::string slot = w.substr(1, w.size() - 2);
      const std::string& value = values.at(slot);
      words.push_back(value);
      if (tags) tags->push_back("@" + slot);
      if (entities) entities->insert(value);
    } else {
      words.push_back(w);
      if (tags) tags->push_back(w);
    }
  }
}

DialogueSample make_sample(const TaskSpec& spec, std::mt19937_64& rng) {
  DialogueSample s;
  s.task_id = spec.task_id;

  std::vector<std::string> subjects = spec.lexicons.at(spec.subject_type);
  std::shuffle(subjects.begin(), subjects.end(), rng);
  subjects.resize(spec.kb_subjects);

  std::vector<std::map<std::string, std::string>> rows;
  for (const auto& subject : subjects) {
    std::map<std::string, std::string> row{{spec.subject_type, subject}};
    s.kb.push_back({subject, spec.subject_type, subject});
    for (const auto& rel : spec.relations) {
      const std::string& value = pick(spec.lexicons.at(rel), rng);
      row[rel] = value;
      s.kb.push_back({subject, rel, value});
    }
    rows.push_back(std::move(row));
  }

  const std::size_t max_openers = std::min<std::size_t>(2, spec.openers.size());
  const std::size_t n_openers = std::uniform_int_distribution<std::size_t>(0, max_openers)(rng);
  for (std::size_t i = 0; i < n_openers; ++i) {
    const auto& turn = pick(spec.openers, rng);
    fill(turn.user, {}, s.history, nullptr, nullptr);
    fill(turn.system, {}, s.history, nullptr, nullptr);
  }

  const auto& tmpl = pick(spec.templates, rng);
  const auto& row = pick(rows, rng);
  fill(tmpl.user, row, s.history, nullptr, nullptr);
  std::set<std::string> entities;
  fill(tmpl.system, row, s.response, &s.sketch_response, &entities);
  s.gold_entities.assign(entities.begin(), entities.end());
  return s;
}

std::string sample_key(const DialogueSample& s) {
  std::string key;
  for (const auto& w : s.history) key += w + ' ';
  key += '|';
  for (const auto& t : s.kb) key += t.subject + ' ' + t.relation + ' ' + t.object + ';';
  key += '|';
  for (const auto& w : s.response) key += w + ' ';
  return key;
}

}  // namespace

Corpus generate_task(const TaskSpec& spec) {
  validate(spec);
  Corpus corpus;
  corpus.name = spec.name;
  corpus.task_id = spec.task_id;
  for (const auto& [type, words] : spec.lexicons) {
    if (type != spec.subject_type &&
        std::find(spec.relations.begin(), spec.relations.end(), type) == spec.relations.end()) {
      continue;
    }
    auto sorted = words;
    std::sort(sorted.begin(), sorted.end());
    corpus.lexicon[type] = sorted;
  }

  std::mt19937_64 rng(spec.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(spec.task_id));
  std::set<std::string> seen;
  const std::size_t total = spec.n_train + spec.n_val + spec.n_test;
  const std::size_t max_attempts = total * 50 + 1000;
  std::vector<DialogueSample> samples;
  samples.reserve(total);
  for (std::size_t attempt = 0; samples.size() < total; ++attempt) {
    if (attempt >= max_attempts) {
      throw ConfigError("task spec '" + spec.name + "': only " + std::to_string(samples.size()) + " distinct dialogues after " +
                        std::to_string(attempt) + " attempts, " + std::to_string(total) + " requested");
    }
    auto sample = make_sample(spec, rng);
    if (!seen.insert(sample_key(sample)).second) continue;
    glmp::validate(sample, spec.name + " sample " + std::to_string(samples.size()));
    samples.push_back(std::move(sample));
  }

  auto it = samples.begin();
  corpus.train.assign(std::make_move_iterator(it), std::make_move_iterator(it + spec.n_train));
  it += spec.n_train;
  corpus.val.assign(std::make_move_iterator(it), std::make_move_iterator(it + spec.n_val));
  it += spec.n_val;
  corpus.test.assign(std::make_move_iterator(it), std::make_move_iterator(samples.end()));
  return corpus;
}

}  // namespace tpem::stream
