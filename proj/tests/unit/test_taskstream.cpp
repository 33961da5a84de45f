#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "support.hpp"
#include "tpem/error.hpp"
#include "tpem/taskstream/corpus.hpp"

using namespace tpem;
using namespace tpem::stream;

namespace {

TaskSpec tiny_spec() {
  TaskSpec s;
  s.name = "tiny";
  s.task_id = 3;
  s.subject_type = "shop";
  s.relations = {"hours"};
  s.lexicons = {{"shop", {"acme", "bolt", "cask", "dune"}}, {"hours", {"9to5", "10to6"}}};
  s.templates = {{"when is {shop} open", "{shop} is open {hours}"}};
  s.openers = {{"hi", "hello"}};
  s.kb_subjects = 2;
  s.n_train = 10;
  s.n_val = 3;
  s.n_test = 3;
  s.seed = 5;
  return s;
}

std::string key(const glmp::DialogueSample& s) {
  std::string k;
  for (const auto& w : s.history) k += w + " ";
  for (const auto& t : s.kb) k += t.subject + t.relation + t.object + ";";
  for (const auto& w : s.response) k += w + " ";
  return k;
}

}  // namespace

TEST_CASE("generation is deterministic, valid and split-disjoint") {
  const auto a = generate_task(tiny_spec());
  const auto b = generate_task(tiny_spec());
  CHECK(a == b);
  CHECK(a.train.size() == 10);
  CHECK(a.val.size() == 3);
  CHECK(a.test.size() == 3);
  std::set<std::string> keys;
  for (const auto* split : {&a.train, &a.val, &a.test}) {
    for (const auto& s : *split) {
      CHECK_NOTHROW(glmp::validate(s, "generated"));
      CHECK(s.task_id == 3);
      CHECK(s.kb.size() == 4);
      CHECK(s.sketch_response == glmp::derive_sketch(s));
      CHECK(keys.insert(key(s)).second);
    }
  }
  auto other = tiny_spec();
  other.seed = 6;
  CHECK_FALSE(generate_task(other) == a);
}

TEST_CASE("spec validation catches broken specs") {
  auto s = tiny_spec();
  s.kb_subjects = 5;
  try {
    validate(s);
    FAIL("expected a lexicon size error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("smaller than") != std::string::npos);
  }
  s = tiny_spec();
  s.templates[0].system = "{shop} closes {closing}";
  CHECK_THROWS_AS(validate(s), ConfigError);
  s = tiny_spec();
  s.lexicons["hours"].push_back("acme");
  CHECK_THROWS_AS(validate(s), ConfigError);
  s = tiny_spec();
  s.templates[0].user = "when are you open";
  CHECK_THROWS_AS(validate(s), ConfigError);
  s = tiny_spec();
  s.n_val = 0;
  CHECK_THROWS_AS(validate(s), ConfigError);

  s = tiny_spec();
  s.n_train = 5000;  // more dialogues than the spec can make distinct
  CHECK_THROWS_AS(generate_task(s), ConfigError);
}

TEST_CASE("specs round-trip through JSON") {
  const auto s = tiny_spec();
  CHECK(task_spec_from_json(to_json(s)) == s);
  CHECK_THROWS_AS(task_spec_from_json("{\"name\": 3}"), ConfigError);
  CHECK(template_slots("{a} and {b}") == std::vector<std::string>{"a", "b"});
}

TEST_CASE("the default stream has seven domains with disjoint entities") {
  const auto specs = default_stream(0.2);
  REQUIRE(specs.size() == 7);
  const char* names[] = {"schedule", "navigation", "weather", "restaurant", "hotel", "attraction", "camrest"};
  std::set<std::string> seen;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    CHECK(specs[i].name == names[i]);
    CHECK(specs[i].task_id == static_cast<int>(i + 1));
    const auto corpus = generate_task(specs[i]);
    for (const auto& e : corpus.entities()) CHECK(seen.insert(e).second);
  }
  CHECK(default_stream(1.0)[3].n_train == 400);
  CHECK(default_stream(1.0)[6].n_train == 50);
}

TEST_CASE("corpora round-trip through JSON lines") {
  const auto c = generate_task(tiny_spec());
  const auto text = corpus_to_jsonl(c);
  CHECK(corpus_from_jsonl(text) == c);

  const auto path = std::filesystem::temp_directory_path() / "tpem_corpus_test.jsonl";
  save_corpus(c, path.string());
  CHECK(load_corpus(path.string()) == c);
  std::filesystem::remove(path);
}

TEST_CASE("records without sketches or lexicon are completed on load") {
  const std::string line =
      R"({"history":["where","is","acme"],"kb":[["acme","shop","acme"],["acme","hours","9to5"]],)"
      R"("response":["acme","is","open","9to5"],"entities":["acme","9to5"]})";
  const auto c = corpus_from_jsonl(line + "\n");
  REQUIRE(c.train.size() == 1);
  CHECK(c.train[0].sketch_response == testing::words("@shop is open @hours"));
  CHECK(c.lexicon.at("hours") == std::vector<std::string>{"9to5"});
  CHECK(c.train[0].gold_entities == std::vector<std::string>{"9to5", "acme"});
}

TEST_CASE("malformed corpus files report the line") {
  const auto good = corpus_to_jsonl(generate_task(tiny_spec()));
  const auto bad = good + "{not json\n";
  const std::size_t lines = static_cast<std::size_t>(std::count(good.begin(), good.end(), '\n')) + 1;
  try {
    corpus_from_jsonl(bad, "file.jsonl");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("file.jsonl:" + std::to_string(lines)) != std::string::npos);
  }
  CHECK_THROWS_AS(corpus_from_jsonl("", "empty.jsonl"), DataError);
  CHECK_THROWS_AS(corpus_from_jsonl(R"({"history":["a"],"kb":[],"response":["b"],"entities":["zzz"]})"), DataError);
  CHECK_THROWS_AS(load_corpus("/nonexistent/corpus.jsonl"), DataError);
}
