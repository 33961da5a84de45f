#include <doctest.h>

#include <random>

#include "support.hpp"
#include "tpem/autodiff/adam.hpp"
#include "tpem/error.hpp"
#include "tpem/glmp/model.hpp"

using namespace tpem;
using namespace tpem::glmp;

namespace {

Vocabulary vocab_for(const std::vector<DialogueSample>& samples) {
  Vocabulary v;
  for (const auto& s : samples) {
    for (const auto& t : s.history) v.add(t);
    for (const auto& k : s.kb) {
      v.add(k.subject);
      v.add(k.relation);
      v.add(k.object);
    }
    for (const auto& t : s.response) v.add(t);
    for (const auto& t : s.sketch_response) v.add(t);
  }
  return v;
}

std::vector<Tensor*> all_tensors(SharedWeights& s, DecoderWeights& d) {
  auto out = s.tensors();
  for (auto* t : d.tensors()) out.push_back(t);
  return out;
}

}  // namespace

TEST_CASE("vocabulary reserves special ids and only appends") {
  Vocabulary v;
  CHECK(v.size() == Vocabulary::kReserved);
  CHECK(v.token(Vocabulary::kEos) == "<eos>");
  const int a = v.add("hello");
  CHECK(a == static_cast<int>(Vocabulary::kReserved));
  CHECK(v.add("hello") == a);
  CHECK(v.add("@poi") == a + 1);
  CHECK(v.is_tag(a + 1));
  CHECK_FALSE(v.is_tag(a));
  CHECK(v.id_or_unk("hello", static_cast<std::size_t>(a)) == Vocabulary::kUnk);
  CHECK(v.id_or_unk("missing") == Vocabulary::kUnk);
  CHECK_THROWS_AS(v.token(999), DataError);
  CHECK_THROWS_AS(v.add(""), DataError);
}

TEST_CASE("sketches replace entities with the relation tag of their first triple") {
  const auto s = testing::toy_sample();
  CHECK(s.sketch_response == testing::words("@poi is at @address"));
  CHECK_NOTHROW(validate(s, "toy"));

  auto history_only = s;
  history_only.history.push_back("tomorrow");
  history_only.response.push_back("tomorrow");
  history_only.gold_entities.push_back("tomorrow");
  std::sort(history_only.gold_entities.begin(), history_only.gold_entities.end());
  CHECK(entity_tag(history_only, "tomorrow") == "@entity");
}

TEST_CASE("invalid samples are rejected") {
  auto s = testing::toy_sample();
  s.sketch_response.pop_back();
  CHECK_THROWS_AS(validate(s, "short sketch"), DataError);

  s = testing::toy_sample();
  s.gold_entities = {"nowhere_to_be_found"};
  CHECK_THROWS_AS(validate(s, "bad gold"), DataError);

  s = testing::toy_sample();
  s.sketch_response[1] = "was";
  CHECK_THROWS_AS(validate(s, "untagged difference"), DataError);
}

TEST_CASE("encoding lays out KB cells, history cells, then the null cell") {
  const auto s = testing::toy_sample();
  const Vocabulary v = vocab_for({s});
  const EncodedSample e = encode_sample(s, v, v.size());
  REQUIRE(e.cells.size() == s.kb.size() + s.history.size() + 1);
  CHECK(e.null_cell() == e.cells.size() - 1);
  CHECK(e.cells.back().tokens == std::vector<int>{Vocabulary::kNull});
  CHECK(e.cells[s.kb.size()].history_pos == 0);
  // "pizza_hut" is both a KB object and a history word; the KB cell wins.
  CHECK(e.copy_targets[0] == 0);
  CHECK(e.copy_targets[1] == -1);
  CHECK(e.copy_targets[3] == 1);
  CHECK(e.pointer_labels[0] == 1.0);
  CHECK(e.pointer_labels[2] == 0.0);
  CHECK(e.pointer_labels.back() == 0.0);

  Vocabulary small;
  CHECK_THROWS_AS(encode_sample(s, small, small.size(), true), DataError);
}

TEST_CASE("grow keeps every old element at its index and truncate undoes it") {
  Rng rng(5);
  const Tensor t = random_normal(3, 2, rng);
  const Tensor g = grow(t, 5, 4, rng);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 2; ++c) CHECK(g(r, c) == t(r, c));
  CHECK(truncate(g, 3, 2).bit_equal(t));
  CHECK_THROWS_AS(grow(t, 2, 2, rng), ShapeError);
  CHECK_THROWS_AS(truncate(t, 4, 2), ShapeError);
}

TEST_CASE("model gradients match finite differences") {
  const auto s = testing::toy_sample();
  const Vocabulary v = vocab_for({s});
  const EncodedSample e = encode_sample(s, v, v.size());
  for (std::size_t hops : {1, 3}) {
    Rng rng(17 + hops);
    const ModelDims dims{4, 3, v.size(), hops};
    SharedWeights shared = SharedWeights::random(dims, rng);
    DecoderWeights decoder = DecoderWeights::random(dims, rng);
    // Larger weights make every path contribute visibly.
    for (auto* t : all_tensors(shared, decoder))
      for (auto& x : t->values()) x *= 5.0;

    SharedWeights sg = SharedWeights::zeros_like(shared);
    DecoderWeights dg = DecoderWeights::zeros_like(decoder);
    accumulate_gradients({shared, decoder}, e, &sg, &dg);

    auto tensors = all_tensors(shared, decoder);
    auto grads = all_tensors(sg, dg);
    std::mt19937_64 pick(3);
    double worst = 0.0;
    for (std::size_t i = 0; i < tensors.size(); ++i) {
      for (int n = 0; n < 4; ++n) {
        const std::size_t j = std::uniform_int_distribution<std::size_t>(0, tensors[i]->size() - 1)(pick);
        const double numeric = testing::numeric_partial(*tensors[i], j, [&] { return loss({shared, decoder}, e); });
        worst = std::max(worst, testing::relative_error((*grads[i])[j], numeric, 1e-7));
      }
    }
    CHECK(worst < 1e-5);
  }
}

TEST_CASE("frozen shared weights still let the decoder learn") {
  const auto s = testing::toy_sample();
  const Vocabulary v = vocab_for({s});
  const EncodedSample e = encode_sample(s, v, v.size());
  Rng rng(2);
  const ModelDims dims{4, 3, v.size(), 2};
  const SharedWeights shared = SharedWeights::random(dims, rng);
  const DecoderWeights decoder = DecoderWeights::random(dims, rng);
  DecoderWeights dg = DecoderWeights::zeros_like(decoder);
  const double l = accumulate_gradients({shared, decoder}, e, nullptr, &dg);
  CHECK(l > 0.0);
  double norm = 0.0;
  for (const auto* t : std::as_const(dg).tensors())
    for (double x : t->values()) norm += x * x;
  CHECK(norm > 0.0);
}

TEST_CASE("a small model memorizes five dialogues and generates them back") {
  std::vector<DialogueSample> samples;
  const char* places[] = {"pizza_hut", "cafe_rio", "tacos_el_gordo", "sushi_zen", "burger_barn"};
  const char* addresses[] = {"5_main_st", "9_oak_ave", "12_elm_rd", "3_pine_ct", "77_lake_dr"};
  for (int i = 0; i < 5; ++i) {
    DialogueSample s;
    const std::string place = places[i];
    const std::string other = places[(i + 2) % 5];
    s.history = testing::words(i % 2 ? "where is " + place : "what is the address of " + place);
    s.kb = {{place, "poi", place}, {place, "address", addresses[i]}, {other, "poi", other},
            {other, "address", addresses[(i + 2) % 5]}};
    s.response = i % 2 ? testing::words(place + " is at " + addresses[i])
                       : testing::words("the address is " + std::string(addresses[i]));
    s.gold_entities = i % 2 ? std::vector<std::string>{addresses[i], place} : std::vector<std::string>{addresses[i]};
    std::sort(s.gold_entities.begin(), s.gold_entities.end());
    s.sketch_response = derive_sketch(s);
    validate(s, "memorize");
    samples.push_back(s);
  }
  const Vocabulary v = vocab_for(samples);
  std::vector<EncodedSample> encoded;
  for (const auto& s : samples) encoded.push_back(encode_sample(s, v, v.size()));

  Rng rng(1);
  const ModelDims dims{16, 16, v.size(), 2};
  SharedWeights shared = SharedWeights::random(dims, rng);
  DecoderWeights decoder = DecoderWeights::random(dims, rng);
  ad::AdamConfig cfg;
  cfg.learning_rate = 0.01;
  ad::Adam adam(cfg);
  auto tensors = all_tensors(shared, decoder);
  std::vector<ad::AdamState> states(tensors.size());

  auto all_exact = [&] {
    for (std::size_t i = 0; i < samples.size(); ++i)
      if (generate({shared, decoder}, encoded[i], v, 12) != samples[i].response) return false;
    return true;
  };
  bool learned = false;
  for (int step = 0; step < 400 && !learned; ++step) {
    SharedWeights sg = SharedWeights::zeros_like(shared);
    DecoderWeights dg = DecoderWeights::zeros_like(decoder);
    for (const auto& e : encoded) accumulate_gradients({shared, decoder}, e, &sg, &dg, 0.2);
    auto grads = all_tensors(sg, dg);
    for (std::size_t i = 0; i < tensors.size(); ++i) adam.step(*tensors[i], *grads[i], states[i]);
    if (step % 20 == 19) learned = all_exact();
  }
  if (!learned) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      std::string out;
      for (auto& w : generate({shared, decoder}, encoded[i], v, 12)) out += w + " ";
      MESSAGE(out << " | loss " << loss({shared, decoder}, encoded[i]));
    }
  }
  CHECK(learned);
}
