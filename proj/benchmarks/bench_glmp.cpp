#include <benchmark/benchmark.h>

#include "tpem/glmp/model.hpp"
#include "tpem/glmp/vocabulary.hpp"
#include "tpem/taskstream/corpus.hpp"

namespace {

struct Fixture {
  tpem::glmp::Vocabulary vocab;
  tpem::glmp::EncodedSample sample;

  Fixture() {
    const auto spec = tpem::stream::default_stream(0.1).front();
    const auto corpus = tpem::stream::generate_task(spec);
    const auto& s = corpus.train.front();
    for (const auto* seq : {&s.history, &s.response, &s.sketch_response})
      for (const auto& t : *seq) vocab.add(t);
    for (const auto& t : s.kb) {
      vocab.add(t.subject);
      vocab.add(t.relation);
      vocab.add(t.object);
    }
    sample = tpem::glmp::encode_sample(s, vocab, vocab.size());
  }
};

// Loss plus full backward for one dialogue, hidden = embed = range(0).
void BM_GlmpLossBackward(benchmark::State& state) {
  static const Fixture f;
  const auto h = static_cast<std::size_t>(state.range(0));
  const tpem::glmp::ModelDims dims{h, h, f.vocab.size(), 3};
  tpem::glmp::Rng rng(3);
  const auto shared = tpem::glmp::SharedWeights::random(dims, rng);
  const auto decoder = tpem::glmp::DecoderWeights::random(dims, rng);
  auto sg = tpem::glmp::SharedWeights::zeros_like(shared);
  auto dg = tpem::glmp::DecoderWeights::zeros_like(decoder);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tpem::glmp::accumulate_gradients({shared, decoder}, f.sample, &sg, &dg));
  }
}
BENCHMARK(BM_GlmpLossBackward)->Arg(32)->Arg(128)->Unit(benchmark::kMicrosecond);

}  // namespace
