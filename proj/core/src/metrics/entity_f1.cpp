#include "tpem/metrics/entity_f1.hpp"

#include <set>
#include <unordered_set>

#include "tpem/error.hpp"

namespace tpem::metrics {

double EntityCounts::precision() const {
  const auto denom = true_positive + false_positive;
  return denom == 0 ? 0.0 : static_cast<double>(true_positive) / static_cast<double>(denom);
}

double EntityCounts::recall() const {
  const auto denom = true_positive + false_negative;
  return denom == 0 ? 0.0 : static_cast<double>(true_positive) / static_cast<double>(denom);
}

double EntityCounts::f1() const {
  const auto denom = 2 * true_positive + false_positive + false_negative;
  if (denom == 0) return 1.0;
  return 2.0 * static_cast<double>(true_positive) / static_cast<double>(denom);
}

EntityCounts entity_counts(const std::vector<std::vector<std::string>>& hypotheses,
                           const std::vector<std::vector<std::string>>& gold_entities,
                           const std::vector<std::string>& lexicon) {
  if (hypotheses.size() != gold_entities.size()) {
    throw DataError("entity_f1: " + std::to_string(hypotheses.size()) + " hypotheses but " +
                    std::to_string(gold_entities.size()) + " gold entity sets");
  }
  const std::unordered_set<std::string> known(lexicon.begin(), lexicon.end());
  EntityCounts counts;
  for (std::size_t s = 0; s < hypotheses.size(); ++s) {
    std::set<std::string> predicted;
    for (const auto& tok : hypotheses[s])
      if (known.count(tok)) predicted.insert(tok);
    const std::set<std::string> gold(gold_entities[s].begin(), gold_entities[s].end());
    for (const auto& e : predicted) {
      if (gold.count(e)) {
        ++counts.true_positive;
      } else {
        ++counts.false_positive;
      }
    }
    for (const auto& e : gold)
      if (!predicted.count(e)) ++counts.false_negative;
  }
  return counts;
}

double entity_f1(const std::vector<std::vector<std::string>>& hypotheses,
                 const std::vector<std::vector<std::string>>& gold_entities, const std::vector<std::string>& lexicon) {
  return entity_counts(hypotheses, gold_entities, lexicon).f1();
}

}  // namespace tpem::metrics
