#pragma once

#include <string>
#include <vector>

namespace tpem::metrics {

struct EntityCounts {
  std::size_t true_positive = 0;
  std::size_t false_positive = 0;
  std::size_t false_negative = 0;

  double precision() const;
  double recall() const;
  // 1.0 when there is nothing to find and nothing was predicted.
  double f1() const;
};

// Micro-averaged over the corpus. A hypothesis predicts the set of its tokens
// found in `lexicon`; each gold set is compared as a set.
EntityCounts entity_counts(const std::vector<std::vector<std::string>>& hypotheses,
                           const std::vector<std::vector<std::string>>& gold_entities,
                           const std::vector<std::string>& lexicon);
double entity_f1(const std::vector<std::vector<std::string>>& hypotheses,
                 const std::vector<std::vector<std::string>>& gold_entities, const std::vector<std::string>& lexicon);

}  // namespace tpem::metrics
