#pragma once

#include <string>
#include <vector>

namespace tpem::metrics {

using Tokens = std::vector<std::string>;

struct BleuOptions {
  int max_order = 4;
  // Orders for which the hypotheses contain no n-grams at all are left out
  // of the geometric mean instead of zeroing the score.
  bool skip_unusable_orders = true;
};

struct BleuBreakdown {
  double score = 0.0;  // 0..100
  std::vector<double> precisions;  // one per order, NaN when unusable
  int orders_used = 0;
  double brevity_penalty = 0.0;
  std::size_t hypothesis_length = 0;
  std::size_t reference_length = 0;
};

// Corpus BLEU with one reference per hypothesis, no smoothing.
// Throws DataError when the two lists differ in length.
BleuBreakdown bleu_breakdown(const std::vector<Tokens>& hypotheses, const std::vector<Tokens>& references,
                             const BleuOptions& options = {});
double bleu(const std::vector<Tokens>& hypotheses, const std::vector<Tokens>& references,
            const BleuOptions& options = {});

}  // namespace tpem::metrics
