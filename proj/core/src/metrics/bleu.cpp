#include "tpem/metrics/bleu.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "tpem/error.hpp"

namespace tpem::metrics {
namespace {

using Counts = std::map<std::vector<std::string>, std::size_t>;

Counts ngrams(const Tokens& tokens, int n) {
  Counts counts;
  const auto len = static_cast<std::ptrdiff_t>(tokens.size());
  for (std::ptrdiff_t i = 0; i + n <= len; ++i) ++counts[Tokens(tokens.begin() + i, tokens.begin() + i + n)];
  return counts;
}

}  // namespace

BleuBreakdown bleu_breakdown(const std::vector<Tokens>& hypotheses, const std::vector<Tokens>& references,
                             const BleuOptions& options) {
  if (hypotheses.size() != references.size()) {
    throw DataError("bleu: " + std::to_string(hypotheses.size()) + " hypotheses but " +
                    std::to_string(references.size()) + " references");
  }
  if (options.max_order < 1) throw ConfigError("bleu: max_order must be at least 1");

  const auto orders = static_cast<std::size_t>(options.max_order);
  std::vector<std::size_t> matched(orders, 0), total(orders, 0);
  BleuBreakdown out;
  for (std::size_t s = 0; s < hypotheses.size(); ++s) {
    out.hypothesis_length += hypotheses[s].size();
    out.reference_length += references[s].size();
    for (std::size_t n = 1; n <= orders; ++n) {
      const Counts hyp = ngrams(hypotheses[s], static_cast<int>(n));
      const Counts ref = ngrams(references[s], static_cast<int>(n));
      for (const auto& [gram, count] : hyp) {
        total[n - 1] += count;
        auto it = ref.find(gram);
        if (it != ref.end()) matched[n - 1] += std::min(count, it->second);
      }
    }
  }

  double log_sum = 0.0;
  bool zero = false;
  for (std::size_t n = 0; n < orders; ++n) {
    if (total[n] == 0) {
      out.precisions.push_back(std::numeric_limits<double>::quiet_NaN());
      if (!options.skip_unusable_orders) zero = true;
      continue;
    }
    const double p = static_cast<double>(matched[n]) / static_cast<double>(total[n]);
    out.precisions.push_back(p);
    ++out.orders_used;
    if (matched[n] == 0) {
      zero = true;
    } else {
      log_sum += std::log(p);
    }
  }
  if (out.hypothesis_length == 0) {
    out.brevity_penalty = 0.0;
  } else if (out.hypothesis_length > out.reference_length) {
    out.brevity_penalty = 1.0;
  } else {
    out.brevity_penalty =
        std::exp(1.0 - static_cast<double>(out.reference_length) / static_cast<double>(out.hypothesis_length));
  }
  if (zero || out.orders_used == 0) {
    out.score = 0.0;
  } else {
    out.score = 100.0 * out.brevity_penalty * std::exp(log_sum / out.orders_used);
  }
  return out;
}

double bleu(const std::vector<Tokens>& hypotheses, const std::vector<Tokens>& references, const BleuOptions& options) {
  return bleu_breakdown(hypotheses, references, options).score;
}

}  // namespace tpem::metrics
