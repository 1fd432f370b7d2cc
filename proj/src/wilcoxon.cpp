#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "clrsum/evaluation.hpp"

namespace clrsum {
namespace {

// Mean ranks of |d| scaled by two, so tied (half-integer) ranks stay integral.
std::vector<std::int64_t> doubled_abs_ranks(const std::vector<double>& d) {
  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(d[a]) < std::abs(d[b]); });
  std::vector<std::int64_t> ranks(d.size());
  std::size_t start = 0;
  while (start < order.size()) {
    std::size_t end = start + 1;
    while (end < order.size() && std::abs(d[order[end]]) == std::abs(d[order[start]])) ++end;
    // 2 * mean of 1-based positions start+1 .. end
    const auto doubled = static_cast<std::int64_t>(start + 1 + end);
    for (std::size_t p = start; p < end; ++p) ranks[order[p]] = doubled;
    start = end;
  }
  return ranks;
}

}  // namespace

WilcoxonResult wilcoxon_test(const std::vector<double>& a, const std::vector<double>& b) {
  require(a.size() == b.size(), ErrorCode::DimensionMismatch,
          "wilcoxon: paired samples differ in length");
  std::vector<double> diff;
  diff.reserve(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    require(std::isfinite(d), ErrorCode::InvalidArgument, "wilcoxon: non-finite sample");
    if (d != 0.0) diff.push_back(d);
  }
  WilcoxonResult result;
  result.nonzero = static_cast<Index>(diff.size());
  if (diff.empty()) return result;

  const std::vector<std::int64_t> ranks = doubled_abs_ranks(diff);
  std::int64_t w_plus2 = 0, total2 = 0;
  for (std::size_t k = 0; k < diff.size(); ++k) {
    total2 += ranks[k];
    if (diff[k] > 0) w_plus2 += ranks[k];
  }
  result.statistic = static_cast<double>(w_plus2) / 2.0;
  const auto n = static_cast<double>(diff.size());

  if (result.nonzero <= kWilcoxonExactLimit) {
    // counts[s]: number of sign patterns whose doubled W+ equals s.
    std::vector<double> counts(static_cast<std::size_t>(total2 + 1), 0.0);
    counts[0] = 1.0;
    std::int64_t reach = 0;
    for (std::int64_t r : ranks) {
      for (std::int64_t s = reach; s >= 0; --s) {
        counts[static_cast<std::size_t>(s + r)] += counts[static_cast<std::size_t>(s)];
      }
      reach += r;
    }
    double lower = 0.0, upper = 0.0;
    for (std::int64_t s = 0; s <= total2; ++s) {
      if (s <= w_plus2) lower += counts[static_cast<std::size_t>(s)];
      if (s >= w_plus2) upper += counts[static_cast<std::size_t>(s)];
    }
    const double patterns = std::ldexp(1.0, static_cast<int>(diff.size()));
    result.p_value = std::min(1.0, 2.0 * std::min(lower, upper) / patterns);
    result.exact = true;
    return result;
  }

  double tie_term = 0.0;
  {
    std::vector<std::int64_t> sorted = ranks;
    std::sort(sorted.begin(), sorted.end());
    std::size_t start = 0;
    while (start < sorted.size()) {
      std::size_t end = start;
      while (end < sorted.size() && sorted[end] == sorted[start]) ++end;
      const auto t = static_cast<double>(end - start);
      tie_term += t * t * t - t;
      start = end;
    }
  }
  const double mean = n * (n + 1.0) / 4.0;
  const double variance = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
  const double deviation = std::max(0.0, std::abs(result.statistic - mean) - 0.5);
  const double z = variance > 0.0 ? deviation / std::sqrt(variance) : 0.0;
  result.p_value = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  result.exact = false;
  return result;
}

double wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b) {
  return wilcoxon_test(a, b).p_value;
}

}  // namespace clrsum
