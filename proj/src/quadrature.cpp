#include "incomedist/quadrature.hpp"

#include <algorithm>

namespace incomedist {

std::vector<double> offset_log_partition(double lo, double hi, double first_offset, std::size_t n,
                                         const std::vector<double>& breakpoints) {
  require(hi > lo, "partition: hi must exceed lo");
  require(first_offset > 0.0 && first_offset < hi - lo, "partition: bad first offset");
  require(n >= 3, "partition: need at least 3 nodes");
  std::vector<double> nodes;
  nodes.reserve(n + breakpoints.size());
  nodes.push_back(lo);
  const double log_first = std::log(first_offset);
  const double log_span = std::log(hi - lo) - log_first;
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(n - 2);
    nodes.push_back(lo + std::exp(log_first + t * log_span));
  }
  nodes.push_back(hi);
  for (double bp : breakpoints) {
    if (bp > lo && bp < hi) nodes.push_back(bp);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

}  // namespace incomedist
