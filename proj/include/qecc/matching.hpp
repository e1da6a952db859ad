#pragma once

// Exact maximum-weight matching (Edmonds' blossom algorithm, O(n^3)) and the
// minimum-weight perfect matching built on it, plus an exhaustive oracle.

#include <cstdint>
#include <utility>
#include <vector>

namespace qecc {

struct WeightedEdge {
  int u;
  int v;
  std::int64_t w;
};

/// mate[v] = partner of v or -1. With max_cardinality, the heaviest among the
/// maximum-cardinality matchings.
std::vector<int> max_weight_matching(int num_vertices, const std::vector<WeightedEdge>& edges, bool max_cardinality);

struct PerfectMatching {
  std::int64_t weight = 0;
  std::vector<std::pair<int, int>> pairs;  // (i, j) with i < j, sorted by i
};

using WeightMatrix = std::vector<std::vector<std::int64_t>>;

/// Minimum-weight perfect matching of the complete graph with symmetric
/// nonnegative weights. Throws std::invalid_argument on an odd node count.
PerfectMatching min_weight_perfect_matching(const WeightMatrix& weights);

/// Exhaustive (2m-1)!! enumeration; at most 12 nodes.
PerfectMatching matching_bruteforce(const WeightMatrix& weights);

}  // namespace qecc
