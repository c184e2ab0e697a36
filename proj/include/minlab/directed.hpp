#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "minlab/common.hpp"

namespace minlab {

// Finite set family over points 0..universe-1.  Members are nonempty,
// stored sorted; duplicates are tolerated and collapsed where needed.
struct SetFamily {
  uint32_t universe = 0;
  std::vector<std::vector<uint32_t>> members;
};

SetFamily read_family(std::istream& in);
void write_family(std::ostream& out, const SetFamily& f);

struct DirectedCheck {
  bool directed = false;
  // indices into f.members of a pair violating the nested-or-disjoint law
  std::optional<std::pair<size_t, size_t>> violating;
};
DirectedCheck is_directed(const SetFamily& f);

// Containment forest of the distinct members: parent is the minimal strict
// superset.  Exists exactly when the family is directed.
struct ContainmentForest {
  struct Node {
    std::vector<uint32_t> points;
    int parent = -1;
    std::vector<int> children;  // visited in order of minimal point
  };
  std::vector<Node> nodes;
  std::vector<int> roots;
};
ContainmentForest containment_forest(const SetFamily& f);

struct ConvexOrder {
  std::vector<uint32_t> perm;  // perm[i] = point at position i
  std::vector<uint32_t> rank;  // rank[point] = position
};

// Depth-first order of the containment forest: every member of a directed
// family occupies a contiguous rank interval.  Free points go last.
ConvexOrder convex_order(const SetFamily& f);

ConvexOrder order_from_permutation(std::vector<uint32_t> perm);

// Number of maximal rank-contiguous runs of s under o.
uint32_t count_components(const ConvexOrder& o, const std::vector<uint32_t>& s);

// Concatenates per-part orders: part j+1 ranks all exceed part j ranks.
// The parts must partition 0..universe-1.
ConvexOrder concat_partition_order(
    uint32_t universe,
    const std::vector<std::pair<std::vector<uint32_t>, ConvexOrder>>& parts);

// Exhaustive |X|! probe (universe <= 8): minimal achievable value of
// max over members of count_components.
uint32_t exhaustive_min_max_components(const SetFamily& f);

// Seeded laminar family generator for the property suites.
SetFamily random_directed_family(Rng& rng, uint32_t max_universe, uint32_t max_members);

}  // namespace minlab
