#include "minlab/directed.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

namespace minlab {

SetFamily read_family(std::istream& in) {
  SetFamily f;
  std::string line;
  if (!std::getline(in, line)) throw ParseError(0, "missing universe size");
  f.universe = static_cast<uint32_t>(std::stoul(line));
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::vector<uint32_t> member;
    uint32_t x;
    while (ls >> x) {
      if (x >= f.universe) throw ParseError(lineno, "point out of range");
      member.push_back(x);
    }
    if (member.empty()) continue;
    std::sort(member.begin(), member.end());
    member.erase(std::unique(member.begin(), member.end()), member.end());
    f.members.push_back(std::move(member));
  }
  return f;
}

void write_family(std::ostream& out, const SetFamily& f) {
  out << f.universe << "\n";
  for (const auto& m : f.members) {
    for (size_t i = 0; i < m.size(); ++i) out << (i ? " " : "") << m[i];
    out << "\n";
  }
}

namespace {

bool trichotomy_ok(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  // a, b sorted: nested or disjoint?
  size_t common = 0;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++common;
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return common == 0 || common == a.size() || common == b.size();
}

struct ForestBuild {
  bool ok = false;
  ContainmentForest forest;
  std::pair<size_t, size_t> violating;  // indices into the deduped list
  std::vector<size_t> original_index;   // deduped -> first original index
};

// Incremental laminar check over size-descending members: all points of the
// next member must share the same innermost accepted set, which then becomes
// its parent.
ForestBuild build_forest(const SetFamily& f) {
  ForestBuild out;
  std::vector<size_t> order;
  std::map<std::vector<uint32_t>, size_t> first_seen;
  for (size_t i = 0; i < f.members.size(); ++i) {
    if (f.members[i].empty()) continue;
    if (first_seen.emplace(f.members[i], i).second) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](size_t x, size_t y) {
    if (f.members[x].size() != f.members[y].size())
      return f.members[x].size() > f.members[y].size();
    return f.members[x] < f.members[y];
  });
  std::vector<int> innermost(f.universe, -1);
  for (size_t oi : order) {
    const auto& pts = f.members[oi];
    int parent = innermost[pts[0]];
    for (uint32_t x : pts) {
      if (innermost[x] != parent) {
        // pick the genuinely violating prior set
        int other = innermost[x];
        for (int cand : {parent, other}) {
          if (cand >= 0 && !trichotomy_ok(pts, out.forest.nodes[cand].points)) {
            out.violating = {out.original_index[cand], oi};
            return out;
          }
        }
        throw Diagnostic("is_directed: innermost mismatch without a violating pair");
      }
    }
    int id = static_cast<int>(out.forest.nodes.size());
    out.forest.nodes.push_back({pts, parent, {}});
    out.original_index.push_back(oi);
    if (parent >= 0)
      out.forest.nodes[parent].children.push_back(id);
    else
      out.forest.roots.push_back(id);
    for (uint32_t x : pts) innermost[x] = id;
  }
  auto by_min_point = [&](int x, int y) {
    return out.forest.nodes[x].points[0] < out.forest.nodes[y].points[0];
  };
  for (auto& n : out.forest.nodes) std::sort(n.children.begin(), n.children.end(), by_min_point);
  std::sort(out.forest.roots.begin(), out.forest.roots.end(), by_min_point);
  out.ok = true;
  return out;
}

}  // namespace

DirectedCheck is_directed(const SetFamily& f) {
  ForestBuild b = build_forest(f);
  if (b.ok) return {true, std::nullopt};
  DirectedCheck c;
  c.directed = false;
  c.violating = b.violating;
  return c;
}

ContainmentForest containment_forest(const SetFamily& f) {
  ForestBuild b = build_forest(f);
  if (!b.ok) throw std::invalid_argument("containment_forest: family is not directed");
  return std::move(b.forest);
}

ConvexOrder order_from_permutation(std::vector<uint32_t> perm) {
  ConvexOrder o;
  o.rank.assign(perm.size(), 0);
  for (uint32_t i = 0; i < perm.size(); ++i) o.rank[perm[i]] = i;
  o.perm = std::move(perm);
  return o;
}

ConvexOrder convex_order(const SetFamily& f) {
  ContainmentForest forest = containment_forest(f);
  std::vector<uint32_t> perm;
  perm.reserve(f.universe);
  std::vector<bool> placed(f.universe, false);
  // children first, then the node's direct points in ascending id order
  auto emit = [&](auto&& self, int id) -> void {
    const auto& node = forest.nodes[id];
    for (int c : node.children) self(self, c);
    for (uint32_t x : node.points)
      if (!placed[x]) {
        placed[x] = true;
        perm.push_back(x);
      }
  };
  for (int r : forest.roots) emit(emit, r);
  for (uint32_t x = 0; x < f.universe; ++x)
    if (!placed[x]) perm.push_back(x);
  return order_from_permutation(std::move(perm));
}

uint32_t count_components(const ConvexOrder& o, const std::vector<uint32_t>& s) {
  std::vector<uint32_t> ranks;
  ranks.reserve(s.size());
  for (uint32_t x : s) ranks.push_back(o.rank[x]);
  std::sort(ranks.begin(), ranks.end());
  uint32_t runs = 0;
  for (size_t i = 0; i < ranks.size(); ++i)
    if (i == 0 || ranks[i] != ranks[i - 1] + 1) ++runs;
  return runs;
}

ConvexOrder concat_partition_order(
    uint32_t universe,
    const std::vector<std::pair<std::vector<uint32_t>, ConvexOrder>>& parts) {
  std::vector<bool> seen(universe, false);
  std::vector<uint32_t> perm;
  perm.reserve(universe);
  for (const auto& [points, order] : parts) {
    std::vector<std::pair<uint32_t, uint32_t>> ranked;  // (within-part rank, point)
    for (uint32_t x : points) {
      if (x >= universe || seen[x])
        throw std::invalid_argument("concat_partition_order: parts do not partition");
      seen[x] = true;
      ranked.emplace_back(order.rank[x], x);
    }
    std::sort(ranked.begin(), ranked.end());
    for (const auto& [r, x] : ranked) {
      (void)r;
      perm.push_back(x);
    }
  }
  for (bool b : seen)
    if (!b) throw std::invalid_argument("concat_partition_order: parts do not partition");
  return order_from_permutation(std::move(perm));
}

uint32_t exhaustive_min_max_components(const SetFamily& f) {
  if (f.universe > 8) throw std::invalid_argument("exhaustive probe limited to universe <= 8");
  std::vector<uint32_t> perm(f.universe);
  std::iota(perm.begin(), perm.end(), 0);
  uint32_t best = UINT32_MAX;
  do {
    ConvexOrder o = order_from_permutation(perm);
    uint32_t worst = 0;
    for (const auto& m : f.members) worst = std::max(worst, count_components(o, m));
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

SetFamily random_directed_family(Rng& rng, uint32_t max_universe, uint32_t max_members) {
  auto pick = [&](uint32_t lo, uint32_t hi) {
    return std::uniform_int_distribution<uint32_t>(lo, hi)(rng);
  };
  SetFamily f;
  f.universe = pick(2, max_universe);
  std::vector<uint32_t> points(f.universe);
  std::iota(points.begin(), points.end(), 0);
  std::shuffle(points.begin(), points.end(), rng);
  uint32_t budget = pick(1, max_members);
  // random recursive interval splits of a shuffled point line = laminar family
  std::vector<std::pair<uint32_t, uint32_t>> stack{{0, f.universe}};
  while (!stack.empty() && f.members.size() < budget) {
    auto [lo, hi] = stack.back();
    stack.pop_back();
    if (hi - lo < 1) continue;
    if (pick(0, 9) < 7) {
      std::vector<uint32_t> member(points.begin() + lo, points.begin() + hi);
      std::sort(member.begin(), member.end());
      f.members.push_back(std::move(member));
    }
    if (hi - lo >= 2) {
      uint32_t blocks = std::min(hi - lo, pick(2, 4));
      std::vector<uint32_t> cuts{lo, hi};
      for (uint32_t b = 1; b < blocks; ++b) cuts.push_back(pick(lo + 1, hi - 1));
      std::sort(cuts.begin(), cuts.end());
      cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
      for (size_t i = 0; i + 1 < cuts.size(); ++i) stack.emplace_back(cuts[i], cuts[i + 1]);
    }
  }
  if (f.members.empty()) {
    std::vector<uint32_t> member(points.begin(), points.end());
    std::sort(member.begin(), member.end());
    f.members.push_back(std::move(member));
  }
  std::shuffle(f.members.begin(), f.members.end(), rng);
  return f;
}

}  // namespace minlab
