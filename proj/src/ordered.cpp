#include "minlab/ordered.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace minlab {

bool DivisibilityProfile::divisible_at(uint64_t p) const {
  auto it = overrides.find(p);
  return it != overrides.end() ? it->second : default_divisible;
}

std::optional<uint64_t> DivisibilityProfile::first_nondivisible(uint64_t probe_limit) const {
  for (uint64_t p : primes_up_to(probe_limit))
    if (!divisible_at(p)) return p;
  if (!default_divisible) return 2;  // unreachable: 2 <= probe_limit in practice
  return std::nullopt;
}

OrderedVerdict classify_ordered(const DivisibilityProfile& profile) {
  OrderedVerdict v;
  bool divisible = profile.default_divisible;
  for (const auto& [p, flag] : profile.overrides) {
    (void)p;
    divisible = divisible && flag;
  }
  if (!profile.default_divisible) divisible = false;
  // witness: smallest failing prime among overrides and the default region
  if (!divisible) v.witness_prime = profile.first_nondivisible();
  v.o_minimal = v.vc_minimal = v.convexly_orderable = divisible;
  v.annotation = profile.annotation;
  return v;
}

// ---------------------------------------------------------------------------
// Models

OrderedGroupModel OrderedGroupModel::integers() {
  OrderedGroupModel m;
  m.kind_ = Kind::Integers;
  return m;
}

OrderedGroupModel OrderedGroupModel::scaled_rationals(std::vector<uint64_t> inverted) {
  for (uint64_t p : inverted)
    if (!is_prime(p)) throw std::invalid_argument("scaled_rationals: non-prime denominator base");
  OrderedGroupModel m;
  m.kind_ = Kind::ScaledRationals;
  m.inverted_ = std::move(inverted);
  return m;
}

OrderedGroupModel OrderedGroupModel::lex_power(uint32_t rank) {
  if (rank == 0 || rank > 8) throw std::invalid_argument("lex_power: rank must be in [1,8]");
  OrderedGroupModel m;
  m.kind_ = Kind::LexPower;
  m.rank_ = rank;
  return m;
}

DivisibilityProfile OrderedGroupModel::profile() const {
  DivisibilityProfile pr;
  pr.default_divisible = false;
  if (kind_ == Kind::ScaledRationals)
    for (uint64_t p : inverted_) pr.overrides[p] = true;
  if (kind_ == Kind::Integers)
    pr.annotation = "Presburger-style expansion (Z; +, <=) is quasi-VC-minimal";
  return pr;
}

OrderedGroupModel::Element OrderedGroupModel::zero() const {
  Element e;
  e.coords.assign(kind_ == Kind::LexPower ? rank_ : 1, 0);
  return e;
}

bool OrderedGroupModel::contains(const Element& e) const {
  if (kind_ == Kind::LexPower) return e.coords.size() == rank_ && e.den == 1;
  if (e.coords.size() != 1 || e.den <= 0) return false;
  if (kind_ == Kind::Integers) return e.den == 1;
  uint64_t den = static_cast<uint64_t>(e.den);
  for (uint64_t p : inverted_)
    while (den % p == 0) den /= p;
  return den == 1;
}

namespace {
int64_t igcd(int64_t a, int64_t b) { return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b); }
}  // namespace

OrderedGroupModel::Element OrderedGroupModel::add(const Element& a, const Element& b) const {
  Element out;
  if (kind_ == Kind::LexPower) {
    out.coords.resize(rank_);
    for (uint32_t i = 0; i < rank_; ++i) out.coords[i] = a.coords[i] + b.coords[i];
    return out;
  }
  int64_t num = a.coords[0] * b.den + b.coords[0] * a.den;
  int64_t den = a.den * b.den;
  int64_t g = igcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  out.coords = {num};
  out.den = den == 0 ? 1 : den;
  return out;
}

int OrderedGroupModel::compare(const Element& a, const Element& b) const {
  if (kind_ == Kind::LexPower) {
    for (uint32_t i = 0; i < rank_; ++i)
      if (a.coords[i] != b.coords[i]) return a.coords[i] < b.coords[i] ? -1 : 1;
    return 0;
  }
  __int128 lhs = static_cast<__int128>(a.coords[0]) * b.den;
  __int128 rhs = static_cast<__int128>(b.coords[0]) * a.den;
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

std::string OrderedGroupModel::format(const Element& e) const {
  if (kind_ == Kind::LexPower) {
    std::string s = "(";
    for (uint32_t i = 0; i < rank_; ++i) s += (i ? "," : "") + std::to_string(e.coords[i]);
    return s + ")";
  }
  if (e.den == 1) return std::to_string(e.coords[0]);
  return std::to_string(e.coords[0]) + "/" + std::to_string(e.den);
}

int64_t OrderedGroupModel::valuation(const Element& e, uint64_t p) const {
  if (kind_ == Kind::LexPower) {
    int64_t v = INT64_MAX;
    for (int64_t c : e.coords)
      if (c != 0) v = std::min<int64_t>(v, valuation_of(static_cast<uint64_t>(c < 0 ? -c : c), p));
    if (v == INT64_MAX) throw std::invalid_argument("valuation of zero");
    return v;
  }
  int64_t n = e.coords[0];
  if (n == 0) throw std::invalid_argument("valuation of zero");
  int64_t vn = valuation_of(static_cast<uint64_t>(n < 0 ? -n : n), p);
  int64_t vd = valuation_of(static_cast<uint64_t>(e.den), p);
  return vn - vd;
}

std::vector<OrderedGroupModel::Element> OrderedGroupModel::enumerate_positive(
    int64_t bound, int64_t den_cap) const {
  std::vector<Element> out;
  if (kind_ == Kind::Integers) {
    for (int64_t k = 1; k <= bound; ++k) out.push_back({{k}, 1});
    return out;
  }
  if (kind_ == Kind::ScaledRationals) {
    std::set<int64_t> dens{1};
    for (uint64_t p : inverted_) {
      std::set<int64_t> grown = dens;
      for (int64_t d : dens) {
        int64_t cur = d;
        while (cur <= den_cap / static_cast<int64_t>(p)) {
          cur *= static_cast<int64_t>(p);
          grown.insert(cur);
        }
      }
      dens = std::move(grown);
    }
    for (int64_t d : dens)
      for (int64_t k = 1; k <= bound * d; ++k)
        if (igcd(k, d) == 1) out.push_back({{k}, d});
    std::sort(out.begin(), out.end(),
              [&](const Element& a, const Element& b) { return compare(a, b) < 0; });
    return out;
  }
  // LexPower: positive tuples with |coords| <= bound (desk scale: rank 2)
  int64_t cap = std::min<int64_t>(bound, 16);
  std::vector<int64_t> cur(rank_, 0);
  std::function<void(uint32_t)> rec = [&](uint32_t i) {
    if (i == rank_) {
      Element e{cur, 1};
      if (positive(e)) out.push_back(e);
      return;
    }
    for (int64_t v = -cap; v <= cap; ++v) {
      cur[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
  std::sort(out.begin(), out.end(),
            [&](const Element& a, const Element& b) { return compare(a, b) < 0; });
  return out;
}

// ---------------------------------------------------------------------------
// D_{p,n}

DpnReport dpn_witnesses(const OrderedGroupModel& model, uint64_t p,
                        const std::vector<uint32_t>& n_list, int64_t bound) {
  if (model.profile().divisible_at(p))
    throw std::invalid_argument("dpn_witnesses: p divides the whole group");
  DpnReport report;
  report.p = p;
  auto elems = model.enumerate_positive(bound);
  std::set<std::pair<std::vector<int64_t>, int64_t>> used;
  report.pairwise_disjoint = true;
  for (uint32_t n : n_list) {
    DpnReport::PerN level;
    level.n = n;
    for (const auto& e : elems)
      if (model.valuation(e, p) == static_cast<int64_t>(n)) {
        level.set.push_back(e);
        if (!used.insert({e.coords, e.den}).second) report.pairwise_disjoint = false;
      }
    // Dyadic windows (bound/2^j, bound/2^{j-1}] down to the floor p^{n+1}:
    // below the floor a window may genuinely miss D_{p,n}.
    level.windows_ok = true;
    int64_t floor = 1;
    for (uint32_t i = 0; i <= n; ++i) floor *= static_cast<int64_t>(p);
    int64_t hi = bound;
    while (hi / 2 >= floor) {
      int64_t lo = hi / 2;
      bool nonempty = false;
      for (const auto& e : level.set) {
        // lo < e <= hi in model order, desk comparison via cross products
        OrderedGroupModel::Element lo_el{{lo}, 1}, hi_el{{hi}, 1};
        if (model.compare(e, lo_el) > 0 && model.compare(e, hi_el) <= 0) {
          nonempty = true;
          break;
        }
      }
      if (!nonempty) level.windows_ok = false;
      ++level.windows_checked;
      hi = lo;
    }
    report.levels.push_back(std::move(level));
  }
  return report;
}

OrderedGroupModel::Element cofinal_witness(const OrderedGroupModel& model,
                                           const OrderedGroupModel::Element& a,
                                           const OrderedGroupModel::Element& c, uint64_t p,
                                           uint32_t n) {
  if (!model.positive(a) || !model.positive(c))
    throw std::invalid_argument("cofinal_witness: a and c must be positive");
  if (model.valuation(c, p) != 0)
    throw std::invalid_argument("cofinal_witness: p must not divide c");
  OrderedGroupModel::Element b = a;
  if (model.valuation(a, p) != 0) b = model.add(a, c);
  OrderedGroupModel::Element x = b;
  for (uint32_t i = 0; i < n; ++i) {
    OrderedGroupModel::Element doubled = x;
    for (uint64_t rep = 1; rep < p; ++rep) doubled = model.add(doubled, x);
    x = doubled;  // x *= p by repeated addition
  }
  if (model.compare(x, a) < 0) throw Diagnostic("cofinal_witness: x < a");
  if (model.valuation(x, p) != static_cast<int64_t>(n))
    throw Diagnostic("cofinal_witness: wrong p-exponent");
  return x;
}

// ---------------------------------------------------------------------------
// Coterminal refutation

Refutation coterminal_refute(size_t snapshot_size, const std::vector<uint32_t>& order,
                             uint32_t k, const std::vector<std::vector<uint32_t>>& sets) {
  Refutation r;
  if (sets.size() < 2 * static_cast<size_t>(k) + 1)
    throw std::invalid_argument("coterminal_refute: need 2k+1 sets");
  if (order.size() != snapshot_size)
    throw std::invalid_argument("coterminal_refute: order size mismatch");
  std::vector<uint32_t> rank(snapshot_size);
  for (uint32_t i = 0; i < snapshot_size; ++i) rank[order[i]] = i;
  // pairwise disjointness
  std::vector<int> owner(snapshot_size, -1);
  for (size_t s = 0; s < sets.size(); ++s)
    for (uint32_t x : sets[s]) {
      if (owner[x] >= 0) throw std::invalid_argument("coterminal_refute: sets not disjoint");
      owner[x] = static_cast<int>(s);
    }
  size_t upper_window = snapshot_size / 2;
  size_t need = 2 * static_cast<size_t>(k) + 1;

  struct Component {
    size_t set_index;
    uint32_t min_rank;
    size_t b_point;  // value-minimal point
    size_t c_best;   // value-maximal point
  };
  std::vector<Component> chosen;
  for (size_t s = 0; s < need; ++s) {
    if (sets[s].empty()) {
      r.reason = "empty set";
      return r;
    }
    bool meets_upper = false;
    for (uint32_t x : sets[s]) meets_upper = meets_upper || x >= upper_window;
    if (!meets_upper) throw std::invalid_argument("coterminal_refute: set misses upper window");
    // order-contiguous components of the set
    std::vector<uint32_t> pts = sets[s];
    std::sort(pts.begin(), pts.end(), [&](uint32_t a, uint32_t b) { return rank[a] < rank[b]; });
    std::vector<std::vector<uint32_t>> comps;
    for (uint32_t x : pts) {
      if (comps.empty() || rank[x] != rank[comps.back().back()] + 1) comps.emplace_back();
      comps.back().push_back(x);
    }
    // pick the component reaching highest by value
    const std::vector<uint32_t>* best = nullptr;
    uint32_t best_max = 0;
    for (const auto& c : comps) {
      uint32_t mx = *std::max_element(c.begin(), c.end());
      if (!best || mx > best_max) {
        best = &c;
        best_max = mx;
      }
    }
    Component comp;
    comp.set_index = s;
    comp.min_rank = rank[(*best)[0]];
    comp.b_point = *std::min_element(best->begin(), best->end());
    comp.c_best = best_max;
    chosen.push_back(comp);
  }
  std::sort(chosen.begin(), chosen.end(),
            [](const Component& a, const Component& b) { return a.min_rank < b.min_rank; });
  auto segment_components = [&](size_t threshold) {
    uint32_t runs = 0;
    bool prev = false;
    for (uint32_t pos = 0; pos < snapshot_size; ++pos) {
      bool in = order[pos] >= threshold;
      if (in && !prev) ++runs;
      prev = in;
    }
    return runs;
  };
  auto finish = [&](size_t threshold, std::vector<size_t> comps, std::vector<size_t> points) {
    r.conclusive = true;
    r.threshold = threshold;
    r.chosen_components = std::move(comps);
    r.alternating_points = std::move(points);
    r.final_segment_components = segment_components(threshold);
    if (r.final_segment_components < k + 1)
      throw Diagnostic("coterminal_refute: witness fails its own bound");
    return r;
  };
  // The threshold only needs to exceed the b-points actually used at odd
  // positions of the alternating sequence.
  size_t threshold = 0;
  for (size_t j = 1; j < chosen.size(); j += 2)
    threshold = std::max(threshold, chosen[j].b_point + 1);
  bool greedy_ok = segment_components(threshold) >= k + 1;
  for (size_t j = 0; j < chosen.size(); j += 2)
    if (chosen[j].c_best < threshold) greedy_ok = false;
  if (greedy_ok) {
    std::vector<size_t> comps, points;
    for (size_t j = 0; j < chosen.size(); ++j) {
      comps.push_back(chosen[j].set_index);
      points.push_back(j % 2 == 0 ? chosen[j].c_best : chosen[j].b_point);
    }
    return finish(threshold, std::move(comps), std::move(points));
  }
  // Fallback: scan thresholds directly for a final segment with more than k
  // order-convex components, then read the alternating points off the runs.
  for (size_t a = snapshot_size; a-- > 0;) {
    if (segment_components(a) < k + 1) continue;
    std::vector<size_t> points;
    std::vector<size_t> comps;
    size_t taken = 0;
    bool prev = false;
    for (uint32_t pos = 0; pos < snapshot_size && taken < need; ++pos) {
      bool in = order[pos] >= a;
      if (taken % 2 == 0 && in && !prev) {
        points.push_back(order[pos]);
        comps.push_back(owner[order[pos]] >= 0 ? static_cast<size_t>(owner[order[pos]])
                                               : SIZE_MAX);
        ++taken;
      } else if (taken % 2 == 1 && !in) {
        points.push_back(order[pos]);
        comps.push_back(owner[order[pos]] >= 0 ? static_cast<size_t>(owner[order[pos]])
                                               : SIZE_MAX);
        ++taken;
      }
      prev = in;
    }
    if (taken == need) return finish(a, std::move(comps), std::move(points));
  }
  r.reason = "no threshold yields more than k convex components (snapshot too small)";
  return r;
}

bool verify_refutation(size_t snapshot_size, const std::vector<uint32_t>& order, uint32_t k,
                       const Refutation& r) {
  if (!r.conclusive) return false;
  std::vector<uint32_t> rank(snapshot_size);
  for (uint32_t i = 0; i < snapshot_size; ++i) rank[order[i]] = i;
  // points strictly order-ascending, alternating around the threshold
  for (size_t j = 0; j + 1 < r.alternating_points.size(); ++j)
    if (rank[r.alternating_points[j]] >= rank[r.alternating_points[j + 1]]) return false;
  for (size_t j = 0; j < r.alternating_points.size(); ++j) {
    bool in = r.alternating_points[j] >= r.threshold;
    if (in != (j % 2 == 0)) return false;
  }
  return r.alternating_points.size() == 2 * static_cast<size_t>(k) + 1 &&
         r.final_segment_components >= k + 1;
}

// ---------------------------------------------------------------------------
// nth roots in ordered fields

namespace {

std::optional<int64_t> exact_root(int64_t v, uint32_t n) {
  if (v < 0) return std::nullopt;
  if (v <= 1 || n == 1) return v;
  int64_t guess = static_cast<int64_t>(std::llround(std::pow(static_cast<double>(v), 1.0 / n)));
  for (int64_t r = std::max<int64_t>(0, guess - 2); r <= guess + 2; ++r) {
    int64_t acc = 1;
    bool overflow = false;
    for (uint32_t i = 0; i < n && !overflow; ++i) {
      if (r != 0 && acc > v / r + 1) overflow = true;
      acc *= r;
    }
    if (!overflow && acc == v) return r;
  }
  return std::nullopt;
}

}  // namespace

FieldRootVerdict field_root_verdict(const FieldModel& field, const std::vector<Rational>& samples,
                                    uint32_t n_max) {
  FieldRootVerdict v;
  v.result = FieldRootVerdict::Result::Inconclusive;
  if (field.roots_by_fiat) return v;
  for (const Rational& sample : samples) {
    if (sample.num <= 0 || sample.den <= 0)
      throw std::invalid_argument("field_root_verdict: samples must be positive");
    int64_t g = std::gcd(sample.num, sample.den);
    int64_t num = sample.num / g, den = sample.den / g;
    for (uint32_t n = 2; n <= n_max; ++n) {
      if (!exact_root(num, n) || !exact_root(den, n)) {
        v.result = FieldRootVerdict::Result::NotConvexlyOrderable;
        v.counterexample = {{num, den}, n};
        return v;
      }
    }
  }
  return v;
}

}  // namespace minlab
