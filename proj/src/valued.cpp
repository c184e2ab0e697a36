#include "minlab/valued.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace minlab {

TruncatedSeries TruncatedSeries::zero(uint32_t p, uint32_t precision) {
  TruncatedSeries s;
  s.p = p;
  s.precision = precision;
  s.c.assign(precision, 0);
  return s;
}

TruncatedSeries TruncatedSeries::monomial(uint32_t p, uint32_t precision, uint32_t power) {
  TruncatedSeries s = zero(p, precision);
  if (power >= precision) throw std::invalid_argument("monomial: power beyond precision");
  s.c[power] = 1;
  return s;
}

TruncatedSeries TruncatedSeries::plus(const TruncatedSeries& o) const {
  if (p != o.p || precision != o.precision)
    throw std::invalid_argument("series parameter mismatch");
  TruncatedSeries out = *this;
  for (uint32_t i = 0; i < precision; ++i)
    out.c[i] = static_cast<uint8_t>((out.c[i] + o.c[i]) % p);
  return out;
}

std::string TruncatedSeries::digits() const {
  std::string s;
  s.reserve(precision);
  for (uint8_t d : c) s += static_cast<char>('0' + d);
  return s;
}

ValuationResult vdist(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (a.p != b.p || a.precision != b.precision)
    throw std::invalid_argument("vdist: parameter mismatch");
  for (uint32_t i = 0; i < a.precision; ++i)
    if (a.c[i] != b.c[i]) return {true, i};
  return {false, a.precision};
}

GammaSeq gamma_seq(uint64_t p, uint64_t gamma1, uint32_t n_max) {
  if (!is_prime(p)) throw std::invalid_argument("gamma_seq: p must be prime");
  if (gamma1 == 0 || gamma1 % p == 0)
    throw std::invalid_argument("gamma_seq: gamma1 must be positive and prime to p");
  GammaSeq g;
  g.p = p;
  g.gamma1 = gamma1;
  for (uint32_t n = 0; n <= n_max; ++n) {
    uint64_t k = n / 2;
    uint64_t v = checked_mul(checked_mul(k, p), gamma1);
    if (n % 2 == 1) v = checked_add(v, gamma1);
    g.values.push_back(v);
  }
  for (uint32_t n = 0; n <= n_max; ++n) {
    if (n > 0 && g.values[n] <= g.values[n - 1]) throw Diagnostic("gamma_seq: not increasing");
    if ((g.values[n] % p == 0) != (n % 2 == 0)) throw Diagnostic("gamma_seq: parity violated");
  }
  return g;
}

AdversarialInstance build_adversary(uint64_t p, uint64_t gamma1, uint32_t n,
                                    std::optional<uint32_t> precision) {
  AdversarialInstance inst;
  inst.n = n;
  inst.gamma = gamma_seq(p, gamma1, n == 0 ? 1 : n);
  uint64_t need = inst.gamma.values.back() + 1;
  uint32_t prec = precision.value_or(static_cast<uint32_t>(need));
  if (prec < need)
    throw std::invalid_argument("build_adversary: insufficient precision (need > gamma_n)");
  inst.precision = prec;
  uint32_t pp = static_cast<uint32_t>(p);
  inst.levels.push_back({TruncatedSeries::zero(pp, prec)});
  for (uint32_t i = 0; i < n; ++i) {
    // a' = a + t^{gamma_i}: the canonical choice realizing v(a - a') = gamma_i
    TruncatedSeries step =
        TruncatedSeries::monomial(pp, prec, static_cast<uint32_t>(inst.gamma.values[i]));
    std::vector<TruncatedSeries> next = inst.levels.back();
    for (const auto& a : inst.levels.back()) next.push_back(a.plus(step));
    inst.levels.push_back(std::move(next));
  }
  // level invariants
  for (uint32_t lvl = 0; lvl <= n; ++lvl) {
    const auto& pts = inst.levels[lvl];
    if (pts.size() != (size_t{1} << lvl)) throw Diagnostic("adversary: |A_n| != 2^n");
    std::set<std::vector<uint8_t>> distinct;
    for (const auto& a : pts) distinct.insert(a.c);
    if (distinct.size() != pts.size()) throw Diagnostic("adversary: level has duplicates");
    for (size_t i = 0; i < pts.size(); ++i) {
      std::set<uint64_t> realized;
      for (size_t j = 0; j < pts.size(); ++j) {
        if (i == j) continue;
        ValuationResult v = vdist(pts[i], pts[j]);
        if (!v.exact) throw Diagnostic("adversary: undecidable pairwise valuation");
        if (lvl > 0 && v.v > inst.gamma.values[lvl - 1])
          throw Diagnostic("adversary: pairwise valuation exceeds gamma_{n-1}");
        realized.insert(v.v);
      }
      for (uint32_t g = 0; g < lvl; ++g)
        if (!realized.count(inst.gamma.values[g]))
          throw Diagnostic("adversary: gamma_i not realized from every point");
    }
  }
  return inst;
}

bool xb_member(const TruncatedSeries& a, const TruncatedSeries& b, uint64_t p) {
  if (a == b) return true;  // v = infinity: divisibility holds by convention
  ValuationResult v = vdist(a, b);
  if (!v.exact)
    throw std::invalid_argument("xb_member: valuation >= precision, not decidable");
  return v.v % p == 0;
}

RefutationRecord greedy_refute(const AdversarialInstance& inst,
                               const std::vector<uint32_t>& order) {
  const auto& pts = inst.top();
  if (order.size() != pts.size())
    throw std::invalid_argument("greedy_refute: order size mismatch");
  if (inst.n % 2 == 0 || inst.n < 1)
    throw std::invalid_argument("greedy_refute: instance depth must be odd (2n+1)");
  uint32_t half = (inst.n - 1) / 2;  // the n of the statement
  std::vector<uint32_t> rank(pts.size());
  for (uint32_t i = 0; i < order.size(); ++i) rank[order[i]] = i;

  RefutationRecord rec;
  rec.lower_bound = half + 1;
  size_t cur = std::min_element(rank.begin(), rank.end()) - rank.begin();
  rec.chain.push_back(cur);
  for (uint32_t i = 0; i + 1 <= inst.n; ++i) {
    uint64_t want = inst.gamma.values[i];
    size_t best = SIZE_MAX;
    for (size_t j = 0; j < pts.size(); ++j) {
      ValuationResult v = vdist(pts[j], pts[cur]);
      if (v.exact && v.v == want && (best == SIZE_MAX || rank[j] < rank[best])) best = j;
    }
    if (best == SIZE_MAX) throw Diagnostic("greedy_refute: no successor at gamma_i");
    rec.chain.push_back(best);
    cur = best;
  }
  // proof conditions
  for (size_t i = 0; i < rec.chain.size(); ++i)
    for (size_t j = 0; j < i; ++j) {
      ValuationResult v = vdist(pts[rec.chain[j]], pts[rec.chain[i]]);
      if (!v.exact || v.v != inst.gamma.values[j])
        throw Diagnostic("greedy_refute: condition (1) fails");
    }
  for (size_t i = 0; i + 1 < rec.chain.size(); ++i)
    if (rank[rec.chain[i]] >= rank[rec.chain[i + 1]])
      throw Diagnostic("greedy_refute: condition (2) fails");
  for (size_t i = 0; i < rec.chain.size(); ++i) {
    for (size_t j = 0; j < pts.size(); ++j) {
      ValuationResult v = vdist(pts[j], pts[rec.chain[i]]);
      bool far = !v.exact || v.v >= inst.gamma.values[i];
      if (far && rank[rec.chain[i]] > rank[j])
        throw Diagnostic("greedy_refute: condition (3) fails");
    }
  }
  rec.b_index = rec.chain.back();
  for (size_t i = 0; i + 1 < rec.chain.size(); ++i) {
    bool member = xb_member(pts[rec.chain[i]], pts[rec.b_index], inst.gamma.p);
    if (member != (i % 2 == 0)) throw Diagnostic("greedy_refute: X_b alternation fails");
  }
  uint32_t runs = 0;
  bool prev = false;
  for (uint32_t pos = 0; pos < order.size(); ++pos) {
    bool in = xb_member(pts[order[pos]], pts[rec.b_index], inst.gamma.p);
    if (in && !prev) ++runs;
    prev = in;
  }
  rec.components = runs;
  if (runs < rec.lower_bound)
    throw Diagnostic("greedy_refute: component count below the n+1 bound");
  return rec;
}

std::vector<uint32_t> canonical_order(const AdversarialInstance& inst) {
  const auto& pts = inst.top();
  std::vector<uint32_t> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  TruncatedSeries origin = TruncatedSeries::zero(pts[0].p, pts[0].precision);
  auto key = [&](uint32_t i) {
    ValuationResult v = vdist(pts[i], origin);
    return std::make_pair(v.exact ? v.v : UINT32_MAX, pts[i].c);
  };
  std::sort(order.begin(), order.end(), [&](uint32_t x, uint32_t y) { return key(x) < key(y); });
  return order;
}

std::string serialize_refutation(const AdversarialInstance& inst,
                                 const std::vector<uint32_t>& order,
                                 const RefutationRecord& rec) {
  std::ostringstream os;
  os << "p " << inst.gamma.p << " gamma1 " << inst.gamma.gamma1 << " depth " << inst.n
     << " precision " << inst.precision << "\n";
  os << "gamma";
  for (uint64_t g : inst.gamma.values) os << " " << g;
  os << "\n";
  for (size_t lvl = 0; lvl < inst.levels.size(); ++lvl) {
    os << "level " << lvl;
    for (const auto& a : inst.levels[lvl]) os << " " << a.digits();
    os << "\n";
  }
  os << "order";
  for (uint32_t i : order) os << " " << i;
  os << "\n";
  os << "chain";
  for (size_t i : rec.chain) os << " " << i;
  os << "\n";
  os << "b " << rec.b_index << "\n";
  os << "components " << rec.components << " lower_bound " << rec.lower_bound << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Simple interpretations

InducedOrder induced_order(const InterpretationSpec& spec,
                           const std::vector<uint32_t>& base_rank) {
  if (base_rank.size() != spec.snapshot_size)
    throw std::invalid_argument("induced_order: rank size mismatch");
  std::vector<bool> seen(spec.snapshot_size, false);
  for (const auto& cls : spec.classes) {
    if (cls.empty()) throw std::invalid_argument("induced_order: empty class");
    for (uint32_t x : cls) {
      if (x >= spec.snapshot_size || seen[x])
        throw std::invalid_argument("induced_order: classes not disjoint");
      seen[x] = true;
    }
  }
  size_t n = spec.classes.size();
  // x <= y iff for every s in y some r in x has rank(r) <= rank(s),
  // i.e. min-rank(x) <= min-rank(y).
  std::vector<uint32_t> min_rank(n);
  for (size_t i = 0; i < n; ++i) {
    uint32_t mr = UINT32_MAX;
    for (uint32_t x : spec.classes[i]) mr = std::min(mr, base_rank[x]);
    min_rank[i] = mr;
  }
  InducedOrder out;
  out.total = true;
  out.transitive = true;
  out.antisymmetric = true;
  for (size_t i = 0; i < n && out.antisymmetric; ++i)
    for (size_t j = i + 1; j < n && out.antisymmetric; ++j) {
      if (min_rank[i] != min_rank[j]) continue;
      out.antisymmetric = false;
      // alternating witness r_0, s_0, r_1, s_1, ... from the failure proof
      AltWitness w;
      w.class_x = static_cast<uint32_t>(i);
      w.class_y = static_cast<uint32_t>(j);
      auto argmin = [&](const std::vector<uint32_t>& cls) {
        uint32_t best = cls[0];
        for (uint32_t x : cls)
          if (base_rank[x] < base_rank[best]) best = x;
        return best;
      };
      uint32_t s = argmin(spec.classes[j]);
      uint32_t r = argmin(spec.classes[i]);
      w.sequence = {s, r, s, r};  // cycles immediately at equal ranks
      out.failure = w;
    }
  std::vector<uint32_t> seq(n);
  std::iota(seq.begin(), seq.end(), 0);
  std::stable_sort(seq.begin(), seq.end(),
                   [&](uint32_t a, uint32_t b) { return min_rank[a] < min_rank[b]; });
  out.class_sequence = std::move(seq);
  return out;
}

namespace {

uint32_t runs_of(const std::vector<bool>& marked) {
  uint32_t runs = 0;
  bool prev = false;
  for (bool b : marked) {
    if (b && !prev) ++runs;
    prev = b;
  }
  return runs;
}

}  // namespace

TransferCheckResult induced_transfer_check(const InterpretationSpec& spec,
                                           const std::vector<uint32_t>& base_perm,
                                           const InducedOrder& induced,
                                           const std::vector<uint32_t>& marked_classes) {
  TransferCheckResult r;
  std::vector<bool> is_marked_class(spec.classes.size(), false);
  for (uint32_t c : marked_classes) is_marked_class[c] = true;
  std::vector<bool> in_union(spec.snapshot_size, false);
  for (size_t c = 0; c < spec.classes.size(); ++c)
    if (is_marked_class[c])
      for (uint32_t x : spec.classes[c]) in_union[x] = true;
  std::vector<bool> base_line;
  base_line.reserve(base_perm.size());
  for (uint32_t x : base_perm) base_line.push_back(in_union[x]);
  r.base_components = runs_of(base_line);
  std::vector<bool> induced_line;
  induced_line.reserve(induced.class_sequence.size());
  for (uint32_t c : induced.class_sequence) induced_line.push_back(is_marked_class[c]);
  r.induced_components = runs_of(induced_line);
  r.ok = r.induced_components <= r.base_components;
  return r;
}

QuasiVerdict quasi_verdict(const DivisibilityProfile& value_group, const std::string& label) {
  QuasiVerdict v;
  v.label = label;
  auto p = value_group.first_nondivisible();
  if (p) {
    v.result = QuasiVerdict::Result::NotQuasiVCMinimal;
    v.witness_prime = p;
    v.formula = "exists z (z^" + std::to_string(*p) + " | (x - y))";
  } else {
    v.result = QuasiVerdict::Result::Inconclusive;
  }
  return v;
}

}  // namespace minlab
