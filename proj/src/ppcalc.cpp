#include "minlab/ppcalc.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace minlab {

namespace {

constexpr uint32_t kTauInf = UINT32_MAX;

// Concrete slot inventory of one prime relative to a base descriptor
// (explicit local, or the tail template instantiated there).
struct SlotView {
  bool exists = false;
  std::vector<std::pair<uint32_t, XCard>> cyclic;  // (exponent, multiplicity > 0)
  bool cofinal = false;
  uint32_t cofinal_from = 1;
  XCard beta = XCard::finite(0);
  XCard gamma = XCard::finite(0);

  uint32_t max_cyclic() const {
    uint32_t m = 0;
    for (const auto& [e, _] : cyclic) m = std::max(m, e);
    return m;
  }
};

SlotView slots_at(const GroupDescriptor& d, uint64_t p) {
  PrimeLocal l = d.effective_local(p);
  SlotView sv;
  for (const auto& [i, m] : l.alpha)
    if (m.is_positive()) sv.cyclic.emplace_back(i, m);
  sv.cofinal = l.cofinal;
  sv.cofinal_from = l.cofinal_from;
  sv.beta = l.beta;
  sv.gamma = l.gamma;
  sv.exists = !sv.cyclic.empty() || sv.cofinal || sv.beta.is_positive() || sv.gamma.is_positive();
  return sv;
}

uint32_t record_breakpoint(const PPSubgroup& h, uint64_t p) {
  uint32_t m = 0;
  auto it = h.records().find(p);
  if (it != h.records().end()) {
    if (it->second.torsion) m = std::max(m, *it->second.torsion);
    for (const auto& g : it->second.gs) m = std::max({m, g.a, g.b});
  }
  return m;
}

// Beyond this exponent both trace functions are exactly linear in n.  The
// last crossover sits at tau + max plateau, which 2*max-breakpoint covers.
uint32_t asymptotic_bound(const PPSubgroup& h1, const PPSubgroup& h2, uint64_t p,
                          const SlotView& sv) {
  uint32_t m = std::max(record_breakpoint(h1, p), record_breakpoint(h2, p));
  m = std::max(m, sv.max_cyclic());
  m = std::max(m, sv.cofinal_from);
  return 2 * m + 2;
}

void require_same_base(const PPSubgroup& a, const PPSubgroup& b) {
  if (!(a.base() == b.base()))
    throw std::invalid_argument("ppcalc: base descriptor mismatch");
}

}  // namespace

// ---------------------------------------------------------------------------
// IndexValue

void IndexValue::mul_prime_power(uint64_t p, uint64_t e) {
  if (infinite_ || e == 0) return;
  factors_[p] = checked_add(factors_[p], e);
}

void IndexValue::mul(const IndexValue& o) {
  if (o.infinite_) {
    infinite_ = true;
    factors_.clear();
    return;
  }
  for (const auto& [p, e] : o.factors_) mul_prime_power(p, e);
}

uint64_t IndexValue::exponent_of(uint64_t p) const {
  auto it = factors_.find(p);
  return it == factors_.end() ? 0 : it->second;
}

uint64_t IndexValue::to_u64() const {
  if (infinite_) throw std::logic_error("IndexValue: infinite has no u64 value");
  uint64_t v = 1;
  for (const auto& [p, e] : factors_)
    for (uint64_t i = 0; i < e; ++i) v = checked_mul(v, p);
  return v;
}

std::string IndexValue::to_string() const {
  if (infinite_) return "infinite";
  if (factors_.empty()) return "1";
  std::string out;
  for (const auto& [p, e] : factors_) {
    if (!out.empty()) out += "*";
    out += std::to_string(p);
    if (e > 1) out += "^" + std::to_string(e);
  }
  return out;
}

// ---------------------------------------------------------------------------
// PPSubgroup

PPSubgroup PPSubgroup::full(const GroupDescriptor& d) {
  PPSubgroup h;
  h.base_ = normalize(d);
  return h;
}

PPSubgroup PPSubgroup::zero(const GroupDescriptor& d) {
  PPSubgroup h;
  h.base_ = normalize(d);
  h.torsional_ = true;
  return h;
}

uint32_t PPSubgroup::tau_eff(uint64_t p) const {
  auto it = recs_.find(p);
  if (it != recs_.end() && it->second.torsion) return *it->second.torsion;
  return torsional_ ? 0 : kTauInf;
}

uint32_t PPSubgroup::trace_cyclic(uint64_t p, uint32_t n) const {
  uint32_t tau = tau_eff(p);
  uint32_t s = 0;
  if (tau != kTauInf && n > tau) s = n - tau;
  auto it = recs_.find(p);
  if (it != recs_.end()) {
    for (const auto& g : it->second.gs) {
      uint32_t v = std::min(g.a, n);
      if (v > g.b) s = std::max(s, v - g.b);
    }
  }
  return std::min(s, n);
}

PruferTrace PPSubgroup::trace_prufer(uint64_t p) const {
  uint32_t tau = tau_eff(p);
  if (tau == kTauInf) return {true, 0};
  return {false, tau};
}

LocalizedTrace PPSubgroup::trace_localized(uint64_t p) const {
  if (tau_eff(p) != kTauInf) return {true, 0};
  uint32_t scale = 0;
  auto it = recs_.find(p);
  if (it != recs_.end())
    for (const auto& g : it->second.gs) scale = std::max(scale, g.a - g.b);
  return {false, scale};
}

void PPSubgroup::canonicalize() {
  for (auto it = recs_.begin(); it != recs_.end();) {
    uint64_t p = it->first;
    PrimeRecord& rec = it->second;
    SlotView sv = slots_at(base_, p);
    if (!sv.exists) {
      it = recs_.erase(it);
      continue;
    }
    uint32_t maxn = sv.max_cyclic();
    if (rec.torsion && !sv.beta.is_positive() && !sv.cofinal) {
      if (maxn == 0) {
        // no cyclic or Prufer slots here: any torsion bound matches the
        // torsional default exactly
        rec.torsion.reset();
      } else if (*rec.torsion > maxn) {
        rec.torsion = maxn;
      }
    }
    uint32_t tau = rec.torsion ? *rec.torsion : (torsional_ ? 0 : kTauInf);
    std::vector<GAtom> gs;
    for (GAtom g : rec.gs) {
      if (g.a <= g.b) continue;
      if (!sv.cofinal) {
        if (!sv.gamma.is_positive()) {
          g.a = std::min(g.a, maxn);
          if (g.a <= g.b) continue;
        } else if (g.b > maxn) {
          uint32_t diff = g.a - g.b;
          g.b = maxn;
          g.a = g.b + diff;
        }
      }
      if (tau != kTauInf && tau <= g.b) continue;  // torsion bound dominates
      gs.push_back(g);
    }
    std::sort(gs.begin(), gs.end(), [](GAtom x, GAtom y) {
      if (x.b != y.b) return x.b < y.b;
      return (x.a - x.b) > (y.a - y.b);
    });
    std::vector<GAtom> keep;
    uint32_t best = 0;
    for (GAtom g : gs) {
      uint32_t diff = g.a - g.b;
      if (keep.empty() || diff > best) {
        keep.push_back(g);
        best = diff;
      }
    }
    rec.gs = std::move(keep);
    if (rec.empty())
      it = recs_.erase(it);
    else
      ++it;
  }
}

PPSubgroup phi_subgroup(const GroupDescriptor& d, uint64_t k, uint64_t m) {
  PPSubgroup h;
  h.base_ = normalize(d);
  if (k == 0 && m >= 1) {
    h.torsional_ = true;
    for (const auto& [p, e] : factorize(m))
      h.recs_[p].torsion = e;
  } else if (k >= 1 && m >= 1) {
    auto fk = factorize(k);
    auto fm = factorize(m);
    for (const auto& [p, a] : fk) {
      uint32_t b = 0;
      if (auto it = fm.find(p); it != fm.end()) b = it->second;
      if (a > b) h.recs_[p].gs.push_back({a, b});
    }
  }
  // k = m = 0 and m = 0 both give the whole group (witness y = 0).
  h.canonicalize();
  return h;
}

PPSubgroup scaling_subgroup(const GroupDescriptor& d,
                            const std::map<uint64_t, uint32_t>& exponents) {
  PPSubgroup h;
  h.base_ = normalize(d);
  for (const auto& [p, e] : exponents)
    if (e > 0) h.recs_[p].gs.push_back({e, 0});
  h.canonicalize();
  return h;
}

PPSubgroup intersect(const PPSubgroup& h1, const PPSubgroup& h2) {
  require_same_base(h1, h2);
  PPSubgroup out;
  out.base_ = h1.base_;
  out.torsional_ = h1.torsional_ || h2.torsional_;
  std::set<uint64_t> ps;
  for (const auto& [p, _] : h1.recs_) ps.insert(p);
  for (const auto& [p, _] : h2.recs_) ps.insert(p);
  for (uint64_t p : ps) {
    PrimeRecord rec;
    uint32_t t = std::min(h1.tau_eff(p), h2.tau_eff(p));
    uint32_t def = out.torsional_ ? 0 : kTauInf;
    if (t != def) rec.torsion = t;
    for (const PPSubgroup* h : {&h1, &h2}) {
      auto it = h->recs_.find(p);
      if (it == h->recs_.end()) continue;
      for (const auto& g : it->second.gs) rec.gs.push_back(g);
    }
    if (!rec.empty()) out.recs_[p] = std::move(rec);
  }
  out.canonicalize();
  return out;
}

bool is_subset(const PPSubgroup& h1, const PPSubgroup& h2) {
  require_same_base(h1, h2);
  const GroupDescriptor& d = h1.base_;
  bool shrinks_generic = !h1.torsional_ && h2.torsional_;
  if (d.delta.is_positive() && shrinks_generic) return false;
  if (d.tail && shrinks_generic) return false;

  std::set<uint64_t> ps = d.local_primes();
  for (const auto& [p, _] : h1.recs_) ps.insert(p);
  for (const auto& [p, _] : h2.recs_) ps.insert(p);
  for (uint64_t p : ps) {
    SlotView sv = slots_at(d, p);
    if (!sv.exists) continue;
    for (const auto& [n, mult] : sv.cyclic) {
      (void)mult;
      if (h1.trace_cyclic(p, n) < h2.trace_cyclic(p, n)) return false;
    }
    if (sv.cofinal) {
      uint32_t bound = asymptotic_bound(h1, h2, p, sv);
      for (uint32_t n = sv.cofinal_from; n <= bound + 1; ++n)
        if (h1.trace_cyclic(p, n) < h2.trace_cyclic(p, n)) return false;
      bool slope1 = h1.tau_eff(p) != kTauInf;
      bool slope2 = h2.tau_eff(p) != kTauInf;
      if (slope1 < slope2) return false;
    }
    if (sv.beta.is_positive()) {
      if (h1.tau_eff(p) > h2.tau_eff(p)) return false;
    }
    if (sv.gamma.is_positive()) {
      LocalizedTrace z1 = h1.trace_localized(p);
      LocalizedTrace z2 = h2.trace_localized(p);
      if (!z1.zero && (z2.zero || z1.scale < z2.scale)) return false;
    }
  }
  return true;
}

IndexValue index_nested(const PPSubgroup& h1, const PPSubgroup& m) {
  const GroupDescriptor& d = h1.base_;
  bool shrinks_generic = !h1.torsional_ && m.torsional_;
  if (d.tail && shrinks_generic) return IndexValue::infinite();
  if (d.delta.is_positive() && shrinks_generic) return IndexValue::infinite();

  IndexValue out = IndexValue::one();
  std::set<uint64_t> ps = d.local_primes();
  for (const auto& [p, _] : h1.recs_) ps.insert(p);
  for (const auto& [p, _] : m.recs_) ps.insert(p);
  for (uint64_t p : ps) {
    SlotView sv = slots_at(d, p);
    if (!sv.exists) continue;
    for (const auto& [n, mult] : sv.cyclic) {
      uint32_t s1 = h1.trace_cyclic(p, n);
      uint32_t sm = m.trace_cyclic(p, n);
      if (sm < s1) throw Diagnostic("index_nested: arguments not nested");
      if (sm > s1) {
        if (mult.is_infinite()) return IndexValue::infinite();
        out.mul_prime_power(p, checked_mul(sm - s1, mult.value()));
      }
    }
    if (sv.cofinal) {
      uint32_t bound = asymptotic_bound(h1, m, p, sv);
      bool slope1 = h1.tau_eff(p) != kTauInf;
      bool slopem = m.tau_eff(p) != kTauInf;
      if (slope1 != slopem) return IndexValue::infinite();
      if (m.trace_cyclic(p, bound + 1) != h1.trace_cyclic(p, bound + 1))
        return IndexValue::infinite();  // constant positive gap over infinitely many slots
      uint64_t total = 0;
      for (uint32_t n = sv.cofinal_from; n <= bound; ++n) {
        uint32_t s1 = h1.trace_cyclic(p, n);
        uint32_t sm = m.trace_cyclic(p, n);
        if (sm < s1) throw Diagnostic("index_nested: arguments not nested");
        total += sm - s1;
      }
      out.mul_prime_power(p, total);
    }
    if (sv.beta.is_positive()) {
      uint32_t t1 = h1.tau_eff(p);
      uint32_t tm = m.tau_eff(p);
      if (t1 != tm) {
        if (t1 == kTauInf) return IndexValue::infinite();
        if (tm > t1) throw Diagnostic("index_nested: arguments not nested");
        if (sv.beta.is_infinite()) return IndexValue::infinite();
        out.mul_prime_power(p, checked_mul(t1 - tm, sv.beta.value()));
      }
    }
    if (sv.gamma.is_positive()) {
      LocalizedTrace z1 = h1.trace_localized(p);
      LocalizedTrace zm = m.trace_localized(p);
      if (!z1.zero) {
        if (zm.zero) return IndexValue::infinite();
        if (zm.scale > z1.scale) {
          if (sv.gamma.is_infinite()) return IndexValue::infinite();
          out.mul_prime_power(p, checked_mul(zm.scale - z1.scale, sv.gamma.value()));
        }
      }
    }
  }
  return out;
}

IndexValue index_of(const PPSubgroup& h_big, const PPSubgroup& h_small) {
  require_same_base(h_big, h_small);
  return index_nested(h_big, intersect(h_big, h_small));
}

bool precsim(const PPSubgroup& h1, const PPSubgroup& h2) {
  return index_of(h1, h2).is_finite();
}

bool commensurable(const PPSubgroup& h1, const PPSubgroup& h2) {
  return precsim(h1, h2) && precsim(h2, h1);
}

bool PPSubgroup::operator==(const PPSubgroup& o) const {
  return is_subset(*this, o) && is_subset(o, *this);
}

std::string PPSubgroup::to_string() const {
  if (recs_.empty()) return torsional_ ? "0" : "A";
  std::vector<std::string> atoms;
  for (const auto& [p, rec] : recs_) {
    for (const auto& g : rec.gs)
      atoms.push_back("G(" + std::to_string(p) + ";" + std::to_string(g.a) + "," +
                      std::to_string(g.b) + ")");
    if (rec.torsion)
      atoms.push_back("T(" + std::to_string(p) + ";" + std::to_string(*rec.torsion) + ")");
  }
  std::string out = atoms[0];
  for (size_t i = 1; i < atoms.size(); ++i) out += " ∧ " + atoms[i];
  return out;
}

std::string PPSubgroup::syntactic_key() const {
  std::ostringstream os;
  os << (torsional_ ? "t" : "f");
  for (const auto& [p, rec] : recs_) {
    os << "|" << p << ":";
    if (rec.torsion) os << "T" << *rec.torsion;
    for (const auto& g : rec.gs) os << "G" << g.a << "," << g.b;
  }
  return os.str();
}

}  // namespace minlab
