#include "minlab/classify.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace minlab {

namespace {

// Per-prime infinite-direction flags driving the structural route.
struct WideFlags {
  bool wide_cyclic = false;    // some alpha_{p,n} infinite
  bool cofinal = false;        // unbounded torsion support
  bool wide_gamma = false;     // gamma infinite
  bool wide_beta = false;      // beta infinite
  bool any_beta = false, any_gamma = false;
  uint32_t wc_min = 0, wc_max = 0;  // range of infinite-alpha exponents
};

std::map<uint64_t, WideFlags> wide_flags(const GroupDescriptor& d) {
  std::map<uint64_t, WideFlags> out;
  for (const auto& l : d.locals) {
    WideFlags f;
    f.cofinal = l.cofinal;
    f.wide_gamma = l.gamma.is_infinite();
    f.wide_beta = l.beta.is_infinite();
    f.any_beta = l.beta.is_positive();
    f.any_gamma = l.gamma.is_positive();
    for (const auto& [n, m] : l.alpha) {
      if (m.is_infinite()) {
        if (!f.wide_cyclic) f.wc_min = f.wc_max = n;
        f.wc_min = std::min(f.wc_min, n);
        f.wc_max = std::max(f.wc_max, n);
        f.wide_cyclic = true;
      }
    }
    out[l.p] = f;
  }
  return out;
}

}  // namespace

// The descriptor-level classification, matching linearity of the
// commensurability order on the p.p. subgroup lattice.  Two independent
// infinite directions of compatible kinds break linearity:
//   - two primes carrying scaling-wide structure (wide cyclic slot, cofinal
//     support, or infinitely many Z_(p) copies),
//   - two primes carrying torsion-wide structure (wide cyclic slot, cofinal
//     support, or infinitely many Prufer copies),
//   - a wide cyclic slot against unbounded support at the same prime, or two
//     wide cyclic slots more than one exponent apart (crossing traces),
//   - a wide cyclic slot next to any divisible or torsion-free content.
bool dp_min_structural(const GroupDescriptor& d) {
  auto flags = wide_flags(d);
  unsigned scaling_wide = 0, torsion_wide = 0;
  bool any_wc = false, any_beta = false, any_gamma = false;
  for (const auto& [p, f] : flags) {
    (void)p;
    if (f.wide_cyclic || f.cofinal || f.wide_gamma) ++scaling_wide;
    if (f.wide_cyclic || f.cofinal || f.wide_beta) ++torsion_wide;
    if (f.wide_cyclic && f.cofinal) return false;
    if (f.wide_cyclic && f.wc_max - f.wc_min >= 2) return false;
    any_wc = any_wc || f.wide_cyclic;
    any_beta = any_beta || f.any_beta;
    any_gamma = any_gamma || f.any_gamma;
  }
  if (scaling_wide >= 2 || torsion_wide >= 2) return false;
  if (any_wc && (any_beta || any_gamma || d.delta.is_positive() || d.tail.has_value()))
    return false;
  return true;
}

bool vc_min_structural(const GroupDescriptor& d) {
  if (!dp_min_structural(d)) return false;
  auto flags = wide_flags(d);
  for (const auto& [p, f] : flags) {
    (void)p;
    if (f.cofinal) return false;
  }
  for (const auto& [p, f] : flags) {
    if (!f.wide_gamma) continue;
    if (d.tail) return false;
    for (const auto& [q, g] : flags)
      if (q != p && g.any_gamma) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Critical generating set and the lattice route

std::vector<CriticalMember> critical_set(const GroupDescriptor& dd) {
  GroupDescriptor d = normalize(dd);
  std::set<uint64_t> base_primes = d.local_primes();
  std::vector<uint64_t> primes(base_primes.begin(), base_primes.end());
  uint64_t fresh_prime = 0;
  if (d.tail) {
    fresh_prime = smallest_prime_excluding(base_primes);
    primes.push_back(fresh_prime);
  }
  uint32_t n_crit = 2 + std::max<uint32_t>(d.max_exponent(), 2);
  uint32_t a_star = n_crit + 2;

  struct Tagged {
    PPSubgroup h;
    bool fresh, special;
  };
  std::vector<Tagged> singles;
  singles.push_back({PPSubgroup::full(d), false, false});
  singles.push_back({PPSubgroup::zero(d), false, false});
  for (uint64_t p : primes) {
    bool is_fresh = (p == fresh_prime);
    for (uint32_t a = 1; a <= n_crit; ++a)
      for (uint32_t b = 0; b < a; ++b)
        singles.push_back({phi_subgroup(d, pow_u64(p, a), pow_u64(p, b)), is_fresh, false});
    for (uint32_t j = 1; j <= n_crit; ++j)
      singles.push_back({phi_subgroup(d, 0, pow_u64(p, j)), is_fresh, false});
    // Unbounded-exponent representatives: the scaling direction at p keeps
    // moving past the saturation bound when slots are cofinal or localized.
    PrimeLocal l = d.effective_local(p);
    if (l.cofinal || l.gamma.is_positive()) {
      singles.push_back({phi_subgroup(d, pow_u64(p, a_star), 1), is_fresh, true});
      singles.push_back({phi_subgroup(d, pow_u64(p, a_star), p), is_fresh, true});
    }
  }
  // Mixed-prime torsion subgroups A[p^i q^j]; these are not meets of the
  // per-prime torsion atoms.
  for (size_t x = 0; x < primes.size(); ++x)
    for (size_t y = x + 1; y < primes.size(); ++y) {
      bool is_fresh = primes[x] == fresh_prime || primes[y] == fresh_prime;
      for (uint32_t i = 1; i <= 2; ++i)
        for (uint32_t j = 1; j <= 2; ++j)
          singles.push_back(
              {phi_subgroup(d, 0, pow_u64(primes[x], i) * pow_u64(primes[y], j)),
               is_fresh, false});
    }

  std::vector<CriticalMember> out;
  std::map<std::string, size_t> seen;
  auto push = [&](const PPSubgroup& h, bool fresh, bool special) {
    std::string key = h.syntactic_key();
    auto it = seen.find(key);
    if (it == seen.end()) {
      seen[key] = out.size();
      out.push_back({h, fresh, special});
    } else {
      out[it->second].fresh = out[it->second].fresh && fresh;
      out[it->second].special = out[it->second].special && special;
    }
  };
  for (const auto& s : singles) push(s.h, s.fresh, s.special);
  size_t nsingles = out.size();
  for (size_t i = 0; i < nsingles; ++i)
    for (size_t j = i + 1; j < nsingles; ++j) {
      CriticalMember a = out[i], b = out[j];
      push(intersect(a.h, b.h), a.fresh || b.fresh, a.special || b.special);
    }
  return out;
}

namespace {

struct Analysis {
  std::vector<CriticalMember> mem;
  std::vector<std::vector<uint8_t>> leq;  // leq[i][j]: mem[i] precsim mem[j]
  std::vector<std::vector<int>> classes;  // commensurability classes
  std::vector<int> class_of;
};

Analysis analyze(const GroupDescriptor& d) {
  Analysis a;
  a.mem = critical_set(d);
  size_t n = a.mem.size();
  a.leq.assign(n, std::vector<uint8_t>(n, 0));
  for (size_t i = 0; i < n; ++i) a.leq[i][i] = 1;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      PPSubgroup meet = intersect(a.mem[i].h, a.mem[j].h);
      a.leq[i][j] = index_nested(a.mem[i].h, meet).is_finite();
      a.leq[j][i] = index_nested(a.mem[j].h, meet).is_finite();
    }
  a.class_of.assign(n, -1);
  for (size_t i = 0; i < n; ++i) {
    if (a.class_of[i] >= 0) continue;
    int id = static_cast<int>(a.classes.size());
    a.classes.emplace_back();
    for (size_t j = i; j < n; ++j)
      if (a.class_of[j] < 0 && a.leq[i][j] && a.leq[j][i]) {
        a.class_of[j] = id;
        a.classes[id].push_back(static_cast<int>(j));
      }
  }
  return a;
}

std::optional<NonDpWitness> find_incomparable(const Analysis& a) {
  for (size_t i = 0; i < a.mem.size(); ++i)
    for (size_t j = i + 1; j < a.mem.size(); ++j)
      if (!a.leq[i][j] && !a.leq[j][i]) return NonDpWitness{a.mem[i].h, a.mem[j].h};
  return std::nullopt;
}

CoherenceResult coherent_impl(const Analysis& a) {
  for (const auto& cls : a.classes) {
    bool has_candidate = false, found = false;
    for (int i : cls) {
      if (a.mem[i].fresh || a.mem[i].special) continue;
      has_candidate = true;
      bool ok = true;
      for (size_t j = 0; j < a.mem.size() && ok; ++j) {
        if (a.leq[i][j] && !a.leq[j][i])  // strictly below mem[j]
          ok = is_subset(a.mem[i].h, a.mem[j].h);
      }
      if (ok) {
        found = true;
        break;
      }
    }
    if (has_candidate && !found) {
      CoherenceResult r;
      r.coherent = false;
      for (int i : cls) {
        r.failing_class.push_back(a.mem[i].h);
        if (r.failing_class.size() >= 4) break;
      }
      return r;
    }
  }
  return {true, {}};
}

// Scaling subgroup at the primes outside the descriptor: the n!-part of the
// chain restricted to tail primes.
PPSubgroup tail_factorial(const GroupDescriptor& d, uint32_t n,
                          const std::set<uint64_t>& skip) {
  if (!d.tail) return PPSubgroup::full(d);
  std::map<uint64_t, uint32_t> exps;
  for (uint64_t q : primes_up_to(n)) {
    if (skip.count(q)) continue;
    exps[q] = static_cast<uint32_t>(factorial_valuation(n, q));
  }
  return scaling_subgroup(d, exps);
}

}  // namespace

LatticeResult dp_min_lattice(const GroupDescriptor& d) {
  Analysis a = analyze(d);
  auto w = find_incomparable(a);
  if (w) return {false, w};
  return {true, std::nullopt};
}

CoherenceResult upwardly_coherent(const GroupDescriptor& d) {
  Analysis a = analyze(d);
  return coherent_impl(a);
}

namespace {

ChainWitness witness_chain_impl(const GroupDescriptor& d, uint32_t depth, Analysis& a) {
  if (find_incomparable(a))
    throw Diagnostic("witness_chain: commensurability order is not linear");
  // Descending class order under the (linear) commensurability order.
  std::vector<int> order(a.classes.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    int rx = a.classes[x][0], ry = a.classes[y][0];
    return a.leq[ry][rx] && !a.leq[rx][ry];  // x strictly above y
  });
  std::set<uint64_t> base_primes = d.local_primes();
  std::vector<PPSubgroup> levels;
  for (uint32_t n = 0; n <= depth; ++n) levels.push_back(tail_factorial(d, n, base_primes));

  std::vector<PPSubgroup> desc;
  PPSubgroup cur = PPSubgroup::full(d);
  desc.push_back(cur);
  for (int cid : order) {
    PPSubgroup class_meet = a.mem[a.classes[cid][0]].h;
    for (size_t k = 1; k < a.classes[cid].size(); ++k)
      class_meet = intersect(class_meet, a.mem[a.classes[cid][k]].h);
    for (const auto& level : levels) {
      cur = intersect(cur, intersect(class_meet, level));
      if (!(cur == desc.back())) desc.push_back(cur);
    }
  }
  ChainWitness w;
  w.chain.assign(desc.rbegin(), desc.rend());
  return w;
}

}  // namespace

ChainWitness witness_chain(const GroupDescriptor& dd, uint32_t depth) {
  GroupDescriptor d = normalize(dd);
  if (!vc_min_structural(d))
    throw std::invalid_argument("witness_chain: descriptor is not VC-minimal");
  Analysis a = analyze(d);
  return witness_chain_impl(d, depth, a);
}

ChainVerification verify_chain(const GroupDescriptor& dd, const ChainWitness& w,
                               uint64_t k_max, uint64_t m_max) {
  GroupDescriptor d = normalize(dd);
  ChainVerification v;
  if (w.chain.empty()) {
    v.detail = "empty chain";
    return v;
  }
  for (size_t i = 0; i + 1 < w.chain.size(); ++i) {
    if (!is_subset(w.chain[i], w.chain[i + 1]) || is_subset(w.chain[i + 1], w.chain[i])) {
      v.detail = "chain not strictly increasing at position " + std::to_string(i);
      return v;
    }
  }
  for (uint64_t k = 0; k <= k_max; ++k)
    for (uint64_t m = 0; m <= m_max; ++m) {
      PPSubgroup phi = phi_subgroup(d, k, m);
      bool covered = false;
      for (size_t i = w.chain.size(); i-- > 0;) {
        if (is_subset(w.chain[i], phi)) {
          covered = index_nested(phi, w.chain[i]).is_finite();
          break;  // largest contained member decides
        }
      }
      if (!covered) {
        v.failed_k = k;
        v.failed_m = m;
        v.detail = "phi_{" + std::to_string(k) + "," + std::to_string(m) +
                   "} is not a finite union of cosets of any chain member";
        return v;
      }
    }
  v.ok = true;
  v.detail = "all cells covered";
  return v;
}

FailureWitness witness_failure(const GroupDescriptor& dd, uint32_t depth) {
  GroupDescriptor d = normalize(dd);
  if (!dp_min_structural(d) || vc_min_structural(d))
    throw std::invalid_argument(
        "witness_failure: requires a dp-minimal, non-VC-minimal descriptor");
  FailureWitness w;
  w.depth = depth;
  w.b_group = PPSubgroup::full(d);

  const PrimeLocal* cofinal_local = nullptr;
  for (const auto& l : d.locals)
    if (l.cofinal) cofinal_local = &l;

  if (cofinal_local) {
    // Torsion tower against A[p]: scaling chain along the support exponents.
    uint64_t p = cofinal_local->p;
    w.b_group = phi_subgroup(d, 0, p);
    std::vector<uint32_t> exps{0};
    for (uint32_t n = 1; exps.size() <= depth; ++n)
      if (cofinal_local->alpha_at(n).is_positive()) exps.push_back(n);
    for (uint32_t e : exps) w.chain_a.push_back(scaling_subgroup(d, {{p, e}}));
    return w;
  }

  // Scaling-wide prime q blocked by markers at other primes.
  uint64_t q = 0;
  for (const auto& l : d.locals)
    if (l.gamma.is_infinite()) q = l.p;
  if (q == 0) throw Diagnostic("witness_failure: no failure mechanism found");
  w.b_group = phi_subgroup(d, q, 1);
  if (d.tail) {
    std::set<uint64_t> avoid = d.local_primes();
    std::map<uint64_t, uint32_t> exps;
    w.chain_a.push_back(PPSubgroup::full(d));
    for (uint32_t i = 0; i < depth; ++i) {
      uint64_t fresh = smallest_prime_excluding(avoid);
      avoid.insert(fresh);
      exps[fresh] = 1;
      w.chain_a.push_back(scaling_subgroup(d, exps));
    }
  } else {
    uint64_t marker = 0;
    for (const auto& l : d.locals)
      if (l.p != q && l.gamma.is_positive()) marker = l.p;
    if (marker == 0) throw Diagnostic("witness_failure: no marker prime found");
    for (uint32_t i = 0; i <= depth; ++i)
      w.chain_a.push_back(scaling_subgroup(d, {{marker, i}}));
  }
  return w;
}

FailureVerification verify_failure(const GroupDescriptor& dd, const FailureWitness& w) {
  GroupDescriptor d = normalize(dd);
  (void)d;
  FailureVerification v;
  if (w.chain_a.size() < w.depth + 1) {
    v.detail = "chain too short for declared depth";
    return v;
  }
  for (uint32_t i = 0; i < w.depth; ++i) {
    if (!is_subset(w.chain_a[i + 1], w.chain_a[i])) {
      v.detail = "chain not descending at " + std::to_string(i);
      return v;
    }
    PPSubgroup mi = intersect(w.chain_a[i], w.b_group);
    PPSubgroup mi1 = intersect(w.chain_a[i + 1], w.b_group);
    if (mi == mi1) {
      v.detail = "A_i cap B stabilizes at " + std::to_string(i);
      return v;
    }
    if (index_nested(w.chain_a[i], mi).is_finite()) {
      v.detail = "[A_i : A_i cap B] finite at " + std::to_string(i);
      return v;
    }
    if (!index_nested(w.b_group, intersect(w.b_group, w.chain_a[i])).is_finite()) {
      v.detail = "[B : A_i cap B] infinite at " + std::to_string(i);
      return v;
    }
  }
  v.ok = true;
  v.detail = "all conditions hold to depth " + std::to_string(w.depth);
  return v;
}

Verdict vc_min(const GroupDescriptor& dd, const ClassifyConfig& config) {
  GroupDescriptor d = normalize(dd);
  Verdict v;
  v.dp_structural = dp_min_structural(d);
  v.vc_structural = vc_min_structural(d);
  Analysis a = analyze(d);
  auto incomparable = find_incomparable(a);
  v.dp_lattice = !incomparable.has_value();
  CoherenceResult coh = coherent_impl(a);
  v.upward_coherent = coh.coherent;

  v.dp_minimal = v.dp_structural;
  v.vc_minimal = v.vc_structural;
  v.convexly_orderable = v.vc_minimal;
  v.route_agreement = (v.dp_structural == v.dp_lattice) &&
                      (v.vc_structural == (v.dp_structural && v.upward_coherent));
  if (!v.route_agreement) {
    std::ostringstream os;
    os << "route disagreement: dp structural=" << v.dp_structural
       << " lattice=" << v.dp_lattice << "; vc structural=" << v.vc_structural
       << " dp&coherent=" << (v.dp_structural && v.upward_coherent);
    v.diagnostics = os.str();
  }

  if (!v.dp_minimal) {
    if (incomparable) v.evidence = *incomparable;
    v.witness_verified = incomparable.has_value();
  } else if (v.vc_minimal && !v.dp_lattice) {
    // structural and lattice routes disagree; no chain can be built
    v.witness_verified = false;
  } else if (v.vc_minimal) {
    uint32_t depth = std::max<uint32_t>(
        config.chain_depth,
        static_cast<uint32_t>(std::max<uint64_t>(config.k_max, config.m_max)));
    ChainWitness w = witness_chain_impl(d, depth, a);
    ChainVerification ver = verify_chain(d, w, config.k_max, config.m_max);
    w.k_max = config.k_max;
    w.m_max = config.m_max;
    v.witness_verified = ver.ok;
    if (!ver.ok) {
      v.diagnostics += (v.diagnostics.empty() ? "" : "; ") + ("chain: " + ver.detail);
    }
    v.evidence = std::move(w);
  } else {
    FailureWitness w = witness_failure(d, config.failure_depth);
    FailureVerification ver = verify_failure(d, w);
    v.witness_verified = ver.ok;
    if (!ver.ok) {
      v.diagnostics += (v.diagnostics.empty() ? "" : "; ") + ("failure: " + ver.detail);
    }
    v.evidence = std::move(w);
  }
  return v;
}

TransferCheck summand_transfer_check(const GroupDescriptor& a, const GroupDescriptor& b) {
  TransferCheck t;
  GroupDescriptor sum;
  try {
    sum = direct_sum(a, b);
  } catch (const std::exception& e) {
    t.ok = true;
    t.detail = std::string("skipped: direct sum not representable (") + e.what() + ")";
    return t;
  }
  bool vc_a = vc_min_structural(a);
  bool vc_sum = vc_min_structural(sum);
  if (vc_sum && !vc_a) {
    t.detail = "monotone transfer violated: sum VC-minimal but first summand is not";
    return t;
  }
  bool b_finite = !b.tail && b.delta.is_zero();
  for (const auto& l : b.locals) {
    if (l.cofinal || l.beta.is_positive() || l.gamma.is_positive()) b_finite = false;
    for (const auto& [i, m] : l.alpha)
      if (m.is_infinite()) b_finite = false;
  }
  if (b_finite && vc_a != vc_sum) {
    t.detail = "finite summand changed the verdict";
    return t;
  }
  t.ok = true;
  t.detail = b_finite ? "monotone + finite-summand equivalence hold"
                      : "monotone transfer holds";
  return t;
}

}  // namespace minlab
