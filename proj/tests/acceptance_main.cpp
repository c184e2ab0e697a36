// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Bounds and tolerances are pinned here.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "minlab/classify.hpp"
#include "minlab/cli.hpp"
#include "minlab/directed.hpp"
#include "minlab/oracle.hpp"
#include "minlab/ordered.hpp"
#include "minlab/valued.hpp"

using namespace minlab;

namespace {

struct Criterion {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Symbolic phi traces equal brute force on every abelian group of order
//    <= 256 over the full 0 <= k,m <= 12 grid.
Criterion oracle_differential() {
  auto t0 = std::chrono::steady_clock::now();
  CrossCheckReport r = cross_check_grid(256, 12, 12, 8);
  std::ostringstream os;
  os << enumerate_group_specs(256).size() << " groups, " << r.cells << " cells, "
     << r.mismatches.size() << " mismatches, " << seconds_since(t0) << "s";
  if (!r.mismatches.empty()) {
    const auto& m = r.mismatches.front();
    os << "; first: " << m.group << " k=" << m.k << " m=" << m.m;
  }
  return {r.mismatches.empty() && seconds_since(t0) <= 300.0, os.str()};
}

// 2. Golden corpus: exact verdicts, both routes agreeing, witnesses passing
//    verification at bounds (20, 20).
Criterion golden_corpus_criterion() {
  ClassifyConfig cfg;
  cfg.k_max = 20;
  cfg.m_max = 20;
  size_t ok = 0;
  std::string first_bad;
  for (const auto& e : golden_corpus()) {
    Verdict v = vc_min(parse_descriptor(e.descriptor), cfg);
    bool good = v.dp_minimal == e.dp_minimal && v.vc_minimal == e.vc_minimal &&
                v.route_agreement && v.witness_verified &&
                v.convexly_orderable == v.vc_minimal;
    if (good)
      ++ok;
    else if (first_bad.empty())
      first_bad = e.name + (v.diagnostics.empty() ? "" : (": " + v.diagnostics));
  }
  std::ostringstream os;
  os << ok << "/" << golden_corpus().size() << " descriptors exact";
  if (!first_bad.empty()) os << "; first failure: " << first_bad;
  return {ok == golden_corpus().size(), os.str()};
}

// 3. Route agreement on 500 seeded random descriptors.
Criterion route_agreement() {
  const int kTrials = 500;
  std::mutex mu;
  int agreed = 0;
  std::string first_bad;
  parallel_for(kTrials, 8, [&](uint64_t lo, uint64_t hi) {
    for (uint64_t i = lo; i < hi; ++i) {
      Rng rng(0xA11CE + i);
      GroupDescriptor d = random_descriptor(rng);
      bool dp_s = dp_min_structural(d);
      LatticeResult lat = dp_min_lattice(d);
      CoherenceResult coh = upwardly_coherent(d);
      bool vc_s = vc_min_structural(d);
      bool ok = dp_s == lat.linear && vc_s == (dp_s && coh.coherent);
      std::lock_guard<std::mutex> g(mu);
      if (ok)
        ++agreed;
      else if (first_bad.empty())
        first_bad = d.to_string();
    }
  });
  std::ostringstream os;
  os << agreed << "/" << kTrials << " agree";
  if (!first_bad.empty()) os << "; first disagreement: \"" << first_bad << "\"";
  return {agreed == kTrials, os.str()};
}

// 4. Greedy refutation at desk scale: exhaustive over all 8! orders at n=1
//    (components >= 2 always), 10^4 seeded orders at n=2 (components >= 3),
//    within the runtime budget.
Criterion greedy_refutation() {
  auto t0 = std::chrono::steady_clock::now();
  AdversarialInstance a3 = build_adversary(2, 1, 3);
  std::vector<uint32_t> order(8);
  for (uint32_t i = 0; i < 8; ++i) order[i] = i;
  uint64_t tried = 0;
  uint32_t min_c = UINT32_MAX;
  do {
    RefutationRecord rec = greedy_refute(a3, order);
    min_c = std::min(min_c, rec.components);
    ++tried;
  } while (std::next_permutation(order.begin(), order.end()));
  bool ok1 = tried == 40320 && min_c >= 2;

  AdversarialInstance a5 = build_adversary(2, 1, 5);
  Rng rng(0x5EED);
  std::vector<uint32_t> order5(32);
  for (uint32_t i = 0; i < 32; ++i) order5[i] = i;
  uint32_t min_c5 = UINT32_MAX;
  for (int t = 0; t < 10000; ++t) {
    std::shuffle(order5.begin(), order5.end(), rng);
    RefutationRecord rec = greedy_refute(a5, order5);
    min_c5 = std::min(min_c5, rec.components);
  }
  bool ok2 = min_c5 >= 3;
  double dt = seconds_since(t0);
  std::ostringstream os;
  os << "n=1: " << tried << " orders, min components " << min_c << "; n=2: 10000 orders, min "
     << min_c5 << "; " << dt << "s";
  return {ok1 && ok2 && dt <= 120.0, os.str()};
}

// 5. Adversarial invariants for n <= 12, p in {2,3,5}; build_adversary
//    throws on any violation.
Criterion adversary_invariants() {
  for (uint64_t p : {2, 3, 5}) {
    for (uint32_t n = 0; n <= 12; ++n) {
      AdversarialInstance inst = build_adversary(p, 1, n);
      if (inst.top().size() != (size_t{1} << n))
        return {false, "cardinality failure at p=" + std::to_string(p)};
    }
  }
  return {true,
          "|A_n| = 2^n, pairwise v <= gamma_{n-1}, all gamma_i realized; n <= 12, p in {2,3,5}"};
}

// 6. Convex-order soundness: 1000 random directed families, every member a
//    single component; exhaustive probe on small universes.
Criterion convex_order_soundness() {
  std::mutex mu;
  int good = 0;
  parallel_for(1000, 8, [&](uint64_t lo, uint64_t hi) {
    for (uint64_t i = lo; i < hi; ++i) {
      Rng rng(0xD1EC + i);
      uint32_t max_universe = (i % 10 == 0) ? 10000 : 300;
      SetFamily f = random_directed_family(rng, max_universe, 20000);
      ConvexOrder o = convex_order(f);
      bool all_one = true;
      for (const auto& m : f.members) all_one = all_one && count_components(o, m) == 1;
      std::lock_guard<std::mutex> g(mu);
      if (all_one) ++good;
    }
  });
  int probes_ok = 0;
  const int kProbes = 60;
  for (int i = 0; i < kProbes; ++i) {
    Rng rng(0xCAFE + i);
    SetFamily f = random_directed_family(rng, 8, 10);
    uint32_t best = exhaustive_min_max_components(f);
    ConvexOrder o = convex_order(f);
    uint32_t achieved = 0;
    for (const auto& m : f.members) achieved = std::max(achieved, count_components(o, m));
    if (best == 1 && achieved == 1) ++probes_ok;
  }
  std::ostringstream os;
  os << good << "/1000 families all-convex; " << probes_ok << "/" << kProbes
     << " exhaustive probes minimal=1";
  return {good == 1000 && probes_ok == kProbes, os.str()};
}

// 7. Ordered-group suite: D_{p,n} disjoint and window-complete in Z up to
//    10^6; profile classification matches on Q, Z, Z[1/2]; root criterion
//    flags sqrt(2).
Criterion ordered_suite() {
  OrderedGroupModel z = OrderedGroupModel::integers();
  bool dpn_ok = true;
  for (uint64_t p : {2, 3, 5}) {
    DpnReport rep = dpn_witnesses(z, p, {1, 2, 3, 4, 5}, 1000000);
    dpn_ok = dpn_ok && rep.pairwise_disjoint;
    for (const auto& lvl : rep.levels) dpn_ok = dpn_ok && lvl.windows_ok && !lvl.set.empty();
  }
  DivisibilityProfile q_profile;
  q_profile.default_divisible = true;
  bool q_ok = classify_ordered(q_profile).convexly_orderable;
  bool z_ok = !classify_ordered(z.profile()).convexly_orderable;
  OrderedGroupModel zhalf = OrderedGroupModel::scaled_rationals({2});
  OrderedVerdict zh = classify_ordered(zhalf.profile());
  bool zh_ok = !zh.convexly_orderable && zh.witness_prime && *zh.witness_prime == 3;
  FieldRootVerdict fr = field_root_verdict(FieldModel{}, {{2, 1}}, 3);
  bool fr_ok = fr.result == FieldRootVerdict::Result::NotConvexlyOrderable &&
               fr.counterexample && fr.counterexample->second == 2;
  std::ostringstream os;
  os << "D_{p,n} windows " << (dpn_ok ? "ok" : "FAIL") << "; profiles Q/Z/Z[1/2] "
     << (q_ok && z_ok && zh_ok ? "ok" : "FAIL") << "; root criterion "
     << (fr_ok ? "flags 2" : "FAIL");
  return {dpn_ok && q_ok && z_ok && zh_ok && fr_ok, os.str()};
}

// 8. Induced order on truncated-series snapshots: total, antisymmetric,
//    isomorphic to the valuation order; transfer bound on 1000 marked sets.
Criterion induced_suite() {
  const uint32_t P = 16;
  std::vector<TruncatedSeries> snapshot;
  Rng gen(0xBEEF);
  for (uint32_t v = 0; v < P; ++v) snapshot.push_back(TruncatedSeries::monomial(2, P, v));
  for (int i = 0; i < 140; ++i) {
    TruncatedSeries s = TruncatedSeries::zero(2, P);
    for (uint32_t j = 0; j < P; ++j) s.c[j] = static_cast<uint8_t>(gen() & 1);
    bool nonzero = false;
    for (uint8_t d : s.c) nonzero = nonzero || d;
    if (nonzero) snapshot.push_back(s);
  }
  std::sort(snapshot.begin(), snapshot.end());
  snapshot.erase(std::unique(snapshot.begin(), snapshot.end()), snapshot.end());
  TruncatedSeries origin = TruncatedSeries::zero(2, P);
  auto val_of = [&](const TruncatedSeries& s) { return vdist(s, origin).v; };
  std::vector<uint32_t> idx(snapshot.size());
  for (uint32_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](uint32_t a, uint32_t b) {
    auto ka = std::make_pair(val_of(snapshot[a]), snapshot[a].c);
    auto kb = std::make_pair(val_of(snapshot[b]), snapshot[b].c);
    return ka < kb;
  });
  std::vector<uint32_t> rank(snapshot.size());
  for (uint32_t pos = 0; pos < idx.size(); ++pos) rank[idx[pos]] = pos;
  InterpretationSpec spec;
  spec.snapshot_size = static_cast<uint32_t>(snapshot.size());
  std::map<uint32_t, std::vector<uint32_t>> by_val;
  for (uint32_t i = 0; i < snapshot.size(); ++i) by_val[val_of(snapshot[i])].push_back(i);
  std::vector<uint32_t> vals;
  for (auto& [v, cls] : by_val) {
    vals.push_back(v);
    spec.classes.push_back(cls);
  }
  InducedOrder ord = induced_order(spec, rank);
  bool iso = ord.total && ord.antisymmetric && ord.transitive;
  for (size_t i = 0; i < ord.class_sequence.size() && iso; ++i)
    iso = vals[ord.class_sequence[i]] == vals[i] && (i == 0 || vals[i - 1] < vals[i]);
  Rng rng(0xFEED);
  int transfer_ok = 0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<uint32_t> marked;
    for (uint32_t c = 0; c < spec.classes.size(); ++c)
      if (rng() & 1) marked.push_back(c);
    TransferCheckResult tr = induced_transfer_check(spec, idx, ord, marked);
    if (tr.ok) ++transfer_ok;
  }
  std::ostringstream os;
  os << "order " << (iso ? "isomorphic to the valuation order" : "NOT isomorphic") << "; "
     << transfer_ok << "/1000 transfer bounds hold";
  return {iso && transfer_ok == 1000, os.str()};
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    Criterion (*fn)();
  };
  const Entry entries[] = {
      {"oracle-differential", oracle_differential},
      {"classification-golden-corpus", golden_corpus_criterion},
      {"route-agreement", route_agreement},
      {"greedy-refutation-desk-scale", greedy_refutation},
      {"adversarial-invariants", adversary_invariants},
      {"convex-order-soundness", convex_order_soundness},
      {"ordered-group-suite", ordered_suite},
      {"induced-order-suite", induced_suite},
  };
  int failures = 0;
  int n = 1;
  for (const auto& e : entries) {
    Criterion c;
    try {
      c = e.fn();
    } catch (const std::exception& ex) {
      c = {false, std::string("exception: ") + ex.what()};
    }
    std::printf("[%s] %d %s: %s\n", c.pass ? "PASS" : "FAIL", n, e.name, c.detail.c_str());
    std::fflush(stdout);
    if (!c.pass) ++failures;
    ++n;
  }
  return failures;
}
