#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "minlab/oracle.hpp"
#include "minlab/ppcalc.hpp"

using namespace minlab;

namespace {

// Random p.p. subgroup over d: a meet of up to three phi atoms.
PPSubgroup random_pp(Rng& rng, const GroupDescriptor& d) {
  auto pick = [&](uint64_t n) { return std::uniform_int_distribution<uint64_t>(0, n - 1)(rng); };
  PPSubgroup h = PPSubgroup::full(d);
  uint64_t atoms = 1 + pick(3);
  for (uint64_t i = 0; i < atoms; ++i) {
    uint64_t k = pick(13);
    uint64_t m = pick(13);
    h = intersect(h, phi_subgroup(d, k, m));
  }
  return h;
}

}  // namespace

TEST_CASE("phi traces match the brute oracle on the named cells") {
  // {x in Z/4 : exists y, 2y = x} = {0, 2}
  FiniteGroupSpec z4{{4}};
  ExplicitGroup g4(z4, 256);
  SubsetMask brute = brute_phi(g4, 2, 1);
  CHECK(mask_to_string(brute) == "{0,2}");
  GroupDescriptor d4 = z4.descriptor();
  PPSubgroup h = phi_subgroup(d4, 2, 1);
  CHECK(h.trace_cyclic(2, 2) == 1);
  CHECK(expand_mask(g4, h) == brute);
}

TEST_CASE("phi on torsion and trivial cells") {
  GroupDescriptor prufer = parse_descriptor("Zp8(3)");
  PPSubgroup tor = phi_subgroup(prufer, 0, 3);
  CHECK_FALSE(tor.trace_prufer(3).full);
  CHECK(tor.trace_prufer(3).level == 1);

  Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    GroupDescriptor d = random_descriptor(rng);
    // k = 1: witness y = m x, so the whole group
    CHECK(phi_subgroup(d, 1, 1 + (i % 12)) == PPSubgroup::full(d));
    // m = 0 and k = m = 0: whole group
    CHECK(phi_subgroup(d, i % 12, 0) == PPSubgroup::full(d));
  }
}

TEST_CASE("intersect examples") {
  GroupDescriptor zl = parse_descriptor("Zloc(5)");
  PPSubgroup s1 = phi_subgroup(zl, 5, 1);
  PPSubgroup s2 = phi_subgroup(zl, 25, 1);
  CHECK(intersect(s1, s2) == s2);  // nested scalings

  // {x : 5x = 0} cap 5A in Z/25: both are the trace s = 1
  GroupDescriptor c52 = parse_descriptor("C(5,2)^w");
  PPSubgroup t = phi_subgroup(c52, 0, 5);
  PPSubgroup fifth = phi_subgroup(c52, 5, 1);
  CHECK(intersect(t, fifth) == fifth);
  FiniteGroupSpec spec{{25}};
  ExplicitGroup g(spec, 256);
  SubsetMask torsion_mask = brute_phi(g, 0, 5);
  SubsetMask fifth_mask = brute_phi(g, 5, 1);
  CHECK(torsion_mask == fifth_mask);

  Rng rng(9);
  for (int i = 0; i < 60; ++i) {
    GroupDescriptor d = random_descriptor(rng);
    PPSubgroup h = random_pp(rng, d);
    CHECK(intersect(h, PPSubgroup::full(d)) == h);
  }
}

TEST_CASE("intersect is idempotent, commutative, associative") {
  Rng rng(11);
  for (int i = 0; i < 80; ++i) {
    GroupDescriptor d = random_descriptor(rng);
    PPSubgroup a = random_pp(rng, d), b = random_pp(rng, d), c = random_pp(rng, d);
    CHECK(intersect(a, a) == a);
    CHECK(intersect(a, b) == intersect(b, a));
    CHECK(intersect(intersect(a, b), c) == intersect(a, intersect(b, c)));
  }
}

TEST_CASE("index examples") {
  GroupDescriptor wide = parse_descriptor("C(3,2)^w");
  CHECK_FALSE(index_of(PPSubgroup::full(wide), phi_subgroup(wide, 3, 1)).is_finite());

  GroupDescriptor prufer = parse_descriptor("Zp8(5)");
  PPSubgroup whole = PPSubgroup::full(prufer);
  PPSubgroup t2 = phi_subgroup(prufer, 0, 25);
  PPSubgroup t1 = phi_subgroup(prufer, 0, 5);
  CHECK_FALSE(index_of(whole, t2).is_finite());
  IndexValue step = index_of(t2, t1);
  REQUIRE(step.is_finite());
  CHECK(step.to_u64() == 5);
  CHECK(step.exponent_of(5) == 1);
}

TEST_CASE("oracle grounding for the infinite index: [A : pA] grows without bound in rank") {
  // on (Z/p^k)^r the index of pA is p^r; the symbolic verdict over the wide
  // descriptor must therefore be infinite
  for (uint32_t r = 1; r <= 3; ++r) {
    std::vector<uint64_t> orders(r, 4);  // (Z/4)^r
    ExplicitGroup g(FiniteGroupSpec{orders}, 256);
    SubsetMask image = brute_phi(g, 2, 1);
    uint64_t img = 0;
    for (bool b : image) img += b;
    CHECK(g.order() / img == pow_u64(2, r));
    IndexValue finite_idx =
        index_of(PPSubgroup::full(FiniteGroupSpec{orders}.descriptor()),
                 phi_subgroup(FiniteGroupSpec{orders}.descriptor(), 2, 1));
    CHECK(finite_idx.to_u64() == pow_u64(2, r));
  }
  GroupDescriptor wide = parse_descriptor("C(2,2)^w");
  CHECK_FALSE(index_of(PPSubgroup::full(wide), phi_subgroup(wide, 2, 1)).is_finite());
}

TEST_CASE("index is multiplicative over towers and absorbs infinity") {
  Rng rng(13);
  for (int i = 0; i < 80; ++i) {
    GroupDescriptor d = random_descriptor(rng);
    PPSubgroup h1 = random_pp(rng, d);
    PPSubgroup h2 = intersect(h1, random_pp(rng, d));
    PPSubgroup h3 = intersect(h2, random_pp(rng, d));
    IndexValue i13 = index_of(h1, h3);
    IndexValue i12 = index_of(h1, h2);
    IndexValue i23 = index_of(h2, h3);
    if (i12.is_finite() && i23.is_finite()) {
      REQUIRE(i13.is_finite());
      IndexValue prod = i12;
      prod.mul(i23);
      CHECK(i13 == prod);
    } else {
      CHECK_FALSE(i13.is_finite());
    }
  }
}

TEST_CASE("precsim and commensurability") {
  Rng rng(17);
  for (int i = 0; i < 40; ++i) {
    GroupDescriptor d = random_descriptor(rng);
    PPSubgroup h = random_pp(rng, d);
    // pA <= A always by containment
    CHECK(precsim(intersect(h, phi_subgroup(d, 2, 1)), h));
  }

  GroupDescriptor zl = parse_descriptor("Zloc(7)");
  CHECK(commensurable(PPSubgroup::full(zl), phi_subgroup(zl, 7, 1)));

  GroupDescriptor two_wide = parse_descriptor("C(2,1)^w (+) C(3,1)^w");
  PPSubgroup pa = phi_subgroup(two_wide, 2, 1);
  PPSubgroup qa = phi_subgroup(two_wide, 3, 1);
  CHECK_FALSE(precsim(pa, qa));
  CHECK_FALSE(precsim(qa, pa));
  // oracle spot-check on the finite shadow (Z/2)^2 (+) (Z/3)^2
  FiniteGroupSpec spec{{2, 2, 3, 3}};
  ExplicitGroup g(spec, 256);
  GroupDescriptor shadow = spec.descriptor();
  auto count = [](const SubsetMask& m) {
    uint64_t c = 0;
    for (bool b : m) c += b;
    return c;
  };
  SubsetMask pa_mask = brute_phi(g, 2, 1);
  SubsetMask qa_mask = brute_phi(g, 3, 1);
  SubsetMask meet_mask(g.order());
  for (uint64_t x = 0; x < g.order(); ++x) meet_mask[x] = pa_mask[x] && qa_mask[x];
  // [pA : pA cap qA] = 9 and [qA : cap] = 4 on the shadow; the symbolic index
  // over the shadow descriptor must match exactly
  CHECK(count(pa_mask) / count(meet_mask) ==
        index_of(phi_subgroup(shadow, 2, 1), phi_subgroup(shadow, 3, 1)).to_u64());
  CHECK(count(qa_mask) / count(meet_mask) ==
        index_of(phi_subgroup(shadow, 3, 1), phi_subgroup(shadow, 2, 1)).to_u64());
}

TEST_CASE("commensurability is an equivalence with meet-closed classes") {
  Rng rng(19);
  int done = 0;
  while (done < 60) {
    GroupDescriptor d = random_descriptor(rng);
    PPSubgroup a = random_pp(rng, d), b = random_pp(rng, d), c = random_pp(rng, d);
    CHECK(commensurable(a, a));
    if (commensurable(a, b)) {
      CHECK(commensurable(b, a));
      CHECK(commensurable(intersect(a, b), a));  // B0 cap B1 ~ B0
      if (commensurable(b, c)) CHECK(commensurable(a, c));
      ++done;
    }
  }
}

TEST_CASE("is_subset examples and partial-order laws") {
  GroupDescriptor pr = parse_descriptor("Zp8(7)");
  CHECK(is_subset(phi_subgroup(pr, 0, 7), phi_subgroup(pr, 0, 49)));
  CHECK_FALSE(is_subset(PPSubgroup::full(pr), phi_subgroup(pr, 0, 7)));

  GroupDescriptor c3 = parse_descriptor("C(5,3)");
  PPSubgroup deep = phi_subgroup(c3, 25, 1);
  PPSubgroup shallow = phi_subgroup(c3, 5, 1);
  CHECK(is_subset(deep, shallow));
  // oracle confirmation: 25(Z/125) inside 5(Z/125)
  FiniteGroupSpec spec{{125}};
  ExplicitGroup g(spec, 256);
  SubsetMask dm = brute_phi(g, 25, 1), sm = brute_phi(g, 5, 1);
  for (uint64_t x = 0; x < g.order(); ++x)
    if (dm[x]) CHECK(sm[x]);

  Rng rng(23);
  for (int i = 0; i < 60; ++i) {
    GroupDescriptor d = random_descriptor(rng);
    PPSubgroup a = random_pp(rng, d), b = random_pp(rng, d), c = random_pp(rng, d);
    CHECK(is_subset(a, a));
    if (is_subset(a, b) && is_subset(b, a)) CHECK(a == b);
    if (is_subset(a, b) && is_subset(b, c)) CHECK(is_subset(a, c));
    CHECK(is_subset(intersect(a, b), a));
  }
}

TEST_CASE("phi commutes with direct sums") {
  Rng rng(29);
  int done = 0;
  while (done < 60) {
    GroupDescriptor a = random_descriptor(rng);
    GroupDescriptor b = random_descriptor(rng);
    GroupDescriptor s;
    try {
      s = direct_sum(a, b);
    } catch (const std::invalid_argument&) {
      continue;
    }
    uint64_t k = rng() % 13, m = rng() % 13;
    PPSubgroup hs = phi_subgroup(s, k, m);
    PPSubgroup ha = phi_subgroup(a, k, m);
    PPSubgroup hb = phi_subgroup(b, k, m);
    // traces agree slot-by-slot on each summand's content
    for (const auto& l : a.locals) {
      for (const auto& [n, mult] : l.alpha) {
        (void)mult;
        CHECK(hs.trace_cyclic(l.p, n) == ha.trace_cyclic(l.p, n));
      }
      if (l.beta.is_positive()) CHECK(hs.trace_prufer(l.p) == ha.trace_prufer(l.p));
      if (l.gamma.is_positive()) CHECK(hs.trace_localized(l.p) == ha.trace_localized(l.p));
    }
    for (const auto& l : b.locals) {
      for (const auto& [n, mult] : l.alpha) {
        (void)mult;
        CHECK(hs.trace_cyclic(l.p, n) == hb.trace_cyclic(l.p, n));
      }
      if (l.beta.is_positive()) CHECK(hs.trace_prufer(l.p) == hb.trace_prufer(l.p));
      if (l.gamma.is_positive()) CHECK(hs.trace_localized(l.p) == hb.trace_localized(l.p));
    }
    CHECK(hs.trace_rational_full() == ha.trace_rational_full());
    ++done;
  }
}

TEST_CASE("meet, containment, and index agree with oracle set arithmetic") {
  Rng rng(37);
  for (int t = 0; t < 200; ++t) {
    // random finite group of order <= 256 in prime-power form
    std::vector<uint64_t> orders;
    uint64_t prod = 1;
    static const uint64_t pps[] = {2, 4, 8, 3, 9, 5, 25, 7};
    for (int draws = 0; draws < 4; ++draws) {
      uint64_t c = pps[rng() % 8];
      if (prod * c > 256) continue;
      prod *= c;
      orders.push_back(c);
    }
    if (orders.empty()) orders.push_back(4);
    FiniteGroupSpec spec{orders};
    ExplicitGroup g(spec, 256);
    GroupDescriptor d = spec.descriptor();
    PPSubgroup h1 = intersect(phi_subgroup(d, rng() % 13, rng() % 13),
                              phi_subgroup(d, rng() % 13, rng() % 13));
    PPSubgroup h2 = phi_subgroup(d, rng() % 13, rng() % 13);
    SubsetMask m1 = expand_mask(g, h1), m2 = expand_mask(g, h2);
    SubsetMask mm = expand_mask(g, intersect(h1, h2));
    uint64_t c1 = 0, cm = 0;
    bool contained = true;
    for (uint64_t x = 0; x < g.order(); ++x) {
      CHECK(mm[x] == (m1[x] && m2[x]));
      c1 += m1[x];
      cm += mm[x];
      if (m1[x] && !m2[x]) contained = false;
    }
    CHECK(is_subset(h1, h2) == contained);
    IndexValue idx = index_of(h1, h2);
    REQUIRE(idx.is_finite());  // finite group: all indices finite
    CHECK(idx.to_u64() == c1 / cm);
  }
}

TEST_CASE("printing uses reduced atom lists") {
  GroupDescriptor d = parse_descriptor("C(2,2)^w (+) Zloc(2)");
  CHECK(PPSubgroup::full(d).to_string() == "A");
  CHECK(PPSubgroup::zero(d).to_string() == "0");
  PPSubgroup mixed = intersect(phi_subgroup(d, 2, 1), phi_subgroup(d, 0, 2));
  CHECK(mixed.to_string() == "G(2;1,0) ∧ T(2;1)");
}

TEST_CASE("base mismatch is rejected") {
  GroupDescriptor a = parse_descriptor("C(2,1)");
  GroupDescriptor b = parse_descriptor("C(3,1)");
  CHECK_THROWS_AS(intersect(PPSubgroup::full(a), PPSubgroup::full(b)), std::invalid_argument);
  CHECK_THROWS_AS(is_subset(PPSubgroup::full(a), PPSubgroup::full(b)), std::invalid_argument);
  CHECK_THROWS_AS(index_of(PPSubgroup::full(a), PPSubgroup::full(b)), std::invalid_argument);
}
