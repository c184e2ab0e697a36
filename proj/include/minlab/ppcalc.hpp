#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "minlab/szmielew.hpp"

namespace minlab {

// Index of one subgroup in another, kept factored to stay exact.
class IndexValue {
public:
  static IndexValue one() { return IndexValue(); }
  static IndexValue infinite() {
    IndexValue v;
    v.infinite_ = true;
    return v;
  }

  bool is_finite() const { return !infinite_; }
  void mul_prime_power(uint64_t p, uint64_t e);
  void mul(const IndexValue& o);
  uint64_t exponent_of(uint64_t p) const;
  const std::map<uint64_t, uint64_t>& factors() const { return factors_; }
  uint64_t to_u64() const;  // throws on infinite

  friend bool operator==(const IndexValue&, const IndexValue&) = default;
  std::string to_string() const;

private:
  bool infinite_ = false;
  std::map<uint64_t, uint64_t> factors_;
};

// Atom {x : p^b x in p^a A}; reduced to a > b (a <= b is the whole group).
struct GAtom {
  uint32_t a = 0, b = 0;
  friend bool operator==(const GAtom&, const GAtom&) = default;
};

// Reduced per-prime record of a p.p. subgroup: an optional torsion bound
// (trace of A[p^torsion] on the p-local part) and an antichain of G atoms.
struct PrimeRecord {
  std::optional<uint32_t> torsion;  // always >= 1 when present
  std::vector<GAtom> gs;            // b strictly ascending, a-b strictly ascending
  bool empty() const { return !torsion.has_value() && gs.empty(); }
  friend bool operator==(const PrimeRecord&, const PrimeRecord&) = default;
};

struct PruferTrace {
  bool full = false;
  uint32_t level = 0;  // A[p^level]; 0 is the zero subgroup
  friend bool operator==(const PruferTrace&, const PruferTrace&) = default;
};

struct LocalizedTrace {
  bool zero = false;
  uint32_t scale = 0;  // p^scale Z_(p); 0 is the whole summand
  friend bool operator==(const LocalizedTrace&, const LocalizedTrace&) = default;
};

// Canonical form of a finite intersection of phi_{k,m} subgroups over a fixed
// base descriptor.  A torsional subgroup is one contained in some A[m]: its
// trace defaults to zero at every prime not named in the records.
class PPSubgroup {
public:
  static PPSubgroup full(const GroupDescriptor& d);
  static PPSubgroup zero(const GroupDescriptor& d);

  const GroupDescriptor& base() const { return base_; }
  bool torsional() const { return torsional_; }
  const std::map<uint64_t, PrimeRecord>& records() const { return recs_; }

  uint32_t trace_cyclic(uint64_t p, uint32_t n) const;  // s in [0..n]: p^s Z/p^n
  PruferTrace trace_prufer(uint64_t p) const;
  LocalizedTrace trace_localized(uint64_t p) const;
  bool trace_rational_full() const { return !torsional_; }

  // Effective torsion exponent at p; UINT32_MAX encodes "no bound".
  uint32_t tau_eff(uint64_t p) const;

  std::string to_string() const;     // reduced atom list, e.g. "G(2;1,0) ^ T(2;1)"
  std::string syntactic_key() const; // canonical-form key for dedup

  // Trace equality over the base (every slot, tails included).
  bool operator==(const PPSubgroup& o) const;

  friend PPSubgroup intersect(const PPSubgroup& h1, const PPSubgroup& h2);
  friend bool is_subset(const PPSubgroup& h1, const PPSubgroup& h2);
  friend PPSubgroup phi_subgroup(const GroupDescriptor& d, uint64_t k, uint64_t m);
  friend PPSubgroup scaling_subgroup(const GroupDescriptor& d,
                                     const std::map<uint64_t, uint32_t>& exponents);
  friend IndexValue index_nested(const PPSubgroup& big, const PPSubgroup& small);

private:
  GroupDescriptor base_;
  bool torsional_ = false;
  std::map<uint64_t, PrimeRecord> recs_;

  void canonicalize();
};

// phi_{k,m}(A) = {x : exists y, k y = m x} in canonical form.
// k = 0 gives the m-torsion subgroup A[m]; m = 0 or k = 1 gives the whole group.
PPSubgroup phi_subgroup(const GroupDescriptor& d, uint64_t k, uint64_t m);

// kA for k = prod p^{e_p} given factored; exponents may exceed what fits in
// a machine word as a product.
PPSubgroup scaling_subgroup(const GroupDescriptor& d,
                            const std::map<uint64_t, uint32_t>& exponents);

PPSubgroup intersect(const PPSubgroup& h1, const PPSubgroup& h2);
bool is_subset(const PPSubgroup& h1, const PPSubgroup& h2);

// [h_big : h_big /\ h_small].
IndexValue index_of(const PPSubgroup& h_big, const PPSubgroup& h_small);

// h1 precsim h2  iff  [h1 : h1 /\ h2] is finite.
bool precsim(const PPSubgroup& h1, const PPSubgroup& h2);
bool commensurable(const PPSubgroup& h1, const PPSubgroup& h2);

}  // namespace minlab
