#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "minlab/common.hpp"
#include "minlab/xcard.hpp"

namespace minlab {

// Shape carried by cofinitely many primes when a descriptor has a uniform
// tail.  The prime itself is abstracted; all multiplicities are finite.
struct TailTemplate {
  std::map<uint32_t, uint64_t> alpha;  // exponent i >= 1 -> multiplicity
  uint64_t beta = 0;                   // Prufer copies
  uint64_t gamma = 0;                  // Z_(p) copies

  bool trivial() const { return alpha.empty() && beta == 0 && gamma == 0; }
  friend bool operator==(const TailTemplate&, const TailTemplate&) = default;
};

// The p-local part of a descriptor:
//   (+)_{i} (Z/p^i)^(alpha_i)  (+)  Z(p^inf)^(beta)  (+)  Z_(p)^(gamma)
// with optional cofinal support: alpha_i = 1 for every i >= cofinal_from,
// explicit entries only below that point.
struct PrimeLocal {
  uint64_t p = 0;
  std::map<uint32_t, XCard> alpha;  // exponent -> multiplicity (no zero entries)
  bool cofinal = false;
  uint32_t cofinal_from = 1;  // meaningful only when cofinal
  XCard beta = XCard::finite(0);
  XCard gamma = XCard::finite(0);

  // alpha_i as a function, tail-aware.
  XCard alpha_at(uint32_t i) const;
  bool trivial() const;
  friend bool operator==(const PrimeLocal&, const PrimeLocal&) = default;
};

// Szmielew-style formal direct sum determining a theory of abelian groups:
// prime-local parts, Q^(delta), and an optional uniform tail carried by
// cofinitely many primes.
struct GroupDescriptor {
  std::vector<PrimeLocal> locals;  // pairwise distinct primes, ascending
  XCard delta = XCard::finite(0);
  std::optional<TailTemplate> tail;

  const PrimeLocal* local_at(uint64_t p) const;
  // The local shape a prime actually carries: explicit local if listed,
  // otherwise the tail template instantiated at p (or nothing).
  PrimeLocal effective_local(uint64_t p) const;
  std::set<uint64_t> local_primes() const;
  uint32_t max_exponent() const;  // over explicit alpha keys and template keys
  bool is_zero() const { return locals.empty() && delta.is_zero() && !tail; }

  std::string to_string() const;
  friend bool operator==(const GroupDescriptor&, const GroupDescriptor&) = default;
};

GroupDescriptor normalize(GroupDescriptor d);

// Descriptor grammar:
//   desc  := item ("(+)" item)*
//   item  := atom ("^" mult)? | "tailC(p,1)" | "tailZloc" | "cofinal(" prime ")"
//   atom  := "C(" prime "," int ")" | "Zp8(" prime ")" | "Zloc(" prime ")" | "Q" | "Z" | "0"
//   mult  := int | "w"
// "Z" expands to tailZloc.  Result is normalized.
GroupDescriptor parse_descriptor(const std::string& text);

GroupDescriptor direct_sum(const GroupDescriptor& a, const GroupDescriptor& b);

// True iff A[p] and A/pA are finite for every prime p (tail primes included).
bool is_nonsingular(const GroupDescriptor& d);

// Per-prime dimensions of A[p] and A/pA as extended cardinals.
XCard torsion_dim(const GroupDescriptor& d, uint64_t p);
XCard quotient_dim(const GroupDescriptor& d, uint64_t p);

// Seeded generator of bounded-shape descriptors for property suites.
GroupDescriptor random_descriptor(Rng& rng);

}  // namespace minlab
