#pragma once

#include <optional>
#include <string>
#include <vector>

#include "minlab/common.hpp"
#include "minlab/ordered.hpp"

namespace minlab {

// Truncated series over Z/pZ in powers of t: coefficients c[0..precision-1].
struct TruncatedSeries {
  uint32_t p = 2;
  uint32_t precision = 0;
  std::vector<uint8_t> c;

  static TruncatedSeries zero(uint32_t p, uint32_t precision);
  static TruncatedSeries monomial(uint32_t p, uint32_t precision, uint32_t power);
  TruncatedSeries plus(const TruncatedSeries& o) const;
  std::string digits() const;  // little-endian coefficient string
  friend bool operator==(const TruncatedSeries&, const TruncatedSeries&) = default;
  friend auto operator<=>(const TruncatedSeries&, const TruncatedSeries&) = default;
};

// Valuation of a difference: exact when < precision, otherwise only the
// lower bound "at least precision" is known.
struct ValuationResult {
  bool exact = false;
  uint32_t v = 0;  // meaningful when exact; otherwise v == precision
};
ValuationResult vdist(const TruncatedSeries& a, const TruncatedSeries& b);

// gamma_n = k p gamma_1 for n = 2k, gamma_1 + k p gamma_1 for n = 2k+1;
// strictly increasing from gamma_0 = 0, and p | gamma_n iff n is even.
struct GammaSeq {
  uint64_t p = 2;
  uint64_t gamma1 = 1;
  std::vector<uint64_t> values;  // gamma_0 .. gamma_n_max
};
GammaSeq gamma_seq(uint64_t p, uint64_t gamma1, uint32_t n_max);

// Levels A_0 .. A_n with |A_n| = 2^n, pairwise valuation <= gamma_{n-1},
// and every gamma_i (i < n) realized as a distance from every point.
struct AdversarialInstance {
  uint32_t n = 0;
  GammaSeq gamma;
  uint32_t precision = 0;
  std::vector<std::vector<TruncatedSeries>> levels;
  const std::vector<TruncatedSeries>& top() const { return levels.back(); }
};

AdversarialInstance build_adversary(uint64_t p, uint64_t gamma1, uint32_t n,
                                    std::optional<uint32_t> precision = std::nullopt);

// X_b = {a : p | v(a - b)}; a == b counts as a member.  Throws when the
// valuation is not decidable at this precision.
bool xb_member(const TruncatedSeries& a, const TruncatedSeries& b, uint64_t p);

// Greedy chain a_0 ... a_{2n+1} through A_{2n+1} under a candidate order:
// a_{i+1} is order-minimal at distance exactly gamma_i from a_i.  The record
// carries b = a_{2n+1} and the component count of X_b within the level.
struct RefutationRecord {
  std::vector<size_t> chain;       // indices into the top level
  size_t b_index = 0;
  uint32_t components = 0;         // X_b components along the order
  uint32_t lower_bound = 0;        // n + 1
};

RefutationRecord greedy_refute(const AdversarialInstance& inst,
                               const std::vector<uint32_t>& order);

std::string serialize_refutation(const AdversarialInstance& inst,
                                 const std::vector<uint32_t>& order,
                                 const RefutationRecord& rec);

// Order on the top level by valuation of the difference from zero, then by
// coefficients; the canonical deterministic order used for golden output.
std::vector<uint32_t> canonical_order(const AdversarialInstance& inst);

// One structure snapshot with an equivalence relation on a subset.
struct InterpretationSpec {
  uint32_t snapshot_size = 0;
  std::vector<std::vector<uint32_t>> classes;  // nonempty, pairwise disjoint
};

struct AltWitness {
  uint32_t class_x = 0, class_y = 0;
  std::vector<uint32_t> sequence;  // alternating r_i, s_i points
};

struct InducedOrder {
  bool total = false, antisymmetric = false, transitive = false;
  std::vector<uint32_t> class_sequence;  // ascending when antisymmetric
  std::optional<AltWitness> failure;
};

// x <= y iff every element of y has an element of x at or below it
// (equivalently min-rank comparison).  Base ranks may carry ties; ties can
// break antisymmetry, which is reported with the alternating witness.
InducedOrder induced_order(const InterpretationSpec& spec,
                           const std::vector<uint32_t>& base_rank);

struct TransferCheckResult {
  uint32_t base_components = 0;
  uint32_t induced_components = 0;
  bool ok = false;  // induced <= base
};

// base_perm is a strict order (permutation of the snapshot).  Counts convex
// components of the union of the marked classes downstairs and of the marked
// set upstairs.
TransferCheckResult induced_transfer_check(const InterpretationSpec& spec,
                                           const std::vector<uint32_t>& base_perm,
                                           const InducedOrder& induced,
                                           const std::vector<uint32_t>& marked_classes);

struct QuasiVerdict {
  enum class Result { NotQuasiVCMinimal, Inconclusive } result;
  std::string label;
  std::optional<uint64_t> witness_prime;
  std::string formula;  // the divisibility-defect formula used
};

// Necessary condition: a quasi-VC-minimal valued field has divisible value
// group; a non-divisible prime yields a negative verdict.
QuasiVerdict quasi_verdict(const DivisibilityProfile& value_group, const std::string& label);

}  // namespace minlab
