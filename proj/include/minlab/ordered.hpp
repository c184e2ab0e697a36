#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "minlab/common.hpp"

namespace minlab {

// Which primes divide the whole group: pG = G?
struct DivisibilityProfile {
  bool default_divisible = false;
  std::map<uint64_t, bool> overrides;
  std::string annotation;  // e.g. the Presburger quasi-minimality note on Z

  bool divisible_at(uint64_t p) const;
  // Smallest non-divisible prime up to the probe limit.
  std::optional<uint64_t> first_nondivisible(uint64_t probe_limit = 1000) const;
};

struct OrderedVerdict {
  bool o_minimal = false, vc_minimal = false, convexly_orderable = false;
  std::optional<uint64_t> witness_prime;
  std::string annotation;
};

// All three flags coincide: the group theory is tame iff divisible everywhere.
OrderedVerdict classify_ordered(const DivisibilityProfile& profile);

// Desk models of infinite ordered abelian groups.
class OrderedGroupModel {
public:
  enum class Kind { Integers, ScaledRationals, LexPower };

  // Elements: rationals coords[0]/den for the integer/rational models,
  // lexicographic integer vectors for LexPower.
  struct Element {
    std::vector<int64_t> coords;
    int64_t den = 1;
  };

  static OrderedGroupModel integers();
  static OrderedGroupModel scaled_rationals(std::vector<uint64_t> inverted_primes);
  static OrderedGroupModel lex_power(uint32_t rank);

  Kind kind() const { return kind_; }
  DivisibilityProfile profile() const;
  bool contains(const Element& e) const;
  Element add(const Element& a, const Element& b) const;
  int compare(const Element& a, const Element& b) const;  // -1 / 0 / 1
  bool positive(const Element& e) const { return compare(e, zero()) > 0; }
  Element zero() const;
  std::string format(const Element& e) const;

  // v_p of a nonzero element (min over coordinates for LexPower).
  int64_t valuation(const Element& e, uint64_t p) const;

  // Positive elements up to `bound`, denominators capped for the rational
  // model, coordinates capped for the lexicographic one.
  std::vector<Element> enumerate_positive(int64_t bound, int64_t den_cap = 64) const;

private:
  Kind kind_ = Kind::Integers;
  std::vector<uint64_t> inverted_;
  uint32_t rank_ = 1;
};

// D_{p,n} = positive elements with p-exponent exactly n.
struct DpnReport {
  uint64_t p = 0;
  struct PerN {
    uint32_t n = 0;
    std::vector<OrderedGroupModel::Element> set;
    bool windows_ok = false;        // nonempty in every dyadic window above the floor
    uint32_t windows_checked = 0;
  };
  std::vector<PerN> levels;
  bool pairwise_disjoint = false;
};

DpnReport dpn_witnesses(const OrderedGroupModel& model, uint64_t p,
                        const std::vector<uint32_t>& n_list, int64_t bound);

// The constructive cofinality step: given a > 0 and c > 0 with p not
// dividing c, returns x = p^n b >= a with p-exponent exactly n.
OrderedGroupModel::Element cofinal_witness(const OrderedGroupModel& model,
                                           const OrderedGroupModel::Element& a,
                                           const OrderedGroupModel::Element& c, uint64_t p,
                                           uint32_t n);

// Finite core of the coterminal-disjoint-sets refutation: a candidate order
// on a snapshot, 2k+1 pairwise disjoint sets reaching the upper window, and
// the alternating points forcing > k convex components of the final segment.
struct Refutation {
  bool conclusive = false;
  std::string reason;                       // when inconclusive
  size_t threshold = 0;                     // snapshot index `a`
  std::vector<size_t> chosen_components;    // member indices, order-position sorted
  std::vector<size_t> alternating_points;   // snapshot indices, order-ascending
  uint32_t final_segment_components = 0;
};

// snapshot_size points ordered 0 < 1 < ... by value; `order` is the candidate
// linear order as a permutation of indices.  Every set must be pairwise
// disjoint from the others and meet the top half of the snapshot.
Refutation coterminal_refute(size_t snapshot_size, const std::vector<uint32_t>& order,
                             uint32_t k, const std::vector<std::vector<uint32_t>>& sets);

bool verify_refutation(size_t snapshot_size, const std::vector<uint32_t>& order, uint32_t k,
                       const Refutation& r);

// Exact rational nth-root criterion for ordered fields.
struct Rational {
  int64_t num = 0, den = 1;
};

struct FieldModel {
  bool roots_by_fiat = false;  // real-closed stub
};

struct FieldRootVerdict {
  enum class Result { NotConvexlyOrderable, Inconclusive } result;
  std::optional<std::pair<Rational, uint32_t>> counterexample;  // (sample, n)
};

FieldRootVerdict field_root_verdict(const FieldModel& field, const std::vector<Rational>& samples,
                                    uint32_t n_max);

}  // namespace minlab
