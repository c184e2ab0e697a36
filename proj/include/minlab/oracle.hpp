#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "minlab/ppcalc.hpp"
#include "minlab/szmielew.hpp"

namespace minlab {

// Desk-scale finite abelian group given by its cyclic factor orders.
struct FiniteGroupSpec {
  std::vector<uint64_t> cyclic_orders;  // each >= 2
  uint64_t order() const;
  std::string to_string() const;
  // Same group in prime-power form, factors sorted; this is the canonical
  // element coordinate system used by ExplicitGroup.
  FiniteGroupSpec prime_power_form() const;
  GroupDescriptor descriptor() const;
};

using SubsetMask = std::vector<bool>;  // canonical tuple order

// Explicit element table for a FiniteGroupSpec: elements are mixed-radix
// tuples over the prime-power factors, addition is componentwise.
class ExplicitGroup {
public:
  ExplicitGroup(const FiniteGroupSpec& spec, uint64_t order_bound);

  uint64_t order() const { return order_; }
  const std::vector<uint64_t>& radices() const { return radices_; }
  std::vector<uint64_t> tuple_of(uint64_t idx) const;
  uint64_t add(uint64_t x, uint64_t y) const;
  uint64_t scale(uint64_t c, uint64_t x) const;  // c*x by repeated addition
  const FiniteGroupSpec& spec() const { return spec_; }

private:
  FiniteGroupSpec spec_;  // prime-power form
  std::vector<uint64_t> radices_;
  uint64_t order_ = 1;
};

// {x : exists y, k y = m x} by exhaustive enumeration.
SubsetMask brute_phi(const ExplicitGroup& g, uint64_t k, uint64_t m);

// Element set predicted by the symbolic traces of phi_subgroup over the
// group's descriptor, in the same canonical element order.
SubsetMask symbolic_phi_mask(const ExplicitGroup& g, uint64_t k, uint64_t m);
SubsetMask expand_mask(const ExplicitGroup& g, const PPSubgroup& h);

// Closure of the atoms' coset masks under complement/intersection/union up
// to `depth` rounds, deduplicated.  Throws when the closure would exceed
// max_sets.
std::vector<SubsetMask> definable_enum(const ExplicitGroup& g,
                                       const std::vector<std::pair<uint64_t, uint64_t>>& atoms,
                                       uint32_t depth, size_t max_sets = 1 << 16);

struct MismatchLine {
  std::string group;
  uint64_t k = 0, m = 0;
  std::string symbolic;
  std::string brute;
};

struct CrossCheckReport {
  uint64_t cells = 0;
  std::vector<MismatchLine> mismatches;
  bool ok() const { return mismatches.empty(); }
};

// Differential check of one group over the whole (k, m) grid.
CrossCheckReport cross_check(const ExplicitGroup& g, uint64_t k_max, uint64_t m_max);

// All multisets of prime-power cyclic factors with order in [2, max_order].
std::vector<FiniteGroupSpec> enumerate_group_specs(uint64_t max_order);

// Differential suite over every group of order <= max_order; parallel over
// groups.  Stops collecting after max_report mismatches per group.
CrossCheckReport cross_check_grid(uint64_t max_order, uint64_t k_max, uint64_t m_max,
                                  unsigned workers);

std::string mask_to_string(const SubsetMask& mask);

}  // namespace minlab
