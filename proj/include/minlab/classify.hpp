#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "minlab/ppcalc.hpp"

namespace minlab {

// Linear chain of p.p. subgroups; every phi_{k,m} within the verified bounds
// is a finite union of cosets of some member.
struct ChainWitness {
  std::vector<PPSubgroup> chain;  // strictly increasing under is_subset
  uint64_t k_max = 0, m_max = 0;  // bounds up to which verification ran
};

// Descending chain A_0 >= A_1 >= ... and a subgroup B with
// A_i cap B != A_{i+1} cap B, [A_i : A_i cap B] infinite and
// [B : A_i cap B] finite for all i < depth.
struct FailureWitness {
  std::vector<PPSubgroup> chain_a;  // depth + 1 elements
  PPSubgroup b_group;
  uint32_t depth = 0;
};

// Pair incomparable under precsim in both directions.
struct NonDpWitness {
  PPSubgroup h1, h2;
};

struct Verdict {
  bool dp_minimal = false;
  bool vc_minimal = false;
  bool convexly_orderable = false;
  bool route_agreement = false;
  bool dp_structural = false, dp_lattice = false;
  bool upward_coherent = false, vc_structural = false;
  bool witness_verified = false;
  std::variant<std::monostate, ChainWitness, FailureWitness, NonDpWitness> evidence;
  std::string diagnostics;
};

struct ClassifyConfig {
  uint64_t k_max = 20, m_max = 20;
  uint32_t chain_depth = 8;  // factorial/torsion tower depth; the effective
                             // chain depth never drops below the verify bounds
  uint32_t failure_depth = 8;
};

// Structural route: descriptor pattern matching.
bool dp_min_structural(const GroupDescriptor& d);
bool vc_min_structural(const GroupDescriptor& d);

// Lattice route: linearity of the commensurability quasi-order over the
// critical generating set of p.p. subgroups.
struct LatticeResult {
  bool linear = false;
  std::optional<NonDpWitness> witness;
};
LatticeResult dp_min_lattice(const GroupDescriptor& d);

struct CoherenceResult {
  bool coherent = false;
  std::vector<PPSubgroup> failing_class;  // representatives when incoherent
};
CoherenceResult upwardly_coherent(const GroupDescriptor& d);

// Witness construction and verification.
ChainWitness witness_chain(const GroupDescriptor& d, uint32_t depth);

struct ChainVerification {
  bool ok = false;
  uint64_t failed_k = 0, failed_m = 0;
  std::string detail;
};
ChainVerification verify_chain(const GroupDescriptor& d, const ChainWitness& w,
                               uint64_t k_max, uint64_t m_max);

FailureWitness witness_failure(const GroupDescriptor& d, uint32_t depth);

struct FailureVerification {
  bool ok = false;
  std::string detail;
};
FailureVerification verify_failure(const GroupDescriptor& d, const FailureWitness& w);

Verdict vc_min(const GroupDescriptor& d, const ClassifyConfig& config = {});

struct TransferCheck {
  bool ok = false;
  std::string detail;
};
// th(a (+) b) VC-minimal implies th(a) VC-minimal; when b is a finite group
// the two verdicts agree exactly.
TransferCheck summand_transfer_check(const GroupDescriptor& a, const GroupDescriptor& b);

// Critical generating set, exposed for the property suites.
struct CriticalMember {
  PPSubgroup h;
  bool fresh = false;    // mentions the representative tail prime
  bool special = false;  // uses an exponent beyond the saturation bound
};
std::vector<CriticalMember> critical_set(const GroupDescriptor& d);

}  // namespace minlab
