#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace minlab {

inline constexpr const char* kToolName = "minlab";
inline constexpr const char* kToolVersion = "0.1.0";

// Thrown when a verified mathematical invariant fails at runtime.  Always
// build-breaking: callers never catch and continue.
class Diagnostic : public std::runtime_error {
public:
  explicit Diagnostic(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public std::runtime_error {
public:
  ParseError(size_t pos, const std::string& msg)
      : std::runtime_error("parse error at " + std::to_string(pos) + ": " + msg), pos_(pos) {}
  size_t position() const { return pos_; }

private:
  size_t pos_;
};

bool is_prime(uint64_t n);

// Prime factorization by trial division; inputs are desk scale.
std::map<uint64_t, uint32_t> factorize(uint64_t n);

// v_p(n) for n >= 1.
uint32_t valuation_of(uint64_t n, uint64_t p);

// v_p(n!) by Legendre's formula.
uint64_t factorial_valuation(uint64_t n, uint64_t p);

std::vector<uint64_t> primes_up_to(uint64_t n);

// Smallest prime not contained in `avoid`.
uint64_t smallest_prime_excluding(const std::set<uint64_t>& avoid);

uint64_t checked_mul(uint64_t a, uint64_t b);
uint64_t checked_add(uint64_t a, uint64_t b);
uint64_t pow_u64(uint64_t base, uint32_t exp);

// Runs fn(begin, end) over [0, n) split into contiguous chunks, one thread
// per chunk.  workers == 0 or 1 runs inline.
void parallel_for(uint64_t n, unsigned workers,
                  const std::function<void(uint64_t, uint64_t)>& fn);

using Rng = std::mt19937_64;

}  // namespace minlab
