#include "minlab/common.hpp"

#include <limits>
#include <mutex>
#include <thread>

namespace minlab {

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

std::map<uint64_t, uint32_t> factorize(uint64_t n) {
  std::map<uint64_t, uint32_t> out;
  if (n == 0) throw std::invalid_argument("factorize(0)");
  for (uint64_t p = 2; p * p <= n; p += (p == 2) ? 1 : 2) {
    while (n % p == 0) {
      ++out[p];
      n /= p;
    }
  }
  if (n > 1) ++out[n];
  return out;
}

uint32_t valuation_of(uint64_t n, uint64_t p) {
  if (n == 0) throw std::invalid_argument("valuation_of(0)");
  uint32_t v = 0;
  while (n % p == 0) {
    ++v;
    n /= p;
  }
  return v;
}

uint64_t factorial_valuation(uint64_t n, uint64_t p) {
  uint64_t total = 0;
  for (uint64_t q = p; q <= n; q *= p) {
    total += n / q;
    if (q > n / p) break;  // q*p would overflow past n anyway
  }
  return total;
}

std::vector<uint64_t> primes_up_to(uint64_t n) {
  std::vector<uint64_t> out;
  for (uint64_t k = 2; k <= n; ++k)
    if (is_prime(k)) out.push_back(k);
  return out;
}

uint64_t smallest_prime_excluding(const std::set<uint64_t>& avoid) {
  for (uint64_t k = 2;; ++k)
    if (is_prime(k) && !avoid.count(k)) return k;
}

uint64_t checked_mul(uint64_t a, uint64_t b) {
  uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("u64 mul overflow");
  return r;
}

uint64_t checked_add(uint64_t a, uint64_t b) {
  uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("u64 add overflow");
  return r;
}

uint64_t pow_u64(uint64_t base, uint32_t exp) {
  uint64_t r = 1;
  for (uint32_t i = 0; i < exp; ++i) r = checked_mul(r, base);
  return r;
}

void parallel_for(uint64_t n, unsigned workers,
                  const std::function<void(uint64_t, uint64_t)>& fn) {
  if (n == 0) return;
  if (workers <= 1 || n == 1) {
    fn(0, n);
    return;
  }
  unsigned nthreads = static_cast<unsigned>(std::min<uint64_t>(workers, n));
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  uint64_t chunk = (n + nthreads - 1) / nthreads;
  std::exception_ptr first_error;
  std::mutex err_mutex;
  for (unsigned t = 0; t < nthreads; ++t) {
    uint64_t lo = t * chunk;
    uint64_t hi = std::min<uint64_t>(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      try {
        fn(lo, hi);
      } catch (...) {
        std::lock_guard<std::mutex> g(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace minlab
