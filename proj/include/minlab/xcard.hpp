#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace minlab {

// Extended cardinal: an exact natural number or a single collapsed infinite
// value.  All infinite cardinals are identified; the classifications downstream
// depend only on finite-vs-infinite.
class XCard {
public:
  constexpr XCard() = default;
  static constexpr XCard finite(uint64_t n) { return XCard(false, n); }
  static constexpr XCard infinite() { return XCard(true, 0); }

  constexpr bool is_finite() const { return !infinite_; }
  constexpr bool is_infinite() const { return infinite_; }
  constexpr bool is_zero() const { return !infinite_ && n_ == 0; }
  constexpr bool is_positive() const { return infinite_ || n_ > 0; }

  constexpr uint64_t value() const {
    if (infinite_) throw std::logic_error("XCard: value() of infinite");
    return n_;
  }

  friend constexpr XCard operator+(XCard a, XCard b) {
    if (a.infinite_ || b.infinite_) return infinite();
    return finite(a.n_ + b.n_);
  }
  XCard& operator+=(XCard o) { return *this = *this + o; }

  friend constexpr bool operator==(XCard a, XCard b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.n_ == b.n_);
  }
  // Finite < Infinite; finite values by magnitude.
  friend constexpr auto operator<=>(XCard a, XCard b) {
    if (a.infinite_ != b.infinite_) return a.infinite_ <=> b.infinite_;
    return a.n_ <=> b.n_;
  }

  std::string to_string() const { return infinite_ ? "w" : std::to_string(n_); }

private:
  constexpr XCard(bool inf, uint64_t n) : infinite_(inf), n_(n) {}
  bool infinite_ = false;
  uint64_t n_ = 0;
};

}  // namespace minlab
