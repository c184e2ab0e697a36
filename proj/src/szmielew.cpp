#include "minlab/szmielew.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace minlab {

XCard PrimeLocal::alpha_at(uint32_t i) const {
  auto it = alpha.find(i);
  if (it != alpha.end()) return it->second;
  if (cofinal && i >= cofinal_from) return XCard::finite(1);
  return XCard::finite(0);
}

bool PrimeLocal::trivial() const {
  return alpha.empty() && !cofinal && beta.is_zero() && gamma.is_zero();
}

const PrimeLocal* GroupDescriptor::local_at(uint64_t p) const {
  for (const auto& l : locals)
    if (l.p == p) return &l;
  return nullptr;
}

PrimeLocal GroupDescriptor::effective_local(uint64_t p) const {
  if (const PrimeLocal* l = local_at(p)) return *l;
  PrimeLocal out;
  out.p = p;
  if (tail) {
    for (const auto& [i, m] : tail->alpha) out.alpha[i] = XCard::finite(m);
    out.beta = XCard::finite(tail->beta);
    out.gamma = XCard::finite(tail->gamma);
  }
  return out;
}

std::set<uint64_t> GroupDescriptor::local_primes() const {
  std::set<uint64_t> out;
  for (const auto& l : locals) out.insert(l.p);
  return out;
}

uint32_t GroupDescriptor::max_exponent() const {
  uint32_t m = 0;
  for (const auto& l : locals) {
    if (!l.alpha.empty()) m = std::max(m, l.alpha.rbegin()->first);
    if (l.cofinal) m = std::max(m, l.cofinal_from);
  }
  if (tail && !tail->alpha.empty()) m = std::max(m, tail->alpha.rbegin()->first);
  return m;
}

GroupDescriptor normalize(GroupDescriptor d) {
  if (d.tail && d.tail->trivial()) d.tail.reset();
  for (auto& l : d.locals) {
    // Drop zero multiplicities; with cofinal support this leaves holes below
    // cofinal_from explicit by omission.
    for (auto it = l.alpha.begin(); it != l.alpha.end();)
      it = it->second.is_zero() ? l.alpha.erase(it) : std::next(it);
    if (l.cofinal) {
      // Absorb trailing (i, 1) entries adjacent to the tail region so that
      // equal groups get equal forms.
      while (l.cofinal_from > 1) {
        auto it = l.alpha.find(l.cofinal_from - 1);
        if (it == l.alpha.end() || !(it->second == XCard::finite(1))) break;
        l.alpha.erase(it);
        --l.cofinal_from;
      }
    } else {
      l.cofinal_from = 1;
    }
  }
  std::erase_if(d.locals, [&](const PrimeLocal& l) {
    if (l.trivial()) return true;
    if (d.tail) {
      // A local identical to the instantiated tail template is redundant.
      PrimeLocal t;
      t.p = l.p;
      for (const auto& [i, m] : d.tail->alpha) t.alpha[i] = XCard::finite(m);
      t.beta = XCard::finite(d.tail->beta);
      t.gamma = XCard::finite(d.tail->gamma);
      if (l == t) return true;
    }
    return false;
  });
  std::sort(d.locals.begin(), d.locals.end(),
            [](const PrimeLocal& a, const PrimeLocal& b) { return a.p < b.p; });
  return d;
}

// ---------------------------------------------------------------------------
// Grammar

namespace {

struct Cursor {
  const std::string& s;
  size_t i = 0;

  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eof() {
    skip_ws();
    return i >= s.size();
  }
  bool try_literal(const std::string& lit) {
    skip_ws();
    if (s.compare(i, lit.size(), lit) == 0) {
      i += lit.size();
      return true;
    }
    return false;
  }
  void expect(const std::string& lit) {
    if (!try_literal(lit)) throw ParseError(i, "expected '" + lit + "'");
  }
  uint64_t integer() {
    skip_ws();
    size_t start = i;
    uint64_t v = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      uint64_t digit = static_cast<uint64_t>(s[i] - '0');
      v = checked_mul(v, 10);
      v = checked_add(v, digit);
      ++i;
    }
    if (i == start) throw ParseError(i, "expected integer");
    return v;
  }
  uint64_t prime() {
    skip_ws();
    size_t at = i;
    uint64_t v = integer();
    if (!is_prime(v)) throw ParseError(at, std::to_string(v) + " is not prime");
    return v;
  }
};

struct Builder {
  std::map<uint64_t, PrimeLocal> locals;
  std::map<uint64_t, uint32_t> max_key_seen;  // includes zero-mult terms
  std::set<uint64_t> cofinal_seen;
  XCard delta = XCard::finite(0);
  std::optional<TailTemplate> tail;

  PrimeLocal& local(uint64_t p) {
    auto& l = locals[p];
    l.p = p;
    return l;
  }
  TailTemplate& tail_ref() {
    if (!tail) tail.emplace();
    return *tail;
  }
};

}  // namespace

GroupDescriptor parse_descriptor(const std::string& text) {
  Cursor c{text};
  Builder b;
  bool first = true;
  while (true) {
    if (!first) {
      if (c.eof()) break;
      c.expect("(+)");
    }
    first = false;
    c.skip_ws();
    size_t at = c.i;
    if (c.try_literal("tailC(p,1)")) {
      b.tail_ref().alpha[1] += 1;
    } else if (c.try_literal("tailZloc")) {
      b.tail_ref().gamma += 1;
    } else if (c.try_literal("cofinal(")) {
      uint64_t p = c.prime();
      c.expect(")");
      if (!b.cofinal_seen.insert(p).second)
        throw ParseError(at, "duplicate prime " + std::to_string(p) + " in cofinal");
      b.local(p).cofinal = true;
    } else {
      // term := atom ("^" mult)?
      enum class Kind { Cyclic, Prufer, Zloc, Q, Z, ZeroAtom } kind;
      uint64_t p = 0;
      uint32_t exp = 0;
      if (c.try_literal("C(")) {
        kind = Kind::Cyclic;
        p = c.prime();
        c.expect(",");
        size_t eat = c.i;
        uint64_t e = c.integer();
        if (e == 0 || e > 64) throw ParseError(eat, "cyclic exponent must be in [1,64]");
        exp = static_cast<uint32_t>(e);
        c.expect(")");
      } else if (c.try_literal("Zp8(")) {
        kind = Kind::Prufer;
        p = c.prime();
        c.expect(")");
      } else if (c.try_literal("Zloc(")) {
        kind = Kind::Zloc;
        p = c.prime();
        c.expect(")");
      } else if (c.try_literal("Q")) {
        kind = Kind::Q;
      } else if (c.try_literal("Z")) {
        kind = Kind::Z;
      } else if (c.try_literal("0")) {
        kind = Kind::ZeroAtom;
      } else {
        throw ParseError(c.i, "expected atom");
      }
      XCard mult = XCard::finite(1);
      if (c.try_literal("^")) {
        if (c.try_literal("w"))
          mult = XCard::infinite();
        else
          mult = XCard::finite(c.integer());
      }
      switch (kind) {
        case Kind::Cyclic: {
          auto& l = b.local(p);
          l.alpha[exp] += mult;
          b.max_key_seen[p] = std::max(b.max_key_seen[p], exp);
          break;
        }
        case Kind::Prufer:
          b.local(p).beta += mult;
          break;
        case Kind::Zloc:
          b.local(p).gamma += mult;
          break;
        case Kind::Q:
          b.delta += mult;
          break;
        case Kind::Z:
          if (mult.is_infinite())
            throw ParseError(at, "Z^w is not representable (nonuniform infinite tail)");
          b.tail_ref().gamma += mult.value();
          break;
        case Kind::ZeroAtom:
          break;
      }
    }
    if (c.eof()) break;
  }

  GroupDescriptor d;
  d.delta = b.delta;
  d.tail = b.tail;
  for (auto& [p, l] : b.locals) {
    if (l.cofinal) {
      auto it = b.max_key_seen.find(p);
      l.cofinal_from = (it == b.max_key_seen.end()) ? 1 : it->second + 1;
    }
    d.locals.push_back(std::move(l));
  }
  return normalize(std::move(d));
}

std::string GroupDescriptor::to_string() const {
  std::vector<std::string> items;
  auto mult_suffix = [](XCard m) -> std::string {
    if (m == XCard::finite(1)) return "";
    return "^" + m.to_string();
  };
  for (const auto& l : locals) {
    uint32_t printed_max = 0;
    for (const auto& [i, m] : l.alpha) {
      items.push_back("C(" + std::to_string(l.p) + "," + std::to_string(i) + ")" + mult_suffix(m));
      printed_max = std::max(printed_max, i);
    }
    if (l.cofinal && l.cofinal_from > printed_max + 1) {
      // Holes right below the tail region need an explicit zero-mult marker
      // so that parse(print(d)) == d.
      items.push_back("C(" + std::to_string(l.p) + "," + std::to_string(l.cofinal_from - 1) + ")^0");
    }
    if (l.beta.is_positive())
      items.push_back("Zp8(" + std::to_string(l.p) + ")" + mult_suffix(l.beta));
    if (l.gamma.is_positive())
      items.push_back("Zloc(" + std::to_string(l.p) + ")" + mult_suffix(l.gamma));
  }
  if (delta.is_positive()) items.push_back("Q" + mult_suffix(delta));
  for (const auto& l : locals)
    if (l.cofinal) items.push_back("cofinal(" + std::to_string(l.p) + ")");
  if (tail) {
    for (const auto& [i, m] : tail->alpha) {
      if (i != 1) throw std::logic_error("tail template with exponent != 1 is not printable");
      for (uint64_t c = 0; c < m; ++c) items.push_back("tailC(p,1)");
    }
    for (uint64_t c = 0; c < tail->gamma; ++c) items.push_back("tailZloc");
    if (tail->beta != 0) throw std::logic_error("tail template with beta is not printable");
  }
  if (items.empty()) return "0";
  std::string out = items[0];
  for (size_t i = 1; i < items.size(); ++i) out += " (+) " + items[i];
  return out;
}

GroupDescriptor direct_sum(const GroupDescriptor& a, const GroupDescriptor& b) {
  GroupDescriptor out;
  out.delta = a.delta + b.delta;
  if (a.tail && b.tail) {
    if (!(*a.tail == *b.tail))
      throw std::invalid_argument("direct_sum: two distinct uniform tail templates");
    TailTemplate t = *a.tail;
    for (auto& [i, m] : t.alpha) m *= 2;
    t.beta *= 2;
    t.gamma *= 2;
    out.tail = t;
  } else if (a.tail) {
    out.tail = a.tail;
  } else if (b.tail) {
    out.tail = b.tail;
  }

  std::set<uint64_t> primes = a.local_primes();
  for (uint64_t p : b.local_primes()) primes.insert(p);
  for (uint64_t p : primes) {
    PrimeLocal la = a.effective_local(p);
    PrimeLocal lb = b.effective_local(p);
    if (la.cofinal && lb.cofinal)
      throw std::invalid_argument(
          "direct_sum: two cofinal supports at prime " + std::to_string(p) +
          " (tail multiplicity would exceed 1)");
    if (lb.cofinal) std::swap(la, lb);
    PrimeLocal l;
    l.p = p;
    l.beta = la.beta + lb.beta;
    l.gamma = la.gamma + lb.gamma;
    l.cofinal = la.cofinal;
    if (la.cofinal) {
      uint32_t from = la.cofinal_from;
      if (!lb.alpha.empty()) from = std::max(from, lb.alpha.rbegin()->first + 1);
      l.cofinal_from = from;
      for (uint32_t i = 1; i < from; ++i) {
        XCard v = la.alpha_at(i) + lb.alpha_at(i);
        if (!v.is_zero()) l.alpha[i] = v;
      }
    } else {
      l.alpha = la.alpha;
      for (const auto& [i, m] : lb.alpha) l.alpha[i] += m;
    }
    out.locals.push_back(std::move(l));
  }
  return normalize(std::move(out));
}

XCard torsion_dim(const GroupDescriptor& d, uint64_t p) {
  PrimeLocal l = d.effective_local(p);
  if (l.cofinal) return XCard::infinite();
  XCard dim = l.beta;
  for (const auto& [i, m] : l.alpha) dim += m;
  return dim;
}

XCard quotient_dim(const GroupDescriptor& d, uint64_t p) {
  PrimeLocal l = d.effective_local(p);
  if (l.cofinal) return XCard::infinite();
  XCard dim = l.gamma;
  for (const auto& [i, m] : l.alpha) dim += m;
  return dim;
}

bool is_nonsingular(const GroupDescriptor& d) {
  // Tail primes carry the finite template shape, so only explicit locals can
  // break nonsingularity.
  for (const auto& l : d.locals) {
    if (l.cofinal) return false;
    if (l.beta.is_infinite() || l.gamma.is_infinite()) return false;
    for (const auto& [i, m] : l.alpha)
      if (m.is_infinite()) return false;
  }
  return true;
}

GroupDescriptor random_descriptor(Rng& rng) {
  auto pick = [&](uint64_t n) { return std::uniform_int_distribution<uint64_t>(0, n - 1)(rng); };
  auto xcard = [&]() -> XCard {
    switch (pick(4)) {
      case 0: return XCard::finite(0);
      case 1: return XCard::finite(1);
      case 2: return XCard::finite(2);
      default: return XCard::infinite();
    }
  };
  static const uint64_t prime_pool[3] = {2, 3, 5};
  GroupDescriptor d;
  uint64_t nprimes = pick(3);  // 0..2 locals
  std::set<uint64_t> used;
  for (uint64_t k = 0; k < nprimes; ++k) {
    uint64_t p = prime_pool[pick(3)];
    if (!used.insert(p).second) continue;
    PrimeLocal l;
    l.p = p;
    uint64_t nexp = pick(3);
    for (uint64_t e = 0; e < nexp; ++e) {
      uint32_t i = static_cast<uint32_t>(1 + pick(3));
      XCard m = xcard();
      if (!m.is_zero()) l.alpha[i] += m;
    }
    if (pick(8) == 0) {
      l.cofinal = true;
      l.cofinal_from = l.alpha.empty() ? 1 : l.alpha.rbegin()->first + 1;
    }
    l.beta = xcard();
    l.gamma = xcard();
    d.locals.push_back(std::move(l));
  }
  d.delta = xcard();
  switch (pick(6)) {
    case 0: {
      TailTemplate t;
      t.alpha[1] = 1;
      d.tail = t;
      break;
    }
    case 1: {
      TailTemplate t;
      t.gamma = 1;
      d.tail = t;
      break;
    }
    default:
      break;
  }
  return normalize(std::move(d));
}

}  // namespace minlab
