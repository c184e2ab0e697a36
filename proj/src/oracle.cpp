#include "minlab/oracle.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <sstream>

namespace minlab {

uint64_t FiniteGroupSpec::order() const {
  uint64_t n = 1;
  for (uint64_t c : cyclic_orders) n = checked_mul(n, c);
  return n;
}

std::string FiniteGroupSpec::to_string() const {
  std::string out;
  for (size_t i = 0; i < cyclic_orders.size(); ++i) {
    if (i) out += "+";
    out += "Z/" + std::to_string(cyclic_orders[i]);
  }
  return out;
}

FiniteGroupSpec FiniteGroupSpec::prime_power_form() const {
  FiniteGroupSpec out;
  for (uint64_t c : cyclic_orders) {
    if (c < 2) throw std::invalid_argument("FiniteGroupSpec: cyclic order must be >= 2");
    for (const auto& [p, e] : factorize(c)) out.cyclic_orders.push_back(pow_u64(p, e));
  }
  std::sort(out.cyclic_orders.begin(), out.cyclic_orders.end());
  return out;
}

GroupDescriptor FiniteGroupSpec::descriptor() const {
  GroupDescriptor d;
  std::map<uint64_t, PrimeLocal> locals;
  for (uint64_t c : prime_power_form().cyclic_orders) {
    auto f = factorize(c);
    auto& l = locals[f.begin()->first];
    l.p = f.begin()->first;
    l.alpha[f.begin()->second] += XCard::finite(1);
  }
  for (auto& [p, l] : locals) d.locals.push_back(std::move(l));
  return normalize(std::move(d));
}

ExplicitGroup::ExplicitGroup(const FiniteGroupSpec& spec, uint64_t order_bound)
    : spec_(spec.prime_power_form()) {
  for (uint64_t c : spec_.cyclic_orders) order_ = checked_mul(order_, c);
  if (order_ > order_bound)
    throw std::invalid_argument("ExplicitGroup: order " + std::to_string(order_) +
                                " exceeds bound " + std::to_string(order_bound));
  radices_ = spec_.cyclic_orders;
}

std::vector<uint64_t> ExplicitGroup::tuple_of(uint64_t idx) const {
  std::vector<uint64_t> t(radices_.size());
  for (size_t i = radices_.size(); i-- > 0;) {
    t[i] = idx % radices_[i];
    idx /= radices_[i];
  }
  return t;
}

uint64_t ExplicitGroup::add(uint64_t x, uint64_t y) const {
  uint64_t out = 0;
  uint64_t weight = 1;
  for (size_t i = radices_.size(); i-- > 0;) {
    uint64_t r = radices_[i];
    uint64_t cx = x % r, cy = y % r;
    x /= r;
    y /= r;
    out += ((cx + cy) % r) * weight;
    weight *= r;
  }
  return out;
}

uint64_t ExplicitGroup::scale(uint64_t c, uint64_t x) const {
  uint64_t acc = 0;
  for (uint64_t i = 0; i < c; ++i) acc = add(acc, x);
  return acc;
}

namespace {

// scale tables: row c maps x -> c*x, built by repeated addition only.
std::vector<std::vector<uint64_t>> multiple_tables(const ExplicitGroup& g, uint64_t c_max) {
  uint64_t n = g.order();
  std::vector<std::vector<uint64_t>> rows(c_max + 1, std::vector<uint64_t>(n));
  for (uint64_t x = 0; x < n; ++x) rows[0][x] = 0;
  for (uint64_t c = 1; c <= c_max; ++c)
    for (uint64_t x = 0; x < n; ++x) rows[c][x] = g.add(rows[c - 1][x], x);
  return rows;
}

SubsetMask phi_from_tables(const std::vector<std::vector<uint64_t>>& rows, uint64_t k,
                           uint64_t m, uint64_t n) {
  std::vector<bool> image(n, false);
  for (uint64_t y = 0; y < n; ++y) image[rows[k][y]] = true;
  SubsetMask mask(n, false);
  for (uint64_t x = 0; x < n; ++x) mask[x] = image[rows[m][x]];
  return mask;
}

}  // namespace

SubsetMask brute_phi(const ExplicitGroup& g, uint64_t k, uint64_t m) {
  uint64_t n = g.order();
  std::vector<bool> image(n, false);
  for (uint64_t y = 0; y < n; ++y) image[g.scale(k, y)] = true;
  SubsetMask mask(n, false);
  for (uint64_t x = 0; x < n; ++x) mask[x] = image[g.scale(m, x)];
  return mask;
}

SubsetMask expand_mask(const ExplicitGroup& g, const PPSubgroup& h) {
  const auto& orders = g.spec().cyclic_orders;
  std::vector<uint64_t> divisor(orders.size());
  for (size_t i = 0; i < orders.size(); ++i) {
    auto f = factorize(orders[i]);
    uint64_t p = f.begin()->first;
    uint32_t e = f.begin()->second;
    divisor[i] = pow_u64(p, h.trace_cyclic(p, e));
  }
  uint64_t n = g.order();
  SubsetMask mask(n, false);
  for (uint64_t x = 0; x < n; ++x) {
    auto t = g.tuple_of(x);
    bool in = true;
    for (size_t i = 0; i < t.size() && in; ++i) in = (t[i] % divisor[i] == 0);
    mask[x] = in;
  }
  return mask;
}

SubsetMask symbolic_phi_mask(const ExplicitGroup& g, uint64_t k, uint64_t m) {
  return expand_mask(g, phi_subgroup(g.spec().descriptor(), k, m));
}

std::vector<SubsetMask> definable_enum(const ExplicitGroup& g,
                                       const std::vector<std::pair<uint64_t, uint64_t>>& atoms,
                                       uint32_t depth, size_t max_sets) {
  uint64_t n = g.order();
  std::vector<SubsetMask> sets;
  auto push = [&](const SubsetMask& s) {
    if (std::find(sets.begin(), sets.end(), s) != sets.end()) return;
    if (sets.size() >= max_sets) throw std::invalid_argument("definable_enum: bound exceeded");
    sets.push_back(s);
  };
  for (const auto& [k, m] : atoms) {
    SubsetMask sub = brute_phi(g, k, m);
    std::vector<bool> covered(n, false);
    for (uint64_t rep = 0; rep < n; ++rep) {
      if (covered[rep]) continue;
      SubsetMask coset(n, false);
      for (uint64_t x = 0; x < n; ++x)
        if (sub[x]) {
          uint64_t y = g.add(rep, x);
          coset[y] = true;
          covered[y] = true;
        }
      push(coset);
    }
  }
  for (uint32_t round = 0; round < depth; ++round) {
    size_t before = sets.size();
    std::vector<SubsetMask> frontier = sets;
    for (const auto& s : frontier) {
      SubsetMask comp(n);
      for (uint64_t i = 0; i < n; ++i) comp[i] = !s[i];
      push(comp);
    }
    for (size_t i = 0; i < frontier.size(); ++i)
      for (size_t j = i + 1; j < frontier.size(); ++j) {
        SubsetMask inter(n), uni(n);
        for (uint64_t x = 0; x < n; ++x) {
          inter[x] = frontier[i][x] && frontier[j][x];
          uni[x] = frontier[i][x] || frontier[j][x];
        }
        push(inter);
        push(uni);
      }
    if (sets.size() == before) break;
  }
  return sets;
}

std::string mask_to_string(const SubsetMask& mask) {
  std::string out = "{";
  bool first = true;
  for (size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) {
      if (!first) out += ",";
      out += std::to_string(i);
      first = false;
    }
  return out + "}";
}

CrossCheckReport cross_check(const ExplicitGroup& g, uint64_t k_max, uint64_t m_max) {
  CrossCheckReport report;
  GroupDescriptor d = g.spec().descriptor();
  auto rows = multiple_tables(g, std::max(k_max, m_max));
  uint64_t n = g.order();
  for (uint64_t k = 0; k <= k_max; ++k)
    for (uint64_t m = 0; m <= m_max; ++m) {
      ++report.cells;
      SubsetMask brute = phi_from_tables(rows, k, m, n);
      SubsetMask symb = expand_mask(g, phi_subgroup(d, k, m));
      if (brute != symb) {
        report.mismatches.push_back(
            {g.spec().to_string(), k, m, mask_to_string(symb), mask_to_string(brute)});
        if (report.mismatches.size() > 8) return report;
      }
    }
  return report;
}

std::vector<FiniteGroupSpec> enumerate_group_specs(uint64_t max_order) {
  std::vector<uint64_t> pps;
  for (uint64_t q = 2; q <= max_order; ++q)
    if (factorize(q).size() == 1) pps.push_back(q);
  std::vector<FiniteGroupSpec> out;
  std::vector<uint64_t> cur;
  std::function<void(size_t, uint64_t)> rec = [&](size_t start, uint64_t prod) {
    if (!cur.empty()) out.push_back({cur});
    for (size_t i = start; i < pps.size(); ++i) {
      if (pps[i] > max_order / prod) break;
      cur.push_back(pps[i]);
      rec(i, prod * pps[i]);
      cur.pop_back();
    }
  };
  rec(0, 1);
  return out;
}

CrossCheckReport cross_check_grid(uint64_t max_order, uint64_t k_max, uint64_t m_max,
                                  unsigned workers) {
  auto specs = enumerate_group_specs(max_order);
  CrossCheckReport total;
  std::mutex mu;
  parallel_for(specs.size(), workers, [&](uint64_t lo, uint64_t hi) {
    for (uint64_t i = lo; i < hi; ++i) {
      ExplicitGroup g(specs[i], max_order);
      CrossCheckReport r = cross_check(g, k_max, m_max);
      std::lock_guard<std::mutex> guard(mu);
      total.cells += r.cells;
      for (auto& line : r.mismatches) total.mismatches.push_back(std::move(line));
    }
  });
  return total;
}

}  // namespace minlab
