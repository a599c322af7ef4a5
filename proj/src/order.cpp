#include "lawvere/order.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <memory>

namespace lawvere {

std::string to_string(RuleMode mode) { return mode == RuleMode::Literal ? "literal" : "two_sided"; }

OrderTable::OrderTable(TheoryPtr th, std::size_t N, RuleMode mode,
                       std::vector<std::vector<Bits>> up, std::size_t truncated)
    : th_(std::move(th)), N_(N), mode_(mode), up_(std::move(up)), truncated_(truncated) {}

bool OrderTable::leq(const Morphism& f, const Morphism& g) const {
  if (f.dom != g.dom || f.cod != g.cod) throw std::invalid_argument("leq: hom-set mismatch");
  for (std::size_t j = 0; j < f.cod; ++j)
    if (!leq1(f.dom, f.comps[j], g.comps[j])) return false;
  return true;
}

std::vector<std::pair<Elem, Elem>> OrderTable::pairs(std::size_t n) const {
  std::vector<std::pair<Elem, Elem>> out;
  const auto& rows = up_.at(n);
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (auto b = rows[a].find_first(); b != Bits::npos; b = rows[a].find_next(b))
      out.emplace_back(static_cast<Elem>(a), static_cast<Elem>(b));
  return out;
}

std::size_t OrderTable::pair_count() const {
  std::size_t c = 0;
  for (const auto& rows : up_)
    for (const auto& r : rows) c += r.count();
  return c;
}

OrderTable OrderTable::symmetrized() const {
  auto up = up_;
  for (auto& rows : up) {
    const std::size_t c = rows.size();
    for (std::size_t a = 0; a < c; ++a)
      for (std::size_t b = 0; b < c; ++b)
        if (rows[a].test(b)) rows[b].set(a);
    for (std::size_t k = 0; k < c; ++k)
      for (std::size_t a = 0; a < c; ++a)
        if (rows[a].test(k)) rows[a] |= rows[k];
  }
  return OrderTable(th_, N_, mode_, std::move(up), truncated_);
}

namespace {

struct Engine {
  const Theory& th;
  std::size_t N;
  std::size_t ctx;
  RuleMode mode;
  std::vector<std::vector<Bits>> up, down;
  std::deque<std::tuple<std::size_t, Elem, Elem>> work;
  std::map<std::pair<std::size_t, std::size_t>, std::unique_ptr<SubstTable>> tables;
  std::size_t truncated = 0;

  const SubstTable& table(std::size_t m, std::size_t n) {
    auto& slot = tables[{m, n}];
    if (!slot) slot = std::make_unique<SubstTable>(th, m, n);
    return *slot;
  }

  void add(std::size_t n, Elem a, Elem b) {
    if (up[n][a].test(b)) return;
    const Bits below = down[n][a];
    const Bits above = up[n][b];
    for (auto x = below.find_first(); x != Bits::npos; x = below.find_next(x))
      for (auto y = above.find_first(); y != Bits::npos; y = above.find_next(y))
        if (!up[n][x].test(y)) {
          up[n][x].set(y);
          down[n][y].set(x);
          work.emplace_back(n, static_cast<Elem>(x), static_cast<Elem>(y));
        }
  }

  // Single-position premise change: y[j] := a versus y[j] := b.
  void propagate_literal(std::size_t n, Elem a, Elem b) {
    const std::uint64_t c = up[n].size();
    for (std::size_t mp = 1; mp <= N; ++mp) {
      const SubstTable& tab = table(mp, n);
      const std::size_t hc = th.carrier_size(mp);
      for (std::size_t j = 0; j < mp; ++j) {
        std::uint64_t w = 1;
        for (std::size_t p = j + 1; p < mp; ++p) w *= c;
        const std::uint64_t hi_count = tab.tuples() / (w * c);
        for (std::uint64_t hi = 0; hi < hi_count; ++hi)
          for (std::uint64_t lo = 0; lo < w; ++lo) {
            const std::uint64_t y = hi * w * c + lo;
            const std::uint64_t ya = y + a * w, yb = y + b * w;
            for (std::size_t h = 0; h < hc; ++h) {
              Elem ea = tab.at(static_cast<Elem>(h), ya), eb = tab.at(static_cast<Elem>(h), yb);
              if (ea == kNoElem || eb == kNoElem) {
                ++truncated;
                continue;
              }
              add(n, ea, eb);
            }
          }
      }
    }
  }

  void propagate_two_sided(std::size_t n, Elem a, Elem b) {
    for (std::size_t k = 0; k <= ctx; ++k) {
      const SubstTable& tab = table(n, k);
      for (std::uint64_t y = 0; y < tab.tuples(); ++y) {
        Elem ea = tab.at(a, y), eb = tab.at(b, y);
        if (ea == kNoElem || eb == kNoElem) {
          ++truncated;
          continue;
        }
        add(k, ea, eb);
      }
    }
  }
};

}  // namespace

OrderTable compute_preorder(TheoryPtr th, std::size_t N, RuleMode mode, std::size_t max_ctx) {
  if (!th->bounded()) throw NotBounded(th->spec() + " is not bounded");
  const std::size_t ctx = std::max(N, max_ctx);
  Engine e{*th, N, ctx, mode, {}, {}, {}, {}, 0};
  for (std::size_t n = 0; n <= ctx; ++n) {
    const std::size_t c = th->carrier_size(n);
    e.up.emplace_back(c, Bits(c));
    e.down.emplace_back(c, Bits(c));
    for (std::size_t a = 0; a < c; ++a) {
      e.up[n][a].set(a);
      e.down[n][a].set(a);
    }
  }
  for (std::size_t n = 0; n <= ctx; ++n) {
    const Elem bot = th->bottom(n);
    for (std::size_t x = 0; x < e.up[n].size(); ++x) e.add(n, bot, static_cast<Elem>(x));
  }
  while (!e.work.empty()) {
    auto [n, a, b] = e.work.front();
    e.work.pop_front();
    e.propagate_literal(n, a, b);
    if (mode == RuleMode::TwoSided) e.propagate_two_sided(n, a, b);
  }
  return OrderTable(std::move(th), N, mode, std::move(e.up), e.truncated);
}

PartialOrderResult is_partial_order(const OrderTable& ot) {
  for (std::size_t n = 0; n <= ot.max_ctx(); ++n) {
    const std::size_t c = ot.carrier(n);
    for (std::size_t a = 0; a < c; ++a)
      for (std::size_t b = a + 1; b < c; ++b)
        if (ot.leq1(n, static_cast<Elem>(a), static_cast<Elem>(b)) &&
            ot.leq1(n, static_cast<Elem>(b), static_cast<Elem>(a)))
          return {false, std::make_pair(Morphism{n, 1, {static_cast<Elem>(a)}},
                                        Morphism{n, 1, {static_cast<Elem>(b)}})};
  }
  return {};
}

namespace {

Bits upper_bounds1(const OrderTable& ot, std::size_t n, const std::vector<Morphism>& S,
                   std::size_t j) {
  Bits u(ot.carrier(n));
  u.set();
  for (const auto& s : S) u &= ot.up_set(n, s.comps[j]);
  return u;
}

}  // namespace

std::vector<Morphism> minimal_upper_bounds(const OrderTable& ot, const std::vector<Morphism>& S,
                                           std::size_t n, std::size_t m) {
  for (const auto& s : S)
    if (s.dom != n || s.cod != m) throw std::invalid_argument("minimal_upper_bounds: hom-set mismatch");
  std::vector<std::vector<Elem>> mins(m);
  std::uint64_t total = 1;
  for (std::size_t j = 0; j < m; ++j) {
    Bits ub = upper_bounds1(ot, n, S, j);
    for (auto u = ub.find_first(); u != Bits::npos; u = ub.find_next(u)) {
      bool minimal = true;
      for (auto v = ub.find_first(); v != Bits::npos && minimal; v = ub.find_next(v))
        if (ot.leq1(n, static_cast<Elem>(v), static_cast<Elem>(u)) &&
            !ot.leq1(n, static_cast<Elem>(u), static_cast<Elem>(v)))
          minimal = false;
      if (minimal) mins[j].push_back(static_cast<Elem>(u));
    }
    total *= mins[j].size();
    if (total > kCarrierCeiling) throw CapacityExceeded("too many minimal upper bounds");
  }
  std::vector<Morphism> out;
  for (std::uint64_t x = 0; x < total; ++x) {
    Morphism f{n, m, std::vector<Elem>(m)};
    std::uint64_t y = x;
    for (std::size_t j = m; j-- > 0;) {
      f.comps[j] = mins[j][y % mins[j].size()];
      y /= mins[j].size();
    }
    out.push_back(std::move(f));
  }
  return out;
}

bool is_upper_bound(const OrderTable& ot, const Morphism& u, const std::vector<Morphism>& S) {
  for (const auto& s : S)
    if (!ot.leq(s, u)) return false;
  return true;
}

bool is_least_upper_bound(const OrderTable& ot, const Morphism& u, const std::vector<Morphism>& S) {
  if (!is_upper_bound(ot, u, S)) return false;
  for (std::size_t j = 0; j < u.cod; ++j) {
    Bits ub = upper_bounds1(ot, u.dom, S, j);
    if (!ub.is_subset_of(ot.up_set(u.dom, u.comps[j]))) return false;
  }
  return true;
}

Morphism delta(const Theory& th, std::size_t n, std::size_t i) {
  if (i >= n) throw std::invalid_argument("delta: index out of range");
  Morphism d{n, n, std::vector<Elem>(n, th.bottom(n))};
  d.comps[i] = th.unit(n, i);
  return d;
}

SimplyOrderedResult check_simply_ordered(const OrderTable& ot, std::size_t max_set) {
  const Theory& th = ot.theory();
  const std::size_t N = ot.max_size();
  SimplyOrderedResult res;
  for (std::size_t n = 0; n <= N; ++n) {
    const std::size_t c = ot.carrier(n);
    // Every factorization n -> j -> 1 as (value, pieces).
    struct Fact {
      Elem value;
      std::vector<Elem> pieces;
    };
    std::vector<Fact> facts;
    for (std::size_t j = 0; j <= N; ++j) {
      HomSet fs(th, n, j);
      const std::size_t gc = th.carrier_size(j);
      for (std::uint64_t fi = 0; fi < fs.size(); ++fi) {
        Morphism f = fs.at(fi);
        std::vector<std::vector<Elem>> masked(j, f.comps);
        for (std::size_t i = 0; i < j; ++i)
          for (std::size_t l = 0; l < j; ++l)
            if (l != i) masked[i][l] = th.bottom(n);
        for (std::size_t g = 0; g < gc; ++g) {
          Fact fact{th.try_subst(static_cast<Elem>(g), j, f.comps, n), {}};
          if (fact.value == kNoElem) continue;
          bool ok = true;
          for (std::size_t i = 0; i < j && ok; ++i) {
            Elem p = th.try_subst(static_cast<Elem>(g), j, masked[i], n);
            ok = p != kNoElem;
            fact.pieces.push_back(p);
          }
          if (ok) facts.push_back(std::move(fact));
        }
      }
    }
    std::vector<Elem> A;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
      if (!res.ok) return;
      if (!A.empty()) {
        Bits ub(c);
        ub.set();
        for (auto a : A) ub &= ot.up_set(n, a);
        for (auto h = ub.find_first(); h != Bits::npos; h = ub.find_next(h)) {
          ++res.cases;
          bool found = false;
          for (const auto& fact : facts) {
            if (!ub.test(fact.value) || !ot.leq1(n, fact.value, static_cast<Elem>(h))) continue;
            bool covered = true;
            for (auto p : fact.pieces) {
              bool below = false;
              for (auto a : A) below = below || ot.leq1(n, p, a);
              if (!below) {
                covered = false;
                break;
              }
            }
            if (covered) {
              found = true;
              break;
            }
          }
          if (!found) {
            std::vector<Morphism> As;
            for (auto a : A) As.push_back(Morphism{n, 1, {a}});
            res.ok = false;
            res.witness = std::make_pair(As, Morphism{n, 1, {static_cast<Elem>(h)}});
            return;
          }
        }
      }
      if (A.size() == max_set) return;
      for (std::size_t a = start; a < c; ++a) {
        A.push_back(static_cast<Elem>(a));
        rec(a + 1);
        A.pop_back();
      }
    };
    rec(0);
    if (!res.ok) break;
  }
  return res;
}

AddOrderResult check_add_order_coincidence(const OrderTable& ot, JoinFn join,
                                           std::uint64_t pair_budget) {
  const Theory& th = ot.theory();
  if (!join) {
    if (!th.has_join()) throw NotAdditive(th.spec() + " has no join");
    join = [&th](Elem a, Elem b, std::size_t n) { return th.join(a, b, n); };
  }
  AddOrderResult res;
  for (std::size_t n = 0; n <= ot.max_size(); ++n)
    for (std::size_t m = 0; m <= ot.max_size(); ++m) {
      HomSet hs(th, n, m);
      if (hs.size() * hs.size() > pair_budget) {
        ++res.skipped_homsets;
        continue;
      }
      ++res.checked_homsets;
      for (std::uint64_t x = 0; x < hs.size(); ++x) {
        Morphism f = hs.at(x);
        for (std::uint64_t y = 0; y < hs.size(); ++y) {
          Morphism g = hs.at(y);
          bool by_join = true;
          for (std::size_t j = 0; j < m && by_join; ++j)
            by_join = join(f.comps[j], g.comps[j], n) == g.comps[j];
          if (by_join != ot.leq(f, g)) {
            res.ok = false;
            res.witness = std::make_pair(f, g);
            return res;
          }
        }
      }
    }
  return res;
}

}  // namespace lawvere
