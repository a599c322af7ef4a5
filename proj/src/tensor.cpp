#include "lawvere/tensor.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <set>
#include <sstream>

namespace lawvere {

std::string to_string(TensorMode mode) { return mode == TensorMode::Full ? "full" : "nonempty"; }

void HornSystem::add_rule(std::vector<std::uint32_t> premises, std::uint32_t conclusion) {
  std::sort(premises.begin(), premises.end());
  premises.erase(std::unique(premises.begin(), premises.end()), premises.end());
  if (std::binary_search(premises.begin(), premises.end(), conclusion)) return;
  if (premises.empty()) {
    axioms_.push_back(conclusion);
    return;
  }
  const auto r = static_cast<std::uint32_t>(conclusions_.size());
  for (auto p : premises) watch_[p].push_back(r);
  premises_.push_back(std::move(premises));
  conclusions_.push_back(conclusion);
}

Bits HornSystem::close(const Bits& seed) const {
  Bits out(universe_);
  std::vector<std::uint32_t> count(premises_.size());
  for (std::size_t r = 0; r < premises_.size(); ++r)
    count[r] = static_cast<std::uint32_t>(premises_[r].size());
  std::vector<std::uint32_t> queue;
  auto push = [&](std::size_t x) {
    if (!out.test(x)) {
      out.set(x);
      queue.push_back(static_cast<std::uint32_t>(x));
    }
  };
  for (auto x = seed.find_first(); x != Bits::npos; x = seed.find_next(x)) push(x);
  for (auto a : axioms_) push(a);
  while (!queue.empty()) {
    auto x = queue.back();
    queue.pop_back();
    for (auto r : watch_[x])
      if (--count[r] == 0) push(conclusions_[r]);
  }
  return out;
}

std::vector<Bits> HornSystem::closed_sets(std::size_t limit) const {
  std::vector<Bits> out;
  Bits A = close(Bits(universe_));
  out.push_back(A);
  Bits full(universe_);
  full.set();
  while (A != full) {
    bool advanced = false;
    for (std::size_t i = universe_; i-- > 0;) {
      if (A.test(i)) {
        A.reset(i);
        continue;
      }
      Bits seed = A;
      seed.set(i);
      Bits B = close(seed);
      Bits fresh = B - A;
      fresh.reset(i);
      bool ok = true;
      for (auto x = fresh.find_first(); x != Bits::npos && x < i; x = fresh.find_next(x)) ok = false;
      if (ok) {
        A = std::move(B);
        out.push_back(A);
        if (out.size() > limit) throw CapacityExceeded("too many closed sets");
        advanced = true;
        break;
      }
    }
    if (!advanced) break;
  }
  return out;
}

std::vector<Morphism> members_of(const HomSet& hs, const Bits& b) {
  std::vector<Morphism> out;
  for (auto x = b.find_first(); x != Bits::npos; x = b.find_next(x)) out.push_back(hs.at(x));
  return out;
}

Bits bits_of(const HomSet& hs, const std::vector<Morphism>& A) {
  Bits b(hs.size());
  for (const auto& f : A) b.set(hs.index_of(f));
  return b;
}

namespace {

constexpr std::uint64_t kClosureUniverseLimit = std::uint64_t{1} << 16;

Morphism mask_except(const Theory& th, const Morphism& g, std::size_t i) {
  Morphism r = g;
  for (std::size_t l = 0; l < g.cod; ++l)
    if (l != i) r.comps[l] = th.bottom(g.dom);
  return r;
}

}  // namespace

ClosureSystem::ClosureSystem(const OrderTable& ot, std::size_t n, std::size_t m,
                             std::size_t factor_bound)
    : n_(n), m_(m), hs_(ot.theory(), n, m), horn_(hs_.size()) {
  const Theory& th = ot.theory();
  if (n > ot.max_ctx()) throw CapacityExceeded("closure: context beyond the order table");
  if (hs_.size() > kClosureUniverseLimit) throw CapacityExceeded("closure: hom-set too large");
  std::set<std::pair<std::vector<std::uint32_t>, std::uint32_t>> seen;
  auto add = [&](std::vector<std::uint32_t> prem, std::uint32_t concl) {
    std::sort(prem.begin(), prem.end());
    prem.erase(std::unique(prem.begin(), prem.end()), prem.end());
    if (seen.emplace(prem, concl).second) horn_.add_rule(std::move(prem), concl);
  };
  // Downclosure: componentwise order.
  if (m == 1) {
    for (std::size_t a = 0; a < hs_.size(); ++a)
      for (std::size_t b = 0; b < hs_.size(); ++b)
        if (a != b && ot.leq1(n, static_cast<Elem>(b), static_cast<Elem>(a)))
          add({static_cast<std::uint32_t>(a)}, static_cast<std::uint32_t>(b));
  } else {
    std::vector<Morphism> all = enumerate_hom(th, n, m);
    for (std::size_t a = 0; a < all.size(); ++a)
      for (std::size_t b = 0; b < all.size(); ++b)
        if (a != b && ot.leq(all[b], all[a]))
          add({static_cast<std::uint32_t>(a)}, static_cast<std::uint32_t>(b));
  }
  // Rule (Delta) for g : n -> k', h : k' -> m.
  for (std::size_t kp = 0; kp <= factor_bound; ++kp) {
    HomSet gs(th, n, kp), hsk(th, kp, m);
    for (std::uint64_t gi = 0; gi < gs.size(); ++gi) {
      Morphism g = gs.at(gi);
      std::vector<Morphism> masked;
      for (std::size_t i = 0; i < kp; ++i) masked.push_back(mask_except(th, g, i));
      for (std::uint64_t hi = 0; hi < hsk.size(); ++hi) {
        Morphism h = hsk.at(hi);
        auto concl = try_seq(th, g, h);
        if (!concl) {
          ++truncated_;
          continue;
        }
        std::vector<std::uint32_t> prem;
        bool ok = true;
        for (std::size_t i = 0; i < kp && ok; ++i) {
          auto p = try_seq(th, masked[i], h);
          if (!p) ok = false;
          else prem.push_back(static_cast<std::uint32_t>(hs_.index_of(*p)));
        }
        if (!ok) {
          ++truncated_;
          continue;
        }
        add(std::move(prem), static_cast<std::uint32_t>(hs_.index_of(*concl)));
      }
    }
  }
}

Bits ClosureSystem::close(const std::vector<Morphism>& A) const { return close(bits_of(hs_, A)); }

ClosedSet closure(const OrderTable& ot, std::size_t n, std::size_t m, const std::vector<Morphism>& A,
                  std::optional<std::size_t> factor_bound) {
  ClosureSystem cs(ot, n, m, factor_bound.value_or(ot.max_size()));
  return ClosedSet{n, m, members_of(cs.homset(), cs.close(A)), TensorMode::Full};
}

bool rect_equiv(const OrderTable& ot, std::size_t n, std::size_t m, const std::vector<Morphism>& A,
                const std::vector<Morphism>& B) {
  ClosureSystem cs(ot, n, m, ot.max_size());
  return cs.close(A) == cs.close(B);
}

RectEngine::RectEngine(const Theory& th, std::size_t n, std::size_t factor_bound, TensorMode mode)
    : c_(th.carrier_size(n)), mode_(mode) {
  if (c_ > kRectUniverseLimit) throw CapacityExceeded("rectangular engine: carrier too large");
  const std::uint32_t nodes = std::uint32_t{1} << c_;
  parent_.resize(nodes);
  for (std::uint32_t x = 0; x < nodes; ++x) parent_[x] = x;
  if (mode == TensorMode::Full) bot_mask_ = std::uint32_t{1} << th.bottom(n);

  // Unary contexts a |-> h(y[j := a]) with h in T(k), k <= factor_bound.
  for (std::size_t k = 1; k <= factor_bound; ++k) {
    SubstTable tab(th, k, n);
    const std::size_t hc = th.carrier_size(k);
    for (std::size_t j = 0; j < k; ++j) {
      std::uint64_t w = 1;
      for (std::size_t p = j + 1; p < k; ++p) w *= c_;
      for (std::uint64_t y = 0; y < tab.tuples(); ++y) {
        if ((y / w) % c_ != 0) continue;
        for (std::size_t h = 0; h < hc; ++h) {
          std::vector<Elem> map(c_);
          bool ok = true;
          for (std::size_t a = 0; a < c_ && ok; ++a) {
            map[a] = tab.at(static_cast<Elem>(h), y + a * w);
            ok = map[a] != kNoElem;
          }
          if (!ok) {
            ++truncated_;
            continue;
          }
          maps_.push_back(std::move(map));
        }
      }
    }
  }
  std::sort(maps_.begin(), maps_.end());
  maps_.erase(std::unique(maps_.begin(), maps_.end()), maps_.end());

  if (mode == TensorMode::Full) merge(0, bot_mask_);
  // Rectangular hulls: h applied to S versus h applied to the product of its projections.
  for (std::size_t k = 2; k <= factor_bound; ++k) {
    SubstTable tab(th, k, n);
    const std::uint64_t T = tab.tuples();
    const std::size_t hc = th.carrier_size(k);
    std::vector<std::vector<Elem>> digits(T, std::vector<Elem>(k));
    for (std::uint64_t y = 0; y < T; ++y) {
      std::uint64_t z = y;
      for (std::size_t p = k; p-- > 0;) {
        digits[y][p] = static_cast<Elem>(z % c_);
        z /= c_;
      }
    }
    std::vector<std::uint64_t> pick;
    std::uint64_t budget = std::uint64_t{1} << 26;
    std::function<void(std::uint64_t)> rec = [&](std::uint64_t start) {
      if (pick.size() >= 2) {
        std::vector<std::vector<Elem>> proj(k);
        for (std::size_t p = 0; p < k; ++p) {
          for (auto y : pick) proj[p].push_back(digits[y][p]);
          std::sort(proj[p].begin(), proj[p].end());
          proj[p].erase(std::unique(proj[p].begin(), proj[p].end()), proj[p].end());
        }
        std::vector<std::uint64_t> hull{0};
        for (std::size_t p = 0; p < k; ++p) {
          std::vector<std::uint64_t> next;
          for (auto partial : hull)
            for (auto v : proj[p]) next.push_back(partial * c_ + v);
          hull = std::move(next);
        }
        if (hull.size() > pick.size()) {
          for (std::size_t h = 0; h < hc; ++h) {
            if (budget-- == 0) throw CapacityExceeded("rectangular engine: generator budget");
            std::uint32_t lhs = 0, rhs = 0;
            bool ok = true;
            for (auto y : pick) {
              Elem e = tab.at(static_cast<Elem>(h), y);
              if (e == kNoElem) ok = false;
              else lhs |= std::uint32_t{1} << e;
            }
            for (auto y : hull) {
              Elem e = tab.at(static_cast<Elem>(h), y);
              if (e == kNoElem) ok = false;
              else rhs |= std::uint32_t{1} << e;
            }
            if (!ok) {
              ++truncated_;
              continue;
            }
            merge(lhs, rhs);
          }
        }
      }
      if (pick.size() == k) return;
      for (std::uint64_t y = start; y < T; ++y) {
        pick.push_back(y);
        rec(y + 1);
        pick.pop_back();
      }
    };
    rec(0);
  }
  for (std::uint32_t x = 0; x < nodes; ++x) parent_[x] = find_mut(x);
  top_.assign(nodes, 0);
  for (std::uint32_t x = 0; x < nodes; ++x) top_[parent_[x]] |= x;
}

std::uint32_t RectEngine::find_mut(std::uint32_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

std::uint32_t RectEngine::find(std::uint32_t mask) const { return parent_.at(mask); }

void RectEngine::merge(std::uint32_t a0, std::uint32_t b0) {
  pending_.emplace_back(a0, b0);
  while (!pending_.empty()) {
    auto [a, b] = pending_.back();
    pending_.pop_back();
    std::uint32_t ra = find_mut(a), rb = find_mut(b);
    if (ra == rb) continue;
    if (ra < rb) std::swap(ra, rb);
    parent_[ra] = rb;
    for (std::size_t x = 0; x < c_; ++x) {
      const std::uint32_t bit = std::uint32_t{1} << x;
      pending_.emplace_back(a | bit, b | bit);
    }
    auto image = [&](const std::vector<Elem>& map, std::uint32_t s) {
      if (s == 0) {
        if (mode_ == TensorMode::Nonempty) return std::uint32_t{0};
        s = bot_mask_;
      }
      std::uint32_t r = 0;
      for (std::size_t x = 0; x < c_; ++x)
        if ((s >> x) & 1u) r |= std::uint32_t{1} << map[x];
      return r;
    };
    for (const auto& map : maps_) pending_.emplace_back(image(map, a), image(map, b));
  }
}

namespace {

std::uint32_t projection_mask(const std::vector<Morphism>& A, std::size_t j) {
  std::uint32_t m = 0;
  for (const auto& f : A) m |= std::uint32_t{1} << f.comps[j];
  return m;
}

}  // namespace

bool rect_equiv_oracle(const Theory& th, std::size_t n, std::size_t m, const std::vector<Morphism>& A,
                       const std::vector<Morphism>& B, std::size_t factor_bound, TensorMode mode) {
  if (mode == TensorMode::Nonempty && (A.empty() || B.empty()))
    throw std::invalid_argument("nonempty mode requires nonempty sets");
  if (m == 0) return true;
  RectEngine eng(th, n, factor_bound, mode);
  for (std::size_t j = 0; j < m; ++j)
    if (!eng.equiv(projection_mask(A, j), projection_mask(B, j))) return false;
  return true;
}

TensorTheory::TensorTheory(TheoryPtr base, std::shared_ptr<const OrderTable> ot,
                           std::size_t factor_bound, TensorMode mode, std::size_t max_obj)
    : base_(std::move(base)), ot_(std::move(ot)), factor_(factor_bound), mode_(mode), max_obj_(max_obj) {
  if (mode_ == TensorMode::Full && !ot_) throw std::invalid_argument("full tensor needs an order table");
}

std::string TensorTheory::spec() const {
  std::string s = "tensor:N=" + std::to_string(factor_) + ":max=" + std::to_string(max_obj_) + ":";
  if (mode_ == TensorMode::Nonempty) s += "mode=nonempty:";
  return s + base_->spec();
}

bool TensorTheory::bounded() const { return carrier_size(0) == 1; }

const TensorTheory::Carrier& TensorTheory::carrier(std::size_t n) const {
  if (n > max_obj_) throw CapacityExceeded(spec() + ": object " + std::to_string(n) + " beyond max");
  std::lock_guard<std::mutex> lock(mu_);
  auto& slot = cache_[n];
  if (slot) return *slot;
  auto c = std::make_unique<Carrier>();
  const std::size_t u = base_->carrier_size(n);
  if (mode_ == TensorMode::Full) {
    c->closure = std::make_unique<ClosureSystem>(*ot_, n, 1, factor_);
    c->sets = c->closure->horn().closed_sets(kCarrierCeiling);
  } else {
    c->rect = std::make_unique<RectEngine>(*base_, n, factor_, mode_);
    std::set<std::uint32_t> tops;
    for (std::uint32_t s = 1; s < (std::uint32_t{1} << u); ++s) tops.insert(c->rect->canonical(s));
    for (auto t : tops) c->sets.emplace_back(u, t);
  }
  auto key = [](const Bits& b) {
    std::vector<std::size_t> v;
    for (auto x = b.find_first(); x != Bits::npos; x = b.find_next(x)) v.push_back(x);
    return v;
  };
  std::sort(c->sets.begin(), c->sets.end(),
            [&](const Bits& a, const Bits& b) { return key(a) < key(b); });
  for (std::size_t i = 0; i < c->sets.size(); ++i) c->index.emplace(c->sets[i], static_cast<Elem>(i));
  // Maximal members generate a closed set.
  for (const Bits& s : c->sets) {
    std::vector<Elem> g;
    for (auto x = s.find_first(); x != Bits::npos; x = s.find_next(x)) {
      bool maximal = true;
      if (mode_ == TensorMode::Full)
        for (auto y = s.find_first(); y != Bits::npos && maximal; y = s.find_next(y)) {
          if (y == x) continue;
          bool up = ot_->leq1(n, static_cast<Elem>(x), static_cast<Elem>(y));
          bool down = ot_->leq1(n, static_cast<Elem>(y), static_cast<Elem>(x));
          if (up && (!down || y < x)) maximal = false;
        }
      if (maximal) g.push_back(static_cast<Elem>(x));
    }
    c->gens.push_back(std::move(g));
  }
  slot = std::move(c);
  return *slot;
}

std::size_t TensorTheory::carrier_size(std::size_t n) const { return carrier(n).sets.size(); }

const Bits& TensorTheory::members(std::size_t n, Elem t) const { return carrier(n).sets.at(t); }

const std::vector<Elem>& TensorTheory::generators(std::size_t n, Elem t) const {
  return carrier(n).gens.at(t);
}

Elem TensorTheory::canonical(std::size_t n, const Bits& s) const {
  const Carrier& c = carrier(n);
  if (mode_ == TensorMode::Full) return c.index.at(c.closure->close(s));
  if (s.none()) throw std::invalid_argument("nonempty tensor: empty set has no class");
  const auto mask = static_cast<std::uint32_t>(s.to_ulong());
  return c.index.at(Bits(s.size(), c.rect->canonical(mask)));
}

Elem TensorTheory::unit(std::size_t n, std::size_t i) const {
  Bits s(base_->carrier_size(n));
  s.set(base_->unit(n, i));
  return canonical(n, s);
}


Elem TensorTheory::try_subst(Elem t, std::size_t n, std::span<const Elem> sigma, std::size_t k) const {
  std::vector<Elem> key{static_cast<Elem>(n), static_cast<Elem>(k), t};
  key.insert(key.end(), sigma.begin(), sigma.end());
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = subst_memo_.find(key); it != subst_memo_.end()) return it->second;
  }
  std::vector<std::vector<Elem>> choices(n);
  for (std::size_t i = 0; i < n; ++i) choices[i] = generators(k, sigma[i]);
  Bits out(base_->carrier_size(k));
  std::vector<Elem> y(n);
  Elem result = kNoElem;
  bool overflow = false;
  for (Elem c : generators(n, t)) {
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (overflow) return;
      if (i == n) {
        Elem e = base_->try_subst(c, n, y, k);
        if (e == kNoElem) overflow = true;
        else out.set(e);
        return;
      }
      for (Elem v : choices[i]) {
        y[i] = v;
        rec(i + 1);
      }
    };
    rec(0);
  }
  if (!overflow) result = canonical(k, out);
  std::lock_guard<std::mutex> lock(mu_);
  subst_memo_.emplace(std::move(key), result);
  return result;
}

Elem TensorTheory::join(Elem a, Elem b, std::size_t n) const {
  return canonical(n, members(n, a) | members(n, b));
}

std::string TensorTheory::show(Elem t, std::size_t n) const {
  std::string s = mode_ == TensorMode::Full ? "cl{" : "{";
  bool first = true;
  for (Elem g : generators(n, t)) {
    if (!first) s += ",";
    first = false;
    s += base_->show(g, n);
  }
  return s + "}";
}

Morphism TensorTheory::sigma1(const Morphism& f) const {
  Morphism r{f.dom, f.cod, {}};
  for (Elem e : f.comps) {
    Bits s(base_->carrier_size(f.dom));
    s.set(e);
    r.comps.push_back(canonical(f.dom, s));
  }
  return r;
}

Morphism TensorTheory::sigma2(std::size_t dom, const std::vector<std::vector<std::size_t>>& A) const {
  Morphism r{dom, A.size(), {}};
  for (const auto& Ai : A) {
    Bits s(base_->carrier_size(dom));
    for (auto a : Ai) s.set(base_->unit(dom, a));
    r.comps.push_back(canonical(dom, s));
  }
  return r;
}

TensorPtr build_tensor(TheoryPtr th, std::size_t N, TensorMode mode, std::optional<std::size_t> max_obj) {
  const std::size_t mo = max_obj.value_or(N);
  std::shared_ptr<const OrderTable> ot;
  if (mode == TensorMode::Full) {
    if (!th->bounded()) throw NotBounded(th->spec() + " is not bounded");
    ot = std::make_shared<OrderTable>(compute_preorder(th, N, RuleMode::Literal, mo));
  }
  return std::make_shared<TensorTheory>(std::move(th), std::move(ot), N, mode, mo);
}

Elem tensor_join(const TensorTheory& t, std::size_t n, Elem a, Elem b) { return t.join(a, b, n); }

bool TensorLawReport::ok() const { return violations() == 0; }

std::size_t TensorLawReport::violations() const {
  std::size_t v = 0;
  for (const auto& c : checks) v += c.violations;
  return v;
}

namespace {

constexpr std::uint64_t kLawCaseBudget = std::uint64_t{1} << 12;

struct Recorder {
  LawCheck check;
  explicit Recorder(std::string name) { check.name = std::move(name); }
  void expect(bool ok, const std::function<std::string()>& witness) {
    ++check.cases;
    if (!ok) {
      if (check.violations == 0) check.first_witness = witness();
      ++check.violations;
    }
  }
};

// Iterates all indices below size, or a seeded sample of budget indices.
template <class F>
void for_indices(std::uint64_t size, std::uint64_t budget, std::mt19937_64& rng, F&& f) {
  if (size <= budget) {
    for (std::uint64_t i = 0; i < size; ++i) f(i);
    return;
  }
  std::uniform_int_distribution<std::uint64_t> d(0, size - 1);
  for (std::uint64_t i = 0; i < budget; ++i) f(d(rng));
}

std::vector<std::vector<std::size_t>> subsets_of(std::size_t m) {
  std::vector<std::vector<std::size_t>> out;
  for (std::uint32_t s = 0; s < (std::uint32_t{1} << m); ++s) {
    std::vector<std::size_t> v;
    for (std::size_t i = 0; i < m; ++i)
      if ((s >> i) & 1u) v.push_back(i);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

TensorLawReport verify_tensor_laws(const TensorTheory& t, const TensorLawOptions& opt) {
  TensorLawReport rep;
  std::mt19937_64 rng(opt.seed);
  const Theory& base = t.base();
  const std::size_t N = t.factor_bound();
  const std::size_t M = t.max_obj();
  const bool full = t.mode() == TensorMode::Full;

  {
    Recorder assoc("category_assoc"), unit("category_unit");
    for (std::size_t n = 0; n <= N; ++n)
      for (std::size_t m = 0; m <= N; ++m) {
        HomSet F(t, n, m);
        for_indices(F.size(), kLawCaseBudget, rng, [&](std::uint64_t fi) {
          Morphism f = F.at(fi);
          unit.expect(seq(t, identity(t, n), f) == f && seq(t, f, identity(t, m)) == f,
                      [&] { return "f=" + show(t, f); });
        });
        for (std::size_t k = 0; k <= N; ++k)
          for (std::size_t l = 0; l <= N; ++l) {
            HomSet G(t, m, k), H(t, k, l);
            const std::uint64_t total = F.size() * G.size() * H.size();
            for_indices(total, kLawCaseBudget, rng, [&](std::uint64_t x) {
              Morphism f = F.at(x % F.size());
              Morphism g = G.at((x / F.size()) % G.size());
              Morphism h = H.at(x / (F.size() * G.size()));
              assoc.expect(seq(t, seq(t, f, g), h) == seq(t, f, seq(t, g, h)), [&] {
                return "f=" + show(t, f) + " g=" + show(t, g) + " h=" + show(t, h);
              });
            });
          }
      }
    rep.checks.push_back(assoc.check);
    rep.checks.push_back(unit.check);
  }

  if (full) {
    Recorder proj("projection_determined");
    const OrderTable& ot = *t.order();
    for (std::size_t n = 0; n <= N; ++n)
      for (std::size_t m = 1; m <= N; ++m) {
        HomSet hs(base, n, m);
        if (hs.size() > 64) continue;
        ClosureSystem direct(ot, n, m, N);
        const std::uint64_t subsets = std::uint64_t{1} << hs.size();
        for_indices(subsets, opt.subset_budget, rng, [&](std::uint64_t mask) {
          Bits A(hs.size(), mask);
          std::vector<Morphism> As = members_of(hs, A);
          Bits cl = direct.close(A);
          Morphism tuple{n, m, {}};
          for (std::size_t j = 0; j < m; ++j) {
            Bits pj(base.carrier_size(n));
            for (const auto& a : As) pj.set(a.comps[j]);
            tuple.comps.push_back(t.canonical(n, pj));
          }
          Bits prod(hs.size());
          for (std::uint64_t x = 0; x < hs.size(); ++x) {
            Morphism f = hs.at(x);
            bool in = true;
            for (std::size_t j = 0; j < m && in; ++j) in = t.members(n, tuple.comps[j]).test(f.comps[j]);
            if (in) prod.set(x);
          }
          proj.expect(cl == prod, [&] {
            return "n=" + std::to_string(n) + " m=" + std::to_string(m) + " mask=" + std::to_string(mask);
          });
        });
      }
    rep.checks.push_back(proj.check);
  }

  {
    // f : n -> 1 in L against A subset of m in the powerset theory, in T_0 then closed.
    Recorder law("tensor_law");
    for (std::size_t n = 0; n <= M; ++n)
      for (std::size_t m = 0; m <= M && n * m <= M; ++m) {
        const std::size_t nm = n * m;
        const std::size_t cu = base.carrier_size(nm);
        for (const auto& A : subsets_of(m)) {
          if (!full && A.empty()) continue;
          for (Elem f = 0; f < base.carrier_size(n); ++f) {
            Bits left(cu), right(cu);
            bool overflow = false;
            if (A.empty()) {
              std::vector<Elem> y(n, base.bottom(nm));
              Elem e = base.try_subst(f, n, y, nm);
              if (e == kNoElem) overflow = true;
              else left.set(e);
            } else {
              std::vector<std::size_t> pick(n, 0);
              for (;;) {
                std::vector<Elem> y(n);
                for (std::size_t i = 0; i < n; ++i) y[i] = base.unit(nm, i * m + A[pick[i]]);
                Elem e = base.try_subst(f, n, y, nm);
                if (e == kNoElem) overflow = true;
                else left.set(e);
                std::size_t p = 0;
                while (p < n && ++pick[p] == A.size()) pick[p++] = 0;
                if (p == n) break;
              }
              for (auto a : A) {
                std::vector<Elem> y(n);
                for (std::size_t i = 0; i < n; ++i) y[i] = base.unit(nm, i * m + a);
                Elem e = base.try_subst(f, n, y, nm);
                if (e == kNoElem) overflow = true;
                else right.set(e);
              }
            }
            if (overflow) continue;
            bool ok = opt.skip_closure ? left == right : t.canonical(nm, left) == t.canonical(nm, right);
            law.expect(ok, [&] {
              std::string s = "f=" + base.show(f, n) + " A={";
              for (std::size_t i = 0; i < A.size(); ++i) s += (i ? "," : "") + std::to_string(A[i]);
              return s + "} n=" + std::to_string(n) + " m=" + std::to_string(m);
            });
          }
        }
      }
    rep.checks.push_back(law.check);
  }

  {
    Recorder left("monad_left_unit"), right("monad_right_unit"), assoc("monad_assoc");
    for (std::size_t n = 0; n <= M; ++n)
      for (std::size_t k = 0; k <= M; ++k) {
        const std::size_t cn = t.carrier_size(n);
        HomSet sig(t, k, n);
        for (Elem e = 0; e < cn; ++e) {
          std::vector<Elem> units(n);
          for (std::size_t i = 0; i < n; ++i) units[i] = t.unit(n, i);
          if (k == n)
            right.expect(t.subst(e, n, units, n) == e, [&] { return "t=" + t.show(e, n); });
        }
        for_indices(sig.size(), kLawCaseBudget / 4, rng, [&](std::uint64_t si) {
          Morphism s = sig.at(si);
          for (std::size_t i = 0; i < n; ++i)
            left.expect(t.subst(t.unit(n, i), n, s.comps, k) == s.comps[i],
                        [&] { return "i=" + std::to_string(i) + " sigma=" + show(t, s); });
        });
        for (std::size_t l = 0; l <= M; ++l) {
          HomSet tau(t, l, k);
          const std::uint64_t total = cn * sig.size() * tau.size();
          for_indices(total, kLawCaseBudget / 4, rng, [&](std::uint64_t x) {
            Elem e = static_cast<Elem>(x % cn);
            Morphism s = sig.at((x / cn) % sig.size());
            Morphism u = tau.at(x / (cn * sig.size()));
            std::vector<Elem> su;
            for (Elem si : s.comps) su.push_back(t.subst(si, k, u.comps, l));
            assoc.expect(t.subst(t.subst(e, n, s.comps, k), k, u.comps, l) == t.subst(e, n, su, l),
                         [&] { return "t=" + t.show(e, n) + " sigma=" + show(t, s) + " tau=" + show(t, u); });
          });
        }
      }
    rep.checks.push_back(left.check);
    rep.checks.push_back(right.check);
    rep.checks.push_back(assoc.check);
  }

  {
    Recorder s1("sigma1_functor"), s2("sigma2_functor");
    for (std::size_t n = 0; n <= N; ++n)
      for (std::size_t m = 0; m <= N; ++m)
        for (std::size_t k = 0; k <= N; ++k) {
          HomSet F(base, n, m), G(base, m, k);
          for_indices(F.size() * G.size(), kLawCaseBudget, rng, [&](std::uint64_t x) {
            Morphism f = F.at(x % F.size()), g = G.at(x / F.size());
            auto fg = try_seq(base, f, g);
            if (!fg) return;
            s1.expect(t.sigma1(*fg) == seq(t, t.sigma1(f), t.sigma1(g)),
                      [&] { return "f=" + show(base, f) + " g=" + show(base, g); });
          });
          // Powerset theory morphisms: A : n -> m is m subsets of n.
          auto subs_n = subsets_of(n), subs_m = subsets_of(m);
          std::uint64_t FA = checked_pow(subs_n.size(), m, kHomCeiling);
          std::uint64_t GB = checked_pow(subs_m.size(), k, kHomCeiling);
          for_indices(FA * GB, kLawCaseBudget, rng, [&](std::uint64_t x) {
            std::vector<std::vector<std::size_t>> A(m), B(k), AB(k);
            std::uint64_t y = x % FA, z = x / FA;
            for (std::size_t i = 0; i < m; ++i, y /= subs_n.size()) A[i] = subs_n[y % subs_n.size()];
            for (std::size_t j = 0; j < k; ++j, z /= subs_m.size()) B[j] = subs_m[z % subs_m.size()];
            for (std::size_t j = 0; j < k; ++j) {
              std::set<std::size_t> u;
              for (auto i : B[j]) u.insert(A[i].begin(), A[i].end());
              AB[j].assign(u.begin(), u.end());
            }
            if (!full) {
              auto empty = [](const auto& v) { return v.empty(); };
              if (std::any_of(A.begin(), A.end(), empty) || std::any_of(B.begin(), B.end(), empty)) return;
            }
            s2.expect(t.sigma2(n, AB) == seq(t, t.sigma2(n, A), t.sigma2(m, B)), [&] {
              return "n=" + std::to_string(n) + " m=" + std::to_string(m) + " k=" + std::to_string(k);
            });
          });
        }
    rep.checks.push_back(s1.check);
    rep.checks.push_back(s2.check);
  }

  if (full) {
    // U_n = cl{[kappa_i] | i in n}.
    Recorder surj("additivity_surjection"), comm("additivity_commutation");
    auto U = [&](std::size_t n) {
      std::vector<std::size_t> all(n);
      for (std::size_t i = 0; i < n; ++i) all[i] = i;
      return t.sigma2(n, {all});
    };
    for (std::size_t m = 0; m <= M; ++m)
      for (std::size_t n = 0; n <= m; ++n)
        for (const auto& s : enumerate_surjections(m, n))
          surj.expect(U(n) == seq(t, indexing(t, s), U(m)), [&] {
            return "m=" + std::to_string(m) + " n=" + std::to_string(n);
          });
    for (std::size_t n = 0; n <= M; ++n)
      for (std::size_t m = 0; m <= M && n * m <= M; ++m) {
        Morphism Un = U(n);
        for (Elem f = 0; f < t.carrier_size(m); ++f) {
          Morphism fm{m, 1, {f}};
          comm.expect(seq(t, tensor_right(t, Un, m), fm) == seq(t, tensor_left(t, n, fm), Un),
                      [&] { return "n=" + std::to_string(n) + " f=" + t.show(f, m); });
        }
      }
    rep.checks.push_back(surj.check);
    rep.checks.push_back(comm.check);
  }
  return rep;
}

bool tensor_stable(const TensorTheory& t) {
  if (t.factor_bound() == 0) return true;
  const std::size_t N = t.factor_bound();
  const Theory& th = t.base();
  if (t.mode() == TensorMode::Nonempty) {
    for (std::size_t n = 0; n <= t.max_obj(); ++n) {
      RectEngine big(th, n, N, t.mode()), small(th, n, N - 1, t.mode());
      for (std::uint32_t s = 1; s < (std::uint32_t{1} << big.universe()); ++s)
        if (big.canonical(s) != small.canonical(s)) return false;
    }
    return true;
  }
  // The rules through k' < N are shared; the closure is unchanged iff every
  // rule through k' = N already holds in the smaller system.
  const OrderTable& ot = *t.order();
  for (std::size_t n = 0; n <= t.max_obj(); ++n) {
    ClosureSystem small(ot, n, 1, N - 1);
    const HomSet& hs = small.homset();
    HomSet gs(th, n, N), hk(th, N, 1);
    for (std::uint64_t gi = 0; gi < gs.size(); ++gi) {
      Morphism g = gs.at(gi);
      for (std::uint64_t hi = 0; hi < hk.size(); ++hi) {
        Morphism h = hk.at(hi);
        auto concl = try_seq(th, g, h);
        if (!concl) continue;
        Bits prem(hs.size());
        bool ok = true;
        for (std::size_t i = 0; i < N && ok; ++i) {
          auto p = try_seq(th, mask_except(th, g, i), h);
          if (!p) ok = false;
          else prem.set(hs.index_of(*p));
        }
        if (ok && !small.close(prem).test(hs.index_of(*concl))) return false;
      }
    }
  }
  return true;
}

}  // namespace lawvere
