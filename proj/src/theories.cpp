#include "lawvere/theories.hpp"

#include <algorithm>
#include <sstream>

namespace lawvere {

std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t ceiling) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (base != 0 && r > ceiling / base) throw CapacityExceeded("power exceeds ceiling");
    r *= base;
    if (r == 0) return 0;
  }
  if (r > ceiling) throw CapacityExceeded("power exceeds ceiling");
  return r;
}

FinMap FinMap::identity(std::size_t n) {
  FinMap e{n, n, {}};
  for (std::size_t i = 0; i < n; ++i) e.table.push_back(i);
  return e;
}

FinMap FinMap::pick(std::size_t n, std::size_t i) { return FinMap{1, n, {i}}; }

FinMap FinMap::constant(std::size_t dom, std::size_t cod, std::size_t v) {
  return FinMap{dom, cod, std::vector<std::size_t>(dom, v)};
}

bool FinMap::valid() const {
  if (table.size() != dom) return false;
  return std::all_of(table.begin(), table.end(), [&](std::size_t v) { return v < cod; });
}

bool FinMap::surjective() const {
  std::vector<bool> hit(cod, false);
  for (auto v : table) hit[v] = true;
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

FinMap FinMap::then(const FinMap& next) const {
  if (next.dom != cod) throw std::invalid_argument("FinMap::then: codomain mismatch");
  FinMap r{dom, next.cod, {}};
  for (auto v : table) r.table.push_back(next.table[v]);
  return r;
}

std::vector<FinMap> enumerate_finmaps(std::size_t dom, std::size_t cod) {
  std::vector<FinMap> out;
  std::uint64_t count = checked_pow(cod, dom, kCarrierCeiling);
  for (std::uint64_t x = 0; x < count; ++x) {
    FinMap e{dom, cod, std::vector<std::size_t>(dom)};
    std::uint64_t y = x;
    for (std::size_t i = dom; i-- > 0;) {
      e.table[i] = y % cod;
      y /= cod;
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<FinMap> enumerate_surjections(std::size_t dom, std::size_t cod) {
  auto all = enumerate_finmaps(dom, cod);
  std::vector<FinMap> out;
  for (auto& e : all)
    if (e.surjective()) out.push_back(std::move(e));
  return out;
}

Elem Theory::join(Elem, Elem, std::size_t) const {
  throw NotAdditive(spec() + " has no join");
}

Elem Theory::subst(Elem t, std::size_t n, std::span<const Elem> sigma, std::size_t k) const {
  Elem r = try_subst(t, n, sigma, k);
  if (r == kNoElem) throw CapacityExceeded(spec() + ": substitution leaves the enumerated carrier");
  return r;
}

Elem Theory::bottom(std::size_t n) const {
  if (!bounded()) throw NotBounded(spec() + " is not bounded");
  return subst(0, 0, {}, n);
}

std::vector<Elem> enumerate_carrier(const Theory& th, std::size_t n) {
  std::size_t c = th.carrier_size(n);
  std::vector<Elem> out(c);
  for (std::size_t i = 0; i < c; ++i) out[i] = static_cast<Elem>(i);
  return out;
}

std::strong_ordering Morphism::operator<=>(const Morphism& o) const {
  if (auto c = dom <=> o.dom; c != 0) return c;
  if (auto c = cod <=> o.cod; c != 0) return c;
  return std::lexicographical_compare_three_way(comps.begin(), comps.end(), o.comps.begin(),
                                                o.comps.end());
}

Morphism identity(const Theory& th, std::size_t n) {
  return indexing(th, FinMap::identity(n));
}

std::optional<Morphism> try_seq(const Theory& th, const Morphism& f, const Morphism& g) {
  if (f.cod != g.dom) throw std::invalid_argument("seq: f.cod != g.dom");
  Morphism r{f.dom, g.cod, {}};
  r.comps.reserve(g.cod);
  for (auto gj : g.comps) {
    Elem e = th.try_subst(gj, g.dom, f.comps, f.dom);
    if (e == kNoElem) return std::nullopt;
    r.comps.push_back(e);
  }
  return r;
}

Morphism seq(const Theory& th, const Morphism& f, const Morphism& g) {
  auto r = try_seq(th, f, g);
  if (!r) throw CapacityExceeded(th.spec() + ": composite leaves the enumerated carrier");
  return *r;
}

Morphism indexing(const Theory& th, const FinMap& e) {
  if (!e.valid()) throw std::invalid_argument("indexing: invalid FinMap");
  Morphism r{e.cod, e.dom, {}};
  for (auto v : e.table) r.comps.push_back(th.unit(e.cod, v));
  return r;
}

Morphism bottom_morphism(const Theory& th, std::size_t n, std::size_t m) {
  return Morphism{n, m, std::vector<Elem>(m, th.bottom(n))};
}

Morphism component(const Morphism& f, std::size_t j) { return Morphism{f.dom, 1, {f.comps.at(j)}}; }

Morphism tensor_right(const Theory& th, const Morphism& f, std::size_t m) {
  const std::size_t n = f.dom, k = f.cod;
  Morphism r{n * m, k * m, std::vector<Elem>(k * m)};
  for (std::size_t l = 0; l < m; ++l) {
    std::vector<Elem> ren(n);
    for (std::size_t y = 0; y < n; ++y) ren[y] = th.unit(n * m, y * m + l);
    for (std::size_t j = 0; j < k; ++j) r.comps[j * m + l] = th.subst(f.comps[j], n, ren, n * m);
  }
  return r;
}

Morphism tensor_left(const Theory& th, std::size_t m, const Morphism& f) {
  const std::size_t n = f.dom, k = f.cod;
  Morphism r{m * n, m * k, std::vector<Elem>(m * k)};
  for (std::size_t x = 0; x < m; ++x) {
    std::vector<Elem> ren(n);
    for (std::size_t y = 0; y < n; ++y) ren[y] = th.unit(m * n, x * n + y);
    for (std::size_t j = 0; j < k; ++j) r.comps[x * k + j] = th.subst(f.comps[j], n, ren, m * n);
  }
  return r;
}

std::string show(const Theory& th, const Morphism& f) {
  if (f.cod == 1) return th.show(f.comps[0], f.dom);
  std::string s = "(";
  for (std::size_t j = 0; j < f.cod; ++j) {
    if (j) s += ", ";
    s += th.show(f.comps[j], f.dom);
  }
  return s + ")";
}

HomSet::HomSet(const Theory& th, std::size_t n, std::size_t m)
    : n_(n), m_(m), c_(th.carrier_size(n)), size_(checked_pow(c_, m, kHomCeiling)) {}

Morphism HomSet::at(std::uint64_t index) const {
  Morphism f{n_, m_, std::vector<Elem>(m_)};
  for (std::size_t j = m_; j-- > 0;) {
    f.comps[j] = static_cast<Elem>(index % c_);
    index /= c_;
  }
  return f;
}

std::uint64_t HomSet::index_of(const Morphism& f) const {
  std::uint64_t x = 0;
  for (auto e : f.comps) x = x * c_ + e;
  return x;
}

std::vector<Morphism> enumerate_hom(const Theory& th, std::size_t n, std::size_t m) {
  HomSet hs(th, n, m);
  std::vector<Morphism> out;
  out.reserve(hs.size());
  for (std::uint64_t i = 0; i < hs.size(); ++i) out.push_back(hs.at(i));
  return out;
}

SubstTable::SubstTable(const Theory& th, std::size_t m, std::size_t n) : m_(m), n_(n) {
  HomSet hs(th, n, m);
  tuples_ = hs.size();
  std::size_t hc = th.carrier_size(m);
  if (static_cast<std::uint64_t>(hc) * tuples_ > (std::uint64_t{1} << 28))
    throw CapacityExceeded("substitution table too large");
  data_.resize(hc * tuples_);
  for (std::uint64_t y = 0; y < tuples_; ++y) {
    Morphism tup = hs.at(y);
    for (std::size_t h = 0; h < hc; ++h) {
      Elem e = th.try_subst(static_cast<Elem>(h), m, tup.comps, n);
      if (e == kNoElem) ++overflow_;
      data_[h * tuples_ + y] = e;
    }
  }
}

std::size_t sat_add(std::size_t a, std::size_t b, std::size_t K) { return std::min(K, a + b); }
std::size_t sat_mul(std::size_t a, std::size_t b, std::size_t K) { return std::min(K, a * b); }

namespace {

std::vector<std::uint64_t> powers(std::uint64_t base, std::size_t count) {
  std::vector<std::uint64_t> p(count + 1, 1);
  for (std::size_t i = 1; i <= count; ++i) p[i] = p[i - 1] * base;
  return p;
}

std::string set_str(const std::vector<std::string>& items, const char* open, const char* close) {
  std::string s = open;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) s += ",";
    s += items[i];
  }
  return s + close;
}

// unit and try_subst call carrier_size so that contexts past the ceiling throw
// instead of wrapping the encoding.
class Powerset final : public Theory {
 public:
  std::string spec() const override { return "P"; }
  std::string family() const override { return "P"; }
  bool bounded() const override { return true; }
  bool has_join() const override { return true; }
  std::size_t carrier_size(std::size_t n) const override {
    return checked_pow(2, n, kCarrierCeiling);
  }
  Elem unit(std::size_t n, std::size_t i) const override {
    carrier_size(n);
    return Elem{1} << i;
  }
  Elem try_subst(Elem t, std::size_t n, std::span<const Elem> sigma, std::size_t k) const override {
    carrier_size(k);
    Elem r = 0;
    for (std::size_t i = 0; i < n; ++i)
      if ((t >> i) & 1u) r |= sigma[i];
    return r;
  }
  Elem join(Elem a, Elem b, std::size_t) const override { return a | b; }
  std::string show(Elem t, std::size_t n) const override {
    std::vector<std::string> xs;
    for (std::size_t i = 0; i < n; ++i)
      if ((t >> i) & 1u) xs.push_back(std::to_string(i));
    return set_str(xs, "{", "}");
  }
};

// Element e encodes the nonempty mask e+1.
class NonemptyPowerset final : public Theory {
 public:
  std::string spec() const override { return "Pstar"; }
  std::string family() const override { return "Pstar"; }
  bool bounded() const override { return false; }
  bool has_join() const override { return true; }
  std::size_t carrier_size(std::size_t n) const override {
    return checked_pow(2, n, kCarrierCeiling) - 1;
  }
  Elem unit(std::size_t n, std::size_t i) const override {
    carrier_size(n);
    return (Elem{1} << i) - 1;
  }
  Elem try_subst(Elem t, std::size_t n, std::span<const Elem> sigma, std::size_t k) const override {
    carrier_size(k);
    Elem mask = t + 1, r = 0;
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1u) r |= sigma[i] + 1;
    return r - 1;
  }
  Elem join(Elem a, Elem b, std::size_t) const override { return ((a + 1) | (b + 1)) - 1; }
  std::string show(Elem t, std::size_t n) const override {
    std::vector<std::string> xs;
    for (std::size_t i = 0; i < n; ++i)
      if (((t + 1) >> i) & 1u) xs.push_back(std::to_string(i));
    return set_str(xs, "{", "}");
  }
};

// Tables over s states, entry 0 most significant. Digit layout is family specific.
class StateLike : public Theory {
 public:
  StateLike(std::size_t s, bool partial) : s_(s), partial_(partial) {}
  std::size_t radix(std::size_t n) const { return (partial_ ? 1 : 0) + s_ * n; }
  std::size_t carrier_size(std::size_t n) const override {
    return checked_pow(radix(n), s_, kCarrierCeiling);
  }
  std::size_t digit(Elem x, std::size_t q, std::size_t n) const {
    auto p = powers(radix(n), s_);
    return (x / p[s_ - 1 - q]) % radix(n);
  }
  Elem encode(const std::vector<std::size_t>& d, std::size_t n) const {
    std::uint64_t x = 0;
    for (auto v : d) x = x * radix(n) + v;
    return static_cast<Elem>(x);
  }
  std::size_t pair_digit(std::size_t q, std::size_t i, std::size_t n) const {
    return (partial_ ? 1 : 0) + q * n + i;
  }
  Elem unit(std::size_t n, std::size_t i) const override {
    carrier_size(n);
    std::vector<std::size_t> d(s_);
    for (std::size_t q = 0; q < s_; ++q) d[q] = pair_digit(q, i, n);
    return encode(d, n);
  }
  Elem try_subst(Elem t, std::size_t n, std::span<const Elem> sigma, std::size_t k) const override {
    carrier_size(k);
    std::vector<std::size_t> d(s_);
    auto pn = powers(radix(n), s_);
    auto pk = powers(radix(k), s_);
    for (std::size_t q = 0; q < s_; ++q) {
      std::size_t v = (t / pn[s_ - 1 - q]) % radix(n);
      if (partial_ && v == 0) {
        d[q] = 0;
        continue;
      }
      v -= partial_ ? 1 : 0;
      std::size_t q2 = v / n, i = v % n;
      d[q] = (sigma[i] / pk[s_ - 1 - q2]) % radix(k);
    }
    return encode(d, k);
  }
  std::string show(Elem t, std::size_t n) const override {
    std::vector<std::string> xs;
    for (std::size_t q = 0; q < s_; ++q) {
      std::size_t v = digit(t, q, n);
      std::string e = "s" + std::to_string(q) + ":";
      if (partial_ && v == 0) {
        e += "_";
      } else {
        v -= partial_ ? 1 : 0;
        e += "(s" + std::to_string(v / n) + ",x" + std::to_string(v % n) + ")";
      }
      xs.push_back(e);
    }
    return set_str(xs, "[", "]");
  }

 protected:
  std::size_t s_;
  bool partial_;
};

class State final : public StateLike {
 public:
  explicit State(std::size_t s) : StateLike(s, false) {}
  std::string spec() const override { return "state:s=" + std::to_string(s_); }
  std::string family() const override { return "state"; }
  bool bounded() const override { return false; }
};

class PartialState final : public StateLike {
 public:
  explicit PartialState(std::size_t s) : StateLike(s, true) {}
  std::string spec() const override { return "pstate:s=" + std::to_string(s_); }
  std::string family() const override { return "pstate"; }
  bool bounded() const override { return true; }
};

// Elements 0..e-1 are exceptions, e+i is variable i.
class Exceptions final : public Theory {
 public:
  explicit Exceptions(std::size_t e) : e_(e) {}
  std::string spec() const override { return "exc:e=" + std::to_string(e_); }
  std::string family() const override { return "exc"; }
  bool bounded() const override { return e_ == 1; }
  std::size_t carrier_size(std::size_t n) const override {
    if (e_ + n > kCarrierCeiling) throw CapacityExceeded("exc carrier");
    return e_ + n;
  }
  Elem unit(std::size_t, std::size_t i) const override { return static_cast<Elem>(e_ + i); }
  Elem try_subst(Elem t, std::size_t, std::span<const Elem> sigma, std::size_t) const override {
    return t < e_ ? t : sigma[t - e_];
  }
  std::string show(Elem t, std::size_t) const override {
    return t < e_ ? "exc" + std::to_string(t) : "x" + std::to_string(t - e_);
  }

 private:
  std::size_t e_;
};

// Digit i (multiplicity of x_i) has weight (K+1)^i.
class Multiset final : public Theory {
 public:
  explicit Multiset(std::size_t K) : K_(K) {}
  std::string spec() const override { return "mset:K=" + std::to_string(K_); }
  std::string family() const override { return "mset"; }
  bool bounded() const override { return true; }
  std::size_t carrier_size(std::size_t n) const override {
    return checked_pow(K_ + 1, n, kCarrierCeiling);
  }
  Elem unit(std::size_t n, std::size_t i) const override {
    carrier_size(n);
    return static_cast<Elem>(powers(K_ + 1, i)[i]);
  }
  Elem try_subst(Elem t, std::size_t n, std::span<const Elem> sigma, std::size_t k) const override {
    carrier_size(k);
    const std::size_t b = K_ + 1;
    std::vector<std::size_t> acc(k, 0);
    Elem tt = t;
    for (std::size_t i = 0; i < n; ++i, tt /= b) {
      std::size_t ti = tt % b;
      if (ti == 0) continue;
      Elem si = sigma[i];
      for (std::size_t j = 0; j < k; ++j, si /= b)
        acc[j] = sat_add(acc[j], sat_mul(ti, si % b, K_), K_);
    }
    std::uint64_t x = 0;
    for (std::size_t j = k; j-- > 0;) x = x * b + acc[j];
    return static_cast<Elem>(x);
  }
  std::string show(Elem t, std::size_t n) const override {
    std::vector<std::string> xs;
    for (std::size_t i = 0; i < n; ++i, t /= (K_ + 1))
      if (t % (K_ + 1)) xs.push_back("x" + std::to_string(i) + ":" + std::to_string(t % (K_ + 1)));
    return set_str(xs, "<", ">");
  }

 private:
  std::size_t K_;
};

// Ordered by length, then lexicographically (entry 0 most significant).
class CappedList final : public Theory {
 public:
  explicit CappedList(std::size_t cap) : cap_(cap) {}
  std::string spec() const override { return "list:cap=" + std::to_string(cap_); }
  std::string family() const override { return "list"; }
  bool bounded() const override { return true; }
  std::size_t carrier_size(std::size_t n) const override {
    std::uint64_t total = 0;
    for (std::size_t l = 0; l <= cap_; ++l) {
      total += checked_pow(n, l, kCarrierCeiling);
      if (total > kCarrierCeiling) throw CapacityExceeded("list carrier");
    }
    return total;
  }
  std::vector<std::size_t> decode(Elem x, std::size_t n) const {
    std::uint64_t rest = x;
    for (std::size_t l = 0; l <= cap_; ++l) {
      std::uint64_t block = checked_pow(n, l, kCarrierCeiling);
      if (rest < block) {
        std::vector<std::size_t> out(l);
        for (std::size_t p = l; p-- > 0;) {
          out[p] = rest % n;
          rest /= n;
        }
        return out;
      }
      rest -= block;
    }
    throw std::out_of_range("list element out of range");
  }
  Elem encode(const std::vector<std::size_t>& xs, std::size_t n) const {
    std::uint64_t off = 0;
    for (std::size_t l = 0; l < xs.size(); ++l) off += checked_pow(n, l, kCarrierCeiling);
    std::uint64_t v = 0;
    for (auto x : xs) v = v * n + x;
    return static_cast<Elem>(off + v);
  }
  Elem unit(std::size_t n, std::size_t i) const override {
    carrier_size(n);
    return encode({i}, n);
  }
  Elem try_subst(Elem t, std::size_t n, std::span<const Elem> sigma, std::size_t k) const override {
    carrier_size(k);
    std::vector<std::size_t> out;
    for (auto i : decode(t, n)) {
      auto piece = decode(sigma[i], k);
      if (out.size() + piece.size() > cap_) return kNoElem;
      out.insert(out.end(), piece.begin(), piece.end());
    }
    return encode(out, k);
  }
  std::string show(Elem t, std::size_t n) const override {
    std::vector<std::string> xs;
    for (auto i : decode(t, n)) xs.push_back(std::to_string(i));
    return set_str(xs, "[", "]");
  }

 private:
  std::size_t cap_;
};

// Element = table over continuations c : n -> R (c indexed by sum c(i) r^i),
// entry for c has weight r^c.
class Continuation final : public Theory {
 public:
  explicit Continuation(std::size_t r) : r_(r) {}
  std::string spec() const override { return "cont:r=" + std::to_string(r_); }
  std::string family() const override { return "cont"; }
  bool bounded() const override { return r_ == 1; }
  std::size_t conts(std::size_t n) const { return checked_pow(r_, n, kCarrierCeiling); }
  std::size_t carrier_size(std::size_t n) const override {
    return checked_pow(r_, conts(n), kCarrierCeiling);
  }
  std::size_t entry(Elem t, std::size_t c) const {
    std::uint64_t x = t;
    for (std::size_t i = 0; i < c; ++i) x /= r_;
    return x % r_;
  }
  Elem unit(std::size_t n, std::size_t i) const override {
    carrier_size(n);
    std::size_t nc = conts(n);
    std::uint64_t x = 0;
    for (std::size_t c = nc; c-- > 0;) {
      std::size_t ci = c;
      for (std::size_t j = 0; j < i; ++j) ci /= r_;
      x = x * r_ + ci % r_;
    }
    return static_cast<Elem>(x);
  }
  Elem try_subst(Elem t, std::size_t n, std::span<const Elem> sigma, std::size_t k) const override {
    carrier_size(k);
    std::size_t kc = conts(k);
    std::vector<std::size_t> tab(conts(n));
    for (std::size_t c = 0; c < tab.size(); ++c) tab[c] = entry(t, c);
    std::vector<std::vector<std::size_t>> sig(n, std::vector<std::size_t>(kc));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t c = 0; c < kc; ++c) sig[i][c] = entry(sigma[i], c);
    std::uint64_t x = 0;
    for (std::size_t c2 = kc; c2-- > 0;) {
      std::size_t c = 0;
      for (std::size_t i = n; i-- > 0;) c = c * r_ + sig[i][c2];
      x = x * r_ + tab[c];
    }
    return static_cast<Elem>(x);
  }
  std::string show(Elem t, std::size_t n) const override {
    std::vector<std::string> xs;
    for (std::size_t c = 0; c < conts(n); ++c) xs.push_back(std::to_string(entry(t, c)));
    return set_str(xs, "cont[", "]");
  }

 private:
  std::size_t r_;
};

// Bit q*s*n + q'*n + i set iff (q', x_i) is a possible outcome from state q.
class NdStateNative final : public Theory {
 public:
  explicit NdStateNative(std::size_t s) : s_(s) {}
  std::string spec() const override { return "ndstate-native:s=" + std::to_string(s_); }
  std::string family() const override { return "ndstate-native"; }
  bool bounded() const override { return true; }
  bool has_join() const override { return true; }
  std::size_t carrier_size(std::size_t n) const override {
    return checked_pow(2, s_ * s_ * n, kCarrierCeiling);
  }
  Elem unit(std::size_t n, std::size_t i) const override {
    carrier_size(n);
    Elem x = 0;
    for (std::size_t q = 0; q < s_; ++q) x |= Elem{1} << (q * s_ * n + q * n + i);
    return x;
  }
  Elem try_subst(Elem t, std::size_t n, std::span<const Elem> sigma, std::size_t k) const override {
    carrier_size(k);
    const std::size_t bn = s_ * n, bk = s_ * k;
    const Elem mask_k = bk >= 32 ? ~Elem{0} : (Elem{1} << bk) - 1;
    Elem r = 0;
    for (std::size_t q = 0; q < s_; ++q)
      for (std::size_t q2 = 0; q2 < s_; ++q2)
        for (std::size_t i = 0; i < n; ++i)
          if ((t >> (q * bn + q2 * n + i)) & 1u) r |= ((sigma[i] >> (q2 * bk)) & mask_k) << (q * bk);
    return r;
  }
  Elem join(Elem a, Elem b, std::size_t) const override { return a | b; }
  std::string show(Elem t, std::size_t n) const override {
    std::vector<std::string> xs;
    for (std::size_t q = 0; q < s_; ++q) {
      std::vector<std::string> outs;
      for (std::size_t q2 = 0; q2 < s_; ++q2)
        for (std::size_t i = 0; i < n; ++i)
          if ((t >> (q * s_ * n + q2 * n + i)) & 1u)
            outs.push_back("(s" + std::to_string(q2) + ",x" + std::to_string(i) + ")");
      xs.push_back("s" + std::to_string(q) + ":" + set_str(outs, "{", "}"));
    }
    return set_str(xs, "[", "]");
  }

 private:
  std::size_t s_;
};

}  // namespace

TheoryPtr make_powerset() { return std::make_shared<Powerset>(); }
TheoryPtr make_nonempty_powerset() { return std::make_shared<NonemptyPowerset>(); }
TheoryPtr make_state(std::size_t s) { return std::make_shared<State>(s); }
TheoryPtr make_partial_state(std::size_t s) { return std::make_shared<PartialState>(s); }
TheoryPtr make_exceptions(std::size_t e) { return std::make_shared<Exceptions>(e); }
TheoryPtr make_multiset(std::size_t K) { return std::make_shared<Multiset>(K); }
TheoryPtr make_list(std::size_t cap) { return std::make_shared<CappedList>(cap); }
TheoryPtr make_continuation(std::size_t r) { return std::make_shared<Continuation>(r); }
TheoryPtr make_ndstate_native(std::size_t s) { return std::make_shared<NdStateNative>(s); }

}  // namespace lawvere
