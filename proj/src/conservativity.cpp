#include "lawvere/conservativity.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <thread>

namespace lawvere {

bool check_bounded(const Theory& th) { return th.carrier_size(0) == 1; }

namespace {

std::optional<Elem> try_apply(const Theory& th, Elem t, std::size_t n, const std::vector<Elem>& sigma,
                              std::size_t k) {
  Elem e = th.try_subst(t, n, sigma, k);
  if (e == kNoElem) return std::nullopt;
  return e;
}

// U_n (x) m composed with f, against n (x) f composed with U_n, in context n*m.
bool commutes(const Theory& th, std::size_t n, Elem Un, std::size_t m, Elem f) {
  Morphism U{n, 1, {Un}}, F{m, 1, {f}};
  auto lhs = try_seq(th, tensor_right(th, U, m), F);
  auto rhs = try_seq(th, tensor_left(th, n, F), U);
  if (!lhs || !rhs) throw CapacityExceeded("additivity: composite left the enumerated carrier");
  return *lhs == *rhs;
}

}  // namespace

AdditivityResult check_complete_additivity(const Theory& th, std::size_t N) {
  AdditivityResult res;
  if (th.carrier_size(0) != 1) {
    res.reason = th.carrier_size(0) == 0 ? "no constant for U_0" : "several constants";
    return res;
  }
  std::vector<Elem> fam;
  std::size_t reached = 0;
  std::function<bool(std::size_t)> rec = [&](std::size_t n) -> bool {
    reached = std::max(reached, n);
    if (n > N) return true;
    for (Elem cand = 0; cand < th.carrier_size(n); ++cand) {
      if (n == 1 && cand != th.unit(1, 0)) continue;
      bool ok = true;
      // Surjections onto n from m <= n; fam[m] is already fixed for m < n.
      for (std::size_t m = 0; m <= n && ok; ++m)
        for (const auto& s : enumerate_surjections(n, m)) {
          Elem lower = m == n ? cand : fam[m];
          if (m == n) {
            auto r = try_apply(th, cand, n, indexing(th, s).comps, n);
            if (!r || *r != cand) ok = false;
          } else {
            auto r = try_apply(th, cand, n, indexing(th, s).comps, m);
            if (!r || *r != lower) ok = false;
          }
          if (!ok) break;
        }
      for (std::size_t m = 0; m <= N && ok; ++m)
        for (Elem f = 0; f < th.carrier_size(m) && ok; ++f) ok = commutes(th, n, cand, m, f);
      if (!ok) continue;
      fam.push_back(cand);
      if (rec(n + 1)) return true;
      fam.pop_back();
    }
    return false;
  };
  res.ok = rec(0);
  if (res.ok) res.family = fam;
  else res.reason = "no candidate for U_" + std::to_string(reached);
  return res;
}

DeltaSumResult check_delta_sum(const Theory& th, std::size_t max_m) {
  DeltaSumResult res;
  if (!th.has_join()) throw NotAdditive(th.spec() + " has no join");
  for (std::size_t m = 0; m <= max_m; ++m) {
    Morphism acc = bottom_morphism(th, m, m);
    for (std::size_t j = 0; j < m; ++j) {
      Morphism d = delta(th, m, j);
      for (std::size_t l = 0; l < m; ++l) acc.comps[l] = th.join(acc.comps[l], d.comps[l], m);
    }
    ++res.checked;
    if (acc != identity(th, m)) {
      res.ok = false;
      res.failing_m = m;
      return res;
    }
  }
  return res;
}

std::string to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::Admits: return "admits";
    case VerdictKind::Fails: return "fails";
    case VerdictKind::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

struct Hit {
  std::uint64_t f = 0, g = 0;
  bool found = false;
  void offer(std::uint64_t fi, std::uint64_t gi) {
    if (!found || std::tie(fi, gi) < std::tie(f, g)) {
      f = fi;
      g = gi;
      found = true;
    }
  }
};

struct BlockResult {
  Hit no_lub, not_least;
  std::size_t truncated = 0;
};

// Pieces seq(f, seq(Delta_i, g)) for i < m; nullopt on overflow.
std::optional<std::vector<Morphism>> pieces_of(const Theory& th, const Morphism& f, const Morphism& g) {
  std::vector<Morphism> out;
  for (std::size_t i = 0; i < f.cod; ++i) {
    auto dg = try_seq(th, delta(th, f.cod, i), g);
    if (!dg) return std::nullopt;
    auto p = try_seq(th, f, *dg);
    if (!p) return std::nullopt;
    out.push_back(std::move(*p));
  }
  return out;
}

// The lub is componentwise, so codomains k >= 2 reduce to k = 1.
BlockResult scan_block(const OrderTable& ot, std::size_t n, std::size_t m, std::size_t jobs) {
  const Theory& th = ot.theory();
  HomSet F(th, n, m), G(th, m, 1);
  std::vector<Morphism> gs;
  std::vector<std::vector<Elem>> dg(G.size());
  for (std::uint64_t gi = 0; gi < G.size(); ++gi) gs.push_back(G.at(gi));
  for (std::uint64_t gi = 0; gi < G.size(); ++gi)
    for (std::size_t i = 0; i < m; ++i) {
      auto d = try_seq(th, delta(th, m, i), gs[gi]);
      dg[gi].push_back(d ? d->comps[0] : kNoElem);
    }
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::uint64_t>(jobs, F.size()));
  std::vector<BlockResult> parts(workers);
  auto work = [&](std::size_t w) {
    BlockResult& r = parts[w];
    for (std::uint64_t fi = w; fi < F.size(); fi += workers) {
      Morphism f = F.at(fi);
      for (std::uint64_t gi = 0; gi < G.size(); ++gi) {
        // Past a hit only overflow is counted, so the count does not depend on the split.
        const bool past_hit = r.no_lub.found && std::tie(fi, gi) > std::tie(r.no_lub.f, r.no_lub.g);
        Elem comp = th.try_subst(gs[gi].comps[0], m, f.comps, n);
        bool overflow = comp == kNoElem;
        std::vector<Morphism> pieces;
        for (std::size_t i = 0; i < m && !overflow; ++i) {
          Elem p = dg[gi][i] == kNoElem ? kNoElem : th.try_subst(dg[gi][i], m, f.comps, n);
          overflow = p == kNoElem;
          pieces.push_back(Morphism{n, 1, {p}});
        }
        if (overflow) {
          ++r.truncated;
          continue;
        }
        if (past_hit) continue;
        auto mubs = minimal_upper_bounds(ot, pieces, n, 1);
        if (mubs.size() != 1) r.no_lub.offer(fi, gi);
        else if (mubs[0].comps[0] != comp) r.not_least.offer(fi, gi);
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  BlockResult out;
  for (const auto& p : parts) {
    out.truncated += p.truncated;
    if (p.no_lub.found) out.no_lub.offer(p.no_lub.f, p.no_lub.g);
    if (p.not_least.found) out.not_least.offer(p.not_least.f, p.not_least.g);
  }
  return out;
}

ConservativityWitness make_witness(const OrderTable& ot, std::size_t n, std::size_t m, const Hit& h,
                                   std::string reason) {
  const Theory& th = ot.theory();
  ConservativityWitness w;
  w.reason = std::move(reason);
  w.f = HomSet(th, n, m).at(h.f);
  w.g = HomSet(th, m, 1).at(h.g);
  w.pieces = *pieces_of(th, w.f, w.g);
  w.minimal_upper_bounds = minimal_upper_bounds(ot, w.pieces, n, 1);
  w.expected = seq(th, w.f, w.g);
  return w;
}

}  // namespace

Verdict check_conservativity(const OrderTable& ot, std::size_t jobs) {
  const Theory& th = ot.theory();
  Verdict v;
  v.theory = th.spec();
  v.N = ot.max_size();
  v.mode = ot.mode();
  auto po = is_partial_order(ot);
  if (!po.ok) {
    v.kind = VerdictKind::Fails;
    ConservativityWitness w;
    w.reason = "not_antisymmetric";
    w.f = po.witness->first;
    w.g = po.witness->second;
    v.witness = std::move(w);
    return v;
  }
  std::optional<ConservativityWitness> not_least;
  for (std::size_t n = 0; n <= ot.max_size(); ++n)
    for (std::size_t m = 0; m <= ot.max_size(); ++m) {
      BlockResult b = scan_block(ot, n, m, jobs);
      v.truncated_pairs += b.truncated;
      if (b.no_lub.found) {
        v.kind = VerdictKind::Fails;
        v.witness = make_witness(ot, n, m, b.no_lub, "no_least_upper_bound");
        return v;
      }
      if (b.not_least.found && !not_least) not_least = make_witness(ot, n, m, b.not_least, "composite_not_least");
    }
  if (not_least) {
    v.kind = VerdictKind::Fails;
    v.witness = std::move(not_least);
  }
  return v;
}

Verdict check_conservativity(TheoryPtr th, std::size_t N, const ConservativityOptions& opt) {
  if (!th->bounded()) throw NotBounded(th->spec() + " is not bounded");
  std::optional<bool> agree;
  auto run = [&](std::size_t n) {
    try {
      OrderTable ot = compute_preorder(th, n, opt.mode);
      if (opt.compare_modes && n == N) {
        const RuleMode other = opt.mode == RuleMode::Literal ? RuleMode::TwoSided : RuleMode::Literal;
        try {
          agree = ot == compute_preorder(th, n, other);
        } catch (const CapacityExceeded&) {
        }
      }
      return check_conservativity(ot, opt.jobs);
    } catch (const CapacityExceeded& e) {
      Verdict v;
      v.theory = th->spec();
      v.N = n;
      v.mode = opt.mode;
      v.kind = VerdictKind::Inconclusive;
      v.note = e.what();
      return v;
    }
  };
  Verdict v = run(N);
  v.modes_agree = agree;
  if (opt.stability && N > 0 && v.kind != VerdictKind::Inconclusive) {
    Verdict lower = run(N - 1);
    v.stability = lower.kind == v.kind;
    // A failure below N cannot disappear at N: the smaller hom-sets are still checked.
    if (lower.kind == VerdictKind::Fails && v.kind == VerdictKind::Admits) {
      v.kind = VerdictKind::Inconclusive;
      v.note = "verdict at N-1 contradicts N";
    }
  }
  return v;
}

bool witness_reproduces(const OrderTable& ot, const ConservativityWitness& w) {
  const Theory& th = ot.theory();
  if (w.reason == "not_antisymmetric")
    return w.f != w.g && ot.leq(w.f, w.g) && ot.leq(w.g, w.f);
  auto pieces = pieces_of(th, w.f, w.g);
  auto comp = try_seq(th, w.f, w.g);
  if (!pieces || !comp) return false;
  if (*pieces != w.pieces || !w.expected || *comp != *w.expected) return false;
  return !is_least_upper_bound(ot, *comp, *pieces);
}

nlohmann::json to_json(const Theory& th, const Verdict& v) {
  nlohmann::json j;
  j["theory"] = v.theory;
  j["N"] = v.N;
  j["rule_mode"] = to_string(v.mode);
  j["kind"] = to_string(v.kind);
  j["truncated_pairs"] = v.truncated_pairs;
  j["stability"] = v.stability ? nlohmann::json(*v.stability) : nlohmann::json(nullptr);
  j["modes_agree"] = v.modes_agree ? nlohmann::json(*v.modes_agree) : nlohmann::json(nullptr);
  if (!v.note.empty()) j["note"] = v.note;
  if (v.witness) {
    const auto& w = *v.witness;
    auto shows = [&](const std::vector<Morphism>& xs) {
      nlohmann::json a = nlohmann::json::array();
      for (const auto& x : xs) a.push_back(show(th, x));
      return a;
    };
    j["witness"] = {{"reason", w.reason},
                    {"f", show(th, w.f)},
                    {"g", show(th, w.g)},
                    {"pieces", shows(w.pieces)},
                    {"minimal_upper_bounds", shows(w.minimal_upper_bounds)},
                    {"expected", w.expected ? nlohmann::json(show(th, *w.expected)) : nlohmann::json(nullptr)}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

Morphism constants_morphism(const Theory& th, std::size_t n) {
  Morphism r = identity(th, n);
  r.cod = n + th.carrier_size(0);
  for (Elem c = 0; c < th.carrier_size(0); ++c) r.comps.push_back(th.subst(c, 0, {}, n));
  return r;
}

Morphism uniform_instance(const Theory& th, const UniformityWitness& w) {
  const std::size_t n = w.f.dom, m = w.f.cod, k = w.fhat.dom;
  Morphism cn = constants_morphism(th, n);
  Morphism out{n, m, {}};
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<Elem> sigma(k);
    for (std::size_t j = 0; j < k; ++j) sigma[j] = cn.comps[w.u.table[j * m + i]];
    out.comps.push_back(th.subst(w.fhat.comps[0], k, sigma, n));
  }
  return out;
}

Morphism uniform_instance_literal(const Theory& th, const UniformityWitness& w) {
  const std::size_t n = w.f.dom, m = w.f.cod;
  Morphism cu = seq(th, constants_morphism(th, n), indexing(th, w.u));
  return seq(th, cu, tensor_right(th, w.fhat, m));
}

namespace {

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

// Bitmask encodings: element j of a subset is bit j.
UniformityWitness powerset_witness(const Theory& th, const Morphism& f, bool nonempty) {
  const std::size_t n = f.dom, m = f.cod, c = th.carrier_size(0);
  if (nonempty && n == 0)  // only the empty tuple 0 -> 0
    return UniformityWitness{f, Morphism{1, 1, {th.unit(1, 0)}}, FinMap{0, 0, {}}, c};
  UniformityWitness w{f, Morphism{n, 1, {}}, FinMap{n * m, n + c, std::vector<std::size_t>(n * m)}, c};
  // Nonempty subsets are stored as mask - 1.
  const Elem full = static_cast<Elem>((1u << n) - 1);
  w.fhat.comps = {nonempty ? full - 1 : full};
  for (std::size_t i = 0; i < m; ++i) {
    const Elem A = nonempty ? f.comps[i] + 1 : f.comps[i];
    std::size_t first = 0;
    while (!((A >> first) & 1u) && first < n) ++first;
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t target;
      if ((A >> j) & 1u) target = j;
      else target = nonempty ? first : n;  // n is the constant for the empty set
      w.u.table[j * m + i] = target;
    }
  }
  return w;
}

// Multiplicities in base K+1 with digit y at (K+1)^y.
UniformityWitness multiset_witness(const Theory& th, const Morphism& f) {
  const std::size_t n = f.dom, m = f.cod, base = th.carrier_size(1);
  const std::size_t K = base - 1, k = K * n;
  UniformityWitness w{f, Morphism{k, 1, {}}, FinMap{k * m, n + 1, std::vector<std::size_t>(k * m)}, 1};
  Elem all = 0;
  for (std::size_t j = 0; j < k; ++j) all = static_cast<Elem>(all + ipow(base, j));
  w.fhat.comps = {all};
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t r = 0; r < K; ++r)
      for (std::size_t y = 0; y < n; ++y) {
        const std::size_t mult = (f.comps[i] / ipow(base, y)) % base;
        w.u.table[(r * n + y) * m + i] = r < mult ? y : n;
      }
  return w;
}

// T(n) tables t(c) over c : n -> R, encoded sum t(c) r^c with c = sum c(x) r^x.
UniformityWitness continuation_witness(const Theory& th, const Morphism& f) {
  const std::size_t n = f.dom, m = f.cod, r = th.carrier_size(0);
  std::size_t J = 0;
  while (ipow(r, J) < m) ++J;
  const std::size_t k = n + J;
  std::size_t fhat = 0;
  const std::size_t inputs = ipow(r, k);
  for (std::size_t cc = inputs; cc-- > 0;) {
    const std::size_t kk = cc % ipow(r, n);
    std::size_t idx = cc / ipow(r, n);
    if (idx >= m) idx = 0;
    const std::size_t val = m == 0 ? 0 : (f.comps[idx] / ipow(r, kk)) % r;
    fhat = fhat * r + val;
  }
  if (th.carrier_size(k) <= fhat) throw CapacityExceeded("continuation witness beyond carrier");
  UniformityWitness w{f, Morphism{k, 1, {static_cast<Elem>(fhat)}},
                      FinMap{k * m, n + r, std::vector<std::size_t>(k * m)}, r};
  for (std::size_t x = 0; x < k; ++x)
    for (std::size_t i = 0; i < m; ++i)
      w.u.table[x * m + i] = x < n ? x : n + (i / ipow(r, x - n)) % r;
  return w;
}

}  // namespace

UniformityWitness build_uniform_witness(const Theory& th, const Morphism& f) {
  const std::string fam = th.family();
  if (fam == "P") return powerset_witness(th, f, false);
  if (fam == "Pstar") return powerset_witness(th, f, true);
  if (fam == "mset") return multiset_witness(th, f);
  if (fam == "cont") return continuation_witness(th, f);
  throw UnsupportedTheory("no uniformity recipe for " + th.spec());
}

UniformityWitness compress_witness(const Theory& th, const UniformityWitness& w) {
  const std::size_t k = w.fhat.dom, m = w.f.cod;
  std::map<std::vector<std::size_t>, std::size_t> cols;
  std::vector<std::size_t> rename(k);
  std::vector<std::vector<std::size_t>> order;
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<std::size_t> col(w.u.table.begin() + j * m, w.u.table.begin() + (j + 1) * m);
    auto [it, fresh] = cols.emplace(col, order.size());
    if (fresh) order.push_back(col);
    rename[j] = it->second;
  }
  const std::size_t k2 = order.size();
  UniformityWitness out{w.f, Morphism{k2, 1, {}}, FinMap{k2 * m, w.u.cod, {}}, w.c};
  std::vector<Elem> sigma(k);
  for (std::size_t j = 0; j < k; ++j) sigma[j] = th.unit(k2, rename[j]);
  out.fhat.comps = {th.subst(w.fhat.comps[0], k, sigma, k2)};
  for (const auto& col : order) out.u.table.insert(out.u.table.end(), col.begin(), col.end());
  return out;
}

UniformityCheck verify_uniform_witness(const Theory& th, const Morphism& f) {
  UniformityCheck res;
  res.witness = compress_witness(th, build_uniform_witness(th, f));
  const auto& w = res.witness;
  res.equation = w.u.valid() && uniform_instance(th, w) == f;
  const std::size_t bound = ipow(f.dom + w.c, f.cod);
  res.k_bound = w.fhat.dom <= bound;
  return res;
}

}  // namespace lawvere
