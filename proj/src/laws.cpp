#include <random>
#include <sstream>

#include "lawvere/metalang.hpp"

namespace lawvere::ml {

std::string to_string(Suite s) {
  switch (s) {
    case Suite::Monad: return "monad";
    case Suite::Kleene: return "kleene";
    case Suite::FL: return "fl";
  }
  return "?";
}

Suite parse_suite(const std::string& s) {
  if (s == "monad") return Suite::Monad;
  if (s == "kleene") return Suite::Kleene;
  if (s == "fl") return Suite::FL;
  throw std::invalid_argument("unknown suite '" + s + "' (monad, kleene, fl)");
}

bool LawReport::ok() const {
  for (const auto& l : laws)
    if (l.violations > 0) return false;
  return true;
}

namespace {

Law eq(std::string name, std::vector<std::string> types,
       std::vector<std::tuple<std::string, std::string, std::string>> funs, std::string lhs,
       std::string rhs, std::vector<std::pair<std::string, std::string>> vars = {}) {
  Law l;
  l.name = std::move(name);
  l.type_params = std::move(types);
  l.funs = std::move(funs);
  l.lhs = std::move(lhs);
  l.rhs = std::move(rhs);
  l.vars = std::move(vars);
  return l;
}

const char* kNot = "(case b of inl u -> inr * | inr u -> inl *)";

}  // namespace

std::vector<Law> suite_laws(Suite s) {
  std::vector<Law> out;
  if (s == Suite::Monad) {
    out.push_back(eq("left_unit", {"A", "B"}, {{"q", "A", "T B"}}, "do x <- ret a; q(x)", "q(a)", {{"a", "A"}}));
    out.push_back(eq("right_unit", {"A"}, {{"p", "1", "T A"}}, "do x <- p(*); ret x", "p(*)"));
    out.push_back(eq("bind_assoc", {"A", "B", "C"}, {{"p", "1", "T A"}, {"q", "A", "T B"}, {"r", "B", "T C"}},
                     "do y <- (do x <- p(*); q(x)); r(y)", "do x <- p(*); do y <- q(x); r(y)"));
  } else if (s == Suite::Kleene) {
    const std::tuple<std::string, std::string, std::string> p{"p", "1", "T A"}, q{"q", "1", "T A"},
        r{"r", "1", "T A"};
    out.push_back(eq("plus_bot", {"A"}, {p}, "p(*) + bot", "p(*)"));
    out.push_back(eq("comm", {"A"}, {p, q}, "p(*) + q(*)", "q(*) + p(*)"));
    out.push_back(eq("idem", {"A"}, {p}, "p(*) + p(*)", "p(*)"));
    out.push_back(eq("assoc", {"A"}, {p, q, r}, "p(*) + (q(*) + r(*))", "(p(*) + q(*)) + r(*)"));
    out.push_back(eq("bind_bot1", {"A", "B"}, {p}, "do x <- p(*); (bot : T B)", "(bot : T B)"));
    out.push_back(eq("bind_bot2", {"A", "B"}, {{"q", "A", "T B"}}, "do x <- (bot : T A); q(x)", "(bot : T B)"));
    out.push_back(eq("distr1", {"A", "B"}, {p, {"q", "A", "T B"}, {"r", "A", "T B"}},
                     "do x <- p(*); (q(x) + r(x))", "(do x <- p(*); q(x)) + (do x <- p(*); r(x))"));
    out.push_back(eq("distr2", {"A", "B"}, {p, q, {"r", "A", "T B"}}, "do x <- (p(*) + q(*)); r(x)",
                     "(do x <- p(*); r(x)) + (do x <- q(*); r(x))"));
    const std::tuple<std::string, std::string, std::string> step{"q", "A", "T A"};
    out.push_back(eq("unf1", {"A"}, {p, step}, "iter x <- p(*) { q(x) }",
                     "p(*) + (do x <- (iter x <- p(*) { q(x) }); q(x))"));
    out.push_back(eq("unf2", {"A"}, {p, step}, "iter x <- p(*) { q(x) }",
                     "p(*) + (iter x <- (do x <- p(*); q(x)) { q(x) })"));
    out.push_back(eq("init", {"A", "B"}, {{"p", "1", "T B"}, {"q", "B", "T A"}, {"r", "A", "T A"}},
                     "iter x <- (do y <- p(*); q(y)) { r(x) }", "do y <- p(*); iter x <- q(y) { r(x) }"));
    Law ind1 = eq("ind1", {"A"}, {p, step}, "iter x <- p(*) { q(x) }", "p(*)");
    ind1.leq = true;
    ind1.premise = {"do x <- p(*); q(x)", "p(*)"};
    out.push_back(ind1);
    Law ind2 = eq("ind2", {"A", "B"}, {p, step, {"r", "A", "T B"}}, "do x <- (iter x <- p(*) { q(x) }); r(x)",
                  "do x <- p(*); r(x)");
    ind2.leq = true;
    ind2.premise = {"do x <- q(x); r(x)", "r(x)"};
    ind2.premise_vars = {{"x", "A"}};
    out.push_back(ind2);
  } else {
    out.push_back(eq("fl_if", {"A"}, {{"p", "1", "T A"}, {"q", "1", "T A"}}, "if b then p(*) else q(*)",
                     std::string("(do test(b); p(*)) + (do test(") + kNot + "); q(*))", {{"b", "2"}}));
  }
  return out;
}

namespace {

struct Domain {
  std::string name;
  bool is_fun = false;
  std::size_t radix = 1;    // values per slot
  std::size_t slots = 1;    // 1 for a variable, |dom| for a function
  TypePtr dom, cod;
};

struct Compiled {
  std::map<std::string, TypePtr> types;
  VarCtx vars, premise_vars;
  FunCtx funs;
  TermPtr lhs, rhs, plhs, prhs;
  TypePtr result, presult;
};

TypePtr check_sides(const TermPtr& a, const TermPtr& b, const VarCtx& vars, const FunCtx& funs,
                    const Theory& th) {
  try {
    TypePtr t = typecheck(a, vars, funs, th);
    check(b, t, vars, funs, th);
    return t;
  } catch (const TypeError&) {
    TypePtr t = typecheck(b, vars, funs, th);
    check(a, t, vars, funs, th);
    return t;
  }
}

Compiled compile(const Law& law, const std::vector<std::size_t>& sizes, const Theory& th) {
  Compiled c;
  for (std::size_t i = 0; i < law.type_params.size(); ++i)
    c.types[law.type_params[i]] = base_type(law.type_params[i], sizes[i]);
  for (const auto& [n, t] : law.vars) c.vars.emplace_back(n, parse_type(t, c.types));
  for (const auto& [n, d, r] : law.funs) c.funs[n] = FunSig{parse_type(d, c.types), parse_type(r, c.types)};
  c.lhs = parse_term(law.lhs, c.types);
  c.rhs = parse_term(law.rhs, c.types);
  c.result = check_sides(c.lhs, c.rhs, c.vars, c.funs, th);
  if (law.premise) {
    c.premise_vars = c.vars;
    for (const auto& [n, t] : law.premise_vars) c.premise_vars.emplace_back(n, parse_type(t, c.types));
    c.plhs = parse_term(law.premise->first, c.types);
    c.prhs = parse_term(law.premise->second, c.types);
    c.presult = check_sides(c.plhs, c.prhs, c.premise_vars, c.funs, th);
  }
  return c;
}

// Mixed-radix decoding of one instantiation index into all slots.
std::vector<std::size_t> decode(std::uint64_t idx, const std::vector<Domain>& doms) {
  std::vector<std::size_t> out;
  for (const auto& d : doms)
    for (std::size_t s = 0; s < d.slots; ++s) {
      out.push_back(static_cast<std::size_t>(idx % d.radix));
      idx /= d.radix;
    }
  return out;
}

bool relation(const Theory& th, bool is_leq, Value a, Value b, const Type& t) {
  if (!is_leq) return a == b;
  return leq(th, a, b, type_size(*t.a, th));
}

// Calls f(env) for every assignment of the given variables after the fixed prefix.
template <class F>
bool for_all_envs(const VarCtx& vars, std::size_t from, Env& env, const Theory& th, F&& f) {
  if (from == vars.size()) return f(env);
  const std::size_t n = type_size(*vars[from].second, th);
  for (Value v = 0; v < n; ++v) {
    env.emplace_back(vars[from].first, v);
    const bool ok = for_all_envs(vars, from + 1, env, th, f);
    env.pop_back();
    if (!ok) return false;
  }
  return true;
}

}  // namespace

LawResult check_law(const Law& law, const Theory& th, const LawOptions& opt) {
  LawResult res;
  res.name = law.name;
  res.rule = law.premise.has_value();
  std::mt19937_64 rng(opt.seed);
  const std::size_t P = law.type_params.size();
  std::vector<std::size_t> sizes(P, 0);
  for (;;) {
    Compiled c = compile(law, sizes, th);
    std::vector<Domain> doms;
    std::uint64_t total = 1;
    bool overflow = false;
    for (const auto& [n, d, r] : law.funs) {
      Domain dm{n, true, type_size(*c.funs[n].cod, th), type_size(*c.funs[n].dom, th), c.funs[n].dom,
                c.funs[n].cod};
      for (std::size_t s = 0; s < dm.slots; ++s) {
        if (dm.radix != 0 && total > (std::uint64_t{1} << 62) / dm.radix) overflow = true;
        total *= dm.radix;
      }
      doms.push_back(dm);
    }
    Evaluator ev(th);
    auto describe = [&](const std::vector<std::size_t>& slots, const Env& env, Value l, Value r) {
      std::ostringstream os;
      os << "sizes";
      for (std::size_t i = 0; i < P; ++i) os << " " << law.type_params[i] << "=" << sizes[i];
      std::size_t k = 0;
      for (const auto& d : doms) {
        os << "; " << d.name << " = {";
        for (std::size_t s = 0; s < d.slots; ++s, ++k)
          os << (s ? ", " : "") << show_value(*d.dom, s, th) << " -> " << show_value(*d.cod, slots[k], th);
        os << "}";
      }
      for (const auto& [n, v] : env) os << "; " << n << " = " << v;
      os << "; lhs = " << show_value(*c.result, l, th) << ", rhs = " << show_value(*c.result, r, th);
      return os.str();
    };
    auto run_one_raw = [&](std::uint64_t idx) {
      auto slots = decode(idx, doms);
      std::size_t k = 0;
      for (const auto& d : doms) {
        FunTable ft{d.dom, d.cod, {}};
        for (std::size_t s = 0; s < d.slots; ++s) ft.table.push_back(slots[k++]);
        ev.set_function(d.name, std::move(ft));
      }
      Env env;
      if (law.premise) {
        const bool holds = for_all_envs(c.premise_vars, 0, env, th, [&](Env& e) {
          return relation(th, true, ev.eval(*c.plhs, e), ev.eval(*c.prhs, e), *c.presult);
        });
        if (!holds) {
          ++res.premise_failed;
          return;
        }
      }
      for_all_envs(c.vars, 0, env, th, [&](Env& e) {
        const Value l = ev.eval(*c.lhs, e), r = ev.eval(*c.rhs, e);
        ++res.cases;
        if (!relation(th, law.leq, l, r, *c.result)) {
          if (res.violations == 0) res.witness = describe(slots, e, l, r);
          ++res.violations;
        }
        return true;
      });
    };
    auto run_one = [&](std::uint64_t idx) {
      try {
        run_one_raw(idx);
      } catch (const CapacityExceeded&) {
        ++res.truncated;
      }
    };
    if (overflow) throw CapacityExceeded("law " + law.name + ": instantiation space too large");
    if (total > 0 && total <= opt.budget) {
      for (std::uint64_t i = 0; i < total; ++i) run_one(i);
    } else if (total > 0) {
      res.sampled = true;
      std::uniform_int_distribution<std::uint64_t> d(0, total - 1);
      for (std::uint64_t i = 0; i < opt.budget; ++i) run_one(d(rng));
    }
    std::size_t p = 0;
    while (p < P && ++sizes[p] > opt.max_type_size) sizes[p++] = 0;
    if (p == P) break;
  }
  return res;
}

LawResult check_fl_fixpoint(const Theory& th, const LawOptions& opt) {
  LawResult res;
  res.name = "fl_while_lfp";
  const std::string star =
      "do x <- (iter x <- ret x { do test(b(x)); p(x) }); "
      "do test(case b(x) of inl u -> inr * | inr u -> inl *); ret x";
  const std::string body = "if b(x) then (do x <- p(x); g(x)) else ret x";
  for (std::size_t na = 0; na <= opt.max_type_size; ++na) {
    std::map<std::string, TypePtr> types{{"A", base_type("A", na)}};
    TypePtr A = types["A"], TA = monad_type(A), B = bool_type();
    FunCtx funs{{"b", {A, B}}, {"p", {A, TA}}, {"g", {A, TA}}};
    VarCtx vars{{"x", A}};
    TermPtr s_term = parse_term(star, types), f_term = parse_term(body, types);
    check(s_term, TA, vars, funs, th);
    check(f_term, TA, vars, funs, th);
    const std::size_t ct = th.carrier_size(na);
    const std::uint64_t bt = checked_pow(2, na, kHomCeiling), pt = checked_pow(ct, na, kHomCeiling);
    if (bt * pt * pt > opt.budget) {
      res.sampled = true;
      continue;
    }
    auto table = [&](std::uint64_t idx, std::size_t radix) {
      std::vector<Value> t(na);
      for (std::size_t i = 0; i < na; ++i, idx /= radix) t[i] = idx % radix;
      return t;
    };
    Evaluator ev(th);
    for (std::uint64_t bi = 0; bi < bt; ++bi)
      for (std::uint64_t pi = 0; pi < pt; ++pi) {
        ev.set_function("b", FunTable{A, B, table(bi, 2)});
        ev.set_function("p", FunTable{A, TA, table(pi, ct)});
        std::vector<Value> S(na);
        for (std::size_t x = 0; x < na; ++x) {
          Env env{{"x", x}};
          S[x] = ev.eval(*s_term, env);
        }
        auto apply_F = [&](const std::vector<Value>& G) {
          ev.set_function("g", FunTable{A, TA, G});
          std::vector<Value> out(na);
          for (std::size_t x = 0; x < na; ++x) {
            Env env{{"x", x}};
            out[x] = ev.eval(*f_term, env);
          }
          return out;
        };
        auto describe = [&](const std::string& what) {
          std::ostringstream os;
          os << what << "; |A|=" << na << "; b =";
          for (auto v : table(bi, 2)) os << " " << v;
          os << "; p =";
          for (auto v : table(pi, ct)) os << " " << th.show(static_cast<Elem>(v), na);
          return os.str();
        };
        ++res.cases;
        if (apply_F(S) != S) {
          if (res.violations++ == 0) res.witness = describe("star term is not a fixed point");
          continue;
        }
        for (std::uint64_t gi = 0; gi < pt; ++gi) {
          auto G = table(gi, ct);
          if (apply_F(G) != G) continue;
          bool below = true;
          for (std::size_t x = 0; x < na; ++x) below = below && leq(th, S[x], G[x], na);
          if (!below) {
            if (res.violations++ == 0) res.witness = describe("star term above a fixed point");
            break;
          }
        }
      }
  }
  return res;
}

LawReport run_law_suite(const Theory& th, Suite s, const LawOptions& opt) {
  LawReport rep;
  rep.suite = to_string(s);
  rep.monad = th.spec();
  rep.max_type_size = opt.max_type_size;
  for (const auto& law : suite_laws(s)) rep.laws.push_back(check_law(law, th, opt));
  if (s == Suite::FL) rep.laws.push_back(check_fl_fixpoint(th, opt));
  return rep;
}

}  // namespace lawvere::ml
