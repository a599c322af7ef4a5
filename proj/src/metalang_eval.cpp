#include <algorithm>

#include "lawvere/metalang.hpp"

namespace lawvere::ml {

std::size_t type_size(const Type& t, const Theory& th) {
  switch (t.kind) {
    case Type::Kind::Unit: return 1;
    case Type::Kind::Base: return t.size;
    case Type::Kind::Sum: return type_size(*t.a, th) + type_size(*t.b, th);
    case Type::Kind::Prod: return type_size(*t.a, th) * type_size(*t.b, th);
    case Type::Kind::Monad: return th.carrier_size(type_size(*t.a, th));
  }
  return 0;
}

namespace {

using K = Term::Kind;

[[noreturn]] void type_fail(const Term& t, const std::string& rule, const std::string& msg) {
  throw TypeError(std::to_string(t.line) + ":" + std::to_string(t.col) + ": rule " + rule + ": " + msg);
}

void need_join(const Term& t, const Theory& th, const std::string& what) {
  if (!th.has_join()) throw MonadNotAdditive(th.spec() + " has no join; " + what + " needs one");
  (void)t;
}

void need_bottom(const Theory& th, const std::string& what) {
  if (!th.bounded()) throw MonadNotAdditive(th.spec() + " has no unique constant; " + what + " needs one");
}

bool check_only(const Term& t) {
  return t.kind == K::Num || t.kind == K::Bot || t.kind == K::SetLit || t.kind == K::Inl || t.kind == K::Inr;
}

TypePtr lookup(const VarCtx& vars, const std::string& name) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it)
    if (it->first == name) return it->second;
  return nullptr;
}

VarCtx extend(const VarCtx& vars, const std::string& name, TypePtr t) {
  VarCtx out = vars;
  out.emplace_back(name, std::move(t));
  return out;
}

const Type& expect_monad(const Term& at, const TypePtr& t, const std::string& rule) {
  if (t->kind != Type::Kind::Monad) type_fail(at, rule, "expected a computation type, got " + show(*t));
  return *t;
}

// Synthesizes one side, checks the other against it.
TypePtr synth_pair(const TermPtr& a, const TermPtr& b, const VarCtx& vars, const FunCtx& funs,
                   const Theory& th) {
  if (check_only(*a) && !check_only(*b)) {
    TypePtr t = typecheck(b, vars, funs, th);
    check(a, t, vars, funs, th);
    return t;
  }
  TypePtr t = typecheck(a, vars, funs, th);
  check(b, t, vars, funs, th);
  return t;
}

}  // namespace

TypePtr typecheck(const TermPtr& tp, const VarCtx& vars, const FunCtx& funs, const Theory& th) {
  Term& t = *tp;
  TypePtr out;
  switch (t.kind) {
    case K::Var:
      out = lookup(vars, t.name);
      if (!out) type_fail(t, "var", "unbound variable '" + t.name + "'");
      break;
    case K::Num: type_fail(t, "numeral", "needs an expected type; annotate with (e : A)");
    case K::Bot: type_fail(t, "bot", "needs an expected type; annotate with (bot : T A)");
    case K::SetLit: type_fail(t, "set", "needs an expected type; annotate with ({...} : T A)");
    case K::Inl:
    case K::Inr: type_fail(t, "inj", "needs an expected sum type; annotate");
    case K::Star: out = unit_type(); break;
    case K::Pair: {
      TypePtr a = typecheck(t.kids[0], vars, funs, th);
      out = prod_type(a, typecheck(t.kids[1], vars, funs, th));
      break;
    }
    case K::Fst:
    case K::Snd: {
      TypePtr p = typecheck(t.kids[0], vars, funs, th);
      if (p->kind != Type::Kind::Prod) type_fail(t, "proj", "expected a product, got " + show(*p));
      out = t.kind == K::Fst ? p->a : p->b;
      break;
    }
    case K::Case: {
      TypePtr s = typecheck(t.kids[0], vars, funs, th);
      if (s->kind != Type::Kind::Sum) type_fail(t, "case", "expected a sum, got " + show(*s));
      VarCtx l = extend(vars, t.name, s->a), r = extend(vars, t.name2, s->b);
      if (check_only(*t.kids[1]) && !check_only(*t.kids[2])) {
        out = typecheck(t.kids[2], r, funs, th);
        check(t.kids[1], out, l, funs, th);
      } else {
        out = typecheck(t.kids[1], l, funs, th);
        check(t.kids[2], out, r, funs, th);
      }
      break;
    }
    case K::Ret: out = monad_type(typecheck(t.kids[0], vars, funs, th)); break;
    case K::Bind: {
      TypePtr p = typecheck(t.kids[0], vars, funs, th);
      const Type& m = expect_monad(t, p, "bind");
      out = typecheck(t.kids[1], extend(vars, t.name, m.a), funs, th);
      expect_monad(t, out, "bind");
      break;
    }
    case K::Choice:
      need_join(t, th, "+");
      out = synth_pair(t.kids[0], t.kids[1], vars, funs, th);
      expect_monad(t, out, "choice");
      break;
    case K::Test:
      need_bottom(th, "test");
      check(t.kids[0], bool_type(), vars, funs, th);
      out = monad_type(unit_type());
      break;
    case K::Iter: {
      need_join(t, th, "iter");
      TypePtr p = typecheck(t.kids[0], vars, funs, th);
      const Type& m = expect_monad(t, p, "iter");
      check(t.kids[1], p, extend(vars, t.name, m.a), funs, th);
      out = p;
      break;
    }
    case K::If:
      check(t.kids[0], bool_type(), vars, funs, th);
      out = synth_pair(t.kids[1], t.kids[2], vars, funs, th);
      break;
    case K::Apply: {
      auto it = funs.find(t.name);
      if (it == funs.end()) type_fail(t, "apply", "unknown function '" + t.name + "'");
      check(t.kids[0], it->second.dom, vars, funs, th);
      out = it->second.cod;
      break;
    }
    case K::Annot:
      check(t.kids[0], t.annot, vars, funs, th);
      out = t.annot;
      break;
  }
  t.type = out;
  return out;
}

void check(const TermPtr& tp, const TypePtr& expected, const VarCtx& vars, const FunCtx& funs,
           const Theory& th) {
  Term& t = *tp;
  using TK = Type::Kind;
  switch (t.kind) {
    case K::Num:
      if (t.num >= type_size(*expected, th))
        type_fail(t, "numeral", std::to_string(t.num) + " is outside " + show(*expected));
      break;
    case K::Inl:
    case K::Inr:
      if (expected->kind != TK::Sum) type_fail(t, "inj", "expected " + show(*expected) + ", got an injection");
      check(t.kids[0], t.kind == K::Inl ? expected->a : expected->b, vars, funs, th);
      break;
    case K::Bot:
      need_bottom(th, "bot");
      expect_monad(t, expected, "bot");
      break;
    case K::SetLit:
      expect_monad(t, expected, "set");
      if (t.kids.size() != 1) need_join(t, th, "a set literal");
      if (t.kids.empty()) need_bottom(th, "the empty set literal");
      for (const auto& k : t.kids) check(k, expected->a, vars, funs, th);
      break;
    case K::Pair:
      if (expected->kind != TK::Prod) type_fail(t, "pair", "expected " + show(*expected) + ", got a pair");
      check(t.kids[0], expected->a, vars, funs, th);
      check(t.kids[1], expected->b, vars, funs, th);
      break;
    case K::Ret:
      expect_monad(t, expected, "ret");
      check(t.kids[0], expected->a, vars, funs, th);
      break;
    case K::Choice:
      need_join(t, th, "+");
      expect_monad(t, expected, "choice");
      check(t.kids[0], expected, vars, funs, th);
      check(t.kids[1], expected, vars, funs, th);
      break;
    case K::Bind: {
      expect_monad(t, expected, "bind");
      TypePtr p = typecheck(t.kids[0], vars, funs, th);
      const Type& m = expect_monad(t, p, "bind");
      check(t.kids[1], expected, extend(vars, t.name, m.a), funs, th);
      break;
    }
    case K::Case: {
      TypePtr s = typecheck(t.kids[0], vars, funs, th);
      if (s->kind != TK::Sum) type_fail(t, "case", "expected a sum, got " + show(*s));
      check(t.kids[1], expected, extend(vars, t.name, s->a), funs, th);
      check(t.kids[2], expected, extend(vars, t.name2, s->b), funs, th);
      break;
    }
    case K::If:
      check(t.kids[0], bool_type(), vars, funs, th);
      check(t.kids[1], expected, vars, funs, th);
      check(t.kids[2], expected, vars, funs, th);
      break;
    case K::Iter:
      need_join(t, th, "iter");
      expect_monad(t, expected, "iter");
      check(t.kids[0], expected, vars, funs, th);
      check(t.kids[1], expected, extend(vars, t.name, expected->a), funs, th);
      break;
    default: {
      TypePtr got = typecheck(tp, vars, funs, th);
      if (!type_eq(*got, *expected))
        type_fail(t, "check", "expected " + show(*expected) + ", got " + show(*got));
      break;
    }
  }
  t.type = expected;
}

FunCtx Evaluator::signatures() const {
  FunCtx out;
  for (const auto& [name, f] : funs_) out[name] = FunSig{f.dom, f.cod};
  return out;
}

Value Evaluator::eval(const Term& t) const {
  Env env;
  return eval(t, env);
}

Value Evaluator::eval(const Term& t, Env& env) const {
  auto size = [&](const TypePtr& ty) { return type_size(*ty, th_); };
  auto elem = [](Value v) { return static_cast<Elem>(v); };
  switch (t.kind) {
    case K::Var:
      for (auto it = env.rbegin(); it != env.rend(); ++it)
        if (it->first == t.name) return it->second;
      throw std::logic_error("unbound variable at evaluation: " + t.name);
    case K::Num: return t.num;
    case K::Star: return 0;
    case K::Pair: return eval(*t.kids[0], env) * size(t.type->b) + eval(*t.kids[1], env);
    case K::Fst: return eval(*t.kids[0], env) / size(t.kids[0]->type->b);
    case K::Snd: return eval(*t.kids[0], env) % size(t.kids[0]->type->b);
    case K::Inl: return eval(*t.kids[0], env);
    case K::Inr: return size(t.type->a) + eval(*t.kids[0], env);
    case K::Case: {
      const Value v = eval(*t.kids[0], env);
      const std::size_t left = size(t.kids[0]->type->a);
      if (v < left) env.emplace_back(t.name, v);
      else env.emplace_back(t.name2, v - left);
      const Value r = eval(*t.kids[v < left ? 1 : 2], env);
      env.pop_back();
      return r;
    }
    case K::Ret: return th_.unit(size(t.type->a), elem(eval(*t.kids[0], env)));
    case K::Bind: {
      const Value p = eval(*t.kids[0], env);
      const std::size_t na = size(t.kids[0]->type->a), nb = size(t.type->a);
      std::vector<Elem> sigma(na);
      for (std::size_t a = 0; a < na; ++a) {
        env.emplace_back(t.name, a);
        sigma[a] = elem(eval(*t.kids[1], env));
        env.pop_back();
      }
      return th_.subst(elem(p), na, sigma, nb);
    }
    case K::Bot: return th_.bottom(size(t.type->a));
    case K::Choice:
      return th_.join(elem(eval(*t.kids[0], env)), elem(eval(*t.kids[1], env)), size(t.type->a));
    case K::Test: return eval(*t.kids[0], env) == 1 ? th_.unit(1, 0) : th_.bottom(1);
    case K::Iter: {
      // Least fixed point of s |-> p + (do x <- s; q) by ascent from bottom.
      const std::size_t n = size(t.type->a);
      const Elem p = elem(eval(*t.kids[0], env));
      std::vector<Elem> sigma(n);
      for (std::size_t a = 0; a < n; ++a) {
        env.emplace_back(t.name, a);
        sigma[a] = elem(eval(*t.kids[1], env));
        env.pop_back();
      }
      Elem s = th_.bottom(n);
      const std::size_t limit = th_.carrier_size(n) + 1;
      for (std::size_t step = 0;; ++step) {
        if (step > limit) throw std::runtime_error("iteration did not stabilise");
        const Elem next = th_.join(p, th_.subst(s, n, sigma, n), n);
        if (next == s) return s;
        s = next;
      }
    }
    case K::If: return eval(*t.kids[eval(*t.kids[0], env) == 1 ? 1 : 2], env);
    case K::Apply: {
      const FunTable& f = funs_.at(t.name);
      return f.table.at(eval(*t.kids[0], env));
    }
    case K::Annot: return eval(*t.kids[0], env);
    case K::SetLit: {
      const std::size_t n = size(t.type->a);
      if (t.kids.empty()) return th_.bottom(n);
      Elem acc = th_.unit(n, elem(eval(*t.kids[0], env)));
      for (std::size_t i = 1; i < t.kids.size(); ++i)
        acc = th_.join(acc, th_.unit(n, elem(eval(*t.kids[i], env))), n);
      return acc;
    }
  }
  return 0;
}

bool leq(const Theory& th, Value p, Value q, std::size_t n) {
  return th.join(static_cast<Elem>(p), static_cast<Elem>(q), n) == q;
}

std::string show_value(const Type& t, Value v, const Theory& th) {
  switch (t.kind) {
    case Type::Kind::Unit: return "*";
    case Type::Kind::Base: return std::to_string(v);
    case Type::Kind::Sum: {
      const std::size_t left = type_size(*t.a, th);
      return v < left ? "inl " + show_value(*t.a, v, th) : "inr " + show_value(*t.b, v - left, th);
    }
    case Type::Kind::Prod: {
      const std::size_t nb = type_size(*t.b, th);
      return "(" + show_value(*t.a, v / nb, th) + ", " + show_value(*t.b, v % nb, th) + ")";
    }
    case Type::Kind::Monad: return th.show(static_cast<Elem>(v), type_size(*t.a, th));
  }
  return "?";
}

RunResult run_program(const Program& p, const Theory& th) {
  Evaluator ev(th);
  FunCtx sigs;
  for (const auto& f : p.funs) sigs[f.name] = FunSig{f.dom, f.cod};
  for (const auto& f : p.funs) {
    const std::size_t n = type_size(*f.dom, th);
    std::vector<std::optional<Value>> table(n);
    for (const auto& [k, v] : f.entries) {
      check(k, f.dom, {}, {}, th);
      check(v, f.cod, {}, {}, th);
      const Value key = ev.eval(*k);
      if (table[key]) throw TypeError("function " + f.name + ": argument " + show(*k) + " listed twice");
      table[key] = ev.eval(*v);
    }
    FunTable ft{f.dom, f.cod, {}};
    for (std::size_t i = 0; i < n; ++i) {
      if (!table[i]) {
        if (f.cod->kind != Type::Kind::Monad || !th.bounded())
          throw TypeError("function " + f.name + ": no entry for " + show_value(*f.dom, i, th));
        table[i] = th.bottom(type_size(*f.cod->a, th));
      }
      ft.table.push_back(*table[i]);
    }
    ev.set_function(f.name, std::move(ft));
  }
  RunResult r;
  r.type = typecheck(p.main, {}, sigs, th);
  r.value = ev.eval(*p.main);
  r.shown = show_value(*r.type, r.value, th);
  return r;
}

namespace {

class BrokenJoin final : public Theory {
 public:
  explicit BrokenJoin(TheoryPtr base) : base_(std::move(base)) {}
  std::string spec() const override { return "broken-join:" + base_->spec(); }
  std::string family() const override { return base_->family(); }
  bool bounded() const override { return base_->bounded(); }
  bool has_join() const override { return true; }
  std::size_t carrier_size(std::size_t n) const override { return base_->carrier_size(n); }
  Elem unit(std::size_t n, std::size_t i) const override { return base_->unit(n, i); }
  Elem try_subst(Elem t, std::size_t n, std::span<const Elem> s, std::size_t k) const override {
    return base_->try_subst(t, n, s, k);
  }
  Elem join(Elem a, Elem, std::size_t) const override { return a; }
  std::string show(Elem t, std::size_t n) const override { return base_->show(t, n); }

 private:
  TheoryPtr base_;
};

}  // namespace

TheoryPtr broken_join(TheoryPtr th) { return std::make_shared<BrokenJoin>(std::move(th)); }

}  // namespace lawvere::ml
