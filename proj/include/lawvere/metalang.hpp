#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "lawvere/theories.hpp"

namespace lawvere::ml {

struct SyntaxError : std::runtime_error {
  SyntaxError(const std::string& msg, std::size_t line, std::size_t col);
  std::size_t line, col;
};
struct TypeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MonadNotAdditive : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct Type {
  enum class Kind { Unit, Base, Sum, Prod, Monad };
  Kind kind = Kind::Unit;
  std::string name;      // Base
  std::size_t size = 0;  // Base
  TypePtr a, b;          // Sum, Prod: a and b; Monad: a
};

TypePtr unit_type();
TypePtr base_type(std::string name, std::size_t size);
TypePtr sum_type(TypePtr a, TypePtr b);
TypePtr prod_type(TypePtr a, TypePtr b);
TypePtr monad_type(TypePtr a);
TypePtr bool_type();  // 1+1 with inl * false and inr * true
bool type_eq(const Type& x, const Type& y);
std::string show(const Type& t);
// T A denotes T(|A|) of the theory.
std::size_t type_size(const Type& t, const Theory& th);

using Value = std::uint64_t;

struct Term;
using TermPtr = std::shared_ptr<Term>;

struct Term {
  enum class Kind {
    Var, Num, Star, Pair, Fst, Snd, Inl, Inr, Case, Ret, Bind, Bot, Choice,
    Test, Iter, If, Apply, Annot, SetLit
  };
  Kind kind = Kind::Star;
  std::string name;            // Var, Apply; binder of Bind/Iter; first binder of Case
  std::string name2;           // second binder of Case
  std::uint64_t num = 0;       // Num
  std::vector<TermPtr> kids;
  TypePtr annot;               // Annot
  std::size_t line = 0, col = 0;
  TypePtr type;                // filled by the typechecker
};

std::string show(const Term& t);

struct FunDecl {
  std::string name;
  TypePtr dom, cod;
  std::vector<std::pair<TermPtr, TermPtr>> entries;  // closed literal terms
  std::size_t line = 0;
};

struct Program {
  std::map<std::string, TypePtr> types;
  std::vector<FunDecl> funs;
  TermPtr main;
};

TermPtr parse_term(const std::string& src, const std::map<std::string, TypePtr>& types = {});
TypePtr parse_type(const std::string& src, const std::map<std::string, TypePtr>& types = {});
Program parse_program(const std::string& src);
Program load_program(const std::string& path);

struct FunSig {
  TypePtr dom, cod;
};
using VarCtx = std::vector<std::pair<std::string, TypePtr>>;
using FunCtx = std::map<std::string, FunSig>;

// Bidirectional: numerals, inl/inr, bot and set literals need an expected type.
TypePtr typecheck(const TermPtr& t, const VarCtx& vars, const FunCtx& funs, const Theory& th);
void check(const TermPtr& t, const TypePtr& expected, const VarCtx& vars, const FunCtx& funs,
           const Theory& th);

struct FunTable {
  TypePtr dom, cod;
  std::vector<Value> table;
};
using Env = std::vector<std::pair<std::string, Value>>;

class Evaluator {
 public:
  explicit Evaluator(const Theory& th) : th_(th) {}
  void set_function(const std::string& name, FunTable f) { funs_[name] = std::move(f); }
  FunTable& function(const std::string& name) { return funs_.at(name); }
  FunCtx signatures() const;
  // Typechecked terms only.
  Value eval(const Term& t, Env& env) const;
  Value eval(const Term& t) const;
  const Theory& theory() const { return th_; }

 private:
  const Theory& th_;
  std::map<std::string, FunTable> funs_;
};

// p <= q iff p + q = q in T(n).
bool leq(const Theory& th, Value p, Value q, std::size_t n);

std::string show_value(const Type& t, Value v, const Theory& th);

struct RunResult {
  TypePtr type;
  Value value = 0;
  std::string shown;
};
// Typechecks function tables and the main term, then evaluates main.
RunResult run_program(const Program& p, const Theory& th);

enum class Suite { Monad, Kleene, FL };
std::string to_string(Suite s);
Suite parse_suite(const std::string& s);

// Equation or rule over metavariables. Base types are instantiated with all
// sizes 0..max_type_size, functions with all tables, variables with all values.
struct Law {
  std::string name;
  std::vector<std::string> type_params;
  std::vector<std::pair<std::string, std::string>> vars;                    // name, type
  std::vector<std::tuple<std::string, std::string, std::string>> funs;      // name, dom, cod
  std::string lhs, rhs;
  bool leq = false;  // lhs <= rhs instead of equality
  // Rule premise, required for all values of premise_vars.
  std::optional<std::pair<std::string, std::string>> premise;
  std::vector<std::pair<std::string, std::string>> premise_vars;
};

struct LawResult {
  std::string name;
  bool rule = false;
  std::uint64_t cases = 0;           // instantiations checked (premise held for rules)
  std::uint64_t premise_failed = 0;  // rule instantiations discarded
  std::uint64_t violations = 0;
  std::uint64_t truncated = 0;       // instantiations whose evaluation overflowed a capped carrier
  bool sampled = false;
  std::string witness;
};

struct LawReport {
  std::string suite, monad;
  std::size_t max_type_size = 0;
  std::vector<LawResult> laws;
  bool ok() const;
};

struct LawOptions {
  std::size_t max_type_size = 2;
  std::uint64_t budget = std::uint64_t{1} << 20;  // instantiations per law and size assignment
  std::uint64_t seed = 1;
};

std::vector<Law> suite_laws(Suite s);
LawResult check_law(const Law& law, const Theory& th, const LawOptions& opt);
LawReport run_law_suite(const Theory& th, Suite s, const LawOptions& opt);

// Least-fixed-point part of the while encoding: the star term is a fixed point
// of q |-> if b then (do x <- p; q) else ret x and lies below all fixed points.
LawResult check_fl_fixpoint(const Theory& th, const LawOptions& opt);

// Same theory with join replaced by the left projection.
TheoryPtr broken_join(TheoryPtr th);

}  // namespace lawvere::ml
