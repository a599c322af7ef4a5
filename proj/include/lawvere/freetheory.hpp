#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include "lawvere/theories.hpp"

namespace lawvere {

struct Operation {
  std::string name;
  std::size_t arity = 0;
  bool operator==(const Operation&) const = default;
};

struct Signature {
  std::vector<Operation> ops;
  bool with_bottom = true;

  // Throws InvalidSpec on duplicate names, or on a constant alongside bottom.
  void validate() const;
  std::size_t index_of(const std::string& name) const;
};

// One `name/arity` per line, optional line `bottom`; `#` starts a comment.
Signature parse_signature(const std::string& text);
Signature load_signature(const std::string& path);

// Canonical order: bottom < variables (by index) < applications (by op, then children).
struct FreeTerm {
  enum class Kind : std::uint8_t { Bottom = 0, Var = 1, App = 2 };
  Kind kind = Kind::Bottom;
  std::uint32_t index = 0;  // variable index or operation index
  std::vector<FreeTerm> kids;

  static FreeTerm bot() { return {}; }
  static FreeTerm var(std::uint32_t i) { return {Kind::Var, i, {}}; }
  static FreeTerm app(std::uint32_t op, std::vector<FreeTerm> kids) {
    return {Kind::App, op, std::move(kids)};
  }

  bool is_bot() const { return kind == Kind::Bottom; }
  std::size_t depth() const;
  std::size_t max_var() const;  // one past the largest variable index, 0 if none

  bool operator==(const FreeTerm&) const = default;
  std::strong_ordering operator<=>(const FreeTerm& o) const;
};

std::string show(const Signature& sig, const FreeTerm& t);
// Accepts the output of show: `bot`, `x3`, `f(x0,bot)`.
FreeTerm parse_term(const Signature& sig, const std::string& text);

// Leftmost-innermost rewriting of f(bot,...,bot) -> bot for f of positive arity.
FreeTerm normalize(const FreeTerm& t);
// A single rewrite at a uniformly chosen redex; false when t is normal.
bool rewrite_random_step(FreeTerm& t, std::mt19937_64& rng);
FreeTerm graft(const FreeTerm& t, const std::vector<FreeTerm>& sigma);

enum class SynLeqMode { Occurrences, VariablesOnly };

// Occurrences: t arises from s by replacing some subterm occurrences by bot.
// VariablesOnly: t == s[bot/X] literally, for some set X of variables.
bool syn_leq(const FreeTerm& t, const FreeTerm& s, SynLeqMode mode = SynLeqMode::Occurrences);
bool free_leq(const FreeTerm& t, const FreeTerm& s, SynLeqMode mode = SynLeqMode::Occurrences);

inline constexpr std::size_t kTermCeiling = std::size_t{1} << 20;

std::vector<FreeTerm> enumerate_terms(const Signature& sig, std::size_t n, std::size_t depth,
                                      std::size_t ceiling = kTermCeiling);

// Theory adapter: T(n) = normal forms of depth <= D; substitution past D overflows.
class FreeTheory final : public Theory {
 public:
  FreeTheory(Signature sig, std::size_t depth, std::string label = "");

  std::string spec() const override;
  std::string family() const override { return "free"; }
  bool bounded() const override;
  bool has_join() const override { return false; }
  std::size_t carrier_size(std::size_t n) const override;
  Elem unit(std::size_t n, std::size_t i) const override;
  Elem try_subst(Elem t, std::size_t n, std::span<const Elem> sigma, std::size_t k) const override;
  std::string show(Elem t, std::size_t n) const override;

  const Signature& signature() const { return sig_; }
  std::size_t depth() const { return depth_; }
  const FreeTerm& term(Elem e, std::size_t n) const;
  // kNoElem when the term is not in the depth-bounded carrier.
  Elem index_of(const FreeTerm& t, std::size_t n) const;

 private:
  struct Carrier {
    std::vector<FreeTerm> terms;
    std::map<FreeTerm, Elem> index;
  };
  const Carrier& carrier(std::size_t n) const;

  Signature sig_;
  std::size_t depth_;
  std::string label_;
  mutable std::mutex mu_;
  mutable std::map<std::size_t, std::unique_ptr<Carrier>> cache_;
};

TheoryPtr make_free(Signature sig, std::size_t depth, std::string label = "");

}  // namespace lawvere
