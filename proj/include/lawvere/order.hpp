#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "lawvere/theories.hpp"

namespace lawvere {

enum class RuleMode { Literal, TwoSided };
std::string to_string(RuleMode mode);

using Bits = boost::dynamic_bitset<>;

// Approximation preorder on L(n,m), n,m <= N. The relation on L(n,m) is the
// componentwise product of the relation on L(n,1), which is what is stored.
class OrderTable {
 public:
  OrderTable(TheoryPtr th, std::size_t N, RuleMode mode,
             std::vector<std::vector<Bits>> up, std::size_t truncated);

  const Theory& theory() const { return *th_; }
  TheoryPtr theory_ptr() const { return th_; }
  std::size_t max_size() const { return N_; }
  // Largest context n whose carrier relation is stored (>= max_size).
  std::size_t max_ctx() const { return up_.size() - 1; }
  RuleMode mode() const { return mode_; }
  // Rule instances skipped because a substitution left the enumerated carrier.
  std::size_t truncated() const { return truncated_; }

  bool leq1(std::size_t n, Elem a, Elem b) const { return up_.at(n)[a].test(b); }
  const Bits& up_set(std::size_t n, Elem a) const { return up_.at(n)[a]; }
  bool leq(const Morphism& f, const Morphism& g) const;
  std::size_t carrier(std::size_t n) const { return up_.at(n).size(); }
  std::vector<std::pair<Elem, Elem>> pairs(std::size_t n) const;
  std::size_t pair_count() const;

  // Symmetric closure; negative control for antisymmetry.
  OrderTable symmetrized() const;

  bool operator==(const OrderTable& o) const { return N_ == o.N_ && up_ == o.up_; }

 private:
  TheoryPtr th_;
  std::size_t N_;
  RuleMode mode_;
  std::vector<std::vector<Bits>> up_;
  std::size_t truncated_;
};

// Rule instances factor through objects <= N; relations are kept for contexts <= max(N, max_ctx).
OrderTable compute_preorder(TheoryPtr th, std::size_t N, RuleMode mode = RuleMode::Literal,
                            std::size_t max_ctx = 0);

struct PartialOrderResult {
  bool ok = true;
  std::optional<std::pair<Morphism, Morphism>> witness;
};
PartialOrderResult is_partial_order(const OrderTable& ot);

// Minimal upper bounds of S within the enumerated L(n,m), canonically sorted.
std::vector<Morphism> minimal_upper_bounds(const OrderTable& ot, const std::vector<Morphism>& S,
                                           std::size_t n, std::size_t m);
bool is_upper_bound(const OrderTable& ot, const Morphism& u, const std::vector<Morphism>& S);
// u is an upper bound of S lying below every upper bound in L(u.dom, u.cod).
bool is_least_upper_bound(const OrderTable& ot, const Morphism& u, const std::vector<Morphism>& S);

// Delta_i : n -> n keeps x_i and sends the other variables to bottom.
Morphism delta(const Theory& th, std::size_t n, std::size_t i);

struct SimplyOrderedResult {
  bool ok = true;
  std::size_t cases = 0;
  std::optional<std::pair<std::vector<Morphism>, Morphism>> witness;  // (A, h) with no factorization
};
// Checked for A subset of L(n,1), 1 <= |A| <= max_set, n <= N, factorizations through j <= N.
SimplyOrderedResult check_simply_ordered(const OrderTable& ot, std::size_t max_set = 3);

using JoinFn = std::function<Elem(Elem, Elem, std::size_t)>;

struct AddOrderResult {
  bool ok = true;
  std::size_t checked_homsets = 0;
  std::size_t skipped_homsets = 0;
  std::optional<std::pair<Morphism, Morphism>> witness;
};
// f <= g iff join(f,g) == g on every covered hom-set with |L(n,m)|^2 <= pair_budget.
AddOrderResult check_add_order_coincidence(const OrderTable& ot, JoinFn join = nullptr,
                                           std::uint64_t pair_budget = std::uint64_t{1} << 22);

}  // namespace lawvere
