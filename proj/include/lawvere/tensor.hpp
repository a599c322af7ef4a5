#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "lawvere/order.hpp"
#include "lawvere/theories.hpp"

namespace lawvere {

enum class TensorMode { Full, Nonempty };
std::string to_string(TensorMode mode);

// Definite Horn clauses over a finite universe; close() is the least model above a seed.
class HornSystem {
 public:
  explicit HornSystem(std::size_t universe) : universe_(universe), watch_(universe) {}
  void add_rule(std::vector<std::uint32_t> premises, std::uint32_t conclusion);
  Bits close(const Bits& seed) const;
  std::size_t universe() const { return universe_; }
  std::size_t rule_count() const { return conclusions_.size(); }
  // All closed sets in lectic order; CapacityExceeded past limit.
  std::vector<Bits> closed_sets(std::size_t limit) const;

 private:
  std::size_t universe_;
  std::vector<std::vector<std::uint32_t>> premises_;
  std::vector<std::uint32_t> conclusions_;
  std::vector<std::uint32_t> axioms_;
  std::vector<std::vector<std::uint32_t>> watch_;
};

// Downclosure plus rule (Delta) on L(n,m), factorizations through k' <= factor_bound.
class ClosureSystem {
 public:
  ClosureSystem(const OrderTable& ot, std::size_t n, std::size_t m, std::size_t factor_bound);
  std::size_t dom() const { return n_; }
  std::size_t cod() const { return m_; }
  const HomSet& homset() const { return hs_; }
  const HornSystem& horn() const { return horn_; }
  std::size_t truncated() const { return truncated_; }
  Bits close(const Bits& seed) const { return horn_.close(seed); }
  Bits close(const std::vector<Morphism>& A) const;

 private:
  std::size_t n_, m_;
  HomSet hs_;
  HornSystem horn_;
  std::size_t truncated_ = 0;
};

struct ClosedSet {
  std::size_t dom = 0, cod = 0;
  std::vector<Morphism> members;  // canonically sorted
  TensorMode mode = TensorMode::Full;
  bool operator==(const ClosedSet& o) const {
    return dom == o.dom && cod == o.cod && members == o.members;
  }
};

std::vector<Morphism> members_of(const HomSet& hs, const Bits& b);
Bits bits_of(const HomSet& hs, const std::vector<Morphism>& A);

// cl(A) in L(n,m) computed directly on tuples.
ClosedSet closure(const OrderTable& ot, std::size_t n, std::size_t m, const std::vector<Morphism>& A,
                  std::optional<std::size_t> factor_bound = std::nullopt);
bool rect_equiv(const OrderTable& ot, std::size_t n, std::size_t m, const std::vector<Morphism>& A,
                const std::vector<Morphism>& B);

// Congruence closure deciding rectangular equivalence on subsets of L(n,1) from
// its generating instances: (bot) in full mode, union congruence, tupling
// congruence through unary contexts, and the rectangular-hull instances of (pi).
class RectEngine {
 public:
  RectEngine(const Theory& th, std::size_t n, std::size_t factor_bound, TensorMode mode);
  std::size_t universe() const { return c_; }
  std::uint32_t find(std::uint32_t mask) const;
  bool equiv(std::uint32_t a, std::uint32_t b) const { return find(a) == find(b); }
  // Largest member of the class; the class is closed under union.
  std::uint32_t canonical(std::uint32_t mask) const { return top_[find(mask)]; }
  std::size_t truncated() const { return truncated_; }

 private:
  void merge(std::uint32_t a, std::uint32_t b);
  std::uint32_t find_mut(std::uint32_t x);

  std::size_t c_;
  TensorMode mode_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> top_;
  std::vector<std::vector<Elem>> maps_;  // unary contexts on T(n)
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pending_;
  std::size_t truncated_ = 0;
  std::uint32_t bot_mask_ = 0;
};

inline constexpr std::size_t kRectUniverseLimit = 20;

// Projection-wise decision through RectEngine; requires |T(n)| <= kRectUniverseLimit.
bool rect_equiv_oracle(const Theory& th, std::size_t n, std::size_t m, const std::vector<Morphism>& A,
                       const std::vector<Morphism>& B, std::size_t factor_bound,
                       TensorMode mode = TensorMode::Full);

// T'(n) = closed sets of L(n,1) (full) or classes of nonempty subsets (nonempty), n <= max_obj.
class TensorTheory final : public Theory {
 public:
  TensorTheory(TheoryPtr base, std::shared_ptr<const OrderTable> ot, std::size_t factor_bound,
               TensorMode mode, std::size_t max_obj);

  std::string spec() const override;
  std::string family() const override { return "tensor"; }
  bool bounded() const override;
  bool has_join() const override { return true; }
  std::size_t carrier_size(std::size_t n) const override;
  Elem unit(std::size_t n, std::size_t i) const override;
  Elem try_subst(Elem t, std::size_t n, std::span<const Elem> sigma, std::size_t k) const override;
  Elem join(Elem a, Elem b, std::size_t n) const override;
  std::string show(Elem t, std::size_t n) const override;

  const Theory& base() const { return *base_; }
  TheoryPtr base_ptr() const { return base_; }
  const OrderTable* order() const { return ot_.get(); }
  TensorMode mode() const { return mode_; }
  std::size_t factor_bound() const { return factor_; }
  std::size_t max_obj() const { return max_obj_; }

  // Members of T'(n) element t as a set of T(n) indices.
  const Bits& members(std::size_t n, Elem t) const;
  // A subset of members(n,t) with the same canonical element.
  const std::vector<Elem>& generators(std::size_t n, Elem t) const;
  // Canonical element for an arbitrary set of T(n) elements (closure or class top).
  Elem canonical(std::size_t n, const Bits& s) const;

  Morphism sigma1(const Morphism& f) const;
  // A: family of cod subsets of {0..dom-1}.
  Morphism sigma2(std::size_t dom, const std::vector<std::vector<std::size_t>>& A) const;

 private:
  struct Carrier {
    std::vector<Bits> sets;
    std::vector<std::vector<Elem>> gens;  // maximal members (full) or all members
    std::unordered_map<Bits, Elem> index;
    std::unique_ptr<ClosureSystem> closure;
    std::unique_ptr<RectEngine> rect;
  };
  const Carrier& carrier(std::size_t n) const;

  TheoryPtr base_;
  std::shared_ptr<const OrderTable> ot_;
  std::size_t factor_;
  TensorMode mode_;
  std::size_t max_obj_;
  mutable std::mutex mu_;
  mutable std::map<std::size_t, std::unique_ptr<Carrier>> cache_;
  mutable std::map<std::vector<Elem>, Elem> subst_memo_;
};

using TensorPtr = std::shared_ptr<const TensorTheory>;

// Full mode needs a bounded base; the order table is computed at max(N, max_obj) contexts.
TensorPtr build_tensor(TheoryPtr th, std::size_t N, TensorMode mode = TensorMode::Full,
                       std::optional<std::size_t> max_obj = std::nullopt);

Elem tensor_join(const TensorTheory& t, std::size_t n, Elem a, Elem b);

struct LawCheck {
  std::string name;
  std::size_t cases = 0;
  std::size_t violations = 0;
  std::string first_witness;
};

struct TensorLawReport {
  std::vector<LawCheck> checks;
  bool ok() const;
  std::size_t violations() const;
};

struct TensorLawOptions {
  bool skip_closure = false;       // negative control: compare raw complex products
  std::size_t subset_budget = 4096;  // projection-determinedness subsets per hom-set
  std::uint64_t seed = 1;
};

TensorLawReport verify_tensor_laws(const TensorTheory& t, const TensorLawOptions& opt = {});

// Same carriers for all n <= max_obj when the factorization bound drops to N-1.
bool tensor_stable(const TensorTheory& t);

}  // namespace lawvere
