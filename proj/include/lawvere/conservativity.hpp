#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "lawvere/order.hpp"
#include "lawvere/theories.hpp"

namespace lawvere {

// |T(0)| = 1.
bool check_bounded(const Theory& th);

struct AdditivityResult {
  bool ok = false;
  std::vector<Elem> family;  // U_n in T(n) for n <= N
  std::string reason;
};
// Searches for U_n (n <= N) with U_1 = x0, U_n = seq([sigma], U_m) for surjections
// sigma : m -> n, and seq(U_n (x) m, f) = seq(n (x) f, U_n) for f : m -> 1, m <= N.
AdditivityResult check_complete_additivity(const Theory& th, std::size_t N);

// Join over j of Delta_j equals id_m for m <= max_m.
struct DeltaSumResult {
  bool ok = true;
  std::size_t checked = 0;
  std::optional<std::size_t> failing_m;
};
DeltaSumResult check_delta_sum(const Theory& th, std::size_t max_m = 3);

enum class VerdictKind { Admits, Fails, Inconclusive };
std::string to_string(VerdictKind kind);

struct ConservativityWitness {
  // "not_antisymmetric", "no_least_upper_bound" or "composite_not_least"
  std::string reason;
  Morphism f, g;
  std::vector<Morphism> pieces;
  std::vector<Morphism> minimal_upper_bounds;
  std::optional<Morphism> expected;
};

struct Verdict {
  std::string theory;
  std::size_t N = 0;
  RuleMode mode = RuleMode::Literal;
  VerdictKind kind = VerdictKind::Admits;
  std::optional<ConservativityWitness> witness;
  std::size_t truncated_pairs = 0;
  std::optional<bool> stability;  // verdict kind unchanged at N-1
  std::optional<bool> modes_agree;  // literal and two-sided preorders coincide at N
  std::string note;
};

struct ConservativityOptions {
  RuleMode mode = RuleMode::Literal;
  std::size_t jobs = 1;
  bool stability = true;
  bool compare_modes = true;
};

// No-lub witnesses take precedence over composite-not-least ones; within a
// reason the lexicographically least (n, m, k, f, g) is reported.
Verdict check_conservativity(TheoryPtr th, std::size_t N, const ConservativityOptions& opt = {});
Verdict check_conservativity(const OrderTable& ot, std::size_t jobs = 1);

// Re-evaluates a fails witness against the order table.
bool witness_reproduces(const OrderTable& ot, const ConservativityWitness& w);

nlohmann::json to_json(const Theory& th, const Verdict& v);

struct UniformityWitness {
  Morphism f;
  Morphism fhat;  // k -> 1
  FinMap u;       // k*m -> n+c, pair (j,i) at j*m+i
  std::size_t c = 0;
};

// c^n : n -> n+c, variables then the constants of T(0).
Morphism constants_morphism(const Theory& th, std::size_t n);
// Component i is fhat with variable j replaced by component u(j,i) of c^n.
Morphism uniform_instance(const Theory& th, const UniformityWitness& w);
// seq(seq(c^n, [u]), fhat (x) m), passing through T(k*m).
Morphism uniform_instance_literal(const Theory& th, const UniformityWitness& w);

// Supported families: P, Pstar, mset, cont. Throws UnsupportedTheory otherwise.
UniformityWitness build_uniform_witness(const Theory& th, const Morphism& f);
// Merges variables of fhat whose u-columns coincide; keeps the instance unchanged.
UniformityWitness compress_witness(const Theory& th, const UniformityWitness& w);

struct UniformityCheck {
  UniformityWitness witness;
  bool equation = false;
  bool k_bound = false;  // k <= (n+c)^m
  bool ok() const { return equation && k_bound; }
};
UniformityCheck verify_uniform_witness(const Theory& th, const Morphism& f);

}  // namespace lawvere
