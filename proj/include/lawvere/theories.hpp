#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lawvere {

// Canonical position of an element in the enumeration of T(n).
using Elem = std::uint32_t;
inline constexpr Elem kNoElem = 0xFFFFFFFFu;

// Upper bound on any enumerated carrier or hom-set.
inline constexpr std::uint64_t kCarrierCeiling = std::uint64_t{1} << 24;
inline constexpr std::uint64_t kHomCeiling = std::uint64_t{1} << 31;

struct CapacityExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotBounded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotAdditive : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnsupportedTheory : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidSpec : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t ceiling);

struct FinMap {
  std::size_t dom = 0;
  std::size_t cod = 0;
  std::vector<std::size_t> table;

  static FinMap identity(std::size_t n);
  static FinMap pick(std::size_t n, std::size_t i);  // kappa_i : 1 -> n
  static FinMap constant(std::size_t dom, std::size_t cod, std::size_t v);

  bool valid() const;
  bool surjective() const;
  // (next o this) : dom -> next.cod
  FinMap then(const FinMap& next) const;
  bool operator==(const FinMap&) const = default;
};

std::vector<FinMap> enumerate_finmaps(std::size_t dom, std::size_t cod);
std::vector<FinMap> enumerate_surjections(std::size_t dom, std::size_t cod);

class Theory {
 public:
  virtual ~Theory() = default;

  virtual std::string spec() const = 0;
  virtual std::string family() const = 0;
  virtual bool bounded() const = 0;
  virtual bool has_join() const { return false; }

  // Throws CapacityExceeded past the instance's enumeration bound.
  virtual std::size_t carrier_size(std::size_t n) const = 0;
  virtual Elem unit(std::size_t n, std::size_t i) const = 0;
  // Kleisli extension; t in T(n), sigma has n entries of T(k). kNoElem on overflow.
  virtual Elem try_subst(Elem t, std::size_t n, std::span<const Elem> sigma,
                         std::size_t k) const = 0;
  virtual Elem join(Elem a, Elem b, std::size_t n) const;
  virtual std::string show(Elem t, std::size_t n) const = 0;

  Elem subst(Elem t, std::size_t n, std::span<const Elem> sigma, std::size_t k) const;
  // Image of the unique constant; NotBounded unless bounded().
  Elem bottom(std::size_t n) const;
};

using TheoryPtr = std::shared_ptr<const Theory>;

std::vector<Elem> enumerate_carrier(const Theory& th, std::size_t n);

// An L-morphism dom -> cod: cod components, each in T(dom).
struct Morphism {
  std::size_t dom = 0;
  std::size_t cod = 0;
  std::vector<Elem> comps;

  bool operator==(const Morphism&) const = default;
  std::strong_ordering operator<=>(const Morphism& o) const;
};

Morphism identity(const Theory& th, std::size_t n);
Morphism seq(const Theory& th, const Morphism& f, const Morphism& g);
std::optional<Morphism> try_seq(const Theory& th, const Morphism& f, const Morphism& g);
Morphism indexing(const Theory& th, const FinMap& e);
Morphism bottom_morphism(const Theory& th, std::size_t n, std::size_t m);
Morphism component(const Morphism& f, std::size_t j);
// f (x) m : n*m -> k*m ; pair (a,b) in A*B is index a*|B|+b
Morphism tensor_right(const Theory& th, const Morphism& f, std::size_t m);
// m (x) f : m*n -> m*k
Morphism tensor_left(const Theory& th, std::size_t m, const Morphism& f);
std::string show(const Theory& th, const Morphism& f);

// Lexicographic indexing of L(n,m) = T(n)^m, component 0 most significant.
class HomSet {
 public:
  HomSet(const Theory& th, std::size_t n, std::size_t m);
  std::size_t dom() const { return n_; }
  std::size_t cod() const { return m_; }
  std::size_t carrier() const { return c_; }
  std::uint64_t size() const { return size_; }
  Morphism at(std::uint64_t index) const;
  std::uint64_t index_of(const Morphism& f) const;

 private:
  std::size_t n_, m_, c_;
  std::uint64_t size_;
};

std::vector<Morphism> enumerate_hom(const Theory& th, std::size_t n, std::size_t m);

// Flat table of subst(h, y) for h in T(m), y in T(n)^m (y indexed as in HomSet).
class SubstTable {
 public:
  SubstTable(const Theory& th, std::size_t m, std::size_t n);
  Elem at(Elem h, std::uint64_t tuple) const { return data_[h * tuples_ + tuple]; }
  std::uint64_t tuples() const { return tuples_; }
  std::size_t arity() const { return m_; }
  std::size_t ctx() const { return n_; }
  std::size_t overflow() const { return overflow_; }

 private:
  std::size_t m_, n_;
  std::uint64_t tuples_;
  std::vector<Elem> data_;
  std::size_t overflow_ = 0;
};

TheoryPtr make_powerset();
TheoryPtr make_nonempty_powerset();
TheoryPtr make_state(std::size_t s);
TheoryPtr make_partial_state(std::size_t s);
TheoryPtr make_exceptions(std::size_t e);
TheoryPtr make_multiset(std::size_t K);
TheoryPtr make_list(std::size_t cap);
TheoryPtr make_continuation(std::size_t r);
TheoryPtr make_ndstate_native(std::size_t s);

// Saturating semiring on {0..K}.
std::size_t sat_add(std::size_t a, std::size_t b, std::size_t K);
std::size_t sat_mul(std::size_t a, std::size_t b, std::size_t K);

}  // namespace lawvere
