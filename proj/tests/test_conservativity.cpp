#include "doctest.h"
#include "lawvere/conservativity.hpp"
#include "lawvere/freetheory.hpp"
#include "lawvere/registry.hpp"
#include "lawvere/tensor.hpp"

using namespace lawvere;

namespace {

std::string data_path(const std::string& name) { return std::string(LAWVERE_DATA_DIR) + "/" + name; }

}  // namespace

TEST_SUITE("conservativity") {
  TEST_CASE("boundedness") {
    CHECK(check_bounded(*make_powerset()));
    CHECK_FALSE(check_bounded(*make_nonempty_powerset()));
    CHECK_FALSE(check_bounded(*make_exceptions(2)));
    CHECK(check_bounded(*make_exceptions(1)));
  }

  TEST_CASE("complete additivity") {
    auto P = make_powerset();
    auto r = check_complete_additivity(*P, 2);
    REQUIRE(r.ok);
    for (std::size_t n = 0; n < r.family.size(); ++n) CHECK(r.family[n] == P->carrier_size(n) - 1);
    CHECK_FALSE(check_complete_additivity(*make_state(2), 2).ok);
    auto zero = check_complete_additivity(*P, 0);
    REQUIRE(zero.ok);
    CHECK(zero.family == std::vector<Elem>{P->bottom(0)});
    CHECK(check_complete_additivity(*build_tensor(make_partial_state(1), 2, TensorMode::Full, 4), 2).ok);
  }

  TEST_CASE("delta sum is the identity") {
    CHECK(check_delta_sum(*make_powerset(), 3).ok);
    CHECK(check_delta_sum(*make_ndstate_native(1), 3).ok);
    CHECK(check_delta_sum(*build_tensor(make_partial_state(1), 2, TensorMode::Full, 3), 3).ok);
  }

  TEST_CASE("powerset admits") {
    auto v = check_conservativity(make_powerset(), 2);
    CHECK(v.kind == VerdictKind::Admits);
    CHECK_FALSE(v.witness);
    CHECK(v.stability == std::optional<bool>(true));
  }

  TEST_CASE("multiset fails with the doubled witness") {
    auto M = make_multiset(2);
    auto v = check_conservativity(M, 2);
    REQUIRE(v.kind == VerdictKind::Fails);
    REQUIRE(v.witness);
    const auto& w = *v.witness;
    CHECK(show(*M, w.f) == "(<x0:1>, <x0:1>)");
    CHECK(show(*M, w.g) == "<x0:1,x1:1>");
    REQUIRE(w.expected);
    CHECK(show(*M, *w.expected) == "<x0:2>");
    REQUIRE(w.minimal_upper_bounds.size() == 1);
    CHECK(show(*M, w.minimal_upper_bounds[0]) == "<x0:1>");
    CHECK(witness_reproduces(compute_preorder(M, 2), w));
  }

  TEST_CASE("capped lists fail with two minimal upper bounds") {
    for (std::size_t cap : {2, 3}) {
      auto L = make_list(cap);
      auto v = check_conservativity(L, 2);
      REQUIRE(v.kind == VerdictKind::Fails);
      REQUIRE(v.witness);
      const auto& w = *v.witness;
      CHECK(w.reason == "no_least_upper_bound");
      CHECK(w.f == identity(*L, 2));
      CHECK(show(*L, w.g) == "[0,1]");
      REQUIRE(w.pieces.size() == 2);
      CHECK(show(*L, w.pieces[0]) == "[0]");
      CHECK(show(*L, w.pieces[1]) == "[1]");
      REQUIRE(w.minimal_upper_bounds.size() == 2);
      CHECK(show(*L, w.minimal_upper_bounds[0]) == "[0,1]");
      CHECK(show(*L, w.minimal_upper_bounds[1]) == "[1,0]");
      CHECK(witness_reproduces(compute_preorder(L, 2), w));
    }
  }

  TEST_CASE("partial state and exceptions admit") {
    for (auto th : {make_partial_state(1), make_partial_state(2), make_exceptions(1)})
      CHECK(check_conservativity(th, 2).kind == VerdictKind::Admits);
  }

  TEST_CASE("free theories with at most one constant admit") {
    auto sig = load_signature(data_path("unary.sig"));
    for (std::size_t N : {1, 2}) CHECK(check_conservativity(make_free(sig, 3), N).kind == VerdictKind::Admits);
    CHECK(check_conservativity(make_theory("free:" + data_path("unary.sig")), 2).kind == VerdictKind::Admits);
  }

  TEST_CASE("unbounded theories are rejected") {
    CHECK_THROWS_AS(check_conservativity(make_nonempty_powerset(), 2), NotBounded);
    CHECK_THROWS_AS(check_conservativity(make_exceptions(2), 2), NotBounded);
  }

  TEST_CASE("verdict is independent of the worker count") {
    for (auto th : {make_powerset(), make_multiset(2), make_list(3)}) {
      auto ot = compute_preorder(th, 2);
      auto a = to_json(*th, check_conservativity(ot, 1));
      for (std::size_t jobs : {2, 3, 5}) CHECK(to_json(*th, check_conservativity(ot, jobs)) == a);
    }
  }

  TEST_CASE("a symmetrized order fails antisymmetry") {
    auto ot = compute_preorder(make_powerset(), 2).symmetrized();
    auto v = check_conservativity(ot);
    REQUIRE(v.kind == VerdictKind::Fails);
    CHECK(v.witness->reason == "not_antisymmetric");
    CHECK(witness_reproduces(ot, *v.witness));
  }

  TEST_CASE("verdict json has the documented fields") {
    auto M = make_multiset(2);
    auto j = to_json(*M, check_conservativity(M, 2));
    for (const char* k : {"theory", "N", "rule_mode", "kind", "witness"}) CHECK(j.contains(k));
    for (const char* k : {"f", "g", "pieces", "minimal_upper_bounds", "expected"}) CHECK(j["witness"].contains(k));
    CHECK(j["kind"] == "fails");
  }

  TEST_CASE("admitting theories embed their order into the tensor") {
    for (auto th : {make_powerset(), make_partial_state(1)}) {
      auto t = build_tensor(th, 2, TensorMode::Full, 2);
      const OrderTable& ot = *t->order();
      for (std::size_t n = 0; n <= 2; ++n)
        for (std::size_t m = 0; m <= 2; ++m) {
          auto F = enumerate_hom(*th, n, m);
          for (const auto& f : F)
            for (const auto& g : F) {
              Morphism sf = t->sigma1(f), sg = t->sigma1(g);
              bool contained = true;
              for (std::size_t j = 0; j < m; ++j)
                contained = contained && t->members(n, sf.comps[j]).is_subset_of(t->members(n, sg.comps[j]));
              CHECK(contained == ot.leq(f, g));
            }
        }
    }
  }

  TEST_CASE("uniformity witnesses") {
    auto P = make_powerset();
    Morphism f{2, 2, {1, 3}};  // ({0}, {0,1})
    auto c = verify_uniform_witness(*P, f);
    CHECK(c.ok());
    CHECK(uniform_instance(*P, c.witness) == f);
    CHECK(uniform_instance_literal(*P, c.witness) == f);
    auto id = verify_uniform_witness(*P, identity(*P, 1));
    CHECK(id.ok());
    CHECK(P->show(id.witness.fhat.comps[0], id.witness.fhat.dom) == "{0}");
    auto C = make_continuation(2);
    for (const auto& g : enumerate_hom(*C, 1, 1)) CHECK(verify_uniform_witness(*C, g).ok());
    for (auto th : {make_powerset(), make_nonempty_powerset(), make_multiset(2)})
      for (std::size_t n = 0; n <= 2; ++n)
        for (std::size_t m = 0; m <= 2; ++m)
          for (const auto& g : enumerate_hom(*th, n, m)) {
            auto w = verify_uniform_witness(*th, g);
            CHECK(w.ok());
            CHECK(w.witness.fhat.dom <= checked_pow(n + th->carrier_size(0), m, 1 << 20));
          }
    CHECK_THROWS_AS(verify_uniform_witness(*make_list(2), identity(*make_list(2), 1)), UnsupportedTheory);
  }

  TEST_CASE("a corrupted witness fails the equation") {
    auto P = make_powerset();
    Morphism f{2, 1, {3}};
    auto w = build_uniform_witness(*P, f);
    REQUIRE(uniform_instance(*P, w) == f);
    w.fhat.comps[0] = P->bottom(w.fhat.dom);
    CHECK(uniform_instance(*P, w) != f);
  }
}
