#include <set>

#include "doctest.h"
#include "lawvere/registry.hpp"
#include "lawvere/theories.hpp"
#include "oracles.hpp"

using namespace lawvere;

namespace {

std::vector<std::string> strings(const Theory& th, std::size_t n) {
  std::vector<std::string> out;
  for (Elem e : enumerate_carrier(th, n)) out.push_back(th.show(e, n));
  return out;
}

// Monad laws on every enumerable input at n, k <= max_n.
void check_kleisli_laws(const Theory& th, std::size_t max_n) {
  for (std::size_t n = 0; n <= max_n; ++n)
    for (std::size_t k = 0; k <= max_n; ++k) {
      std::vector<Elem> units(n);
      for (std::size_t i = 0; i < n; ++i) units[i] = th.unit(n, i);
      for (Elem t : enumerate_carrier(th, n)) {
        Elem r = th.try_subst(t, n, units, n);
        if (r != kNoElem) CHECK(r == t);
      }
      for (const auto& sigma : enumerate_hom(th, k, n)) {
        for (std::size_t i = 0; i < n; ++i) CHECK(th.subst(th.unit(n, i), n, sigma.comps, k) == sigma.comps[i]);
      }
    }
}

void check_seq_assoc(const Theory& th, std::size_t max_n) {
  for (std::size_t a = 0; a <= max_n; ++a)
    for (std::size_t b = 0; b <= max_n; ++b)
      for (std::size_t c = 0; c <= max_n; ++c) {
        auto F = enumerate_hom(th, a, b), G = enumerate_hom(th, b, c);
        if (F.size() * G.size() > 20000) continue;
        for (std::size_t d = 0; d <= std::min<std::size_t>(max_n, 2); ++d) {
          auto H = enumerate_hom(th, c, d);
          if (F.size() * G.size() * H.size() > 200000) continue;
          for (const auto& f : F)
            for (const auto& g : G) {
              auto fg = try_seq(th, f, g);
              if (!fg) continue;
              for (const auto& h : H) {
                auto gh = try_seq(th, g, h);
                if (!gh) continue;
                auto l = try_seq(th, *fg, h), r = try_seq(th, f, *gh);
                if (l && r) CHECK(*l == *r);
              }
            }
        }
        for (const auto& f : F) {
          CHECK(seq(th, identity(th, a), f) == f);
          CHECK(seq(th, f, identity(th, b)) == f);
        }
      }
}

}  // namespace

TEST_SUITE("theories") {
  TEST_CASE("carrier enumeration examples") {
    auto P = make_powerset();
    CHECK(strings(*P, 2) == std::vector<std::string>{"{}", "{0}", "{1}", "{0,1}"});
    CHECK(strings(*P, 0) == std::vector<std::string>{"{}"});
    CHECK(make_partial_state(1)->carrier_size(1) == 2);
  }

  TEST_CASE("carrier sizes match closed forms") {
    for (std::size_t n = 0; n <= 3; ++n) {
      CHECK(make_powerset()->carrier_size(n) == (std::size_t{1} << n));
      CHECK(make_nonempty_powerset()->carrier_size(n) == (std::size_t{1} << n) - 1);
      CHECK(make_exceptions(2)->carrier_size(n) == n + 2);
      CHECK(make_multiset(2)->carrier_size(n) == checked_pow(3, n, 1000));
      CHECK(make_partial_state(2)->carrier_size(n) == checked_pow(2 * n + 1, 2, 1000));
      CHECK(make_state(2)->carrier_size(n) == checked_pow(2 * n, 2, 1000));
      CHECK(make_list(2)->carrier_size(n) == 1 + n + n * n);
      CHECK(make_ndstate_native(1)->carrier_size(n) == (std::size_t{1} << n));
    }
    CHECK(make_continuation(2)->carrier_size(2) == 16);
  }

  TEST_CASE("enumeration is duplicate free and canonical") {
    for (auto th : {make_powerset(), make_multiset(2), make_list(2), make_partial_state(2), make_continuation(2)}) {
      auto s = strings(*th, 2);
      CHECK(std::set<std::string>(s.begin(), s.end()).size() == s.size());
    }
  }

  TEST_CASE("unit examples") {
    CHECK(make_powerset()->show(make_powerset()->unit(3, 1), 3) == "{1}");
    auto st = make_state(2);
    CHECK(st->show(st->unit(1, 0), 1) == "[s0:(s0,x0),s1:(s1,x0)]");
    auto L = make_list(2);
    CHECK(L->show(L->unit(2, 1), 2) == "[1]");
  }

  TEST_CASE("unit is injective") {
    for (auto th : {make_powerset(), make_multiset(2), make_list(2), make_partial_state(2), make_state(2),
                    make_exceptions(1), make_continuation(2)}) {
      std::set<Elem> seen;
      for (std::size_t i = 0; i < 3; ++i) seen.insert(th->unit(3, i));
      CHECK(seen.size() == 3);
    }
  }

  TEST_CASE("subst examples") {
    auto P = make_powerset();
    const std::vector<Elem> sigma{P->unit(2, 0), P->unit(2, 1)};
    CHECK(P->subst(3, 2, sigma, 2) == 3);
    CHECK(P->subst(0, 2, sigma, 2) == 0);
    auto M = make_multiset(2);
    // <x0:1,x1:1> with both variables sent to <y0:1>
    Elem t = kNoElem;
    for (Elem e : enumerate_carrier(*M, 2))
      if (M->show(e, 2) == "<x0:1,x1:1>") t = e;
    REQUIRE(t != kNoElem);
    const std::vector<Elem> s2{M->unit(1, 0), M->unit(1, 0)};
    CHECK(M->show(M->subst(t, 2, s2, 1), 1) == "<x0:2>");
  }

  TEST_CASE("capped list substitution overflows loudly") {
    auto L = make_list(2);
    Elem two = kNoElem;
    for (Elem e : enumerate_carrier(*L, 1))
      if (L->show(e, 1) == "[0,0]") two = e;
    REQUIRE(two != kNoElem);
    const std::vector<Elem> sigma{two};
    CHECK_THROWS_AS(L->subst(two, 1, sigma, 1), CapacityExceeded);
    CHECK(L->try_subst(two, 1, sigma, 1) == kNoElem);
  }

  TEST_CASE("contexts past the carrier ceiling throw") {
    auto C = make_continuation(2);
    CHECK_THROWS_AS(C->unit(6, 0), CapacityExceeded);
    CHECK_THROWS_AS(C->try_subst(C->unit(1, 0), 1, std::vector<Elem>{0}, 6), CapacityExceeded);
    CHECK_THROWS_AS(make_powerset()->unit(40, 0), CapacityExceeded);
    CHECK_THROWS_AS(make_ndstate_native(2)->unit(8, 0), CapacityExceeded);
  }

  TEST_CASE("seq, indexing and bottom examples") {
    auto P = make_powerset();
    Morphism g{2, 1, {3}};
    CHECK(seq(*P, identity(*P, 2), g) == g);
    CHECK(indexing(*P, FinMap::identity(3)) == identity(*P, 3));
    CHECK(show(*P, indexing(*P, FinMap::pick(3, 1))) == "{1}");
    FinMap constant{2, 1, {0, 0}};
    CHECK(show(*P, indexing(*P, constant)) == "({0}, {0})");
    CHECK(show(*P, bottom_morphism(*P, 2, 2)) == "({}, {})");
    CHECK(show(*make_list(3), bottom_morphism(*make_list(3), 1, 1)) == "[]");
    CHECK_THROWS_AS(bottom_morphism(*make_nonempty_powerset(), 1, 1), NotBounded);
    CHECK(enumerate_hom(*P, 1, 1).size() == 2);
    CHECK(enumerate_hom(*P, 2, 1).size() == 4);
    CHECK(enumerate_hom(*make_exceptions(1), 0, 1).size() == 1);
  }

  TEST_CASE("projection recovers components") {
    auto P = make_powerset();
    for (const auto& f : enumerate_hom(*P, 2, 3))
      for (std::size_t j = 0; j < 3; ++j)
        CHECK(seq(*P, f, indexing(*P, FinMap::pick(3, j))) == component(f, j));
  }

  TEST_CASE("indexing is functorial") {
    auto P = make_powerset();
    for (const auto& e : enumerate_finmaps(2, 3))
      for (const auto& e2 : enumerate_finmaps(3, 2)) {
        FinMap comp{2, 2, {}};
        for (std::size_t x = 0; x < 2; ++x) comp.table.push_back(e2.table[e.table[x]]);
        CHECK(indexing(*P, comp) == seq(*P, indexing(*P, e2), indexing(*P, e)));
      }
  }

  TEST_CASE("kleisli laws") {
    for (auto th : {make_powerset(), make_nonempty_powerset(), make_multiset(2), make_list(3),
                    make_partial_state(2), make_exceptions(1), make_exceptions(2), make_ndstate_native(1)})
      check_kleisli_laws(*th, 3);
    for (auto th : {make_state(2), make_continuation(2)}) check_kleisli_laws(*th, 2);
  }

  TEST_CASE("seq is associative and unital") {
    for (auto th : {make_powerset(), make_multiset(1), make_list(2), make_partial_state(1), make_exceptions(1)})
      check_seq_assoc(*th, 3);
    for (auto th : {make_state(2), make_continuation(2), make_partial_state(2)}) check_seq_assoc(*th, 2);
  }

  TEST_CASE("boundedness agrees with the constant count") {
    for (auto th : {make_powerset(), make_nonempty_powerset(), make_multiset(2), make_list(3), make_state(2),
                    make_partial_state(2), make_exceptions(1), make_exceptions(2), make_continuation(2),
                    make_continuation(1), make_ndstate_native(2)})
      CHECK(th->bounded() == (th->carrier_size(0) == 1));
    CHECK(make_exceptions(1)->bounded());
    CHECK_FALSE(make_exceptions(2)->bounded());
    CHECK_FALSE(make_continuation(2)->bounded());
  }

  TEST_CASE("saturating semiring laws") {
    for (std::size_t K = 0; K <= 4; ++K)
      for (std::size_t a = 0; a <= K; ++a)
        for (std::size_t b = 0; b <= K; ++b) {
          CHECK(sat_add(a, b, K) == sat_add(b, a, K));
          CHECK(sat_mul(a, b, K) == sat_mul(b, a, K));
          for (std::size_t c = 0; c <= K; ++c) {
            CHECK(sat_add(sat_add(a, b, K), c, K) == sat_add(a, sat_add(b, c, K), K));
            CHECK(sat_mul(sat_mul(a, b, K), c, K) == sat_mul(a, sat_mul(b, c, K), K));
            CHECK(sat_mul(a, sat_add(b, c, K), K) == sat_add(sat_mul(a, b, K), sat_mul(a, c, K), K));
          }
        }
  }

  TEST_CASE("tensor helpers index pairs as documented") {
    auto P = make_powerset();
    Morphism f{1, 2, {1, 0}};  // ({0}, {})
    Morphism r = tensor_right(*P, f, 2);
    CHECK(r.dom == 2);
    CHECK(r.cod == 4);
    Morphism l = tensor_left(*P, 2, f);
    CHECK(l.dom == 2);
    CHECK(l.cod == 4);
  }
}

TEST_SUITE("registry") {
  TEST_CASE("spec strings") {
    CHECK(make_theory("P")->family() == "P");
    CHECK(make_theory("Pstar")->family() == "Pstar");
    CHECK(make_theory("state:s=2")->carrier_size(1) == 4);
    CHECK(make_theory("pstate:s=2")->bounded());
    CHECK(make_theory("exc:e=1")->bounded());
    CHECK(make_theory("mset:K=2")->carrier_size(1) == 3);
    CHECK(make_theory("list:cap=3")->carrier_size(1) == 4);
    CHECK(make_theory("cont:r=2")->carrier_size(1) == 4);
    CHECK(make_theory("ndstate-native:s=1")->has_join());
    CHECK(make_theory("ndstate:s=1")->carrier_size(1) == 2);
    CHECK(make_theory("tensor:N=2:P")->has_join());
    CHECK(make_theory("tensor:mode=nonempty:Pstar")->carrier_size(1) == 1);
  }

  TEST_CASE("invalid specs are rejected with messages") {
    for (std::string bad : {"", "Q", "P:x=1", "state", "state:s=", "state:s=x", "mset:k=2", "list:cap=2:x",
                            "tensor:", "ndstate", "ndstate:q=1", "free:", "state:s=0",
                            "pstate:s=9", "mset:K=0", "cont:r=7", "tensor:N=0:P"})
      CHECK_THROWS_AS(make_theory(bad), InvalidSpec);
  }

  TEST_CASE("at least nine builtins") { CHECK(builtin_theories().size() >= 9); }
}
