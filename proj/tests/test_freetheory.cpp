#include <random>

#include "doctest.h"
#include "lawvere/freetheory.hpp"
#include "lawvere/order.hpp"

using namespace lawvere;

namespace {

Signature sig_of(const std::string& text) { return parse_signature(text); }

FreeTerm random_term(const Signature& sig, std::size_t n, std::size_t depth, std::mt19937_64& rng) {
  const std::size_t leaves = 1 + n;
  const std::size_t choices = leaves + (depth > 0 ? sig.ops.size() : 0);
  const std::size_t c = std::uniform_int_distribution<std::size_t>(0, choices - 1)(rng);
  if (c == 0) return FreeTerm::bot();
  if (c < leaves) return FreeTerm::var(static_cast<std::uint32_t>(c - 1));
  const std::size_t op = c - leaves;
  std::vector<FreeTerm> kids;
  for (std::size_t i = 0; i < sig.ops[op].arity; ++i) kids.push_back(random_term(sig, n, depth - 1, rng));
  return FreeTerm::app(static_cast<std::uint32_t>(op), std::move(kids));
}

std::size_t size_of(const FreeTerm& t) {
  std::size_t s = 1;
  for (const auto& k : t.kids) s += size_of(k);
  return s;
}

bool has_redex(const FreeTerm& t) {
  if (t.kind != FreeTerm::Kind::App) return false;
  bool all_bot = !t.kids.empty();
  for (const auto& k : t.kids) {
    if (has_redex(k)) return true;
    all_bot = all_bot && k.is_bot();
  }
  return all_bot;
}

}  // namespace

TEST_SUITE("freetheory") {
  TEST_CASE("normalize examples") {
    auto sig = sig_of("f/1\ng/2\nbottom\n");
    CHECK(show(sig, normalize(parse_term(sig, "f(bot)"))) == "bot");
    CHECK(show(sig, normalize(parse_term(sig, "f(x0)"))) == "f(x0)");
    CHECK(show(sig, normalize(parse_term(sig, "g(f(bot),x0)"))) == "g(bot,x0)");
    CHECK(show(sig, normalize(parse_term(sig, "g(f(bot),f(bot))"))) == "bot");
  }

  TEST_CASE("syn_leq and free_leq examples") {
    auto sig = sig_of("f/1\ng/2\nbottom\n");
    auto T = [&](const char* s) { return parse_term(sig, s); };
    CHECK(syn_leq(T("bot"), T("f(x0)")));
    CHECK(syn_leq(T("f(bot)"), T("f(x0)")));
    CHECK_FALSE(syn_leq(T("f(x0)"), T("f(x1)")));
    CHECK(free_leq(T("f(bot)"), T("f(x0)")));
    CHECK_FALSE(free_leq(T("g(x0,x1)"), T("g(x1,x0)")));
    for (const auto& t : enumerate_terms(sig, 2, 2)) CHECK(free_leq(T("bot"), t));
    // The variables-only reading cannot delete an application.
    CHECK_FALSE(syn_leq(T("bot"), T("f(x0)"), SynLeqMode::VariablesOnly));
    CHECK(syn_leq(T("f(bot)"), T("f(x0)"), SynLeqMode::VariablesOnly));
  }

  TEST_CASE("enumerate_terms examples") {
    auto f = sig_of("f/1\nbottom\n");
    std::vector<std::string> got;
    for (const auto& t : enumerate_terms(f, 1, 1)) got.push_back(show(f, t));
    CHECK(got == std::vector<std::string>{"bot", "x0", "f(x0)"});
    auto empty = sig_of("bottom\n");
    for (std::size_t d : {0, 1, 4}) CHECK(enumerate_terms(empty, 2, d).size() == 3);
    CHECK_THROWS_AS(sig_of("c/0\nbottom\n").validate(), InvalidSpec);
    CHECK_THROWS_AS(sig_of("f/1\nf/2\n").validate(), InvalidSpec);
  }

  TEST_CASE("enumerated terms are normal, distinct and sorted") {
    auto sig = sig_of("f/1\ng/2\nbottom\n");
    auto ts = enumerate_terms(sig, 2, 2);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      CHECK(normalize(ts[i]) == ts[i]);
      CHECK(ts[i].depth() <= 2);
      if (i) CHECK(ts[i - 1] < ts[i]);
    }
  }

  TEST_CASE("normalize is confluent and terminating under random rewrite orders") {
    std::mt19937_64 rng(7);
    for (const char* text : {"f/1\ng/2\nbottom\n", "g/2\nh/3\nbottom\n", "f/1\nh/1\nbottom\n"}) {
      auto sig = sig_of(text);
      for (int i = 0; i < 3400; ++i) {
        FreeTerm t = random_term(sig, 2, 5, rng);
        FreeTerm nf = normalize(t);
        CHECK_FALSE(has_redex(nf));
        CHECK(normalize(nf) == nf);
        FreeTerm u = t;
        std::size_t steps = 0;
        // Each step removes at least one node, so size bounds the path length.
        while (rewrite_random_step(u, rng)) REQUIRE(++steps <= size_of(t));
        CHECK(u == nf);
      }
    }
  }

  TEST_CASE("syn_leq is a partial order on normal forms") {
    auto sig = sig_of("f/1\ng/2\nbottom\n");
    auto ts = enumerate_terms(sig, 1, 2);
    for (const auto& a : ts)
      for (const auto& b : ts) {
        if (syn_leq(a, b) && syn_leq(b, a)) CHECK(a == b);
        if (!syn_leq(a, b)) continue;
        for (const auto& c : ts)
          if (syn_leq(b, c)) CHECK(syn_leq(a, c));
      }
  }

  TEST_CASE("free_leq agrees with the derived approximation order") {
    // Small instance; the acceptance binary runs the full grid.
    auto sig = sig_of("f/1\nbottom\n");
    auto th = make_free(sig, 2);
    auto ot = compute_preorder(th, 2, RuleMode::Literal, 3);
    const auto& ft = static_cast<const FreeTheory&>(*th);
    for (std::size_t n = 0; n <= 2; ++n)
      for (Elem a = 0; a < ft.carrier_size(n); ++a)
        for (Elem b = 0; b < ft.carrier_size(n); ++b)
          CHECK(ot.leq1(n, a, b) == free_leq(ft.term(a, n), ft.term(b, n)));
  }

  TEST_CASE("normal form of a substitution is the least upper bound of its pieces") {
    auto sig = sig_of("f/1\ng/2\nbottom\n");
    auto ts = enumerate_terms(sig, 2, 1);
    auto sigmas = enumerate_terms(sig, 1, 1);
    auto universe = enumerate_terms(sig, 1, 3);
    for (const auto& t : ts)
      for (const auto& s0 : sigmas)
        for (const auto& s1 : sigmas) {
          FreeTerm whole = normalize(graft(t, {s0, s1}));
          FreeTerm p0 = normalize(graft(t, {s0, FreeTerm::bot()}));
          FreeTerm p1 = normalize(graft(t, {FreeTerm::bot(), s1}));
          CHECK(free_leq(p0, whole));
          CHECK(free_leq(p1, whole));
          for (const auto& u : universe)
            if (free_leq(p0, u) && free_leq(p1, u)) CHECK(free_leq(whole, u));
        }
  }

  TEST_CASE("theory adapter") {
    auto th = make_free(sig_of("f/1\nbottom\n"), 3);
    CHECK(th->bounded());
    CHECK(th->carrier_size(0) == 1);
    CHECK(th->carrier_size(1) == 5);
    CHECK_FALSE(make_free(sig_of("f/1\n"), 2)->bounded());
  }
}
