#include "lawvere/registry.hpp"

#include <charconv>

#include "lawvere/freetheory.hpp"
#include "lawvere/metalang.hpp"
#include "lawvere/tensor.hpp"

namespace lawvere {

namespace {

std::size_t number(const std::string& text, const std::string& spec) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw InvalidSpec("'" + spec + "': expected a number, got '" + text + "'");
  return v;
}

// Parses "key=value" where the key must match.
std::size_t param(const std::string& part, const std::string& key, const std::string& spec) {
  if (part.rfind(key + "=", 0) != 0) throw InvalidSpec("'" + spec + "': expected " + key + "=<n>");
  return number(part.substr(key.size() + 1), spec);
}

std::size_t bounded_param(std::size_t v, std::size_t lo, std::size_t hi, const std::string& key,
                          const std::string& spec) {
  if (v < lo || v > hi)
    throw InvalidSpec("'" + spec + "': " + key + " must lie in " + std::to_string(lo) + ".." + std::to_string(hi));
  return v;
}

std::pair<std::string, std::string> split(const std::string& s) {
  auto p = s.find(':');
  if (p == std::string::npos) return {s, ""};
  return {s.substr(0, p), s.substr(p + 1)};
}

}  // namespace

TheoryPtr make_theory(const std::string& spec) {
  auto [head, rest] = split(spec);
  auto single = [&](const std::string& key, std::size_t lo, std::size_t hi) {
    if (rest.empty() || rest.find(':') != std::string::npos)
      throw InvalidSpec("'" + spec + "': expected " + head + ":" + key + "=<n>");
    return bounded_param(param(rest, key, spec), lo, hi, key, spec);
  };
  if (head == "P" && rest.empty()) return make_powerset();
  if (head == "Pstar" && rest.empty()) return make_nonempty_powerset();
  if (head == "state") return make_state(single("s", 1, 4));
  if (head == "pstate") return make_partial_state(single("s", 1, 4));
  if (head == "exc") return make_exceptions(single("e", 0, 16));
  if (head == "mset") return make_multiset(single("K", 1, 8));
  if (head == "list") return make_list(single("cap", 0, 6));
  if (head == "cont") return make_continuation(single("r", 1, 4));
  if (head == "ndstate-native") return make_ndstate_native(single("s", 1, 3));
  if (head == "free") {
    std::string file = rest;
    std::size_t depth = 3;
    if (auto p = rest.rfind(":depth="); p != std::string::npos) {
      file = rest.substr(0, p);
      depth = bounded_param(number(rest.substr(p + 7), spec), 0, 6, "depth", spec);
    }
    if (file.empty()) throw InvalidSpec("'" + spec + "': expected free:<signature file>");
    return make_free(load_signature(file), depth, file);
  }
  if (head == "ndstate") {
    std::size_t s = 0, N = 2, max = 3;
    bool have_s = false;
    std::string r = rest;
    while (!r.empty()) {
      auto [part, tail] = split(r);
      if (part.rfind("s=", 0) == 0) {
        s = param(part, "s", spec);
        have_s = true;
      } else if (part.rfind("N=", 0) == 0) {
        N = param(part, "N", spec);
      } else if (part.rfind("max=", 0) == 0) {
        max = param(part, "max", spec);
      } else {
        throw InvalidSpec("'" + spec + "': unknown ndstate option '" + part + "'");
      }
      r = tail;
    }
    if (!have_s) throw InvalidSpec("'" + spec + "': expected ndstate:s=<n>");
    bounded_param(s, 1, 3, "s", spec);
    bounded_param(N, 1, 4, "N", spec);
    return build_tensor(make_partial_state(s), N, TensorMode::Full, max);
  }
  if (head == "tensor") {
    std::size_t N = 2;
    std::optional<std::size_t> max;
    TensorMode mode = TensorMode::Full;
    std::string r = rest;
    for (;;) {
      auto [part, tail] = split(r);
      if (part.rfind("N=", 0) == 0) N = param(part, "N", spec);
      else if (part.rfind("max=", 0) == 0) max = param(part, "max", spec);
      else if (part == "mode=nonempty") mode = TensorMode::Nonempty;
      else if (part == "mode=full") mode = TensorMode::Full;
      else break;
      r = tail;
    }
    if (r.empty()) throw InvalidSpec("'" + spec + "': expected tensor:[options:]<theory>");
    bounded_param(N, 1, 4, "N", spec);
    return build_tensor(make_theory(r), N, mode, max);
  }
  if (head == "broken-join") {
    if (rest.empty()) throw InvalidSpec("'" + spec + "': expected broken-join:<theory>");
    return ml::broken_join(make_theory(rest));
  }
  throw InvalidSpec("unknown theory '" + spec + "'");
}

std::vector<BuiltinInfo> builtin_theories() {
  std::vector<BuiltinInfo> out = {
      {"P", "powerset: subsets of n", true, true},
      {"Pstar", "nonempty powerset: nonempty subsets of n", false, true},
      {"state:s=2", "state: S -> S x n", false, false},
      {"pstate:s=2", "partial state: S -> (S x n) + bottom", true, false},
      {"exc:e=1", "exceptions: n + E", true, false},
      {"mset:K=2", "multisets with multiplicities saturating at K", true, false},
      {"list:cap=3", "lists of length at most cap", true, false},
      {"cont:r=2", "continuations: (n -> R) -> R", false, false},
      {"ndstate:s=1", "tensor of pstate:s with P", true, true},
      {"ndstate-native:s=1", "S -> P(S x n)", true, true},
      {"free:<file>[:depth=D]", "free theory of a signature file, terms up to depth D", false, false},
      {"tensor:[N=d:][max=d:][mode=nonempty:]<spec>", "tensor of a theory with P (or P* in nonempty mode)",
       true, true},
  };
  for (auto& b : out) {
    if (b.spec.find('<') != std::string::npos) continue;
    auto th = make_theory(b.spec);
    b.bounded = th->bounded();
    b.has_join = th->has_join();
  }
  return out;
}

}  // namespace lawvere
