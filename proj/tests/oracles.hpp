#pragma once

// Closed-form reference implementations. They read elements through the
// printed form only, never through the library's encodings.

#include <algorithm>
#include <map>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "lawvere/theories.hpp"

namespace oracle {

inline std::vector<std::size_t> numbers(const std::string& s, const std::regex& re, int group = 1) {
  std::vector<std::size_t> out;
  for (std::sregex_iterator it(s.begin(), s.end(), re), end; it != end; ++it)
    out.push_back(std::stoul((*it)[group].str()));
  return out;
}

// "{0,2}" -> {0,2}
inline std::set<std::size_t> parse_set(const std::string& s) {
  static const std::regex re(R"((\d+))");
  auto v = numbers(s, re);
  return {v.begin(), v.end()};
}

// "<x0:2,x1:1>" -> multiplicity per variable
inline std::map<std::size_t, std::size_t> parse_mset(const std::string& s) {
  static const std::regex re(R"(x(\d+):(\d+))");
  std::map<std::size_t, std::size_t> out;
  for (std::sregex_iterator it(s.begin(), s.end(), re), end; it != end; ++it)
    out[std::stoul((*it)[1].str())] = std::stoul((*it)[2].str());
  return out;
}

// "[0,1]" -> sequence
inline std::vector<std::size_t> parse_list(const std::string& s) {
  static const std::regex re(R"((\d+))");
  return numbers(s, re);
}

// Partial state "[s0:_,s1:(s0,x1)]": per state, optional (state, var).
using PState = std::vector<std::optional<std::pair<std::size_t, std::size_t>>>;
inline PState parse_pstate(const std::string& s) {
  static const std::regex re(R"(s(\d+):(_|\(s(\d+),x(\d+)\)))");
  PState out;
  for (std::sregex_iterator it(s.begin(), s.end(), re), end; it != end; ++it) {
    if ((*it)[2].str() == "_") out.push_back(std::nullopt);
    else out.push_back(std::make_pair(std::stoul((*it)[3].str()), std::stoul((*it)[4].str())));
  }
  return out;
}

// Native nondeterministic state "[s0:{(s0,x0),(s1,x1)},s1:{}]".
using NDState = std::vector<std::set<std::pair<std::size_t, std::size_t>>>;
inline NDState parse_ndstate(const std::string& s) {
  static const std::regex state_re(R"(s\d+:\{([^}]*)\})");
  static const std::regex pair_re(R"(\(s(\d+),x(\d+)\))");
  NDState out;
  for (std::sregex_iterator it(s.begin(), s.end(), state_re), end; it != end; ++it) {
    const std::string inner = (*it)[1].str();
    std::set<std::pair<std::size_t, std::size_t>> S;
    for (std::sregex_iterator jt(inner.begin(), inner.end(), pair_re); jt != end; ++jt)
      S.insert({std::stoul((*jt)[1].str()), std::stoul((*jt)[2].str())});
    out.push_back(S);
  }
  return out;
}

inline bool subset_leq(const std::string& a, const std::string& b) {
  auto A = parse_set(a), B = parse_set(b);
  return std::includes(B.begin(), B.end(), A.begin(), A.end());
}

inline bool mset_leq(const std::string& a, const std::string& b) {
  auto A = parse_mset(a), B = parse_mset(b);
  for (auto [x, k] : A)
    if (B[x] < k) return false;
  return true;
}

// a arises from b by deleting entries.
inline bool deletion_leq(const std::string& a, const std::string& b) {
  auto A = parse_list(a), B = parse_list(b);
  std::size_t i = 0;
  for (std::size_t j = 0; j < B.size() && i < A.size(); ++j)
    if (A[i] == B[j]) ++i;
  return i == A.size();
}

inline bool extension_leq(const std::string& a, const std::string& b) {
  auto A = parse_pstate(a), B = parse_pstate(b);
  if (A.size() != B.size()) return false;
  for (std::size_t s = 0; s < A.size(); ++s)
    if (A[s] && A[s] != B[s]) return false;
  return true;
}

inline bool pointwise_inclusion(const NDState& a, const NDState& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t s = 0; s < a.size(); ++s)
    if (!std::includes(b[s].begin(), b[s].end(), a[s].begin(), a[s].end())) return false;
  return true;
}

// Relation of a set of partial-state functions: state -> defined outputs.
inline NDState relation_of(const std::vector<PState>& fs, std::size_t states) {
  NDState out(states);
  for (const auto& f : fs)
    for (std::size_t s = 0; s < states; ++s)
      if (f[s]) out[s].insert(*f[s]);
  return out;
}

}  // namespace oracle
