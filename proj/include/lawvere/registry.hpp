#pragma once

#include <string>
#include <vector>

#include "lawvere/theories.hpp"

namespace lawvere {

// Spec strings: P, Pstar, state:s=K, pstate:s=K, exc:e=K, mset:K=K, list:cap=K,
// cont:r=K, free:<file>[:depth=D], ndstate:s=K[:N=d][:max=d], ndstate-native:s=K,
// tensor:[N=d:][max=d:][mode=nonempty:]<spec>, broken-join:<spec>.
TheoryPtr make_theory(const std::string& spec);

struct BuiltinInfo {
  std::string spec;
  std::string description;
  bool bounded = false;
  bool has_join = false;
};
std::vector<BuiltinInfo> builtin_theories();

}  // namespace lawvere
