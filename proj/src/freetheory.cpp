#include "lawvere/freetheory.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace lawvere {

void Signature::validate() const {
  std::set<std::string> names;
  std::size_t constants = 0;
  for (const auto& op : ops) {
    if (op.name.empty() || op.name == "bot" ||
        !std::all_of(op.name.begin(), op.name.end(),
                     [](unsigned char c) { return std::isalnum(c) || c == '_'; }) ||
        std::isdigit(static_cast<unsigned char>(op.name[0])))
      throw InvalidSpec("invalid operation name '" + op.name + "'");
    if (op.name.size() > 1 && op.name[0] == 'x' &&
        std::all_of(op.name.begin() + 1, op.name.end(),
                    [](unsigned char c) { return std::isdigit(c); }))
      throw InvalidSpec("operation name '" + op.name + "' clashes with a variable");
    if (!names.insert(op.name).second) throw InvalidSpec("duplicate operation '" + op.name + "'");
    if (op.arity == 0) ++constants;
  }
  if (with_bottom && constants > 0)
    throw InvalidSpec("signature with bottom may not declare further constants");
}

std::size_t Signature::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < ops.size(); ++i)
    if (ops[i].name == name) return i;
  throw InvalidSpec("unknown operation '" + name + "'");
}

Signature parse_signature(const std::string& text) {
  Signature sig;
  sig.with_bottom = false;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string word, extra;
    if (!(ls >> word)) continue;
    if (ls >> extra) throw InvalidSpec("signature line " + std::to_string(lineno) + ": trailing text");
    if (word == "bottom") {
      sig.with_bottom = true;
      continue;
    }
    auto slash = word.find('/');
    if (slash == std::string::npos)
      throw InvalidSpec("signature line " + std::to_string(lineno) + ": expected name/arity");
    std::string ar = word.substr(slash + 1);
    if (ar.empty() || !std::all_of(ar.begin(), ar.end(), [](unsigned char c) { return std::isdigit(c); }))
      throw InvalidSpec("signature line " + std::to_string(lineno) + ": bad arity");
    sig.ops.push_back({word.substr(0, slash), std::stoul(ar)});
  }
  sig.validate();
  return sig;
}

Signature load_signature(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidSpec("cannot open signature file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_signature(ss.str());
}

std::size_t FreeTerm::depth() const {
  if (kind != Kind::App) return 0;
  std::size_t d = 0;
  for (const auto& k : kids) d = std::max(d, k.depth());
  return d + 1;
}

std::size_t FreeTerm::max_var() const {
  if (kind == Kind::Var) return index + 1;
  std::size_t v = 0;
  for (const auto& k : kids) v = std::max(v, k.max_var());
  return v;
}

std::strong_ordering FreeTerm::operator<=>(const FreeTerm& o) const {
  if (auto c = kind <=> o.kind; c != 0) return c;
  if (auto c = index <=> o.index; c != 0) return c;
  return std::lexicographical_compare_three_way(kids.begin(), kids.end(), o.kids.begin(),
                                                o.kids.end());
}

std::string show(const Signature& sig, const FreeTerm& t) {
  switch (t.kind) {
    case FreeTerm::Kind::Bottom:
      return "bot";
    case FreeTerm::Kind::Var:
      return "x" + std::to_string(t.index);
    case FreeTerm::Kind::App: {
      std::string s = sig.ops.at(t.index).name + "(";
      for (std::size_t i = 0; i < t.kids.size(); ++i) {
        if (i) s += ",";
        s += show(sig, t.kids[i]);
      }
      return s + ")";
    }
  }
  return {};
}

namespace {

struct TermParser {
  const Signature& sig;
  const std::string& s;
  std::size_t pos = 0;

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw InvalidSpec("term parse error at column " + std::to_string(pos + 1) + ": " + what);
  }
  std::string ident() {
    skip();
    std::size_t b = pos;
    while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    if (b == pos) fail("expected identifier");
    return s.substr(b, pos - b);
  }
  FreeTerm term() {
    std::string id = ident();
    if (id == "bot") return FreeTerm::bot();
    if (id.size() > 1 && id[0] == 'x' &&
        std::all_of(id.begin() + 1, id.end(), [](unsigned char c) { return std::isdigit(c); }))
      return FreeTerm::var(static_cast<std::uint32_t>(std::stoul(id.substr(1))));
    std::size_t op = sig.index_of(id);
    std::vector<FreeTerm> kids;
    skip();
    if (pos >= s.size() || s[pos] != '(') fail("expected '('");
    ++pos;
    skip();
    if (pos < s.size() && s[pos] == ')') {
      ++pos;
    } else {
      for (;;) {
        kids.push_back(term());
        skip();
        if (pos < s.size() && s[pos] == ',') {
          ++pos;
          continue;
        }
        if (pos < s.size() && s[pos] == ')') {
          ++pos;
          break;
        }
        fail("expected ',' or ')'");
      }
    }
    if (kids.size() != sig.ops[op].arity) fail("arity mismatch for '" + id + "'");
    return FreeTerm::app(static_cast<std::uint32_t>(op), std::move(kids));
  }
};

bool is_redex(const FreeTerm& t) {
  return t.kind == FreeTerm::Kind::App && !t.kids.empty() &&
         std::all_of(t.kids.begin(), t.kids.end(), [](const FreeTerm& k) { return k.is_bot(); });
}

void collect_redexes(FreeTerm& t, std::vector<FreeTerm*>& out) {
  if (is_redex(t)) out.push_back(&t);
  for (auto& k : t.kids) collect_redexes(k, out);
}

bool syn_leq_vars(const FreeTerm& t, const FreeTerm& s, std::map<std::uint32_t, bool>& erased) {
  if (s.kind == FreeTerm::Kind::Var) {
    bool e;
    if (t.is_bot()) e = true;
    else if (t == s) e = false;
    else return false;
    auto [it, fresh] = erased.emplace(s.index, e);
    return fresh || it->second == e;
  }
  if (t.kind != s.kind || t.index != s.index || t.kids.size() != s.kids.size()) return false;
  for (std::size_t i = 0; i < s.kids.size(); ++i)
    if (!syn_leq_vars(t.kids[i], s.kids[i], erased)) return false;
  return true;
}

}  // namespace

FreeTerm parse_term(const Signature& sig, const std::string& text) {
  TermParser p{sig, text};
  FreeTerm t = p.term();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing input");
  return t;
}

FreeTerm normalize(const FreeTerm& t) {
  if (t.kind != FreeTerm::Kind::App) return t;
  FreeTerm r{t.kind, t.index, {}};
  r.kids.reserve(t.kids.size());
  for (const auto& k : t.kids) r.kids.push_back(normalize(k));
  if (is_redex(r)) return FreeTerm::bot();
  return r;
}

bool rewrite_random_step(FreeTerm& t, std::mt19937_64& rng) {
  std::vector<FreeTerm*> redexes;
  collect_redexes(t, redexes);
  if (redexes.empty()) return false;
  std::uniform_int_distribution<std::size_t> pick(0, redexes.size() - 1);
  *redexes[pick(rng)] = FreeTerm::bot();
  return true;
}

FreeTerm graft(const FreeTerm& t, const std::vector<FreeTerm>& sigma) {
  switch (t.kind) {
    case FreeTerm::Kind::Bottom:
      return t;
    case FreeTerm::Kind::Var:
      return sigma.at(t.index);
    case FreeTerm::Kind::App: {
      FreeTerm r{t.kind, t.index, {}};
      r.kids.reserve(t.kids.size());
      for (const auto& k : t.kids) r.kids.push_back(graft(k, sigma));
      return r;
    }
  }
  return t;
}

bool syn_leq(const FreeTerm& t, const FreeTerm& s, SynLeqMode mode) {
  if (mode == SynLeqMode::VariablesOnly) {
    std::map<std::uint32_t, bool> erased;
    return syn_leq_vars(t, s, erased);
  }
  if (t.is_bot()) return true;
  if (t.kind != s.kind || t.index != s.index || t.kids.size() != s.kids.size()) return false;
  for (std::size_t i = 0; i < s.kids.size(); ++i)
    if (!syn_leq(t.kids[i], s.kids[i], mode)) return false;
  return true;
}

bool free_leq(const FreeTerm& t, const FreeTerm& s, SynLeqMode mode) {
  return syn_leq(normalize(t), s, mode);
}

std::vector<FreeTerm> enumerate_terms(const Signature& sig, std::size_t n, std::size_t depth,
                                      std::size_t ceiling) {
  std::vector<FreeTerm> base;
  if (sig.with_bottom) base.push_back(FreeTerm::bot());
  for (std::size_t i = 0; i < n; ++i) base.push_back(FreeTerm::var(static_cast<std::uint32_t>(i)));
  std::vector<FreeTerm> level = base;
  for (std::size_t d = 1; d <= depth; ++d) {
    std::vector<FreeTerm> next = base;
    for (std::size_t o = 0; o < sig.ops.size(); ++o) {
      const std::size_t ar = sig.ops[o].arity;
      std::uint64_t count = checked_pow(level.size(), ar, ceiling);
      for (std::uint64_t x = 0; x < count; ++x) {
        std::vector<FreeTerm> kids(ar);
        std::uint64_t y = x;
        bool all_bot = ar > 0;
        for (std::size_t p = ar; p-- > 0;) {
          kids[p] = level[y % level.size()];
          y /= level.size();
          all_bot = all_bot && kids[p].is_bot();
        }
        if (all_bot) continue;
        next.push_back(FreeTerm::app(static_cast<std::uint32_t>(o), std::move(kids)));
        if (next.size() > ceiling) throw CapacityExceeded("term enumeration exceeds ceiling");
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    if (next.size() == level.size()) break;
    level = std::move(next);
  }
  std::sort(level.begin(), level.end());
  return level;
}

FreeTheory::FreeTheory(Signature sig, std::size_t depth, std::string label)
    : sig_(std::move(sig)), depth_(depth), label_(std::move(label)) {
  sig_.validate();
}

std::string FreeTheory::spec() const {
  return "free:" + (label_.empty() ? std::string("<inline>") : label_) +
         ":depth=" + std::to_string(depth_);
}

bool FreeTheory::bounded() const { return carrier_size(0) == 1; }

const FreeTheory::Carrier& FreeTheory::carrier(std::size_t n) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto& slot = cache_[n];
  if (!slot) {
    auto c = std::make_unique<Carrier>();
    c->terms = enumerate_terms(sig_, n, depth_, kCarrierCeiling);
    for (std::size_t i = 0; i < c->terms.size(); ++i) c->index.emplace(c->terms[i], static_cast<Elem>(i));
    slot = std::move(c);
  }
  return *slot;
}

std::size_t FreeTheory::carrier_size(std::size_t n) const { return carrier(n).terms.size(); }

const FreeTerm& FreeTheory::term(Elem e, std::size_t n) const { return carrier(n).terms.at(e); }

Elem FreeTheory::index_of(const FreeTerm& t, std::size_t n) const {
  const auto& c = carrier(n);
  auto it = c.index.find(t);
  return it == c.index.end() ? kNoElem : it->second;
}

Elem FreeTheory::unit(std::size_t n, std::size_t i) const {
  return index_of(FreeTerm::var(static_cast<std::uint32_t>(i)), n);
}

Elem FreeTheory::try_subst(Elem t, std::size_t n, std::span<const Elem> sigma, std::size_t k) const {
  std::vector<FreeTerm> s;
  s.reserve(n);
  for (std::size_t i = 0; i < n; ++i) s.push_back(term(sigma[i], k));
  FreeTerm r = normalize(graft(term(t, n), s));
  if (r.depth() > depth_) return kNoElem;
  return index_of(r, k);
}

std::string FreeTheory::show(Elem t, std::size_t n) const { return lawvere::show(sig_, term(t, n)); }

TheoryPtr make_free(Signature sig, std::size_t depth, std::string label) {
  return std::make_shared<FreeTheory>(std::move(sig), depth, std::move(label));
}

}  // namespace lawvere
