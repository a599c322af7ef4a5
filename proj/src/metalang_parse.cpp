#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "lawvere/metalang.hpp"

namespace lawvere::ml {

SyntaxError::SyntaxError(const std::string& msg, std::size_t l, std::size_t c)
    : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg), line(l), col(c) {}

TypePtr unit_type() {
  static const TypePtr u = std::make_shared<Type>();
  return u;
}

TypePtr base_type(std::string name, std::size_t size) {
  auto t = std::make_shared<Type>();
  t->kind = Type::Kind::Base;
  t->name = std::move(name);
  t->size = size;
  return t;
}

namespace {

TypePtr binary(Type::Kind k, TypePtr a, TypePtr b) {
  auto t = std::make_shared<Type>();
  t->kind = k;
  t->a = std::move(a);
  t->b = std::move(b);
  return t;
}

}  // namespace

TypePtr sum_type(TypePtr a, TypePtr b) { return binary(Type::Kind::Sum, std::move(a), std::move(b)); }
TypePtr prod_type(TypePtr a, TypePtr b) { return binary(Type::Kind::Prod, std::move(a), std::move(b)); }
TypePtr monad_type(TypePtr a) { return binary(Type::Kind::Monad, std::move(a), nullptr); }
TypePtr bool_type() { return sum_type(unit_type(), unit_type()); }

bool type_eq(const Type& x, const Type& y) {
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case Type::Kind::Unit: return true;
    case Type::Kind::Base: return x.name == y.name && x.size == y.size;
    case Type::Kind::Monad: return type_eq(*x.a, *y.a);
    default: return type_eq(*x.a, *y.a) && type_eq(*x.b, *y.b);
  }
}

std::string show(const Type& t) {
  switch (t.kind) {
    case Type::Kind::Unit: return "1";
    case Type::Kind::Base: return t.name;
    case Type::Kind::Sum: return "(" + show(*t.a) + " + " + show(*t.b) + ")";
    case Type::Kind::Prod: return "(" + show(*t.a) + " * " + show(*t.b) + ")";
    case Type::Kind::Monad: return "T " + show(*t.a);
  }
  return "?";
}

std::string show(const Term& t) {
  using K = Term::Kind;
  auto k = [&](std::size_t i) { return show(*t.kids[i]); };
  switch (t.kind) {
    case K::Var: return t.name;
    case K::Num: return std::to_string(t.num);
    case K::Star: return "*";
    case K::Pair: return "(" + k(0) + ", " + k(1) + ")";
    case K::Fst: return "fst " + k(0);
    case K::Snd: return "snd " + k(0);
    case K::Inl: return "inl " + k(0);
    case K::Inr: return "inr " + k(0);
    case K::Case:
      return "(case " + k(0) + " of inl " + t.name + " -> " + k(1) + " | inr " + t.name2 + " -> " + k(2) + ")";
    case K::Ret: return "ret " + k(0);
    case K::Bind: return "(do " + t.name + " <- " + k(0) + "; " + k(1) + ")";
    case K::Bot: return "bot";
    case K::Choice: return "(" + k(0) + " + " + k(1) + ")";
    case K::Test: return "test(" + k(0) + ")";
    case K::Iter: return "(iter " + t.name + " <- " + k(0) + " { " + k(1) + " })";
    case K::If: return "(if " + k(0) + " then " + k(1) + " else " + k(2) + ")";
    case K::Apply: return t.name + "(" + k(0) + ")";
    case K::Annot: return "(" + k(0) + " : " + show(*t.annot) + ")";
    case K::SetLit: {
      std::string s = "{";
      for (std::size_t i = 0; i < t.kids.size(); ++i) s += (i ? ", " : "") + k(i);
      return s + "}";
    }
  }
  return "?";
}

namespace {

enum class Tok { Ident, Number, Sym, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 1, col = 1;
};

const std::set<std::string> kKeywords = {"do",   "if",   "then", "else", "case", "of",  "inl",
                                         "inr",  "ret",  "fst",  "snd",  "bot",  "test", "iter",
                                         "type", "fun",  "T"};

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t k) {
    for (std::size_t j = 0; j < k; ++j) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#' || (c == '/' && i + 1 < src.size() && src[i + 1] == '/')) {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\''))
        ++j;
      t.kind = Tok::Ident;
      t.text = src.substr(i, j - i);
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Tok::Number;
      t.text = src.substr(i, j - i);
      if (t.text.size() > 18) throw SyntaxError("numeral too large", line, col);
      advance(j - i);
    } else {
      const std::string two = src.substr(i, 2);
      if (two == "<-" || two == "->") {
        t.text = two;
      } else if (std::string("(){},;:+*|=").find(c) != std::string::npos) {
        t.text = std::string(1, c);
      } else {
        throw SyntaxError(std::string("unexpected character '") + c + "'", line, col);
      }
      t.kind = Tok::Sym;
      advance(t.text.size());
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, std::map<std::string, TypePtr> types)
      : toks_(std::move(toks)), types_(std::move(types)) {}

  Program program() {
    Program p;
    for (;;) {
      if (is_kw("type")) {
        next();
        Token name = ident();
        expect("=");
        Token n = peek();
        if (n.kind != Tok::Number) fail("expected a type size", n);
        next();
        if (types_.count(name.text)) fail("type '" + name.text + "' declared twice", name);
        types_[name.text] = base_type(name.text, std::stoull(n.text));
        expect(";");
      } else if (is_kw("fun")) {
        next();
        FunDecl f;
        Token name = ident();
        f.name = name.text;
        f.line = name.line;
        for (const auto& g : p.funs)
          if (g.name == f.name) fail("function '" + f.name + "' declared twice", name);
        expect(":");
        f.dom = type();
        expect("->");
        f.cod = type();
        expect("=");
        expect("{");
        if (!is_sym("}")) {
          for (;;) {
            TermPtr a = expr();
            expect("->");
            TermPtr b = expr();
            f.entries.emplace_back(a, b);
            if (is_sym(",")) {
              next();
              continue;
            }
            break;
          }
        }
        expect("}");
        expect(";");
        p.funs.push_back(std::move(f));
      } else {
        break;
      }
    }
    p.main = expr();
    if (is_sym(";")) next();
    if (peek().kind != Tok::End) fail("trailing input", peek());
    p.types = types_;
    return p;
  }

  TermPtr whole_term() {
    TermPtr t = expr();
    if (peek().kind != Tok::End) fail("trailing input", peek());
    return t;
  }

  TypePtr whole_type() {
    TypePtr t = type();
    if (peek().kind != Tok::End) fail("trailing input", peek());
    return t;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  void next() {
    if (pos_ + 1 < toks_.size()) ++pos_;
  }
  [[noreturn]] void fail(const std::string& msg, const Token& t) const {
    throw SyntaxError(msg + (t.kind == Tok::End ? " at end of input" : " near '" + t.text + "'"), t.line, t.col);
  }
  bool is_sym(const std::string& s) const { return peek().kind == Tok::Sym && peek().text == s; }
  bool is_kw(const std::string& s) const { return peek().kind == Tok::Ident && peek().text == s; }
  void expect(const std::string& s) {
    if (!is_sym(s)) fail("expected '" + s + "'", peek());
    next();
  }
  void expect_kw(const std::string& s) {
    if (!is_kw(s)) fail("expected '" + s + "'", peek());
    next();
  }
  Token ident() {
    Token t = peek();
    if (t.kind != Tok::Ident || kKeywords.count(t.text)) fail("expected an identifier", t);
    next();
    return t;
  }

  TermPtr node(Term::Kind k, const Token& at) {
    auto t = std::make_shared<Term>();
    t->kind = k;
    t->line = at.line;
    t->col = at.col;
    return t;
  }

  // Sum of products; T binds tightest.
  TypePtr type() {
    TypePtr t = prod();
    while (is_sym("+")) {
      next();
      t = sum_type(t, prod());
    }
    return t;
  }
  TypePtr prod() {
    TypePtr t = type_atom();
    while (is_sym("*")) {
      next();
      t = prod_type(t, type_atom());
    }
    return t;
  }
  TypePtr type_atom() {
    Token t = peek();
    if (is_kw("T")) {
      next();
      return monad_type(type_atom());
    }
    if (is_sym("(")) {
      next();
      TypePtr r = type();
      expect(")");
      return r;
    }
    if (t.kind == Tok::Number) {
      next();
      const auto n = std::stoull(t.text);
      if (n == 1) return unit_type();
      if (n == 2) return bool_type();
      return base_type(t.text, n);
    }
    if (t.kind == Tok::Ident && !kKeywords.count(t.text)) {
      next();
      auto it = types_.find(t.text);
      if (it == types_.end()) fail("unknown type '" + t.text + "'", t);
      return it->second;
    }
    fail("expected a type", t);
  }

  TermPtr expr() {
    if (is_kw("do") || is_kw("if") || is_kw("case") || is_kw("iter")) return keyword_expr();
    TermPtr t = unary();
    while (is_sym("+")) {
      Token at = peek();
      next();
      TermPtr r = node(Term::Kind::Choice, at);
      r->kids = {t, (is_kw("do") || is_kw("if") || is_kw("case") || is_kw("iter")) ? keyword_expr() : unary()};
      t = r;
    }
    return t;
  }

  TermPtr keyword_expr() {
    Token at = peek();
    if (is_kw("do")) {
      next();
      TermPtr t = node(Term::Kind::Bind, at);
      if (peek().kind == Tok::Ident && peek(1).kind == Tok::Sym && peek(1).text == "<-") {
        t->name = ident().text;
        next();
      } else {
        t->name = "_";
      }
      TermPtr p = expr();
      expect(";");
      t->kids = {p, expr()};
      return t;
    }
    if (is_kw("if")) {
      next();
      TermPtr t = node(Term::Kind::If, at);
      TermPtr b = expr();
      expect_kw("then");
      TermPtr p = expr();
      expect_kw("else");
      t->kids = {b, p, expr()};
      return t;
    }
    if (is_kw("case")) {
      next();
      TermPtr t = node(Term::Kind::Case, at);
      TermPtr e = expr();
      expect_kw("of");
      expect_kw("inl");
      t->name = ident().text;
      expect("->");
      ++case_head_;
      TermPtr s = expr();
      --case_head_;
      expect("|");
      expect_kw("inr");
      t->name2 = ident().text;
      expect("->");
      const std::size_t saved = case_head_;
      case_head_ = 0;
      TermPtr r = expr();
      case_head_ = saved;
      t->kids = {e, s, r};
      if (case_head_ > 0) fail("a case inside the first branch of a case must be parenthesized", at);
      return t;
    }
    next();  // iter
    TermPtr t = node(Term::Kind::Iter, at);
    t->name = ident().text;
    expect("<-");
    TermPtr p = expr();
    expect("{");
    const std::size_t saved = case_head_;
    case_head_ = 0;
    TermPtr q = expr();
    case_head_ = saved;
    expect("}");
    t->kids = {p, q};
    return t;
  }

  TermPtr unary() {
    Token at = peek();
    static const std::map<std::string, Term::Kind> prefix = {{"ret", Term::Kind::Ret},
                                                             {"fst", Term::Kind::Fst},
                                                             {"snd", Term::Kind::Snd},
                                                             {"inl", Term::Kind::Inl},
                                                             {"inr", Term::Kind::Inr},
                                                             {"test", Term::Kind::Test}};
    if (at.kind == Tok::Ident) {
      auto it = prefix.find(at.text);
      if (it != prefix.end()) {
        next();
        TermPtr t = node(it->second, at);
        t->kids = {unary()};
        return t;
      }
    }
    return atom();
  }

  TermPtr atom() {
    Token at = peek();
    if (at.kind == Tok::Number) {
      next();
      TermPtr t = node(Term::Kind::Num, at);
      t->num = std::stoull(at.text);
      return t;
    }
    if (is_sym("*")) {
      next();
      return node(Term::Kind::Star, at);
    }
    if (is_kw("bot")) {
      next();
      return node(Term::Kind::Bot, at);
    }
    if (is_sym("{")) {
      next();
      TermPtr t = node(Term::Kind::SetLit, at);
      const std::size_t saved = case_head_;
      case_head_ = 0;
      if (!is_sym("}")) {
        for (;;) {
          t->kids.push_back(expr());
          if (!is_sym(",")) break;
          next();
        }
      }
      case_head_ = saved;
      expect("}");
      return t;
    }
    if (is_sym("(")) {
      next();
      const std::size_t saved = case_head_;
      case_head_ = 0;
      TermPtr e = expr();
      TermPtr out = e;
      if (is_sym(",")) {
        next();
        out = node(Term::Kind::Pair, at);
        out->kids = {e, expr()};
      } else if (is_sym(":")) {
        next();
        out = node(Term::Kind::Annot, at);
        out->kids = {e};
        out->annot = type();
      }
      case_head_ = saved;
      expect(")");
      return out;
    }
    if (at.kind == Tok::Ident && !kKeywords.count(at.text)) {
      next();
      if (is_sym("(")) {
        next();
        const std::size_t saved = case_head_;
        case_head_ = 0;
        TermPtr t = node(Term::Kind::Apply, at);
        t->name = at.text;
        t->kids = {expr()};
        case_head_ = saved;
        expect(")");
        return t;
      }
      TermPtr t = node(Term::Kind::Var, at);
      t->name = at.text;
      return t;
    }
    fail("expected a term", at);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::map<std::string, TypePtr> types_;
  std::size_t case_head_ = 0;
};

}  // namespace

TermPtr parse_term(const std::string& src, const std::map<std::string, TypePtr>& types) {
  return Parser(lex(src), types).whole_term();
}

TypePtr parse_type(const std::string& src, const std::map<std::string, TypePtr>& types) {
  return Parser(lex(src), types).whole_type();
}

Program parse_program(const std::string& src) { return Parser(lex(src), {}).program(); }

Program load_program(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_program(ss.str());
}

}  // namespace lawvere::ml
