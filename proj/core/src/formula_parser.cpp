#include <cctype>
#include <set>
#include <unordered_map>

#include "phfl/error.hpp"
#include "phfl/syntax.hpp"

namespace phfl {

namespace {

enum class Tok { Ident, Int, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

std::vector<Token> lex(std::string_view src) {
  static const char* kSymbols[] = {"<=>", "=>", "->", "\\/", "/\\", "(", ")", "<", ">", "[", "]", "{",
                                   "}",   "@",  ":",  ".",   ",",   "\\", "~", "+", "-"};
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
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
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    int l = line, cl = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\''))
        ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), l, cl});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Int, std::string(src.substr(i, j - i)), l, cl});
      advance(j - i);
      continue;
    }
    bool matched = false;
    for (const char* s : kSymbols) {
      std::string_view sv(s);
      if (src.substr(i, sv.size()) == sv) {
        out.push_back({Tok::Sym, std::string(sv), l, cl});
        advance(sv.size());
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError(std::string("unexpected character '") + c + "'", l, cl);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

const std::set<std::string> kKeywords = {"mu", "nu", "tt", "ff", "lt", "Prop"};

class Parser {
 public:
  Parser(std::string_view src, int d, const ParseOptions& opts) : toks_(lex(src)), d_(d), opts_(opts) {
    for (const auto& name : opts.free_vars) {
      free_.insert(name);
      used_.insert(intern(name));
    }
  }

  Formula formula_eof() {
    Formula f = formula();
    expect_end();
    return f;
  }

  Type type_eof() {
    Type t = type();
    expect_end();
    return t;
  }

 private:
  struct Binding {
    std::string surface;
    Sym sym;
    bool fix;
  };

  const Token& peek(int k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool is(const char* s, int k = 0) const { return peek(k).kind == Tok::Sym && peek(k).text == s; }
  bool is_kw(const char* s) const { return peek().kind == Tok::Ident && peek().text == s; }
  Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& msg, const Token& t) const { throw ParseError(msg, t.line, t.col); }

  void expect(const char* s) {
    if (!is(s)) fail(std::string("expected '") + s + "'" + found(), peek());
    take();
  }
  void expect_end() {
    if (peek().kind != Tok::End) fail("unexpected trailing input" + found(), peek());
  }
  std::string found() const {
    if (peek().kind == Tok::End) return ", found end of input";
    return ", found '" + peek().text + "'";
  }

  std::string ident() {
    if (peek().kind != Tok::Ident) fail("expected identifier" + found(), peek());
    return take().text;
  }

  int integer() {
    if (peek().kind != Tok::Int) fail("expected index" + found(), peek());
    Token t = take();
    if (t.text.size() > 6) fail("index too large", t);
    return std::stoi(t.text);
  }

  int checked_index() {
    Token t = peek();
    int i = integer();
    if (i < 1 || i > d_) fail("index out of range: " + std::to_string(i) + " exceeds arity " + std::to_string(d_), t);
    return i;
  }

  // type := arg ('->' type)?   arg := [variance] Prop | '(' [variance] type ')'
  Type type() {
    Token at = peek();
    bool had = false;
    Variance v = variance_opt(had);
    Type t;
    if (is("(")) {
      take();
      bool inner_had = false;
      Variance iv = variance_opt(inner_had);
      if (inner_had && had) fail("two variance markers", at);
      if (inner_had) {
        v = iv;
        had = true;
      }
      t = type();
      expect(")");
    } else if (is_kw("Prop")) {
      take();
      t = ground_type();
    } else {
      fail("expected type" + found(), peek());
    }
    if (is("->")) {
      take();
      return arrow(t, v, type());
    }
    if (had) fail("variance marker on a type that is not an argument", at);
    return t;
  }

  Variance variance_opt(bool& had) {
    had = true;
    if (is("+")) {
      take();
      return Variance::Plus;
    }
    if (is("-")) {
      take();
      return Variance::Minus;
    }
    if (peek().kind == Tok::Int && peek().text == "0") {
      take();
      return Variance::Zero;
    }
    had = false;
    return Variance::Plus;
  }

  Formula formula() {
    Formula l = imp();
    while (is("<=>")) {
      take();
      l = iff(l, imp());
    }
    return l;
  }

  Formula imp() {
    Formula l = disj();
    if (is("=>")) {
      take();
      return implies(l, imp());
    }
    return l;
  }

  Formula disj() {
    Formula l = conj();
    while (is("\\/")) {
      take();
      l = lor(l, conj());
    }
    return l;
  }

  Formula conj() {
    Formula l = unary();
    while (is("/\\")) {
      take();
      l = land(l, unary());
    }
    return l;
  }

  Formula unary() {
    if (is("~")) {
      take();
      return neg(unary());
    }
    if (is("<") || is("[")) {
      bool dia = is("<");
      take();
      std::string act = ident();
      expect("@");
      int i = checked_index();
      expect(dia ? ">" : "]");
      Formula body = unary();
      return dia ? diamond(act, i, body) : box(act, i, body);
    }
    if (is("{")) return substitution();
    if (is("\\")) return lambda_binder();
    if (is_kw("mu") || is_kw("nu")) return fix_binder();
    return application();
  }

  Formula substitution() {
    Token open = take();
    std::vector<std::pair<int, int>> pairs;
    if (!is("}")) {
      while (true) {
        int i = checked_index();
        expect("->");
        int j = checked_index();
        pairs.emplace_back(i, j);
        if (is(",")) {
          take();
          continue;
        }
        break;
      }
    }
    expect("}");
    IndexMap m;
    try {
      m = IndexMap::from_pairs(d_, pairs);
    } catch (const ValidationError& e) {
      fail(e.what(), open);
    }
    return subst(std::move(m), unary());
  }

  Sym bind_name(const std::string& surface) {
    Sym s = intern(surface);
    if (opts_.rename_apart && used_.count(s)) s = fresh_sym(surface + "_");
    used_.insert(s);
    return s;
  }

  Formula lambda_binder() {
    take();
    expect("(");
    std::string x = ident();
    if (kKeywords.count(x)) fail("keyword used as variable", peek());
    expect(":");
    bool had = false;
    Variance v = variance_opt(had);
    Type t = type();
    expect(")");
    expect(".");
    Sym s = bind_name(x);
    scope_.push_back({x, s, false});
    Formula body = formula();
    scope_.pop_back();
    return lambda(s, v, t, body);
  }

  Formula fix_binder() {
    bool is_mu = take().text == "mu";
    expect("(");
    std::string x = ident();
    if (kKeywords.count(x)) fail("keyword used as variable", peek());
    expect(":");
    Type t = type();
    expect(")");
    expect(".");
    Sym s = bind_name(x);
    scope_.push_back({x, s, true});
    Formula body = formula();
    scope_.pop_back();
    return is_mu ? mu(s, t, body) : nu(s, t, body);
  }

  bool starts_atom() const {
    if (is("(")) return true;
    if (peek().kind != Tok::Ident) return false;
    const auto& t = peek().text;
    return t != "mu" && t != "nu";
  }

  Formula application() {
    Formula f = atom();
    while (starts_atom()) f = app(f, atom());
    return f;
  }

  Formula atom() {
    if (is("(")) {
      take();
      Formula f = formula();
      expect(")");
      return f;
    }
    Token t = peek();
    std::string name = ident();
    if (name == "tt") return tt();
    if (name == "ff") return ff();
    if (name == "lt") {
      if (d_ < 2) fail("index out of range: lt needs arity at least 2", t);
      return lt_atom();
    }
    if (kKeywords.count(name)) fail("unexpected keyword '" + name + "'", t);
    if (is("@")) {
      take();
      return prop(name, checked_index());
    }
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->surface == name) return it->fix ? fixvar(it->sym) : lamvar(it->sym);
    if (free_.count(name)) return lamvar(intern(name));
    fail("unbound variable '" + name + "'", t);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int d_;
  const ParseOptions& opts_;
  std::vector<Binding> scope_;
  std::set<std::string> free_;
  std::set<Sym> used_;
};

}  // namespace

Formula parse_formula(std::string_view text, int d, const ParseOptions& opts) {
  if (d < 1) throw ValidationError("arity must be at least 1");
  Parser p(text, d, opts);
  return p.formula_eof();
}

Type parse_type(std::string_view text) {
  ParseOptions opts;
  Parser p(text, 1, opts);
  return p.type_eof();
}

}  // namespace phfl
