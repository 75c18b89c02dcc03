#include "conic_shubin/symbol_parser.hpp"

#include <cctype>
#include <sstream>
#include <vector>

namespace conic_shubin {

ParseError::ParseError(const std::string& message, int line, int column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    const int l0 = line, c0 = col;
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t j = i;
      while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '.')) ++j;
      out.push_back({Tok::Number, std::string(s.substr(i, j - i)), l0, c0});
      advance(j - i);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Tok::Ident, std::string(s.substr(i, j - i)), l0, c0});
      advance(j - i);
      continue;
    }
    Tok k;
    switch (c) {
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '*': k = Tok::Star; break;
      case '/': k = Tok::Slash; break;
      case '^': k = Tok::Caret; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      default: throw ParseError(std::string("unexpected character '") + c + "'", l0, c0);
    }
    out.push_back({k, std::string(1, c), l0, c0});
    advance(1);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

class Parser {
public:
  Parser(std::string_view text, const AnisotropyVector& l) : toks_(tokenize(text)), l_(l) {}

  FormalSymbol parse() {
    FormalSymbol r = expr();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return r;
  }

private:
  const Token& peek() const { return toks_[pos_]; }
  Token take() { return toks_[pos_++]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] void fail(const std::string& msg) const { fail_at(msg, peek()); }
  [[noreturn]] static void fail_at(const std::string& msg, const Token& t) { throw ParseError(msg, t.line, t.col); }
  void expect(Tok k, const char* what) {
    if (!accept(k)) fail(std::string("expected ") + what);
  }

  FormalSymbol constant(const ComplexRational& c) const { return FormalSymbol::constant(l_, CoeffElement(c)); }

  static bool constant_value(const FormalSymbol& a, ComplexRational& out) {
    if (a.is_zero()) {
      out = ComplexRational();
      return true;
    }
    if (a.terms().size() != 1) return false;
    const auto& [e, c] = *a.terms().begin();
    if (e.alpha != 0 || e.j != 0 || e.k != 0 || !c.is_constant()) return false;
    out = c.coefficient(0, 0);
    return true;
  }

  FormalSymbol expr() {
    FormalSymbol r = term();
    for (;;) {
      if (accept(Tok::Plus)) {
        r += term();
      } else if (accept(Tok::Minus)) {
        r -= term();
      } else {
        return r;
      }
    }
  }

  FormalSymbol term() {
    FormalSymbol r = unary();
    for (;;) {
      if (accept(Tok::Star)) {
        r = pointwise_product(r, unary());
      } else if (peek().kind == Tok::Slash) {
        const Token slash = take();
        FormalSymbol d = unary();
        ComplexRational c;
        if (!constant_value(d, c)) fail_at("division only by a constant", slash);
        if (c.is_zero()) fail_at("division by zero", slash);
        r *= ComplexRational(1) / c;
      } else {
        return r;
      }
    }
  }

  FormalSymbol unary() {
    if (accept(Tok::Minus)) return unary() * ComplexRational(-1);
    if (accept(Tok::Plus)) return unary();
    return power();
  }

  // Exponent after '^': optional sign, integer, optionally parenthesised.
  long exponent() {
    const Token start = peek();
    bool paren = accept(Tok::LParen);
    bool neg = false;
    if (accept(Tok::Minus)) neg = true;
    else accept(Tok::Plus);
    const Token t = peek();
    if (t.kind != Tok::Number) fail_at("exponent must be an integer", t);
    if (t.text.find('.') != std::string::npos) fail_at("non-integer exponent '" + t.text + "'", t);
    ++pos_;
    if (paren) expect(Tok::RParen, "')'");
    long v;
    try {
      v = std::stol(t.text);
    } catch (const std::exception&) {
      fail_at("exponent out of range", start);
    }
    return neg ? -v : v;
  }

  FormalSymbol power() {
    const Token base_tok = peek();
    if (base_tok.kind == Tok::Ident && base_tok.text == "x") {
      ++pos_;
      if (!accept(Tok::Caret))
        fail_at("positive power of x in a coefficient; write it as tau", base_tok);
      const long e = exponent();
      if (e > 0) fail_at("positive power of x in a coefficient; write it as tau", base_tok);
      return FormalSymbol::constant(l_, CoeffElement::monomial(static_cast<int>(-e), 0));
    }
    FormalSymbol b = primary();
    if (peek().kind == Tok::Caret) {
      const Token caret = take();
      const long e = exponent();
      if (e < 0) fail_at("negative exponent is only allowed on x", caret);
      FormalSymbol r = constant(ComplexRational(1));
      for (long n = 0; n < e; ++n) r = pointwise_product(r, b);
      return r;
    }
    return b;
  }

  FormalSymbol primary() {
    const Token t = peek();
    switch (t.kind) {
      case Tok::Number: {
        ++pos_;
        try {
          return constant(ComplexRational(parse_rational(t.text)));
        } catch (const std::invalid_argument&) {
          fail_at("malformed number '" + t.text + "'", t);
        }
      }
      case Tok::LParen: {
        ++pos_;
        FormalSymbol r = expr();
        expect(Tok::RParen, "')'");
        return r;
      }
      case Tok::Ident: {
        ++pos_;
        if (t.text == "i") return constant(ComplexRational::i());
        if (t.text == "d") return constant(ComplexRational(2));
        if (t.text == "zeta") return FormalSymbol::zeta(l_);
        if (t.text == "sigma") return FormalSymbol::sigma(l_);
        if (t.text == "tau") return FormalSymbol::tau(l_);
        if (t.text == "exp") return exponential();
        if (t.text == "z") fail_at("z may appear only inside exp(i*q*z)", t);
        fail_at("unknown identifier '" + t.text + "'", t);
      }
      default:
        fail_at(t.kind == Tok::End ? "unexpected end of input" : "unexpected '" + t.text + "'", t);
    }
  }

  // exp( factor * factor * ... ) with factors drawn from i, z, integers and signs.
  FormalSymbol exponential() {
    expect(Tok::LParen, "'(' after exp");
    int n_i = 0, n_z = 0;
    long q = 1;
    const Token start = peek();
    for (;;) {
      while (accept(Tok::Minus)) q = -q;
      const Token f = peek();
      if (f.kind == Tok::Ident && f.text == "i") {
        ++pos_;
        ++n_i;
      } else if (f.kind == Tok::Ident && f.text == "z") {
        ++pos_;
        ++n_z;
      } else if (f.kind == Tok::Number) {
        if (f.text.find('.') != std::string::npos) fail_at("angular mode must be an integer", f);
        ++pos_;
        q *= std::stol(f.text);
      } else if (f.kind == Tok::LParen) {
        ++pos_;
        bool neg = false;
        while (accept(Tok::Minus)) neg = !neg;
        const Token g = peek();
        if (g.kind != Tok::Number || g.text.find('.') != std::string::npos)
          fail_at("angular mode must be an integer", g);
        ++pos_;
        q *= neg ? -std::stol(g.text) : std::stol(g.text);
        expect(Tok::RParen, "')'");
      } else {
        fail_at("exp argument must have the form i*q*z", f);
      }
      if (!accept(Tok::Star)) break;
    }
    if (n_i != 1 || n_z != 1) fail_at("exp argument must have the form i*q*z", start);
    expect(Tok::RParen, "')'");
    return FormalSymbol::constant(l_, CoeffElement::monomial(0, static_cast<int>(q)));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  AnisotropyVector l_;
};

std::string rational_text(const Rational& r) {
  std::string s = to_string(r);
  return s.find('/') != std::string::npos ? "(" + s + ")" : s;
}

std::string complex_text(const ComplexRational& c) {
  if (c.im == 0) return rational_text(c.re);
  if (c.re == 0) return rational_text(c.im) + "*i";
  return "(" + to_string(c.re) + " + " + to_string(c.im) + "*i)";
}

}  // namespace

FormalSymbol parse_symbol_expr(std::string_view text, const AnisotropyVector& l) {
  return Parser(text, l).parse();
}

std::string to_expression(const FormalSymbol& a) {
  if (a.is_zero()) return "0";
  std::ostringstream os;
  bool first_term = true;
  for (const auto& [e, c] : a.terms()) {
    for (const auto& [key, cc] : c.terms()) {
      if (!first_term) os << " + ";
      first_term = false;
      os << complex_text(cc);
      if (key.first != 0) os << "*x^-" << key.first;
      if (key.second != 0) os << "*exp(i*(" << key.second << ")*z)";
      if (e.alpha) os << "*zeta^" << e.alpha;
      if (e.j) os << "*sigma^" << e.j;
      if (e.k) os << "*tau^" << e.k;
    }
  }
  return os.str();
}

}  // namespace conic_shubin
