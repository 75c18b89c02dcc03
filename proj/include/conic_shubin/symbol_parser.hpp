#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "conic_shubin/formal_symbol.hpp"

namespace conic_shubin {

/// Syntax error with a 1-based source position.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& message, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

/// Parses expressions such as "sigma^2 - i*(d-2)*sigma + zeta^2 + tau^4".
///
/// Atoms: integers and finite decimals, i, d (= 2), zeta, sigma, tau,
/// x^-m (m >= 0) and exp(i*q*z) with integer q. Operators + - * / ^ and
/// parentheses; '/' only by a constant; exponents are nonnegative integers
/// except on x. Products are commutative products of symbols.
FormalSymbol parse_symbol_expr(std::string_view text, const AnisotropyVector& l);

/// Inverse of parse_symbol_expr up to term order and formatting.
std::string to_expression(const FormalSymbol& a);

}  // namespace conic_shubin
