#pragma once

#include <string>

#include "qsym/symbol.hpp"

namespace qsym {

/// Parses the printed forms of scalars, fields and symbols.
///
///   expr   := term (('+'|'-') term)*
///   term   := unary (('*'|'/') unary)*      division only by nonzero scalars
///   unary  := '-' unary | power
///   power  := atom ('^' integer)?
///   atom   := integer | 'q' | 'z' | 'T' | 'D' | coord | '(' expr ')'
///           | 'tau^' integer '(' expr ')' | 'E(' expr ')' | 'p+(' expr ')' | 'p-(' expr ')' | 'p0(' expr ')'
///   coord  := letter index                  e.g. t2, u0, t-1, x_3
///
/// Products are operator products, so "T^1*z" is q z T. The first operator
/// letter fixes the basis (else `basis`); the other letter is rewritten in
/// it. A D^-k to the left of a function expands as a series cut at `floor`.
/// Throws ParseError.
Symbol parse_symbol(const std::string& text, Basis basis = Basis::T, int floor = -8);
/// A field (order-0 symbol).
LaurentField parse_field(const std::string& text);
/// A scalar in Q(q).
QScalar parse_scalar(const std::string& text);

}  // namespace qsym
