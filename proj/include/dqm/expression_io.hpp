#pragma once

#include "dqm/algebra.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace dqm {

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, std::size_t pos)
      : std::runtime_error(what + " at offset " + std::to_string(pos)), offset(pos) {}
  std::size_t offset;
};

// Grammar:
//   expr    := term (('+' | '-') term)*
//   term    := factor (('*' | '/') factor)*
//   factor  := ('-' | '+') factor | primary ('^' ['-'] int)?
//   primary := number | number 'i' | 'i' | 'q' | generator | '(' expr ')'
//   generator := ('alpha' | 'gamma') ['*'] ['@' label]
// A '*' right after a generator name is a star unless an operand follows it
// directly. Untagged generators belong to `default_copy`. Division and
// negative powers are allowed for scalar monomials only.
AlgebraExpression parse_expression(std::string_view text, const std::string& default_copy = kSpin);

std::string to_string(const AlgebraExpression& e);

}  // namespace dqm
