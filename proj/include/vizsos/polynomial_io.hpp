#pragma once

#include <string>
#include <string_view>

#include "vizsos/polynomial.hpp"

namespace vizsos {

// Canonical text form.
//
//   poly     := "0" | term { (" + " | " - ") term }
//   term     := coeff | [coeff "*"] monomial
//   coeff    := rational | "(" quadratic ")"
//   rational := int ["/" int]                 e.g. -8/3
//   quadratic:= [rational ("+"|"-")] [rational "*"] "sqrt(" d ")"
//   monomial := factor {"*" factor},  factor := name ["^" exponent]
//
// Terms are printed in decreasing grevlex order; coefficient 1 is omitted,
// coefficient -1 prints as a leading "-"; negative rational coefficients of
// non-leading terms are joined with " - ". Irrational coefficients are always
// parenthesized and joined with " + ".
// Example: -8/3*x[0,1]*x[0,2] + 1

std::string to_string(const Monomial& m, const VarTable& vars);
std::string to_string(const RatPoly& p);
std::string to_string(const QuadPoly& p);

/// Parser accepts the canonical form plus free whitespace, leading "+",
/// repeated monomials and unnormalized rationals. Throws std::invalid_argument.
QuadPoly parse_quad_poly(std::string_view text, const VarTablePtr& vars);
/// Same grammar; rejects irrational coefficients.
RatPoly parse_rat_poly(std::string_view text, const VarTablePtr& vars);
Monomial parse_monomial(std::string_view text, const VarTable& vars);

}  // namespace vizsos
