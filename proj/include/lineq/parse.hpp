#pragma once

// Text syntax for terms, formulae and arrow terms, and the canonical printer.
//
//   term     ::= ident | '(' term '.' term ')'
//   formula  ::= 'T' | term ('<=' | '==') term | '(' formula '/\' formula ')'
//   arrow    ::= tensor ('o' arrow)?            -- right-associative
//   tensor   ::= primary ('/\' primary)?        -- binds tighter than 'o'
//   primary  ::= generator | '(' arrow ')'
//
// Conjunction and arrow tensor are not associative: `A /\ B /\ C` must be
// bracketed. Inside generator braces and at the top of parse_formula a
// single unbracketed conjunction is allowed.

#include <string>
#include <string_view>

#include "lineq/proofterm.hpp"

namespace lineq {

Term parse_term(std::string_view text);
Formula parse_formula(std::string_view text);
ArrowTerm parse_arrow(std::string_view text);

std::string print_arrow(const ArrowTerm& f);
inline std::string to_string(const ArrowTerm& f) { return print_arrow(f); }

} // namespace lineq
