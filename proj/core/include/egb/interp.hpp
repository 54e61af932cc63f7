#pragma once

#include <vector>

#include "egb/cospan.hpp"
#include "egb/rewrite.hpp"
#include "egb/term.hpp"

namespace egb {

/// The interpretation of a closed term as an extended cospan. Throws
/// TypeError for ill-typed terms and std::invalid_argument for an empty
/// lambda body or join operand, which have no carrier to nest.
ExtendedCospan interpret(const Term& t);

/// The lambda box over `body`, whose external inputs are typed `ctx ++ bound`
/// and external outputs `result`.
ExtendedCospan abstraction(const Word& ctx, const Word& bound, const Word& result, const ExtendedCospan& body);

/// The rule as a pair of interpretations, plus the reverse rule when
/// `both_directions` is set.
std::vector<RewriteRule> interpret_rule(const TermRule& r, bool both_directions = false);

}  // namespace egb
