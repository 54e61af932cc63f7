#pragma once

#include <random>
#include <string>
#include <vector>

#include "egb/interp.hpp"
#include "egb/rewrite.hpp"
#include "egb/text.hpp"

namespace egb::testing {

std::string fixture_path(const std::string& name);
Document fixture_document(const std::string& name, const Signature& base = {});
ExtendedCospan fixture_term(const std::string& file, const std::string& term = "main");

/// The Fig. 2 rule set interpreted against the fig2 signature.
std::vector<RewriteRule> fig2_rules();

/// type A; f : A -> A; m : A, A -> A; c : -> A.
Signature population_signature();

/// Every well-typed join-free term over the population signature built from
/// f, m, c, id[A], sym[A|A] with `;` and `*`, with at most `max_nodes` AST
/// nodes, in a fixed order.
std::vector<Term> enumerate_terms(const Signature& sig, std::size_t max_nodes);

/// Random well-typed term with 1..max_joins joins and at most `max_nodes`
/// AST nodes.
Term random_sum_term(std::mt19937& rng, const Signature& sig, std::size_t max_nodes, std::size_t max_joins);

std::size_t count_joins(const Term& t);

}  // namespace egb::testing
