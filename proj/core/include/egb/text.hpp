#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "egb/signature.hpp"
#include "egb/term.hpp"

namespace egb {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& message)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Contents of a `.sig`, `.term` or `.rules` file. Any file may mix
/// statements:
///
///   type A;
///   op mul : A, A -> A;
///   term t = (id[A] * two) ; mul;
///   rule shl: (id[N] * two) ; mul => (id[N] * one) ; shl;
///
/// A bare `<term>;` statement is recorded under the name "main".
struct Document {
  Signature signature;
  std::vector<std::pair<std::string, Term>> terms;
  std::vector<TermRule> rules;

  const Term* find_term(const std::string& name) const;
  const TermRule* find_rule(const std::string& name) const;
};

/// Declarations extend `base`; terms and rules are type checked.
Document parse_document(std::string_view text, Signature base = {});
Document load_document(const std::string& path, Signature base = {});

Term parse_term(std::string_view text, const Signature& sig);
ObjectExpr parse_object(std::string_view text, const Signature& sig);
Word parse_word(std::string_view text, const Signature& sig);

std::string read_file(const std::string& path);

}  // namespace egb
