#pragma once

#include <cstddef>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "egb/signature.hpp"

namespace egb {

/// Closed terms with join. Immutable, structurally shared, hashable.
class Term {
 public:
  enum class Kind { Gen, IdUnit, Id, Sym, Seq, Tensor, Ev, Lambda, Join };

  static Term gen(OpSymbol op);
  static Term id_unit();
  /// id([]) is IdUnit.
  static Term id(Word w);
  static Term sym(Word a, Word b);
  static Term seq(Term f, Term g);
  static Term tensor(Term f, Term g);
  static Term ev(Word arg, Word result);
  static Term lambda(Word ctx, Word bound, Word result, Term body);
  static Term join(Term f, Term g);

  Kind kind() const;
  const OpSymbol& op() const;  // Gen
  /// Id: w(0). Sym: w(0), w(1). Ev: arg, result. Lambda: ctx, bound, result.
  const Word& word(std::size_t i) const;
  const Term& lhs() const;   // Seq, Tensor, Join
  const Term& rhs() const;   // Seq, Tensor, Join
  const Term& body() const;  // Lambda

  std::size_t hash() const;
  /// Number of AST nodes.
  std::size_t size() const;

  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> n);
  std::shared_ptr<const Node> node_;
};

struct TermType {
  Word inputs;
  Word outputs;
  friend bool operator==(const TermType&, const TermType&) = default;
};

class TypeError : public std::runtime_error {
 public:
  TypeError(std::string path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Throws TypeError; the path names the offending subterm, e.g. "seq.rhs.body".
TermType type_of(const Term& t);

bool contains_join(const Term& t);

/// Text form accepted by the parser in text.hpp.
std::string to_string(const Term& t);
std::ostream& operator<<(std::ostream& os, const Term& t);

struct TermRule {
  std::string name;
  Term lhs;
  Term rhs;
};

/// Throws TypeError when the two sides differ in type.
void check_rule(const TermRule& r);

/// Join-free summands f1..fn with t = f1 + ... + fn, syntactic duplicates removed.
std::vector<Term> normal_form_sum(const Term& t);

/// Right-nested join of a nonempty list.
Term join_of(const std::vector<Term>& summands);

struct Presentations {
  std::vector<Term> terms;  // first entry is the input
  bool bound_exhausted = false;
};

/// Terms reachable from `t` by at most `depth` applications of the symmetric
/// monoidal axioms at any position, in either direction. Stops early once
/// `cap` terms are known, setting bound_exhausted.
Presentations smc_presentations(const Term& t, std::size_t depth, std::size_t cap = 20000);

/// One step of the axioms, at any position.
std::vector<Term> smc_neighbours(const Term& t);

struct TermRewriteResult {
  std::vector<Term> terms;
  bool bound_exhausted = false;
};

/// All g with f rewriting to g by one application of `rule` modulo the
/// symmetric monoidal axioms (bounded by depth_bound) and join reordering.
TermRewriteResult term_rewrite_step(const Term& f, const TermRule& rule, std::size_t depth_bound,
                                    std::size_t cap = 20000);

}  // namespace egb

template <>
struct std::hash<egb::Term> {
  std::size_t operator()(const egb::Term& t) const noexcept { return t.hash(); }
};
