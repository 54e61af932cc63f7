#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace egb {

/// Object expressions of a closed monoidal signature: the unit, base types,
/// tensor words and the internal hom `A -o B`.
///
/// Values are immutable and share structure. Tensor nodes are kept in strict
/// normal form: flat, never nested, never containing the unit, and always of
/// length >= 2. Use the factory functions; they normalise.
class ObjectExpr {
 public:
  enum class Kind { Unit, Base, Tensor, Arrow };

  ObjectExpr();  // the unit

  static ObjectExpr unit();
  static ObjectExpr base(std::string name);
  static ObjectExpr tensor(const std::vector<ObjectExpr>& parts);
  static ObjectExpr arrow(ObjectExpr from, ObjectExpr to);

  Kind kind() const;
  const std::string& name() const;                 // Base only
  const std::vector<ObjectExpr>& children() const; // Tensor parts, or {from, to} for Arrow
  const ObjectExpr& from() const;                  // Arrow only
  const ObjectExpr& to() const;                    // Arrow only

  std::size_t hash() const;

  friend bool operator==(const ObjectExpr& a, const ObjectExpr& b);
  friend std::strong_ordering operator<=>(const ObjectExpr& a, const ObjectExpr& b);

 private:
  struct Node;
  explicit ObjectExpr(std::shared_ptr<const Node> n);
  std::shared_ptr<const Node> node_;
};

/// Text form: `I`, `A`, `A * B`, `A -o B`, parenthesised where needed.
std::string to_string(const ObjectExpr& e);
std::ostream& operator<<(std::ostream& os, const ObjectExpr& e);

/// A legal vertex label: a base type or an arrow. Never the unit and never a
/// tensor at the top level.
class VertexType {
 public:
  /// Throws std::invalid_argument for Unit or Tensor.
  explicit VertexType(ObjectExpr e);

  static VertexType base(std::string name) { return VertexType(ObjectExpr::base(std::move(name))); }
  static VertexType arrow(ObjectExpr from, ObjectExpr to) {
    return VertexType(ObjectExpr::arrow(std::move(from), std::move(to)));
  }

  const ObjectExpr& expr() const { return expr_; }
  bool is_arrow() const { return expr_.kind() == ObjectExpr::Kind::Arrow; }

  friend bool operator==(const VertexType&, const VertexType&) = default;
  friend auto operator<=>(const VertexType&, const VertexType&) = default;

 private:
  ObjectExpr expr_;
};

using Word = std::vector<VertexType>;

std::string to_string(const VertexType& t);
std::string to_string(const Word& w);
std::ostream& operator<<(std::ostream& os, const VertexType& t);

Word concat(const Word& a, const Word& b);

/// Flattens an object expression into the word of vertex labels it denotes.
Word word_of(const ObjectExpr& e);

/// Inverse direction: [] is the unit, a singleton is its entry, otherwise a tensor.
ObjectExpr fold_word(const Word& w);

/// A typed generator.
struct OpSymbol {
  std::string name;
  Word inputs;
  Word outputs;

  friend bool operator==(const OpSymbol&, const OpSymbol&) = default;
  friend auto operator<=>(const OpSymbol&, const OpSymbol&) = default;
};

/// The reserved application symbol `@[A|B]` with typing ([A -o B] ++ A, B).
OpSymbol application_symbol(const Word& arg, const Word& result);
bool is_application_symbol(const OpSymbol& op);

struct SignatureViolation {
  std::string element;
  std::string message;
};

class Signature {
 public:
  void add_base_type(const std::string& name);
  void add_op(OpSymbol op);

  bool has_base_type(const std::string& name) const;
  const OpSymbol* find_op(const std::string& name) const;

  const std::vector<std::string>& base_types() const { return base_types_; }
  const std::vector<OpSymbol>& ops() const { return ops_; }

 private:
  std::vector<std::string> base_types_;
  std::vector<OpSymbol> ops_;
};

/// Reports duplicate names and references to unregistered base types. Empty
/// result means the signature is well formed.
std::vector<SignatureViolation> validate_signature(const Signature& sig);

/// Base type names that occur anywhere inside `e`.
void collect_base_names(const ObjectExpr& e, std::vector<std::string>& out);

}  // namespace egb

template <>
struct std::hash<egb::ObjectExpr> {
  std::size_t operator()(const egb::ObjectExpr& e) const noexcept { return e.hash(); }
};
