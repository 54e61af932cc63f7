#include "egb/signature.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace egb {

struct ObjectExpr::Node {
  Kind kind = Kind::Unit;
  std::string name;
  std::vector<ObjectExpr> kids;
  std::size_t hash = 0;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

ObjectExpr::ObjectExpr() : ObjectExpr(unit()) {}

ObjectExpr::ObjectExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

ObjectExpr ObjectExpr::unit() {
  static const std::shared_ptr<const Node> u = [] {
    auto n = std::make_shared<Node>();
    n->hash = 0x51ed27;
    return n;
  }();
  return ObjectExpr(u);
}

ObjectExpr ObjectExpr::base(std::string name) {
  if (name.empty()) throw std::invalid_argument("base type name must be nonempty");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Base;
  n->hash = mix(1, std::hash<std::string>{}(name));
  n->name = std::move(name);
  return ObjectExpr(std::move(n));
}

ObjectExpr ObjectExpr::tensor(const std::vector<ObjectExpr>& parts) {
  std::vector<ObjectExpr> flat;
  for (const auto& p : parts) {
    switch (p.kind()) {
      case Kind::Unit:
        break;
      case Kind::Tensor:
        flat.insert(flat.end(), p.children().begin(), p.children().end());
        break;
      default:
        flat.push_back(p);
    }
  }
  if (flat.empty()) return unit();
  if (flat.size() == 1) return flat.front();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Tensor;
  std::size_t h = 2;
  for (const auto& c : flat) h = mix(h, c.hash());
  n->hash = h;
  n->kids = std::move(flat);
  return ObjectExpr(std::move(n));
}

ObjectExpr ObjectExpr::arrow(ObjectExpr from, ObjectExpr to) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Arrow;
  n->hash = mix(mix(3, from.hash()), to.hash());
  n->kids = {std::move(from), std::move(to)};
  return ObjectExpr(std::move(n));
}

ObjectExpr::Kind ObjectExpr::kind() const { return node_->kind; }
const std::string& ObjectExpr::name() const { return node_->name; }
const std::vector<ObjectExpr>& ObjectExpr::children() const { return node_->kids; }
const ObjectExpr& ObjectExpr::from() const { return node_->kids.at(0); }
const ObjectExpr& ObjectExpr::to() const { return node_->kids.at(1); }
std::size_t ObjectExpr::hash() const { return node_->hash; }

bool operator==(const ObjectExpr& a, const ObjectExpr& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind()) return false;
  return a.name() == b.name() && a.children() == b.children();
}

std::strong_ordering operator<=>(const ObjectExpr& a, const ObjectExpr& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = static_cast<int>(a.kind()) <=> static_cast<int>(b.kind()); c != 0) return c;
  if (auto c = a.name() <=> b.name(); c != 0) return c;
  const auto& x = a.children();
  const auto& y = b.children();
  return std::lexicographical_compare_three_way(x.begin(), x.end(), y.begin(), y.end());
}

namespace {

void print(std::string& out, const ObjectExpr& e, bool atom) {
  switch (e.kind()) {
    case ObjectExpr::Kind::Unit:
      out += "I";
      return;
    case ObjectExpr::Kind::Base:
      out += e.name();
      return;
    case ObjectExpr::Kind::Tensor: {
      if (atom) out += "(";
      bool first = true;
      for (const auto& c : e.children()) {
        if (!first) out += " * ";
        first = false;
        print(out, c, true);
      }
      if (atom) out += ")";
      return;
    }
    case ObjectExpr::Kind::Arrow:
      if (atom) out += "(";
      print(out, e.from(), e.from().kind() == ObjectExpr::Kind::Arrow);
      out += " -o ";
      print(out, e.to(), false);
      if (atom) out += ")";
      return;
  }
}

}  // namespace

std::string to_string(const ObjectExpr& e) {
  std::string s;
  print(s, e, false);
  return s;
}

std::ostream& operator<<(std::ostream& os, const ObjectExpr& e) { return os << to_string(e); }

VertexType::VertexType(ObjectExpr e) : expr_(std::move(e)) {
  auto k = expr_.kind();
  if (k != ObjectExpr::Kind::Base && k != ObjectExpr::Kind::Arrow)
    throw std::invalid_argument("vertex label must be a base type or an arrow, got " + to_string(expr_));
}

std::string to_string(const VertexType& t) {
  std::string s;
  print(s, t.expr(), false);
  return s;
}

std::string to_string(const Word& w) {
  std::string s = "[";
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ", ";
    s += to_string(w[i]);
  }
  return s + "]";
}

std::ostream& operator<<(std::ostream& os, const VertexType& t) { return os << to_string(t); }

Word concat(const Word& a, const Word& b) {
  Word r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

Word word_of(const ObjectExpr& e) {
  switch (e.kind()) {
    case ObjectExpr::Kind::Unit:
      return {};
    case ObjectExpr::Kind::Base:
    case ObjectExpr::Kind::Arrow:
      return {VertexType(e)};
    case ObjectExpr::Kind::Tensor: {
      Word w;
      for (const auto& c : e.children()) {
        auto cw = word_of(c);
        w.insert(w.end(), cw.begin(), cw.end());
      }
      return w;
    }
  }
  return {};
}

ObjectExpr fold_word(const Word& w) {
  std::vector<ObjectExpr> parts;
  parts.reserve(w.size());
  for (const auto& t : w) parts.push_back(t.expr());
  return ObjectExpr::tensor(parts);
}

OpSymbol application_symbol(const Word& arg, const Word& result) {
  OpSymbol op;
  op.name = "@[" + to_string(fold_word(arg)) + "|" + to_string(fold_word(result)) + "]";
  op.inputs.push_back(VertexType::arrow(fold_word(arg), fold_word(result)));
  op.inputs.insert(op.inputs.end(), arg.begin(), arg.end());
  op.outputs = result;
  return op;
}

bool is_application_symbol(const OpSymbol& op) { return !op.name.empty() && op.name.front() == '@'; }

void Signature::add_base_type(const std::string& name) { base_types_.push_back(name); }

void Signature::add_op(OpSymbol op) { ops_.push_back(std::move(op)); }

bool Signature::has_base_type(const std::string& name) const {
  return std::find(base_types_.begin(), base_types_.end(), name) != base_types_.end();
}

const OpSymbol* Signature::find_op(const std::string& name) const {
  for (const auto& op : ops_)
    if (op.name == name) return &op;
  return nullptr;
}

void collect_base_names(const ObjectExpr& e, std::vector<std::string>& out) {
  if (e.kind() == ObjectExpr::Kind::Base) {
    out.push_back(e.name());
    return;
  }
  for (const auto& c : e.children()) collect_base_names(c, out);
}

std::vector<SignatureViolation> validate_signature(const Signature& sig) {
  std::vector<SignatureViolation> out;
  std::set<std::string> seen;
  for (const auto& b : sig.base_types()) {
    if (b.empty()) out.push_back({"type", "empty base type name"});
    if (!seen.insert(b).second) out.push_back({"type " + b, "duplicate base type name"});
  }
  std::set<std::string> ops;
  for (const auto& op : sig.ops()) {
    if (!ops.insert(op.name).second) out.push_back({"op " + op.name, "duplicate op name"});
    if (is_application_symbol(op)) out.push_back({"op " + op.name, "names starting with '@' are reserved"});
    std::vector<std::string> names;
    for (const auto& t : op.inputs) collect_base_names(t.expr(), names);
    for (const auto& t : op.outputs) collect_base_names(t.expr(), names);
    for (const auto& n : names)
      if (!seen.count(n)) out.push_back({"op " + op.name, "unregistered base type " + n});
  }
  return out;
}

}  // namespace egb
