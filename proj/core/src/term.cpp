#include "egb/term.hpp"

#include <algorithm>
#include <functional>
#include <unordered_set>

namespace egb {

struct Term::Node {
  Kind kind = Kind::IdUnit;
  OpSymbol op;
  std::vector<Word> words;
  std::vector<Term> kids;
  std::size_t hash = 0;
  std::size_t size = 1;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hash_word(std::size_t h, const Word& w) {
  h = mix(h, w.size());
  for (const auto& t : w) h = mix(h, t.expr().hash());
  return h;
}

}  // namespace

Term::Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

Term Term::gen(OpSymbol op) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Gen;
  n->hash = mix(mix(11, std::hash<std::string>{}(op.name)), hash_word(hash_word(0, op.inputs), op.outputs));
  n->op = std::move(op);
  return Term(std::move(n));
}

Term Term::id_unit() {
  static const std::shared_ptr<const Node> u = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::IdUnit;
    n->hash = 12;
    return n;
  }();
  return Term(u);
}

Term Term::id(Word w) {
  if (w.empty()) return id_unit();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Id;
  n->hash = hash_word(13, w);
  n->words = {std::move(w)};
  return Term(std::move(n));
}

Term Term::sym(Word a, Word b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Sym;
  n->hash = hash_word(hash_word(14, a), b);
  n->words = {std::move(a), std::move(b)};
  return Term(std::move(n));
}

Term Term::seq(Term f, Term g) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Seq;
  n->hash = mix(mix(15, f.hash()), g.hash());
  n->size = 1 + f.size() + g.size();
  n->kids = {std::move(f), std::move(g)};
  return Term(std::move(n));
}

Term Term::tensor(Term f, Term g) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Tensor;
  n->hash = mix(mix(16, f.hash()), g.hash());
  n->size = 1 + f.size() + g.size();
  n->kids = {std::move(f), std::move(g)};
  return Term(std::move(n));
}

Term Term::ev(Word arg, Word result) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Ev;
  n->hash = hash_word(hash_word(17, arg), result);
  n->words = {std::move(arg), std::move(result)};
  return Term(std::move(n));
}

Term Term::lambda(Word ctx, Word bound, Word result, Term body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Lambda;
  n->hash = mix(hash_word(hash_word(hash_word(18, ctx), bound), result), body.hash());
  n->size = 1 + body.size();
  n->words = {std::move(ctx), std::move(bound), std::move(result)};
  n->kids = {std::move(body)};
  return Term(std::move(n));
}

Term Term::join(Term f, Term g) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Join;
  n->hash = mix(mix(19, f.hash()), g.hash());
  n->size = 1 + f.size() + g.size();
  n->kids = {std::move(f), std::move(g)};
  return Term(std::move(n));
}

Term::Kind Term::kind() const { return node_->kind; }
const OpSymbol& Term::op() const { return node_->op; }
const Word& Term::word(std::size_t i) const { return node_->words.at(i); }
const Term& Term::lhs() const { return node_->kids.at(0); }
const Term& Term::rhs() const { return node_->kids.at(1); }
const Term& Term::body() const { return node_->kids.at(0); }
std::size_t Term::hash() const { return node_->hash; }
std::size_t Term::size() const { return node_->size; }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind() || a.size() != b.size()) return false;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.op == y.op && x.words == y.words && x.kids == y.kids;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (auto c = x.size <=> y.size; c != 0) return c;
  if (auto c = static_cast<int>(x.kind) <=> static_cast<int>(y.kind); c != 0) return c;
  if (auto c = x.op <=> y.op; c != 0) return c;
  if (auto c = std::lexicographical_compare_three_way(x.words.begin(), x.words.end(), y.words.begin(),
                                                      y.words.end());
      c != 0)
    return c;
  return std::lexicographical_compare_three_way(x.kids.begin(), x.kids.end(), y.kids.begin(), y.kids.end());
}

namespace {

std::string sub(const std::string& path, const char* step) { return path.empty() ? step : path + "." + step; }

TermType type_at(const Term& t, const std::string& path) {
  switch (t.kind()) {
    case Term::Kind::Gen:
      return {t.op().inputs, t.op().outputs};
    case Term::Kind::IdUnit:
      return {};
    case Term::Kind::Id:
      return {t.word(0), t.word(0)};
    case Term::Kind::Sym:
      return {concat(t.word(0), t.word(1)), concat(t.word(1), t.word(0))};
    case Term::Kind::Seq: {
      auto a = type_at(t.lhs(), sub(path, "seq.lhs"));
      auto b = type_at(t.rhs(), sub(path, "seq.rhs"));
      if (a.outputs != b.inputs)
        throw TypeError(sub(path, "seq"), "composition mismatch " + to_string(a.outputs) + " vs " +
                                              to_string(b.inputs));
      return {a.inputs, b.outputs};
    }
    case Term::Kind::Tensor: {
      auto a = type_at(t.lhs(), sub(path, "tensor.lhs"));
      auto b = type_at(t.rhs(), sub(path, "tensor.rhs"));
      return {concat(a.inputs, b.inputs), concat(a.outputs, b.outputs)};
    }
    case Term::Kind::Ev: {
      Word in{VertexType::arrow(fold_word(t.word(0)), fold_word(t.word(1)))};
      return {concat(in, t.word(0)), t.word(1)};
    }
    case Term::Kind::Lambda: {
      auto b = type_at(t.body(), sub(path, "lam.body"));
      Word want = concat(t.word(0), t.word(1));
      if (b.inputs != want)
        throw TypeError(sub(path, "lam"), "body input " + to_string(b.inputs) + " expected " + to_string(want));
      if (b.outputs != t.word(2))
        throw TypeError(sub(path, "lam"),
                        "body output " + to_string(b.outputs) + " expected " + to_string(t.word(2)));
      return {t.word(0), {VertexType::arrow(fold_word(t.word(1)), fold_word(t.word(2)))}};
    }
    case Term::Kind::Join: {
      auto a = type_at(t.lhs(), sub(path, "join.lhs"));
      auto b = type_at(t.rhs(), sub(path, "join.rhs"));
      if (!(a == b))
        throw TypeError(sub(path, "join"), "summand types differ: " + to_string(a.inputs) + " -> " +
                                               to_string(a.outputs) + " vs " + to_string(b.inputs) +
                                               " -> " + to_string(b.outputs));
      return a;
    }
  }
  return {};
}

enum Prec { kSeq = 0, kJoin = 1, kTensor = 2, kAtom = 3 };

std::string word_text(const Word& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ", ";
    s += to_string(w[i]);
  }
  return s;
}

void print(std::string& out, const Term& t, int ctx) {
  auto binary = [&](const char* opstr, int prec) {
    bool paren = prec < ctx;
    if (paren) out += "(";
    print(out, t.lhs(), prec);
    out += opstr;
    print(out, t.rhs(), prec + 1);
    if (paren) out += ")";
  };
  switch (t.kind()) {
    case Term::Kind::Gen:
      out += t.op().name;
      return;
    case Term::Kind::IdUnit:
      out += "id[]";
      return;
    case Term::Kind::Id:
      out += "id[" + word_text(t.word(0)) + "]";
      return;
    case Term::Kind::Sym:
      out += "sym[" + word_text(t.word(0)) + "|" + word_text(t.word(1)) + "]";
      return;
    case Term::Kind::Ev:
      out += "ev[" + word_text(t.word(0)) + "|" + word_text(t.word(1)) + "]";
      return;
    case Term::Kind::Lambda:
      out += "lam[" + word_text(t.word(0)) + "|" + word_text(t.word(1)) + "|" + word_text(t.word(2)) + "]{";
      print(out, t.body(), kSeq);
      out += "}";
      return;
    case Term::Kind::Seq:
      binary(" ; ", kSeq);
      return;
    case Term::Kind::Join:
      binary(" + ", kJoin);
      return;
    case Term::Kind::Tensor:
      binary(" * ", kTensor);
      return;
  }
}

void push_unique(std::vector<Term>& out, std::unordered_set<Term>& seen, Term t) {
  if (seen.insert(t).second) out.push_back(std::move(t));
}

}  // namespace

TermType type_of(const Term& t) { return type_at(t, ""); }

bool contains_join(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Join:
      return true;
    case Term::Kind::Seq:
    case Term::Kind::Tensor:
      return contains_join(t.lhs()) || contains_join(t.rhs());
    case Term::Kind::Lambda:
      return contains_join(t.body());
    default:
      return false;
  }
}

std::string to_string(const Term& t) {
  std::string s;
  print(s, t, kSeq);
  return s;
}

std::ostream& operator<<(std::ostream& os, const Term& t) { return os << to_string(t); }

void check_rule(const TermRule& r) {
  auto a = type_of(r.lhs);
  auto b = type_of(r.rhs);
  if (!(a == b))
    throw TypeError("rule " + r.name, "sides differ: " + to_string(a.inputs) + " -> " + to_string(a.outputs) +
                                          " vs " + to_string(b.inputs) + " -> " + to_string(b.outputs));
}

std::vector<Term> normal_form_sum(const Term& t) {
  std::vector<Term> out;
  std::unordered_set<Term> seen;
  switch (t.kind()) {
    case Term::Kind::Seq:
    case Term::Kind::Tensor: {
      auto a = normal_form_sum(t.lhs());
      auto b = normal_form_sum(t.rhs());
      bool is_seq = t.kind() == Term::Kind::Seq;
      for (const auto& x : a)
        for (const auto& y : b) push_unique(out, seen, is_seq ? Term::seq(x, y) : Term::tensor(x, y));
      return out;
    }
    case Term::Kind::Lambda:
      for (const auto& x : normal_form_sum(t.body()))
        push_unique(out, seen, Term::lambda(t.word(0), t.word(1), t.word(2), x));
      return out;
    case Term::Kind::Join:
      for (const auto& x : normal_form_sum(t.lhs())) push_unique(out, seen, x);
      for (const auto& x : normal_form_sum(t.rhs())) push_unique(out, seen, x);
      return out;
    default:
      return {t};
  }
}

Term join_of(const std::vector<Term>& summands) {
  if (summands.empty()) throw std::invalid_argument("join_of: empty summand list");
  Term acc = summands.back();
  for (std::size_t i = summands.size() - 1; i-- > 0;) acc = Term::join(summands[i], acc);
  return acc;
}

}  // namespace egb
