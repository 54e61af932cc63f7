#include "fixtures.hpp"

#include <map>

namespace egb::testing {

std::string fixture_path(const std::string& name) { return std::string(EGB_FIXTURES) + "/" + name; }

Document fixture_document(const std::string& name, const Signature& base) {
  return load_document(fixture_path(name), base);
}

ExtendedCospan fixture_term(const std::string& file, const std::string& term) {
  auto doc = fixture_document(file);
  const Term* t = doc.find_term(term);
  if (!t) throw std::runtime_error("fixture " + file + " has no term " + term);
  return interpret(*t);
}

std::vector<RewriteRule> fig2_rules() {
  auto sig = fixture_document("fig2.term").signature;
  auto doc = fixture_document("fig2.rules", sig);
  std::vector<RewriteRule> out;
  for (const auto& r : doc.rules) out.push_back(RewriteRule{r.name, interpret(r.lhs), interpret(r.rhs)});
  return out;
}

Signature population_signature() {
  Signature s;
  s.add_base_type("A");
  VertexType a = VertexType::base("A");
  s.add_op(OpSymbol{"f", {a}, {a}});
  s.add_op(OpSymbol{"m", {a, a}, {a}});
  s.add_op(OpSymbol{"c", {}, {a}});
  return s;
}

namespace {

std::vector<Term> atoms(const Signature& sig) {
  Word a{VertexType::base("A")};
  std::vector<Term> out;
  for (const auto& op : sig.ops()) out.push_back(Term::gen(op));
  out.push_back(Term::id(a));
  out.push_back(Term::sym(a, a));
  return out;
}

bool typed(const Term& t) {
  try {
    type_of(t);
    return true;
  } catch (const TypeError&) {
    return false;
  }
}

}  // namespace

std::vector<Term> enumerate_terms(const Signature& sig, std::size_t max_nodes) {
  std::map<std::size_t, std::vector<Term>> by_size;
  by_size[1] = atoms(sig);
  for (std::size_t n = 3; n <= max_nodes; ++n) {
    auto& level = by_size[n];
    for (std::size_t a = 1; a + 1 < n; ++a) {
      std::size_t b = n - 1 - a;
      if (!by_size.count(a) || !by_size.count(b)) continue;
      for (const auto& l : by_size[a])
        for (const auto& r : by_size[b]) {
          Term s = Term::seq(l, r);
          if (typed(s)) level.push_back(s);
          level.push_back(Term::tensor(l, r));
        }
    }
  }
  std::vector<Term> out;
  for (auto& [n, ts] : by_size)
    for (auto& t : ts) out.push_back(t);
  return out;
}

std::size_t count_joins(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Seq:
    case Term::Kind::Tensor:
      return count_joins(t.lhs()) + count_joins(t.rhs());
    case Term::Kind::Join:
      return 1 + count_joins(t.lhs()) + count_joins(t.rhs());
    case Term::Kind::Lambda:
      return count_joins(t.body());
    default:
      return 0;
  }
}

namespace {

struct Gen {
  std::mt19937& rng;
  const Signature& sig;
  std::vector<Term> atom_list;

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

  // A term of type (in, out) with at most `budget` nodes and `joins` joins.
  std::optional<Term> make(const Word& in, const Word& out, std::size_t budget, std::size_t joins, int depth) {
    if (budget == 0 || depth > 6) return std::nullopt;
    std::vector<int> options;
    if (joins > 0 && budget >= 3) options.insert(options.end(), {0, 0});
    if (budget >= 3) options.insert(options.end(), {1, 2});
    options.push_back(3);
    int choice = options[pick(options.size())];
    if (choice == 0) {
      std::size_t lb = 1 + pick(budget - 2);
      std::size_t rest = joins - 1;
      std::size_t lj = rest == 0 ? 0 : pick(rest + 1);
      auto l = make(in, out, lb, lj, depth + 1);
      if (!l) return std::nullopt;
      auto r = make(in, out, budget - 1 - l->size(), rest - lj, depth + 1);
      if (!r) return std::nullopt;
      return Term::join(*l, *r);
    }
    if (choice == 1) {
      Word mid(pick(3), VertexType::base("A"));
      std::size_t lb = 1 + pick(budget - 2);
      std::size_t lj = pick(joins + 1);
      auto l = make(in, mid, lb, lj, depth + 1);
      if (!l) return std::nullopt;
      auto r = make(mid, out, budget - 1 - l->size(), joins - lj, depth + 1);
      if (!r) return std::nullopt;
      return Term::seq(*l, *r);
    }
    if (choice == 2) {
      if (in.empty() && out.empty()) return std::nullopt;
      std::size_t ki = pick(in.size() + 1), ko = pick(out.size() + 1);
      Word i1(in.begin(), in.begin() + static_cast<std::ptrdiff_t>(ki)), i2(in.begin() + static_cast<std::ptrdiff_t>(ki), in.end());
      Word o1(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(ko)), o2(out.begin() + static_cast<std::ptrdiff_t>(ko), out.end());
      if ((i1.empty() && o1.empty()) || (i2.empty() && o2.empty())) return std::nullopt;
      std::size_t lb = 1 + pick(budget - 2);
      std::size_t lj = pick(joins + 1);
      auto l = make(i1, o1, lb, lj, depth + 1);
      if (!l) return std::nullopt;
      auto r = make(i2, o2, budget - 1 - l->size(), joins - lj, depth + 1);
      if (!r) return std::nullopt;
      return Term::tensor(*l, *r);
    }
    if (joins > 0) return std::nullopt;
    std::vector<Term> fit;
    for (const auto& a : atom_list) {
      auto ty = type_of(a);
      if (ty.inputs == in && ty.outputs == out) fit.push_back(a);
    }
    if (in == out && in.size() == 2) fit.push_back(Term::id(in));
    if (fit.empty()) return std::nullopt;
    return fit[pick(fit.size())];
  }
};

}  // namespace

Term random_sum_term(std::mt19937& rng, const Signature& sig, std::size_t max_nodes, std::size_t max_joins) {
  Gen g{rng, sig, atoms(sig)};
  Word a{VertexType::base("A")};
  const std::vector<std::pair<Word, Word>> shapes = {{a, a}, {{a[0], a[0]}, a}, {{}, a}, {a, {a[0], a[0]}}};
  for (;;) {
    const auto& [in, out] = shapes[g.pick(shapes.size())];
    std::size_t joins = 1 + g.pick(max_joins);
    auto t = g.make(in, out, max_nodes, joins, 0);
    if (t && t->size() <= max_nodes && count_joins(*t) >= 1 && count_joins(*t) <= max_joins && typed(*t)) return *t;
  }
}

}  // namespace egb::testing
