#include <unordered_map>
#include <unordered_set>

#include "egb/term.hpp"

namespace egb {

namespace {

using K = Term::Kind;

class TypeCache {
 public:
  const TermType& operator()(const Term& t) {
    auto it = cache_.find(t);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(t, type_of(t)).first->second;
  }

 private:
  std::unordered_map<Term, TermType> cache_;
};

Word slice(const Word& w, std::size_t b, std::size_t e) { return Word(w.begin() + b, w.begin() + e); }

bool is_identity(const Term& t) { return t.kind() == K::Id || t.kind() == K::IdUnit; }

const Word& id_word(const Term& t) {
  static const Word empty;
  return t.kind() == K::Id ? t.word(0) : empty;
}

// Rewrites at the root of `t`. `under_tensor` and `beside_tensor` enable
// unit introduction, which is only useful as a prelude to interchange.
void local(const Term& t, bool under_tensor, bool beside_tensor, TypeCache& ty, std::vector<Term>& out) {
  switch (t.kind()) {
    case K::Seq: {
      const Term& a = t.lhs();
      const Term& b = t.rhs();
      if (a.kind() == K::Seq) out.push_back(Term::seq(a.lhs(), Term::seq(a.rhs(), b)));
      if (b.kind() == K::Seq) out.push_back(Term::seq(Term::seq(a, b.lhs()), b.rhs()));
      if (is_identity(a)) out.push_back(b);
      if (is_identity(b)) out.push_back(a);
      // interchange, merging direction
      if (a.kind() == K::Tensor && b.kind() == K::Tensor && ty(a.lhs()).outputs == ty(b.lhs()).inputs)
        out.push_back(Term::tensor(Term::seq(a.lhs(), b.lhs()), Term::seq(a.rhs(), b.rhs())));
      // naturality of the symmetry, both directions
      if (a.kind() == K::Sym && b.kind() == K::Tensor && ty(b.lhs()).inputs == a.word(1) &&
          ty(b.rhs()).inputs == a.word(0)) {
        const Term& g = b.lhs();
        const Term& f = b.rhs();
        out.push_back(Term::seq(Term::tensor(f, g), Term::sym(ty(f).outputs, ty(g).outputs)));
      }
      if (b.kind() == K::Sym && a.kind() == K::Tensor && ty(a.lhs()).outputs == b.word(0) &&
          ty(a.rhs()).outputs == b.word(1)) {
        const Term& f = a.lhs();
        const Term& g = a.rhs();
        out.push_back(Term::seq(Term::sym(ty(f).inputs, ty(g).inputs), Term::tensor(g, f)));
      }
      // involution
      if (a.kind() == K::Sym && b.kind() == K::Sym && a.word(0) == b.word(1) && a.word(1) == b.word(0))
        out.push_back(Term::id(concat(a.word(0), a.word(1))));
      // hexagons, folding direction
      if (a.kind() == K::Tensor && b.kind() == K::Tensor) {
        const Term &p = a.lhs(), &q = a.rhs(), &r = b.lhs(), &s = b.rhs();
        if (p.kind() == K::Sym && is_identity(q) && is_identity(r) && s.kind() == K::Sym &&
            p.word(1) == id_word(r) && id_word(q) == s.word(1) && p.word(0) == s.word(0))
          out.push_back(Term::sym(p.word(0), concat(p.word(1), s.word(1))));
        if (is_identity(p) && q.kind() == K::Sym && r.kind() == K::Sym && is_identity(s) &&
            id_word(p) == r.word(0) && q.word(0) == id_word(s) && q.word(1) == r.word(1))
          out.push_back(Term::sym(concat(id_word(p), q.word(0)), q.word(1)));
      }
      break;
    }
    case K::Tensor: {
      const Term& a = t.lhs();
      const Term& b = t.rhs();
      if (a.kind() == K::Tensor) out.push_back(Term::tensor(a.lhs(), Term::tensor(a.rhs(), b)));
      if (b.kind() == K::Tensor) out.push_back(Term::tensor(Term::tensor(a, b.lhs()), b.rhs()));
      if (a.kind() == K::IdUnit) out.push_back(b);
      if (b.kind() == K::IdUnit) out.push_back(a);
      if (a.kind() == K::Seq && b.kind() == K::Seq)
        out.push_back(Term::seq(Term::tensor(a.lhs(), b.lhs()), Term::tensor(a.rhs(), b.rhs())));
      if (a.kind() == K::Id && b.kind() == K::Id) out.push_back(Term::id(concat(a.word(0), b.word(0))));
      break;
    }
    case K::Id: {
      const Word& w = t.word(0);
      for (std::size_t k = 1; k < w.size(); ++k)
        out.push_back(Term::tensor(Term::id(slice(w, 0, k)), Term::id(slice(w, k, w.size()))));
      break;
    }
    case K::Sym: {
      const Word& a = t.word(0);
      const Word& b = t.word(1);
      if (a.empty()) out.push_back(Term::id(b));
      if (b.empty()) out.push_back(Term::id(a));
      for (std::size_t k = 1; k < b.size(); ++k) {
        Word b1 = slice(b, 0, k), b2 = slice(b, k, b.size());
        out.push_back(Term::seq(Term::tensor(Term::sym(a, b1), Term::id(b2)),
                                Term::tensor(Term::id(b1), Term::sym(a, b2))));
      }
      for (std::size_t k = 1; k < a.size(); ++k) {
        Word a1 = slice(a, 0, k), a2 = slice(a, k, a.size());
        out.push_back(Term::seq(Term::tensor(Term::id(a1), Term::sym(a2, b)),
                                Term::tensor(Term::sym(a1, b), Term::id(a2))));
      }
      break;
    }
    default:
      break;
  }
  if (under_tensor && !is_identity(t)) {
    const auto& tt = ty(t);
    out.push_back(Term::seq(Term::id(tt.inputs), t));
    out.push_back(Term::seq(t, Term::id(tt.outputs)));
  }
  if (beside_tensor && t.kind() != K::IdUnit) {
    out.push_back(Term::tensor(t, Term::id_unit()));
    out.push_back(Term::tensor(Term::id_unit(), t));
  }
}

void neighbours(const Term& t, bool under_tensor, bool beside_tensor, TypeCache& ty, std::vector<Term>& out) {
  local(t, under_tensor, beside_tensor, ty, out);
  std::vector<Term> tmp;
  switch (t.kind()) {
    case K::Seq:
    case K::Tensor:
    case K::Join: {
      bool child_tensor = t.kind() == K::Tensor;
      bool seq = t.kind() == K::Seq;
      neighbours(t.lhs(), child_tensor, seq && t.rhs().kind() == K::Tensor, ty, tmp);
      for (auto& x : tmp) {
        if (t.kind() == K::Seq) out.push_back(Term::seq(x, t.rhs()));
        else if (t.kind() == K::Tensor) out.push_back(Term::tensor(x, t.rhs()));
        else out.push_back(Term::join(x, t.rhs()));
      }
      tmp.clear();
      neighbours(t.rhs(), child_tensor, seq && t.lhs().kind() == K::Tensor, ty, tmp);
      for (auto& x : tmp) {
        if (t.kind() == K::Seq) out.push_back(Term::seq(t.lhs(), x));
        else if (t.kind() == K::Tensor) out.push_back(Term::tensor(t.lhs(), x));
        else out.push_back(Term::join(t.lhs(), x));
      }
      break;
    }
    case K::Lambda:
      neighbours(t.body(), false, false, ty, tmp);
      for (auto& x : tmp) out.push_back(Term::lambda(t.word(0), t.word(1), t.word(2), x));
      break;
    default:
      break;
  }
}

// Every term obtained by replacing one occurrence of `from` in `t` by `to`.
void replace_once(const Term& t, const Term& from, const Term& to, std::vector<Term>& out) {
  if (t == from) out.push_back(to);
  std::vector<Term> tmp;
  switch (t.kind()) {
    case K::Seq:
    case K::Tensor:
    case K::Join:
      replace_once(t.lhs(), from, to, tmp);
      for (auto& x : tmp) {
        if (t.kind() == K::Seq) out.push_back(Term::seq(x, t.rhs()));
        else if (t.kind() == K::Tensor) out.push_back(Term::tensor(x, t.rhs()));
        else out.push_back(Term::join(x, t.rhs()));
      }
      tmp.clear();
      replace_once(t.rhs(), from, to, tmp);
      for (auto& x : tmp) {
        if (t.kind() == K::Seq) out.push_back(Term::seq(t.lhs(), x));
        else if (t.kind() == K::Tensor) out.push_back(Term::tensor(t.lhs(), x));
        else out.push_back(Term::join(t.lhs(), x));
      }
      break;
    case K::Lambda:
      replace_once(t.body(), from, to, tmp);
      for (auto& x : tmp) out.push_back(Term::lambda(t.word(0), t.word(1), t.word(2), x));
      break;
    default:
      break;
  }
}

}  // namespace

std::vector<Term> smc_neighbours(const Term& t) {
  TypeCache ty;
  std::vector<Term> out;
  neighbours(t, false, false, ty, out);
  std::unordered_set<Term> seen;
  std::vector<Term> uniq;
  for (auto& x : out)
    if (!(x == t) && seen.insert(x).second) uniq.push_back(std::move(x));
  return uniq;
}

Presentations smc_presentations(const Term& t, std::size_t depth, std::size_t cap) {
  type_of(t);
  Presentations res;
  TypeCache ty;
  std::unordered_set<Term> seen{t};
  res.terms.push_back(t);
  std::vector<Term> frontier{t};
  for (std::size_t d = 0; d < depth && !frontier.empty(); ++d) {
    std::vector<Term> next;
    for (const auto& x : frontier) {
      std::vector<Term> nb;
      neighbours(x, false, false, ty, nb);
      for (auto& y : nb) {
        if (seen.count(y)) continue;
        if (res.terms.size() >= cap) {
          res.bound_exhausted = true;
          return res;
        }
        seen.insert(y);
        res.terms.push_back(y);
        next.push_back(std::move(y));
      }
    }
    frontier = std::move(next);
  }
  return res;
}

TermRewriteResult term_rewrite_step(const Term& f, const TermRule& rule, std::size_t depth_bound,
                                    std::size_t cap) {
  check_rule(rule);
  TermRewriteResult res;
  auto summands = normal_form_sum(f);
  std::unordered_set<Term> seen;
  for (std::size_t k = 0; k < summands.size(); ++k) {
    auto pres = smc_presentations(summands[k], depth_bound, cap);
    res.bound_exhausted = res.bound_exhausted || pres.bound_exhausted;
    for (const auto& p : pres.terms) {
      std::vector<Term> hits;
      replace_once(p, rule.lhs, rule.rhs, hits);
      for (auto& h : hits) {
        Term g = h;
        if (summands.size() > 1) {
          auto parts = summands;
          parts[k] = h;
          g = join_of(parts);
        }
        if (seen.insert(g).second) res.terms.push_back(std::move(g));
      }
    }
  }
  return res;
}

}  // namespace egb
