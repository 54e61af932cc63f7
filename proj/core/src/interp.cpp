#include "egb/interp.hpp"

namespace egb {

namespace {

ExtendedCospan generator(const OpSymbol& op) {
  ExtendedCospan c;
  std::vector<VertexId> in, out;
  for (const auto& t : op.inputs) in.push_back(c.carrier.add_vertex(t));
  for (const auto& t : op.outputs) out.push_back(c.carrier.add_vertex(t));
  c.carrier.add_plain(op, in, out);
  c.inputs.internal = in;
  c.outputs.internal = out;
  for (std::size_t i = 0; i < in.size(); ++i) c.inputs.external.push_back(i);
  for (std::size_t i = 0; i < out.size(); ++i) c.outputs.external.push_back(i);
  return c;
}

ExtendedCospan interp(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Gen:
      return generator(t.op());
    case Term::Kind::IdUnit:
      return empty_cospan();
    case Term::Kind::Id:
      return identity(t.word(0));
    case Term::Kind::Sym:
      return symmetry(t.word(0), t.word(1));
    case Term::Kind::Ev:
      return generator(application_symbol(t.word(0), t.word(1)));
    case Term::Kind::Seq:
      return compose(interp(t.lhs()), interp(t.rhs()));
    case Term::Kind::Tensor:
      return tensor(interp(t.lhs()), interp(t.rhs()));
    case Term::Kind::Lambda:
      return abstraction(t.word(0), t.word(1), t.word(2), interp(t.body()));
    case Term::Kind::Join:
      return join(interp(t.lhs()), interp(t.rhs()));
  }
  return empty_cospan();
}

}  // namespace

ExtendedCospan abstraction(const Word& ctx, const Word& bound, const Word& result, const ExtendedCospan& body) {
  if (body.carrier.element_count() == 0) throw std::invalid_argument("lambda with an empty body");
  ExtendedCospan c;
  c.carrier = body.carrier;
  std::vector<ElemRef> top;
  for (const auto& [v, t] : c.carrier.vertices())
    if (!c.carrier.parent(v)) top.push_back(ElemRef::of(v));
  for (const auto& [id, e] : c.carrier.edges())
    if (!c.carrier.parent(id)) top.push_back(ElemRef::of(id));
  std::vector<VertexId> src;
  for (const auto& t : ctx) src.push_back(c.carrier.add_vertex(t));
  VertexId tgt = c.carrier.add_vertex(VertexType::arrow(fold_word(bound), fold_word(result)));
  EdgeId box = c.carrier.add_box(EdgeKind::LambdaBox, src, {tgt});
  for (auto x : top) c.carrier.set_parent(x, ParentRef{box, ParentKind::LamParent});
  c.inputs.internal = src;
  c.inputs.internal.insert(c.inputs.internal.end(), body.inputs.internal.begin(), body.inputs.internal.end());
  for (std::size_t i = 0; i < src.size(); ++i) c.inputs.external.push_back(i);
  c.outputs.internal = {tgt};
  c.outputs.internal.insert(c.outputs.internal.end(), body.outputs.internal.begin(), body.outputs.internal.end());
  c.outputs.external = {0};
  return c;
}

ExtendedCospan interpret(const Term& t) {
  type_of(t);
  return interp(t);
}

std::vector<RewriteRule> interpret_rule(const TermRule& r, bool both_directions) {
  check_rule(r);
  std::vector<RewriteRule> out;
  out.push_back(RewriteRule{r.name, interpret(r.lhs), interpret(r.rhs)});
  if (both_directions) out.push_back(RewriteRule{r.name + "~", interpret(r.rhs), interpret(r.lhs)});
  return out;
}

}  // namespace egb
