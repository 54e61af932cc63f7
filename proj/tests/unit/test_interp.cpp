#include "doctest.h"
#include "egb/interp.hpp"
#include "egb/text.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace egb;
using namespace egb::testing;

namespace {

Term T(const std::string& s) { return parse_term(s, population_signature()); }
ExtendedCospan P(const std::string& s) { return interpret(T(s)); }

std::size_t count_kind(const ExtendedCospan& c, EdgeKind k) {
  std::size_t n = 0;
  for (const auto& [e, d] : c.carrier.edges()) n += d.kind == k;
  return n;
}

}  // namespace

TEST_CASE("base cases") {
  auto g = P("m");
  CHECK(g.carrier.vertices().size() == 3);
  CHECK(g.carrier.edges().size() == 1);
  CHECK(g.inputs.external.size() == 2);

  auto id0 = interpret(Term::id_unit());
  CHECK(id0.carrier.element_count() == 0);

  auto ev = P("ev[A|A]");
  REQUIRE(ev.carrier.edges().size() == 1);
  CHECK(is_application_symbol(ev.carrier.edges().begin()->second.op));
  CHECK(ev.carrier.vertex_type(ev.inputs.internal[0]).is_arrow());
}

TEST_CASE("lambda abstraction nests the body") {
  auto lam = P("lam[A|A|A]{m}");
  audit().cospan("lambda", lam);
  CHECK(count_kind(lam, EdgeKind::LambdaBox) == 1);
  CHECK(lam.inputs.internal.size() == 3);
  CHECK(lam.inputs.external.size() == 1);
  CHECK(lam.outputs.internal.size() == 2);
  CHECK(lam.carrier.vertex_type(lam.outputs.internal[lam.outputs.external[0]]).is_arrow());

  auto same = abstraction(Word(1, VertexType::base("A")), Word(1, VertexType::base("A")),
                          Word(1, VertexType::base("A")), P("m"));
  CHECK(find_cospan_iso(lam, same));
}

TEST_CASE("join and nested lambdas validate") {
  for (const char* s : {"f + (f ; f)", "(c + (c ; f)) ; (f + f)", "lam[A|A|A]{m + (sym[A|A] ; m)}",
                        "lam[|A|A]{f} * c ; ev[A|A]", "(lam[A|A|A]{m} * id[A]) ; ev[A|A]"}) {
    CAPTURE(s);
    auto c = P(s);
    audit().cospan(s, c);
    CHECK(validate(c.carrier).empty());
    CHECK(is_mda(c).empty());
    CHECK(is_well_typed(c).empty());
  }
}

TEST_CASE("empty lambda bodies and join operands are rejected") {
  CHECK_THROWS_AS(interpret(Term::lambda({}, {}, {}, Term::id_unit())), std::invalid_argument);
  CHECK_THROWS_AS(interpret(Term::join(Term::id_unit(), Term::id_unit())), std::invalid_argument);
}

TEST_CASE("identity laws hold up to iso") {
  CHECK(find_cospan_iso(P("id[A] ; f"), P("f")));
  CHECK(find_cospan_iso(P("f * id[]"), P("f")));
  CHECK(find_cospan_iso(P("sym[A|A] ; sym[A|A]"), P("id[A] * id[A]")));
  CHECK_FALSE(find_cospan_iso(P("sym[A|A] ; m"), P("m")));
}

TEST_CASE("rules interpret both ways") {
  TermRule r{"r", T("m ; f"), T("(f * f) ; m")};
  auto one = interpret_rule(r);
  REQUIRE(one.size() == 1);
  CHECK(check_rule(one[0]).empty());
  auto two = interpret_rule(r, true);
  REQUIRE(two.size() == 2);
  CHECK(find_cospan_iso(two[1].lhs, one[0].rhs));
}
