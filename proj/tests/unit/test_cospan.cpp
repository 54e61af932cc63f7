#include <set>

#include "doctest.h"
#include "egb/interp.hpp"
#include "egb/text.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace egb;
using namespace egb::testing;

namespace {

ExtendedCospan P(const std::string& s) { return interpret(parse_term(s, population_signature())); }
const Word kA{VertexType::base("A")};
const Word kAA{VertexType::base("A"), VertexType::base("A")};

}  // namespace

TEST_CASE("identity and symmetry are discrete") {
  auto id = identity(kAA);
  CHECK(id.carrier.vertices().size() == 2);
  CHECK(id.carrier.edges().empty());
  CHECK(id.inputs.internal == id.outputs.internal);
  auto sym = symmetry(kA, kA);
  CHECK(sym.inputs.internal[0] == sym.outputs.internal[1]);
  CHECK(is_mda(sym).empty());
  CHECK(empty_cospan().carrier.element_count() == 0);
}

TEST_CASE("composition identifies the shared boundary") {
  auto ff = compose(P("f"), P("f"));
  audit().cospan("compose", ff);
  CHECK(ff.carrier.vertices().size() == 3);
  CHECK(ff.carrier.edges().size() == 2);
  CHECK(find_cospan_iso(ff, P("f ; f")));
  CHECK(find_cospan_iso(compose(identity(kA), P("f")), P("f")));
  CHECK_THROWS_AS(compose(P("c"), P("m")), TypeMismatch);

  auto t = tensor(P("f"), P("c"));
  CHECK(t.external_input_word() == kA);
  CHECK(t.external_output_word() == kAA);
}

TEST_CASE("join nests the operands in separate blocks") {
  auto j = join(P("f"), P("f ; f"));
  audit().cospan("join", j);
  EdgeId box{};
  std::size_t boxes = 0;
  for (const auto& [e, d] : j.carrier.edges())
    if (d.kind == EdgeKind::EBox) {
      box = e;
      ++boxes;
    }
  REQUIRE(boxes == 1);
  CHECK(j.carrier.block_ids(box).size() == 2);
  CHECK(j.inputs.external.size() == 1);
  CHECK(j.inputs.internal.size() == 3);
  CHECK(join_all({P("f")}).carrier.element_count() == P("f").carrier.element_count());
  auto three = join_all({P("f"), P("f ; f"), P("f ; f ; f")});
  std::size_t blocks = 0;
  for (const auto& [e, d] : three.carrier.edges())
    if (d.kind == EdgeKind::EBox) blocks = three.carrier.block_ids(e).size();
  CHECK(blocks == 3);
}

TEST_CASE("MDA violations") {
  auto c = P("f");
  c.inputs.internal.clear();
  c.inputs.external.clear();
  CHECK_FALSE(is_mda(c).empty());

  auto d = P("m");
  d.outputs.internal.push_back(d.inputs.internal[0]);
  d.outputs.external.push_back(1);
  CHECK_FALSE(is_mda(d).empty());
}

TEST_CASE("well-typedness of boxes") {
  auto lam = P("lam[A|A|A]{m}");
  CHECK(is_well_typed(lam).empty());
  // drop a port of the lambda box
  auto broken = lam;
  broken.inputs.internal.pop_back();
  CHECK_FALSE(is_well_typed(broken).empty());
}

TEST_CASE("interface partition groups nested ports") {
  auto j = join(P("m"), P("sym[A|A] ; m"));
  auto blocks = interface_partition(j, Side::In);
  // two externals, then one group of two per block
  REQUIRE(blocks.size() == 4);
  std::multiset<std::size_t> sizes;
  for (const auto& b : blocks) sizes.insert(b.size());
  CHECK(sizes == std::multiset<std::size_t>{1, 1, 2, 2});
}

TEST_CASE("cospan iso agrees with brute force") {
  const char* terms[] = {"f ; f", "m ; f", "sym[A|A] ; m", "m", "(c * c) ; m", "f + (f ; f)", "(f ; f) + f",
                         "lam[A|A|A]{m}", "lam[A|A|A]{sym[A|A] ; m}", "c * c", "(c * c) ; sym[A|A]"};
  for (const char* a : terms)
    for (const char* b : terms) {
      CAPTURE(a);
      CAPTURE(b);
      auto x = P(a), y = P(b);
      CHECK(find_cospan_iso(x, y).has_value() == brute_cospan_iso(x, y));
    }
  CHECK(find_cospan_iso(P("f + (f ; f)"), P("(f ; f) + f")));
  CHECK_FALSE(find_cospan_iso(P("m"), P("sym[A|A] ; m")));
  CHECK(find_cospan_iso(P("(c * c) ; sym[A|A]"), P("c * c")));
}

TEST_CASE("renumbering is dense and iso") {
  auto c = P("(f + (f ; f)) ; f");
  auto r = renumbered(c);
  CHECK(r.carrier.next_vertex_id() == r.carrier.vertices().size());
  CHECK(r.carrier.next_edge_id() == r.carrier.edges().size());
  CHECK(brute_cospan_iso(c, r));
}

TEST_CASE("box ports list nested interface vertices") {
  auto lam = P("lam[A|A|A]{m}");
  EdgeId box{};
  for (const auto& [e, d] : lam.carrier.edges())
    if (d.kind == EdgeKind::LambdaBox) box = e;
  CHECK(box_ports(lam, box, Side::In).size() == 2);
  CHECK(box_ports(lam, box, Side::Out).size() == 1);
}
