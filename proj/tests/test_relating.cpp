#include <doctest.h>

#include "liftlab/relating.hpp"
#include "support/fixtures.hpp"
#include "support/formulas.hpp"
#include "support/oracles.hpp"

using namespace liftlab;
using fx::fn;
using fx::set;
using fx::arrow_interval;

namespace {

FibRel diag(const LiftBoundary& b) { return diagonal_relation(b.E, b.B, b.p); }

// The problem over X pushed forward along the span.
LiftProblem push(const LiftProblem& pr, const SpanMap& s) { return {pr.X, compose(s.e, pr.u), compose(s.bp, pr.v)}; }

// For every problem over X: uncurrying H∘χ and composing with rel gives the pair of
// the pushed-forward first solution and the second structure's solution.
void check_reindexing(const Witness& w, const std::vector<SliceObj>& xs) {
  const LiftContext& c1 = w.F1.context();
  const LiftBoundary& b = w.F2.boundary();
  ExpRef VR = local_exp(b.V, w.rel.R);
  for (const auto& X : xs) {
    for (const auto& pr : enumerate_problems(c1, X)) {
      Pullback XV = slice_product(X, b.V);
      PshMor hx = VR->uncurry(XV, compose(w.H, classify(c1, pr)));
      PshMor pairs = compose(w.rel.rel, hx);
      CHECK(compose(w.rel.EE.p1(), pairs) == compose(w.span.e, solve(w.F1, pr)));
      CHECK(compose(w.rel.EE.p2(), pairs) == solve(w.F2, push(pr, w.span)));
    }
  }
}

}  // namespace

TEST_CASE("Relating: fixture A's two structures are not diagonally related") {
  auto b = fx::fixture_a();
  auto fs = search_lift_struct(b);
  REQUIRE(fs.size() == 2);
  FibRel r = diag(b);
  SpanMap s = identity_span(b);
  WitnessSearch none = search_witness(fs[0], fs[1], s, r);
  CHECK_FALSE(none.witness);
  // Exhaustion covers every map P' -> [V,R], and none of them passes the check.
  ExpRef VR = local_exp(b.V, r.R);
  const Presheaf& P = fs[0].context().restricted().obj();
  auto all = oracle::homs(P, VR->obj());
  CHECK(none.exhausted == all.size());
  for (const auto& comp : all) CHECK_FALSE(check_witness({fs[0], fs[1], s, r, PshMor(P, VR->obj(), comp)}));

  WitnessSearch same = search_witness(fs[1], fs[1], s, r);
  REQUIRE(same.witness);
  CHECK(check_witness(*same.witness));
}

TEST_CASE("Relating: diagonal witnesses exist exactly for equal structures") {
  for (const auto& nb : fx::global_fixtures()) {
    CAPTURE(nb.name);
    auto fs = search_lift_struct(nb.boundary);
    FibRel r = diag(nb.boundary);
    SpanMap s = identity_span(nb.boundary);
    for (const auto& F1 : fs)
      for (const auto& F2 : fs) {
        WitnessSearch res = search_witness(F1, F2, s, r);
        CHECK(res.witness.has_value() == (F1 == F2));
        if (res.witness) {
          CHECK(check_witness(*res.witness));
          check_reindexing(*res.witness, fx::universe(nb.boundary, 2));
        }
      }
  }
}

TEST_CASE("Relating: diagonal along a span matches the chosen points") {
  auto b1 = fx::fixture_a();
  auto b2 = make_boundary(fx::empty_into(1), fx::bang(3));
  SpanMap s{fn(2, 3, {2, 0}), identity(set(1)), identity(set(1))};
  check_span_map(b1, b2, s);
  FibRel r = diag(b2);
  SliceObj one = over_terminal(set(1));
  for (const auto& F1 : search_lift_struct(b1))
    for (const auto& F2 : search_lift_struct(b2)) {
      // A single problem with the point as parameter; its solutions pick the points.
      LiftProblem pr = oracle::problems(b1, one).at(0);
      int x = solve(F1, pr)(0, 0), y = solve(F2, push(pr, s))(0, 0);
      WitnessSearch res = search_witness(F1, F2, s, r);
      CHECK(res.witness.has_value() == (s.e(0, x) == y));
    }
}

TEST_CASE("Relating: span maps are validated") {
  auto b1 = fx::fixture_a();
  auto b2 = make_boundary(fx::empty_into(1), fn(3, 2, {0, 1, 1}));
  SpanMap bad{fn(2, 3, {0, 1}), identity(set(1)), identity(set(1))};
  CHECK_THROWS_AS(check_span_map(b1, b2, bad), ShapeError);
  auto b3 = make_boundary(fx::empty_into(1), fn(2, 2, {0, 1}));
  SpanMap twisted{fn(2, 2, {0, 1}), fn(2, 2, {1, 0}), fn(2, 2, {1, 0})};
  CHECK_THROWS_AS(check_span_map(b3, b3, twisted), PropertyError);
  auto fs = search_lift_struct(b1);
  auto other = search_lift_struct(fx::point_in_two());
  CHECK_THROWS_AS(search_witness(fs[0], other[0], identity_span(b1), diag(b1)), ShapeError);
}

TEST_CASE("Relating: path relation with I = {0,1} relates everything, construction agrees with search") {
  IntervalStruct i = finset_interval();
  for (const auto& nb : fx::global_fixtures()) {
    if (nb.boundary.cat()->num_objects() != 1) continue;
    CAPTURE(nb.name);
    const LiftBoundary& b = nb.boundary;
    FibRel r = path_relation(i, b.E, b.B, b.p);
    CHECK(is_iso(r.rel));
    auto fs = search_lift_struct(b);
    SpanMap s = identity_span(b);
    for (const auto& F1 : fs)
      for (const auto& F2 : fs) {
        WitnessSearch found = search_witness(F1, F2, s, r);
        REQUIRE(found.witness);
        HomotopyWitness hw = construct_homotopy_witness(F1, F2, s, i);
        CHECK(check_witness(hw.witness));
        // rel is an isomorphism, so witnesses are unique.
        CHECK(hw.witness.H == found.witness->H);
        check_reindexing(hw.witness, fx::universe(b, 2));
      }
  }
}

TEST_CASE("Relating: a supplied homotopy is checked equation by equation") {
  IntervalStruct i = finset_interval();
  auto b = fx::fixture_a();
  auto fs = search_lift_struct(b);
  SpanMap s = identity_span(b);
  HomotopyWitness hw = construct_homotopy_witness(fs[0], fs[1], s, i);
  HomotopyWitness again = construct_homotopy_witness(fs[0], fs[1], s, i, hw.ell);
  CHECK(again.witness.H == hw.witness.H);

  // The constant homotopy at the first structure misses the second endpoint.
  PshMor f0 = compose(fs[0].internal(), hw.DI.p1());
  CHECK_THROWS_WITH_AS(construct_homotopy_witness(fs[0], fs[1], s, i, f0), doctest::Contains("ℓ(-,1) != f1"),
                       PropertyError);
  PshMor f1 = compose(fs[1].internal(), hw.DI.p1());
  CHECK_THROWS_WITH_AS(construct_homotopy_witness(fs[0], fs[1], s, i, f1), doctest::Contains("ℓ(-,0) != f0"),
                       PropertyError);
  // The constant homotopy is accepted when both ends agree.
  HomotopyWitness refl = construct_homotopy_witness(fs[0], fs[0], s, i, f0);
  CHECK(check_witness(refl.witness));
}

TEST_CASE("Relating: every single-value change to a homotopy is rejected") {
  // With I = {0,1} every element of D × I is an endpoint, so ℓ is forced.
  IntervalStruct i = finset_interval();
  auto b = fx::point_in_two();
  auto fs = search_lift_struct(b);
  REQUIRE_FALSE(fs.empty());
  SpanMap s = identity_span(b);
  HomotopyWitness hw = construct_homotopy_witness(fs[0], fs[0], s, i);
  const LiftContext& ctx = fs[0].context();
  const Presheaf& VE = ctx.VE().obj();
  for (int x = 0; x < hw.DI.obj().size(0); ++x)
    for (int v = 0; v < VE.size(0); ++v) {
      if (v == hw.ell(0, x)) continue;
      Components comp = hw.ell.components();
      comp[0][x] = v;
      PshMor bad(hw.DI.obj(), VE, comp);
      CHECK_THROWS_AS(construct_homotopy_witness(fs[0], fs[0], s, i, bad), PropertyError);
    }
}

TEST_CASE("Relating: equal points give no interval and the path relation refuses") {
  auto b = fx::fixture_a();
  CHECK_THROWS_AS(path_relation(finset_interval(false), b.E, b.B, b.p), PropertyError);
}

TEST_CASE("Relating: the path relation on E = B is B itself") {
  IntervalStruct i = arrow_interval();
  auto cat = i.I.total.base();
  int f = *cat->find_arrow("f");
  for (const Presheaf& B : {make_presheaf(cat, {2, 1}, {{f, {0}}}), constant_presheaf(cat, 2), yoneda(cat, 0)}) {
    SliceObj Bs = over_terminal(B);
    FibRel r = path_relation(i, Bs, Bs, identity(B));
    CHECK(find_iso(r.R.total, B).status == IsoResult::Status::Found);
    CHECK(is_iso(r.rel));
  }
}

TEST_CASE("Relating: arrow-category path relation against fibre enumeration") {
  IntervalStruct i = arrow_interval();
  auto cat = i.I.total.base();
  auto b = fx::arrow_boundary();
  const Presheaf& E = b.E.total;
  const Presheaf& B = b.B.total;
  FibRel r = path_relation(i, b.E, b.B, b.p);
  const Presheaf& I = i.I.total;
  for (int c = 0; c < cat->num_objects(); ++c) {
    Presheaf yc = yoneda(cat, c);
    Pullback cyl = product(yc, I);
    int idc = cat->hom_position(cat->id(c));
    auto paths = oracle::homs(cyl.obj(), E);
    for (int y = 0; y < r.EE.obj().size(c); ++y) {
      int e0 = r.EE.first(c, y), e1 = r.EE.second(c, y), beta = b.p(c, e0);
      std::size_t expect = 0;
      for (const auto& m : paths) {
        if (m[c][cyl.index(c, idc, i.pt0(c, 0))] != e0 || m[c][cyl.index(c, idc, i.pt1(c, 0))] != e1) continue;
        bool over = true;
        for (int c2 = 0; c2 < cat->num_objects() && over; ++c2)
          for (int z = 0; z < cyl.obj().size(c2) && over; ++z) {
            int h = cat->hom(c2, c)[cyl.first(c2, z)];
            over = b.p(c2, m[c2][z]) == B.act(h, beta);
          }
        if (over) ++expect;
      }
      std::size_t got = 0;
      for (int x = 0; x < r.R.total.size(c); ++x)
        if (r.rel(c, x) == y) ++got;
      CAPTURE(c);
      CAPTURE(y);
      CHECK(got == expect);
    }
  }
}

TEST_CASE("Relating: arrow-category homotopy witnesses pass the check") {
  IntervalStruct i = arrow_interval();
  auto cat = i.I.total.base();
  auto b = make_boundary(from_empty(empty_presheaf(cat), yoneda(cat, 1)), to_terminal(constant_presheaf(cat, 2)));
  auto fs = search_lift_struct(b);
  REQUIRE(fs.size() == 2);
  FibRel r = path_relation(i, b.E, b.B, b.p);
  SpanMap s = identity_span(b);
  int constructed = 0;
  for (const auto& F1 : fs)
    for (const auto& F2 : fs) {
      WitnessSearch found = search_witness(F1, F2, s, r);
      try {
        HomotopyWitness hw = construct_homotopy_witness(F1, F2, s, i);
        ++constructed;
        CHECK(check_witness(hw.witness));
        CHECK(found.witness);
        check_reindexing(hw.witness, fx::universe(b, 1));
      } catch (const NoConstruction&) {
      }
      if (F1 == F2) CHECK(found.witness);
    }
  // I has a component away from both points, so paths are not determined by their ends.
  CHECK_FALSE(is_iso(r.rel));
  CHECK(constructed == 4);
}
