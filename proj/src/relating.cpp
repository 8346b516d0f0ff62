#include "liftlab/relating.hpp"

#include <functional>

namespace liftlab {

namespace {

PshMor id(const Presheaf& a) { return identity(a); }

void require(bool ok, const std::string& msg) {
  if (!ok) throw ShapeError(msg);
}

PshMor build(const Presheaf& src, const Presheaf& dst, const std::function<int(int, int)>& fn) {
  Components comp(src.cat().num_objects());
  for (int c = 0; c < src.cat().num_objects(); ++c) {
    comp[c].resize(src.size(c));
    for (int k = 0; k < src.size(c); ++k) comp[c][k] = fn(c, k);
  }
  return PshMor(src, dst, std::move(comp));
}

bool same_slice(const SliceObj& a, const SliceObj& b) { return a.total == b.total && a.anchor == b.anchor; }

// The fixed data every witness for (F1, F2, s, r) is compared against.
struct Frame {
  ExpRef VR, VE2;
  PshMor induced;     // P1' -> P2'
  PshMor f0, f1;      // P1' -> [V,E2]
  PshMor leg0, leg1;  // [V,R] -> [V,E2]
};

Frame frame(const LiftStruct& F1, const LiftStruct& F2, const SpanMap& s, const FibRel& r) {
  const LiftBoundary& b2 = F2.boundary();
  check_span_map(F1.boundary(), b2, s);
  require(same_slice(r.E, b2.E) && same_slice(r.B, b2.B) && r.p == b2.p,
          "witness: the relation is not on the second right map");
  Frame fr;
  fr.VR = local_exp(b2.V, r.R);
  fr.VE2 = local_exp(b2.V, b2.E);
  fr.induced = induced_problem_map(F1.context(), F2.context(), s);
  fr.f0 = compose(exp_map(F1.context().VE(), *fr.VE2, id(b2.V.total), s.e), F1.internal());
  fr.f1 = compose(F2.internal(), fr.induced);
  fr.leg0 = exp_map(*fr.VR, *fr.VE2, id(b2.V.total), compose(r.EE.p1(), r.rel));
  fr.leg1 = exp_map(*fr.VR, *fr.VE2, id(b2.V.total), compose(r.EE.p2(), r.rel));
  return fr;
}

}  // namespace

FibRel make_fib_rel(const SliceObj& E, const SliceObj& B, const PshMor& p, const Presheaf& R, const PshMor& rel) {
  require(is_slice_map(E, B, p), "relation: p is not a map over the base");
  Pullback EE(p, p);
  require(rel.src() == R && rel.dst() == EE.obj(), "relation: rel is not a map R -> E ×_B E");
  return {E, B, p, EE, {R, compose(E.anchor, compose(EE.p1(), rel))}, rel};
}

FibRel diagonal_relation(const SliceObj& E, const SliceObj& B, const PshMor& p) {
  require(is_slice_map(E, B, p), "relation: p is not a map over the base");
  Pullback EE(p, p);
  return make_fib_rel(E, B, p, E.total, EE.pair(id(E.total), id(E.total)));
}

FibRel path_relation(const IntervalStruct& i, const SliceObj& E, const SliceObj& B, const PshMor& p) {
  require(i.base() == terminal_presheaf(i.base().base()), "path relation: interval is not global");
  require(is_slice_map(E, B, p), "relation: p is not a map over the base");
  require_interval(i, {over_terminal(E.total), over_terminal(B.total)});
  PathObj f = path_objects(interval_pullback(i, to_terminal(B.total)), slice_obj(p), slice_terminal(B.total), p);
  Pullback EE(p, p);
  PshMor rel = build(f.PE->obj(), EE.obj(), [&](int c, int s) {
    int d = f.PE->delta(c, s);
    return EE.at(c, f.PE->ev(c, s, f.interval.pt0(c, d)), f.PE->ev(c, s, f.interval.pt1(c, d)));
  });
  return make_fib_rel(E, B, p, f.PE->obj(), rel);
}

SpanMap identity_span(const LiftBoundary& b) { return {id(b.E.total), id(b.B.total), id(b.Bp.total)}; }

void check_span_map(const LiftBoundary& b1, const LiftBoundary& b2, const SpanMap& s) {
  require(same_slice(b1.U, b2.U) && same_slice(b1.V, b2.V) && same_slice(b1.Vp, b2.Vp) && b1.i == b2.i &&
              b1.j == b2.j,
          "span map: the left sides differ");
  require(is_slice_map(b1.E, b2.E, s.e), "span map: e is not E1 -> E2 over the base");
  require(is_slice_map(b1.B, b2.B, s.b), "span map: b is not B1 -> B2 over the base");
  require(is_slice_map(b1.Bp, b2.Bp, s.bp), "span map: b' is not B1' -> B2' over the base");
  if (!(compose(b2.p, s.e) == compose(s.b, b1.p))) throw PropertyError("span map: p2∘e != b∘p1");
  if (!(compose(b2.q, s.bp) == compose(s.b, b1.q))) throw PropertyError("span map: q2∘b' != b∘q1");
}

PshMor induced_problem_map(const LiftContext& c1, const LiftContext& c2, const SpanMap& s) {
  const LiftBoundary& b1 = c1.boundary();
  return c1.restricted().map_to(c2.restricted(), exp_map(c1.UE(), c2.UE(), id(b1.U.total), s.e),
                                exp_map(c1.VpBp(), c2.VpBp(), id(b1.Vp.total), s.bp));
}

std::string explain_witness(const Witness& w) {
  Frame fr = frame(w.F1, w.F2, w.span, w.rel);
  require(w.H.src() == w.F1.context().restricted().obj() && w.H.dst() == fr.VR->obj(),
          "witness: H is not a map P1' -> [V,R]");
  if (!(compose(fr.leg0, w.H) == fr.f0)) return "[V,r0]∘H != [V,e]∘F1";
  if (!(compose(fr.leg1, w.H) == fr.f1)) return "[V,r1]∘H != F2∘induced";
  return {};
}

bool check_witness(const Witness& w) { return explain_witness(w).empty(); }

WitnessSearch search_witness(const LiftStruct& F1, const LiftStruct& F2, const SpanMap& s, const FibRel& r) {
  Frame fr = frame(F1, F2, s, r);
  const Presheaf& D = F1.context().restricted().obj();
  // The two leg equations are pointwise, so they cut the candidates per element.
  std::vector<std::vector<std::vector<int>>> cand(D.cat().num_objects());
  for (int c = 0; c < D.cat().num_objects(); ++c) {
    cand[c].resize(D.size(c));
    for (int k = 0; k < D.size(c); ++k)
      for (int x = 0; x < fr.VR->obj().size(c); ++x)
        if (fr.leg0(c, x) == fr.f0(c, k) && fr.leg1(c, x) == fr.f1(c, k)) cand[c][k].push_back(x);
  }
  WitnessSearch out;
  std::optional<Components> found;
  out.examined = HomSearch(D, fr.VR->obj())
                     .candidates([&](int c, int k) { return cand[c][k]; })
                     .label("witness search")
                     .run([&](const Components& comp) {
                       found = comp;
                       return false;
                     });
  if (found) {
    out.witness = Witness{F1, F2, s, r, PshMor(D, fr.VR->obj(), *found)};
  } else {
    out.exhausted = HomSearch(D, fr.VR->obj()).label("witness search").count();
  }
  return out;
}

HomotopyWitness construct_homotopy_witness(const LiftStruct& F1, const LiftStruct& F2, const SpanMap& s,
                                           const IntervalStruct& i, const std::optional<PshMor>& ell) {
  const LiftBoundary& b2 = F2.boundary();
  FibRel r = path_relation(i, b2.E, b2.B, b2.p);
  Frame fr = frame(F1, F2, s, r);
  const LiftContext& c2 = F2.context();
  const Presheaf& D = F1.context().restricted().obj();
  PshMor d = compose(c2.rho(), fr.induced);  // D -> C
  Pullback DI = product(D, i.I.total);
  const LocalExp& VE2 = *fr.VE2;

  auto ends_ok = [&](int c, int k, int t, int x) {
    if (t == i.pt0(c, 0) && x != fr.f0(c, k)) return false;
    if (t == i.pt1(c, 0) && x != fr.f1(c, k)) return false;
    return true;
  };

  PshMor L;
  if (ell) {
    require(ell->src() == DI.obj() && ell->dst() == VE2.obj(), "homotopy witness: ell is not D × I -> [V,E2]");
    L = *ell;
    for (int c = 0; c < D.cat().num_objects(); ++c)
      for (int x = 0; x < DI.obj().size(c); ++x) {
        int k = DI.first(c, x), t = DI.second(c, x), v = L(c, x);
        if (t == i.pt0(c, 0) && v != fr.f0(c, k)) throw PropertyError("homotopy witness: ℓ(-,0) != f0");
        if (t == i.pt1(c, 0) && v != fr.f1(c, k)) throw PropertyError("homotopy witness: ℓ(-,1) != f1");
        if (c2.pi()(c, v) != d(c, k)) throw PropertyError("homotopy witness: π∘ℓ != d∘proj");
      }
  } else {
    std::optional<PshMor> found = HomSearch(DI.obj(), VE2.obj())
                                      .candidates([&](int c, int x) {
                                        int k = DI.first(c, x), t = DI.second(c, x);
                                        std::vector<int> out;
                                        for (int v : c2.pi_fibre(c, d(c, k)))
                                          if (ends_ok(c, k, t, v)) out.push_back(v);
                                        return out;
                                      })
                                      .label("homotopy search")
                                      .first();
    if (!found) throw NoConstruction("no witness constructible by this method");
    L = *found;
  }

  // H(k)(h, v) is the path t ↦ ℓ(k·h, t)(v) in the fibre over f(k)(v).
  const Presheaf& B2 = b2.B.total;
  PshMor phi = to_terminal(B2);
  PulledBack pI = pullback_functor(phi, i.I);
  PathObj f = path_objects(interval_pullback(i, phi), slice_obj(b2.p), slice_terminal(B2), b2.p);
  const LocalExp& R = *f.PE;
  const Presheaf& V = b2.V.total;
  PshMor H = build(D, fr.VR->obj(), [&](int c, int k) {
    int delta = F1.context().restricted_slice().anchor(c, k);
    return fr.VR->lambda(c, delta, [&](int c2, int h, int v) {
      int k2 = D.act(h, k);
      int beta = b2.p(c2, VE2.ev(c2, fr.f1(c2, k2), v));
      return R.lambda(c2, beta, [&](int c3, int h2, int a) {
        int t = pI.pb.second(c3, a);
        int k3 = D.act(h2, k2);
        return VE2.ev(c3, L(c3, DI.at(c3, k3, t)), V.act(h2, v));
      });
    });
  });
  return {Witness{F1, F2, s, r, H}, DI, L};
}

}  // namespace liftlab
