#include "liftlab/leibniz.hpp"

#include <functional>

namespace liftlab {

namespace {

PshMor id(const Presheaf& a) { return identity(a); }

void require(bool ok, const std::string& msg) {
  if (!ok) throw ShapeError(msg);
}

bool same_slice(const SliceObj& a, const SliceObj& b) { return a.total == b.total && a.anchor == b.anchor; }

PshMor build(const Presheaf& src, const Presheaf& dst, const std::function<int(int, int)>& fn) {
  Components comp(src.cat().num_objects());
  for (int c = 0; c < src.cat().num_objects(); ++c) {
    comp[c].resize(src.size(c));
    for (int k = 0; k < src.size(c); ++k) comp[c][k] = fn(c, k);
  }
  return PshMor(src, dst, std::move(comp));
}

void require_approx(const ApproxStruct& a, const char* where) {
  std::string why = explain_pp_approx(a);
  if (!why.empty()) throw PropertyError(std::string(where) + ": " + why);
}

PullbackPower power_of(const ApproxStruct& a, const SliceObj& Lp, const PshMor& l) {
  const BoundaryPair& bp = a.pair();
  return pullback_power(bp.dL, bp.L, Lp, bp.dl, l, a.sE.rel_to, a.sB.rel_to, a.p);
}

// The boundary produced by right_pullback along the pullback-hom square.
LiftBoundary unrestricted_boundary(const BoundaryPair& bp, const PullbackHomSquare& sq) {
  return make_boundary(bp.dV, bp.V, sq.apex_slice(), sq.pp.Dp_slice(), bp.dv, sq.left);
}

// A map [A×B̲, T]_B̲ -> [A, T] forgetting that a section is fibred over B̲. The local
// exponent is the pullback of the global one along B̲ -> 1.
PshMor forget_base(const SectionSpace& local, const PulledBack& pA, const SectionSpace& global) {
  const Presheaf& base = local.anchor().dst();
  return build(local.obj(), global.obj(), [&](int c, int s) {
    int d = local.delta(c, s);
    return global.lambda(c, 0, [&](int c2, int h, int a) { return local.apply(c, s, h, pA.pb.at(c2, base.act(h, d), a)); });
  });
}

// Global data pulled back along C -> 1, and the isomorphisms to the local objects.
struct LocalData {
  PshMor phi;
  PullbackHomSquare global, local;
  PulledBack apex, Dp;
  PshMor iso_apex, iso_Dp, left;
};

LocalData local_data(const ApproxStruct& a, const GlobalLeibniz& g) {
  const BoundaryPair& bp = a.pair();
  const Presheaf& C = bp.base();
  LocalData ld;
  ld.phi = to_terminal(C);
  auto pulled = [&](const Presheaf& x) { return pullback_functor(ld.phi, over_terminal(x)); };
  PulledBack pdL = pulled(g.dl.src()), pL = pulled(g.dl.dst()), pLp = pulled(g.l.dst());
  PulledBack pE = pulled(g.p.src()), pEb = pulled(g.p.dst());
  require(g.l.src() == g.dl.dst(), "local transpose: ∂L -> L -> L' do not compose");
  require(same_slice(bp.dL, pdL.obj) && same_slice(bp.L, pL.obj) && bp.dl == pullback_functor_map(pdL, pL, g.dl),
          "local transpose: second map of the pair is not the constant family ∂L -> L");
  require(same_slice(a.sE.rel_to, pE.obj) && same_slice(a.sB.rel_to, pEb.obj) &&
              a.p == pullback_functor_map(pE, pEb, g.p),
          "local transpose: right map is not the constant family E -> E̲");

  ld.global = pullback_hom_square(pullback_power(over_terminal(g.dl.src()), over_terminal(g.dl.dst()),
                                                 over_terminal(g.l.dst()), g.dl, g.l, over_terminal(g.p.src()),
                                                 over_terminal(g.p.dst()), g.p));
  ld.local = pullback_hom_square(power_of(a, pLp.obj, pullback_functor_map(pL, pLp, g.l)));
  const PullbackPower& gp = ld.global.pp;
  const PullbackPower& lp = ld.local.pp;

  auto exp_iso = [&](const PulledBack& pa, const ExpRef& ge, const PulledBack& pt) {
    PulledBack px = pullback_functor(ld.phi, ge->slice());
    PshMor m = pullback_exp(ld.phi, over_terminal(pa.pb.right()), over_terminal(pt.pb.right()));
    return std::function<int(int, int, int)>([px, m](int c, int d, int s) { return m(c, px.pb.at(c, d, s)); });
  };
  auto LE = exp_iso(pL, gp.LE, pE), dLE = exp_iso(pdL, gp.dLE, pE), LpEb = exp_iso(pLp, gp.LpEb, pEb);

  ld.apex = pullback_functor(ld.phi, ld.global.apex_slice());
  ld.Dp = pullback_functor(ld.phi, gp.Dp_slice());
  ld.iso_apex = build(ld.apex.obj.total, ld.local.apex.obj(), [&](int c, int y) {
    int d = ld.apex.pb.first(c, y), k = ld.apex.pb.second(c, y);
    return ld.local.apex.at(c, LE(c, d, ld.global.apex.first(c, k)), LpEb(c, d, ld.global.apex.second(c, k)));
  });
  ld.iso_Dp = build(ld.Dp.obj.total, lp.Dp.obj(), [&](int c, int y) {
    int d = ld.Dp.pb.first(c, y), k = ld.Dp.pb.second(c, y);
    return lp.Dp.at(c, dLE(c, d, gp.Dp.first(c, k)), LpEb(c, d, gp.Dp.second(c, k)));
  });
  ld.left = pullback_functor_map(ld.apex, ld.Dp, ld.global.left);
  return ld;
}

}  // namespace

SliceObj over_left(const Pullback& pb, const SliceObj& left) {
  require(pb.left() == left.total, "over_left: first leg does not start at the given object");
  return {pb.obj(), compose(left.anchor, pb.p1())};
}

// ---------------------------------------------------------------------------
// Pullback-powers and the transpose

PullbackPower pullback_power(const SliceObj& dL, const SliceObj& L, const SliceObj& Lp, const PshMor& dl,
                             const PshMor& l, const SliceObj& E, const SliceObj& Eb, const PshMor& p) {
  require(is_slice_map(dL, L, dl) && is_slice_map(L, Lp, l) && is_slice_map(E, Eb, p),
          "pullback power: maps over the base expected");
  PullbackPower pp{dL, L, Lp, E, Eb, dl, l, p, {}, {}, {}, {}, {}, {}, {}, {}, {}};
  pp.LE = local_exp(L, E);
  pp.dLE = local_exp(dL, E);
  pp.LEb = local_exp(L, Eb);
  pp.dLEb = local_exp(dL, Eb);
  pp.LpEb = local_exp(Lp, Eb);
  PshMor to_corner = exp_map(*pp.dLE, *pp.dLEb, id(dL.total), p);
  pp.D = Pullback(to_corner, exp_map(*pp.LEb, *pp.dLEb, dl, id(Eb.total)));
  pp.Dp = Pullback(to_corner, exp_map(*pp.LpEb, *pp.dLEb, compose(l, dl), id(Eb.total)));
  pp.hat = pp.D.pair(exp_map(*pp.LE, *pp.dLE, dl, id(E.total)), exp_map(*pp.LE, *pp.LEb, id(L.total), p));
  pp.q = pp.Dp.map_to(pp.D, id(pp.dLE->obj()), exp_map(*pp.LpEb, *pp.LEb, l, id(Eb.total)));
  return pp;
}

LiftBoundary transposed_boundary(const BoundaryPair& bp, const PullbackPower& pp) {
  require(bp.base() == pp.E.base(), "transposed boundary: different bases");
  LiftBoundary b = make_boundary(bp.dV, bp.V, pp.LE->slice(), pp.D_slice(), bp.dv, pp.hat);
  return restrict_right(b, pp.Dp_slice(), pp.q);
}

LiftBoundary product_boundary(const ApproxStruct& a, const SliceObj& Lp, const PshMor& l) {
  const BoundaryPair& bp = a.pair();
  require(is_slice_map(bp.L, Lp, l), "product boundary: L -> L' is not a map over the base");
  Corners k = corners(bp);
  Pullback VLp = slice_product(bp.V, Lp);
  LiftBoundary b = make_boundary(a.candidate(), over(k.VL), a.sE.rel_to, a.sB.rel_to, a.incl, a.p);
  return restrict_left(b, over(VLp), k.VL.map_to(VLp, id(bp.V.total), l));
}

LiftStruct leibniz_transpose(const LiftStruct& F, const ApproxStruct& a, const SliceObj& Lp, const PshMor& l) {
  require_approx(a, "leibniz transpose");
  require(F.boundary() == product_boundary(a, Lp, l), "leibniz transpose: structure is not on ∂(V×L) -> V×L -> V×L'");
  const BoundaryPair& bp = a.pair();
  const Corners k = corners(bp);
  const PullbackPower pp = power_of(a, Lp, l);
  const ConeSpace cs = cone_space(bp, a.sE.rel_to);
  const Pullback VLp = slice_product(bp.V, Lp);
  const ExpRef KE = local_exp(a.candidate(), a.sE.rel_to);
  ContextRef ctx = make_context(transposed_boundary(bp, pp));

  return internalize(ctx, [&](const LiftProblem& pr) {
    const SliceObj& X = pr.X;
    Pullback XdV = slice_product(X, bp.dV), XV = slice_product(X, bp.V);
    // f† and g†, curried in X
    PshMor fd = cs.e1->curry(X, [&](int c, int x, int y) {
      return pp.LE->ev(c, pr.u(c, XdV.at(c, x, k.dVL.first(c, y))), k.dVL.second(c, y));
    });
    PshMor gd = cs.e2->curry(X, [&](int c, int x, int y) {
      int v = pr.v(c, XV.at(c, x, k.VdL.first(c, y)));
      return pp.dLE->ev(c, pp.Dp.first(c, v), k.VdL.second(c, y));
    });
    PshMor u = KE->uncurry(slice_product(X, a.candidate()), compose(a.sE.iso, cs.pb.pair(fd, gd)));
    Pullback XVLp = slice_product(X, over(VLp));
    PshMor h = build(XVLp.obj(), a.sB.rel_to.total, [&](int c, int y) {
      int x = XVLp.first(c, y), vl = XVLp.second(c, y);
      int v = pr.v(c, XV.at(c, x, VLp.first(c, vl)));
      return pp.LpEb->ev(c, pp.Dp.second(c, v), VLp.second(c, vl));
    });
    PshMor sol = solve(F, {X, u, h});
    Pullback XVL = slice_product(X, over(k.VL));
    return pp.LE->curry(over(XV), [&](int c, int z, int y) {
      return sol(c, XVL.at(c, XV.first(c, z), k.VL.at(c, XV.second(c, z), y)));
    });
  });
}

LiftStruct leibniz_untranspose(const LiftStruct& G, const ApproxStruct& a, const SliceObj& Lp, const PshMor& l) {
  require_approx(a, "leibniz untranspose");
  const BoundaryPair& bp = a.pair();
  const Corners k = corners(bp);
  const PullbackPower pp = power_of(a, Lp, l);
  require(G.boundary() == transposed_boundary(bp, pp), "leibniz untranspose: structure is not on the transposed boundary");
  const ConeSpace cs = cone_space(bp, a.sE.rel_to);
  const Pullback VLp = slice_product(bp.V, Lp);
  const ExpRef KE = local_exp(a.candidate(), a.sE.rel_to);
  ContextRef ctx = make_context(product_boundary(a, Lp, l));

  return internalize(ctx, [&](const LiftProblem& pr) {
    const SliceObj& X = pr.X;
    PshMor cone = compose(a.sE.inverse, KE->curry(slice_product(X, a.candidate()), X, pr.u));
    PshMor fd = compose(cs.pb.p1(), cone), gd = compose(cs.pb.p2(), cone);
    Pullback XdV = slice_product(X, bp.dV), XV = slice_product(X, bp.V), XVLp = slice_product(X, over(VLp));
    PshMor u = pp.LE->curry(over(XdV), [&](int c, int z, int y) {
      return cs.e1->ev(c, fd(c, XdV.first(c, z)), k.dVL.at(c, XdV.second(c, z), y));
    });
    PshMor g = pp.dLE->curry(over(XV), [&](int c, int z, int y) {
      return cs.e2->ev(c, gd(c, XV.first(c, z)), k.VdL.at(c, XV.second(c, z), y));
    });
    PshMor h = pp.LpEb->curry(over(XV), [&](int c, int z, int y) {
      return pr.v(c, XVLp.at(c, XV.first(c, z), VLp.at(c, XV.second(c, z), y)));
    });
    PshMor sol = solve(G, {X, u, pp.Dp.pair(g, h)});
    Pullback XVL = slice_product(X, over(k.VL));
    return build(XVL.obj(), a.sE.rel_to.total, [&](int c, int y) {
      int x = XVL.first(c, y), vl = XVL.second(c, y);
      return pp.LE->ev(c, sol(c, XV.at(c, x, k.VL.first(c, vl))), k.VL.second(c, vl));
    });
  });
}

// ---------------------------------------------------------------------------
// Removing the right restriction

std::string PullbackHomSquare::certify(const std::vector<Presheaf>& tests) const {
  return certify_pullback(top, left, pp.hat, pp.q, tests);
}

PullbackHomSquare pullback_hom_square(const PullbackPower& pp) {
  PullbackHomSquare sq{pp, Pullback(exp_map(*pp.LE, *pp.LEb, id(pp.L.total), pp.p),
                                    exp_map(*pp.LpEb, *pp.LEb, pp.l, id(pp.Eb.total))),
                       {}, {}};
  sq.top = sq.apex.p1();
  sq.left = sq.apex.map_to(pp.Dp, exp_map(*pp.LE, *pp.dLE, pp.dl, id(pp.E.total)), id(pp.LpEb->obj()));
  return sq;
}

LiftStruct transpose_unrestricted(const LiftStruct& F, const ApproxStruct& a, const SliceObj& Lp, const PshMor& l) {
  LiftStruct G = leibniz_transpose(F, a, Lp, l);
  PullbackHomSquare sq = pullback_hom_square(power_of(a, Lp, l));
  return right_pullback(G, sq.apex_slice(), sq.top, sq.left);
}

LiftStruct untranspose_unrestricted(const LiftStruct& H, const ApproxStruct& a, const SliceObj& Lp, const PshMor& l) {
  PullbackHomSquare sq = pullback_hom_square(power_of(a, Lp, l));
  require(H.boundary() == unrestricted_boundary(a.pair(), sq),
          "untranspose: structure is not against the pullback-power");
  LiftStruct G = right_pullback_inv(H, transposed_boundary(a.pair(), sq.pp), sq.top);
  return leibniz_untranspose(G, a, Lp, l);
}

// ---------------------------------------------------------------------------
// Constant families over a base

PshMor pullback_exp(const PshMor& phi, const SliceObj& A, const SliceObj& E) {
  require(A.base() == E.base() && phi.dst() == A.base(), "pullback_exp: objects over different bases");
  ExpRef AE = local_exp(A, E);
  PulledBack px = pullback_functor(phi, AE->slice());
  PulledBack pA = pullback_functor(phi, A), pE = pullback_functor(phi, E);
  ExpRef to = local_exp(pA.obj, pE.obj);
  const Presheaf& D = phi.src();
  return build(px.obj.total, to->obj(), [&](int c, int x) {
    int d = px.pb.first(c, x), s = px.pb.second(c, x);
    return to->lambda(c, d, [&](int c2, int h, int y) {
      int d2 = D.act(h, d);
      return pE.pb.at(c2, d2, AE->apply(c, s, h, pA.pb.second(c2, y)));
    });
  });
}

LiftStruct transpose_local(const LiftStruct& F, const ApproxStruct& a, const GlobalLeibniz& g) {
  LocalData ld = local_data(a, g);
  const PullbackPower& lp = ld.local.pp;
  LiftStruct S = transpose_unrestricted(F, a, lp.Lp, lp.l);
  LiftStruct R = right_restrict(S, ld.Dp.obj, ld.iso_Dp);
  return right_pullback(R, ld.apex.obj, ld.iso_apex, ld.left);
}

LiftStruct untranspose_local(const LiftStruct& H, const ApproxStruct& a, const GlobalLeibniz& g) {
  LocalData ld = local_data(a, g);
  const PullbackPower& lp = ld.local.pp;
  LiftBoundary rb = restrict_right(unrestricted_boundary(a.pair(), ld.local), ld.Dp.obj, ld.iso_Dp);
  LiftStruct R = right_pullback_inv(H, rb, ld.iso_apex);
  LiftStruct S = right_restrict(R, lp.Dp_slice(), inverse(ld.iso_Dp));
  return untranspose_unrestricted(S, a, lp.Lp, lp.l);
}

// ---------------------------------------------------------------------------
// Intervals

IntervalStruct make_interval(const SliceObj& I, const SliceObj& dI, const PshMor& pt0, const PshMor& pt1,
                             const PshMor& di, const PshMor& f0, const PshMor& f1) {
  const Presheaf& C = I.base();
  require(dI.base() == C, "interval: I and ∂I over different bases");
  SliceObj one = slice_terminal(C);
  require(is_slice_map(one, I, pt0) && is_slice_map(one, I, pt1), "interval: points are not sections of I");
  require(is_slice_map(dI, I, di), "interval: ∂I -> I is not a map over the base");
  require(is_slice_map(one, dI, f0) && is_slice_map(one, dI, f1), "interval: factorisations are not sections of ∂I");
  if (!(compose(di, f0) == pt0)) throw PropertyError("interval: {0} does not factor through ∂I");
  if (!(compose(di, f1) == pt1)) throw PropertyError("interval: {1} does not factor through ∂I");
  Pullback meet(pt0, pt1);
  if (!(compose(f0, meet.p1()) == compose(f1, meet.p2())))
    throw PropertyError("interval: {0} ∩ {1} does not commute in ∂I");
  return {I, dI, pt0, pt1, di, f0, f1, meet};
}

IntervalStruct finset_interval(bool distinct) {
  CatRef t = terminal_category();
  Presheaf one = terminal_presheaf(t), two = constant_presheaf(t, 2);
  PshMor p0(one, two, {{0}}), p1(one, two, {{distinct ? 1 : 0}});
  if (distinct) return make_interval(over_terminal(two), over_terminal(two), p0, p1, id(two), p0, p1);
  return make_interval(over_terminal(two), over_terminal(one), p0, p1, p0, id(one), id(one));
}

IntervalStruct interval_pullback(const IntervalStruct& i, const PshMor& phi) {
  require(phi.dst() == i.base(), "interval pullback: phi does not land in the base");
  PulledBack pI = pullback_functor(phi, i.I), pdI = pullback_functor(phi, i.dI);
  const Presheaf& D = phi.src();
  auto section = [&](const PulledBack& px, const PshMor& s) {
    return build(D, px.obj.total, [&](int c, int d) { return px.pb.at(c, d, s(c, phi(c, d))); });
  };
  return make_interval(pI.obj, pdI.obj, section(pI, i.pt0), section(pI, i.pt1), pullback_functor_map(pdI, pI, i.di),
                       section(pdI, i.f0), section(pdI, i.f1));
}

const RelIntervalCert::Entry* RelIntervalCert::find(const SliceObj& B) const {
  for (const auto& e : certs)
    if (same_slice(e.B, B)) return &e;
  return nullptr;
}

IntervalCheck check_interval(const IntervalStruct& i, const std::vector<SliceObj>& rel_to) {
  IntervalCheck out;
  RelIntervalCert cert{i, {}};
  for (std::size_t n = 0; n < rel_to.size(); ++n) {
    const SliceObj& B = rel_to[n];
    require(B.base() == i.base(), "check_interval: object over a different base");
    const std::string which = " for object #" + std::to_string(n);
    RelIntervalCert::Entry e;
    e.B = B;
    ExpRef M = local_exp(i.meet_slice(), B);
    if (!is_iso(M->anchor())) {
      out.failure = "[{0} ∩ {1}, B] is not terminal" + which;
      return out;
    }
    e.point_inv = M->anchor();
    e.point = inverse(e.point_inv);
    e.BB = slice_product(B, B);
    ExpRef dIB = local_exp(i.dI, B);
    e.split = build(dIB->obj(), e.BB.obj(), [&](int c, int s) {
      int d = dIB->delta(c, s);
      return e.BB.at(c, dIB->ev(c, s, i.f0(c, d)), dIB->ev(c, s, i.f1(c, d)));
    });
    if (!is_iso(e.split)) {
      out.failure = "[∂I, B] -> B × B is not an isomorphism" + which;
      return out;
    }
    e.split_inv = inverse(e.split);
    cert.certs.push_back(std::move(e));
  }
  out.cert = std::move(cert);
  return out;
}

RelIntervalCert require_interval(const IntervalStruct& i, const std::vector<SliceObj>& rel_to) {
  IntervalCheck r = check_interval(i, rel_to);
  if (!r.cert) throw PropertyError("not an interval: " + r.failure);
  return *r.cert;
}

// ---------------------------------------------------------------------------
// Path objects

PathObj path_objects(const IntervalStruct& i, const SliceObj& E, const SliceObj& B, const PshMor& p) {
  require(E.base() == i.base() && B.base() == i.base(), "path objects: E, B and I over different bases");
  require(is_slice_map(E, B, p), "path objects: E -> B is not a map over the base");
  PathObj po{i, E, B, p, local_exp(i.I, E), local_exp(i.dI, E), local_exp(i.I, B), local_exp(i.dI, B), {}, {}, {}, {}};
  po.evE = exp_map(*po.PE, *po.dPE, i.di, id(E.total));
  po.evB = exp_map(*po.PB, *po.dPB, i.di, id(B.total));
  po.corner = Pullback(exp_map(*po.dPE, *po.dPB, id(i.dI.total), p), po.evB);
  po.hat = po.corner.pair(po.evE, exp_map(*po.PE, *po.PB, id(i.I.total), p));
  return po;
}

PullbackPowerCube pullback_power_cube(const IntervalStruct& i, const SliceObj& E, const SliceObj& B,
                                      const PshMor& p, const std::vector<Presheaf>& tests) {
  require(i.base() == terminal_presheaf(i.base().base()), "pullback-power cube: interval is not global");
  const Presheaf& Bb = E.base();
  PshMor phi = to_terminal(Bb);
  PullbackPowerCube cube;
  cube.local = path_objects(interval_pullback(i, phi), E, B, p);
  cube.global = path_objects(i, over_terminal(E.total), over_terminal(B.total), p);
  cube.IBb = local_exp(i.I, over_terminal(Bb));
  cube.constant = build(Bb, cube.IBb->obj(), [&](int c, int b) {
    return cube.IBb->lambda(c, 0, [&](int, int h, int) { return Bb.act(h, b); });
  });
  PulledBack pI = pullback_functor(phi, i.I), pdI = pullback_functor(phi, i.dI);
  const PathObj& L = cube.local;
  const PathObj& G = cube.global;
  cube.forget_path = forget_base(*L.PE, pI, *G.PE);
  cube.forget_corner = L.corner.map_to(G.corner, forget_base(*L.dPE, pdI, *G.dPE), forget_base(*L.PB, pI, *G.PB));
  cube.path_to_IBb = exp_map(*G.PE, *cube.IBb, id(i.I.total), E.anchor);
  cube.corner_to_IBb = compose(exp_map(*G.PB, *cube.IBb, id(i.I.total), B.anchor), G.corner.p2());
  cube.top = certify_pullback(cube.forget_path, L.PE->anchor(), cube.path_to_IBb, cube.constant, tests);
  cube.bottom = certify_pullback(cube.forget_corner, L.corner_slice().anchor, cube.corner_to_IBb, cube.constant, tests);
  cube.front = certify_pullback(cube.forget_path, L.hat, G.hat, cube.forget_corner, tests);
  return cube;
}

// ---------------------------------------------------------------------------
// Path transposition

namespace {

struct PathData {
  GlobalLeibniz g;
  PullbackPower pp;   // global, L' = L = I
  Pullback EE;        // E ×_B E
  PshMor corner;      // E ×_B E -> D
  PathObj fibred;     // over B
  PshMor to_apex, ends;
};

PathData path_data(const RelIntervalCert& cert, const PshMor& p) {
  const IntervalStruct& i = cert.base;
  require(i.base() == terminal_presheaf(i.base().base()), "path transpose: interval is not global");
  const Presheaf& E = p.src();
  const Presheaf& B = p.dst();
  if (!cert.find(over_terminal(E)) || !cert.find(over_terminal(B)))
    throw LookupError("path transpose: the interval certificate does not cover E and B");
  PathData pd;
  pd.g = {i.di, id(i.I.total), p};
  pd.pp = pullback_power(i.dI, i.I, i.I, i.di, id(i.I.total), over_terminal(E), over_terminal(B), p);
  pd.corner = constant_corner(cert, p);
  pd.EE = Pullback(p, p);

  PshMor phi = to_terminal(B);
  pd.fibred = path_objects(interval_pullback(i, phi), slice_obj(p), slice_terminal(B), p);
  PullbackHomSquare sq = pullback_hom_square(pd.pp);
  PshMor forget = forget_base(*pd.fibred.PE, pullback_functor(phi, i.I), *pd.pp.LE);
  pd.to_apex = sq.apex.pair(forget, compose(exp_map(*pd.pp.LE, *pd.pp.LEb, id(i.I.total), p), forget));
  const PathObj& f = pd.fibred;
  pd.ends = build(f.PE->obj(), pd.EE.obj(), [&](int c, int s) {
    int d = f.PE->delta(c, s);
    return pd.EE.at(c, f.PE->ev(c, s, f.interval.pt0(c, d)), f.PE->ev(c, s, f.interval.pt1(c, d)));
  });
  return pd;
}

}  // namespace

PshMor constant_corner(const RelIntervalCert& cert, const PshMor& p) {
  const IntervalStruct& i = cert.base;
  const RelIntervalCert::Entry* eE = cert.find(over_terminal(p.src()));
  if (!eE) throw LookupError("constant corner: the interval certificate does not cover E");
  PullbackPower pp = pullback_power(i.dI, i.I, i.I, i.di, id(i.I.total), over_terminal(p.src()),
                                    over_terminal(p.dst()), p);
  Pullback EE(p, p);
  const Presheaf& B = p.dst();
  return build(EE.obj(), pp.Dp.obj(), [&](int c, int y) {
    int e0 = EE.first(c, y), e1 = EE.second(c, y), b = p(c, e0);
    int path = pp.LpEb->lambda(c, 0, [&](int, int h, int) { return B.act(h, b); });
    return pp.Dp.at(c, eE->split_inv(c, eE->BB.at(c, e0, e1)), path);
  });
}

LiftStruct path_transpose(const LiftStruct& F, const ApproxStruct& a, const RelIntervalCert& cert, const PshMor& p) {
  PathData pd = path_data(cert, p);
  LiftStruct G = transpose_local(F, a, pd.g);
  PshMor phi = to_terminal(a.pair().base());
  PulledBack pEE = pullback_functor(phi, over_terminal(pd.EE.obj()));
  PulledBack pDp = pullback_functor(phi, pd.pp.Dp_slice());
  PulledBack pP = pullback_functor(phi, over_terminal(pd.fibred.PE->obj()));
  PulledBack pApex = pullback_functor(phi, pullback_hom_square(pd.pp).apex_slice());
  LiftStruct R = right_restrict(G, pEE.obj, pullback_functor_map(pEE, pDp, pd.corner));
  return right_pullback(R, pP.obj, pullback_functor_map(pP, pApex, pd.to_apex), pullback_functor_map(pP, pEE, pd.ends));
}

LiftStruct path_untranspose(const LiftStruct& H, const ApproxStruct& a, const RelIntervalCert& cert,
                            const PshMor& p) {
  PathData pd = path_data(cert, p);
  if (!is_iso(pd.corner))
    throw PropertyError("path untranspose: E ×_B E -> [∂I,E] ×_{[∂I,B]} [I,B] is not an isomorphism");
  LocalData ld = local_data(a, pd.g);
  PshMor phi = ld.phi;
  PulledBack pEE = pullback_functor(phi, over_terminal(pd.EE.obj()));
  PulledBack pApex = pullback_functor(phi, pullback_hom_square(pd.pp).apex_slice());
  PulledBack pP = pullback_functor(phi, over_terminal(pd.fibred.PE->obj()));
  LiftBoundary gb = make_boundary(a.pair().dV, a.pair().V, ld.apex.obj, ld.Dp.obj, a.pair().dv, ld.left);
  LiftBoundary rb = restrict_right(gb, pEE.obj, pullback_functor_map(pEE, ld.Dp, pd.corner));
  LiftStruct R = right_pullback_inv(H, rb, pullback_functor_map(pP, pApex, pd.to_apex));
  LiftStruct G = right_restrict(R, ld.Dp.obj, pullback_functor_map(ld.Dp, pEE, inverse(pd.corner)));
  return untranspose_local(G, a, pd.g);
}

}  // namespace liftlab
