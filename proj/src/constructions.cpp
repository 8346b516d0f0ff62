// Constructions on lifting structures. The restriction, pullback, composition and
// retract constructions are composites of maps between problem objects; the base
// change constructions evaluate their pointwise formula at the generic problem.

#include "liftlab/lifting.hpp"

namespace liftlab {

namespace {

PshMor id(const Presheaf& a) { return identity(a); }

bool same_slice(const SliceObj& a, const SliceObj& b) { return a.total == b.total && a.anchor == b.anchor; }

bool is_identity_map(const PshMor& f) { return f.src() == f.dst() && f == identity(f.src()); }

void require(bool ok, const std::string& msg) {
  if (!ok) throw ShapeError(msg);
}

PshMor build(const Presheaf& src, const Presheaf& dst, const std::function<int(int, int)>& fn) {
  Components comp(src.cat().num_objects());
  for (int c = 0; c < src.cat().num_objects(); ++c) {
    comp[c].resize(src.size(c));
    for (int k = 0; k < src.size(c); ++k) comp[c][k] = fn(c, k);
  }
  return PshMor(PshMor::Unchecked{}, src, dst, std::move(comp));
}

PshMor checked_inverse(const PshMor& f, const std::string& what) {
  if (!is_iso(f)) throw PropertyError(what + " is not an isomorphism");
  return inverse(f);
}

}  // namespace

// ---------------------------------------------------------------------------
// Restrictions

LiftStruct right_restrict(const LiftStruct& F, const SliceObj& Bpp, const PshMor& q) {
  const LiftContext& c1 = F.context();
  ContextRef c2 = make_context(restrict_right(F.boundary(), Bpp, q));
  PshMor to_old = c2->restricted().map_to(c1.restricted(), id(c1.UE().obj()),
                                          exp_map(c2->VpBp(), c1.VpBp(), id(c1.boundary().Vp.total), q));
  return LiftStruct(c2, compose(F.internal(), to_old));
}

LiftStruct right_restrict(const LiftStruct& F, const PshMor& q) {
  require(F.boundary().global(), "right_restrict: sliced structure needs the anchor of the new object");
  return right_restrict(F, over_terminal(q.src()), q);
}

LiftStruct left_restrict(const LiftStruct& F, const SliceObj& Vpp, const PshMor& j) {
  const LiftContext& c1 = F.context();
  ContextRef c2 = make_context(restrict_left(F.boundary(), Vpp, j));
  PshMor to_old = c2->restricted().map_to(c1.restricted(), id(c1.UE().obj()),
                                          exp_map(c2->VpBp(), c1.VpBp(), j, id(c1.boundary().Bp.total)));
  return LiftStruct(c2, compose(F.internal(), to_old));
}

LiftStruct left_restrict(const LiftStruct& F, const PshMor& j) {
  require(F.boundary().global(), "left_restrict: sliced structure needs the anchor of the new object");
  return left_restrict(F, over_terminal(j.dst()), j);
}

// ---------------------------------------------------------------------------
// Pullback along the right restriction

namespace {

// E' with q': E' -> E and p': E' -> B' is a pullback of p along q.
void check_right_square(const LiftBoundary& b, const SliceObj& Ep, const PshMor& qp, const PshMor& pp) {
  require(is_slice_map(Ep, b.E, qp), "right pullback: q' is not a map E' -> E over the base");
  require(is_slice_map(Ep, b.Bp, pp), "right pullback: p' is not a map E' -> B' over the base");
  if (!(compose(b.p, qp) == compose(b.q, pp))) throw PropertyError("right pullback: square does not commute");
  if (!is_iso(Pullback(b.p, b.q).pair(qp, pp))) throw PropertyError("right pullback: square is not a pullback");
}

}  // namespace

LiftStruct right_pullback(const LiftStruct& F, const SliceObj& Ep, const PshMor& q_prime, const PshMor& p_prime) {
  const LiftBoundary& b = F.boundary();
  const LiftContext& cf = F.context();
  check_right_square(b, Ep, q_prime, p_prime);
  LiftBoundary gb = b;
  gb.E = Ep;
  gb.B = b.Bp;
  gb.p = p_prime;
  gb.q = id(b.Bp.total);
  ContextRef cg = make_context(gb);

  // [V,E'] ≅ [V,E] ×_{[V,B]} [V,B']
  ExpRef vbp = local_exp(b.V, b.Bp);
  Pullback K(exp_map(cf.VE(), cf.VB(), id(b.V.total), b.p), exp_map(*vbp, cf.VB(), id(b.V.total), b.q));
  PshMor kappa = K.pair(exp_map(cg->VE(), cf.VE(), id(b.V.total), q_prime),
                        exp_map(cg->VE(), *vbp, id(b.V.total), p_prime));
  PshMor kinv = checked_inverse(kappa, "right pullback: comparison [V,E'] -> [V,E] ×_{[V,B]} [V,B']");

  const Pullback& ppg = cg->restricted();
  PshMor to_f = ppg.map_to(cf.restricted(), exp_map(cg->UE(), cf.UE(), id(b.U.total), q_prime), id(cf.VpBp().obj()));
  PshMor bottom = compose(exp_map(cg->VpBp(), *vbp, b.j, id(b.Bp.total)), ppg.p2());
  return LiftStruct(cg, compose(kinv, K.pair(compose(F.internal(), to_f), bottom)));
}

LiftStruct right_pullback_inv(const LiftStruct& G, const LiftBoundary& target, const PshMor& q_prime) {
  const LiftBoundary& g = G.boundary();
  require(is_identity_map(g.q), "right_pullback_inv: structure is right restricted");
  require(same_slice(g.U, target.U) && same_slice(g.V, target.V) && same_slice(g.Vp, target.Vp) && g.i == target.i &&
              g.j == target.j,
          "right_pullback_inv: left boundaries differ");
  require(same_slice(g.B, target.Bp), "right_pullback_inv: structure is not against a map into B'");
  check_right_square(target, g.E, q_prime, g.p);
  ContextRef cf = make_context(target);
  const LiftContext& cg = G.context();

  // [U,E'] ≅ [U,E] ×_{[U,B]} [U,B']
  ExpRef ubp = local_exp(target.U, target.Bp);
  Pullback KU(exp_map(cf->UE(), cf->UB(), id(target.U.total), target.p),
              exp_map(*ubp, cf->UB(), id(target.U.total), target.q));
  PshMor kappa = KU.pair(exp_map(cg.UE(), cf->UE(), id(target.U.total), q_prime),
                         exp_map(cg.UE(), *ubp, id(target.U.total), g.p));
  PshMor kinv = checked_inverse(kappa, "right pullback: comparison [U,E'] -> [U,E] ×_{[U,B]} [U,B']");

  const Pullback& ppf = cf->restricted();
  PshMor restricted_b = compose(exp_map(cf->VpBp(), *ubp, compose(target.j, target.i), id(target.Bp.total)), ppf.p2());
  PshMor e_prime = compose(kinv, KU.pair(ppf.p1(), restricted_b));
  PshMor to_g = cg.restricted().pair(e_prime, ppf.p2());
  PshMor back = exp_map(cg.VE(), cf->VE(), id(target.V.total), q_prime);
  return LiftStruct(cf, compose(back, compose(G.internal(), to_g)));
}

// ---------------------------------------------------------------------------
// Composition

LiftStruct right_compose(const LiftStruct& Fp, const LiftStruct& F) {
  const LiftBoundary& a = Fp.boundary();
  const LiftBoundary& b = F.boundary();
  require(a.restriction() == Restriction::None, "right_compose: first structure is restricted");
  require(same_slice(a.U, b.U) && same_slice(a.V, b.V) && a.i == b.i, "right_compose: left maps differ");
  require(same_slice(a.B, b.E), "right_compose: right maps are not composable");
  LiftBoundary rb = b;
  rb.E = a.E;
  rb.p = compose(b.p, a.p);
  ContextRef cr = make_context(rb);

  const Pullback& ppr = cr->restricted();
  PshMor to_f = ppr.map_to(F.context().restricted(), exp_map(cr->UE(), F.context().UE(), id(b.U.total), a.p),
                           id(cr->VpBp().obj()));
  PshMor lower = compose(F.internal(), to_f);
  PshMor to_fp = Fp.context().restricted().pair(ppr.p1(), lower);
  return LiftStruct(cr, compose(Fp.internal(), to_fp));
}

LiftStruct left_compose(const LiftStruct& Fp, const LiftStruct& F) {
  const LiftBoundary& a = Fp.boundary();
  const LiftBoundary& b = F.boundary();
  require(a.restriction() == Restriction::None, "left_compose: first structure is restricted");
  require(same_slice(a.E, b.E) && same_slice(a.B, b.B) && a.p == b.p, "left_compose: right maps differ");
  require(same_slice(a.V, b.U), "left_compose: left maps are not composable");
  LiftBoundary rb = b;
  rb.U = a.U;
  rb.i = compose(b.i, a.i);
  ContextRef cr = make_context(rb);

  const Pullback& ppr = cr->restricted();
  PshMor to_ub = exp_map(cr->VpBp(), F.context().UB(), compose(b.j, b.i), b.q);
  PshMor upper = compose(Fp.internal(), Fp.context().restricted().pair(ppr.p1(), compose(to_ub, ppr.p2())));
  return LiftStruct(cr, compose(F.internal(), F.context().restricted().pair(upper, ppr.p2())));
}

// ---------------------------------------------------------------------------
// Retracts

std::string check_retract(const LiftBoundary& b, const Retract& rt) {
  if (!is_slice_map(rt.U0, rt.V0, rt.i0)) return "i0 is not a map U0 -> V0 over the base";
  if (!is_slice_map(rt.V0, rt.V0p, rt.j0)) return "j0 is not a map V0 -> V0' over the base";
  if (!is_slice_map(rt.U0, b.U, rt.m)) return "m is not a map U0 -> U over the base";
  if (!is_slice_map(b.U, rt.U0, rt.n)) return "n is not a map U -> U0 over the base";
  if (!is_slice_map(rt.V0, b.V, rt.s)) return "s is not a map V0 -> V over the base";
  if (!is_slice_map(b.V, rt.V0, rt.r)) return "r is not a map V -> V0 over the base";
  if (!is_slice_map(rt.V0p, b.Vp, rt.sp)) return "s' is not a map V0' -> V' over the base";
  if (!is_slice_map(b.Vp, rt.V0p, rt.rp)) return "r' is not a map V' -> V0' over the base";
  if (!(compose(rt.n, rt.m) == identity(rt.U0.total))) return "n∘m != id";
  if (!(compose(rt.r, rt.s) == identity(rt.V0.total))) return "r∘s != id";
  if (!(compose(rt.rp, rt.sp) == identity(rt.V0p.total))) return "r'∘s' != id";
  if (!(compose(b.i, rt.m) == compose(rt.s, rt.i0))) return "i∘m != s∘i0";
  if (!(compose(rt.i0, rt.n) == compose(rt.r, b.i))) return "i0∘n != r∘i";
  if (!(compose(b.j, rt.s) == compose(rt.sp, rt.j0))) return "j∘s != s'∘j0";
  if (!(compose(rt.j0, rt.r) == compose(rt.rp, b.j))) return "j0∘r != r'∘j";
  return {};
}

LiftStruct left_retract(const LiftStruct& F, const Retract& rt) {
  const LiftBoundary& b = F.boundary();
  std::string err = check_retract(b, rt);
  if (!err.empty()) throw PropertyError("left_retract: " + err);
  LiftBoundary rb = b;
  rb.U = rt.U0;
  rb.V = rt.V0;
  rb.Vp = rt.V0p;
  rb.i = rt.i0;
  rb.j = rt.j0;
  ContextRef c0 = make_context(rb);
  const LiftContext& cf = F.context();
  PshMor to_f = c0->restricted().map_to(cf.restricted(), exp_map(c0->UE(), cf.UE(), rt.n, id(b.E.total)),
                                        exp_map(c0->VpBp(), cf.VpBp(), rt.rp, id(b.Bp.total)));
  PshMor back = exp_map(cf.VE(), c0->VE(), rt.s, id(b.E.total));
  return LiftStruct(c0, compose(back, compose(F.internal(), to_f)));
}

// ---------------------------------------------------------------------------
// Pullback stability through pushforwards

namespace {

struct TcSpaces {
  Pullback we, wb;  // W ×_C E, W ×_C B
  std::shared_ptr<const Pushforward> pe, pb;
  PshMor pushed;  // t_*(W × p)
};

TcSpaces tc_spaces(const TcData& d) {
  TcSpaces s;
  s.we = slice_product(d.W, d.E);
  s.wb = slice_product(d.W, d.B);
  s.pe = pushforward(d.t, {s.we.obj(), s.we.p1()});
  s.pb = pushforward(d.t, {s.wb.obj(), s.wb.p1()});
  s.pushed = section_map(*s.pe, *s.pb, s.we.map_to(s.wb, identity(d.W.total), d.p));
  return s;
}

}  // namespace

std::string check_tc_data(const SliceObj& U, const SliceObj& V, const PshMor& i, const TcData& d) {
  if (!is_slice_map(U, V, i)) return "i is not a map U -> V over the base";
  if (!is_slice_map(d.W, V, d.t)) return "t is not a map W -> V over the base";
  if (!is_slice_map(d.Up, d.W, d.ip)) return "i' is not a map U' -> W over the base";
  if (!is_slice_map(d.Up, U, d.tp)) return "t' is not a map U' -> U over the base";
  if (!is_slice_map(d.E, d.B, d.p)) return "p is not a map E -> B over the base";
  if (!(compose(i, d.tp) == compose(d.t, d.ip))) return "square i∘t' = t∘i' does not commute";
  if (!is_iso(Pullback(d.t, i).pair(d.ip, d.tp))) return "U' is not the pullback of i along t";
  return {};
}

LiftBoundary tc_source_boundary(const SliceObj& U, const SliceObj& V, const PshMor& i, const TcData& d) {
  std::string err = check_tc_data(U, V, i, d);
  if (!err.empty()) throw PropertyError("tc_pullback_stable: " + err);
  TcSpaces s = tc_spaces(d);
  SliceObj E{s.pe->obj(), compose(V.anchor, s.pe->anchor())};
  SliceObj B{s.pb->obj(), compose(V.anchor, s.pb->anchor())};
  return make_boundary(U, V, E, B, i, s.pushed);
}

LiftProblem tc_transpose_problem(const LiftContext& src, const TcData& d, const LiftProblem& pr) {
  const LiftBoundary& b = src.boundary();
  TcSpaces s = tc_spaces(d);
  const SliceObj& X = pr.X;
  Pullback xu = slice_product(X, b.U), xv = slice_product(X, b.V);
  Pullback xup = slice_product(X, d.Up), xw = slice_product(X, d.W);
  Pullback wu(d.t, b.i);
  PshMor up_inv = inverse(wu.pair(d.ip, d.tp));

  // (i'∘proj, u) transposed along t* ⊣ t_*
  SliceObj z1{xu.obj(), compose(b.i, xu.p2())};
  Pullback za1(z1.anchor, d.t);
  PshMor g1 = build(za1.obj(), s.we.obj(), [&](int c, int k) {
    int z = za1.first(c, k), w = za1.second(c, k);
    int x = xu.first(c, z), a = xu.second(c, z);
    int ap = up_inv(c, wu.at(c, w, a));
    return s.we.at(c, w, pr.u(c, xup.at(c, x, ap)));
  });
  PshMor uf = s.pe->curry(za1, z1, g1);

  // (proj, v) transposed
  SliceObj z2{xv.obj(), xv.p2()};
  Pullback za2(z2.anchor, d.t);
  PshMor g2 = build(za2.obj(), s.wb.obj(), [&](int c, int k) {
    int z = za2.first(c, k), w = za2.second(c, k);
    return s.wb.at(c, w, pr.v(c, xw.at(c, xv.first(c, z), w)));
  });
  PshMor vf = s.pb->curry(za2, z2, g2);
  return {X, uf, vf};
}

PshMor tc_transpose_solution(const LiftContext& src, const TcData& d, const SliceObj& X, const PshMor& sol) {
  const LiftBoundary& b = src.boundary();
  TcSpaces s = tc_spaces(d);
  Pullback xv = slice_product(X, b.V), xw = slice_product(X, d.W);
  Pullback za2(xv.p2(), d.t);
  PshMor h = s.pe->uncurry(za2, sol);
  return build(xw.obj(), d.E.total, [&](int c, int k) {
    int x = xw.first(c, k), w = xw.second(c, k);
    int z = xv.at(c, x, d.t(c, w));
    return s.we.second(c, h(c, za2.at(c, z, w)));
  });
}

LiftStruct tc_pullback_stable_slice(const LiftStruct& F, const TcData& d) {
  const LiftBoundary& b = F.boundary();
  require(b.restriction() == Restriction::None, "tc_pullback_stable: structure is restricted");
  if (!(tc_source_boundary(b.U, b.V, b.i, d) == b))
    throw ShapeError("tc_pullback_stable: structure is not against the pushed forward map");
  ContextRef cr = make_context(make_boundary(d.Up, d.W, d.E, d.B, d.ip, d.p));
  return internalize(cr, [&](const LiftProblem& pr) {
    LiftProblem tp = tc_transpose_problem(F.context(), d, pr);
    return tc_transpose_solution(F.context(), d, pr.X, solve(F, tp));
  });
}

LiftStruct tc_pullback_stable(const LiftStruct& F, const TcData& d) {
  require(F.boundary().global(), "tc_pullback_stable: structure lives in a slice");
  return tc_pullback_stable_slice(F, d);
}

// ---------------------------------------------------------------------------
// Base change

LiftBoundary pullback_boundary(const LiftBoundary& b, const PshMor& phi) {
  PulledBack U = pullback_functor(phi, b.U), V = pullback_functor(phi, b.V), Vp = pullback_functor(phi, b.Vp);
  PulledBack E = pullback_functor(phi, b.E), B = pullback_functor(phi, b.B), Bp = pullback_functor(phi, b.Bp);
  LiftBoundary out{U.obj,
                   V.obj,
                   Vp.obj,
                   E.obj,
                   B.obj,
                   Bp.obj,
                   pullback_functor_map(U, V, b.i),
                   pullback_functor_map(E, B, b.p),
                   pullback_functor_map(V, Vp, b.j),
                   pullback_functor_map(Bp, B, b.q)};
  std::string err = check_boundary(out);
  if (!err.empty()) throw ShapeError("pullback boundary: " + err);
  return out;
}

LiftStruct rebase_pullback(const LiftStruct& F, const PshMor& phi) {
  const LiftBoundary& b = F.boundary();
  ContextRef cd = make_context(pullback_boundary(b, phi));
  Pullback pu(phi, b.U.anchor), pvp(phi, b.Vp.anchor), pv(phi, b.V.anchor);
  Pullback pe(phi, b.E.anchor), pbp(phi, b.Bp.anchor);
  return internalize(cd, [&](const LiftProblem& pr) {
    // the same problem seen over C through phi_!
    SliceObj xc = postcompose(phi, pr.X);
    Pullback xu = slice_product(pr.X, cd->boundary().U), xvp = slice_product(pr.X, cd->boundary().Vp);
    Pullback xv = slice_product(pr.X, cd->boundary().V);
    Pullback cu = slice_product(xc, b.U), cvp = slice_product(xc, b.Vp), cv = slice_product(xc, b.V);
    PshMor u = build(cu.obj(), b.E.total, [&](int c, int k) {
      int x = cu.first(c, k);
      return pe.second(c, pr.u(c, xu.at(c, x, pu.at(c, pr.X.anchor(c, x), cu.second(c, k)))));
    });
    PshMor v = build(cvp.obj(), b.Bp.total, [&](int c, int k) {
      int x = cvp.first(c, k);
      return pbp.second(c, pr.v(c, xvp.at(c, x, pvp.at(c, pr.X.anchor(c, x), cvp.second(c, k)))));
    });
    PshMor sol = solve(F, {xc, u, v});
    return build(xv.obj(), cd->boundary().E.total, [&](int c, int k) {
      int x = xv.first(c, k), a = pv.second(c, xv.second(c, k));
      return pe.at(c, pr.X.anchor(c, x), sol(c, cv.at(c, x, a)));
    });
  });
}

LiftBoundary postcompose_boundary(const LiftBoundary& b, const PshMor& p, const SliceObj& E, const SliceObj& B,
                                  const PshMor& pd) {
  require(b.restriction() == Restriction::None || b.restriction() == Restriction::Left,
          "rebase_postcompose: structure is right restricted");
  PulledBack pe = pullback_functor(p, E), pb = pullback_functor(p, B);
  if (!same_slice(b.E, pe.obj) || !same_slice(b.B, pb.obj) || !(b.p == pullback_functor_map(pe, pb, pd)))
    throw PropertyError("rebase_postcompose: right map is not the pullback of the supplied map");
  LiftBoundary out{postcompose(p, b.U), postcompose(p, b.V), postcompose(p, b.Vp), E, B, B, b.i, pd, b.j,
                   identity(B.total)};
  std::string err = check_boundary(out);
  if (!err.empty()) throw ShapeError("postcompose boundary: " + err);
  return out;
}

LiftStruct rebase_postcompose(const LiftStruct& F, const PshMor& p, const SliceObj& E, const SliceObj& B,
                              const PshMor& pd) {
  const LiftBoundary& b = F.boundary();
  ContextRef cd = make_context(postcompose_boundary(b, p, E, B, pd));
  Pullback pe(p, E.anchor), pb(p, B.anchor);
  return internalize(cd, [&](const LiftProblem& pr) {
    // the same problem seen over C through p*
    PulledBack xp = pullback_functor(p, pr.X);
    const Pullback& px = xp.pb;
    Pullback xu = slice_product(pr.X, cd->boundary().U), xvp = slice_product(pr.X, cd->boundary().Vp);
    Pullback xv = slice_product(pr.X, cd->boundary().V);
    Pullback cu = slice_product(xp.obj, b.U), cvp = slice_product(xp.obj, b.Vp), cv = slice_product(xp.obj, b.V);
    PshMor u = build(cu.obj(), b.E.total, [&](int c, int k) {
      int x0 = cu.first(c, k), a = cu.second(c, k);
      return pe.at(c, px.first(c, x0), pr.u(c, xu.at(c, px.second(c, x0), a)));
    });
    PshMor v = build(cvp.obj(), b.Bp.total, [&](int c, int k) {
      int x0 = cvp.first(c, k), a = cvp.second(c, k);
      return pb.at(c, px.first(c, x0), pr.v(c, xvp.at(c, px.second(c, x0), a)));
    });
    PshMor sol = solve(F, {xp.obj, u, v});
    return build(xv.obj(), E.total, [&](int c, int k) {
      int x = xv.first(c, k), a = xv.second(c, k);
      return pe.second(c, sol(c, cv.at(c, px.at(c, b.V.anchor(c, a), x), a)));
    });
  });
}

}  // namespace liftlab
