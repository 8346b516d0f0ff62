// Pushout-product approximations. Base change transports the two isomorphisms one
// element at a time: an element of an exponential over the new base is a section,
// and each of its values is computed from the old structure at the matching point
// of the old base.

#include "liftlab/approx.hpp"

#include <stdexcept>

namespace liftlab {

namespace {

PshMor id(const Presheaf& a) { return identity(a); }

void require(bool ok, const std::string& msg) {
  if (!ok) throw ShapeError(msg);
}

bool same_slice(const SliceObj& a, const SliceObj& b) { return a.total == b.total && a.anchor == b.anchor; }

bool same_pair(const BoundaryPair& a, const BoundaryPair& b) {
  return same_slice(a.dV, b.dV) && same_slice(a.V, b.V) && same_slice(a.dL, b.dL) && same_slice(a.L, b.L) &&
         a.dv == b.dv && a.dl == b.dl;
}

PshMor build(const Presheaf& src, const Presheaf& dst, const std::function<int(int, int)>& fn) {
  Components comp(src.cat().num_objects());
  for (int c = 0; c < src.cat().num_objects(); ++c) {
    comp[c].resize(src.size(c));
    for (int k = 0; k < src.size(c); ++k) comp[c][k] = fn(c, k);
  }
  return PshMor(src, dst, std::move(comp));
}

}  // namespace

void check_boundary_pair(const BoundaryPair& bp) {
  const Presheaf& c = bp.base();
  require(bp.dV.base() == c && bp.dL.base() == c && bp.L.base() == c, "boundary pair: objects over different bases");
  require(is_slice_map(bp.dV, bp.V, bp.dv), "boundary pair: dv is not a map over the base");
  require(is_slice_map(bp.dL, bp.L, bp.dl), "boundary pair: dl is not a map over the base");
}

Corners corners(const BoundaryPair& bp) {
  check_boundary_pair(bp);
  Corners k{slice_product(bp.dV, bp.dL), slice_product(bp.dV, bp.L), slice_product(bp.V, bp.dL),
            slice_product(bp.V, bp.L), {}, {}, {}, {}};
  k.left = k.dVdL.map_to(k.dVL, id(bp.dV.total), bp.dl);
  k.top = k.dVdL.map_to(k.VdL, bp.dv, id(bp.dL.total));
  k.dvl = k.dVL.map_to(k.VL, bp.dv, id(bp.L.total));
  k.vdl = k.VdL.map_to(k.VL, id(bp.V.total), bp.dl);
  return k;
}

ConeSpace cone_space(const BoundaryPair& bp, const SliceObj& E) {
  require(E.base() == bp.base(), "cone space: target over a different base");
  ConeSpace cs;
  cs.k = corners(bp);
  cs.E = E;
  cs.e1 = local_exp(over(cs.k.dVL), E);
  cs.e2 = local_exp(over(cs.k.VdL), E);
  cs.e0 = local_exp(over(cs.k.dVdL), E);
  PshMor r1 = exp_map(*cs.e1, *cs.e0, cs.k.left, id(E.total));
  PshMor r2 = exp_map(*cs.e2, *cs.e0, cs.k.top, id(E.total));
  cs.pb = Pullback(r1, r2);
  return cs;
}

PshMor cone_map(const ConeSpace& from, const ConeSpace& to, const PshMor& p) {
  require(from.k.VL.obj() == to.k.VL.obj(), "cone map: different boundary pairs");
  return from.pb.map_to(to.pb, exp_map(*from.e1, *to.e1, id(from.k.dVL.obj()), p),
                        exp_map(*from.e2, *to.e2, id(from.k.VdL.obj()), p));
}

PshMor cone_restriction(const ConeSpace& cs) {
  ExpRef whole = local_exp(over(cs.k.VL), cs.E);
  return cs.pb.pair(exp_map(*whole, *cs.e1, cs.k.dvl, id(cs.E.total)),
                    exp_map(*whole, *cs.e2, cs.k.vdl, id(cs.E.total)));
}

bool check_boundary_approx(const BoundaryApprox& b) {
  ConeSpace cs = cone_space(b.pair, b.rel_to);
  require(b.candidate.base() == b.pair.base(), "boundary approximation: candidate over a different base");
  ExpRef ke = local_exp(b.candidate, b.rel_to);
  require(b.iso.src() == cs.pb.obj() && b.iso.dst() == ke->obj(), "boundary approximation: iso has the wrong shape");
  require(b.inverse.src() == ke->obj() && b.inverse.dst() == cs.pb.obj(),
          "boundary approximation: inverse has the wrong shape");
  if (!is_slice_map(cs.slice(), ke->slice(), b.iso)) return false;
  return compose(b.inverse, b.iso) == id(cs.pb.obj()) && compose(b.iso, b.inverse) == id(ke->obj());
}

std::string explain_pp_approx(const ApproxStruct& a) {
  require(same_pair(a.sE.pair, a.sB.pair), "approximation: the two structures use different boundary pairs");
  require(same_slice(a.sE.candidate, a.sB.candidate), "approximation: the two structures use different candidates");
  require(is_slice_map(a.sE.rel_to, a.sB.rel_to, a.p), "approximation: p is not a map E -> B over the base");
  ConeSpace cE = cone_space(a.pair(), a.sE.rel_to), cB = cone_space(a.pair(), a.sB.rel_to);
  require(is_slice_map(a.candidate(), over(cE.k.VL), a.incl), "approximation: incl is not a map into V × L");
  if (!check_boundary_approx(a.sE)) return "the structure relative to E is not an isomorphism";
  if (!check_boundary_approx(a.sB)) return "the structure relative to B is not an isomorphism";
  ExpRef kE = local_exp(a.candidate(), a.sE.rel_to), kB = local_exp(a.candidate(), a.sB.rel_to);
  PshMor postp = exp_map(*kE, *kB, id(a.candidate().total), a.p);
  if (!(compose(a.sB.iso, cone_map(cE, cB, a.p)) == compose(postp, a.sE.iso)))
    return "p does not preserve the boundary structures";
  ExpRef whole = local_exp(over(cB.k.VL), a.sB.rel_to);
  PshMor restrict = exp_map(*whole, *kB, a.incl, id(a.sB.rel_to.total));
  if (!(compose(a.sB.iso, cone_restriction(cB)) == restrict))
    return "incl does not realise the structure relative to B";
  return {};
}

bool check_pp_approx(const ApproxStruct& a) { return explain_pp_approx(a).empty(); }

ApproxStruct canonical_approx(const BoundaryPair& bp, const SliceObj& E, const SliceObj& B, const PshMor& p) {
  Corners k = corners(bp);
  Pushout po = pushout(k.left, k.top);
  SliceObj K{po.obj, copair(po, over(k.dVL).anchor, over(k.VdL).anchor)};
  auto structure = [&](const SliceObj& T) {
    ConeSpace cs = cone_space(bp, T);
    ExpRef kt = local_exp(K, T);
    PshMor res = cs.pb.pair(exp_map(*kt, *cs.e1, po.in1, id(T.total)), exp_map(*kt, *cs.e2, po.in2, id(T.total)));
    if (!is_iso(res)) throw PropertyError("canonical approximation: restriction out of the pushout is not bijective");
    return BoundaryApprox{bp, K, T, inverse(res), res};
  };
  return {structure(E), structure(B), copair(po, k.dvl, k.vdl), p};
}

std::optional<ApproxStruct> search_approx(const BoundaryPair& bp, const SliceObj& candidate, const PshMor& incl,
                                          const SliceObj& E, const SliceObj& B, const PshMor& p) {
  ConeSpace cE = cone_space(bp, E), cB = cone_space(bp, B);
  require(is_slice_map(E, B, p), "approximation search: p is not a map over the base");
  require(is_slice_map(candidate, over(cB.k.VL), incl), "approximation search: incl is not a map into V × L");
  ExpRef kE = local_exp(candidate, E), kB = local_exp(candidate, B);
  if (cE.pb.obj().sizes() != kE->obj().sizes() || cB.pb.obj().sizes() != kB->obj().sizes()) return std::nullopt;
  const int n = bp.base().cat().num_objects();

  // the triangle fixes the structure relative to B on restrictions of maps out of V × L
  ExpRef whole = local_exp(over(cB.k.VL), B);
  PshMor restr = cone_restriction(cB);
  PshMor along = exp_map(*whole, *kB, incl, id(B.total));
  std::vector<std::vector<int>> forced(n);
  for (int c = 0; c < n; ++c) {
    forced[c].assign(cB.pb.obj().size(c), -1);
    for (int g = 0; g < whole->obj().size(c); ++g) {
      int& f = forced[c][restr(c, g)];
      if (f >= 0 && f != along(c, g)) return std::nullopt;
      f = along(c, g);
    }
  }
  PshMor anchorB = cB.slice().anchor, anchorE = cE.slice().anchor;
  PshMor over_p = cone_map(cE, cB, p);
  PshMor postp = exp_map(*kE, *kB, id(candidate.total), p);

  std::optional<ApproxStruct> found;
  HomSearch(cB.pb.obj(), kB->obj())
      .injective()
      .label("approximation search relative to B")
      .candidates([&](int c, int x) {
        if (forced[c][x] >= 0) return std::vector<int>{forced[c][x]};
        std::vector<int> out;
        for (int y = 0; y < kB->obj().size(c); ++y)
          if (kB->anchor()(c, y) == anchorB(c, x)) out.push_back(y);
        return out;
      })
      .run([&](const Components& isoB) {
        auto isoE = HomSearch(cE.pb.obj(), kE->obj())
                        .injective()
                        .label("approximation search relative to E")
                        .candidates([&](int c, int x) {
                          std::vector<int> out;
                          int want = isoB[c][over_p(c, x)];
                          for (int y = 0; y < kE->obj().size(c); ++y)
                            if (kE->anchor()(c, y) == anchorE(c, x) && postp(c, y) == want) out.push_back(y);
                          return out;
                        })
                        .first();
        if (!isoE) return true;
        PshMor iB(PshMor::Unchecked{}, cB.pb.obj(), kB->obj(), isoB);
        found = ApproxStruct{{bp, candidate, E, *isoE, inverse(*isoE)}, {bp, candidate, B, iB, inverse(iB)}, incl, p};
        return false;
      });
  return found;
}

// ---------------------------------------------------------------------------
// Base change

namespace {

// How an object over the old base relates to its counterpart over the new one.
// down(c, γ, a') gives the old point and element for a' (γ is a hint used only
// where a' alone does not determine it); up(c, d, a) goes back, d the new point.
struct Reindex {
  std::function<std::pair<int, int>(int c, int gamma, int a)> down;
  std::function<int(int c, int d, int a)> up;
};

struct Transport {
  const ConeSpace* old_cone;
  ExpRef old_k;
  const ConeSpace* new_cone;
  ExpRef new_k;
  Reindex a1, a2, k, t;
};

// The new iso: cone -> [K', T'].
PshMor transport_iso(const Transport& tr, const PshMor& old_iso) {
  const ConeSpace& oc = *tr.old_cone;
  const ConeSpace& nc = *tr.new_cone;
  const Presheaf& D = tr.new_k->anchor().dst();
  const Presheaf& C = tr.old_k->anchor().dst();
  const FinCat& cat = D.cat();
  PshMor nanchor = nc.slice().anchor;
  return build(nc.pb.obj(), tr.new_k->obj(), [&](int c, int x) {
    int delta = nanchor(c, x);
    int e1 = nc.pb.first(c, x), e2 = nc.pb.second(c, x);
    return tr.new_k->lambda(c, delta, [&](int c2, int h, int kk) {
      auto [gamma, k] = tr.k.down(c2, -1, kk);
      int d2 = D.act(h, delta);
      auto piece = [&](const SectionSpace& olds, const SectionSpace& news, int e, const Reindex& ri) {
        return olds.lambda(c2, gamma, [&](int c3, int h2, int a) {
          int a2 = ri.up(c3, D.act(h2, d2), a);
          int v = news.apply(c, e, cat.compose(h, h2), a2);
          return tr.t.down(c3, C.act(h2, gamma), v).second;
        });
      };
      int y = oc.pb.at(c2, piece(*oc.e1, *nc.e1, e1, tr.a1), piece(*oc.e2, *nc.e2, e2, tr.a2));
      int z = old_iso(c2, y);
      return tr.t.up(c2, d2, tr.old_k->apply(c2, z, cat.id(c2), k));
    });
  });
}

// The new inverse: [K', T'] -> cone.
PshMor transport_inverse(const Transport& tr, const PshMor& old_inv) {
  const ConeSpace& oc = *tr.old_cone;
  const ConeSpace& nc = *tr.new_cone;
  const Presheaf& D = tr.new_k->anchor().dst();
  const Presheaf& C = tr.old_k->anchor().dst();
  const FinCat& cat = D.cat();
  return build(tr.new_k->obj(), nc.pb.obj(), [&](int c, int z) {
    int delta = tr.new_k->anchor()(c, z);
    auto piece = [&](const SectionSpace& olds, const SectionSpace& news, bool first, const Reindex& ri) {
      return news.lambda(c, delta, [&](int c2, int h, int aa) {
        auto [gamma, a] = ri.down(c2, -1, aa);
        int d2 = D.act(h, delta);
        int w = tr.old_k->lambda(c2, gamma, [&](int c3, int h2, int k) {
          int kk = tr.k.up(c3, D.act(h2, d2), k);
          int v = tr.new_k->apply(c, z, cat.compose(h, h2), kk);
          return tr.t.down(c3, C.act(h2, gamma), v).second;
        });
        int y = old_inv(c2, w);
        int e = first ? oc.pb.first(c2, y) : oc.pb.second(c2, y);
        return tr.t.up(c2, d2, olds.apply(c2, e, cat.id(c2), a));
      });
    };
    return nc.pb.at(c, piece(*oc.e1, *nc.e1, true, tr.a1), piece(*oc.e2, *nc.e2, false, tr.a2));
  });
}

// Elements of a pulled-back object are pairs (d, a).
Reindex pulled(const PulledBack& px) {
  return {[px](int c, int, int a) {
            return std::pair{px.pb.f()(c, px.pb.first(c, a)), px.pb.second(c, a)};
          },
          [px](int c, int d, int a) { return px.pb.at(c, d, a); }};
}

// phi*A ×_D phi*B against A ×_C B
Reindex pulled_product(const PulledBack& pa, const PulledBack& pb, const Pullback& old_prod,
                       const Pullback& new_prod) {
  return {[=](int c, int, int x) {
            int a = pa.pb.second(c, new_prod.first(c, x)), b = pb.pb.second(c, new_prod.second(c, x));
            int d = pa.pb.first(c, new_prod.first(c, x));
            return std::pair{pa.pb.f()(c, d), old_prod.at(c, a, b)};
          },
          [=](int c, int d, int x) {
            return new_prod.at(c, pa.pb.at(c, d, old_prod.first(c, x)), pb.pb.at(c, d, old_prod.second(c, x)));
          }};
}

}  // namespace

ApproxStruct approx_pullback(const ApproxStruct& a, const PshMor& phi) {
  const BoundaryPair& bp = a.pair();
  require(phi.dst() == bp.base(), "approximation pullback: phi does not land in the base");
  PulledBack pdV = pullback_functor(phi, bp.dV), pV = pullback_functor(phi, bp.V);
  PulledBack pdL = pullback_functor(phi, bp.dL), pL = pullback_functor(phi, bp.L);
  PulledBack pK = pullback_functor(phi, a.candidate());
  PulledBack pE = pullback_functor(phi, a.sE.rel_to), pB = pullback_functor(phi, a.sB.rel_to);
  BoundaryPair nbp{pdV.obj, pV.obj, pdL.obj, pL.obj, pullback_functor_map(pdV, pV, bp.dv),
                   pullback_functor_map(pdL, pL, bp.dl)};
  Corners ok = corners(bp), nk = corners(nbp);

  PshMor incl = build(pK.obj.total, nk.VL.obj(), [&](int c, int x) {
    int d = pK.pb.first(c, x), k = pK.pb.second(c, x);
    int vl = a.incl(c, k);
    return nk.VL.at(c, pV.pb.at(c, d, ok.VL.first(c, vl)), pL.pb.at(c, d, ok.VL.second(c, vl)));
  });

  auto structure = [&](const BoundaryApprox& s, const PulledBack& pT) {
    ConeSpace oc = cone_space(bp, s.rel_to), nc = cone_space(nbp, pT.obj);
    Transport tr{&oc, local_exp(s.candidate, s.rel_to), &nc, local_exp(pK.obj, pT.obj),
                 pulled_product(pdV, pL, ok.dVL, nk.dVL), pulled_product(pV, pdL, ok.VdL, nk.VdL), pulled(pK),
                 pulled(pT)};
    return BoundaryApprox{nbp, pK.obj, pT.obj, transport_iso(tr, s.iso), transport_inverse(tr, s.inverse)};
  };
  return {structure(a.sE, pE), structure(a.sB, pB), incl, pullback_functor_map(pE, pB, a.p)};
}

ApproxStruct approx_postcompose(const ApproxStruct& a, const PshMor& p, const SliceObj& dJ, const SliceObj& J,
                                const PshMor& dj, const SliceObj& E, const SliceObj& B, const PshMor& pd) {
  const BoundaryPair& bp = a.pair();
  require(p.src() == bp.base(), "approximation postcomposition: p does not start at the base");
  require(is_slice_map(dJ, J, dj) && is_slice_map(E, B, pd), "approximation postcomposition: maps over D expected");
  require(J.base() == p.dst() && E.base() == p.dst(), "approximation postcomposition: objects not over D");
  PulledBack pdJ = pullback_functor(p, dJ), pJ = pullback_functor(p, J);
  PulledBack pE = pullback_functor(p, E), pB = pullback_functor(p, B);
  require(same_slice(bp.dL, pdJ.obj) && same_slice(bp.L, pJ.obj) && bp.dl == pullback_functor_map(pdJ, pJ, dj),
          "approximation postcomposition: second map is not the pullback of dj");
  require(same_slice(a.sE.rel_to, pE.obj) && same_slice(a.sB.rel_to, pB.obj) &&
              a.p == pullback_functor_map(pE, pB, pd),
          "approximation postcomposition: right map is not the pullback of E -> B");

  BoundaryPair nbp{postcompose(p, bp.dV), postcompose(p, bp.V), dJ, J, bp.dv, dj};
  SliceObj K = postcompose(p, a.candidate());
  Corners ok = corners(bp), nk = corners(nbp);
  PshMor incl = build(K.total, nk.VL.obj(), [&](int c, int x) {
    int vl = a.incl(c, x);
    return nk.VL.at(c, ok.VL.first(c, vl), pJ.pb.second(c, ok.VL.second(c, vl)));
  });

  // p_!A ×_D J' against A ×_C p*J'
  auto product = [&](const SliceObj& A, const PulledBack& pj, const Pullback& old_prod, const Pullback& new_prod) {
    PshMor anchor = A.anchor;
    return Reindex{[=](int c, int, int x) {
                     int v = new_prod.first(c, x), j = new_prod.second(c, x);
                     int gamma = anchor(c, v);
                     return std::pair{gamma, old_prod.at(c, v, pj.pb.at(c, gamma, j))};
                   },
                   [=](int c, int, int x) {
                     return new_prod.at(c, old_prod.first(c, x), pj.pb.second(c, old_prod.second(c, x)));
                   }};
  };
  PshMor kanchor = a.candidate().anchor;
  Reindex same{[kanchor](int c, int, int k) { return std::pair{kanchor(c, k), k}; },
               [](int, int, int k) { return k; }};
  auto value = [](const PulledBack& pt) {
    return Reindex{[pt](int c, int gamma, int t) { return std::pair{gamma, pt.pb.at(c, gamma, t)}; },
                   [pt](int c, int, int t) { return pt.pb.second(c, t); }};
  };
  auto structure = [&](const BoundaryApprox& s, const SliceObj& T, const PulledBack& pT) {
    ConeSpace oc = cone_space(bp, s.rel_to), nc = cone_space(nbp, T);
    Transport tr{&oc,
                 local_exp(s.candidate, s.rel_to),
                 &nc,
                 local_exp(K, T),
                 product(bp.dV, pJ, ok.dVL, nk.dVL),
                 product(bp.V, pdJ, ok.VdL, nk.VdL),
                 same,
                 value(pT)};
    return BoundaryApprox{nbp, K, T, transport_iso(tr, s.iso), transport_inverse(tr, s.inverse)};
  };
  return {structure(a.sE, E, pE), structure(a.sB, B, pB), incl, pd};
}

// ---------------------------------------------------------------------------
// Associativity

std::pair<bool, bool> assoc_transfer(const ApproxStruct& aUV, const ApproxStruct& aVW, const SliceObj& candidate,
                                     const PshMor& incl) {
  const BoundaryPair& uv = aUV.pair();
  const BoundaryPair& vw = aVW.pair();
  require(same_slice(uv.L, vw.V) && same_slice(uv.dL, vw.dV) && uv.dl == vw.dv,
          "associativity: the two approximations do not share the middle map");
  require(same_slice(aUV.sE.rel_to, aVW.sE.rel_to) && same_slice(aUV.sB.rel_to, aVW.sB.rel_to) && aUV.p == aVW.p,
          "associativity: the two approximations are relative to different maps");
  Corners kuv = corners(uv), kvw = corners(vw);
  SliceObj UV = over(kuv.VL), VW = over(kvw.VL);

  BoundaryPair left{uv.dV, uv.V, aVW.candidate(), VW, uv.dv, aVW.incl};
  BoundaryPair right{aUV.candidate(), UV, vw.dL, vw.L, aUV.incl, vw.dl};
  Pullback u_vw = slice_product(uv.V, VW), uv_w = slice_product(UV, vw.L);
  require(incl.dst() == u_vw.obj(), "associativity: incl does not land in U × (V × W)");
  PshMor reassoc = build(u_vw.obj(), uv_w.obj(), [&](int c, int x) {
    int u = u_vw.first(c, x), vwx = u_vw.second(c, x);
    return uv_w.at(c, kuv.VL.at(c, u, kvw.VL.first(c, vwx)), kvw.VL.second(c, vwx));
  });

  const SliceObj& E = aUV.sE.rel_to;
  const SliceObj& B = aUV.sB.rel_to;
  bool l = search_approx(left, candidate, incl, E, B, aUV.p).has_value();
  bool r = search_approx(right, candidate, compose(reassoc, incl), E, B, aUV.p).has_value();
  if (l != r) throw std::logic_error("associativity of pushout-product approximations violated");
  return {l, r};
}

}  // namespace liftlab
