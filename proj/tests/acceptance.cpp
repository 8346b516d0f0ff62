// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include <unistd.h>

#include "liftlab/relating.hpp"
#include "support/formulas.hpp"
#include "support/oracles.hpp"
#include "workspace.hpp"

using namespace liftlab;
using fx::fn;
using fx::set;

namespace {

struct Tally {
  long checks = 0, failures = 0;
  std::string first;
  void check(bool ok, const std::string& what) {
    ++checks;
    if (!ok && failures++ == 0) first = what;
  }
};

std::vector<SliceObj> params_for(const LiftBoundary& b) {
  return fx::universe(b, b.global() && b.cat()->num_objects() == 1 ? 3 : 2);
}

// ---------------------------------------------------------------------------
// 1. limits, colimits, exponentials and pushforwards

void topos(Tally& t) {
  auto a = arrow_category();
  auto pool = oracle::presheaves(a, 2);
  auto tests1 = oracle::presheaves(a, 1);
  auto reps = oracle::representables(a);
  auto sets = fx::small_sets();
  std::mt19937 rng(7);
  long instances = 0;
  auto pick = [&](const std::vector<PshMor>& ms) { return ms[rng() % ms.size()]; };

  for (int done = 0, trial = 0; done < 60 && trial < 2000; ++trial) {
    Presheaf x = oracle::pick(pool, rng), y = oracle::pick(pool, rng), z = oracle::pick(pool, rng);
    auto fs = enumerate_pshmors(x, z), gs = enumerate_pshmors(y, z);
    if (fs.empty() || gs.empty()) continue;
    Pullback pb(pick(fs), pick(gs));
    t.check(certify_pullback(pb.p1(), pb.p2(), pb.f(), pb.g(), reps).empty(), "pullback over the arrow category");
    ++done, ++instances;
  }
  for (const auto& x : sets)
    for (const auto& z : sets)
      for (const auto& y : sets)
        for (const auto& f : enumerate_pshmors(x, z))
          for (const auto& g : enumerate_pshmors(y, z)) {
            Pullback pb(f, g);
            t.check(certify_pullback(pb.p1(), pb.p2(), pb.f(), pb.g(), sets).empty(), "pullback of finite sets");
            ++instances;
          }

  for (int done = 0, trial = 0; done < 50 && trial < 2000; ++trial) {
    Presheaf s = oracle::pick(pool, rng), x = oracle::pick(pool, rng), y = oracle::pick(pool, rng);
    auto fs = enumerate_pshmors(s, x), gs = enumerate_pshmors(s, y);
    if (fs.empty() || gs.empty()) continue;
    Diagram d;
    d.objects = {s, x, y};
    d.edges = {{0, 1, pick(fs)}, {0, 2, pick(gs)}};
    t.check(certify_colimit(d, finite_colimit(d), tests1).empty(), "pushout over the arrow category");
    ++done, ++instances;
  }
  for (const auto& s : sets)
    for (const auto& x : sets)
      for (const auto& y : sets)
        for (const auto& f : enumerate_pshmors(s, x))
          for (const auto& g : enumerate_pshmors(s, y)) {
            Diagram d;
            d.objects = {s, x, y};
            d.edges = {{0, 1, f}, {0, 2, g}};
            t.check(certify_colimit(d, finite_colimit(d), sets).empty(), "pushout of finite sets");
            ++instances;
          }

  for (int done = 0, trial = 0; done < 30 && trial < 2000; ++trial) {
    Presheaf x = oracle::pick(pool, rng), z = oracle::pick(pool, rng);
    auto fs = enumerate_pshmors(x, z);
    if (fs.empty()) continue;
    Diagram d;
    d.objects = {x, z};
    d.edges = {{0, 1, pick(fs)}, {0, 1, pick(fs)}};
    t.check(certify_limit(d, finite_limit(d), tests1).empty(), "equalizer over the arrow category");
    ++done, ++instances;
  }

  for (const auto& x : tests1)
    for (const auto& p : tests1)
      for (const auto& q : tests1) {
        auto e = exponential(p, q);
        Pullback xp = product(x, p);
        auto lhs = enumerate_pshmors(xp.obj(), q);
        auto rhs = enumerate_pshmors(x, e->obj());
        std::set<Components> seen;
        bool back = true;
        for (const auto& f : lhs) {
          PshMor c = e->curry(xp, over_terminal(x), f);
          seen.insert(c.components());
          back = back && e->uncurry(xp, c) == f;
        }
        t.check(lhs.size() == rhs.size() && seen.size() == rhs.size() && back, "currying bijection");
        ++instances;
      }

  for (int checked = 0, trial = 0; checked < 12 && trial < 2000; ++trial) {
    Presheaf cc = oracle::pick(pool, rng), dd = oracle::pick(pool, rng), xx = oracle::pick(pool, rng);
    auto ps = enumerate_pshmors(cc, dd), xs = enumerate_pshmors(xx, cc);
    if (ps.empty() || xs.empty()) continue;
    PshMor p = pick(ps);
    SliceObj x = slice_obj(pick(xs));
    auto pf = pushforward(p, x);
    bool ok = true;
    for (const auto& zt : tests1)
      for (const auto& za : enumerate_pshmors(zt, dd)) {
        SliceObj z = slice_obj(za);
        Pullback zc(za, p);
        SliceObj pz{zc.obj(), zc.p2()};
        std::size_t left = 0, right = 0;
        std::set<Components> images;
        for (const auto& g : enumerate_pshmors(zc.obj(), x.total)) {
          if (!is_slice_map(pz, x, g)) continue;
          ++left;
          PshMor tr = pf->curry(zc, z, g);
          ok = ok && is_slice_map(z, pf->slice(), tr) && pf->uncurry(zc, tr) == g;
          images.insert(tr.components());
        }
        for (const auto& h : enumerate_pshmors(zt, pf->obj())) right += is_slice_map(z, pf->slice(), h);
        ok = ok && left == right && images.size() == right;
      }
    t.check(ok, "pushforward adjunction");
    ++checked, ++instances;
  }
  t.check(instances >= 200, "fewer than 200 instances");
}

// ---------------------------------------------------------------------------
// 2. internal structures and uniform families

void representability(Tally& t) {
  for (const auto& [name, b] : fx::global_fixtures()) {
    auto ctx = make_context(b);
    auto params = params_for(b);
    for (const auto& F : search_lift_struct(ctx)) {
      t.check(verify_family(*ctx, family_of(F, params)), name + ": solve-derived family");
      auto with_generic = params;
      with_generic.push_back(ctx->restricted_slice());
      Family fam = family_of(F, with_generic);
      LiftStruct back = internalize(ctx, [&](const LiftProblem& pr) {
        for (const auto& e : fam.entries)
          if (e.problem == pr) return e.solution;
        throw LookupError("problem missing from family");
      });
      t.check(back == F, name + ": round trip through the family");
    }
  }
  auto b = fx::fixture_a();
  auto ctx = make_context(b);
  auto params = fx::universe(b, 3);
  auto with = [&](const std::function<Table(int)>& choose) {
    Family fam{params, {}};
    for (const auto& X : params)
      for (const auto& pr : enumerate_problems(*ctx, X)) {
        Pullback xv = slice_product(X, b.V);
        fam.entries.push_back({pr, PshMor(xv.obj(), b.E.total, {choose(X.total.size(0))})});
      }
    return fam;
  };
  std::vector<std::function<Table(int)>> mixed = {
      [](int n) { return Table(n, n == 1 ? 0 : 1); },
      [](int n) { return Table(n, n == 2 ? 1 : 0); },
      [](int n) { return n == 2 ? Table{0, 1} : Table(n, 0); },
      [](int n) { return n == 3 ? Table{0, 0, 1} : Table(n, 0); },
      [](int n) { return n == 3 ? Table{1, 1, 1} : Table(n, 0); },
      [](int n) {
        Table r(n, 0);
        if (n > 0) r[n - 1] = 1;
        return r;
      },
  };
  for (const auto& choose : mixed) t.check(!verify_family(*ctx, with(choose)), "non-uniform family accepted");
}

// ---------------------------------------------------------------------------
// 3. solutions commute with reindexing

void uniformity(Tally& t) {
  for (const auto& [name, b] : fx::global_fixtures()) {
    auto ctx = make_context(b);
    auto params = params_for(b);
    for (const auto& F : search_lift_struct(ctx))
      for (const auto& X : params)
        for (const auto& Y : params) {
          Pullback xv = slice_product(X, b.V), yv = slice_product(Y, b.V);
          for (const auto& tm : oracle::slice_homs(Y, X)) {
            PshMor tv = yv.map_to(xv, tm, identity(b.V.total));
            for (const auto& pr : enumerate_problems(*ctx, X))
              t.check(solve(F, reindex(*ctx, pr, Y, tm)) == compose(solve(F, pr), tv), name);
          }
        }
  }
}

// ---------------------------------------------------------------------------
// 4. constructions against their pointwise formulas

void constructions(Tally& t) {
  using fx::each_problem;
  using fx::times;
  struct RightRestrict {
    LiftBoundary b;
    PshMor q;
  };
  for (const auto& cs : std::vector<RightRestrict>{
           {fx::fixture_a(), fx::bang(1)},
           {fx::fixture_a(), fx::bang(2)},
           {fx::point_in_two(), fx::bang(2)},
           {make_boundary(fn(1, 2, {0}), fn(3, 2, {0, 1, 1})), fn(1, 2, {1})},
           {make_boundary(fx::empty_into(1), fn(4, 2, {0, 0, 1, 1})), fn(3, 2, {1, 0, 1})}})
    for (const auto& F : search_lift_struct(cs.b)) {
      LiftStruct R = right_restrict(F, cs.q);
      each_problem(R.boundary(), 3, [&](const LiftProblem& pr) {
        t.check(solve(R, pr) == solve(F, {pr.X, pr.u, compose(cs.q, pr.v)}), "right_restrict");
      });
    }

  for (const auto& rc : {fx::right_case(fx::fixture_a(), fx::bang(1)),
                         fx::right_case(make_boundary(fx::empty_into(1), fn(4, 2, {0, 0, 1, 1})), fn(1, 2, {1})),
                         fx::right_case(make_boundary(fn(1, 2, {0}), fn(3, 2, {0, 1, 1})), fn(2, 2, {1, 1})),
                         fx::right_case(restrict_left(fx::fixture_a(), fn(1, 2, {1})), fx::bang(3))})
    for (const auto& F : search_lift_struct(rc.restricted)) {
      LiftStruct G = right_pullback(F, rc.Ep, rc.qp, rc.pp);
      each_problem(G.boundary(), 3, [&](const LiftProblem& pr) {
        t.check(solve(G, pr) == fx::right_pullback_formula(F, rc, pr), "right_pullback");
      });
    }

  PshMor p1 = fn(4, 2, {0, 0, 1, 1}), p2 = fx::bang(2);
  for (const PshMor& i : {fx::empty_into(1), fn(1, 2, {1})}) {
    auto fps = search_lift_struct(make_boundary(i, p1));
    auto fs = search_lift_struct(make_boundary(i, p2));
    for (std::size_t k = 0; k < fps.size(); k += 1 + fps.size() / 8)
      for (const auto& F : fs) {
        LiftStruct R = right_compose(fps[k], F);
        each_problem(R.boundary(), 3, [&](const LiftProblem& pr) {
          PshMor mid = solve(F, {pr.X, compose(p1, pr.u), pr.v});
          t.check(solve(R, pr) == solve(fps[k], {pr.X, pr.u, mid}), "right_compose");
        });
      }
  }

  struct LeftRestrict {
    LiftBoundary b;
    PshMor j;
  };
  for (const auto& cs : std::vector<LeftRestrict>{{fx::fixture_a(), fn(1, 2, {0})},
                                                  {fx::fixture_a(), identity(set(1))},
                                                  {fx::point_in_two(), fn(2, 3, {0, 2})},
                                                  {fx::point_in_two(), fx::bang(2)}})
    for (const auto& F : search_lift_struct(cs.b)) {
      LiftStruct R = left_restrict(F, cs.j);
      const LiftBoundary& b = R.boundary();
      each_problem(b, 3, [&](const LiftProblem& pr) {
        PshMor v = compose(pr.v, times(pr.X, F.boundary().Vp, b.Vp, cs.j));
        t.check(solve(R, pr) == solve(F, {pr.X, pr.u, v}), "left_restrict");
      });
    }

  PshMor ip = fx::empty_into(1), i = fn(1, 2, {0});
  for (const auto& Fp : search_lift_struct(make_boundary(ip, p2)))
    for (const auto& F : search_lift_struct(make_boundary(i, p2))) {
      LiftStruct R = left_compose(Fp, F);
      const LiftBoundary& b = R.boundary();
      each_problem(b, 3, [&](const LiftProblem& pr) {
        PshMor vi = compose(pr.v, times(pr.X, F.boundary().U, b.V, i));
        PshMor first = solve(Fp, {pr.X, pr.u, vi});
        t.check(solve(R, pr) == solve(F, {pr.X, first, pr.v}), "left_compose");
      });
    }

  Retract rt = fx::summand_retract();
  for (const auto& F : search_lift_struct(fx::summand_boundary())) {
    LiftStruct R = left_retract(F, rt);
    each_problem(R.boundary(), 3, [&](const LiftProblem& pr) {
      t.check(solve(R, pr) == fx::retract_formula(F, rt, pr), "left_retract");
    });
  }

  TcData d = fx::tc_fixture(fx::bang(2));
  LiftBoundary src = tc_source_boundary(over_terminal(set(0)), over_terminal(set(2)), fx::empty_into(2), d);
  for (const auto& F : search_lift_struct(src)) {
    LiftStruct R = tc_pullback_stable(F, d);
    each_problem(R.boundary(), 2,
                 [&](const LiftProblem& pr) { t.check(solve(R, pr) == fx::tc_formula(F, d, pr), "tc_pullback_stable"); });
  }
  for (const auto& b : {fx::point_in_two(), fx::fixture_a()}) {
    TcData e{b.V, b.U, b.E, b.B, identity(b.V.total), b.i, identity(b.U.total), b.p};
    for (const auto& F : search_lift_struct(tc_source_boundary(b.U, b.V, b.i, e))) {
      LiftStruct R = tc_pullback_stable(F, e);
      each_problem(b, 3, [&](const LiftProblem& pr) {
        t.check(solve(R, pr) == fx::tc_formula(F, e, pr), "tc_pullback_stable, identity map");
      });
    }
  }
}

// ---------------------------------------------------------------------------
// 5. bijections of structures

void bijections(Tally& t) {
  for (const auto& rc : {fx::right_case(fx::fixture_a(), fx::bang(1)),
                         fx::right_case(make_boundary(fx::empty_into(1), fn(4, 2, {0, 0, 1, 1})), fn(1, 2, {1})),
                         fx::right_case(make_boundary(fn(1, 2, {0}), fn(3, 2, {0, 1, 1})), fn(2, 2, {1, 1}))}) {
    auto fs = search_lift_struct(rc.restricted);
    for (const auto& F : fs)
      t.check(right_pullback_inv(right_pullback(F, rc.Ep, rc.qp, rc.pp), rc.restricted, rc.qp) == F,
              "right_pullback then inverse");
    if (fs.empty()) continue;
    for (const auto& G : search_lift_struct(right_pullback(fs[0], rc.Ep, rc.qp, rc.pp).boundary()))
      t.check(right_pullback(right_pullback_inv(G, rc.restricted, rc.qp), rc.Ep, rc.qp, rc.pp) == G,
              "right_pullback inverse then forward");
  }

  std::vector<fx::Setup> leibniz = {fx::setup(fn(1, 2, {0}), fx::empty_into(1), fx::bang(2)),
                                    fx::setup(fx::empty_into(1), fx::empty_into(1), fx::bang(2)),
                                    fx::setup(fx::empty_into(1), fx::empty_into(1), fn(1, 2, {1}), fx::bang(2)),
                                    fx::setup(fn(1, 2, {0}), fx::empty_into(1), fn(1, 2, {1}), fn(3, 2, {0, 1, 1}))};
  for (const auto& s : leibniz) {
    auto Fs = search_lift_struct(s.source());
    auto Gs = search_lift_struct(s.target());
    t.check(Fs.size() == Gs.size(), "leibniz_transpose: structure counts");
    for (const auto& F : Fs)
      t.check(leibniz_untranspose(leibniz_transpose(F, s.a, s.Lp, s.l), s.a, s.Lp, s.l) == F, "leibniz_transpose");
    for (const auto& G : Gs)
      t.check(leibniz_transpose(leibniz_untranspose(G, s.a, s.Lp, s.l), s.a, s.Lp, s.l) == G, "leibniz_untranspose");

    if (Fs.empty()) continue;
    auto Hs = search_lift_struct(transpose_unrestricted(Fs[0], s.a, s.Lp, s.l).boundary());
    t.check(Hs.size() == Fs.size(), "transpose_unrestricted: structure counts");
    for (const auto& F : Fs)
      t.check(untranspose_unrestricted(transpose_unrestricted(F, s.a, s.Lp, s.l), s.a, s.Lp, s.l) == F,
              "transpose_unrestricted");
    for (const auto& H : Hs)
      t.check(transpose_unrestricted(untranspose_unrestricted(H, s.a, s.Lp, s.l), s.a, s.Lp, s.l) == H,
              "untranspose_unrestricted");
  }

  for (const auto& dv : {fx::empty_into(1), fn(1, 2, {0})}) {
    fx::PathFixture pf = fx::path_fixture(dv, fx::bang(2));
    auto Fs = search_lift_struct(pf.source);
    if (Fs.empty()) continue;
    for (const auto& F : Fs)
      t.check(path_untranspose(path_transpose(F, pf.a, pf.cert, pf.p), pf.a, pf.cert, pf.p) == F, "path_transpose");
    for (const auto& H : search_lift_struct(path_transpose(Fs[0], pf.a, pf.cert, pf.p).boundary()))
      t.check(path_transpose(path_untranspose(H, pf.a, pf.cert, pf.p), pf.a, pf.cert, pf.p) == H, "path_untranspose");
  }
}

// ---------------------------------------------------------------------------
// 6. pushout-product approximations

void approximations(Tally& t) {
  for (const auto& dv : fx::boundary_maps())
    for (const auto& dl : fx::boundary_maps())
      for (const auto& tg : fx::targets())
        t.check(check_pp_approx(canonical_approx(fx::pair_of(dv, dl), tg.E, tg.B, tg.p)), "canonical_approx");

  std::vector<PshMor> maps = {fx::empty_into(1), fn(1, 2, {0}), identity(set(1)), fx::empty_into(2)};
  std::mt19937 rng(97);
  for (const auto& tg : {fx::target(identity(set(2))), fx::target(fx::bang(2))})
    for (const auto& du : maps)
      for (const auto& dv : maps)
        for (const auto& dw : maps) {
          fx::Triple tr = fx::triple(du, dv, dw, tg);
          auto r = assoc_transfer(tr.uv, tr.vw, tr.left.candidate(), tr.left.incl);
          t.check(r.first == r.second, "assoc_transfer, canonical inclusion");
          const Presheaf& K = tr.left.candidate().total;
          const Presheaf& T = tr.left.incl.dst();
          if (T.size(0) == 0) continue;
          Table img(K.size(0));
          for (auto& x : img) x = static_cast<int>(rng() % T.size(0));
          r = assoc_transfer(tr.uv, tr.vw, tr.left.candidate(), fn(K, T, img));
          t.check(r.first == r.second, "assoc_transfer, random inclusion");
        }
}

// ---------------------------------------------------------------------------
// 7. pullback-hom squares and the pullback-power cube

void squares(Tally& t) {
  auto sets = fx::small_sets();
  std::vector<PshMor> ls = {fn(1, 2, {0}), fx::bang(2), identity(set(2)), fx::empty_into(1)};
  std::vector<PshMor> ps = {fx::bang(2), fn(3, 2, {0, 1, 1}), fn(2, 2, {0, 0}), identity(set(2))};
  for (const auto& l : ls)
    for (const auto& p : ps) {
      t.check(pullback_hom_square(fx::global_power(from_empty(set(0), l.src()), l, p)).certify(sets).empty(),
              "pullback-hom square, empty ∂L");
      t.check(pullback_hom_square(fx::global_power(identity(l.src()), l, p)).certify(sets).empty(),
              "pullback-hom square, ∂L = L");
    }
  t.check(pullback_hom_square(fx::global_power(identity(set(2)), fx::bang(2), fx::bang(2))).certify(sets).empty(),
          "pullback-hom square, 2 -> 1");

  auto a = arrow_category();
  int f = *a->find_arrow("f");
  Presheaf y0 = yoneda(a, 0), y1 = yoneda(a, 1), one = terminal_presheaf(a);
  Presheaf e = make_presheaf(a, {2, 1}, {{f, {0}}});
  PullbackHomSquare sq = pullback_hom_square(pullback_power(over_terminal(y0), over_terminal(y1), over_terminal(one),
                                                            enumerate_pshmors(y0, y1).at(0), to_terminal(y1),
                                                            over_terminal(e), over_terminal(one), to_terminal(e)));
  t.check(sq.certify(bounded_presheaves(a, 1)).empty(), "pullback-hom square, arrow category");

  IntervalStruct i = finset_interval();
  t.check(pullback_power_cube(i, over_terminal(set(2)), over_terminal(set(1)), fx::bang(2), sets).certified(),
          "cube over a point");
  t.check(pullback_power_cube(i, over_terminal(set(3)), over_terminal(set(2)), fn(3, 2, {0, 1, 1}), sets).certified(),
          "cube, 3 -> 2");
  PshMor p4 = fn(4, 2, {0, 0, 1, 1});
  t.check(pullback_power_cube(i, slice_obj(p4), slice_terminal(set(2)), p4, sets).certified(), "cube over two points");
  t.check(pullback_power_cube(i, slice_obj(fn(4, 2, {0, 0, 0, 1})), slice_obj(fn(3, 2, {0, 0, 1})),
                              fn(4, 3, {0, 1, 1, 2}), sets)
              .certified(),
          "cube over a non-trivial base");
  t.check(pullback_power_cube(fx::arrow_interval(), slice_obj(to_terminal(e)), slice_terminal(one), to_terminal(e),
                              bounded_presheaves(a, 1))
              .certified(),
          "cube, arrow interval");
}

// ---------------------------------------------------------------------------
// 8. relations and witnesses

// Uncurrying H∘χ and composing with rel pairs the pushed-forward first solution with
// the second structure's solution, for every problem over a bounded parameter.
bool endpoints_hold(const Witness& w, const std::vector<SliceObj>& xs) {
  const LiftContext& c1 = w.F1.context();
  const LiftBoundary& b = w.F2.boundary();
  ExpRef VR = local_exp(b.V, w.rel.R);
  for (const auto& X : xs)
    for (const auto& pr : enumerate_problems(c1, X)) {
      Pullback XV = slice_product(X, b.V);
      PshMor pairs = compose(w.rel.rel, VR->uncurry(XV, compose(w.H, classify(c1, pr))));
      LiftProblem pushed{pr.X, compose(w.span.e, pr.u), compose(w.span.bp, pr.v)};
      if (!(compose(w.rel.EE.p1(), pairs) == compose(w.span.e, solve(w.F1, pr)))) return false;
      if (!(compose(w.rel.EE.p2(), pairs) == solve(w.F2, pushed))) return false;
    }
  return true;
}

void witnesses(Tally& t) {
  IntervalStruct i = finset_interval();
  for (const auto& [name, b] : fx::global_fixtures()) {
    auto fs = search_lift_struct(b);
    FibRel diag = diagonal_relation(b.E, b.B, b.p);
    SpanMap s = identity_span(b);
    for (const auto& F1 : fs)
      for (const auto& F2 : fs) {
        WitnessSearch res = search_witness(F1, F2, s, diag);
        t.check(res.witness.has_value() == (F1 == F2), name + ": diagonal witness iff equal");
        if (res.witness)
          t.check(check_witness(*res.witness) && endpoints_hold(*res.witness, fx::universe(b, 2)),
                  name + ": diagonal witness equations");
      }
    if (b.cat()->num_objects() != 1) continue;
    FibRel path = path_relation(i, b.E, b.B, b.p);
    for (const auto& F1 : fs)
      for (const auto& F2 : fs) {
        if (!search_witness(F1, F2, s, path).witness) continue;
        HomotopyWitness hw = construct_homotopy_witness(F1, F2, s, i);
        t.check(check_witness(hw.witness) && endpoints_hold(hw.witness, fx::universe(b, 2)),
                name + ": homotopy witness equations");
        // handing ℓ back re-checks ℓ(-,0) = f0 and ℓ(-,1) = f1 exactly
        t.check(construct_homotopy_witness(F1, F2, s, i, hw.ell).witness.H == hw.witness.H,
                name + ": supplied homotopy");
      }
  }
}

// ---------------------------------------------------------------------------
// 9. structures exist exactly when sections do

void existence(Tally& t) {
  std::vector<LiftBoundary> bs;
  for (const auto& nb : fx::global_fixtures()) bs.push_back(nb.boundary);
  std::vector<PshMor> maps;
  for (int m = 0; m <= 2; ++m)
    for (int n = 0; n <= 2; ++n)
      for (const auto& h : enumerate_pshmors(set(m), set(n))) maps.push_back(h);
  for (const auto& i : maps)
    for (const auto& p : maps) bs.push_back(make_boundary(i, p));
  for (const auto& b : bs) {
    auto ctx = make_context(b);
    t.check(search_lift_struct(ctx).empty() == oracle::sections(*ctx).empty(), "structures vs sections");
  }
}

// ---------------------------------------------------------------------------
// 10. reports are reproducible

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void determinism(Tally& t) {
  std::string doc = std::string(LIFTLAB_FIXTURES) + "/fixture_a.json";
  auto parsed = cli::parse_workspace(slurp(doc));
  t.check(parsed.errors.empty(), "fixture workspace parses");
  if (!parsed.workspace) return;
  std::string first = cli::run_tasks(*parsed.workspace, {}).dump(2);
  t.check(cli::run_tasks(*parsed.workspace, {}).dump(2) == first, "in-process reports differ");

  auto dir = std::filesystem::temp_directory_path() / ("liftlab-acceptance-" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  std::string outs[2];
  for (int k = 0; k < 2; ++k) {
    auto out = dir / ("run" + std::to_string(k) + ".json");
    std::string cmd = std::string("\"") + LIFTLAB_BIN + "\" run \"" + doc + "\" --out \"" + out.string() + "\"";
    t.check(std::system(cmd.c_str()) == 0, "liftlab run exit status");
    outs[k] = slurp(out);
  }
  std::filesystem::remove_all(dir);
  t.check(!outs[0].empty() && outs[0] == outs[1], "binary reports differ");
  t.check(outs[0] == first + "\n", "binary and in-process reports differ");
}

}  // namespace

int main() {
  struct Criterion {
    const char* title;
    std::function<void(Tally&)> run;
  };
  std::vector<Criterion> all = {
      {"topos substrate certification", topos},
      {"representability round trips and uniform families", representability},
      {"uniformity under reindexing", uniformity},
      {"constructions match their pointwise formulas", constructions},
      {"transpose and pullback bijections", bijections},
      {"pushout-product approximations and associativity", approximations},
      {"pullback-hom squares and pullback-power cubes", squares},
      {"diagonal and homotopy witnesses", witnesses},
      {"structures exist exactly when sections do", existence},
      {"deterministic reports", determinism},
  };
  int failed = 0;
  for (std::size_t k = 0; k < all.size(); ++k) {
    Tally t;
    try {
      all[k].run(t);
    } catch (const std::exception& e) {
      ++t.failures;
      if (t.first.empty()) t.first = std::string("threw: ") + e.what();
    }
    bool ok = t.failures == 0;
    failed += !ok;
    std::cout << (ok ? "PASS" : "FAIL") << "  " << (k + 1) << ". " << all[k].title << " (" << t.checks << " checks";
    if (!ok) std::cout << ", " << t.failures << " failed; first: " << t.first;
    std::cout << ")" << std::endl;
  }
  return failed ? 1 : 0;
}
