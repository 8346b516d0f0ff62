#include "liftlab/lifting.hpp"

#include <map>
#include <utility>

namespace liftlab {

namespace {

bool is_identity_map(const PshMor& f) { return f.src() == f.dst() && f == identity(f.src()); }

bool same_slice(const SliceObj& a, const SliceObj& b) { return a.total == b.total && a.anchor == b.anchor; }

// Elements of dst(c) grouped by their image under the anchor.
std::vector<std::vector<std::vector<int>>> by_anchor(const SliceObj& dst) {
  const int n = dst.total.cat().num_objects();
  std::vector<std::vector<std::vector<int>>> out(n);
  for (int c = 0; c < n; ++c) {
    out[c].resize(dst.base().size(c));
    for (int y = 0; y < dst.total.size(c); ++y) out[c][dst.anchor(c, y)].push_back(y);
  }
  return out;
}

// Slice maps src -> dst in enumeration order.
std::vector<PshMor> slice_maps(const SliceObj& src, const SliceObj& dst) {
  auto groups = by_anchor(dst);
  HomSearch hs(src.total, dst.total);
  hs.candidates([&](int c, int x) { return groups[c][src.anchor(c, x)]; }).label("slice maps");
  return hs.all();
}

}  // namespace

const char* to_string(Restriction r) {
  switch (r) {
    case Restriction::None: return "none";
    case Restriction::Left: return "left";
    case Restriction::Right: return "right";
    case Restriction::Both: return "both";
  }
  return "?";
}

Restriction LiftBoundary::restriction() const {
  bool left = !is_identity_map(j);
  bool right = !is_identity_map(q);
  if (left && right) return Restriction::Both;
  if (left) return Restriction::Left;
  if (right) return Restriction::Right;
  return Restriction::None;
}

bool LiftBoundary::global() const {
  for (int s : base().sizes())
    if (s != 1) return false;
  return true;
}

bool operator==(const LiftBoundary& a, const LiftBoundary& b) {
  return same_slice(a.U, b.U) && same_slice(a.V, b.V) && same_slice(a.Vp, b.Vp) && same_slice(a.E, b.E) &&
         same_slice(a.B, b.B) && same_slice(a.Bp, b.Bp) && a.i == b.i && a.p == b.p && a.j == b.j && a.q == b.q;
}

std::string check_boundary(const LiftBoundary& b) {
  for (const SliceObj* x : {&b.V, &b.Vp, &b.E, &b.B, &b.Bp})
    if (!(x->base() == b.base())) return "boundary objects live over different bases";
  if (!is_slice_map(b.U, b.V, b.i)) return "left map is not a map U -> V over the base";
  if (!is_slice_map(b.E, b.B, b.p)) return "right map is not a map E -> B over the base";
  if (!is_slice_map(b.V, b.Vp, b.j)) return "left restriction is not a map V -> V' over the base";
  if (!is_slice_map(b.Bp, b.B, b.q)) return "right restriction is not a map B' -> B over the base";
  return {};
}

LiftBoundary make_boundary(const PshMor& i, const PshMor& p) {
  if (!(i.src().base() == p.src().base())) throw ShapeError("boundary: maps over different categories");
  return make_boundary(over_terminal(i.src()), over_terminal(i.dst()), over_terminal(p.src()), over_terminal(p.dst()),
                       i, p);
}

LiftBoundary make_boundary(const SliceObj& U, const SliceObj& V, const SliceObj& E, const SliceObj& B,
                           const PshMor& i, const PshMor& p) {
  LiftBoundary b{U, V, V, E, B, B, i, p, identity(V.total), identity(B.total)};
  std::string err = check_boundary(b);
  if (!err.empty()) throw ShapeError("boundary: " + err);
  return b;
}

LiftBoundary restrict_left(const LiftBoundary& b, const SliceObj& Vpp, const PshMor& j) {
  LiftBoundary out = b;
  out.Vp = Vpp;
  if (!(j.src() == b.Vp.total)) throw ShapeError("left restriction does not start at V'");
  out.j = compose(j, b.j);
  std::string err = check_boundary(out);
  if (!err.empty()) throw ShapeError("left restriction: " + err);
  return out;
}

LiftBoundary restrict_left(const LiftBoundary& b, const PshMor& j) {
  if (!b.global()) throw ShapeError("left restriction: sliced boundary needs the anchor of the new object");
  return restrict_left(b, over_terminal(j.dst()), j);
}

LiftBoundary restrict_right(const LiftBoundary& b, const SliceObj& Bpp, const PshMor& q) {
  LiftBoundary out = b;
  out.Bp = Bpp;
  if (!(q.dst() == b.Bp.total)) throw ShapeError("right restriction does not land in B'");
  out.q = compose(b.q, q);
  std::string err = check_boundary(out);
  if (!err.empty()) throw ShapeError("right restriction: " + err);
  return out;
}

LiftBoundary restrict_right(const LiftBoundary& b, const PshMor& q) {
  if (!b.global()) throw ShapeError("right restriction: sliced boundary needs the anchor of the new object");
  return restrict_right(b, over_terminal(q.src()), q);
}

// ---------------------------------------------------------------------------
// Context

LiftContext::LiftContext(LiftBoundary b) : b_(std::move(b)) {
  std::string err = check_boundary(b_);
  if (!err.empty()) throw ShapeError("lifting context: " + err);
  ue_ = local_exp(b_.U, b_.E);
  ub_ = local_exp(b_.U, b_.B);
  ve_ = local_exp(b_.V, b_.E);
  vb_ = local_exp(b_.V, b_.B);
  vpbp_ = local_exp(b_.Vp, b_.Bp);

  PshMor up = exp_map(*ue_, *ub_, identity(b_.U.total), b_.p);
  P_ = Pullback(up, exp_map(*vb_, *ub_, b_.i, identity(b_.B.total)));
  Pp_ = Pullback(up, exp_map(*vpbp_, *ub_, compose(b_.j, b_.i), b_.q));
  pi_ = P_.pair(exp_map(*ve_, *ue_, b_.i, identity(b_.E.total)), exp_map(*ve_, *vb_, identity(b_.V.total), b_.p));
  rho_ = Pp_.map_to(P_, identity(ue_->obj()), exp_map(*vpbp_, *vb_, b_.j, b_.q));

  const Presheaf& pobj = P_.obj();
  fibres_.resize(pobj.cat().num_objects());
  for (int c = 0; c < pobj.cat().num_objects(); ++c) {
    fibres_[c].resize(pobj.size(c));
    for (int e = 0; e < ve_->obj().size(c); ++e) fibres_[c][pi_(c, e)].push_back(e);
  }
}

SliceObj LiftContext::restricted_slice() const { return {Pp_.obj(), compose(ue_->anchor(), Pp_.p1())}; }

ContextRef make_context(const LiftBoundary& b) { return std::make_shared<const LiftContext>(b); }

// ---------------------------------------------------------------------------
// Problems

bool operator==(const LiftProblem& a, const LiftProblem& b) {
  return same_slice(a.X, b.X) && a.u == b.u && a.v == b.v;
}

std::string check_problem(const LiftContext& ctx, const LiftProblem& pr) {
  const LiftBoundary& b = ctx.boundary();
  if (!(pr.X.base() == b.base())) return "parameter is not over the base";
  Pullback xu = slice_product(pr.X, b.U);
  Pullback xvp = slice_product(pr.X, b.Vp);
  if (!is_slice_map(over(xu), b.E, pr.u)) return "u is not a map X × U -> E over the base";
  if (!is_slice_map(over(xvp), b.Bp, pr.v)) return "v is not a map X × V' -> B' over the base";
  PshMor xji = xu.map_to(xvp, identity(pr.X.total), compose(b.j, b.i));
  if (!(compose(b.p, pr.u) == compose(b.q, compose(pr.v, xji)))) return "square does not commute: p∘u != q∘v∘(X×ji)";
  return {};
}

std::string check_solution(const LiftContext& ctx, const LiftProblem& pr, const PshMor& sol) {
  const LiftBoundary& b = ctx.boundary();
  Pullback xu = slice_product(pr.X, b.U);
  Pullback xv = slice_product(pr.X, b.V);
  Pullback xvp = slice_product(pr.X, b.Vp);
  if (!(sol.src() == xv.obj()) || !(sol.dst() == b.E.total)) return "solution is not a map X × V -> E";
  if (!(compose(sol, xu.map_to(xv, identity(pr.X.total), b.i)) == pr.u)) return "upper triangle fails: sol∘(X×i) != u";
  PshMor xj = xv.map_to(xvp, identity(pr.X.total), b.j);
  if (!(compose(b.p, sol) == compose(b.q, compose(pr.v, xj)))) return "lower triangle fails: p∘sol != q∘v∘(X×j)";
  return {};
}

PshMor classify(const LiftContext& ctx, const LiftProblem& pr) {
  std::string err = check_problem(ctx, pr);
  if (!err.empty()) throw PropertyError("classify: " + err);
  const LiftBoundary& b = ctx.boundary();
  PshMor cu = ctx.UE().curry(slice_product(pr.X, b.U), pr.X, pr.u);
  PshMor cv = ctx.VpBp().curry(slice_product(pr.X, b.Vp), pr.X, pr.v);
  return ctx.restricted().pair(cu, cv);
}

LiftProblem declassify(const LiftContext& ctx, const SliceObj& X, const PshMor& chi) {
  const LiftBoundary& b = ctx.boundary();
  if (!is_slice_map(X, ctx.restricted_slice(), chi)) throw ShapeError("declassify: not a map into P' over the base");
  const Pullback& pp = ctx.restricted();
  PshMor u = ctx.UE().uncurry(slice_product(X, b.U), compose(pp.p1(), chi));
  PshMor v = ctx.VpBp().uncurry(slice_product(X, b.Vp), compose(pp.p2(), chi));
  return {X, u, v};
}

LiftProblem generic_problem(const LiftContext& ctx) {
  SliceObj X = ctx.restricted_slice();
  return declassify(ctx, X, identity(X.total));
}

LiftProblem reindex(const LiftContext& ctx, const LiftProblem& pr, const SliceObj& Y, const PshMor& t) {
  if (!is_slice_map(Y, pr.X, t)) throw ShapeError("reindex: not a map of parameters over the base");
  const LiftBoundary& b = ctx.boundary();
  PshMor tu = slice_product(Y, b.U).map_to(slice_product(pr.X, b.U), t, identity(b.U.total));
  PshMor tv = slice_product(Y, b.Vp).map_to(slice_product(pr.X, b.Vp), t, identity(b.Vp.total));
  return {Y, compose(pr.u, tu), compose(pr.v, tv)};
}

std::vector<LiftProblem> enumerate_problems(const LiftContext& ctx, const SliceObj& X) {
  std::vector<LiftProblem> out;
  for (const auto& chi : slice_maps(X, ctx.restricted_slice())) out.push_back(declassify(ctx, X, chi));
  return out;
}

// ---------------------------------------------------------------------------
// Structures

LiftStruct::LiftStruct(ContextRef ctx, PshMor s) : ctx_(std::move(ctx)), s_(std::move(s)) {
  if (!(s_.src() == ctx_->restricted().obj()) || !(s_.dst() == ctx_->VE().obj()))
    throw ShapeError("lifting structure: internal map is not P' -> [V,E]");
  if (!(compose(ctx_->pi(), s_) == ctx_->rho()))
    throw PropertyError("lifting structure: internal map is not a section of [V,E] -> P over P'");
}

bool operator==(const LiftStruct& a, const LiftStruct& b) {
  return a.boundary() == b.boundary() && a.internal() == b.internal();
}

PshMor solve(const LiftStruct& F, const LiftProblem& pr) {
  const LiftContext& ctx = F.context();
  PshMor chi = classify(ctx, pr);
  return ctx.VE().uncurry(slice_product(pr.X, ctx.boundary().V), compose(F.internal(), chi));
}

std::vector<LiftStruct> search_lift_struct(const ContextRef& ctx) {
  HomSearch hs(ctx->restricted().obj(), ctx->VE().obj());
  hs.candidates([&](int c, int x) { return ctx->pi_fibre(c, ctx->rho()(c, x)); }).label("lifting structure search");
  std::vector<LiftStruct> out;
  hs.run([&](const Components& comp) {
    out.emplace_back(ctx, PshMor(PshMor::Unchecked{}, ctx->restricted().obj(), ctx->VE().obj(), comp));
    return true;
  });
  return out;
}

std::vector<LiftStruct> search_lift_struct(const LiftBoundary& b) { return search_lift_struct(make_context(b)); }

// ---------------------------------------------------------------------------
// Families

Family family_of(const LiftStruct& F, const std::vector<SliceObj>& params) {
  Family fam{params, {}};
  for (const auto& X : params)
    for (auto& pr : enumerate_problems(F.context(), X)) {
      PshMor sol = solve(F, pr);
      fam.entries.push_back({std::move(pr), std::move(sol)});
    }
  return fam;
}

bool verify_family(const LiftContext& ctx, const Family& fam, std::string* why) {
  auto fail = [&](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  using Key = std::pair<Components, Components>;
  std::vector<std::map<Key, const PshMor*>> table(fam.params.size());
  for (const auto& e : fam.entries) {
    std::string err = check_problem(ctx, e.problem);
    if (!err.empty()) return fail("entry is not a problem on the boundary: " + err);
    err = check_solution(ctx, e.problem, e.solution);
    if (!err.empty()) return fail("entry does not solve its problem: " + err);
    for (std::size_t k = 0; k < fam.params.size(); ++k)
      if (same_slice(fam.params[k], e.problem.X))
        table[k][{e.problem.u.components(), e.problem.v.components()}] = &e.solution;
  }
  std::vector<std::vector<LiftProblem>> problems(fam.params.size());
  for (std::size_t k = 0; k < fam.params.size(); ++k) {
    problems[k] = enumerate_problems(ctx, fam.params[k]);
    for (const auto& pr : problems[k])
      if (!table[k].count({pr.u.components(), pr.v.components()}))
        throw LookupError("verify_family: incomplete table, parameter " + std::to_string(k) + " misses a problem");
  }
  const LiftBoundary& b = ctx.boundary();
  for (std::size_t kx = 0; kx < fam.params.size(); ++kx)
    for (std::size_t ky = 0; ky < fam.params.size(); ++ky) {
      const SliceObj& X = fam.params[kx];
      const SliceObj& Y = fam.params[ky];
      Pullback xv = slice_product(X, b.V), yv = slice_product(Y, b.V);
      for (const auto& t : slice_maps(Y, X)) {
        PshMor tv = yv.map_to(xv, t, identity(b.V.total));
        for (const auto& pr : problems[kx]) {
          LiftProblem re = reindex(ctx, pr, Y, t);
          const PshMor& sx = *table[kx].at({pr.u.components(), pr.v.components()});
          const PshMor& sy = *table[ky].at({re.u.components(), re.v.components()});
          if (!(sy == compose(sx, tv)))
            return fail("uniformity fails between parameters " + std::to_string(ky) + " -> " + std::to_string(kx));
        }
      }
    }
  return true;
}

LiftStruct internalize(const ContextRef& ctx, const std::function<PshMor(const LiftProblem&)>& fn) {
  LiftProblem g = generic_problem(*ctx);
  PshMor sol = fn(g);
  std::string err = check_solution(*ctx, g, sol);
  if (!err.empty()) throw PropertyError("internalize: value at the generic problem is not a solution: " + err);
  Pullback xv = slice_product(g.X, ctx->boundary().V);
  return LiftStruct(ctx, ctx->VE().curry(xv, g.X, sol));
}

// ---------------------------------------------------------------------------
// Bounded universes

std::vector<Presheaf> bounded_presheaves(const CatRef& cat, int k, bool up_to_iso) {
  const int n = cat->num_objects();
  const int m = cat->num_arrows();
  std::vector<Presheaf> out;
  std::vector<int> sizes(n, 0);
  std::vector<int> free_arrows;
  for (int a = 0; a < m; ++a)
    if (!cat->is_identity(a)) free_arrows.push_back(a);

  auto emit = [&](const std::vector<Table>& act) {
    if (!check_presheaf_laws(cat, sizes, act).empty()) return;
    Presheaf p(cat, sizes, act);
    if (up_to_iso)
      for (const auto& q : out)
        if (q.sizes() == sizes && find_iso(q, p).status == IsoResult::Status::Found) return;
    out.push_back(std::move(p));
  };

  std::function<void(int)> over_sizes = [&](int c) {
    if (c < n) {
      for (int s = 0; s <= k; ++s) {
        sizes[c] = s;
        over_sizes(c + 1);
      }
      return;
    }
    std::vector<Table> act(m);
    for (int x = 0; x < n; ++x) {
      act[cat->id(x)].resize(sizes[x]);
      for (int e = 0; e < sizes[x]; ++e) act[cat->id(x)][e] = e;
    }
    std::function<void(std::size_t, int)> fill = [&](std::size_t ai, int pos) {
      if (ai == free_arrows.size()) {
        emit(act);
        return;
      }
      int a = free_arrows[ai];
      int from = sizes[cat->cod(a)], to = sizes[cat->dom(a)];
      if (pos == 0) act[a].assign(from, 0);
      if (pos == from) {
        fill(ai + 1, 0);
        return;
      }
      for (int v = 0; v < to; ++v) {
        act[a][pos] = v;
        fill(ai, pos + 1);
      }
    };
    fill(0, 0);
  };
  over_sizes(0);
  return out;
}

std::vector<SliceObj> bounded_universe(const Presheaf& base, int k) {
  std::vector<SliceObj> out;
  for (const auto& x : bounded_presheaves(base.base(), k))
    for (const auto& a : enumerate_pshmors(x, base)) out.push_back({x, a});
  return out;
}

}  // namespace liftlab
