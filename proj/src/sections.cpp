#include <map>
#include <mutex>
#include <sstream>

#include "liftlab/topos.hpp"

namespace liftlab {

// ---------------------------------------------------------------------------
// Slices

SliceObj slice_obj(const PshMor& anchor) { return {anchor.src(), anchor}; }

SliceObj over_terminal(const Presheaf& a) { return {a, to_terminal(a)}; }

SliceObj slice_terminal(const Presheaf& c) { return {c, identity(c)}; }

bool is_slice_map(const SliceObj& src, const SliceObj& dst, const PshMor& f) {
  if (!(f.src() == src.total) || !(f.dst() == dst.total)) return false;
  return compose(dst.anchor, f).components() == src.anchor.components();
}

Pullback slice_product(const SliceObj& x, const SliceObj& y) {
  if (!(x.base() == y.base())) throw ShapeError("slice product: objects live over different bases");
  return Pullback(x.anchor, y.anchor);
}

SliceObj over(const Pullback& pb) { return {pb.obj(), compose(pb.f(), pb.p1())}; }

PulledBack pullback_functor(const PshMor& phi, const SliceObj& x) {
  if (!(phi.dst() == x.base())) throw ShapeError("pullback functor: map does not land in the slice base");
  Pullback pb(phi, x.anchor);
  return {{pb.obj(), pb.p1()}, pb};
}

PshMor pullback_functor_map(const PulledBack& px, const PulledBack& py, const PshMor& f) {
  return px.pb.map_to(py.pb, identity(px.pb.left()), f);
}

SliceObj postcompose(const PshMor& p, const SliceObj& x) {
  if (!(p.src() == x.base())) throw ShapeError("postcompose: map does not start at the slice base");
  return {x.total, compose(p, x.anchor)};
}

// ---------------------------------------------------------------------------
// SectionSpace

SectionSpace::SectionSpace(PshMor p, PshMor r, PshMor s, std::string where)
    : p_(std::move(p)), r_(std::move(r)), s_(std::move(s)), where_(std::move(where)) {
  if (!(r_.dst() == s_.dst())) throw ShapeError(where_ + ": fibre maps land in different objects");
  if (!(s_.src() == p_.src())) throw ShapeError(where_ + ": fibre map does not start at the domain");
  const Presheaf& a = p_.src();
  const Presheaf& dd = p_.dst();
  const Presheaf& b = r_.src();
  const CatRef& base = a.base();
  const FinCat& cat = *base;
  const int nc = cat.num_objects();
  const std::uint64_t budget = current_budget();
  std::uint64_t total = 0;

  // elements of B grouped by their image in T
  std::vector<std::map<int, std::vector<int>>> b_over(nc);
  for (int c = 0; c < nc; ++c)
    for (int y = 0; y < b.size(c); ++y) b_over[c][r_(c, y)].push_back(y);

  fibres_.resize(nc);
  elems_.resize(nc);
  index_.resize(nc);
  for (int c = 0; c < nc; ++c) {
    fibres_[c].resize(dd.size(c));
    index_[c].resize(dd.size(c));
    for (int delta = 0; delta < dd.size(c); ++delta) {
      Fibre& fb = fibres_[c][delta];
      fb.pos.resize(nc);
      fb.elems.resize(nc);
      for (int c2 = 0; c2 < nc; ++c2) {
        const auto& hs = cat.hom(c2, c);
        fb.pos[c2].assign(hs.size() * a.size(c2), -1);
        for (std::size_t hp = 0; hp < hs.size(); ++hp) {
          int target = dd.act(hs[hp], delta);
          for (int x = 0; x < a.size(c2); ++x) {
            if (p_(c2, x) != target) continue;
            fb.pos[c2][hp * a.size(c2) + x] = static_cast<int>(fb.elems[c2].size());
            fb.elems[c2].emplace_back(hs[hp], x);
          }
        }
      }
      std::vector<int> ysizes(nc);
      for (int c2 = 0; c2 < nc; ++c2) ysizes[c2] = static_cast<int>(fb.elems[c2].size());
      std::vector<Table> yact(cat.num_arrows());
      for (int m = 0; m < cat.num_arrows(); ++m) {
        int hi = cat.cod(m), lo = cat.dom(m);
        yact[m].resize(ysizes[hi]);
        for (int k = 0; k < ysizes[hi]; ++k) {
          auto [h, x] = fb.elems[hi][k];
          int hm = cat.compose(h, m);
          yact[m][k] = fb.pos[lo][cat.hom_position(hm) * a.size(lo) + a.act(m, x)];
        }
      }
      Presheaf y(base, ysizes, std::move(yact));
      HomSearch search(y, b);
      search.label(where_).candidates([&](int c2, int k) -> std::vector<int> {
        auto it = b_over[c2].find(s_(c2, fb.elems[c2][k].second));
        if (it == b_over[c2].end()) return {};
        return it->second;
      });
      search.run([&](const Components& sigma) {
        if (++total > budget) throw BudgetExceeded(where_, budget);
        index_[c][delta].emplace(sigma, static_cast<int>(elems_[c].size()));
        elems_[c].push_back({delta, sigma});
        return true;
      });
    }
  }
  // group by δ: elements were produced in δ order already; reindex positions
  std::vector<int> sizes(nc);
  for (int c = 0; c < nc; ++c) sizes[c] = static_cast<int>(elems_[c].size());
  std::vector<Table> act(cat.num_arrows());
  for (int m = 0; m < cat.num_arrows(); ++m) {
    int hi = cat.cod(m), lo = cat.dom(m);
    act[m].resize(sizes[hi]);
    for (int e = 0; e < sizes[hi]; ++e) {
      const Elem& el = elems_[hi][e];
      int d2 = dd.act(m, el.delta);
      const Fibre& from = fibres_[hi][el.delta];
      const Fibre& to = fibres_[lo][d2];
      Components sigma(nc);
      for (int c2 = 0; c2 < nc; ++c2) {
        sigma[c2].resize(to.elems[c2].size());
        for (std::size_t k = 0; k < to.elems[c2].size(); ++k) {
          auto [h, x] = to.elems[c2][k];
          int mh = cat.compose(m, h);
          sigma[c2][k] = el.sigma[c2][from.pos[c2][cat.hom_position(mh) * a.size(c2) + x]];
        }
      }
      act[m][e] = index_[lo][d2].at(sigma);
    }
  }
  obj_ = Presheaf(base, sizes, std::move(act));
  Components anc(nc);
  for (int c = 0; c < nc; ++c)
    for (const auto& el : elems_[c]) anc[c].push_back(el.delta);
  anchor_ = PshMor(PshMor::Unchecked{}, obj_, dd, std::move(anc));
}

int SectionSpace::apply(int c, int e, int h, int a) const {
  const FinCat& cat = p_.src().cat();
  int c2 = cat.dom(h);
  if (cat.cod(h) != c) throw ShapeError(where_ + ": arrow does not end at the element's object");
  const Elem& el = elems_[c][e];
  int k = fibres_[c][el.delta].pos[c2][cat.hom_position(h) * p_.src().size(c2) + a];
  if (k < 0) throw ShapeError(where_ + ": argument does not lie over the element's base point");
  return el.sigma[c2][k];
}

int SectionSpace::ev(int c, int e, int a) const { return apply(c, e, p_.src().cat().id(c), a); }

int SectionSpace::lambda(int c, int delta, const std::function<int(int, int, int)>& fn) const {
  const Fibre& fb = fibres_[c][delta];
  const int nc = static_cast<int>(fb.elems.size());
  Components sigma(nc);
  for (int c2 = 0; c2 < nc; ++c2) {
    sigma[c2].resize(fb.elems[c2].size());
    for (std::size_t k = 0; k < fb.elems[c2].size(); ++k)
      sigma[c2][k] = fn(c2, fb.elems[c2][k].first, fb.elems[c2][k].second);
  }
  auto it = index_[c][delta].find(sigma);
  if (it == index_[c][delta].end())
    throw PropertyError(where_ + ": the given family is not a natural section over its base point");
  return it->second;
}

PshMor SectionSpace::curry(const SliceObj& z, const std::function<int(int, int, int)>& fn) const {
  if (!(z.base() == p_.dst())) throw ShapeError(where_ + ": curried map is not over the right base");
  const Presheaf& zt = z.total;
  const int nc = zt.cat().num_objects();
  Components comp(nc);
  for (int c = 0; c < nc; ++c) {
    comp[c].resize(zt.size(c));
    for (int x = 0; x < zt.size(c); ++x)
      comp[c][x] = lambda(c, z.anchor(c, x), [&](int c2, int h, int a) { return fn(c2, zt.act(h, x), a); });
  }
  return PshMor(PshMor::Unchecked{}, zt, obj_, std::move(comp));
}

PshMor SectionSpace::uncurry(const Pullback& za, const PshMor& f) const {
  if (!(f.dst() == obj_)) throw ShapeError(where_ + ": uncurried map does not land here");
  const Presheaf& src = za.obj();
  const FinCat& cat = src.cat();
  Components comp(cat.num_objects());
  for (int c = 0; c < cat.num_objects(); ++c) {
    comp[c].resize(src.size(c));
    for (int k = 0; k < src.size(c); ++k) comp[c][k] = ev(c, f(c, za.first(c, k)), za.second(c, k));
  }
  return PshMor(PshMor::Unchecked{}, src, r_.src(), std::move(comp));
}

PshMor SectionSpace::curry(const Pullback& za, const SliceObj& z, const PshMor& g) const {
  if (!(g.src() == za.obj())) throw ShapeError(where_ + ": curried map has the wrong domain");
  return curry(z, [&](int c, int x, int a) { return g(c, za.at(c, x, a)); });
}

LocalExp::LocalExp(SliceObj a, SliceObj b)
    : SectionSpace(a.anchor, b.anchor, a.anchor, "local exponential"), a_(std::move(a)), b_(std::move(b)) {
  if (!(a_.base() == b_.base())) throw ShapeError("local exponential: objects live over different bases");
}

Pushforward::Pushforward(PshMor p, SliceObj x)
    : SectionSpace(p, x.anchor, identity(p.src()), "pushforward"), x_(std::move(x)) {
  if (!(x_.base() == p.src())) throw ShapeError("pushforward: object is not over the domain of the map");
}

// ---------------------------------------------------------------------------
// Memo table

namespace {

void put(std::ostringstream& os, const Presheaf& a) {
  os << a.base().get() << '|';
  for (int s : a.sizes()) os << s << ',';
  os << '|';
  for (const auto& t : a.actions()) {
    for (int v : t) os << v << ',';
    os << ';';
  }
}

void put(std::ostringstream& os, const PshMor& f) {
  put(os, f.src());
  os << "->";
  put(os, f.dst());
  for (const auto& t : f.components()) {
    for (int v : t) os << v << ',';
    os << ';';
  }
}

std::mutex cache_mutex;
std::map<std::string, ExpRef> exp_cache;
std::map<std::string, std::shared_ptr<const Pushforward>> pf_cache;

}  // namespace

ExpRef local_exp(const SliceObj& a, const SliceObj& b) {
  std::ostringstream os;
  put(os, a.anchor);
  os << "#";
  put(os, b.anchor);
  std::string key = os.str();
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = exp_cache.find(key);
    if (it != exp_cache.end()) return it->second;
  }
  auto made = std::make_shared<const LocalExp>(a, b);
  std::lock_guard<std::mutex> lock(cache_mutex);
  return exp_cache.emplace(key, made).first->second;
}

ExpRef exponential(const Presheaf& a, const Presheaf& b) { return local_exp(over_terminal(a), over_terminal(b)); }

std::shared_ptr<const Pushforward> pushforward(const PshMor& p, const SliceObj& x) {
  std::ostringstream os;
  put(os, p);
  os << "#";
  put(os, x.anchor);
  std::string key = os.str();
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = pf_cache.find(key);
    if (it != pf_cache.end()) return it->second;
  }
  auto made = std::make_shared<const Pushforward>(p, x);
  std::lock_guard<std::mutex> lock(cache_mutex);
  return pf_cache.emplace(key, made).first->second;
}

void clear_exp_cache() {
  std::lock_guard<std::mutex> lock(cache_mutex);
  exp_cache.clear();
  pf_cache.clear();
}

PshMor exp_map(const LocalExp& from, const LocalExp& to, const PshMor& pre, const PshMor& post) {
  if (!(pre.src() == to.exponent().total) || !(pre.dst() == from.exponent().total))
    throw ShapeError("exp_map: precomposed map has the wrong shape");
  if (!(post.src() == from.target().total) || !(post.dst() == to.target().total))
    throw ShapeError("exp_map: postcomposed map has the wrong shape");
  return to.curry(from.slice(), [&](int c, int z, int a) { return post(c, from.ev(c, z, pre(c, a))); });
}

PshMor section_map(const SectionSpace& from, const SectionSpace& to, const PshMor& f) {
  if (!(f.src() == from.codomain()) || !(f.dst() == to.codomain()))
    throw ShapeError("section_map: map does not connect the two targets");
  if (!(from.domain() == to.domain()) || !(from.p() == to.p()))
    throw ShapeError("section_map: section spaces are taken along different maps");
  return to.curry(from.slice(), [&](int c, int z, int a) { return f(c, from.ev(c, z, a)); });
}

PshMor evaluation(const LocalExp& e, const Pullback& ea) {
  const Presheaf& src = ea.obj();
  const FinCat& cat = src.cat();
  Components comp(cat.num_objects());
  for (int c = 0; c < cat.num_objects(); ++c) {
    comp[c].resize(src.size(c));
    for (int k = 0; k < src.size(c); ++k) comp[c][k] = e.ev(c, ea.first(c, k), ea.second(c, k));
  }
  return PshMor(src, e.target().total, std::move(comp));
}

}  // namespace liftlab
