#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "liftlab/topos.hpp"

namespace liftlab {

namespace {

void require_same_base(const Presheaf& a, const Presheaf& b, const char* what) {
  if (!(*a.base() == *b.base())) throw ShapeError(std::string(what) + ": mismatched base categories");
}

// Every natural transformation a -> b as its component table.
std::vector<Components> all_maps(const Presheaf& a, const Presheaf& b) {
  std::vector<Components> out;
  HomSearch(a, b).label("certification").run([&](const Components& c) {
    out.push_back(c);
    return true;
  });
  return out;
}

Components compose_tables(const Components& g, const Components& f) {
  Components out(f.size());
  for (std::size_t c = 0; c < f.size(); ++c) {
    out[c].resize(f[c].size());
    for (std::size_t k = 0; k < f[c].size(); ++k) out[c][k] = g[c][f[c][k]];
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Limits

Cone finite_limit(const Diagram& d) {
  if (d.objects.empty()) throw ShapeError("finite_limit: empty diagram has no base category; use terminal_presheaf");
  const CatRef& base = d.objects.front().base();
  for (const auto& o : d.objects) require_same_base(o, d.objects.front(), "finite_limit");
  for (const auto& e : d.edges) {
    if (!(e.map.src() == d.objects.at(e.from)) || !(e.map.dst() == d.objects.at(e.to)))
      throw ShapeError("finite_limit: edge map does not match its endpoints");
  }
  const FinCat& cat = *base;
  const int n = static_cast<int>(d.objects.size());
  const int nc = cat.num_objects();
  std::vector<std::vector<std::vector<int>>> tuples(nc);
  std::vector<std::map<std::vector<int>, int>> index(nc);
  std::uint64_t budget = current_budget(), nodes = 0;

  for (int c = 0; c < nc; ++c) {
    std::vector<int> t(n, -1);
    std::function<void(int)> rec = [&](int i) {
      if (i == n) {
        index[c][t] = static_cast<int>(tuples[c].size());
        tuples[c].push_back(t);
        return;
      }
      for (int x = 0; x < d.objects[i].size(c); ++x) {
        if (++nodes > budget) throw BudgetExceeded("finite_limit", budget);
        t[i] = x;
        bool ok = true;
        for (const auto& e : d.edges) {
          int hi = std::max(e.from, e.to);
          if (hi != i) continue;
          if (e.map(c, t[e.from]) != t[e.to]) {
            ok = false;
            break;
          }
        }
        if (ok) rec(i + 1);
      }
      t[i] = -1;
    };
    rec(0);
  }
  std::vector<int> sizes(nc);
  for (int c = 0; c < nc; ++c) sizes[c] = static_cast<int>(tuples[c].size());
  std::vector<Table> act(cat.num_arrows());
  for (int m = 0; m < cat.num_arrows(); ++m) {
    int hi = cat.cod(m), lo = cat.dom(m);
    act[m].resize(sizes[hi]);
    for (int k = 0; k < sizes[hi]; ++k) {
      std::vector<int> t(n);
      for (int i = 0; i < n; ++i) t[i] = d.objects[i].act(m, tuples[hi][k][i]);
      act[m][k] = index[lo].at(t);
    }
  }
  Cone cone;
  cone.apex = Presheaf(base, sizes, std::move(act));
  for (int i = 0; i < n; ++i) {
    Components comp(nc);
    for (int c = 0; c < nc; ++c) {
      comp[c].resize(sizes[c]);
      for (int k = 0; k < sizes[c]; ++k) comp[c][k] = tuples[c][k][i];
    }
    cone.legs.emplace_back(PshMor::Unchecked{}, cone.apex, d.objects[i], std::move(comp));
  }
  return cone;
}

bool is_cone(const Diagram& d, const std::vector<PshMor>& legs) {
  if (legs.size() != d.objects.size()) return false;
  for (const auto& e : d.edges)
    if (!(compose(e.map, legs[e.from]).components() == legs[e.to].components())) return false;
  return true;
}

std::string certify_limit(const Diagram& d, const Cone& cone, const std::vector<Presheaf>& tests) {
  if (!is_cone(d, cone.legs)) return "legs do not form a cone";
  const int n = static_cast<int>(d.objects.size());
  for (std::size_t ti = 0; ti < tests.size(); ++ti) {
    const Presheaf& t = tests[ti];
    std::vector<std::vector<Components>> homs(n);
    for (int i = 0; i < n; ++i) homs[i] = all_maps(t, d.objects[i]);
    std::set<std::vector<Components>> cones;
    std::vector<Components> pick(n);
    std::function<void(int)> rec = [&](int i) {
      if (i == n) {
        cones.insert(pick);
        return;
      }
      for (const auto& h : homs[i]) {
        pick[i] = h;
        bool ok = true;
        for (const auto& e : d.edges) {
          if (std::max(e.from, e.to) != i) continue;
          if (compose_tables(e.map.components(), pick[e.from]) != pick[e.to]) {
            ok = false;
            break;
          }
        }
        if (ok) rec(i + 1);
      }
    };
    rec(0);
    std::set<std::vector<Components>> hit;
    for (const auto& h : all_maps(t, cone.apex)) {
      std::vector<Components> image(n);
      for (int i = 0; i < n; ++i) image[i] = compose_tables(cone.legs[i].components(), h);
      if (!hit.insert(image).second) return "two mediating maps for one cone from test object " + std::to_string(ti);
    }
    if (hit != cones) return "some cone from test object " + std::to_string(ti) + " does not factor";
  }
  return {};
}

// ---------------------------------------------------------------------------
// Colimits

Cocone finite_colimit(const Diagram& d) {
  if (d.objects.empty()) throw ShapeError("finite_colimit: empty diagram has no base category; use empty_presheaf");
  const CatRef& base = d.objects.front().base();
  for (const auto& o : d.objects) require_same_base(o, d.objects.front(), "finite_colimit");
  for (const auto& e : d.edges)
    if (!(e.map.src() == d.objects.at(e.from)) || !(e.map.dst() == d.objects.at(e.to)))
      throw ShapeError("finite_colimit: edge map does not match its endpoints");
  const FinCat& cat = *base;
  const int n = static_cast<int>(d.objects.size());
  const int nc = cat.num_objects();
  std::vector<std::vector<int>> offset(nc, std::vector<int>(n + 1, 0));
  std::vector<std::vector<int>> cls(nc);      // disjoint-union position -> class
  std::vector<std::vector<int>> rep(nc);      // class -> disjoint-union position
  std::vector<std::vector<int>> rep_obj(nc);  // class -> diagram object of its representative

  for (int c = 0; c < nc; ++c) {
    for (int i = 0; i < n; ++i) offset[c][i + 1] = offset[c][i] + d.objects[i].size(c);
    int total = offset[c][n];
    std::vector<int> parent(total);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (const auto& e : d.edges)
      for (int x = 0; x < d.objects[e.from].size(c); ++x) {
        int a = find(offset[c][e.from] + x), b = find(offset[c][e.to] + e.map(c, x));
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    cls[c].assign(total, -1);
    std::vector<int> root_class(total, -1);
    for (int pos = 0; pos < total; ++pos) {
      int r = find(pos);
      if (root_class[r] < 0) {
        root_class[r] = static_cast<int>(rep[c].size());
        rep[c].push_back(pos);
        int i = static_cast<int>(std::upper_bound(offset[c].begin(), offset[c].end(), pos) - offset[c].begin()) - 1;
        rep_obj[c].push_back(i);
      }
      cls[c][pos] = root_class[r];
    }
  }
  std::vector<int> sizes(nc);
  for (int c = 0; c < nc; ++c) sizes[c] = static_cast<int>(rep[c].size());
  std::vector<Table> act(cat.num_arrows());
  for (int m = 0; m < cat.num_arrows(); ++m) {
    int hi = cat.cod(m), lo = cat.dom(m);
    act[m].resize(sizes[hi]);
    for (int k = 0; k < sizes[hi]; ++k) {
      int i = rep_obj[hi][k];
      int x = rep[hi][k] - offset[hi][i];
      act[m][k] = cls[lo][offset[lo][i] + d.objects[i].act(m, x)];
    }
  }
  Cocone cc;
  cc.apex = Presheaf(base, sizes, std::move(act));
  for (int i = 0; i < n; ++i) {
    Components comp(nc);
    for (int c = 0; c < nc; ++c) {
      comp[c].resize(d.objects[i].size(c));
      for (int x = 0; x < d.objects[i].size(c); ++x) comp[c][x] = cls[c][offset[c][i] + x];
    }
    cc.legs.emplace_back(d.objects[i], cc.apex, std::move(comp));
  }
  return cc;
}

bool is_cocone(const Diagram& d, const std::vector<PshMor>& legs) {
  if (legs.size() != d.objects.size()) return false;
  for (const auto& e : d.edges)
    if (!(compose(legs[e.to], e.map).components() == legs[e.from].components())) return false;
  return true;
}

std::string certify_colimit(const Diagram& d, const Cocone& cocone, const std::vector<Presheaf>& tests) {
  if (!is_cocone(d, cocone.legs)) return "legs do not form a cocone";
  const int n = static_cast<int>(d.objects.size());
  for (std::size_t ti = 0; ti < tests.size(); ++ti) {
    const Presheaf& t = tests[ti];
    std::vector<std::vector<Components>> homs(n);
    for (int i = 0; i < n; ++i) homs[i] = all_maps(d.objects[i], t);
    std::set<std::vector<Components>> cocones;
    std::vector<Components> pick(n);
    std::function<void(int)> rec = [&](int i) {
      if (i == n) {
        cocones.insert(pick);
        return;
      }
      for (const auto& h : homs[i]) {
        pick[i] = h;
        bool ok = true;
        for (const auto& e : d.edges) {
          if (std::max(e.from, e.to) != i) continue;
          if (compose_tables(pick[e.to], e.map.components()) != pick[e.from]) {
            ok = false;
            break;
          }
        }
        if (ok) rec(i + 1);
      }
    };
    rec(0);
    std::set<std::vector<Components>> hit;
    for (const auto& h : all_maps(cocone.apex, t)) {
      std::vector<Components> image(n);
      for (int i = 0; i < n; ++i) image[i] = compose_tables(h, cocone.legs[i].components());
      if (!hit.insert(image).second) return "two mediating maps for one cocone into test object " + std::to_string(ti);
    }
    if (hit != cocones) return "some cocone into test object " + std::to_string(ti) + " does not factor";
  }
  return {};
}

// ---------------------------------------------------------------------------
// Pullbacks

Pullback::Pullback(PshMor f, PshMor g) {
  if (!(f.dst() == g.dst())) throw ShapeError("pullback: the two maps have different codomains");
  auto d = std::make_shared<Data>();
  const Presheaf& a = f.src();
  const Presheaf& b = g.src();
  const FinCat& cat = a.cat();
  const int nc = cat.num_objects();
  std::vector<std::vector<std::pair<int, int>>> elems(nc);
  d->idx.resize(nc);
  std::uint64_t budget = current_budget(), total = 0;
  for (int c = 0; c < nc; ++c) {
    d->idx[c].assign(static_cast<std::size_t>(a.size(c)) * b.size(c), -1);
    // bucket b by image for a linear pass
    std::map<int, std::vector<int>> by_image;
    for (int y = 0; y < b.size(c); ++y) by_image[g(c, y)].push_back(y);
    for (int x = 0; x < a.size(c); ++x) {
      auto it = by_image.find(f(c, x));
      if (it == by_image.end()) continue;
      for (int y : it->second) {
        if (++total > budget) throw BudgetExceeded("pullback", budget);
        d->idx[c][x * b.size(c) + y] = static_cast<int>(elems[c].size());
        elems[c].emplace_back(x, y);
      }
    }
  }
  std::vector<int> sizes(nc);
  for (int c = 0; c < nc; ++c) sizes[c] = static_cast<int>(elems[c].size());
  std::vector<Table> act(cat.num_arrows());
  for (int m = 0; m < cat.num_arrows(); ++m) {
    int hi = cat.cod(m), lo = cat.dom(m);
    act[m].resize(sizes[hi]);
    for (int k = 0; k < sizes[hi]; ++k) {
      auto [x, y] = elems[hi][k];
      act[m][k] = d->idx[lo][a.act(m, x) * b.size(lo) + b.act(m, y)];
    }
  }
  d->obj = Presheaf(a.base(), sizes, std::move(act));
  Components c1(nc), c2(nc);
  for (int c = 0; c < nc; ++c)
    for (auto [x, y] : elems[c]) {
      c1[c].push_back(x);
      c2[c].push_back(y);
    }
  d->p1 = PshMor(PshMor::Unchecked{}, d->obj, a, std::move(c1));
  d->p2 = PshMor(PshMor::Unchecked{}, d->obj, b, std::move(c2));
  d->f = std::move(f);
  d->g = std::move(g);
  d_ = std::move(d);
}

int Pullback::at(int c, int a, int b) const {
  int k = index(c, a, b);
  if (k < 0) throw ShapeError("pullback: pair does not lie over a common element");
  return k;
}

PshMor Pullback::pair(const PshMor& x, const PshMor& y) const {
  if (!(x.src() == y.src())) throw ShapeError("pullback pairing: maps have different domains");
  if (!(x.dst() == left()) || !(y.dst() == right())) throw ShapeError("pullback pairing: maps miss the legs");
  const Presheaf& z = x.src();
  Components comp(z.cat().num_objects());
  for (int c = 0; c < z.cat().num_objects(); ++c) {
    comp[c].resize(z.size(c));
    for (int k = 0; k < z.size(c); ++k) comp[c][k] = at(c, x(c, k), y(c, k));
  }
  return PshMor(PshMor::Unchecked{}, z, obj(), std::move(comp));
}

PshMor Pullback::map_to(const Pullback& to, const PshMor& fa, const PshMor& fb) const {
  return to.pair(compose(fa, p1()), compose(fb, p2()));
}

Pullback product(const Presheaf& a, const Presheaf& b) {
  require_same_base(a, b, "product");
  return Pullback(to_terminal(a), to_terminal(b));
}

PshMor prod_map(const Pullback& from, const Pullback& to, const PshMor& fa, const PshMor& fb) {
  return from.map_to(to, fa, fb);
}

std::string certify_pullback(const PshMor& top, const PshMor& left, const PshMor& right, const PshMor& bottom,
                             const std::vector<Presheaf>& tests) {
  Diagram d;
  // objects: 0 = top-right, 1 = bottom-left, 2 = bottom-right
  d.objects = {right.src(), bottom.src(), right.dst()};
  d.edges = {{0, 2, right}, {1, 2, bottom}};
  if (!(top.src() == left.src())) return "square apex mismatch";
  Cone cone{top.src(), {top, left, compose(right, top)}};
  if (!(compose(right, top).components() == compose(bottom, left).components())) return "square does not commute";
  return certify_limit(d, cone, tests);
}

PshMor equalizer(const PshMor& f, const PshMor& g) {
  if (!(f.src() == g.src()) || !(f.dst() == g.dst())) throw ShapeError("equalizer: maps are not parallel");
  Diagram d;
  d.objects = {f.src(), f.dst()};
  d.edges = {{0, 1, f}, {0, 1, g}};
  Cone cone = finite_limit(d);
  return cone.legs[0];
}

Coproduct coproduct(const Presheaf& a, const Presheaf& b) {
  require_same_base(a, b, "coproduct");
  Diagram d;
  d.objects = {a, b};
  Cocone cc = finite_colimit(d);
  return {cc.apex, cc.legs[0], cc.legs[1]};
}

Pushout pushout(const PshMor& f, const PshMor& g) {
  if (!(f.src() == g.src())) throw ShapeError("pushout: span legs have different domains");
  Diagram d;
  d.objects = {f.src(), f.dst(), g.dst()};
  d.edges = {{0, 1, f}, {0, 2, g}};
  Cocone cc = finite_colimit(d);
  return {cc.apex, cc.legs[1], cc.legs[2]};
}

PshMor copair(const Pushout& po, const PshMor& x, const PshMor& y) {
  if (!(x.dst() == y.dst())) throw ShapeError("copair: maps have different codomains");
  const Presheaf& t = x.dst();
  const int nc = po.obj.cat().num_objects();
  Components comp(nc);
  for (int c = 0; c < nc; ++c) {
    comp[c].assign(po.obj.size(c), -1);
    auto put = [&](int k, int v) {
      if (comp[c][k] >= 0 && comp[c][k] != v) throw ShapeError("copair: maps disagree on the glued part");
      comp[c][k] = v;
    };
    for (int a = 0; a < po.in1.src().size(c); ++a) put(po.in1(c, a), x(c, a));
    for (int b = 0; b < po.in2.src().size(c); ++b) put(po.in2(c, b), y(c, b));
  }
  return PshMor(po.obj, t, std::move(comp));
}

// ---------------------------------------------------------------------------
// Isomorphisms

std::string IsoResult::describe() const {
  switch (status) {
    case Status::Found:
      return "isomorphic";
    case Status::SizesDiffer:
      return "not isomorphic: cardinalities differ";
    case Status::NoneExists:
      return "not isomorphic: exhaustive search found no isomorphism";
    case Status::OverBudget:
      return "no isomorphism within budget";
  }
  return "unknown";
}

IsoResult find_iso(const Presheaf& a, const Presheaf& b) { return find_iso(a, b, nullptr); }

IsoResult find_iso(const Presheaf& a, const Presheaf& b, std::function<std::vector<int>(int, int)> cand) {
  IsoResult r;
  require_same_base(a, b, "find_iso");
  if (a.sizes() != b.sizes()) {
    r.status = IsoResult::Status::SizesDiffer;
    return r;
  }
  try {
    HomSearch hs(a, b);
    hs.injective().label("isomorphism search");
    if (cand) hs.candidates(std::move(cand));
    r.iso = hs.first();
    r.status = r.iso ? IsoResult::Status::Found : IsoResult::Status::NoneExists;
  } catch (const BudgetExceeded&) {
    r.status = IsoResult::Status::OverBudget;
  }
  return r;
}

}  // namespace liftlab
