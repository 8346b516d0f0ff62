#include "liftlab/fincat.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace liftlab {

namespace {
thread_local std::uint64_t tl_budget = kDefaultBudget;
}

std::uint64_t current_budget() { return tl_budget; }

ScopedBudget::ScopedBudget(std::uint64_t limit) : previous_(tl_budget) { tl_budget = limit; }
ScopedBudget::~ScopedBudget() { tl_budget = previous_; }

// ---------------------------------------------------------------------------
// FinCat

FinCat::FinCat(std::vector<std::string> objects, std::vector<Arrow> arrows, std::vector<int> identities,
               std::vector<std::vector<int>> comp)
    : objects_(std::move(objects)), arrows_(std::move(arrows)), ids_(std::move(identities)), comp_(std::move(comp)) {
  const int n = num_objects();
  const int m = num_arrows();
  if (static_cast<int>(ids_.size()) != n) throw ShapeError("identity table must list one arrow per object");
  if (static_cast<int>(comp_.size()) != m) throw ShapeError("composition table must have one row per arrow");
  for (const auto& row : comp_)
    if (static_cast<int>(row.size()) != m) throw ShapeError("composition table must be square");
  for (const auto& a : arrows_)
    if (a.dom < 0 || a.dom >= n || a.cod < 0 || a.cod >= n) throw ShapeError("arrow '" + a.name + "' has unknown endpoint");
  for (int id : ids_)
    if (id < 0 || id >= m) throw ShapeError("identity index out of range");

  homs_.assign(static_cast<std::size_t>(n) * n, {});
  hom_pos_.assign(m, 0);
  for (int k = 0; k < m; ++k) {
    auto& h = homs_[arrows_[k].dom * n + arrows_[k].cod];
    hom_pos_[k] = static_cast<int>(h.size());
    h.push_back(k);
  }
  order_.resize(n);
  for (int c = 0; c < n; ++c) order_[c] = c;
  std::vector<int> incoming(n, 0);
  for (const auto& a : arrows_) ++incoming[a.cod];
  std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) { return incoming[a] > incoming[b]; });
}

std::optional<int> FinCat::find_object(const std::string& name) const {
  for (int c = 0; c < num_objects(); ++c)
    if (objects_[c] == name) return c;
  return std::nullopt;
}

std::optional<int> FinCat::find_arrow(const std::string& name) const {
  for (int k = 0; k < num_arrows(); ++k)
    if (arrows_[k].name == name) return k;
  return std::nullopt;
}

int FinCat::object_index(const std::string& name) const {
  auto c = find_object(name);
  if (!c) throw LookupError("unknown object '" + name + "'");
  return *c;
}

bool FinCat::operator==(const FinCat& other) const {
  if (this == &other) return true;
  if (objects_ != other.objects_ || ids_ != other.ids_ || comp_ != other.comp_) return false;
  if (arrows_.size() != other.arrows_.size()) return false;
  for (std::size_t k = 0; k < arrows_.size(); ++k)
    if (arrows_[k].dom != other.arrows_[k].dom || arrows_[k].cod != other.arrows_[k].cod ||
        arrows_[k].name != other.arrows_[k].name)
      return false;
  return true;
}

std::vector<std::string> validate_fincat(const FinCat& c) {
  std::vector<std::string> out;
  const int m = c.num_arrows();
  for (int x = 0; x < c.num_objects(); ++x) {
    int i = c.id(x);
    if (c.dom(i) != x || c.cod(i) != x)
      out.push_back("identity of object '" + c.object_name(x) + "' is not an endomorphism of it");
  }
  for (int g = 0; g < m; ++g) {
    for (int f = 0; f < m; ++f) {
      int gf = c.compose(g, f);
      bool composable = c.cod(f) == c.dom(g);
      if (!composable) {
        if (gf != -1)
          out.push_back("composite " + c.arrow(g).name + "∘" + c.arrow(f).name + " defined for non-composable pair");
        continue;
      }
      if (gf < 0 || gf >= m) {
        out.push_back("composite " + c.arrow(g).name + "∘" + c.arrow(f).name + " missing");
        continue;
      }
      if (c.dom(gf) != c.dom(f) || c.cod(gf) != c.cod(g))
        out.push_back("composite " + c.arrow(g).name + "∘" + c.arrow(f).name + " lands in the wrong hom-set");
    }
  }
  if (!out.empty()) return out;
  for (int f = 0; f < m; ++f) {
    if (c.compose(c.id(c.cod(f)), f) != f) out.push_back("identity is not left neutral for " + c.arrow(f).name);
    if (c.compose(f, c.id(c.dom(f))) != f) out.push_back("identity is not right neutral for " + c.arrow(f).name);
  }
  for (int h = 0; h < m; ++h)
    for (int g = 0; g < m; ++g) {
      if (c.cod(g) != c.dom(h)) continue;
      for (int f = 0; f < m; ++f) {
        if (c.cod(f) != c.dom(g)) continue;
        if (c.compose(c.compose(h, g), f) != c.compose(h, c.compose(g, f)))
          out.push_back("composition is not associative on (" + c.arrow(h).name + ", " + c.arrow(g).name + ", " +
                        c.arrow(f).name + ")");
      }
    }
  return out;
}

CatRef free_category(std::vector<std::string> objects, const std::vector<Arrow>& generators) {
  const int n = static_cast<int>(objects.size());
  // paths as generator sequences, applied right to left: path {g, f} means g∘f.
  struct Path {
    std::vector<int> gens;
    int dom, cod;
  };
  std::vector<Path> paths;
  for (int x = 0; x < n; ++x) paths.push_back({{}, x, x});
  std::vector<Path> frontier;
  for (int k = 0; k < static_cast<int>(generators.size()); ++k)
    frontier.push_back({{k}, generators[k].dom, generators[k].cod});
  int guard = 0;
  while (!frontier.empty()) {
    if (++guard > 64) throw ShapeError("free_category: graph has a cycle or is too large");
    std::vector<Path> next;
    for (auto& p : frontier) {
      paths.push_back(p);
      for (int k = 0; k < static_cast<int>(generators.size()); ++k) {
        if (generators[k].dom != p.cod) continue;
        Path q = p;
        q.gens.insert(q.gens.begin(), k);
        q.cod = generators[k].cod;
        next.push_back(q);
      }
    }
    frontier = std::move(next);
  }
  std::vector<Arrow> arrows;
  std::map<std::vector<int>, int> index_of_path;
  std::vector<int> ids(n);
  for (std::size_t k = 0; k < paths.size(); ++k) {
    const auto& p = paths[k];
    std::string name;
    if (p.gens.empty()) {
      name = "id_" + objects[p.dom];
      ids[p.dom] = static_cast<int>(k);
    } else {
      for (std::size_t j = 0; j < p.gens.size(); ++j) {
        if (j) name += ".";
        name += generators[p.gens[j]].name;
      }
    }
    arrows.push_back({name, p.dom, p.cod});
    // key identities by their object so distinct empty paths stay distinct
    std::vector<int> key = p.gens;
    if (key.empty()) key = {-1 - p.dom};
    index_of_path[key] = static_cast<int>(k);
  }
  const int m = static_cast<int>(paths.size());
  std::vector<std::vector<int>> comp(m, std::vector<int>(m, -1));
  for (int g = 0; g < m; ++g)
    for (int f = 0; f < m; ++f) {
      if (paths[f].cod != paths[g].dom) continue;
      std::vector<int> key = paths[g].gens;
      key.insert(key.end(), paths[f].gens.begin(), paths[f].gens.end());
      if (key.empty()) key = {-1 - paths[f].dom};
      comp[g][f] = index_of_path.at(key);
    }
  return std::make_shared<const FinCat>(std::move(objects), std::move(arrows), std::move(ids), std::move(comp));
}

CatRef terminal_category() { return free_category({"*"}, {}); }
CatRef arrow_category() { return free_category({"0", "1"}, {{"f", 0, 1}}); }
CatRef chain3_category() { return free_category({"0", "1", "2"}, {{"f", 0, 1}, {"g", 1, 2}}); }
CatRef parallel_pair_category() { return free_category({"V", "E"}, {{"s", 0, 1}, {"t", 0, 1}}); }

CatRef idempotent_category() {
  std::vector<Arrow> arrows{{"id", 0, 0}, {"e", 0, 0}};
  std::vector<std::vector<int>> comp{{0, 1}, {1, 1}};
  return std::make_shared<const FinCat>(std::vector<std::string>{"*"}, std::move(arrows), std::vector<int>{0},
                                        std::move(comp));
}

// ---------------------------------------------------------------------------
// Presheaf

std::vector<std::string> check_presheaf_laws(const CatRef& base, const std::vector<int>& sizes,
                                             const std::vector<Table>& actions) {
  std::vector<std::string> out;
  const FinCat& c = *base;
  if (static_cast<int>(sizes.size()) != c.num_objects()) {
    out.push_back("expected one size per object");
    return out;
  }
  for (int s : sizes)
    if (s < 0) out.push_back("negative set size");
  if (static_cast<int>(actions.size()) != c.num_arrows()) {
    out.push_back("expected one action table per arrow");
    return out;
  }
  for (int m = 0; m < c.num_arrows(); ++m) {
    const auto& t = actions[m];
    if (static_cast<int>(t.size()) != sizes[c.cod(m)]) {
      out.push_back("action of " + c.arrow(m).name + " has wrong length");
      continue;
    }
    for (int v : t)
      if (v < 0 || v >= sizes[c.dom(m)]) out.push_back("action of " + c.arrow(m).name + " leaves its codomain");
  }
  if (!out.empty()) return out;
  for (int x = 0; x < c.num_objects(); ++x) {
    const auto& t = actions[c.id(x)];
    for (int k = 0; k < sizes[x]; ++k)
      if (t[k] != k) {
        out.push_back("identity of '" + c.object_name(x) + "' does not act as identity");
        break;
      }
  }
  for (int g = 0; g < c.num_arrows(); ++g)
    for (int f = 0; f < c.num_arrows(); ++f) {
      int gf = c.compose(g, f);
      if (gf < 0) continue;
      // act(g∘f) = act(f)∘act(g)
      const auto& tgf = actions[gf];
      for (int k = 0; k < sizes[c.cod(g)]; ++k)
        if (tgf[k] != actions[f][actions[g][k]]) {
          out.push_back("action is not contravariantly functorial on " + c.arrow(g).name + "∘" + c.arrow(f).name);
          break;
        }
    }
  return out;
}

Presheaf::Presheaf(CatRef base, std::vector<int> sizes, std::vector<Table> actions,
                   std::vector<std::vector<std::string>> labels) {
  auto problems = check_presheaf_laws(base, sizes, actions);
  if (!problems.empty()) throw ShapeError("invalid presheaf: " + problems.front());
  if (!labels.empty()) {
    if (labels.size() != sizes.size()) throw ShapeError("label table must have one entry per object");
    for (std::size_t c = 0; c < sizes.size(); ++c) {
      if (labels[c].empty()) continue;
      if (static_cast<int>(labels[c].size()) != sizes[c]) throw ShapeError("label count differs from set size");
      std::set<std::string> uniq(labels[c].begin(), labels[c].end());
      if (uniq.size() != labels[c].size()) throw ShapeError("labels must be pairwise distinct");
    }
  }
  auto d = std::make_shared<Data>();
  d->base = std::move(base);
  d->sizes = std::move(sizes);
  d->act = std::move(actions);
  d->labels = std::move(labels);
  d_ = std::move(d);
}

FinSetRep Presheaf::at(int c) const {
  FinSetRep r;
  r.size = size(c);
  if (!d_->labels.empty()) r.labels = d_->labels[c];
  return r;
}

int Presheaf::total_size() const {
  int s = 0;
  for (int v : d_->sizes) s += v;
  return s;
}

bool Presheaf::operator==(const Presheaf& other) const {
  if (d_ == other.d_) return true;
  if (!d_ || !other.d_) return false;
  if (!(*d_->base == *other.d_->base)) return false;
  return d_->sizes == other.d_->sizes && d_->act == other.d_->act;
}

Presheaf make_presheaf(CatRef base, std::vector<int> sizes, const std::vector<std::pair<int, Table>>& actions) {
  const FinCat& c = *base;
  std::vector<Table> act(c.num_arrows());
  std::vector<bool> given(c.num_arrows(), false);
  for (const auto& [m, t] : actions) {
    act.at(m) = t;
    given[m] = true;
  }
  for (int m = 0; m < c.num_arrows(); ++m) {
    if (given[m]) continue;
    if (c.is_identity(m)) {
      Table t(sizes.at(c.dom(m)));
      for (int k = 0; k < static_cast<int>(t.size()); ++k) t[k] = k;
      act[m] = t;
      given[m] = true;
    } else if (sizes.at(c.cod(m)) == 0) {
      given[m] = true;  // acts on the empty set
    }
  }
  // composites of given arrows can be filled in when missing
  bool progress = true;
  while (progress) {
    progress = false;
    for (int g = 0; g < c.num_arrows(); ++g)
      for (int f = 0; f < c.num_arrows(); ++f) {
        int gf = c.compose(g, f);
        if (gf < 0 || given[gf] || !given[g] || !given[f]) continue;
        Table t(sizes[c.cod(g)]);
        for (int k = 0; k < static_cast<int>(t.size()); ++k) t[k] = act[f][act[g][k]];
        act[gf] = t;
        given[gf] = true;
        progress = true;
      }
  }
  return Presheaf(std::move(base), std::move(sizes), std::move(act));
}

Presheaf constant_presheaf(CatRef base, int n) {
  const FinCat& c = *base;
  std::vector<int> sizes(c.num_objects(), n);
  Table idt(n);
  for (int k = 0; k < n; ++k) idt[k] = k;
  std::vector<Table> act(c.num_arrows(), idt);
  return Presheaf(std::move(base), std::move(sizes), std::move(act));
}

Presheaf terminal_presheaf(CatRef base) { return constant_presheaf(std::move(base), 1); }
Presheaf empty_presheaf(CatRef base) { return constant_presheaf(std::move(base), 0); }

// ---------------------------------------------------------------------------
// PshMor

std::vector<std::string> check_naturality(const Presheaf& src, const Presheaf& dst, const Components& comp) {
  std::vector<std::string> out;
  if (!(*src.base() == *dst.base())) {
    out.push_back("source and target live over different base categories");
    return out;
  }
  const FinCat& c = src.cat();
  if (static_cast<int>(comp.size()) != c.num_objects()) {
    out.push_back("expected one component per object");
    return out;
  }
  for (int x = 0; x < c.num_objects(); ++x) {
    if (static_cast<int>(comp[x].size()) != src.size(x)) {
      out.push_back("component at '" + c.object_name(x) + "' has wrong length");
      continue;
    }
    for (int v : comp[x])
      if (v < 0 || v >= dst.size(x)) out.push_back("component at '" + c.object_name(x) + "' leaves the target set");
  }
  if (!out.empty()) return out;
  for (int m = 0; m < c.num_arrows(); ++m) {
    if (c.is_identity(m)) continue;
    int a = c.cod(m), b = c.dom(m);
    for (int k = 0; k < src.size(a); ++k)
      if (dst.act(m, comp[a][k]) != comp[b][src.act(m, k)]) {
        out.push_back("naturality fails along " + c.arrow(m).name);
        break;
      }
  }
  return out;
}

PshMor::PshMor(Presheaf src, Presheaf dst, Components comp)
    : src_(std::move(src)), dst_(std::move(dst)), comp_(std::move(comp)) {
  auto problems = check_naturality(src_, dst_, comp_);
  if (!problems.empty()) throw ShapeError("invalid natural transformation: " + problems.front());
}

PshMor::PshMor(Unchecked, Presheaf src, Presheaf dst, Components comp)
    : src_(std::move(src)), dst_(std::move(dst)), comp_(std::move(comp)) {}

bool PshMor::operator==(const PshMor& other) const {
  return comp_ == other.comp_ && src_ == other.src_ && dst_ == other.dst_;
}

PshMor identity(const Presheaf& a) {
  Components comp(a.cat().num_objects());
  for (int c = 0; c < a.cat().num_objects(); ++c) {
    comp[c].resize(a.size(c));
    for (int k = 0; k < a.size(c); ++k) comp[c][k] = k;
  }
  return PshMor(PshMor::Unchecked{}, a, a, std::move(comp));
}

PshMor compose(const PshMor& g, const PshMor& f) {
  if (!(f.dst() == g.src())) throw ShapeError("compose: codomain of first map differs from domain of second");
  Components comp(f.components().size());
  for (std::size_t c = 0; c < comp.size(); ++c) {
    comp[c].resize(f.at(static_cast<int>(c)).size());
    for (std::size_t k = 0; k < comp[c].size(); ++k) comp[c][k] = g.at(static_cast<int>(c))[f.at(static_cast<int>(c))[k]];
  }
  return PshMor(PshMor::Unchecked{}, f.src(), g.dst(), std::move(comp));
}

PshMor to_terminal(const Presheaf& a) {
  Presheaf one = terminal_presheaf(a.base());
  Components comp(a.cat().num_objects());
  for (int c = 0; c < a.cat().num_objects(); ++c) comp[c].assign(a.size(c), 0);
  return PshMor(PshMor::Unchecked{}, a, one, std::move(comp));
}

PshMor from_empty(const Presheaf& empty, const Presheaf& b) {
  if (empty.total_size() != 0) throw ShapeError("from_empty: source is not empty");
  return PshMor(empty, b, Components(empty.cat().num_objects()));
}

PshMor make_mor(const Presheaf& src, const Presheaf& dst, const std::function<int(int, int)>& fn) {
  Components comp(src.cat().num_objects());
  for (int c = 0; c < src.cat().num_objects(); ++c) {
    comp[c].resize(src.size(c));
    for (int k = 0; k < src.size(c); ++k) comp[c][k] = fn(c, k);
  }
  return PshMor(src, dst, std::move(comp));
}

bool is_mono(const PshMor& f) {
  for (int c = 0; c < f.src().cat().num_objects(); ++c) {
    std::vector<char> seen(f.dst().size(c), 0);
    for (int v : f.at(c)) {
      if (seen[v]) return false;
      seen[v] = 1;
    }
  }
  return true;
}

bool is_iso(const PshMor& f) {
  if (f.src().sizes() != f.dst().sizes()) return false;
  return is_mono(f);
}

PshMor inverse(const PshMor& f) {
  if (!is_iso(f)) throw PropertyError("inverse: map is not bijective");
  Components comp(f.components().size());
  for (std::size_t c = 0; c < comp.size(); ++c) {
    comp[c].assign(f.at(static_cast<int>(c)).size(), 0);
    for (std::size_t k = 0; k < comp[c].size(); ++k) comp[c][f.at(static_cast<int>(c))[k]] = static_cast<int>(k);
  }
  return PshMor(PshMor::Unchecked{}, f.dst(), f.src(), std::move(comp));
}

Presheaf yoneda(const CatRef& base, int obj) {
  const FinCat& c = *base;
  if (obj < 0 || obj >= c.num_objects()) throw LookupError("yoneda: unknown object " + std::to_string(obj));
  std::vector<int> sizes(c.num_objects());
  for (int x = 0; x < c.num_objects(); ++x) sizes[x] = static_cast<int>(c.hom(x, obj).size());
  std::vector<Table> act(c.num_arrows());
  for (int m = 0; m < c.num_arrows(); ++m) {
    // m : b -> a acts hom(a, obj) -> hom(b, obj) by precomposition
    int a = c.cod(m);
    const auto& h = c.hom(a, obj);
    act[m].resize(h.size());
    for (std::size_t k = 0; k < h.size(); ++k) act[m][k] = c.hom_position(c.compose(h[k], m));
  }
  return Presheaf(base, std::move(sizes), std::move(act));
}

// ---------------------------------------------------------------------------
// HomSearch

HomSearch::HomSearch(Presheaf src, Presheaf dst) : src_(std::move(src)), dst_(std::move(dst)) {
  if (!(*src_.base() == *dst_.base())) throw ShapeError("hom enumeration: mismatched base categories");
}

HomSearch& HomSearch::candidates(std::function<std::vector<int>(int, int)> cand) {
  cand_ = std::move(cand);
  return *this;
}

HomSearch& HomSearch::injective(bool on) {
  injective_ = on;
  return *this;
}

HomSearch& HomSearch::label(std::string where) {
  where_ = std::move(where);
  return *this;
}

std::vector<std::pair<int, int>> canonical_element_order(const Presheaf& a) {
  std::vector<std::pair<int, int>> order;
  for (int c : a.cat().evaluation_order())
    for (int k = 0; k < a.size(c); ++k) order.emplace_back(c, k);
  return order;
}

namespace {

struct SearchState {
  const Presheaf& src;
  const Presheaf& dst;
  const FinCat& cat;
  bool injective;
  std::uint64_t limit;
  const std::string& where;
  std::vector<std::pair<int, int>> order;
  std::vector<std::vector<std::vector<int>>> cand;      // [c][x] candidate list (empty vector = none allowed)
  std::vector<std::vector<std::vector<char>>> allowed;  // [c][x][y]
  bool restricted = false;
  Components value;
  std::vector<std::vector<int>> used;
  std::vector<std::pair<int, int>> trail;
  std::vector<std::vector<int>> into;                   // arrows with codomain c
  std::vector<std::vector<int>> out_of;                 // non-identity arrows with domain c
  std::vector<std::vector<std::vector<int>>> preimage;  // [m][x] elements w with act(m,w)=x
  std::uint64_t nodes = 0;
  const std::function<bool(const Components&)>* visit = nullptr;
  bool stopped = false;

  SearchState(const Presheaf& s, const Presheaf& d, bool inj, std::uint64_t lim, const std::string& w)
      : src(s), dst(d), cat(s.cat()), injective(inj), limit(lim), where(w) {
    const int n = cat.num_objects();
    value.resize(n);
    used.resize(n);
    for (int c = 0; c < n; ++c) {
      value[c].assign(src.size(c), -1);
      used[c].assign(dst.size(c), 0);
    }
    into.resize(n);
    out_of.resize(n);
    preimage.resize(cat.num_arrows());
    for (int m = 0; m < cat.num_arrows(); ++m) {
      if (cat.is_identity(m)) continue;
      into[cat.cod(m)].push_back(m);
      out_of[cat.dom(m)].push_back(m);
      preimage[m].resize(src.size(cat.dom(m)));
      for (int w = 0; w < src.size(cat.cod(m)); ++w) preimage[m][src.act(m, w)].push_back(w);
    }
    order = canonical_element_order(src);
  }

  bool admissible(int c, int x, int y) const {
    if (restricted && !allowed[c][x][y]) return false;
    if (injective && used[c][y]) return false;
    return true;
  }

  void assign(int c, int x, int y) {
    value[c][x] = y;
    if (injective) ++used[c][y];
    trail.emplace_back(c, x);
  }

  void undo_to(std::size_t mark) {
    while (trail.size() > mark) {
      auto [c, x] = trail.back();
      trail.pop_back();
      if (injective) --used[c][value[c][x]];
      value[c][x] = -1;
    }
  }

  // Checks upward constraints of a freshly assigned (c, x) against already assigned
  // elements above it.
  bool upward_ok(int c, int x, int y) const {
    for (int m : out_of[c]) {
      int up = cat.cod(m);
      for (int w : preimage[m][x]) {
        int vw = value[up][w];
        if (vw >= 0 && dst.act(m, vw) != y) return false;
      }
    }
    return true;
  }

  // Assigns (c, x) := y and everything it forces below. Returns false on conflict.
  bool place(int c, int x, int y) {
    if (!upward_ok(c, x, y)) return false;
    assign(c, x, y);
    for (int m : into[c]) {
      int lo = cat.dom(m);
      int xl = src.act(m, x);
      int yl = dst.act(m, y);
      int cur = value[lo][xl];
      if (cur >= 0) {
        if (cur != yl) return false;
        continue;
      }
      if (!admissible(lo, xl, yl)) return false;
      if (!upward_ok(lo, xl, yl)) return false;
      assign(lo, xl, yl);
    }
    return true;
  }

  void search(std::size_t pos) {
    if (stopped) return;
    while (pos < order.size() && value[order[pos].first][order[pos].second] >= 0) ++pos;
    if (pos == order.size()) {
      if (!(*visit)(value)) stopped = true;
      return;
    }
    auto [c, x] = order[pos];
    auto try_value = [&](int y) {
      if (++nodes > limit) throw BudgetExceeded(where, limit);
      if (!admissible(c, x, y)) return;
      std::size_t mark = trail.size();
      if (place(c, x, y)) search(pos + 1);
      undo_to(mark);
    };
    if (restricted) {
      for (int y : cand[c][x]) {
        try_value(y);
        if (stopped) return;
      }
    } else {
      for (int y = 0; y < dst.size(c); ++y) {
        try_value(y);
        if (stopped) return;
      }
    }
  }
};

}  // namespace

std::uint64_t HomSearch::run(const std::function<bool(const Components&)>& visit) const {
  SearchState st(src_, dst_, injective_, current_budget(), where_);
  if (injective_) {
    for (int c = 0; c < src_.cat().num_objects(); ++c)
      if (src_.size(c) > dst_.size(c)) return 0;
  }
  if (cand_) {
    st.restricted = true;
    const int n = src_.cat().num_objects();
    st.cand.resize(n);
    st.allowed.resize(n);
    for (int c = 0; c < n; ++c) {
      st.cand[c].resize(src_.size(c));
      st.allowed[c].resize(src_.size(c));
      for (int x = 0; x < src_.size(c); ++x) {
        auto list = cand_(c, x);
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
        st.allowed[c][x].assign(dst_.size(c), 0);
        for (int y : list) {
          if (y < 0 || y >= dst_.size(c)) throw ShapeError("hom enumeration: candidate out of range");
          st.allowed[c][x][y] = 1;
        }
        st.cand[c][x] = std::move(list);
      }
    }
  }
  st.visit = &visit;
  st.search(0);
  return st.nodes;
}

std::vector<PshMor> HomSearch::all() const {
  std::vector<PshMor> out;
  run([&](const Components& comp) {
    out.emplace_back(PshMor::Unchecked{}, src_, dst_, comp);
    return true;
  });
  return out;
}

std::optional<PshMor> HomSearch::first() const {
  std::optional<PshMor> out;
  run([&](const Components& comp) {
    out.emplace(PshMor::Unchecked{}, src_, dst_, comp);
    return false;
  });
  return out;
}

std::uint64_t HomSearch::count() const {
  std::uint64_t n = 0;
  run([&](const Components&) {
    ++n;
    return true;
  });
  return n;
}

std::vector<PshMor> enumerate_pshmors(const Presheaf& a, const Presheaf& b) { return HomSearch(a, b).all(); }

}  // namespace liftlab
