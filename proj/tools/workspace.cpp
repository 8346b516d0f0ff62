#include "workspace.hpp"

#include <algorithm>
#include <functional>
#include <future>
#include <set>

#include "liftlab/leibniz.hpp"
#include "liftlab/relating.hpp"

namespace liftlab::cli {

namespace {

// ---------------------------------------------------------------------------
// Parsing

struct Errors {
  std::vector<std::string> list;
  void add(const std::string& where, const std::string& msg) { list.push_back(where + ": " + msg); }
  bool empty() const { return list.empty(); }
};

std::string line_col(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t k = 0; k + 1 < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

bool is_name_list(const json& j) {
  if (!j.is_array()) return false;
  return std::all_of(j.begin(), j.end(), [](const json& x) { return x.is_string(); });
}

CatRef parse_category(const json& j, Errors& err) {
  const std::string at = "/category";
  if (!j.is_object()) {
    err.add(at, "expected an object");
    return nullptr;
  }
  if (!j.contains("objects") || !is_name_list(j["objects"])) {
    err.add(at + "/objects", "expected an array of object names");
    return nullptr;
  }
  std::vector<std::string> objects = j["objects"].get<std::vector<std::string>>();
  std::set<std::string> seen;
  for (const auto& o : objects)
    if (!seen.insert(o).second) err.add(at + "/objects", "duplicate object '" + o + "'");
  auto obj_index = [&](const json& x) -> int {
    if (!x.is_string()) return -1;
    auto it = std::find(objects.begin(), objects.end(), x.get<std::string>());
    return it == objects.end() ? -1 : static_cast<int>(it - objects.begin());
  };
  auto read_arrows = [&](const std::string& key) {
    std::vector<Arrow> out;
    if (!j[key].is_array()) {
      err.add(at + "/" + key, "expected an array");
      return out;
    }
    for (std::size_t k = 0; k < j[key].size(); ++k) {
      const json& a = j[key][k];
      std::string here = at + "/" + key + "/" + std::to_string(k);
      if (!a.is_object() || !a.contains("name") || !a["name"].is_string()) {
        err.add(here, "expected {name, dom, cod}");
        continue;
      }
      int dom = a.contains("dom") ? obj_index(a["dom"]) : -1, cod = a.contains("cod") ? obj_index(a["cod"]) : -1;
      if (dom < 0 || cod < 0) {
        err.add(here, "arrow '" + a["name"].get<std::string>() + "' has an unknown endpoint");
        continue;
      }
      out.push_back({a["name"].get<std::string>(), dom, cod});
    }
    return out;
  };
  if (!err.empty()) return nullptr;

  if (j.contains("generators")) {
    std::vector<Arrow> gens = read_arrows("generators");
    if (!err.empty()) return nullptr;
    try {
      return free_category(objects, gens);
    } catch (const Error& e) {
      err.add(at + "/generators", e.what());
      return nullptr;
    }
  }

  if (!j.contains("arrows")) {
    err.add(at, "expected either generators or arrows with identities and composition");
    return nullptr;
  }
  std::vector<Arrow> arrows = read_arrows("arrows");
  if (!err.empty()) return nullptr;
  auto arrow_index = [&](const std::string& name) -> int {
    for (std::size_t k = 0; k < arrows.size(); ++k)
      if (arrows[k].name == name) return static_cast<int>(k);
    return -1;
  };
  for (std::size_t k = 0; k < arrows.size(); ++k)
    if (arrow_index(arrows[k].name) != static_cast<int>(k)) err.add(at + "/arrows", "duplicate arrow '" + arrows[k].name + "'");

  std::vector<int> ids(objects.size(), -1);
  const json& jid = j.contains("identities") ? j["identities"] : json::object();
  if (!jid.is_object()) err.add(at + "/identities", "expected an object from object names to arrow names");
  for (std::size_t x = 0; x < objects.size() && jid.is_object(); ++x) {
    if (!jid.contains(objects[x]) || !jid[objects[x]].is_string()) {
      err.add(at + "/identities", "object '" + objects[x] + "' has no identity morphism");
      continue;
    }
    int m = arrow_index(jid[objects[x]].get<std::string>());
    if (m < 0)
      err.add(at + "/identities/" + objects[x], "unknown arrow '" + jid[objects[x]].get<std::string>() + "'");
    ids[x] = m;
  }
  const int m = static_cast<int>(arrows.size());
  std::vector<std::vector<int>> comp(m, std::vector<int>(m, -1));
  const json& jc = j.contains("composition") ? j["composition"] : json();
  if (!jc.is_array() || static_cast<int>(jc.size()) != m) {
    err.add(at + "/composition", "expected one row per arrow");
  } else {
    for (int g = 0; g < m; ++g) {
      std::string here = at + "/composition/" + std::to_string(g);
      if (!jc[g].is_array() || static_cast<int>(jc[g].size()) != m) {
        err.add(here, "expected one entry per arrow");
        continue;
      }
      for (int f = 0; f < m; ++f) {
        const json& e = jc[g][f];
        if (e.is_null()) continue;
        int gf = e.is_string() ? arrow_index(e.get<std::string>()) : -1;
        if (gf < 0) err.add(here + "/" + std::to_string(f), "expected an arrow name or null");
        comp[g][f] = gf;
      }
    }
  }
  if (!err.empty()) return nullptr;
  try {
    auto cat = std::make_shared<const FinCat>(objects, arrows, ids, comp);
    for (const auto& why : validate_fincat(*cat)) err.add(at, why);
    return err.empty() ? cat : nullptr;
  } catch (const Error& e) {
    err.add(at, e.what());
    return nullptr;
  }
}

// Per-object values given either as an array in object order or an object by name.
template <class T>
std::optional<std::vector<T>> per_object(const FinCat& c, const json& j, const std::string& at, Errors& err) {
  std::vector<T> out(c.num_objects());
  try {
    if (j.is_array()) {
      if (static_cast<int>(j.size()) != c.num_objects()) {
        err.add(at, "expected one entry per object");
        return std::nullopt;
      }
      for (int x = 0; x < c.num_objects(); ++x) out[x] = j[x].get<T>();
      return out;
    }
    if (j.is_object()) {
      for (auto it = j.begin(); it != j.end(); ++it)
        if (!c.find_object(it.key())) err.add(at, "unknown object '" + it.key() + "'");
      for (int x = 0; x < c.num_objects(); ++x) {
        if (!j.contains(c.object_name(x))) {
          err.add(at, "missing entry for object '" + c.object_name(x) + "'");
          return std::nullopt;
        }
        out[x] = j[c.object_name(x)].get<T>();
      }
      return out;
    }
  } catch (const json::exception&) {
  }
  err.add(at, "malformed per-object entry");
  return std::nullopt;
}

std::optional<Presheaf> parse_presheaf(const CatRef& cat, const std::string& name, const json& j, Errors& err) {
  const std::string at = "/presheaves/" + name;
  const std::size_t before = err.list.size();
  if (!j.is_object() || !j.contains("sizes")) {
    err.add(at, "expected an object with sizes");
    return std::nullopt;
  }
  auto sizes = per_object<int>(*cat, j["sizes"], at + "/sizes", err);
  if (!sizes) return std::nullopt;
  for (int s : *sizes)
    if (s < 0) {
      err.add(at + "/sizes", "negative size");
      return std::nullopt;
    }
  std::vector<std::pair<int, Table>> actions;
  if (j.contains("actions")) {
    if (!j["actions"].is_object()) {
      err.add(at + "/actions", "expected an object from arrow names to tables");
      return std::nullopt;
    }
    for (auto it = j["actions"].begin(); it != j["actions"].end(); ++it) {
      auto m = cat->find_arrow(it.key());
      if (!m) {
        err.add(at + "/actions", "unknown arrow '" + it.key() + "'");
        continue;
      }
      try {
        actions.push_back({*m, it.value().get<Table>()});
      } catch (const json::exception&) {
        err.add(at + "/actions/" + it.key(), "expected an array of indices");
      }
    }
  }
  std::vector<std::vector<std::string>> labels;
  if (j.contains("labels")) {
    auto l = per_object<std::vector<std::string>>(*cat, j["labels"], at + "/labels", err);
    if (!l) return std::nullopt;
    labels = *l;
  }
  if (err.list.size() != before) return std::nullopt;
  try {
    Presheaf p = make_presheaf(cat, *sizes, actions);
    if (!labels.empty()) p = Presheaf(cat, *sizes, p.actions(), labels);
    return p;
  } catch (const Error& e) {
    err.add(at, e.what());
    return std::nullopt;
  }
}

std::optional<PshMor> parse_morphism(const Workspace& w, const std::string& name, const json& j, Errors& err) {
  const std::string at = "/morphisms/" + name;
  if (!j.is_object() || !j.contains("src") || !j.contains("dst") || !j.contains("components") ||
      !j["src"].is_string() || !j["dst"].is_string()) {
    err.add(at, "expected {src, dst, components}");
    return std::nullopt;
  }
  auto src = w.presheaves.find(j["src"].get<std::string>()), dst = w.presheaves.find(j["dst"].get<std::string>());
  if (src == w.presheaves.end()) err.add(at + "/src", "unknown presheaf '" + j["src"].get<std::string>() + "'");
  if (dst == w.presheaves.end()) err.add(at + "/dst", "unknown presheaf '" + j["dst"].get<std::string>() + "'");
  if (src == w.presheaves.end() || dst == w.presheaves.end()) return std::nullopt;
  auto comp = per_object<Table>(*w.cat, j["components"], at + "/components", err);
  if (!comp) return std::nullopt;
  try {
    return PshMor(src->second, dst->second, *comp);
  } catch (const Error& e) {
    err.add(at, e.what());
    return std::nullopt;
  }
}

// Input schemas. A field is a morphism, a presheaf, an index, an interval (the word
// "finset" or an object naming its parts), a list of presheaves or one of fixed words.
enum class Ty { Mor, Psh, Index, Interval, PshList, MorList, Word };
struct Field {
  std::string key;
  Ty ty;
  bool required;
  std::vector<std::string> words = {};
};

const std::map<std::string, std::vector<Field>>& schemas() {
  static const std::vector<Field> boundary = {{"left", Ty::Mor, true},
                                              {"right", Ty::Mor, true},
                                              {"left-restriction", Ty::Mor, false},
                                              {"right-restriction", Ty::Mor, false}};
  auto with = [&](std::vector<Field> extra) {
    std::vector<Field> out = boundary;
    out.insert(out.end(), extra.begin(), extra.end());
    return out;
  };
  static const std::map<std::string, std::vector<Field>> s = {
      {"validate", {{"morphisms", Ty::MorList, false}}},
      {"search-lift", with({})},
      {"solve", with({{"structure", Ty::Index, true}, {"parameter", Ty::Psh, true}})},
      {"construct",
       with({{"op", Ty::Word, true, {"right-restrict", "left-restrict", "right-pullback", "right-compose"}},
             {"map", Ty::Mor, false},
             {"top", Ty::Mor, false},
             {"new-right", Ty::Mor, false},
             {"upper-right", Ty::Mor, false}})},
      {"transpose",
       {{"variant", Ty::Word, true, {"leibniz", "unrestricted", "path"}},
        {"dv", Ty::Mor, true},
        {"dl", Ty::Mor, false},
        {"l", Ty::Mor, false},
        {"right", Ty::Mor, true},
        {"interval", Ty::Interval, false}}},
      {"approx-check", {{"dv", Ty::Mor, true}, {"dl", Ty::Mor, true}, {"right", Ty::Mor, true}}},
      {"witness", with({{"relation", Ty::Word, true, {"diagonal", "path", "homotopy"}},
                        {"first", Ty::Index, true},
                        {"second", Ty::Index, true},
                        {"interval", Ty::Interval, false}})},
      {"interval-check", {{"interval", Ty::Interval, true}, {"relative-to", Ty::PshList, true}}},
      {"cube-check", {{"interval", Ty::Interval, true}, {"right", Ty::Mor, true}, {"base-map", Ty::Mor, true}}},
  };
  return s;
}

const std::vector<std::string> kIntervalParts = {"I", "dI", "pt0", "pt1", "di", "f0", "f1"};

void check_inputs(const Workspace& w, const TaskRecord& t, const std::string& at, Errors& err) {
  auto sit = schemas().find(t.kind);
  if (sit == schemas().end()) {
    err.add(at + "/kind", "unknown task kind '" + t.kind + "'");
    return;
  }
  const json& in = t.inputs;
  if (!in.is_object()) {
    err.add(at + "/inputs", "expected an object");
    return;
  }
  auto mor = [&](const json& v) { return v.is_string() && w.morphisms.count(v.get<std::string>()); };
  auto psh = [&](const json& v) { return v.is_string() && w.presheaves.count(v.get<std::string>()); };
  for (auto it = in.begin(); it != in.end(); ++it)
    if (std::none_of(sit->second.begin(), sit->second.end(), [&](const Field& f) { return f.key == it.key(); }))
      err.add(at + "/inputs", "unexpected input '" + it.key() + "' for " + t.kind);
  for (const Field& f : sit->second) {
    std::string here = at + "/inputs/" + f.key;
    if (!in.contains(f.key)) {
      if (f.required) err.add(at + "/inputs", "missing input '" + f.key + "'");
      continue;
    }
    const json& v = in[f.key];
    switch (f.ty) {
      case Ty::Mor:
        if (!mor(v)) err.add(here, "unknown morphism " + v.dump());
        break;
      case Ty::Psh:
        if (!psh(v)) err.add(here, "unknown presheaf " + v.dump());
        break;
      case Ty::Index:
        if (!v.is_number_integer() || v.get<int>() < 0) err.add(here, "expected a non-negative index");
        break;
      case Ty::Word:
        if (!v.is_string() || std::find(f.words.begin(), f.words.end(), v.get<std::string>()) == f.words.end())
          err.add(here, "expected one of the documented values");
        break;
      case Ty::PshList:
        if (!v.is_array() || !std::all_of(v.begin(), v.end(), psh)) err.add(here, "expected a list of presheaf names");
        break;
      case Ty::MorList:
        if (!v.is_array() || !std::all_of(v.begin(), v.end(), mor)) err.add(here, "expected a list of morphism names");
        break;
      case Ty::Interval:
        if (v.is_string() && v.get<std::string>() == "finset") break;
        if (!v.is_object()) {
          err.add(here, "expected \"finset\" or an object naming I, dI, pt0, pt1, di, f0, f1");
          break;
        }
        for (const auto& part : kIntervalParts) {
          bool ok = v.contains(part) && (part == "I" || part == "dI" ? psh(v[part]) : mor(v[part]));
          if (!ok) err.add(here, "missing or unknown part '" + part + "'");
        }
        break;
    }
  }
  auto need = [&](const std::string& key, const std::string& why) {
    if (!in.contains(key)) err.add(at + "/inputs", "missing input '" + key + "' " + why);
  };
  if (t.kind == "construct" && in.contains("op") && in["op"].is_string()) {
    std::string op = in["op"].get<std::string>();
    if (op == "right-restrict" || op == "left-restrict") need("map", "for " + op);
    if (op == "right-pullback") {
      need("top", "for right-pullback");
      need("new-right", "for right-pullback");
      need("right-restriction", "for right-pullback");
    }
    if (op == "right-compose") need("upper-right", "for right-compose");
  }
  if (t.kind == "transpose" && in.contains("variant") && in["variant"].is_string()) {
    if (in["variant"] == "path")
      need("interval", "for the path variant");
    else
      need("dl", "for the " + in["variant"].get<std::string>() + " variant");
  }
  if (t.kind == "witness" && in.contains("relation") && in["relation"].is_string() && in["relation"] != "diagonal")
    need("interval", "for the " + in["relation"].get<std::string>() + " relation");
}

// ---------------------------------------------------------------------------
// Serialization helpers

json components(const PshMor& f) { return json(f.components()); }

json presheaf_doc(const Presheaf& p) {
  const FinCat& c = p.cat();
  json j;
  j["sizes"] = p.sizes();
  json act = json::object();
  for (int m = 0; m < c.num_arrows(); ++m)
    if (!c.is_identity(m)) act[c.arrow(m).name] = p.action(m);
  j["actions"] = act;
  if (!p.labels().empty()) j["labels"] = p.labels();
  return j;
}

// ---------------------------------------------------------------------------
// Running

struct Outcome {
  std::string status = "pass";
  std::string outcome;
  json result = json::object();
  std::vector<std::string> diagnostics;
  void fail(const std::string& why) {
    status = "fail";
    diagnostics.push_back(why);
  }
};

class Runner {
 public:
  Runner(const Workspace& w, const RunOptions& o) : w_(w), opts_(o), one_(terminal_presheaf(w.cat)) {}

  Outcome run(const TaskRecord& t) const {
    Outcome out;
    std::uint64_t budget = opts_.budget;
    int bound = opts_.bound;
    if (t.options.contains("budget")) budget = t.options["budget"].get<std::uint64_t>();
    if (t.options.contains("bound")) bound = t.options["bound"].get<int>();
    ScopedBudget scope(budget);
    try {
      dispatch(t, bound, out);
      apply_expectations(t, out);
    } catch (const BudgetExceeded& e) {
      out.status = "budget-exceeded";
      out.diagnostics.push_back(e.what());
    } catch (const Error& e) {
      out.status = "error";
      out.diagnostics.push_back(e.what());
    }
    return out;
  }

 private:
  const PshMor& M(const json& v) const { return w_.morphisms.at(v.get<std::string>()); }
  const Presheaf& P(const json& v) const { return w_.presheaves.at(v.get<std::string>()); }
  std::vector<SliceObj> universe(int bound) const { return bounded_universe(one_, bound); }

  LiftBoundary boundary(const json& in) const {
    LiftBoundary b = make_boundary(M(in["left"]), M(in["right"]));
    if (in.contains("left-restriction")) b = restrict_left(b, M(in["left-restriction"]));
    if (in.contains("right-restriction")) b = restrict_right(b, M(in["right-restriction"]));
    return b;
  }

  IntervalStruct interval(const json& v) const {
    if (v.is_string()) {
      Presheaf two = constant_presheaf(w_.cat, 2);
      Components c0(w_.cat->num_objects(), Table{0}), c1(w_.cat->num_objects(), Table{1});
      PshMor p0(one_, two, c0), p1(one_, two, c1);
      return make_interval(over_terminal(two), over_terminal(two), p0, p1, identity(two), p0, p1);
    }
    return make_interval(over_terminal(P(v["I"])), over_terminal(P(v["dI"])), M(v["pt0"]), M(v["pt1"]), M(v["di"]),
                         M(v["f0"]), M(v["f1"]));
  }

  static const LiftStruct& pick(const std::vector<LiftStruct>& fs, const json& k) {
    std::size_t n = k.get<std::size_t>();
    if (n >= fs.size())
      throw LookupError("structure index " + std::to_string(n) + " out of range (" + std::to_string(fs.size()) +
                        " structures)");
    return fs[n];
  }

  void dispatch(const TaskRecord& t, int bound, Outcome& out) const {
    const json& in = t.inputs;
    if (t.kind == "validate") return validate(in, out);
    if (t.kind == "search-lift") return search(in, out);
    if (t.kind == "solve") return solve_task(in, bound, out);
    if (t.kind == "construct") return construct(in, bound, out);
    if (t.kind == "transpose") return transpose(in, out);
    if (t.kind == "approx-check") return approx(in, out);
    if (t.kind == "witness") return witness(in, out);
    if (t.kind == "interval-check") return interval_check(in, out);
    if (t.kind == "cube-check") return cube(in, bound, out);
    throw LookupError("unknown task kind '" + t.kind + "'");
  }

  static void apply_expectations(const TaskRecord& t, Outcome& out) {
    if (t.expect.empty()) return;
    bool ok = true;
    for (auto it = t.expect.begin(); it != t.expect.end(); ++it) {
      if (!out.result.contains(it.key()) || out.result[it.key()] != it.value()) {
        ok = false;
        out.diagnostics.push_back("expected " + it.key() + " = " + it.value().dump() + ", got " +
                                  (out.result.contains(it.key()) ? out.result[it.key()].dump() : "nothing"));
      }
    }
    if (!ok)
      out.status = "fail";
    else if (out.status == "fail")
      out.status = "pass";  // the failure was the expected result
  }

  void validate(const json& in, Outcome& out) const {
    json mors = json::object();
    std::vector<std::string> names;
    if (in.contains("morphisms"))
      names = in["morphisms"].get<std::vector<std::string>>();
    else
      for (const auto& [n, f] : w_.morphisms) names.push_back(n);
    for (const auto& n : names) {
      const PshMor& f = w_.morphisms.at(n);
      mors[n] = {{"mono", is_mono(f)}, {"iso", is_iso(f)}};
    }
    json sizes = json::object();
    for (const auto& [n, p] : w_.presheaves) sizes[n] = p.sizes();
    out.result = {{"objects", w_.cat->num_objects()}, {"arrows", w_.cat->num_arrows()}, {"presheaves", sizes},
                  {"morphisms", mors}};
  }

  void search(const json& in, Outcome& out) const {
    auto fs = search_lift_struct(boundary(in));
    json structs = json::array();
    for (const auto& F : fs) structs.push_back(components(F.internal()));
    out.result = {{"count", fs.size()}, {"structures", structs}};
  }

  void solve_task(const json& in, int bound, Outcome& out) const {
    auto fs = search_lift_struct(boundary(in));
    const LiftStruct& F = pick(fs, in["structure"]);
    const LiftContext& ctx = F.context();
    SliceObj X = over_terminal(P(in["parameter"]));
    json sols = json::array();
    for (const auto& pr : enumerate_problems(ctx, X)) {
      PshMor s = solve(F, pr);
      std::string why = check_solution(ctx, pr, s);
      if (!why.empty()) out.fail("solution does not fill: " + why);
      sols.push_back({{"u", components(pr.u)}, {"v", components(pr.v)}, {"solution", components(s)}});
    }
    std::vector<SliceObj> params{X};
    for (const auto& Y : universe(bound)) params.push_back(Y);
    std::string why;
    bool uniform = verify_family(ctx, family_of(F, params), &why);
    if (!uniform) out.fail("not uniform: " + why);
    out.result = {{"solutions", sols}, {"uniform", uniform}, {"parameters", params.size()}};
  }

  void construct(const json& in, int bound, Outcome& out) const {
    std::string op = in["op"].get<std::string>();
    LiftBoundary b = boundary(in);
    auto fs = search_lift_struct(b);
    std::size_t checked = 0, built = 0;
    auto params = universe(bound);
    auto compare = [&](const LiftStruct& G, const std::function<PshMor(const LiftProblem&)>& formula) {
      ++built;
      for (const auto& X : params)
        for (const auto& pr : enumerate_problems(G.context(), X)) {
          ++checked;
          PshMor s = solve(G, pr);
          std::string why = check_solution(G.context(), pr, s);
          if (!why.empty()) out.fail(op + ": solution does not fill: " + why);
          if (!(s == formula(pr))) out.fail(op + ": solution differs from the pointwise formula");
        }
    };
    if (op == "right-restrict") {
      const PshMor& q = M(in["map"]);
      for (const auto& F : fs)
        compare(right_restrict(F, q), [&](const LiftProblem& pr) { return solve(F, {pr.X, pr.u, compose(q, pr.v)}); });
    } else if (op == "left-restrict") {
      const PshMor& j = M(in["map"]);
      for (const auto& F : fs)
        compare(left_restrict(F, j), [&](const LiftProblem& pr) {
          Pullback from = slice_product(pr.X, b.Vp), to = slice_product(pr.X, over_terminal(j.dst()));
          return solve(F, {pr.X, pr.u, compose(pr.v, from.map_to(to, identity(pr.X.total), j))});
        });
    } else if (op == "right-pullback") {
      const PshMor& qp = M(in["top"]);
      const PshMor& pp = M(in["new-right"]);
      for (const auto& F : fs) {
        LiftStruct G = right_pullback(F, over_terminal(pp.src()), qp, pp);
        compare(G, [&](const LiftProblem& pr) { return solve(G, pr); });
        if (!(right_pullback_inv(G, F.boundary(), qp) == F)) out.fail("right-pullback does not round-trip");
      }
    } else {
      const PshMor& pu = M(in["upper-right"]);
      auto upper = search_lift_struct(make_boundary(M(in["left"]), pu));
      for (const auto& Fp : upper)
        for (const auto& F : fs)
          compare(right_compose(Fp, F), [&](const LiftProblem& pr) {
            PshMor lower = solve(F, {pr.X, compose(pu, pr.u), pr.v});
            return solve(Fp, {pr.X, pr.u, lower});
          });
    }
    out.result = {{"op", op}, {"constructed", built}, {"checked_problems", checked}};
  }

  void transpose(const json& in, Outcome& out) const {
    std::string variant = in["variant"].get<std::string>();
    const PshMor& dv = M(in["dv"]);
    const PshMor& p = M(in["right"]);
    SliceObj E = over_terminal(p.src()), B = over_terminal(p.dst());
    std::size_t target_count = 0;
    bool round_trip = true, invertible = true;
    std::vector<LiftStruct> fs;
    if (variant == "path") {
      IntervalStruct i = interval(in["interval"]);
      RelIntervalCert cert = require_interval(i, {E, B});
      BoundaryPair bp{over_terminal(dv.src()), over_terminal(dv.dst()), i.dI, i.I, dv, i.di};
      ApproxStruct a = canonical_approx(bp, E, B, p);
      fs = search_lift_struct(product_boundary(a, i.I, identity(i.I.total)));
      invertible = is_iso(constant_corner(cert, p));
      for (const auto& F : fs) {
        LiftStruct H = path_transpose(F, a, cert, p);
        if (target_count == 0) target_count = search_lift_struct(H.boundary()).size();
        if (invertible && !(path_untranspose(H, a, cert, p) == F)) round_trip = false;
      }
    } else {
      const PshMor& dl = M(in["dl"]);
      PshMor l = in.contains("l") ? M(in["l"]) : identity(dl.dst());
      BoundaryPair bp{over_terminal(dv.src()), over_terminal(dv.dst()), over_terminal(dl.src()),
                      over_terminal(dl.dst()), dv, dl};
      ApproxStruct a = canonical_approx(bp, E, B, p);
      SliceObj Lp = over_terminal(l.dst());
      fs = search_lift_struct(product_boundary(a, Lp, l));
      bool unres = variant == "unrestricted";
      for (const auto& F : fs) {
        LiftStruct G = unres ? transpose_unrestricted(F, a, Lp, l) : leibniz_transpose(F, a, Lp, l);
        LiftStruct back = unres ? untranspose_unrestricted(G, a, Lp, l) : leibniz_untranspose(G, a, Lp, l);
        if (!(back == F)) round_trip = false;
        if (target_count == 0) target_count = search_lift_struct(G.boundary()).size();
      }
    }
    if (!round_trip) out.fail(variant + " transpose does not round-trip");
    if (invertible && !fs.empty() && target_count != fs.size())
      out.fail("structure counts differ: " + std::to_string(fs.size()) + " vs " + std::to_string(target_count));
    out.result = {{"variant", variant},   {"source_structures", fs.size()}, {"target_structures", target_count},
                  {"round_trip", round_trip}, {"invertible", invertible}};
  }

  void approx(const json& in, Outcome& out) const {
    const PshMor& dv = M(in["dv"]);
    const PshMor& dl = M(in["dl"]);
    const PshMor& p = M(in["right"]);
    BoundaryPair bp{over_terminal(dv.src()), over_terminal(dv.dst()), over_terminal(dl.src()),
                    over_terminal(dl.dst()), dv, dl};
    ApproxStruct a = canonical_approx(bp, over_terminal(p.src()), over_terminal(p.dst()), p);
    std::string why = explain_pp_approx(a);
    if (!why.empty()) out.fail(why);
    out.result = {{"valid", why.empty()}, {"candidate_sizes", a.candidate().total.sizes()}};
  }

  void witness(const json& in, Outcome& out) const {
    LiftBoundary b = boundary(in);
    auto fs = search_lift_struct(b);
    const LiftStruct& F1 = pick(fs, in["first"]);
    const LiftStruct& F2 = pick(fs, in["second"]);
    SpanMap s = identity_span(b);
    std::string rel = in["relation"].get<std::string>();
    if (rel == "homotopy") {
      try {
        HomotopyWitness hw = construct_homotopy_witness(F1, F2, s, interval(in["interval"]));
        std::string why = explain_witness(hw.witness);
        if (!why.empty()) out.fail(why);
        out.result = {{"found", true}, {"H", components(hw.witness.H)}, {"ell", components(hw.ell)}};
        out.outcome = "constructed";
      } catch (const NoConstruction& e) {
        out.status = "none";
        out.outcome = e.what();
        out.result = {{"found", false}};
      }
      return;
    }
    FibRel r = rel == "diagonal" ? diagonal_relation(b.E, b.B, b.p) : path_relation(interval(in["interval"]), b.E, b.B, b.p);
    WitnessSearch res = search_witness(F1, F2, s, r);
    if (res.witness) {
      if (!check_witness(*res.witness)) out.fail("search returned a witness that fails the check");
      out.result = {{"found", true}, {"H", components(res.witness->H)}, {"examined", res.examined}};
      out.outcome = "found";
    } else {
      out.status = "none";
      out.outcome = "none, search exhausted, " + std::to_string(res.exhausted) + " candidates";
      out.result = {{"found", false}, {"exhausted", res.exhausted}, {"examined", res.examined}};
    }
  }

  void interval_check(const json& in, Outcome& out) const {
    std::vector<SliceObj> rel;
    for (const auto& n : in["relative-to"]) rel.push_back(over_terminal(P(n)));
    IntervalCheck c = check_interval(interval(in["interval"]), rel);
    if (!c.cert) out.fail(c.failure);
    out.result = {{"certified", c.cert.has_value()}};
    if (!c.cert) out.result["failure"] = c.failure;
  }

  void cube(const json& in, int bound, Outcome& out) const {
    const PshMor& p = M(in["right"]);
    const PshMor& b = M(in["base-map"]);
    SliceObj E{p.src(), compose(b, p)}, B{p.dst(), b};
    PullbackPowerCube c = pullback_power_cube(interval(in["interval"]), E, B, p, bounded_presheaves(w_.cat, bound));
    for (const auto* face : {&c.top, &c.bottom, &c.front})
      if (!face->empty()) out.fail(*face);
    out.result = {{"certified", c.certified()}, {"top", c.top}, {"bottom", c.bottom}, {"front", c.front}};
  }

  const Workspace& w_;
  RunOptions opts_;
  Presheaf one_;
};

}  // namespace

bool operator==(const Workspace& a, const Workspace& b) {
  if (!a.cat || !b.cat || !(*a.cat == *b.cat)) return false;
  if (a.presheaves.size() != b.presheaves.size() || a.morphisms != b.morphisms || a.tasks != b.tasks) return false;
  for (const auto& [n, p] : a.presheaves) {
    auto it = b.presheaves.find(n);
    if (it == b.presheaves.end() || !(it->second == p) || it->second.labels() != p.labels()) return false;
  }
  return true;
}

ParseResult parse_workspace(const std::string& text) {
  ParseResult out;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    out.errors.push_back(line_col(text, e.byte) + ": syntax error: " + e.what());
    return out;
  }
  Errors err;
  if (!doc.is_object()) {
    err.add("/", "expected an object with category, presheaves, morphisms and tasks");
    out.errors = err.list;
    return out;
  }
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (it.key() != "category" && it.key() != "presheaves" && it.key() != "morphisms" && it.key() != "tasks")
      err.add("/", "unexpected key '" + it.key() + "'");
  Workspace w;
  w.cat = parse_category(doc.contains("category") ? doc["category"] : json(), err);
  if (!w.cat) {
    out.errors = err.list;
    return out;
  }
  const json ps = doc.value("presheaves", json::object());
  if (!ps.is_object()) err.add("/presheaves", "expected an object");
  for (auto it = ps.begin(); ps.is_object() && it != ps.end(); ++it)
    if (auto p = parse_presheaf(w.cat, it.key(), it.value(), err)) w.presheaves.emplace(it.key(), *p);
  const json ms = doc.value("morphisms", json::object());
  if (!ms.is_object()) err.add("/morphisms", "expected an object");
  for (auto it = ms.begin(); ms.is_object() && it != ms.end(); ++it)
    if (auto f = parse_morphism(w, it.key(), it.value(), err)) w.morphisms.emplace(it.key(), *f);
  const json ts = doc.value("tasks", json::array());
  if (!ts.is_array()) err.add("/tasks", "expected an array");
  std::set<std::string> ids;
  for (std::size_t k = 0; ts.is_array() && k < ts.size(); ++k) {
    std::string at = "/tasks/" + std::to_string(k);
    const json& t = ts[k];
    if (!t.is_object() || !t.contains("id") || !t["id"].is_string() || !t.contains("kind") || !t["kind"].is_string()) {
      err.add(at, "expected {id, kind, inputs}");
      continue;
    }
    TaskRecord r{t["id"].get<std::string>(), t["kind"].get<std::string>(), t.value("inputs", json::object()),
                 t.value("expect", json::object()), t.value("options", json::object())};
    for (auto it = t.begin(); it != t.end(); ++it)
      if (it.key() != "id" && it.key() != "kind" && it.key() != "inputs" && it.key() != "expect" &&
          it.key() != "options")
        err.add(at, "unexpected key '" + it.key() + "'");
    if (!ids.insert(r.id).second) err.add(at + "/id", "duplicate task id '" + r.id + "'");
    if (!r.expect.is_object()) err.add(at + "/expect", "expected an object");
    if (!r.options.is_object()) {
      err.add(at + "/options", "expected an object");
    } else {
      for (auto it = r.options.begin(); it != r.options.end(); ++it) {
        if (it.key() != "budget" && it.key() != "bound")
          err.add(at + "/options", "unknown option '" + it.key() + "'");
        else if (!it.value().is_number_unsigned())
          err.add(at + "/options/" + it.key(), "expected a non-negative integer");
      }
    }
    check_inputs(w, r, at, err);
    w.tasks.push_back(std::move(r));
  }
  if (!err.empty()) {
    out.errors = err.list;
    return out;
  }
  out.workspace = std::move(w);
  return out;
}

json serialize_workspace(const Workspace& w) {
  const FinCat& c = *w.cat;
  json cat;
  cat["objects"] = c.objects();
  json arrows = json::array();
  for (const auto& a : c.arrows())
    arrows.push_back({{"name", a.name}, {"dom", c.object_name(a.dom)}, {"cod", c.object_name(a.cod)}});
  cat["arrows"] = arrows;
  json ids = json::object();
  for (int x = 0; x < c.num_objects(); ++x) ids[c.object_name(x)] = c.arrow(c.id(x)).name;
  cat["identities"] = ids;
  json comp = json::array();
  for (int g = 0; g < c.num_arrows(); ++g) {
    json row = json::array();
    for (int f = 0; f < c.num_arrows(); ++f) {
      int gf = c.compose(g, f);
      row.push_back(gf < 0 ? json() : json(c.arrow(gf).name));
    }
    comp.push_back(row);
  }
  cat["composition"] = comp;

  json ps = json::object();
  for (const auto& [n, p] : w.presheaves) ps[n] = presheaf_doc(p);
  json ms = json::object();
  for (const auto& [n, f] : w.morphisms) {
    auto name_of = [&](const Presheaf& p) {
      for (const auto& [m, q] : w.presheaves)
        if (q == p) return m;
      throw LookupError("serialize: morphism '" + n + "' uses an unnamed presheaf");
    };
    ms[n] = {{"src", name_of(f.src())}, {"dst", name_of(f.dst())}, {"components", components(f)}};
  }
  json ts = json::array();
  for (const auto& t : w.tasks) {
    json j = {{"id", t.id}, {"kind", t.kind}, {"inputs", t.inputs}};
    if (!t.expect.empty()) j["expect"] = t.expect;
    if (!t.options.empty()) j["options"] = t.options;
    ts.push_back(j);
  }
  return {{"category", cat}, {"presheaves", ps}, {"morphisms", ms}, {"tasks", ts}};
}

json run_tasks(const Workspace& w, const RunOptions& opts) {
  Runner runner(w, opts);
  std::vector<Outcome> outcomes(w.tasks.size());
  if (opts.parallel) {
    std::vector<std::future<Outcome>> jobs;
    for (const auto& t : w.tasks) jobs.push_back(std::async(std::launch::async, [&runner, &t] { return runner.run(t); }));
    for (std::size_t k = 0; k < jobs.size(); ++k) outcomes[k] = jobs[k].get();
  } else {
    for (std::size_t k = 0; k < w.tasks.size(); ++k) outcomes[k] = runner.run(w.tasks[k]);
  }
  json tasks = json::array();
  std::map<std::string, int> counts;
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    const Outcome& o = outcomes[k];
    json j = {{"id", w.tasks[k].id}, {"kind", w.tasks[k].kind}, {"status", o.status}, {"result", o.result},
              {"diagnostics", o.diagnostics}};
    if (!o.outcome.empty()) j["outcome"] = o.outcome;
    tasks.push_back(j);
    ++counts[o.status];
  }
  return {{"schema_version", kReportSchema},
          {"options", {{"budget", opts.budget}, {"bound", opts.bound}}},
          {"tasks", tasks},
          {"summary", counts}};
}

bool report_passed(const json& report) {
  for (const auto& t : report["tasks"])
    if (t["status"] != "pass" && t["status"] != "none") return false;
  return true;
}

const std::vector<std::string>& task_kinds() {
  static const std::vector<std::string> kinds = [] {
    std::vector<std::string> out;
    for (const auto& [k, f] : schemas()) out.push_back(k);
    return out;
  }();
  return kinds;
}

std::optional<std::string> explain_kind(const std::string& kind) {
  static const std::map<std::string, std::string> text = {
      {"validate",
       "Checks the category axioms, presheaf functoriality and naturality of every morphism (all done while "
       "parsing), then reports which morphisms are monic or invertible."},
      {"search-lift",
       "Enumerates lifting structures for left against right, restricted along the optional restrictions. A "
       "structure is a section s: P' -> [V,E] of [V,E] -> [U,E] x_[U,B] [V,B] over P' = [U,E] x_[U,B] [V',B'], "
       "listed in canonical order as component tables."},
      {"solve",
       "Solves every problem with the given parameter X by classifying it into P' and applying the structure, "
       "checks each solution fills both triangles, and checks the family is natural in X over the bounded "
       "universe."},
      {"construct",
       "Builds new structures from each structure found: right-restrict solves F(u, q.v), left-restrict solves "
       "F(u, v.(X x j)), right-pullback transports along a pullback square and checks the inverse, right-compose "
       "solves F'(u, F(p'.u, v)). Every bounded problem is compared with the pointwise formula."},
      {"transpose",
       "Leibniz transposition. leibniz: structures for the pushout-product approximation against E -> B versus "
       "structures for dv against the pullback-power [L,E] -> [dL,E] x_[dL,B] [L',B]; unrestricted: the same "
       "followed by the pullback-hom square; path: the interval as second map, ending in the fibred path object "
       "over E x_B E. Reports counts on both sides and whether every structure round-trips."},
      {"approx-check",
       "Builds the canonical pushout-product approximation for dv and dl relative to the right map and checks "
       "its two comparison maps are inverse isomorphisms."},
      {"witness",
       "Relates two structures up to a relation R -> E x_B E: a witness is H: P' -> [V,R] whose two legs are the "
       "two structures. diagonal and path search H exhaustively; homotopy transposes a homotopy "
       "D x I -> [V,E] between the two lifts into H."},
      {"interval-check",
       "Checks the interval conditions relative to each listed presheaf: [{0} meet {1}, B] is terminal and "
       "[dI, B] -> B x B is invertible."},
      {"cube-check",
       "For E -> B over a base, compares the fibred pullback-power of the interval with the global one and "
       "certifies the three faces of the cube as pullbacks against bounded test presheaves."},
  };
  auto it = text.find(kind);
  if (it == text.end()) return std::nullopt;
  return it->second;
}

}  // namespace liftlab::cli
