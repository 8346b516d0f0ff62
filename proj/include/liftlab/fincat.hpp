#pragma once

// Finite categories, presheaves of finite sets over them and natural
// transformations. Elements of every finite set are the integers 0..n-1.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "liftlab/error.hpp"

namespace liftlab {

struct Arrow {
  std::string name;
  int dom = 0;
  int cod = 0;
};

/// A finite category given by a total composition table.
/// `compose(g, f)` is g∘f and is defined when cod(f) == dom(g).
class FinCat {
 public:
  FinCat(std::vector<std::string> objects, std::vector<Arrow> arrows, std::vector<int> identities,
         std::vector<std::vector<int>> comp);

  int num_objects() const { return static_cast<int>(objects_.size()); }
  int num_arrows() const { return static_cast<int>(arrows_.size()); }
  const std::string& object_name(int c) const { return objects_.at(c); }
  const Arrow& arrow(int m) const { return arrows_.at(m); }
  int dom(int m) const { return arrows_[m].dom; }
  int cod(int m) const { return arrows_[m].cod; }
  int id(int c) const { return ids_[c]; }
  bool is_identity(int m) const { return ids_[arrows_[m].dom] == m; }

  /// g∘f, or -1 when the pair is not composable.
  int compose(int g, int f) const { return comp_[g][f]; }
  const std::vector<std::vector<int>>& comp_table() const { return comp_; }
  const std::vector<int>& identities() const { return ids_; }
  const std::vector<std::string>& objects() const { return objects_; }
  const std::vector<Arrow>& arrows() const { return arrows_; }

  /// Arrows a -> b in ascending index order.
  const std::vector<int>& hom(int a, int b) const { return homs_[a * num_objects() + b]; }
  /// Position of arrow m inside hom(dom m, cod m).
  int hom_position(int m) const { return hom_pos_[m]; }

  std::optional<int> find_object(const std::string& name) const;
  std::optional<int> find_arrow(const std::string& name) const;
  int object_index(const std::string& name) const;

  /// Object order used by every enumeration: objects receiving more arrows first,
  /// ties broken by index. Elements at such objects determine elements below them.
  const std::vector<int>& evaluation_order() const { return order_; }

  bool operator==(const FinCat& other) const;

 private:
  std::vector<std::string> objects_;
  std::vector<Arrow> arrows_;
  std::vector<int> ids_;
  std::vector<std::vector<int>> comp_;
  std::vector<std::vector<int>> homs_;
  std::vector<int> hom_pos_;
  std::vector<int> order_;
};

using CatRef = std::shared_ptr<const FinCat>;

/// Returns the list of violated category axioms; empty means valid.
std::vector<std::string> validate_fincat(const FinCat& c);

/// Free category on a finite acyclic graph; composites are named "g.f".
/// Objects are given by name, generating arrows as (name, dom, cod).
CatRef free_category(std::vector<std::string> objects, const std::vector<Arrow>& generators);

CatRef terminal_category();
/// •0 -> •1
CatRef arrow_category();
/// •0 -> •1 -> •2 with the composite.
CatRef chain3_category();
/// Two parallel arrows s, t : •0 -> •1 (presheaves are directed graphs).
CatRef parallel_pair_category();
/// One object with an idempotent e (e∘e = e).
CatRef idempotent_category();

using Table = std::vector<int>;
/// Per-object function tables, indexed by object.
using Components = std::vector<Table>;

struct FinSetRep {
  int size = 0;
  std::vector<std::string> labels;  // empty, or exactly `size` distinct names
};

/// A contravariant functor base -> FinSet. act(m) for m: c' -> c maps at(c) to at(c').
/// Copies are cheap; values are immutable.
class Presheaf {
 public:
  Presheaf() = default;
  /// `actions` holds a table for every arrow (identities included). Throws ShapeError
  /// when tables have the wrong shape or functoriality fails.
  Presheaf(CatRef base, std::vector<int> sizes, std::vector<Table> actions,
           std::vector<std::vector<std::string>> labels = {});

  const CatRef& base() const { return d_->base; }
  const FinCat& cat() const { return *d_->base; }
  int size(int c) const { return d_->sizes[c]; }
  const std::vector<int>& sizes() const { return d_->sizes; }
  int act(int m, int x) const { return d_->act[m][x]; }
  const Table& action(int m) const { return d_->act[m]; }
  const std::vector<Table>& actions() const { return d_->act; }
  const std::vector<std::vector<std::string>>& labels() const { return d_->labels; }
  FinSetRep at(int c) const;
  int total_size() const;
  bool valid() const { return d_ != nullptr; }

  /// On-the-nose equality: same base, sizes and action tables. Labels are ignored.
  bool operator==(const Presheaf& other) const;

 private:
  struct Data {
    CatRef base;
    std::vector<int> sizes;
    std::vector<Table> act;
    std::vector<std::vector<std::string>> labels;
  };
  std::shared_ptr<const Data> d_;
};

/// Violated presheaf laws (identity and contravariant composition), empty when valid.
std::vector<std::string> check_presheaf_laws(const CatRef& base, const std::vector<int>& sizes,
                                             const std::vector<Table>& actions);

/// Builds a presheaf from the actions of non-identity arrows only.
Presheaf make_presheaf(CatRef base, std::vector<int> sizes, const std::vector<std::pair<int, Table>>& actions);

/// Constant presheaf (every arrow acts as identity) of the given size.
Presheaf constant_presheaf(CatRef base, int n);
Presheaf terminal_presheaf(CatRef base);
Presheaf empty_presheaf(CatRef base);

/// A natural transformation src -> dst.
class PshMor {
 public:
  PshMor() = default;
  /// Throws ShapeError when the tables do not type-check or naturality fails.
  PshMor(Presheaf src, Presheaf dst, Components comp);

  const Presheaf& src() const { return src_; }
  const Presheaf& dst() const { return dst_; }
  int operator()(int c, int x) const { return comp_[c][x]; }
  const Components& components() const { return comp_; }
  const Table& at(int c) const { return comp_[c]; }

  bool operator==(const PshMor& other) const;

  struct Unchecked {};
  PshMor(Unchecked, Presheaf src, Presheaf dst, Components comp);

 private:
  Presheaf src_;
  Presheaf dst_;
  Components comp_;
};

/// Naturality violations of a family of per-object functions (empty when natural).
std::vector<std::string> check_naturality(const Presheaf& src, const Presheaf& dst, const Components& comp);

PshMor identity(const Presheaf& a);
/// g∘f
PshMor compose(const PshMor& g, const PshMor& f);
/// The unique map into the terminal presheaf / out of the empty presheaf.
PshMor to_terminal(const Presheaf& a);
PshMor from_empty(const Presheaf& empty, const Presheaf& b);
/// Builds a map elementwise; naturality is checked.
PshMor make_mor(const Presheaf& src, const Presheaf& dst, const std::function<int(int c, int x)>& fn);

bool is_iso(const PshMor& f);
bool is_mono(const PshMor& f);
/// Inverse of an isomorphism; throws PropertyError if f is not bijective.
PshMor inverse(const PshMor& f);

/// Representable presheaf Hom(-, obj); the element k of at(c) is hom(c, obj)[k].
Presheaf yoneda(const CatRef& base, int obj);
/// The element of at(obj) that an arrow m in hom(., obj) corresponds to is hom_position(m).

/// Backtracking search for natural transformations in canonical order: objects in the
/// category's evaluation order, elements ascending, candidate values ascending.
/// Values forced by naturality are propagated as soon as they are determined.
class HomSearch {
 public:
  HomSearch(Presheaf src, Presheaf dst);

  /// Restricts the admissible value of x ∈ src(c) to a sorted candidate list.
  HomSearch& candidates(std::function<std::vector<int>(int c, int x)> cand);
  /// Only admits componentwise injective maps.
  HomSearch& injective(bool on = true);
  /// Per-call budget label for diagnostics.
  HomSearch& label(std::string where);

  /// Visits each solution; the visitor returns false to stop. Returns the number of
  /// candidate assignments examined.
  std::uint64_t run(const std::function<bool(const Components&)>& visit) const;

  std::vector<PshMor> all() const;
  std::optional<PshMor> first() const;
  std::uint64_t count() const;

 private:
  Presheaf src_;
  Presheaf dst_;
  std::function<std::vector<int>(int, int)> cand_;
  bool injective_ = false;
  std::string where_ = "hom enumeration";
};

/// Every natural transformation a -> b exactly once, in canonical order.
std::vector<PshMor> enumerate_pshmors(const Presheaf& a, const Presheaf& b);

/// Elements of the candidate order used by HomSearch: (object, element) pairs.
std::vector<std::pair<int, int>> canonical_element_order(const Presheaf& a);

}  // namespace liftlab
