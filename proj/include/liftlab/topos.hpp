#pragma once

// Finite limits and colimits, slices, pullback / postcomposition / pushforward along
// a map, and local exponentials for presheaves of finite sets.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "liftlab/fincat.hpp"

namespace liftlab {

// ---------------------------------------------------------------------------
// General finite (co)limits

struct Diagram {
  struct Edge {
    int from = 0;
    int to = 0;
    PshMor map;
  };
  std::vector<Presheaf> objects;
  std::vector<Edge> edges;
};

struct Cone {
  Presheaf apex;
  std::vector<PshMor> legs;  // one per diagram object
};

struct Cocone {
  Presheaf apex;
  std::vector<PshMor> legs;
};

/// Pointwise limit: compatible tuples, lexicographically ordered.
Cone finite_limit(const Diagram& d);
/// Pointwise colimit: classes of the generated equivalence on the disjoint union,
/// ordered by their least representative.
Cocone finite_colimit(const Diagram& d);

bool is_cone(const Diagram& d, const std::vector<PshMor>& legs);
bool is_cocone(const Diagram& d, const std::vector<PshMor>& legs);

/// Checks the universal property against each test object by enumerating every
/// competing (co)cone and every mediating map. Empty string on success, otherwise
/// a description of the first failure.
std::string certify_limit(const Diagram& d, const Cone& cone, const std::vector<Presheaf>& tests);
std::string certify_colimit(const Diagram& d, const Cocone& cocone, const std::vector<Presheaf>& tests);

// ---------------------------------------------------------------------------
// Pullbacks and products

/// Pullback of f: A -> C and g: B -> C. Elements at each object are the compatible
/// pairs (a, b) in lexicographic order. Copies share storage.
class Pullback {
 public:
  Pullback() = default;
  Pullback(PshMor f, PshMor g);

  const Presheaf& obj() const { return d_->obj; }
  const PshMor& p1() const { return d_->p1; }
  const PshMor& p2() const { return d_->p2; }
  const PshMor& f() const { return d_->f; }
  const PshMor& g() const { return d_->g; }
  const Presheaf& left() const { return d_->f.src(); }
  const Presheaf& right() const { return d_->g.src(); }

  /// Index of (a, b), or -1 when f(a) != g(b).
  int index(int c, int a, int b) const { return d_->idx[c][a * d_->g.src().size(c) + b]; }
  int at(int c, int a, int b) const;  // like index, throws when incompatible
  int first(int c, int k) const { return d_->p1(c, k); }
  int second(int c, int k) const { return d_->p2(c, k); }

  /// The induced map Z -> A ×_C B.
  PshMor pair(const PshMor& x, const PshMor& y) const;
  /// The map between pullbacks induced by maps of the two legs.
  PshMor map_to(const Pullback& to, const PshMor& fa, const PshMor& fb) const;

 private:
  struct Data {
    PshMor f, g;
    Presheaf obj;
    PshMor p1, p2;
    std::vector<std::vector<int>> idx;
  };
  std::shared_ptr<const Data> d_;
};

/// A × B, i.e. the pullback over the terminal presheaf; the pair (a, b) has index
/// a * |B| + b.
Pullback product(const Presheaf& a, const Presheaf& b);
PshMor prod_map(const Pullback& from, const Pullback& to, const PshMor& fa, const PshMor& fb);

/// Certifies a commuting square (tl -> tr, tl -> bl over tr -> br <- bl) as a pullback
/// by enumerating competing cones from each test object.
std::string certify_pullback(const PshMor& top, const PshMor& left, const PshMor& right, const PshMor& bottom,
                             const std::vector<Presheaf>& tests);

/// Equalizer of two parallel maps, as a subpresheaf with its inclusion.
PshMor equalizer(const PshMor& f, const PshMor& g);

struct Coproduct {
  Presheaf obj;
  PshMor in1, in2;
};
Coproduct coproduct(const Presheaf& a, const Presheaf& b);

struct Pushout {
  Presheaf obj;
  PshMor in1, in2;  // from the two targets of the span
};
Pushout pushout(const PshMor& f, const PshMor& g);
/// The map out of a pushout determined by a compatible pair of maps.
PshMor copair(const Pushout& po, const PshMor& x, const PshMor& y);

// ---------------------------------------------------------------------------
// Slices

/// An object of the slice over anchor.dst().
struct SliceObj {
  Presheaf total;
  PshMor anchor;
  const Presheaf& base() const { return anchor.dst(); }
};

SliceObj slice_obj(const PshMor& anchor);
/// A viewed in the slice over the terminal presheaf.
SliceObj over_terminal(const Presheaf& a);
/// The terminal object id_C of the slice over C.
SliceObj slice_terminal(const Presheaf& c);
bool is_slice_map(const SliceObj& src, const SliceObj& dst, const PshMor& f);

/// X ×_C Y for two objects over the same base, and its structure map to C.
Pullback slice_product(const SliceObj& x, const SliceObj& y);
SliceObj over(const Pullback& pb);  // anchored through the first leg

struct PulledBack {
  SliceObj obj;   // phi* x, anchored by the first projection
  Pullback pb;    // D ×_C X
};
PulledBack pullback_functor(const PshMor& phi, const SliceObj& x);
/// phi* applied to a slice map x -> y.
PshMor pullback_functor_map(const PulledBack& px, const PulledBack& py, const PshMor& f);

/// p_! x: same total, anchor p ∘ x.anchor.
SliceObj postcompose(const PshMor& p, const SliceObj& x);

// ---------------------------------------------------------------------------
// Section spaces: pushforwards and local exponentials

/// Given p: A -> D, r: B -> T and s: A -> T, the presheaf over D whose elements at c
/// are pairs (δ ∈ D(c), σ) where σ: y(c) ×_D A -> B satisfies r∘σ = s∘proj. Elements
/// are ordered by δ, then σ in enumeration order.
///  - pushforward p_* X:   r = X.anchor, s = id_A
///  - local exponential [A, B]_C: p = s = A.anchor, r = B.anchor
class SectionSpace {
 public:
  SectionSpace(PshMor p, PshMor r, PshMor s, std::string where = "section space");
  virtual ~SectionSpace() = default;

  const Presheaf& obj() const { return obj_; }
  const PshMor& anchor() const { return anchor_; }
  SliceObj slice() const { return {obj_, anchor_}; }
  const PshMor& p() const { return p_; }
  const Presheaf& domain() const { return p_.src(); }
  const Presheaf& codomain() const { return r_.src(); }

  int delta(int c, int e) const { return elems_[c][e].delta; }
  const Components& sigma(int c, int e) const { return elems_[c][e].sigma; }

  /// σ_e at (h, a) for h: c2 -> c and a ∈ A(c2) over D.act(h, δ_e).
  int apply(int c, int e, int h, int a) const;
  int ev(int c, int e, int a) const;
  /// The element at c over δ whose section is (h, a) ↦ fn(dom h, h, a).
  int lambda(int c, int delta, const std::function<int(int c2, int h, int a)>& fn) const;
  /// Z -> this, sending z ∈ Z(c) to the section (h, a) ↦ fn(dom h, Z.act(h, z), a).
  /// fn is only called on pairs (z', a) over the same element of D.
  PshMor curry(const SliceObj& z, const std::function<int(int c, int z, int a)>& fn) const;
  /// The map Z ×_D A -> B corresponding to f: Z -> this.
  PshMor uncurry(const Pullback& za, const PshMor& f) const;
  /// Curry a map g: Z ×_D A -> B (za must be Pullback(z.anchor, p)).
  PshMor curry(const Pullback& za, const SliceObj& z, const PshMor& g) const;

 private:
  struct Elem {
    int delta;
    Components sigma;
  };
  struct Fibre {
    // y(c) ×_D A over δ: position of (hom_position(h), a) at each c2, or -1
    std::vector<std::vector<int>> pos;
    std::vector<std::vector<std::pair<int, int>>> elems;  // (h, a) per c2
  };
  const Fibre& fibre(int c, int delta) const { return fibres_[c][delta]; }

  PshMor p_, r_, s_;
  std::string where_;
  std::vector<std::vector<Fibre>> fibres_;
  std::vector<std::vector<Elem>> elems_;
  std::vector<std::vector<std::map<Components, int>>> index_;  // [c][δ]
  Presheaf obj_;
  PshMor anchor_;
};

/// [A, B]_C for A, B over the same C.
class LocalExp : public SectionSpace {
 public:
  LocalExp(SliceObj a, SliceObj b);
  const SliceObj& exponent() const { return a_; }
  const SliceObj& target() const { return b_; }

 private:
  SliceObj a_, b_;
};

/// p_* X for X over the domain of p.
class Pushforward : public SectionSpace {
 public:
  Pushforward(PshMor p, SliceObj x);
  const SliceObj& source() const { return x_; }

 private:
  SliceObj x_;
};

using ExpRef = std::shared_ptr<const LocalExp>;

/// Memoized [A, B]_C; identical inputs return the same object.
ExpRef local_exp(const SliceObj& a, const SliceObj& b);
/// [A, B] over the terminal presheaf.
ExpRef exponential(const Presheaf& a, const Presheaf& b);
std::shared_ptr<const Pushforward> pushforward(const PshMor& p, const SliceObj& x);
void clear_exp_cache();

/// [pre, post]: [A, B]_C -> [A', B']_C for pre: A' -> A and post: B -> B' over C.
PshMor exp_map(const LocalExp& from, const LocalExp& to, const PshMor& pre, const PshMor& post);
/// The action of a section space construction on f: B -> B' (postcomposition), e.g.
/// p_*(f) or [A, f]_C.
PshMor section_map(const SectionSpace& from, const SectionSpace& to, const PshMor& f);
/// The evaluation map [A,B]_C ×_C A -> B and the pullback it is defined on.
PshMor evaluation(const LocalExp& e, const Pullback& ea);

// ---------------------------------------------------------------------------
// Isomorphism search

struct IsoResult {
  enum class Status { Found, SizesDiffer, NoneExists, OverBudget };
  Status status = Status::NoneExists;
  std::optional<PshMor> iso;
  std::string describe() const;
};

/// Searches for a natural isomorphism. Differing cardinalities short-circuit; an
/// exhausted search is reported distinctly from a search that ran out of budget.
IsoResult find_iso(const Presheaf& a, const Presheaf& b);
/// As find_iso, restricting each x ∈ a(c) to the candidates returned by cand.
IsoResult find_iso(const Presheaf& a, const Presheaf& b, std::function<std::vector<int>(int c, int x)> cand);

}  // namespace liftlab
