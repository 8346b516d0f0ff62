#pragma once

// Structured stand-ins for the pushout-product ∂V × L ∪ V × ∂L -> V × L. A candidate
// boundary object K is believed by E to be that union when maps out of K into E
// correspond to compatible pairs of maps out of ∂V × L and V × ∂L, and the
// correspondence is stored as an explicit isomorphism with its inverse.

#include <optional>
#include <utility>

#include "liftlab/topos.hpp"

namespace liftlab {

/// Two maps ∂V -> V and ∂L -> L over a common base, and the objects they generate.
struct BoundaryPair {
  SliceObj dV, V, dL, L;
  PshMor dv, dl;
  const Presheaf& base() const { return V.base(); }
};

/// Throws ShapeError unless the four objects share a base and dv, dl are maps over it.
void check_boundary_pair(const BoundaryPair& bp);

/// The square ∂V × ∂L -> ∂V × L, V × ∂L -> V × L of fibred products.
struct Corners {
  Pullback dVdL, dVL, VdL, VL;
  PshMor left, top;   // ∂V × ∂L -> ∂V × L and -> V × ∂L
  PshMor dvl, vdl;    // ∂V × L -> V × L and V × ∂L -> V × L
};
Corners corners(const BoundaryPair& bp);

/// [∂V × L, E] ×_{[∂V × ∂L, E]} [V × ∂L, E], the object of compatible pairs.
struct ConeSpace {
  Corners k;
  SliceObj E;
  ExpRef e1, e2, e0;  // out of ∂V × L, V × ∂L and ∂V × ∂L
  Pullback pb;
  SliceObj slice() const { return {pb.obj(), compose(e1->anchor(), pb.p1())}; }
};
ConeSpace cone_space(const BoundaryPair& bp, const SliceObj& E);

/// Postcomposition with p: E -> B on both components.
PshMor cone_map(const ConeSpace& from, const ConeSpace& to, const PshMor& p);

/// [V × L, B] -> cone, restricting to the two pieces.
PshMor cone_restriction(const ConeSpace& cs);

struct BoundaryApprox {
  BoundaryPair pair;
  SliceObj candidate;  // ∂(V × L)
  SliceObj rel_to;     // E
  PshMor iso;          // cone -> [candidate, E]
  PshMor inverse;
};

/// Shapes are checked (ShapeError); the result says whether iso and inverse are
/// mutually inverse maps over the base.
bool check_boundary_approx(const BoundaryApprox& b);

struct ApproxStruct {
  BoundaryApprox sE, sB;
  PshMor incl;  // candidate -> V × L
  PshMor p;     // E -> B
  const BoundaryPair& pair() const { return sE.pair; }
  const SliceObj& candidate() const { return sE.candidate; }
};

/// Shapes are checked (ShapeError). True iff both boundary structures are valid, p
/// commutes with them and incl realises the structure relative to B.
bool check_pp_approx(const ApproxStruct& a);
/// As check_pp_approx, naming the first failing condition (empty when valid).
std::string explain_pp_approx(const ApproxStruct& a);

/// The genuine pushout-product with the structures given by restriction along its
/// two coprojections.
ApproxStruct canonical_approx(const BoundaryPair& bp, const SliceObj& E, const SliceObj& B, const PshMor& p);

/// Searches for structures relative to p on the candidate with the given inclusion.
/// Returns nothing when none exists; BudgetExceeded when the search is cut short.
std::optional<ApproxStruct> search_approx(const BoundaryPair& bp, const SliceObj& candidate, const PshMor& incl,
                                          const SliceObj& E, const SliceObj& B, const PshMor& p);

/// Rebasing along phi: D -> C. The pulled-back inclusion lands in phi*V ×_D phi*L.
ApproxStruct approx_pullback(const ApproxStruct& a, const PshMor& phi);

/// Input: a structure over C for (∂V -> V) ⋉ (p*∂J -> p*J) relative to p*E -> p*B,
/// where the pair's second map must equal p*(dj) and its targets must be p*E, p*B
/// on the nose. Output: the structure over D for (p_!∂V -> p_!V) ⋉ (∂J -> J) on
/// p_!(candidate) relative to E -> B.
ApproxStruct approx_postcompose(const ApproxStruct& a, const PshMor& p, const SliceObj& dJ, const SliceObj& J,
                                const PshMor& dj, const SliceObj& E, const SliceObj& B, const PshMor& pd);

/// Given approximations for (∂U -> U) ⋉ (∂V -> V) and (∂V -> V) ⋉ (∂W -> W) relative
/// to the same E -> B, decides whether the candidate with incl: K -> U × (V × W)
/// approximates (∂U -> U) ⋉ (∂(V×W) -> V×W) and whether it approximates
/// (∂(U×V) -> U×V) ⋉ (∂W -> W). The two answers always agree; a disagreement throws
/// std::logic_error.
std::pair<bool, bool> assoc_transfer(const ApproxStruct& aUV, const ApproxStruct& aVW, const SliceObj& candidate,
                                     const PshMor& incl);

}  // namespace liftlab
