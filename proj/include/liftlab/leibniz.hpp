#pragma once

// Leibniz transposition of lifting structures, intervals and path objects.
//
// A structure for ∂(V×L) -> V×L (restricted along V×L -> V×L') against E -> E̲
// corresponds to a structure for ∂V -> V against the pullback-power
//
//     [L,E]  ->  D = [∂L,E] ×_{[∂L,E̲]} [L,E̲]
//
// restricted along D' = [∂L,E] ×_{[∂L,E̲]} [L',E̲] -> D. Everything lives over a
// common base C; exponentials are local.

#include <optional>
#include <string>
#include <vector>

#include "liftlab/approx.hpp"
#include "liftlab/lifting.hpp"

namespace liftlab {

/// The anchored object of a pullback of two slice maps, anchored through the first leg.
SliceObj over_left(const Pullback& pb, const SliceObj& left);

/// [L,E] -> D <- D' for ∂L -> L -> L' and E -> E̲, all over one base.
struct PullbackPower {
  SliceObj dL, L, Lp, E, Eb;
  PshMor dl, l, p;
  ExpRef LE, dLE, LEb, dLEb, LpEb;
  Pullback D, Dp;  // [∂L,E] ×_{[∂L,E̲]} [L,E̲] and the same with L'
  PshMor hat;      // [L,E] -> D
  PshMor q;        // D' -> D
  SliceObj D_slice() const { return over_left(D, dLE->slice()); }
  SliceObj Dp_slice() const { return over_left(Dp, dLE->slice()); }
};
PullbackPower pullback_power(const SliceObj& dL, const SliceObj& L, const SliceObj& Lp, const PshMor& dl,
                             const PshMor& l, const SliceObj& E, const SliceObj& Eb, const PshMor& p);

/// The boundary ∂V -> V against [L,E] -> D restricted along D' -> D.
LiftBoundary transposed_boundary(const BoundaryPair& bp, const PullbackPower& pp);
/// The boundary ∂(V×L) -> V×L restricted along V×L -> V×L' against E -> E̲.
LiftBoundary product_boundary(const ApproxStruct& a, const SliceObj& Lp, const PshMor& l);

/// F♯_X(f,(g,h)) = F_X(<f†,g†>, h†)†, where <f†,g†> is amalgamated through the
/// structure of a relative to E. Throws PropertyError when a is not a valid
/// approximation and ShapeError when F's boundary is not product_boundary(a, Lp, l).
LiftStruct leibniz_transpose(const LiftStruct& F, const ApproxStruct& a, const SliceObj& Lp, const PshMor& l);
/// Inverse of leibniz_transpose; G must live on transposed_boundary.
LiftStruct leibniz_untranspose(const LiftStruct& G, const ApproxStruct& a, const SliceObj& Lp, const PshMor& l);

/// [L,E] ×_{[L,E̲]} [L',E̲] with its maps to [L,E] and D', over [L,E] -> D <- D'.
struct PullbackHomSquare {
  PullbackPower pp;
  Pullback apex;
  PshMor top, left;  // apex -> [L,E], apex -> D'
  SliceObj apex_slice() const { return over_left(apex, pp.LE->slice()); }
  /// Empty when the square is a pullback against every test object.
  std::string certify(const std::vector<Presheaf>& tests) const;
};
PullbackHomSquare pullback_hom_square(const PullbackPower& pp);

/// leibniz_transpose followed by right_pullback along the pullback-hom square: a
/// structure for ∂V -> V against apex -> D'.
LiftStruct transpose_unrestricted(const LiftStruct& F, const ApproxStruct& a, const SliceObj& Lp, const PshMor& l);
LiftStruct untranspose_unrestricted(const LiftStruct& H, const ApproxStruct& a, const SliceObj& Lp, const PshMor& l);

/// phi*[A,E] -> [phi*A, phi*E], the comparison showing that pullback preserves local
/// exponentials. Always an isomorphism.
PshMor pullback_exp(const PshMor& phi, const SliceObj& A, const SliceObj& E);

/// Maps ∂L -> L -> L' and E -> E̲ over the terminal presheaf, used as constant
/// families over a base C.
struct GlobalLeibniz {
  PshMor dl, l, p;
};

/// For F over C with a's second map, the targets and V×L' equal to the pullbacks of
/// the global data along C -> 1: the transpose against C × apex -> C × D'.
LiftStruct transpose_local(const LiftStruct& F, const ApproxStruct& a, const GlobalLeibniz& g);
LiftStruct untranspose_local(const LiftStruct& H, const ApproxStruct& a, const GlobalLeibniz& g);

// ---------------------------------------------------------------------------
// Intervals

/// Two points of I over C, ∂I -> I, and factorisations of both points through ∂I.
struct IntervalStruct {
  SliceObj I, dI;
  PshMor pt0, pt1;  // C -> I
  PshMor di;        // ∂I -> I
  PshMor f0, f1;    // C -> ∂I
  Pullback meet;    // {0} ∩ {1}
  const Presheaf& base() const { return I.base(); }
  SliceObj meet_slice() const { return {meet.obj(), meet.p1()}; }
};

/// Validates and assembles an interval. Throws ShapeError on ill-typed maps and
/// PropertyError when a factorisation triangle or the meet square fails.
IntervalStruct make_interval(const SliceObj& I, const SliceObj& dI, const PshMor& pt0, const PshMor& pt1,
                             const PshMor& di, const PshMor& f0, const PshMor& f1);

/// I = {0,1} in finite sets with ∂I = I. When distinct is false both points are 0 and
/// ∂I is the single point 0.
IntervalStruct finset_interval(bool distinct = true);

/// The interval pulled back along phi: D -> C.
IntervalStruct interval_pullback(const IntervalStruct& i, const PshMor& phi);

struct RelIntervalCert {
  struct Entry {
    SliceObj B;
    PshMor point, point_inv;  // C -> [{0}∩{1}, B] and back
    Pullback BB;              // B ×_C B
    PshMor split, split_inv;  // [∂I, B] -> B ×_C B by evaluation at the two points
  };
  IntervalStruct base;
  std::vector<Entry> certs;
  /// The entry for B, or nullptr.
  const Entry* find(const SliceObj& B) const;
};

struct IntervalCheck {
  std::optional<RelIntervalCert> cert;
  std::string failure;  // first failing condition when cert is empty
};

IntervalCheck check_interval(const IntervalStruct& i, const std::vector<SliceObj>& rel_to);
/// As check_interval, throwing PropertyError with the failing condition.
RelIntervalCert require_interval(const IntervalStruct& i, const std::vector<SliceObj>& rel_to);

// ---------------------------------------------------------------------------
// Path objects

/// P(E) = [I,E], ∂P(E) = [∂I,E] and the pullback-power P(E) -> ∂P(E) ×_{∂P(B)} P(B).
struct PathObj {
  IntervalStruct interval;
  SliceObj E, B;
  PshMor p;
  ExpRef PE, dPE, PB, dPB;
  PshMor evE, evB;  // endpoint evaluations
  Pullback corner;  // ∂P(E) ×_{∂P(B)} P(B)
  PshMor hat;
  SliceObj corner_slice() const { return over_left(corner, dPE->slice()); }
};
PathObj path_objects(const IntervalStruct& i, const SliceObj& E, const SliceObj& B, const PshMor& p);

/// For an interval over the terminal presheaf and E -> B over Bb, the comparison of
/// the fibred pullback-power over Bb with the global one [I,E] -> [∂I,E] ×_{[∂I,B]} [I,B].
struct PullbackPowerCube {
  PathObj local, global;
  ExpRef IBb;
  PshMor constant;                   // Bb -> [I,Bb]
  PshMor forget_path, forget_corner;  // local -> global on both ends of the hats
  PshMor path_to_IBb, corner_to_IBb;  // global objects -> [I,Bb]
  /// Each face is certified against the test objects; empty strings mean pullback.
  std::string top, bottom, front;
  bool certified() const { return top.empty() && bottom.empty() && front.empty(); }
};
PullbackPowerCube pullback_power_cube(const IntervalStruct& i, const SliceObj& E, const SliceObj& B,
                                      const PshMor& p, const std::vector<Presheaf>& tests);

/// E ×_B E -> [∂I,E] ×_{[∂I,B]} [I,B]: endpoints through the certificate, and the
/// constant path at the common image.
PshMor constant_corner(const RelIntervalCert& cert, const PshMor& p);

/// For F over C on ∂(V×I) -> V×I against C×E -> C×B: the transpose against
/// C × P_B(E) -> C × (E ×_B E), where P_B(E) is the fibred path object over B.
/// Throws LookupError when cert does not cover E and B.
LiftStruct path_transpose(const LiftStruct& F, const ApproxStruct& a, const RelIntervalCert& cert, const PshMor& p);
/// Inverse of path_transpose. Defined when constant_corner is an isomorphism, which
/// holds when every path in B is constant; otherwise PropertyError.
LiftStruct path_untranspose(const LiftStruct& H, const ApproxStruct& a, const RelIntervalCert& cert,
                            const PshMor& p);

}  // namespace liftlab
