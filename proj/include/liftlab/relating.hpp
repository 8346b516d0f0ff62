#pragma once

// Relating two lifting structures up to a fibrewise relation R -> E ×_B E. A witness
// is a single map H from the first structure's problem object into [V,R], so it is
// uniform in the parameter for the same reason lifting structures are.

#include <cstdint>
#include <optional>
#include <string>

#include "liftlab/leibniz.hpp"
#include "liftlab/lifting.hpp"

namespace liftlab {

/// rel: R -> E ×_B E for p: E -> B over a base; R is anchored through rel.
struct FibRel {
  SliceObj E, B;
  PshMor p;
  Pullback EE;  // E ×_B E
  SliceObj R;
  PshMor rel;
};

/// Checks shapes; throws ShapeError.
FibRel make_fib_rel(const SliceObj& E, const SliceObj& B, const PshMor& p, const Presheaf& R, const PshMor& rel);

/// R = E with the diagonal.
FibRel diagonal_relation(const SliceObj& E, const SliceObj& B, const PshMor& p);

/// R = [I × B, E]_B, the fibred path object, with evaluation at the two points. The
/// interval lives over the terminal presheaf and must be an interval relative to E and
/// B (PropertyError otherwise).
FibRel path_relation(const IntervalStruct& i, const SliceObj& E, const SliceObj& B, const PshMor& p);

/// e: E1 -> E2 over b: B1 -> B2, and b': B1' -> B2' over b.
struct SpanMap {
  PshMor e, b, bp;
};
SpanMap identity_span(const LiftBoundary& b);
/// Throws ShapeError when the two boundaries have different left sides or the maps do
/// not fit, PropertyError when a square fails to commute.
void check_span_map(const LiftBoundary& b1, const LiftBoundary& b2, const SpanMap& s);

struct Witness {
  LiftStruct F1, F2;
  SpanMap span;
  FibRel rel;
  PshMor H;  // first restricted problem object -> [V, R]
};

/// The induced map of restricted problem objects P1' -> P2'.
PshMor induced_problem_map(const LiftContext& c1, const LiftContext& c2, const SpanMap& s);

/// True iff H followed by the two legs of R gives [V,e]∘F1 and F2∘induced.
bool check_witness(const Witness& w);
/// The first failing equation, empty when the witness is valid.
std::string explain_witness(const Witness& w);

struct WitnessSearch {
  std::optional<Witness> witness;
  std::uint64_t examined = 0;  // candidate assignments tried
  std::uint64_t exhausted = 0; // when none: number of maps P1' -> [V,R], all rejected
};

/// The first witness in canonical order. Throws BudgetExceeded when cut short.
WitnessSearch search_witness(const LiftStruct& F1, const LiftStruct& F2, const SpanMap& s, const FibRel& r);

/// ℓ: D × I -> [V,E2] fails to exist within the enumeration.
class NoConstruction : public Error {
 public:
  using Error::Error;
};

struct HomotopyWitness {
  Witness witness;
  Pullback DI;  // D × I, D the first restricted problem object
  PshMor ell;   // D × I -> [V, E2]
};

/// With D = P1', C = [U,E2] ×_{[U,B2]} [V,B2] and f0 = [V,e]∘F1, f1 = F2∘induced, a
/// homotopy ℓ: D × I -> [V,E2] over C with ℓ(-,0) = f0 and ℓ(-,1) = f1 is transposed
/// into H: D -> [V, P_{B2}(E2)]. A supplied ℓ violating an equation raises
/// PropertyError naming it; when ℓ is omitted it is searched for, and NoConstruction is
/// raised if none exists.
HomotopyWitness construct_homotopy_witness(const LiftStruct& F1, const LiftStruct& F2, const SpanMap& s,
                                           const IntervalStruct& i, const std::optional<PshMor>& ell = std::nullopt);

}  // namespace liftlab
