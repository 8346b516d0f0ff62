#pragma once

// Uniform lifting structures. A structure for i: U -> V against p: E -> B, restricted
// along j: V -> V' and q: B' -> B, is a single map
//
//     s : P' = [U,E] ×_{[U,B]} [V',B']  ->  [V,E]
//
// over P = [U,E] ×_{[U,B]} [V,B]. Solutions to parameterized problems are derived
// from s through the classifying map of the problem, so uniformity in the
// parameter holds by construction.
//
// Everything is computed in a slice over a base presheaf C; the unsliced case is the
// slice over the terminal presheaf.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "liftlab/topos.hpp"

namespace liftlab {

enum class Restriction { None, Left, Right, Both };
const char* to_string(Restriction r);

/// Left map i: U -> V, right map p: E -> B, left restriction j: V -> V', right
/// restriction q: B' -> B. Unused restrictions are identities.
struct LiftBoundary {
  SliceObj U, V, Vp, E, B, Bp;
  PshMor i, p, j, q;

  const Presheaf& base() const { return U.base(); }
  const CatRef& cat() const { return U.total.base(); }
  Restriction restriction() const;
  bool global() const;  // base is the terminal presheaf
};

bool operator==(const LiftBoundary& a, const LiftBoundary& b);

/// Empty string when the boundary is well formed, otherwise the first problem.
std::string check_boundary(const LiftBoundary& b);

LiftBoundary make_boundary(const PshMor& i, const PshMor& p);
LiftBoundary make_boundary(const SliceObj& U, const SliceObj& V, const SliceObj& E, const SliceObj& B,
                           const PshMor& i, const PshMor& p);
/// Further restriction along j: V' -> V'' (composed with the existing one).
LiftBoundary restrict_left(const LiftBoundary& b, const SliceObj& Vpp, const PshMor& j);
LiftBoundary restrict_left(const LiftBoundary& b, const PshMor& j);
/// Further restriction along q: B'' -> B'.
LiftBoundary restrict_right(const LiftBoundary& b, const SliceObj& Bpp, const PshMor& q);
LiftBoundary restrict_right(const LiftBoundary& b, const PshMor& q);

/// The hom-objects and problem objects of a boundary.
class LiftContext {
 public:
  explicit LiftContext(LiftBoundary b);

  const LiftBoundary& boundary() const { return b_; }
  const LocalExp& UE() const { return *ue_; }
  const LocalExp& UB() const { return *ub_; }
  const LocalExp& VE() const { return *ve_; }
  const LocalExp& VB() const { return *vb_; }
  const LocalExp& VpBp() const { return *vpbp_; }

  /// [U,E] ×_{[U,B]} [V,B]
  const Pullback& unrestricted() const { return P_; }
  /// [U,E] ×_{[U,B]} [V',B']
  const Pullback& restricted() const { return Pp_; }
  /// The restricted problem object over the base.
  SliceObj restricted_slice() const;
  /// <[i,E], [V,p]> : [V,E] -> P
  const PshMor& pi() const { return pi_; }
  /// P' -> P induced by [j,q]
  const PshMor& rho() const { return rho_; }

  /// Elements of [V,E](c) over the element k of P(c).
  const std::vector<int>& pi_fibre(int c, int k) const { return fibres_[c][k]; }

 private:
  LiftBoundary b_;
  ExpRef ue_, ub_, ve_, vb_, vpbp_;
  Pullback P_, Pp_;
  PshMor pi_, rho_;
  std::vector<std::vector<std::vector<int>>> fibres_;
};

using ContextRef = std::shared_ptr<const LiftContext>;
ContextRef make_context(const LiftBoundary& b);

/// u: X ×_C U -> E and v: X ×_C V' -> B'.
struct LiftProblem {
  SliceObj X;
  PshMor u, v;
};

bool operator==(const LiftProblem& a, const LiftProblem& b);

/// Empty string when the problem fits the boundary and its square commutes.
std::string check_problem(const LiftContext& ctx, const LiftProblem& pr);
/// Empty string when sol: X ×_C V -> E fills both triangles.
std::string check_solution(const LiftContext& ctx, const LiftProblem& pr, const PshMor& sol);

/// The classifying map X -> P'.
PshMor classify(const LiftContext& ctx, const LiftProblem& pr);
LiftProblem declassify(const LiftContext& ctx, const SliceObj& X, const PshMor& chi);
/// The problem with parameter P' classified by the identity.
LiftProblem generic_problem(const LiftContext& ctx);
/// The problem reindexed along a slice map t: Y -> X.
LiftProblem reindex(const LiftContext& ctx, const LiftProblem& pr, const SliceObj& Y, const PshMor& t);
/// Every problem with parameter X, in the enumeration order of maps X -> P'.
std::vector<LiftProblem> enumerate_problems(const LiftContext& ctx, const SliceObj& X);

class LiftStruct {
 public:
  /// Checks that s is a section of pi over rho.
  LiftStruct(ContextRef ctx, PshMor s);

  const LiftContext& context() const { return *ctx_; }
  const ContextRef& context_ref() const { return ctx_; }
  const LiftBoundary& boundary() const { return ctx_->boundary(); }
  const PshMor& internal() const { return s_; }

 private:
  ContextRef ctx_;
  PshMor s_;
};

bool operator==(const LiftStruct& a, const LiftStruct& b);

/// The solution X ×_C V -> E of a problem.
PshMor solve(const LiftStruct& F, const LiftProblem& pr);

/// Every structure on the boundary, in enumeration order of maps P' -> [V,E].
std::vector<LiftStruct> search_lift_struct(const ContextRef& ctx);
std::vector<LiftStruct> search_lift_struct(const LiftBoundary& b);

// ---------------------------------------------------------------------------
// Families of solutions

struct FamilyEntry {
  LiftProblem problem;
  PshMor solution;
};

struct Family {
  std::vector<SliceObj> params;
  std::vector<FamilyEntry> entries;
};

/// The family of solve(F, -) over every problem on each parameter.
Family family_of(const LiftStruct& F, const std::vector<SliceObj>& params);
/// True when every entry solves its problem and solutions commute with reindexing
/// along every slice map between listed parameters. Throws LookupError when a
/// problem over a listed parameter has no entry.
bool verify_family(const LiftContext& ctx, const Family& fam, std::string* why = nullptr);
/// The structure whose solutions are given by fn; fn is only evaluated at the
/// generic problem.
LiftStruct internalize(const ContextRef& ctx, const std::function<PshMor(const LiftProblem&)>& fn);

/// All presheaves with at most k elements at each object; one per isomorphism class
/// when up_to_iso is set.
std::vector<Presheaf> bounded_presheaves(const CatRef& cat, int k, bool up_to_iso = true);
/// All objects over base whose total is in bounded_presheaves(cat, k).
std::vector<SliceObj> bounded_universe(const Presheaf& base, int k);

// ---------------------------------------------------------------------------
// Constructions

/// Solutions F(u, q∘v).
LiftStruct right_restrict(const LiftStruct& F, const SliceObj& Bpp, const PshMor& q);
LiftStruct right_restrict(const LiftStruct& F, const PshMor& q);

/// For F restricted along q: B' -> B and a pullback square E' -> E over B' -> B,
/// the structure against p': E' -> B' with solutions <v∘(X×j), F(q'∘u, v)>.
LiftStruct right_pullback(const LiftStruct& F, const SliceObj& Ep, const PshMor& q_prime, const PshMor& p_prime);
/// Inverse of right_pullback; target is the boundary of the structure to recover.
LiftStruct right_pullback_inv(const LiftStruct& G, const LiftBoundary& target, const PshMor& q_prime);

/// F' against p': E' -> E (unrestricted), F against p: E -> B; solutions F'(u, F(p'∘u, v)).
LiftStruct right_compose(const LiftStruct& Fp, const LiftStruct& F);

/// Solutions F(u, v∘(X×j)).
LiftStruct left_restrict(const LiftStruct& F, const SliceObj& Vpp, const PshMor& j);
LiftStruct left_restrict(const LiftStruct& F, const PshMor& j);

/// F' for i': U' -> U (unrestricted), F for i: U -> V; solutions F(F'(u, v∘(X×ji)), v).
LiftStruct left_compose(const LiftStruct& Fp, const LiftStruct& F);

/// U0 -> V0 -> V0' a retract of U -> V -> V':
/// n∘m = id, r∘s = id, r'∘s' = id, i∘m = s∘i0, i0∘n = r∘i, j∘s = s'∘j0, j0∘r = r'∘j.
struct Retract {
  SliceObj U0, V0, V0p;
  PshMor i0, j0;
  PshMor m, n, s, r, sp, rp;
};
std::string check_retract(const LiftBoundary& b, const Retract& rt);
/// Solutions F(u∘(X×n), v∘(X×r'))∘(X×s).
LiftStruct left_retract(const LiftStruct& F, const Retract& rt);

/// A map t: W -> V, a pullback U' of i along t with legs i': U' -> W and t': U' -> U,
/// and a right map p: E -> B, all over the base.
struct TcData {
  SliceObj W, Up, E, B;
  PshMor t, ip, tp, p;
};
std::string check_tc_data(const SliceObj& U, const SliceObj& V, const PshMor& i, const TcData& d);
/// The boundary of i against t_*(W ×_C E) -> t_*(W ×_C B).
LiftBoundary tc_source_boundary(const SliceObj& U, const SliceObj& V, const PshMor& i, const TcData& d);
/// A structure of i': U' -> W against p from one of i against the pushed forward map;
/// solutions transpose the problem along t* ⊣ t_*, solve with F, and transpose back.
LiftStruct tc_pullback_stable(const LiftStruct& F, const TcData& d);
/// As tc_pullback_stable for a structure in a slice.
LiftStruct tc_pullback_stable_slice(const LiftStruct& F, const TcData& d);
/// The transposed problem of X ×_C U -> X ×_C V against the pushed forward map.
LiftProblem tc_transpose_problem(const LiftContext& src, const TcData& d, const LiftProblem& pr);
/// The step-4 transpose of a solution X ×_C V -> t_*(W ×_C E).
PshMor tc_transpose_solution(const LiftContext& src, const TcData& d, const SliceObj& X, const PshMor& sol);

/// phi* of every object and map of the boundary.
LiftBoundary pullback_boundary(const LiftBoundary& b, const PshMor& phi);
/// The structure over D obtained by pulling F back along phi: D -> C.
LiftStruct rebase_pullback(const LiftStruct& F, const PshMor& phi);

/// For p: C -> D and a right map pd: E -> B over D, with F's right map equal to
/// p*(pd); the boundary p_!U -> p_!V against pd.
LiftBoundary postcompose_boundary(const LiftBoundary& b, const PshMor& p, const SliceObj& E, const SliceObj& B,
                                  const PshMor& pd);
LiftStruct rebase_postcompose(const LiftStruct& F, const PshMor& p, const SliceObj& E, const SliceObj& B,
                              const PshMor& pd);

}  // namespace liftlab
