#pragma once

// Small boundaries shared by the lifting, approximation and acceptance tests.

#include <string>
#include <vector>

#include "liftlab/lifting.hpp"

namespace fx {

using namespace liftlab;

inline CatRef T() {
  static CatRef t = terminal_category();
  return t;
}

inline Presheaf set(int n) { return constant_presheaf(T(), n); }

inline PshMor fn(int from, int to, const Table& image) { return PshMor(set(from), set(to), {image}); }

inline PshMor fn(const Presheaf& from, const Presheaf& to, const Table& image) { return PshMor(from, to, {image}); }

inline PshMor bang(int n) { return to_terminal(set(n)); }

inline PshMor empty_into(int n) { return from_empty(set(0), set(n)); }

/// ∅ -> 1 against 2 -> 1
inline LiftBoundary fixture_a() { return make_boundary(empty_into(1), bang(2)); }

/// {0} ⊂ 2 against 2 -> 1
inline LiftBoundary point_in_two() { return make_boundary(fn(1, 2, {0}), bang(2)); }

/// 2 -> 1 against 2 -> 1 (no structure: the two points of U may go anywhere)
inline LiftBoundary fold() { return make_boundary(bang(2), bang(2)); }

/// The non-identity arrow of the arrow category as a map of representables y(0) -> y(1),
/// against a two-element presheaf folding onto the terminal one.
inline LiftBoundary arrow_boundary() {
  auto a = arrow_category();
  int f = *a->find_arrow("f");
  Presheaf y0 = yoneda(a, 0), y1 = yoneda(a, 1);
  PshMor i = enumerate_pshmors(y0, y1).at(0);
  Presheaf e = make_presheaf(a, {2, 1}, {{f, {0}}});
  return make_boundary(i, to_terminal(e));
}

struct Named {
  std::string name;
  LiftBoundary boundary;
};

inline std::vector<Named> global_fixtures() {
  return {{"empty into point against 2->1", fixture_a()},
          {"point into 2 against 2->1", point_in_two()},
          {"fold against 2->1", fold()},
          {"empty into point against 3->2", make_boundary(empty_into(1), fn(3, 2, {0, 1, 1}))},
          {"identity right map", make_boundary(empty_into(1), identity(set(2)))},
          {"arrow category representables", arrow_boundary()}};
}

inline std::vector<SliceObj> universe(const LiftBoundary& b, int k) { return bounded_universe(b.base(), k); }

}  // namespace fx
