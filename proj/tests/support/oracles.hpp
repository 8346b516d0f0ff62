#pragma once

// Brute-force reference computations. Nothing here uses the library's search code:
// hom-sets are produced by listing every per-object function family and filtering,
// presheaves by listing every action table and filtering by the functor laws.

#include <functional>
#include <random>
#include <vector>

#include "liftlab/fincat.hpp"

namespace oracle {

using liftlab::Components;
using liftlab::Presheaf;
using liftlab::Table;

// Calls visit on every function family a(c) -> b(c), objects in index order,
// lexicographically.
inline void each_family(const std::vector<int>& from, const std::vector<int>& to,
                        const std::function<void(const Components&)>& visit) {
  const int n = static_cast<int>(from.size());
  for (int c = 0; c < n; ++c)
    if (from[c] > 0 && to[c] == 0) return;
  Components cur(n);
  for (int c = 0; c < n; ++c) cur[c].assign(from[c], 0);
  while (true) {
    visit(cur);
    int c = n - 1;
    int k = -1;
    for (; c >= 0; --c) {
      for (k = from[c] - 1; k >= 0; --k) {
        if (cur[c][k] + 1 < to[c]) break;
        cur[c][k] = 0;
      }
      if (k >= 0) break;
    }
    if (c < 0) return;
    ++cur[c][k];
  }
}

inline std::vector<Components> homs(const Presheaf& a, const Presheaf& b) {
  std::vector<Components> out;
  each_family(a.sizes(), b.sizes(), [&](const Components& f) {
    if (liftlab::check_naturality(a, b, f).empty()) out.push_back(f);
  });
  return out;
}

inline std::size_t count_homs(const Presheaf& a, const Presheaf& b) { return homs(a, b).size(); }

// Every presheaf with at most k elements at each object.
inline std::vector<Presheaf> presheaves(const liftlab::CatRef& cat, int k) {
  const int n = cat->num_objects();
  const int m = cat->num_arrows();
  std::vector<Presheaf> out;
  std::vector<int> sizes(n, 0);
  std::function<void(int)> over_sizes = [&](int c) {
    if (c == n) {
      // tables for every arrow: act(m) : size(cod) -> size(dom)
      std::vector<int> from(m), to(m);
      for (int a = 0; a < m; ++a) {
        from[a] = sizes[cat->cod(a)];
        to[a] = sizes[cat->dom(a)];
      }
      each_family(from, to, [&](const Components& acts) {
        if (liftlab::check_presheaf_laws(cat, sizes, acts).empty()) out.emplace_back(cat, sizes, acts);
      });
      return;
    }
    for (int s = 0; s <= k; ++s) {
      sizes[c] = s;
      over_sizes(c + 1);
    }
  };
  over_sizes(0);
  return out;
}

inline Presheaf pick(const std::vector<Presheaf>& pool, std::mt19937& rng) {
  std::uniform_int_distribution<std::size_t> d(0, pool.size() - 1);
  return pool[d(rng)];
}

inline std::vector<Presheaf> representables(const liftlab::CatRef& c) {
  std::vector<Presheaf> out;
  for (int x = 0; x < c->num_objects(); ++x) out.push_back(liftlab::yoneda(c, x));
  return out;
}

}  // namespace oracle
