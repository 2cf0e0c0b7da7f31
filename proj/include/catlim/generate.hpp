#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "catlim/finset.hpp"

namespace catlim {

/// Seeded source of randomness. Bounded draws use the raw 64-bit engine
/// output so sequences are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform in [0, n); n must be positive.
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  /// Uniform in [lo, hi].
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
  bool chance(unsigned percent) { return below(100) < percent; }
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

/// Poset on the given objects; leq(i, j) must be a partial order on
/// indices. Non-identity morphisms are named "x<=y".
FinCategory make_poset(const std::string& name, const std::vector<std::string>& objects,
                       const std::function<bool(std::size_t, std::size_t)>& leq);

/// Morphism id of x <= y in a poset built by make_poset.
std::string poset_arrow(const std::string& x, const std::string& y);

struct CategoryBounds {
  std::size_t max_objects = 5;
  std::size_t max_morphisms = 12;
};

/// One of: free category on a random DAG, poset from a random DAG, cyclic
/// monoid, idempotent or left-zero monoid, two-object groupoid, or an
/// idempotent followed by an arrow. Always passes validate_category.
FinCategory random_category(Rng& rng, const CategoryBounds& bounds = {});

FinCategory random_poset(Rng& rng, std::size_t objects, unsigned edge_percent);

/// Lattice of a random union-closed family of subsets of {a, b, c, d}
/// containing the empty set, ordered by inclusion. Objects are named
/// "{}", "{a}", "{a,b}", ...
FinCategory random_lattice(Rng& rng, std::size_t max_objects);

/// Visits every functor base -> FinSet with the given variance and
/// |values(X)| <= max_size for all X, in deterministic order. Elements of
/// a value of size n are "0".."n-1". Returns the number visited; stops at
/// `limit` (returning limit + 1 if more exist) or when visit returns false.
std::size_t for_each_set_functor(const CategoryRef& base, Variance variance, std::size_t max_size,
                                 const std::function<bool(const SetFunctor&)>& visit,
                                 std::size_t limit = static_cast<std::size_t>(-1));

/// A random functor base -> FinSet obeying the functor laws.
SetFunctor random_set_functor(Rng& rng, const CategoryRef& base, Variance variance, std::size_t max_size);

FinSet random_set(Rng& rng, const std::string& id, std::size_t min_size, std::size_t max_size);
FinFunction random_function(Rng& rng, const FinSet& source, const FinSet& target);

/// A random covariant diagram of finite sets over one of the named shapes
/// (no two non-identity arrows compose).
SetDiagram random_set_diagram(Rng& rng, const ShapeKind& shape, std::size_t max_size);

}  // namespace catlim
