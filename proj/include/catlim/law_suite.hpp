#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "catlim/generate.hpp"
#include "catlim/laws.hpp"

namespace catlim {

struct SuiteBounds {
  /// Objects in generated posets and lattices.
  std::size_t max_objects = 6;
  /// Generated base structures per run (lattices, categories, functors).
  std::size_t instances = 4;
};

/// Covariant diagram of functors over `shape` with random nodes of
/// pointwise size <= max_size and random natural edges. Nodes are redrawn
/// until every edge has at least one candidate.
PresheafDiagram random_presheaf_diagram(Rng& rng, const CategoryRef& base, Variance base_variance,
                                        const ShapeKind& shape, std::size_t max_size, const Caps& caps = default_caps());

/// Every diagram of `shape` in a poset, non-identity arrows only where the
/// shape asks for them. Discrete shapes skip repeated objects.
std::vector<Diagram> poset_diagrams(const CategoryRef& poset, const ShapeKind& shape);

/// A random diagram of a named shape in any category, if one exists.
std::optional<Diagram> random_diagram(Rng& rng, const CategoryRef& cat, const ShapeKind& shape);

/// Law ids accepted by run_generated, in report order.
const std::vector<std::string>& law_ids();

/// Runs one law over instances drawn from `seed`. Poset-based laws use
/// random lattices and sweep every diagram of the supported shapes;
/// presheaf-based laws use small random categories and random functors.
/// Throws StructuralError for an unknown law id.
std::vector<LawReport> run_generated(const std::string& law, std::uint64_t seed, const SuiteBounds& bounds = {});

}  // namespace catlim
