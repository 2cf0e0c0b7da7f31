#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "catlim/fincat.hpp"

namespace catlim {

/// A finite set of named elements. Element order is significant only as
/// an index; equality of sets as mathematical objects is checked through
/// iso_sets or canonical encodings.
struct FinSet {
  std::string id;
  std::vector<std::string> elements;

  std::size_t size() const { return elements.size(); }
  bool empty() const { return elements.empty(); }
  std::optional<std::size_t> find(std::string_view element) const;
  /// Throws UnknownIdError.
  std::size_t index(std::string_view element) const;

  friend bool operator==(const FinSet&, const FinSet&) = default;
};

/// Rejects duplicate element ids.
FinSet make_set(std::string id, std::vector<std::string> elements);
/// The one-point set {pt}.
FinSet point_set();

/// A total function between finite sets, stored as a table of target
/// indices.
struct FinFunction {
  FinSet source;
  FinSet target;
  std::vector<std::size_t> table;

  std::size_t operator()(std::size_t x) const { return table[x]; }
  const std::string& apply(std::string_view element) const {
    return target.elements[table[source.index(element)]];
  }

  friend bool operator==(const FinFunction&, const FinFunction&) = default;
};

/// Builds a function from an element-name table; throws StructuralError
/// when the table is not total or leaves the target.
FinFunction make_function(const FinSet& source, const FinSet& target,
                          const std::map<std::string, std::string>& table);
FinFunction identity_function(const FinSet& set);
/// g o f. Throws EndpointError if f's target size differs from g's source.
FinFunction compose(const FinFunction& g, const FinFunction& f);
FinFunction constant_function(const FinSet& source, const FinSet& target, std::size_t value);
bool is_bijection(const FinFunction& f);
bool same_table(const FinFunction& a, const FinFunction& b);

/// A functor from a finite category into finite sets. Serves both as a
/// diagram (base = shape) and as a presheaf (base = the ambient category).
/// With contravariant variance, actions[f] for f: X -> Y maps values[Y]
/// to values[X].
struct SetFunctor {
  CategoryRef base;
  Variance variance = Variance::covariant;
  std::vector<FinSet> values;
  std::vector<FinFunction> actions;

  const FinSet& at(ObjectIndex x) const { return values.at(x); }
  /// Domain object of actions[m] with variance applied.
  ObjectIndex action_src(MorphismIndex m) const {
    return variance == Variance::covariant ? base->src(m) : base->dst(m);
  }
  ObjectIndex action_dst(MorphismIndex m) const {
    return variance == Variance::covariant ? base->dst(m) : base->src(m);
  }
};

using SetDiagram = SetFunctor;

std::vector<std::string> functor_law_violations(const SetFunctor& f);
/// Throws LawError on the first violation.
void require_functor_laws(const SetFunctor& f);

/// Functor with every value {pt}.
SetFunctor point_functor(const CategoryRef& base, Variance variance);

enum class LimitKind { projective, inductive };
std::string to_string(LimitKind kind);

/// A computed limit (legs are projections out of the apex) or colimit
/// (legs are injections into the apex), one leg per shape object.
struct LimitResult {
  FinSet apex;
  std::vector<FinFunction> legs;
  LimitKind kind = LimitKind::projective;
};

/// Limits are encoded as "(I1:x, I2:y)" in shape-object order; colimit
/// classes are named after their smallest tagged member "I1:x".
std::string encode_family(const FinCategory& shape, std::span<const std::string> coordinates);
std::string tag_element(const std::string& shape_object, const std::string& element);

/// Compatible families by filtered cartesian enumeration.
LimitResult lim_matching_families(const SetDiagram& d);
/// Natural transformations from the point functor, enumerated as
/// per-object functions {pt} -> D(i) and filtered by naturality squares.
LimitResult lim_as_nat_trans(const SetDiagram& d, const Caps& caps = default_caps());
/// Disjoint union quotiented by the relation generated by x ~ D(f)(x).
LimitResult colim(const SetDiagram& d);

/// Diagrams the specialized constructors are built from.
SetDiagram product_diagram(const FinSet& x, const FinSet& y);
SetDiagram pullback_diagram(const FinFunction& f, const FinFunction& g);
SetDiagram parallel_diagram(const FinFunction& f, const FinFunction& g);

LimitResult product(const FinSet& x, const FinSet& y);
LimitResult pullback(const FinFunction& f, const FinFunction& g);
/// Apex elements are the x in X with f(x) = g(x), keeping X's ids.
LimitResult equalizer(const FinFunction& f, const FinFunction& g);
LimitResult coproduct(const FinSet& x, const FinSet& y);
/// Apex is Y/~, each class named by its smallest element of Y.
LimitResult coequalizer(const FinFunction& f, const FinFunction& g);

struct UniversalCheck {
  bool ok = true;
  std::string counterexample;
  explicit operator bool() const { return ok; }
};

/// Enumerates every cone (cocone) from (to) each probe and checks that
/// exactly one mediating function commutes with the legs.
UniversalCheck verify_universal_property(const LimitResult& result, const SetDiagram& d,
                                         const std::vector<FinSet>& probes,
                                         const Caps& caps = default_caps());

/// Probe sets of sizes 0..max_size.
std::vector<FinSet> standard_probes(std::size_t max_size);

/// Visits every function X -> Y in lexicographic table order (first
/// element most significant). The visitor returns false to stop early.
void for_each_function(const FinSet& x, const FinSet& y,
                       const std::function<bool(const std::vector<std::size_t>&)>& visit,
                       const Caps& caps = default_caps());
std::vector<FinFunction> enumerate_functions(const FinSet& x, const FinSet& y, const Caps& caps = default_caps());
/// Number of functions |Y|^|X|, saturating at SIZE_MAX.
std::size_t function_count(std::size_t source_size, std::size_t target_size);

/// A bijection iff |X| = |Y| (positional; the identity when X == Y).
std::optional<FinFunction> iso_sets(const FinSet& x, const FinSet& y);

/// The canonical comparison map between two (co)limits of the same
/// diagram, determined by the legs. Present only when it is a bijection.
std::optional<FinFunction> comparison_iso(const LimitResult& a, const LimitResult& b);

}  // namespace catlim
