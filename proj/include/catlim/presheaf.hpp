#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "catlim/finset.hpp"

namespace catlim {

/// A set-valued functor on a base category. Contravariant presheaves are
/// members of C^, covariant ones stand for members of C^v (Set^op-valued,
/// stored with ordinary tables; morphisms of C^v run the other way).
using SetPresheaf = SetFunctor;

/// Components of a natural transformation F => G, one table per base
/// object mapping F(X) into G(X). Source and target travel separately.
struct NatTrans {
  std::vector<std::vector<std::size_t>> components;
  friend bool operator==(const NatTrans&, const NatTrans&) = default;
};

/// h(X) = Hom(-, X), contravariant, acting by precomposition.
SetPresheaf yoneda_h(const CategoryRef& cat, ObjectIndex x);
/// k(X) = Hom(X, -), covariant, acting by postcomposition.
SetPresheaf yoneda_k(const CategoryRef& cat, ObjectIndex x);
/// h(X) for contravariant, k(X) for covariant.
SetPresheaf yoneda(const CategoryRef& cat, ObjectIndex x, Variance variance);

/// Components of y(f) : y(X) => y(Y) for f: X -> Y under h, and
/// k(Y) => k(X) under k.
NatTrans yoneda_h_map(const CategoryRef& cat, MorphismIndex f);
NatTrans yoneda_k_map(const CategoryRef& cat, MorphismIndex f);

bool is_natural(const SetPresheaf& f, const SetPresheaf& g, const NatTrans& theta);
bool is_natural_iso(const SetPresheaf& f, const SetPresheaf& g, const NatTrans& theta);
NatTrans compose(const NatTrans& second, const NatTrans& first);
NatTrans identity_nat_trans(const SetPresheaf& f);

/// Visits every natural transformation F => G (set-level direction) in
/// deterministic order. Throws CapacityError past caps.search_budget.
void for_each_nat_trans(const SetPresheaf& f, const SetPresheaf& g,
                        const std::function<bool(const NatTrans&)>& visit, const Caps& caps = default_caps());
std::vector<NatTrans> enumerate_nat_trans(const SetPresheaf& f, const SetPresheaf& g,
                                          const Caps& caps = default_caps());

/// Morphisms A -> B in the presheaf category of A's variance: Nat(A, B)
/// in C^, Nat(B, A) in C^v.
std::vector<NatTrans> presheaf_homs(const SetPresheaf& a, const SetPresheaf& b, const Caps& caps = default_caps());

struct YonedaCheck {
  bool ok = false;
  /// |Nat(y(X), A)|.
  std::size_t transformations = 0;
  /// theta_i -> theta_i,X(id_X) as an index into A(X).
  std::vector<std::size_t> image;
  std::string detail;
};

/// Checks Hom(h(X), A) ~= A(X) (or Hom_{C^v}(B, k(X)) ~= B(X)) through the
/// map theta -> theta_X(id_X).
YonedaCheck yoneda_check(const CategoryRef& cat, ObjectIndex x, const SetPresheaf& a,
                         const Caps& caps = default_caps());

/// A diagram of presheaves. edges[m] is a set-level transformation from
/// nodes[from] to nodes[to], with from/to read through `variance` exactly
/// as for SetFunctor actions.
struct PresheafDiagram {
  /// Base category and variance shared by every node.
  CategoryRef base;
  Variance base_variance = Variance::contravariant;
  CategoryRef shape;
  Variance variance = Variance::covariant;
  std::vector<SetPresheaf> nodes;
  std::vector<NatTrans> edges;

  ObjectIndex edge_src(MorphismIndex m) const {
    return variance == Variance::covariant ? shape->src(m) : shape->dst(m);
  }
  ObjectIndex edge_dst(MorphismIndex m) const {
    return variance == Variance::covariant ? shape->dst(m) : shape->src(m);
  }
  /// The set diagram obtained by evaluating at a base object.
  SetDiagram evaluate(ObjectIndex z) const;
};

/// Pointwise limit and colimit of set-level functors; actions are found by
/// searching for the mediating function, which must be unique.
SetPresheaf pointwise_lim(const PresheafDiagram& d);
SetPresheaf pointwise_colim(const PresheafDiagram& d);

/// Limits in the presheaf category of the nodes' variance. For C^ they are
/// pointwise; for C^v the roles swap (a limit in C^v is a pointwise
/// colimit of set-valued functors, and conversely).
SetPresheaf presheaf_lim(const PresheafDiagram& d);
SetPresheaf presheaf_colim(const PresheafDiagram& d);

/// h o d and k o d. The set-level variance of the result is d's variance
/// for h and the flipped one for k.
PresheafDiagram lift_h(const Diagram& d);
PresheafDiagram lift_k(const Diagram& d);

/// "colim" alpha: the colimit of h o alpha in C^.
SetPresheaf ind_lim(const Diagram& alpha);
/// "lim" beta: the limit of k o beta in C^v.
SetPresheaf pro_lim(const Diagram& beta);

/// X -> lim Hom(X, beta): the projective limit of a diagram in the base
/// category, as a member of C^ (pointwise limit of h o beta).
SetPresheaf limit_presheaf(const Diagram& beta);
/// X -> lim Hom(alpha, X): the inductive limit of a diagram in the base
/// category, as a member of C^v (pointwise limit of k o alpha).
SetPresheaf colimit_presheaf(const Diagram& alpha);

/// Natural isomorphism F ~= G by per-object bijection backtracking.
/// Absent means proven non-isomorphic; running out of caps.search_budget
/// throws CapacityError.
std::optional<NatTrans> find_natural_iso(const SetPresheaf& f, const SetPresheaf& g,
                                         const Caps& caps = default_caps());

struct Representation {
  ObjectIndex object = 0;
  /// y(object) => A, invertible.
  NatTrans iso;
};

/// First object X in id order with h(X) ~= A (k(X) for covariant A).
std::optional<Representation> representability_search(const SetPresheaf& a, const Caps& caps = default_caps());

struct ElementsCategory {
  CategoryRef category;
  /// Projection onto the base, on objects and morphisms.
  CatFunctor projection;
  /// (base object, element index) per object of the category.
  std::vector<std::pair<ObjectIndex, std::size_t>> elements;
};

/// Objects (X, a) with a in A(X). For contravariant A a morphism
/// (X, a) -> (Y, b) is an f: X -> Y with A(f)(b) = a; for covariant A it is
/// an f with A(f)(a) = b.
ElementsCategory category_of_elements(const SetPresheaf& a, const Caps& caps = default_caps());

/// The extension of F: C -> Set along the Yoneda embedding evaluated at A:
/// colim over the elements of A of F o projection for A in C^, lim for A
/// in C^v. F must be covariant.
FinSet yoneda_extension(const SetFunctor& f, const SetPresheaf& a, const Caps& caps = default_caps());

}  // namespace catlim
