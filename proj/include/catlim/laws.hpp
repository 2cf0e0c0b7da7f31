#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "catlim/presheaf.hpp"

namespace catlim {

enum class Verdict { holds, fails, not_applicable };
std::string to_string(Verdict v);

/// Outcome of one law instance. A "fails" verdict always fills
/// `counterexample` with plain ids that can be checked without this
/// module's search code.
struct LawReport {
  std::string law;
  std::string instance;
  Verdict verdict = Verdict::holds;
  /// Human-readable bijection summary or reason for not applying.
  std::string witness;
  std::map<std::string, std::string> counterexample;
};

/// Two sides of a law and the canonical comparison map between them.
struct Comparison {
  FinSet lhs;
  FinSet rhs;
  std::vector<std::size_t> map;  // lhs index -> rhs index
};

/// holds iff the comparison map is a bijection. Otherwise the
/// counterexample names two colliding lhs elements, a missed rhs element,
/// or an undefined entry.
LawReport judge(const std::string& law, const std::string& instance, const Comparison& c);

/// Hom_C(colim alpha, X) -> lim Hom_C(alpha, X), u -> (u o iota_i), where
/// colim alpha is found by representability of X -> lim Hom(alpha, X).
/// Absent when the colimit does not exist in C.
std::optional<Comparison> hom_colim_comparison(const Diagram& alpha, ObjectIndex x, const Caps& caps = default_caps());
/// Hom_C(X, lim beta) -> lim Hom_C(X, beta), u -> (pi_i o u).
std::optional<Comparison> hom_lim_comparison(const Diagram& beta, ObjectIndex x, const Caps& caps = default_caps());

/// Lemma on morphism tasks: both forms, not applicable when the limit is
/// not representable.
LawReport check_hom_lim(const Diagram& d, ObjectIndex x, LimitKind kind, const Caps& caps = default_caps());

/// The comparisons the lemma does not promise: Hom(X, colim alpha) against
/// colim Hom(X, alpha), and Hom(lim beta, X) against colim Hom(beta, X).
struct AsymmetryProbe {
  bool applicable = false;
  bool differs = false;
  std::size_t direct = 0;
  std::size_t combined = 0;
  std::string detail;
};
AsymmetryProbe probe_wrong_side(const Diagram& d, ObjectIndex x, LimitKind kind, const Caps& caps = default_caps());

/// Nat(colim delta, A) -> lim Nat(delta, A), theta -> (theta o iota_i),
/// for a covariant diagram of set functors; the colimit is pointwise.
/// This is Hom(colim alpha, A) in C^ and Hom(B, lim beta) in C^v.
Comparison nat_out_of_colim_comparison(const PresheafDiagram& delta, const SetPresheaf& a,
                                       const Caps& caps = default_caps());
LawReport check_indlim_hom(const PresheafDiagram& alpha, const SetPresheaf& a, const Caps& caps = default_caps());
LawReport check_prolim_hom(const PresheafDiagram& beta, const SetPresheaf& b, const Caps& caps = default_caps());

/// colim Nat(y(X), delta) -> Nat(y(X), colim delta), [theta] -> iota_i o theta,
/// with y = h for contravariant nodes and k for covariant ones.
Comparison nat_into_colim_comparison(const PresheafDiagram& delta, ObjectIndex x, const Caps& caps = default_caps());
LawReport check_otherside_hom(const PresheafDiagram& delta, ObjectIndex x, const Caps& caps = default_caps());

/// L: C -> D left adjoint to R: D -> C. bijections[x][y] maps
/// Hom_D(L x, y) to Hom_C(x, R y) by hom-set positions.
struct AdjunctionWitness {
  CatFunctor left;
  CatFunctor right;
  std::vector<std::vector<std::vector<std::size_t>>> bijections;
};

AdjunctionWitness identity_adjunction(const CategoryRef& cat);
/// Functor between posets from a monotone object map; throws LawError if
/// the map is not monotone.
CatFunctor poset_functor(const CategoryRef& source, const CategoryRef& target, const std::vector<ObjectIndex>& objects);
/// Sends every object to `object` and every arrow to its identity.
CatFunctor constant_functor(const CategoryRef& source, const CategoryRef& target, ObjectIndex object);
/// For posets the bijections are forced; absent unless L x <= y iff x <= R y.
std::optional<AdjunctionWitness> poset_adjunction(const CatFunctor& left, const CatFunctor& right);
/// The up-set {y | y >= a} of a poset as a full subposet, with its
/// inclusion functor.
CatFunctor upset_inclusion(const CategoryRef& poset, ObjectIndex a);
/// Least upper bound in a poset, if it exists.
std::optional<ObjectIndex> poset_join(const FinCategory& poset, ObjectIndex a, ObjectIndex b);
std::optional<ObjectIndex> poset_meet(const FinCategory& poset, ObjectIndex a, ObjectIndex b);

/// Checks each bijection and the naturality square
/// phi(g o u o L f) = R g o phi(u) o f for all f, g, u. A failure names
/// the square (x, y, f, g, u).
LawReport check_adjunction(const AdjunctionWitness& w);

/// Right adjoints preserve limits (kind projective, beta in D, checked for
/// R) and left adjoints preserve colimits (kind inductive, alpha in C,
/// checked for L). Not applicable when the (co)limit does not exist.
LawReport check_adjoint_preserves_lim(const AdjunctionWitness& w, const Diagram& d, LimitKind kind,
                                      const Caps& caps = default_caps());

/// colim(F o alpha) -> F(X), where the formal colimit of alpha is
/// represented by X; comparison induced by F applied to the cocone.
std::optional<Comparison> representable_colim_comparison(const Diagram& alpha, const SetFunctor& f,
                                                         const Caps& caps = default_caps());
LawReport check_representable_colim(const Diagram& alpha, const SetFunctor& f, const Caps& caps = default_caps());

/// F~(h(X)) -> F(X) through the leg at the terminal element (X, id_X).
Comparison yoneda_extension_comparison(const SetFunctor& f, ObjectIndex x, const Caps& caps = default_caps());
/// F~ o h ~= F at X, and |F~(ind_lim alpha)| = |colim(F o alpha)| when alpha
/// is given.
LawReport check_yoneda_extension(const SetFunctor& f, ObjectIndex x, const Caps& caps = default_caps());
LawReport check_yoneda_extension_colim(const SetFunctor& f, const Diagram& alpha, const Caps& caps = default_caps());

/// Hom(h(X), A) ~= A(X) as a law report.
LawReport check_yoneda(const CategoryRef& cat, ObjectIndex x, const SetPresheaf& a, const Caps& caps = default_caps());

/// Whenever the (co)limit of d exists in C, F carries it to a (co)limit
/// of F o d in D.
LawReport check_preservation(const CatFunctor& f, const Diagram& d, LimitKind kind, const Caps& caps = default_caps());
/// Every cone (cocone) over d whose image under F is universal is itself
/// universal. A failure names the apex and the legs.
LawReport check_reflection(const CatFunctor& f, const Diagram& d, LimitKind kind, const Caps& caps = default_caps());

/// A limit of beta in C found by enumerating cones straight from the
/// hom tables, then h(L) compared with the pointwise limit of h o beta.
LawReport check_yoneda_preserves_lim(const Diagram& beta, const Caps& caps = default_caps());

/// Diagram of objects along identities only (discrete shapes) or along
/// the given arrows.
Diagram make_diagram(const CategoryRef& target, const ShapeKind& shape, const std::vector<ObjectIndex>& objects,
                     const std::vector<MorphismIndex>& arrows = {});

}  // namespace catlim
