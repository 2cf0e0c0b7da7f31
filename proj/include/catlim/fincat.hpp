#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "catlim/error.hpp"

namespace catlim {

using ObjectIndex = std::size_t;
using MorphismIndex = std::size_t;

/// Direction in which a functor-like assignment reads shape morphisms.
/// A contravariant assignment sends f: i -> j to something going j -> i.
enum class Variance { covariant, contravariant };

std::string to_string(Variance v);
Variance variance_from_string(std::string_view s);
inline Variance flip(Variance v) {
  return v == Variance::covariant ? Variance::contravariant : Variance::covariant;
}

struct MorphismSpec {
  std::string id;
  std::string src;
  std::string dst;
};

/// Category tables as they appear in a document, before any indexing.
struct CategorySpec {
  std::string name;
  std::vector<std::string> objects;
  std::vector<MorphismSpec> morphisms;
  std::map<std::string, std::string> identities;
  /// Triples (g, f, g o f).
  std::vector<std::array<std::string, 3>> compose;
};

/// A finite category with fully materialized composition.
///
/// Objects and morphisms are kept sorted by id, so index order is the
/// canonical lexicographic order used throughout the engine. Construction
/// rejects structural defects (dangling or duplicate ids) but accepts
/// tables that break category laws; validate_category() reports those.
class FinCategory {
 public:
  static constexpr MorphismIndex npos = static_cast<MorphismIndex>(-1);

  /// Builds from document tables. Missing identities are named "id_<X>";
  /// compositions with identities are filled in when absent.
  static FinCategory from_spec(const CategorySpec& spec, const Caps& caps = default_caps());

  CategorySpec to_spec() const;

  const std::string& name() const { return name_; }
  std::size_t object_count() const { return objects_.size(); }
  std::size_t morphism_count() const { return morphisms_.size(); }

  const std::string& object_id(ObjectIndex x) const { return objects_.at(x); }
  const std::string& morphism_id(MorphismIndex m) const { return morphisms_.at(m).id; }
  ObjectIndex src(MorphismIndex m) const { return morphisms_.at(m).src; }
  ObjectIndex dst(MorphismIndex m) const { return morphisms_.at(m).dst; }
  MorphismIndex identity(ObjectIndex x) const { return identities_.at(x); }
  bool is_identity(MorphismIndex m) const;

  std::optional<ObjectIndex> find_object(std::string_view id) const;
  std::optional<MorphismIndex> find_morphism(std::string_view id) const;
  /// Throws UnknownIdError.
  ObjectIndex object(std::string_view id) const;
  MorphismIndex morphism(std::string_view id) const;

  /// Raw table entry for g o f, npos when the table has none.
  MorphismIndex table_entry(MorphismIndex g, MorphismIndex f) const {
    return compose_[g * morphisms_.size() + f];
  }
  /// g o f for a composable pair; throws LawError when the table is not
  /// total there.
  MorphismIndex compose(MorphismIndex g, MorphismIndex f) const;

  /// Hom(x, y), sorted by morphism id.
  std::span<const MorphismIndex> hom(ObjectIndex x, ObjectIndex y) const {
    return homs_[x * objects_.size() + y];
  }

  friend bool operator==(const FinCategory&, const FinCategory&) = default;

 private:
  struct Arrow {
    std::string id;
    ObjectIndex src = 0;
    ObjectIndex dst = 0;
    friend bool operator==(const Arrow&, const Arrow&) = default;
  };

  std::string name_;
  std::vector<std::string> objects_;
  std::vector<Arrow> morphisms_;
  std::vector<MorphismIndex> identities_;
  std::vector<MorphismIndex> compose_;
  std::vector<std::vector<MorphismIndex>> homs_;

  void index_homs();
  friend FinCategory opposite(const FinCategory& cat);
};

using CategoryRef = std::shared_ptr<const FinCategory>;

inline CategoryRef share(FinCategory cat) {
  return std::make_shared<const FinCategory>(std::move(cat));
}

/// Same tables, names ignored.
bool structurally_equal(const FinCategory& a, const FinCategory& b);

struct Violation {
  enum class Kind {
    identity_endpoints,
    non_composable_entry,
    missing_composite,
    closure,
    left_identity,
    right_identity,
    associativity,
  };
  Kind kind;
  std::vector<std::string> morphisms;
  std::string message;
};

std::string to_string(Violation::Kind kind);

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Every law violation of the tables, in deterministic order.
ValidationReport validate_category(const FinCategory& cat);

/// Throws LawError with the first violation when cat is not a category.
void require_valid(const FinCategory& cat);

/// Same objects, arrows reversed, g o_op f = f o g. Names toggle a "^op"
/// suffix so that opposite(opposite(c)) == c.
FinCategory opposite(const FinCategory& cat);

/// The inverse of f, if one exists.
std::optional<MorphismIndex> is_isomorphism(const FinCategory& cat, MorphismIndex f);

bool isomorphic_objects(const FinCategory& cat, ObjectIndex x, ObjectIndex y);

/// Index categories used for limits: discrete(n), the parallel pair, the
/// cospan, its opposite the span, or any explicit category.
class ShapeKind {
 public:
  enum class Tag { discrete, parallel_pair, cospan, span, custom };

  static ShapeKind discrete(std::size_t n) { return ShapeKind(Tag::discrete, n, nullptr); }
  static ShapeKind parallel_pair() { return ShapeKind(Tag::parallel_pair, 0, nullptr); }
  static ShapeKind cospan() { return ShapeKind(Tag::cospan, 0, nullptr); }
  static ShapeKind span() { return ShapeKind(Tag::span, 0, nullptr); }
  static ShapeKind custom(CategoryRef cat) { return ShapeKind(Tag::custom, 0, std::move(cat)); }

  /// Parses "discrete(n)", "point", "parallel_pair", "cospan", "span".
  static ShapeKind parse(std::string_view text);

  Tag tag() const { return tag_; }
  std::size_t size() const { return n_; }
  const CategoryRef& custom_category() const { return custom_; }
  /// Inverse of parse for the named kinds, "custom" otherwise.
  std::string to_string() const;

  friend bool operator==(const ShapeKind& a, const ShapeKind& b) {
    return a.tag_ == b.tag_ && a.n_ == b.n_ && a.custom_ == b.custom_;
  }

 private:
  ShapeKind(Tag tag, std::size_t n, CategoryRef custom) : tag_(tag), n_(n), custom_(std::move(custom)) {}
  Tag tag_;
  std::size_t n_;
  CategoryRef custom_;
};

/// Canonical shape with objects I1, I2, ... and arrows m1, m2, ...
FinCategory build_shape(const ShapeKind& kind);

/// Functor between finite categories, stored as index maps.
struct CatFunctor {
  CategoryRef source;
  CategoryRef target;
  std::vector<ObjectIndex> on_objects;
  std::vector<MorphismIndex> on_morphisms;
};

CatFunctor identity_functor(const CategoryRef& cat);
/// Empty when the maps respect endpoints, identities and composition.
std::vector<std::string> functor_violations(const CatFunctor& f);

/// A diagram of shape I in a finite category. With contravariant variance
/// the assignment is read as I^op -> target: f: i -> j goes to a morphism
/// objects[j] -> objects[i].
struct Diagram {
  CategoryRef shape;
  Variance variance = Variance::covariant;
  CategoryRef target;
  std::vector<ObjectIndex> objects;
  std::vector<MorphismIndex> morphisms;

  /// Endpoint of the image of shape morphism m, variance applied.
  ObjectIndex image_src(MorphismIndex m) const;
  ObjectIndex image_dst(MorphismIndex m) const;
};

std::vector<std::string> diagram_violations(const Diagram& d);
/// Throws LawError on the first violation.
void require_functorial(const Diagram& d);

/// Post-composes a diagram with a functor.
Diagram compose(const CatFunctor& f, const Diagram& d);

}  // namespace catlim
