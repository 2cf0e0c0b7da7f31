#include "catlim/fincat.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

namespace catlim {

std::string to_string(Variance v) {
  return v == Variance::covariant ? "covariant" : "contravariant";
}

Variance variance_from_string(std::string_view s) {
  if (s == "covariant") return Variance::covariant;
  if (s == "contravariant") return Variance::contravariant;
  throw StructuralError("unknown variance '" + std::string(s) + "'");
}

FinCategory FinCategory::from_spec(const CategorySpec& spec, const Caps& caps) {
  FinCategory cat;
  cat.name_ = spec.name;

  cat.objects_ = spec.objects;
  std::sort(cat.objects_.begin(), cat.objects_.end());
  if (std::adjacent_find(cat.objects_.begin(), cat.objects_.end()) != cat.objects_.end()) {
    throw StructuralError("category '" + spec.name + "': duplicate object id");
  }
  if (cat.objects_.size() > caps.max_objects) {
    throw CapacityError("category '" + spec.name + "' has " + std::to_string(cat.objects_.size()) +
                        " objects, cap is " + std::to_string(caps.max_objects));
  }

  auto object_of = [&](const std::string& id, const std::string& context) {
    auto it = std::lower_bound(cat.objects_.begin(), cat.objects_.end(), id);
    if (it == cat.objects_.end() || *it != id) {
      throw UnknownIdError("category '" + spec.name + "': " + context + " refers to unknown object '" + id + "'");
    }
    return static_cast<ObjectIndex>(it - cat.objects_.begin());
  };

  std::vector<MorphismSpec> arrows = spec.morphisms;
  std::set<std::string> arrow_ids;
  for (const auto& a : arrows) {
    if (!arrow_ids.insert(a.id).second) {
      throw StructuralError("category '" + spec.name + "': duplicate morphism id '" + a.id + "'");
    }
  }
  // Identities named only in the identity map become arrows; objects with
  // no identity at all get a generated "id_<X>".
  std::map<std::string, std::string> identities = spec.identities;
  for (const auto& [obj, id] : identities) {
    object_of(obj, "identity entry");
    if (arrow_ids.insert(id).second) arrows.push_back({id, obj, obj});
  }
  for (const auto& obj : cat.objects_) {
    if (identities.count(obj)) continue;
    std::string id = "id_" + obj;
    if (arrow_ids.count(id)) {
      throw StructuralError("category '" + spec.name + "': object '" + obj + "' has no identity and '" + id +
                            "' is taken");
    }
    arrow_ids.insert(id);
    arrows.push_back({id, obj, obj});
    identities[obj] = id;
  }
  std::sort(arrows.begin(), arrows.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  if (arrows.size() > caps.max_morphisms) {
    throw CapacityError("category '" + spec.name + "' has " + std::to_string(arrows.size()) +
                        " morphisms, cap is " + std::to_string(caps.max_morphisms));
  }
  for (const auto& a : arrows) {
    cat.morphisms_.push_back({a.id, object_of(a.src, "morphism '" + a.id + "'"),
                              object_of(a.dst, "morphism '" + a.id + "'")});
  }

  cat.identities_.resize(cat.objects_.size());
  for (ObjectIndex x = 0; x < cat.objects_.size(); ++x) {
    cat.identities_[x] = cat.morphism(identities.at(cat.objects_[x]));
  }

  const std::size_t m = cat.morphisms_.size();
  cat.compose_.assign(m * m, npos);
  for (const auto& [g_id, f_id, r_id] : spec.compose) {
    const MorphismIndex g = cat.morphism(g_id);
    const MorphismIndex f = cat.morphism(f_id);
    const MorphismIndex r = cat.morphism(r_id);
    MorphismIndex& slot = cat.compose_[g * m + f];
    if (slot != npos && slot != r) {
      throw StructuralError("category '" + spec.name + "': conflicting entries for " + g_id + " o " + f_id);
    }
    slot = r;
  }
  for (MorphismIndex f = 0; f < m; ++f) {
    MorphismIndex& left = cat.compose_[cat.identities_[cat.morphisms_[f].dst] * m + f];
    if (left == npos) left = f;
    MorphismIndex& right = cat.compose_[f * m + cat.identities_[cat.morphisms_[f].src]];
    if (right == npos) right = f;
  }
  cat.index_homs();
  return cat;
}

void FinCategory::index_homs() {
  const std::size_t n = objects_.size();
  homs_.assign(n * n, {});
  for (MorphismIndex f = 0; f < morphisms_.size(); ++f) {
    homs_[morphisms_[f].src * n + morphisms_[f].dst].push_back(f);
  }
}

CategorySpec FinCategory::to_spec() const {
  CategorySpec spec;
  spec.name = name_;
  spec.objects = objects_;
  for (const auto& a : morphisms_) spec.morphisms.push_back({a.id, objects_[a.src], objects_[a.dst]});
  for (ObjectIndex x = 0; x < objects_.size(); ++x) spec.identities[objects_[x]] = morphisms_[identities_[x]].id;
  const std::size_t m = morphisms_.size();
  for (MorphismIndex g = 0; g < m; ++g) {
    for (MorphismIndex f = 0; f < m; ++f) {
      const MorphismIndex r = compose_[g * m + f];
      if (r == npos || is_identity(g) || is_identity(f)) continue;
      spec.compose.push_back({morphisms_[g].id, morphisms_[f].id, morphisms_[r].id});
    }
  }
  return spec;
}

bool FinCategory::is_identity(MorphismIndex m) const {
  return identities_.at(morphisms_.at(m).src) == m;
}

std::optional<ObjectIndex> FinCategory::find_object(std::string_view id) const {
  auto it = std::lower_bound(objects_.begin(), objects_.end(), id);
  if (it == objects_.end() || *it != id) return std::nullopt;
  return static_cast<ObjectIndex>(it - objects_.begin());
}

std::optional<MorphismIndex> FinCategory::find_morphism(std::string_view id) const {
  auto it = std::lower_bound(morphisms_.begin(), morphisms_.end(), id,
                             [](const Arrow& a, std::string_view key) { return a.id < key; });
  if (it == morphisms_.end() || it->id != id) return std::nullopt;
  return static_cast<MorphismIndex>(it - morphisms_.begin());
}

ObjectIndex FinCategory::object(std::string_view id) const {
  if (auto x = find_object(id)) return *x;
  throw UnknownIdError("category '" + name_ + "' has no object '" + std::string(id) + "'");
}

MorphismIndex FinCategory::morphism(std::string_view id) const {
  if (auto f = find_morphism(id)) return *f;
  throw UnknownIdError("category '" + name_ + "' has no morphism '" + std::string(id) + "'");
}

MorphismIndex FinCategory::compose(MorphismIndex g, MorphismIndex f) const {
  const MorphismIndex r = table_entry(g, f);
  if (r == npos) {
    throw LawError("category '" + name_ + "': no composite for " + morphism_id(g) + " o " + morphism_id(f));
  }
  return r;
}

bool structurally_equal(const FinCategory& a, const FinCategory& b) {
  CategorySpec sa = a.to_spec();
  CategorySpec sb = b.to_spec();
  sa.name.clear();
  sb.name.clear();
  return sa.objects == sb.objects && sa.identities == sb.identities && sa.compose == sb.compose &&
         std::equal(sa.morphisms.begin(), sa.morphisms.end(), sb.morphisms.begin(), sb.morphisms.end(),
                    [](const MorphismSpec& x, const MorphismSpec& y) {
                      return x.id == y.id && x.src == y.src && x.dst == y.dst;
                    });
}

std::string to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::identity_endpoints: return "identity_endpoints";
    case Violation::Kind::non_composable_entry: return "non_composable_entry";
    case Violation::Kind::missing_composite: return "missing_composite";
    case Violation::Kind::closure: return "closure";
    case Violation::Kind::left_identity: return "left_identity";
    case Violation::Kind::right_identity: return "right_identity";
    case Violation::Kind::associativity: return "associativity";
  }
  return "unknown";
}

ValidationReport validate_category(const FinCategory& cat) {
  ValidationReport report;
  auto add = [&](Violation::Kind kind, std::vector<std::string> ids, std::string message) {
    report.violations.push_back({kind, std::move(ids), std::move(message)});
  };
  const std::size_t m = cat.morphism_count();

  for (ObjectIndex x = 0; x < cat.object_count(); ++x) {
    const MorphismIndex id = cat.identity(x);
    if (cat.src(id) != x || cat.dst(id) != x) {
      add(Violation::Kind::identity_endpoints, {cat.morphism_id(id)},
          "identity of " + cat.object_id(x) + " is not an endomorphism of it");
    }
  }

  for (MorphismIndex g = 0; g < m; ++g) {
    for (MorphismIndex f = 0; f < m; ++f) {
      const MorphismIndex r = cat.table_entry(g, f);
      const bool composable = cat.dst(f) == cat.src(g);
      if (!composable) {
        if (r != FinCategory::npos) {
          add(Violation::Kind::non_composable_entry, {cat.morphism_id(g), cat.morphism_id(f)},
              "entry for non-composable pair " + cat.morphism_id(g) + " o " + cat.morphism_id(f));
        }
        continue;
      }
      if (r == FinCategory::npos) {
        add(Violation::Kind::missing_composite, {cat.morphism_id(g), cat.morphism_id(f)},
            "no composite for " + cat.morphism_id(g) + " o " + cat.morphism_id(f));
        continue;
      }
      if (cat.src(r) != cat.src(f) || cat.dst(r) != cat.dst(g)) {
        add(Violation::Kind::closure, {cat.morphism_id(g), cat.morphism_id(f), cat.morphism_id(r)},
            cat.morphism_id(g) + " o " + cat.morphism_id(f) + " = " + cat.morphism_id(r) + " has wrong endpoints");
      }
    }
  }

  for (MorphismIndex f = 0; f < m; ++f) {
    const MorphismIndex left = cat.table_entry(cat.identity(cat.dst(f)), f);
    if (left != FinCategory::npos && left != f) {
      add(Violation::Kind::left_identity, {cat.morphism_id(f)}, "id o " + cat.morphism_id(f) + " != itself");
    }
    const MorphismIndex right = cat.table_entry(f, cat.identity(cat.src(f)));
    if (right != FinCategory::npos && right != f) {
      add(Violation::Kind::right_identity, {cat.morphism_id(f)}, cat.morphism_id(f) + " o id != itself");
    }
  }

  for (MorphismIndex f = 0; f < m; ++f) {
    for (MorphismIndex g = 0; g < m; ++g) {
      if (cat.dst(f) != cat.src(g)) continue;
      const MorphismIndex gf = cat.table_entry(g, f);
      if (gf == FinCategory::npos) continue;
      for (MorphismIndex h = 0; h < m; ++h) {
        if (cat.dst(g) != cat.src(h)) continue;
        const MorphismIndex hg = cat.table_entry(h, g);
        if (hg == FinCategory::npos) continue;
        const MorphismIndex lhs = cat.table_entry(hg, f);
        const MorphismIndex rhs = cat.table_entry(h, gf);
        if (lhs == FinCategory::npos || rhs == FinCategory::npos) continue;  // reported as missing/closure
        if (lhs != rhs) {
          add(Violation::Kind::associativity, {cat.morphism_id(h), cat.morphism_id(g), cat.morphism_id(f)},
              "(" + cat.morphism_id(h) + " o " + cat.morphism_id(g) + ") o " + cat.morphism_id(f) +
                  " != " + cat.morphism_id(h) + " o (" + cat.morphism_id(g) + " o " + cat.morphism_id(f) + ")");
        }
      }
    }
  }
  return report;
}

void require_valid(const FinCategory& cat) {
  const auto report = validate_category(cat);
  if (!report.ok()) {
    throw LawError("category '" + cat.name() + "' is not valid: " + report.violations.front().message);
  }
}

FinCategory opposite(const FinCategory& cat) {
  static constexpr std::string_view suffix = "^op";
  FinCategory op;
  const std::string& name = cat.name_;
  if (name.size() >= suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
    op.name_ = name.substr(0, name.size() - suffix.size());
  } else {
    op.name_ = name + std::string(suffix);
  }
  op.objects_ = cat.objects_;
  op.morphisms_ = cat.morphisms_;
  for (auto& a : op.morphisms_) std::swap(a.src, a.dst);
  op.identities_ = cat.identities_;
  const std::size_t m = cat.morphisms_.size();
  op.compose_.assign(m * m, FinCategory::npos);
  for (MorphismIndex g = 0; g < m; ++g) {
    for (MorphismIndex f = 0; f < m; ++f) op.compose_[g * m + f] = cat.compose_[f * m + g];
  }
  op.index_homs();
  return op;
}

std::optional<MorphismIndex> is_isomorphism(const FinCategory& cat, MorphismIndex f) {
  if (f >= cat.morphism_count()) {
    throw UnknownIdError("morphism index " + std::to_string(f) + " out of range in '" + cat.name() + "'");
  }
  for (MorphismIndex g : cat.hom(cat.dst(f), cat.src(f))) {
    if (cat.table_entry(g, f) == cat.identity(cat.src(f)) && cat.table_entry(f, g) == cat.identity(cat.dst(f))) {
      return g;
    }
  }
  return std::nullopt;
}

bool isomorphic_objects(const FinCategory& cat, ObjectIndex x, ObjectIndex y) {
  for (MorphismIndex f : cat.hom(x, y)) {
    if (is_isomorphism(cat, f)) return true;
  }
  return false;
}

ShapeKind ShapeKind::parse(std::string_view text) {
  if (text == "point") return discrete(1);
  if (text == "parallel_pair") return parallel_pair();
  if (text == "cospan") return cospan();
  if (text == "span") return span();
  constexpr std::string_view prefix = "discrete(";
  if (text.size() > prefix.size() + 1 && text.substr(0, prefix.size()) == prefix && text.back() == ')') {
    const auto digits = text.substr(prefix.size(), text.size() - prefix.size() - 1);
    std::size_t n = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec == std::errc() && ptr == digits.data() + digits.size()) return discrete(n);
  }
  throw StructuralError("unknown shape '" + std::string(text) + "'");
}

std::string ShapeKind::to_string() const {
  switch (tag_) {
    case Tag::discrete: return "discrete(" + std::to_string(n_) + ")";
    case Tag::parallel_pair: return "parallel_pair";
    case Tag::cospan: return "cospan";
    case Tag::span: return "span";
    case Tag::custom: return "custom";
  }
  return "custom";
}

FinCategory build_shape(const ShapeKind& kind) {
  auto obj = [](std::size_t i) { return "I" + std::to_string(i); };
  CategorySpec spec;
  switch (kind.tag()) {
    case ShapeKind::Tag::discrete:
      spec.name = kind.to_string();
      for (std::size_t i = 1; i <= kind.size(); ++i) spec.objects.push_back(obj(i));
      break;
    case ShapeKind::Tag::parallel_pair:
      spec.name = "parallel_pair";
      spec.objects = {obj(1), obj(2)};
      spec.morphisms = {{"m1", obj(1), obj(2)}, {"m2", obj(1), obj(2)}};
      break;
    case ShapeKind::Tag::cospan:
      spec.name = "cospan";
      spec.objects = {obj(1), obj(2), obj(3)};
      spec.morphisms = {{"m1", obj(1), obj(3)}, {"m2", obj(2), obj(3)}};
      break;
    case ShapeKind::Tag::span:
      spec.name = "span";
      spec.objects = {obj(1), obj(2), obj(3)};
      spec.morphisms = {{"m1", obj(3), obj(1)}, {"m2", obj(3), obj(2)}};
      break;
    case ShapeKind::Tag::custom:
      if (!kind.custom_category()) throw StructuralError("custom shape without a category");
      return *kind.custom_category();
  }
  for (const auto& o : spec.objects) spec.identities[o] = "id_" + o;
  return FinCategory::from_spec(spec);
}

CatFunctor identity_functor(const CategoryRef& cat) {
  CatFunctor f{cat, cat, {}, {}};
  for (ObjectIndex x = 0; x < cat->object_count(); ++x) f.on_objects.push_back(x);
  for (MorphismIndex m = 0; m < cat->morphism_count(); ++m) f.on_morphisms.push_back(m);
  return f;
}

std::vector<std::string> functor_violations(const CatFunctor& f) {
  std::vector<std::string> out;
  const FinCategory& s = *f.source;
  const FinCategory& t = *f.target;
  if (f.on_objects.size() != s.object_count() || f.on_morphisms.size() != s.morphism_count()) {
    out.push_back("functor maps do not cover the source category");
    return out;
  }
  for (MorphismIndex m = 0; m < s.morphism_count(); ++m) {
    const MorphismIndex fm = f.on_morphisms[m];
    if (t.src(fm) != f.on_objects[s.src(m)] || t.dst(fm) != f.on_objects[s.dst(m)]) {
      out.push_back("F(" + s.morphism_id(m) + ") = " + t.morphism_id(fm) + " has wrong endpoints");
    }
  }
  for (ObjectIndex x = 0; x < s.object_count(); ++x) {
    if (f.on_morphisms[s.identity(x)] != t.identity(f.on_objects[x])) {
      out.push_back("F(id_" + s.object_id(x) + ") is not an identity");
    }
  }
  for (MorphismIndex g = 0; g < s.morphism_count(); ++g) {
    for (MorphismIndex h = 0; h < s.morphism_count(); ++h) {
      if (s.dst(h) != s.src(g)) continue;
      const MorphismIndex gh = s.table_entry(g, h);
      if (gh == FinCategory::npos) continue;
      if (t.table_entry(f.on_morphisms[g], f.on_morphisms[h]) != f.on_morphisms[gh]) {
        out.push_back("F(" + s.morphism_id(g) + " o " + s.morphism_id(h) + ") != F(" + s.morphism_id(g) + ") o F(" +
                      s.morphism_id(h) + ")");
      }
    }
  }
  return out;
}

ObjectIndex Diagram::image_src(MorphismIndex m) const {
  return variance == Variance::covariant ? objects[shape->src(m)] : objects[shape->dst(m)];
}

ObjectIndex Diagram::image_dst(MorphismIndex m) const {
  return variance == Variance::covariant ? objects[shape->dst(m)] : objects[shape->src(m)];
}

std::vector<std::string> diagram_violations(const Diagram& d) {
  std::vector<std::string> out;
  const FinCategory& s = *d.shape;
  const FinCategory& t = *d.target;
  if (d.objects.size() != s.object_count() || d.morphisms.size() != s.morphism_count()) {
    out.push_back("diagram does not assign every shape object and morphism");
    return out;
  }
  for (MorphismIndex m = 0; m < s.morphism_count(); ++m) {
    const MorphismIndex dm = d.morphisms[m];
    if (t.src(dm) != d.image_src(m) || t.dst(dm) != d.image_dst(m)) {
      out.push_back("image of " + s.morphism_id(m) + " (" + t.morphism_id(dm) + ") has wrong endpoints");
    }
  }
  if (!out.empty()) return out;
  for (ObjectIndex x = 0; x < s.object_count(); ++x) {
    if (d.morphisms[s.identity(x)] != t.identity(d.objects[x])) {
      out.push_back("image of identity of " + s.object_id(x) + " is not an identity");
    }
  }
  for (MorphismIndex g = 0; g < s.morphism_count(); ++g) {
    for (MorphismIndex h = 0; h < s.morphism_count(); ++h) {
      if (s.dst(h) != s.src(g)) continue;
      const MorphismIndex gh = s.table_entry(g, h);
      if (gh == FinCategory::npos) continue;
      const MorphismIndex expected = d.variance == Variance::covariant
                                         ? t.table_entry(d.morphisms[g], d.morphisms[h])
                                         : t.table_entry(d.morphisms[h], d.morphisms[g]);
      if (expected != d.morphisms[gh]) {
        out.push_back("composition " + s.morphism_id(g) + " o " + s.morphism_id(h) + " not preserved");
      }
    }
  }
  return out;
}

void require_functorial(const Diagram& d) {
  const auto v = diagram_violations(d);
  if (!v.empty()) throw LawError("diagram is not a functor: " + v.front());
}

Diagram compose(const CatFunctor& f, const Diagram& d) {
  Diagram out{d.shape, d.variance, f.target, {}, {}};
  for (ObjectIndex x : d.objects) out.objects.push_back(f.on_objects.at(x));
  for (MorphismIndex m : d.morphisms) out.morphisms.push_back(f.on_morphisms.at(m));
  return out;
}

}  // namespace catlim
