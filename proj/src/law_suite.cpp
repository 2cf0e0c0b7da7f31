#include "catlim/law_suite.hpp"

#include <functional>
#include <map>

namespace catlim {

PresheafDiagram random_presheaf_diagram(Rng& rng, const CategoryRef& base, Variance base_variance,
                                        const ShapeKind& shape, std::size_t max_size, const Caps& caps) {
  const CategoryRef s = share(build_shape(shape));
  for (;;) {
    PresheafDiagram d{base, base_variance, s, Variance::covariant, {}, {}};
    for (ObjectIndex i = 0; i < s->object_count(); ++i) {
      d.nodes.push_back(random_set_functor(rng, base, base_variance, max_size));
    }
    bool ok = true;
    for (MorphismIndex m = 0; m < s->morphism_count() && ok; ++m) {
      if (s->is_identity(m)) {
        d.edges.push_back(identity_nat_trans(d.nodes[s->src(m)]));
        continue;
      }
      const auto all = enumerate_nat_trans(d.nodes[s->src(m)], d.nodes[s->dst(m)], caps);
      if (all.empty()) {
        ok = false;
      } else {
        d.edges.push_back(all[rng.below(all.size())]);
      }
    }
    if (ok) return d;
  }
}

std::vector<Diagram> poset_diagrams(const CategoryRef& poset, const ShapeKind& shape) {
  const std::size_t n = poset->object_count();
  auto leq = [&](ObjectIndex a, ObjectIndex b) { return !poset->hom(a, b).empty(); };
  auto arrow = [&](ObjectIndex a, ObjectIndex b) { return poset->hom(a, b).front(); };
  std::vector<Diagram> out;
  switch (shape.tag()) {
    case ShapeKind::Tag::discrete: {
      std::vector<ObjectIndex> pick;
      std::function<void(ObjectIndex)> rec = [&](ObjectIndex from) {
        if (pick.size() == shape.size()) {
          out.push_back(make_diagram(poset, shape, pick));
          return;
        }
        for (ObjectIndex x = from; x < n; ++x) {
          pick.push_back(x);
          rec(x + 1);
          pick.pop_back();
        }
      };
      rec(0);
      break;
    }
    case ShapeKind::Tag::parallel_pair:
      for (ObjectIndex a = 0; a < n; ++a) {
        for (ObjectIndex b = 0; b < n; ++b) {
          if (leq(a, b)) out.push_back(make_diagram(poset, shape, {a, b}, {arrow(a, b), arrow(a, b)}));
        }
      }
      break;
    case ShapeKind::Tag::cospan:
    case ShapeKind::Tag::span: {
      const bool co = shape.tag() == ShapeKind::Tag::cospan;
      for (ObjectIndex a = 0; a < n; ++a) {
        for (ObjectIndex b = a + 1; b < n; ++b) {
          for (ObjectIndex c = 0; c < n; ++c) {
            if (co && leq(a, c) && leq(b, c)) {
              out.push_back(make_diagram(poset, shape, {a, b, c}, {arrow(a, c), arrow(b, c)}));
            } else if (!co && leq(c, a) && leq(c, b)) {
              out.push_back(make_diagram(poset, shape, {a, b, c}, {arrow(c, a), arrow(c, b)}));
            }
          }
        }
      }
      break;
    }
    case ShapeKind::Tag::custom:
      throw StructuralError("poset_diagrams needs a named shape");
  }
  return out;
}

std::optional<Diagram> random_diagram(Rng& rng, const CategoryRef& cat, const ShapeKind& shape) {
  const std::size_t n = cat->object_count();
  if (shape.tag() == ShapeKind::Tag::discrete) {
    std::vector<ObjectIndex> objects;
    for (std::size_t i = 0; i < shape.size(); ++i) objects.push_back(rng.below(n));
    return make_diagram(cat, shape, objects);
  }
  if (shape.tag() == ShapeKind::Tag::custom) throw StructuralError("random_diagram needs a named shape");
  const MorphismIndex m1 = rng.below(cat->morphism_count());
  std::vector<MorphismIndex> second;
  for (MorphismIndex m = 0; m < cat->morphism_count(); ++m) {
    const bool fits = shape.tag() == ShapeKind::Tag::parallel_pair
                          ? cat->src(m) == cat->src(m1) && cat->dst(m) == cat->dst(m1)
                          : shape.tag() == ShapeKind::Tag::cospan ? cat->dst(m) == cat->dst(m1)
                                                                  : cat->src(m) == cat->src(m1);
    if (fits) second.push_back(m);
  }
  const MorphismIndex m2 = second[rng.below(second.size())];
  switch (shape.tag()) {
    case ShapeKind::Tag::parallel_pair:
      return make_diagram(cat, shape, {cat->src(m1), cat->dst(m1)}, {m1, m2});
    case ShapeKind::Tag::cospan:
      return make_diagram(cat, shape, {cat->src(m1), cat->src(m2), cat->dst(m1)}, {m1, m2});
    default:
      return make_diagram(cat, shape, {cat->dst(m1), cat->dst(m2), cat->src(m1)}, {m1, m2});
  }
}

const std::vector<std::string>& law_ids() {
  static const std::vector<std::string> ids{
      "yoneda",      "hom_lim",          "indlim_hom",          "prolim_hom",
      "otherside_hom", "adjunction",     "adjoint_preserves_lim", "representable_colim",
      "yoneda_extension", "yoneda_extension_colim", "preservation", "reflection",
      "yoneda_preserves_lim"};
  return ids;
}

namespace {

const CategoryBounds small_categories{3, 9};

// Lattices for most instances, with an occasional plain poset so that
// missing (co)limits are exercised too.
CategoryRef poset_instance(Rng& rng, const SuiteBounds& b, std::size_t k) {
  if (k % 3 == 2) return share(random_poset(rng, std::min<std::size_t>(b.max_objects, 5), 40));
  return share(random_lattice(rng, b.max_objects));
}

struct JoinAdjunction {
  AdjunctionWitness witness;
  CategoryRef up;
};

// L x = x v a into the up-set of a, right adjoint to the inclusion.
std::optional<JoinAdjunction> join_adjunction(const CategoryRef& c, ObjectIndex a) {
  const CatFunctor incl = upset_inclusion(c, a);
  std::vector<ObjectIndex> objects;
  for (ObjectIndex x = 0; x < c->object_count(); ++x) {
    const auto j = poset_join(*c, x, a);
    if (!j) return std::nullopt;
    objects.push_back(incl.source->object(c->object_id(*j)));
  }
  const CatFunctor left = poset_functor(c, incl.source, objects);
  auto w = poset_adjunction(left, incl);
  if (!w) return std::nullopt;
  return JoinAdjunction{*w, incl.source};
}

void append(std::vector<LawReport>& out, LawReport r, std::size_t k) {
  r.instance = "#" + std::to_string(k) + " " + r.instance;
  out.push_back(std::move(r));
}

const std::vector<ShapeKind>& limit_shapes(LimitKind kind) {
  static const std::vector<ShapeKind> proj{ShapeKind::discrete(2), ShapeKind::cospan(), ShapeKind::parallel_pair()};
  static const std::vector<ShapeKind> ind{ShapeKind::discrete(2), ShapeKind::span(), ShapeKind::parallel_pair()};
  return kind == LimitKind::projective ? proj : ind;
}

constexpr LimitKind both_kinds[] = {LimitKind::projective, LimitKind::inductive};

}  // namespace

std::vector<LawReport> run_generated(const std::string& law, std::uint64_t seed, const SuiteBounds& b) {
  Rng rng(seed);
  std::vector<LawReport> out;
  const Caps& caps = default_caps();
  for (std::size_t k = 0; k < b.instances; ++k) {
    if (law == "yoneda") {
      const CategoryRef c = share(random_category(rng, small_categories));
      for (Variance v : {Variance::contravariant, Variance::covariant}) {
        const SetPresheaf a = random_set_functor(rng, c, v, 2);
        for (ObjectIndex x = 0; x < c->object_count(); ++x) append(out, check_yoneda(c, x, a, caps), k);
      }
    } else if (law == "hom_lim") {
      const CategoryRef c = poset_instance(rng, b, k);
      for (LimitKind kind : both_kinds) {
        for (const ShapeKind& shape : limit_shapes(kind)) {
          for (const Diagram& d : poset_diagrams(c, shape)) {
            const ObjectIndex x = rng.below(c->object_count());
            append(out, check_hom_lim(d, x, kind, caps), k);
          }
        }
      }
    } else if (law == "indlim_hom" || law == "prolim_hom") {
      const bool ind = law == "indlim_hom";
      const Variance v = ind ? Variance::contravariant : Variance::covariant;
      const CategoryRef c = share(random_category(rng, small_categories));
      for (const ShapeKind& shape : {ShapeKind::discrete(1), ShapeKind::discrete(2), ShapeKind::parallel_pair()}) {
        const PresheafDiagram d = random_presheaf_diagram(rng, c, v, shape, 2, caps);
        const SetPresheaf a = random_set_functor(rng, c, v, 2);
        append(out, ind ? check_indlim_hom(d, a, caps) : check_prolim_hom(d, a, caps), k);
      }
    } else if (law == "otherside_hom") {
      const CategoryRef c = share(random_category(rng, small_categories));
      for (Variance v : {Variance::contravariant, Variance::covariant}) {
        for (const ShapeKind& shape : {ShapeKind::discrete(2), ShapeKind::parallel_pair()}) {
          const PresheafDiagram d = random_presheaf_diagram(rng, c, v, shape, 2, caps);
          for (ObjectIndex x = 0; x < c->object_count(); ++x) append(out, check_otherside_hom(d, x, caps), k);
        }
      }
    } else if (law == "adjunction") {
      const CategoryRef c = share(random_lattice(rng, b.max_objects));
      append(out, check_adjunction(identity_adjunction(share(random_category(rng, small_categories)))), k);
      for (ObjectIndex a = 0; a < c->object_count(); ++a) {
        if (const auto j = join_adjunction(c, a)) append(out, check_adjunction(j->witness), k);
      }
    } else if (law == "adjoint_preserves_lim") {
      const CategoryRef c = share(random_lattice(rng, b.max_objects));
      const ObjectIndex a = rng.below(c->object_count());
      const auto j = join_adjunction(c, a);
      if (!j) continue;
      for (const ShapeKind& shape : limit_shapes(LimitKind::projective)) {
        for (const Diagram& d : poset_diagrams(j->up, shape)) {
          append(out, check_adjoint_preserves_lim(j->witness, d, LimitKind::projective, caps), k);
        }
      }
      for (const ShapeKind& shape : limit_shapes(LimitKind::inductive)) {
        for (const Diagram& d : poset_diagrams(c, shape)) {
          append(out, check_adjoint_preserves_lim(j->witness, d, LimitKind::inductive, caps), k);
        }
      }
    } else if (law == "representable_colim") {
      const CategoryRef c = poset_instance(rng, b, k);
      std::vector<SetFunctor> functors{random_set_functor(rng, c, Variance::covariant, 2),
                                       yoneda_k(c, rng.below(c->object_count()))};
      for (const ShapeKind& shape : {ShapeKind::discrete(1), ShapeKind::discrete(2), ShapeKind::cospan(),
                                     ShapeKind::parallel_pair()}) {
        for (const Diagram& d : poset_diagrams(c, shape)) {
          append(out, check_representable_colim(d, functors[rng.below(functors.size())], caps), k);
        }
      }
    } else if (law == "yoneda_extension") {
      const CategoryRef c = share(random_category(rng, small_categories));
      const SetFunctor f = random_set_functor(rng, c, Variance::covariant, 2);
      for (ObjectIndex x = 0; x < c->object_count(); ++x) append(out, check_yoneda_extension(f, x, caps), k);
    } else if (law == "yoneda_extension_colim") {
      const CategoryRef c = share(random_category(rng, small_categories));
      const SetFunctor f = random_set_functor(rng, c, Variance::covariant, 2);
      for (const ShapeKind& shape :
           {ShapeKind::discrete(1), ShapeKind::discrete(2), ShapeKind::parallel_pair(), ShapeKind::span()}) {
        if (const auto d = random_diagram(rng, c, shape)) append(out, check_yoneda_extension_colim(f, *d, caps), k);
      }
    } else if (law == "preservation") {
      const CategoryRef c = share(random_lattice(rng, b.max_objects));
      const ObjectIndex a = rng.below(c->object_count());
      const auto j = join_adjunction(c, a);
      for (LimitKind kind : both_kinds) {
        for (const ShapeKind& shape : limit_shapes(kind)) {
          for (const Diagram& d : poset_diagrams(c, shape)) {
            append(out, check_preservation(identity_functor(c), d, kind, caps), k);
            if (j && kind == LimitKind::inductive) append(out, check_preservation(j->witness.left, d, kind, caps), k);
          }
        }
      }
    } else if (law == "reflection") {
      const CategoryRef c = poset_instance(rng, b, k);
      const CatFunctor incl = upset_inclusion(c, rng.below(c->object_count()));
      for (LimitKind kind : both_kinds) {
        for (const ShapeKind& shape : limit_shapes(kind)) {
          for (const Diagram& d : poset_diagrams(c, shape)) {
            append(out, check_reflection(identity_functor(c), d, kind, caps), k);
          }
          for (const Diagram& d : poset_diagrams(incl.source, shape)) {
            append(out, check_reflection(incl, d, kind, caps), k);
          }
        }
      }
    } else if (law == "yoneda_preserves_lim") {
      const CategoryRef c = poset_instance(rng, b, k);
      for (const ShapeKind& shape : limit_shapes(LimitKind::projective)) {
        for (const Diagram& d : poset_diagrams(c, shape)) append(out, check_yoneda_preserves_lim(d, caps), k);
      }
    } else {
      throw StructuralError("unknown law '" + law + "'");
    }
  }
  return out;
}

}  // namespace catlim
