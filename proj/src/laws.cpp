#include "catlim/laws.hpp"

#include <algorithm>
#include <functional>
#include <limits>

#include "catlim/generate.hpp"

namespace catlim {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::not_applicable: return "not_applicable";
  }
  return "fails";
}

namespace {

constexpr std::size_t undefined = std::numeric_limits<std::size_t>::max();

std::size_t position_in(std::span<const MorphismIndex> hom, MorphismIndex m) {
  auto it = std::find(hom.begin(), hom.end(), m);
  if (it == hom.end()) throw LawError("morphism missing from its hom-set");
  return static_cast<std::size_t>(it - hom.begin());
}

FinSet hom_ids(const FinCategory& c, ObjectIndex x, ObjectIndex y) {
  FinSet s{"Hom(" + c.object_id(x) + "," + c.object_id(y) + ")", {}};
  for (MorphismIndex m : c.hom(x, y)) s.elements.push_back(c.morphism_id(m));
  return s;
}

// Index of the family with the given coordinates in a limit apex.
std::size_t family_index(const LimitResult& lim, const std::vector<std::size_t>& coords) {
  for (std::size_t e = 0; e < lim.apex.size(); ++e) {
    bool match = true;
    for (std::size_t i = 0; i < coords.size() && match; ++i) match = lim.legs[i](e) == coords[i];
    if (match) return e;
  }
  return undefined;
}

FinSet numbered(const std::string& id, std::size_t n, const std::string& prefix) {
  FinSet s{id, {}};
  for (std::size_t i = 0; i < n; ++i) s.elements.push_back(prefix + std::to_string(i));
  return s;
}

std::string object_list(const FinCategory& c, const std::vector<ObjectIndex>& xs) {
  std::string out;
  for (ObjectIndex x : xs) out += (out.empty() ? "" : ",") + c.object_id(x);
  return out;
}

std::string describe(const Diagram& d) {
  return d.shape->name() + "[" + object_list(*d.target, d.objects) + "]";
}

// Shape-side endpoints of the image arrow d(m): image_src lives over p,
// image_dst over q.
std::pair<ObjectIndex, ObjectIndex> arrow_ends(const Diagram& d, MorphismIndex m) {
  return d.variance == Variance::covariant ? std::pair{d.shape->src(m), d.shape->dst(m)}
                                           : std::pair{d.shape->dst(m), d.shape->src(m)};
}

// Cones (projective) or cocones (inductive) with the given apex, read off
// the hom tables: legs apex -> d_i, or d_i -> apex.
std::vector<std::vector<MorphismIndex>> brute_cones(const Diagram& d, ObjectIndex apex, LimitKind kind) {
  const FinCategory& c = *d.target;
  const std::size_t n = d.shape->object_count();
  std::vector<std::vector<MorphismIndex>> out;
  std::vector<MorphismIndex> legs(n);
  std::function<void(std::size_t)> extend = [&](std::size_t i) {
    if (i == n) {
      for (MorphismIndex m = 0; m < d.shape->morphism_count(); ++m) {
        const auto [p, q] = arrow_ends(d, m);
        const MorphismIndex a = d.morphisms[m];
        if (kind == LimitKind::projective ? c.compose(a, legs[p]) != legs[q] : c.compose(legs[q], a) != legs[p]) {
          return;
        }
      }
      out.push_back(legs);
      return;
    }
    const auto hom = kind == LimitKind::projective ? c.hom(apex, d.objects[i]) : c.hom(d.objects[i], apex);
    for (MorphismIndex u : hom) {
      legs[i] = u;
      extend(i + 1);
    }
  };
  extend(0);
  return out;
}

bool brute_universal(const Diagram& d, ObjectIndex apex, const std::vector<MorphismIndex>& legs, LimitKind kind) {
  const FinCategory& c = *d.target;
  for (ObjectIndex w = 0; w < c.object_count(); ++w) {
    for (const auto& other : brute_cones(d, w, kind)) {
      std::size_t mediators = 0;
      const auto hom = kind == LimitKind::projective ? c.hom(w, apex) : c.hom(apex, w);
      for (MorphismIndex u : hom) {
        bool ok = true;
        for (std::size_t i = 0; i < legs.size() && ok; ++i) {
          ok = (kind == LimitKind::projective ? c.compose(legs[i], u) : c.compose(u, legs[i])) == other[i];
        }
        mediators += ok;
      }
      if (mediators != 1) return false;
    }
  }
  return true;
}

struct BruteLimit {
  ObjectIndex apex;
  std::vector<MorphismIndex> legs;
};

std::optional<BruteLimit> brute_limit(const Diagram& d, LimitKind kind) {
  for (ObjectIndex x = 0; x < d.target->object_count(); ++x) {
    for (const auto& legs : brute_cones(d, x, kind)) {
      if (brute_universal(d, x, legs, kind)) return BruteLimit{x, legs};
    }
  }
  return std::nullopt;
}

std::string legs_text(const Diagram& d, const std::vector<MorphismIndex>& legs) {
  std::string out;
  for (std::size_t i = 0; i < legs.size(); ++i) {
    out += (i ? "," : "") + d.shape->object_id(i) + ":" + d.target->morphism_id(legs[i]);
  }
  return out;
}

// Universal cone or cocone extracted from a representation: the element
// id_P is carried by the iso into the (co)limit presheaf at P, whose
// coordinates are the legs.
struct RepresentedLimit {
  ObjectIndex apex;
  std::vector<MorphismIndex> legs;
};

std::optional<RepresentedLimit> represented_limit(const Diagram& d, LimitKind kind, const Caps& caps) {
  require_functorial(d);
  const FinCategory& c = *d.target;
  const bool proj = kind == LimitKind::projective;
  const SetPresheaf p = proj ? limit_presheaf(d) : colimit_presheaf(d);
  const auto rep = representability_search(p, caps);
  if (!rep) return std::nullopt;
  const ObjectIndex apex = rep->object;
  const std::size_t id_pos = position_in(c.hom(apex, apex), c.identity(apex));
  const std::size_t e = rep->iso.components[apex][id_pos];
  const PresheafDiagram lifted = proj ? lift_h(d) : lift_k(d);
  const LimitResult at = lim_matching_families(lifted.evaluate(apex));
  RepresentedLimit out{apex, {}};
  for (ObjectIndex i = 0; i < d.shape->object_count(); ++i) {
    const auto hom = proj ? c.hom(apex, d.objects[i]) : c.hom(d.objects[i], apex);
    out.legs.push_back(hom[at.legs[i](e)]);
  }
  return out;
}

SetDiagram postcompose(const SetFunctor& f, const Diagram& d) {
  SetDiagram out{d.shape, d.variance, {}, {}};
  for (ObjectIndex x : d.objects) out.values.push_back(f.values.at(x));
  for (MorphismIndex m : d.morphisms) out.actions.push_back(f.actions.at(m));
  return out;
}

// Builds a map on colimit classes from a map on tagged elements; classes
// whose members disagree map to `undefined`.
std::vector<std::size_t> map_on_classes(const LimitResult& colim_result, const SetDiagram& d,
                                        const std::function<std::size_t(ObjectIndex, std::size_t)>& on_element) {
  std::vector<std::size_t> out(colim_result.apex.size(), undefined);
  std::vector<bool> seen(out.size(), false);
  std::vector<bool> broken(out.size(), false);
  for (ObjectIndex i = 0; i < d.values.size(); ++i) {
    for (std::size_t x = 0; x < d.values[i].size(); ++x) {
      const std::size_t cls = colim_result.legs[i](x);
      const std::size_t v = on_element(i, x);
      if (seen[cls] && out[cls] != v) broken[cls] = true;
      seen[cls] = true;
      out[cls] = v;
    }
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (broken[k]) out[k] = undefined;
  }
  return out;
}

struct NatSet {
  FinSet names;
  std::vector<NatTrans> items;
  std::map<std::vector<std::vector<std::size_t>>, std::size_t> index;

  NatSet(const std::string& id, std::vector<NatTrans> all) : names(numbered(id, all.size(), "t")), items(std::move(all)) {
    for (std::size_t k = 0; k < items.size(); ++k) index.emplace(items[k].components, k);
  }
  std::size_t find(const NatTrans& t) const {
    auto it = index.find(t.components);
    return it == index.end() ? undefined : it->second;
  }
};

// Legs of the pointwise colimit of delta: per base object, per node.
std::vector<LimitResult> pointwise_colim_legs(const PresheafDiagram& delta) {
  std::vector<LimitResult> out;
  for (ObjectIndex z = 0; z < delta.base->object_count(); ++z) out.push_back(colim(delta.evaluate(z)));
  return out;
}

std::string instance_of(const PresheafDiagram& delta) {
  return delta.shape->name() + " diagram of " + std::to_string(delta.nodes.size()) + " functors over " +
         delta.base->name();
}

std::optional<std::size_t> first_size_mismatch(const SetPresheaf& a, const SetPresheaf& b) {
  for (ObjectIndex z = 0; z < a.values.size(); ++z) {
    if (a.values[z].size() != b.values[z].size()) return z;
  }
  return std::nullopt;
}

LawReport compare_presheaves(const std::string& law, const std::string& instance, const SetPresheaf& direct,
                             const SetPresheaf& limit, const std::string& apex, const Caps& caps) {
  LawReport r{law, instance, Verdict::holds, "", {}};
  if (find_natural_iso(direct, limit, caps)) {
    r.witness = "natural isomorphism at apex " + apex;
    return r;
  }
  r.verdict = Verdict::fails;
  r.counterexample["apex"] = apex;
  if (auto z = first_size_mismatch(direct, limit)) {
    r.counterexample["probe"] = direct.base->object_id(*z);
    r.counterexample["direct"] = std::to_string(direct.values[*z].size());
    r.counterexample["limit"] = std::to_string(limit.values[*z].size());
  }
  r.witness = "no natural isomorphism";
  return r;
}

}  // namespace

LawReport judge(const std::string& law, const std::string& instance, const Comparison& c) {
  LawReport r{law, instance, Verdict::holds, "", {}};
  std::vector<std::size_t> first(c.rhs.size(), undefined);
  for (std::size_t a = 0; a < c.map.size(); ++a) {
    const std::size_t b = c.map[a];
    if (b >= c.rhs.size()) {
      r.verdict = Verdict::fails;
      r.counterexample = {{"kind", "undefined"}, {"element", c.lhs.elements[a]}};
      return r;
    }
    if (first[b] != undefined) {
      r.verdict = Verdict::fails;
      r.counterexample = {{"kind", "collision"},
                          {"first", c.lhs.elements[first[b]]},
                          {"second", c.lhs.elements[a]},
                          {"image", c.rhs.elements[b]}};
      return r;
    }
    first[b] = a;
  }
  for (std::size_t b = 0; b < c.rhs.size(); ++b) {
    if (first[b] == undefined) {
      r.verdict = Verdict::fails;
      r.counterexample = {{"kind", "missed"}, {"element", c.rhs.elements[b]}};
      return r;
    }
  }
  r.witness = "bijection of " + std::to_string(c.lhs.size()) + " elements";
  return r;
}

std::optional<Comparison> hom_colim_comparison(const Diagram& alpha, ObjectIndex x, const Caps& caps) {
  const auto colim_alpha = represented_limit(alpha, LimitKind::inductive, caps);
  if (!colim_alpha) return std::nullopt;
  const FinCategory& c = *alpha.target;
  const LimitResult rhs = lim_matching_families(lift_k(alpha).evaluate(x));
  Comparison out{hom_ids(c, colim_alpha->apex, x), rhs.apex, {}};
  for (MorphismIndex u : c.hom(colim_alpha->apex, x)) {
    std::vector<std::size_t> coords;
    for (ObjectIndex i = 0; i < alpha.objects.size(); ++i) {
      coords.push_back(position_in(c.hom(alpha.objects[i], x), c.compose(u, colim_alpha->legs[i])));
    }
    out.map.push_back(family_index(rhs, coords));
  }
  return out;
}

std::optional<Comparison> hom_lim_comparison(const Diagram& beta, ObjectIndex x, const Caps& caps) {
  const auto lim_beta = represented_limit(beta, LimitKind::projective, caps);
  if (!lim_beta) return std::nullopt;
  const FinCategory& c = *beta.target;
  const LimitResult rhs = lim_matching_families(lift_h(beta).evaluate(x));
  Comparison out{hom_ids(c, x, lim_beta->apex), rhs.apex, {}};
  for (MorphismIndex u : c.hom(x, lim_beta->apex)) {
    std::vector<std::size_t> coords;
    for (ObjectIndex i = 0; i < beta.objects.size(); ++i) {
      coords.push_back(position_in(c.hom(x, beta.objects[i]), c.compose(lim_beta->legs[i], u)));
    }
    out.map.push_back(family_index(rhs, coords));
  }
  return out;
}

LawReport check_hom_lim(const Diagram& d, ObjectIndex x, LimitKind kind, const Caps& caps) {
  const bool proj = kind == LimitKind::projective;
  const std::string instance = (proj ? "Hom(" + d.target->object_id(x) + ", lim " : "Hom(colim ") + describe(d) +
                               (proj ? ")" : ", " + d.target->object_id(x) + ")");
  const auto c = proj ? hom_lim_comparison(d, x, caps) : hom_colim_comparison(d, x, caps);
  if (!c) return LawReport{"hom_lim", instance, Verdict::not_applicable, "limit not representable", {}};
  return judge("hom_lim", instance, *c);
}

AsymmetryProbe probe_wrong_side(const Diagram& d, ObjectIndex x, LimitKind kind, const Caps& caps) {
  AsymmetryProbe out;
  const auto lim = represented_limit(d, kind, caps);
  if (!lim) {
    out.detail = "limit not representable";
    return out;
  }
  const FinCategory& c = *d.target;
  out.applicable = true;
  if (kind == LimitKind::inductive) {
    out.direct = c.hom(x, lim->apex).size();
    out.combined = colim(lift_h(d).evaluate(x)).apex.size();
    out.detail = "|Hom(" + c.object_id(x) + ", colim)| = " + std::to_string(out.direct) + ", |colim Hom(" +
                 c.object_id(x) + ", alpha)| = " + std::to_string(out.combined);
  } else {
    out.direct = c.hom(lim->apex, x).size();
    out.combined = colim(lift_k(d).evaluate(x)).apex.size();
    out.detail = "|Hom(lim, " + c.object_id(x) + ")| = " + std::to_string(out.direct) + ", |colim Hom(beta, " +
                 c.object_id(x) + ")| = " + std::to_string(out.combined);
  }
  out.differs = out.direct != out.combined;
  return out;
}

Comparison nat_out_of_colim_comparison(const PresheafDiagram& delta, const SetPresheaf& a, const Caps& caps) {
  const SetPresheaf total = pointwise_colim(delta);
  const std::vector<LimitResult> legs = pointwise_colim_legs(delta);
  const NatSet lhs("Nat(colim,A)", enumerate_nat_trans(total, a, caps));

  std::vector<NatSet> per_node;
  for (ObjectIndex i = 0; i < delta.nodes.size(); ++i) {
    per_node.emplace_back("Nat(" + delta.shape->object_id(i) + ",A)", enumerate_nat_trans(delta.nodes[i], a, caps));
  }
  // i -> Nat(delta_i, A), contravariant in the edges: theta -> theta o delta(m).
  SetDiagram homs{delta.shape, flip(delta.variance), {}, {}};
  for (const NatSet& s : per_node) homs.values.push_back(s.names);
  for (MorphismIndex m = 0; m < delta.shape->morphism_count(); ++m) {
    const ObjectIndex from = delta.edge_src(m), to = delta.edge_dst(m);
    FinFunction act{per_node[to].names, per_node[from].names, {}};
    for (const NatTrans& theta : per_node[to].items) act.table.push_back(per_node[from].find(compose(theta, delta.edges[m])));
    homs.actions.push_back(std::move(act));
  }
  const LimitResult rhs = lim_matching_families(homs);

  Comparison out{lhs.names, rhs.apex, {}};
  for (const NatTrans& theta : lhs.items) {
    std::vector<std::size_t> coords;
    for (ObjectIndex i = 0; i < delta.nodes.size(); ++i) {
      NatTrans iota;
      for (const LimitResult& at : legs) iota.components.push_back(at.legs[i].table);
      coords.push_back(per_node[i].find(compose(theta, iota)));
    }
    out.map.push_back(family_index(rhs, coords));
  }
  return out;
}

LawReport check_indlim_hom(const PresheafDiagram& alpha, const SetPresheaf& a, const Caps& caps) {
  return judge("indlim_hom", "Hom(colim, A) for " + instance_of(alpha), nat_out_of_colim_comparison(alpha, a, caps));
}

LawReport check_prolim_hom(const PresheafDiagram& beta, const SetPresheaf& b, const Caps& caps) {
  return judge("prolim_hom", "Hom(B, lim) for " + instance_of(beta), nat_out_of_colim_comparison(beta, b, caps));
}

Comparison nat_into_colim_comparison(const PresheafDiagram& delta, ObjectIndex x, const Caps& caps) {
  const SetPresheaf y = yoneda(delta.base, x, delta.base_variance);
  const SetPresheaf total = pointwise_colim(delta);
  const std::vector<LimitResult> legs = pointwise_colim_legs(delta);
  const NatSet rhs("Nat(y,colim)", enumerate_nat_trans(y, total, caps));

  std::vector<NatSet> per_node;
  for (ObjectIndex i = 0; i < delta.nodes.size(); ++i) {
    per_node.emplace_back("Nat(y," + delta.shape->object_id(i) + ")", enumerate_nat_trans(y, delta.nodes[i], caps));
  }
  SetDiagram homs{delta.shape, delta.variance, {}, {}};
  for (const NatSet& s : per_node) homs.values.push_back(s.names);
  for (MorphismIndex m = 0; m < delta.shape->morphism_count(); ++m) {
    const ObjectIndex from = delta.edge_src(m), to = delta.edge_dst(m);
    FinFunction act{per_node[from].names, per_node[to].names, {}};
    for (const NatTrans& theta : per_node[from].items) act.table.push_back(per_node[to].find(compose(delta.edges[m], theta)));
    homs.actions.push_back(std::move(act));
  }
  const LimitResult lhs = colim(homs);
  std::vector<NatTrans> iota(delta.nodes.size());
  for (ObjectIndex i = 0; i < delta.nodes.size(); ++i) {
    for (const LimitResult& at : legs) iota[i].components.push_back(at.legs[i].table);
  }
  Comparison out{lhs.apex, rhs.names, {}};
  out.map = map_on_classes(lhs, homs, [&](ObjectIndex i, std::size_t t) {
    return rhs.find(compose(iota[i], per_node[i].items[t]));
  });
  return out;
}

LawReport check_otherside_hom(const PresheafDiagram& delta, ObjectIndex x, const Caps& caps) {
  return judge("otherside_hom", "Hom(" + delta.base->object_id(x) + ", colim) for " + instance_of(delta),
               nat_into_colim_comparison(delta, x, caps));
}

AdjunctionWitness identity_adjunction(const CategoryRef& cat) {
  AdjunctionWitness w{identity_functor(cat), identity_functor(cat), {}};
  const std::size_t n = cat->object_count();
  w.bijections.assign(n, std::vector<std::vector<std::size_t>>(n));
  for (ObjectIndex x = 0; x < n; ++x) {
    for (ObjectIndex y = 0; y < n; ++y) {
      auto& b = w.bijections[x][y];
      b.resize(cat->hom(x, y).size());
      for (std::size_t k = 0; k < b.size(); ++k) b[k] = k;
    }
  }
  return w;
}

CatFunctor poset_functor(const CategoryRef& source, const CategoryRef& target, const std::vector<ObjectIndex>& objects) {
  CatFunctor f{source, target, objects, {}};
  for (MorphismIndex m = 0; m < source->morphism_count(); ++m) {
    const auto hom = target->hom(objects.at(source->src(m)), objects.at(source->dst(m)));
    if (hom.empty()) {
      throw LawError("object map is not monotone at " + source->morphism_id(m));
    }
    f.on_morphisms.push_back(hom.front());
  }
  return f;
}

CatFunctor constant_functor(const CategoryRef& source, const CategoryRef& target, ObjectIndex object) {
  return CatFunctor{source, target, std::vector<ObjectIndex>(source->object_count(), object),
                    std::vector<MorphismIndex>(source->morphism_count(), target->identity(object))};
}

std::optional<AdjunctionWitness> poset_adjunction(const CatFunctor& left, const CatFunctor& right) {
  const FinCategory& c = *left.source;
  const FinCategory& d = *left.target;
  AdjunctionWitness w{left, right, {}};
  w.bijections.assign(c.object_count(), std::vector<std::vector<std::size_t>>(d.object_count()));
  for (ObjectIndex x = 0; x < c.object_count(); ++x) {
    for (ObjectIndex y = 0; y < d.object_count(); ++y) {
      const std::size_t a = d.hom(left.on_objects[x], y).size();
      const std::size_t b = c.hom(x, right.on_objects[y]).size();
      if (a != b) return std::nullopt;
      if (a == 1) w.bijections[x][y] = {0};
    }
  }
  return w;
}

CatFunctor upset_inclusion(const CategoryRef& poset, ObjectIndex a) {
  std::vector<ObjectIndex> members;
  std::vector<std::string> names;
  for (ObjectIndex y = 0; y < poset->object_count(); ++y) {
    if (!poset->hom(a, y).empty()) {
      members.push_back(y);
      names.push_back(poset->object_id(y));
    }
  }
  const CategoryRef up = share(make_poset("up(" + poset->object_id(a) + ")", names, [&](std::size_t i, std::size_t j) {
    return !poset->hom(members[i], members[j]).empty();
  }));
  std::vector<ObjectIndex> objects;
  for (ObjectIndex y = 0; y < up->object_count(); ++y) objects.push_back(poset->object(up->object_id(y)));
  return poset_functor(up, poset, objects);
}

std::optional<ObjectIndex> poset_join(const FinCategory& p, ObjectIndex a, ObjectIndex b) {
  for (ObjectIndex u = 0; u < p.object_count(); ++u) {
    if (p.hom(a, u).empty() || p.hom(b, u).empty()) continue;
    bool least = true;
    for (ObjectIndex v = 0; v < p.object_count() && least; ++v) {
      if (!p.hom(a, v).empty() && !p.hom(b, v).empty()) least = !p.hom(u, v).empty();
    }
    if (least) return u;
  }
  return std::nullopt;
}

std::optional<ObjectIndex> poset_meet(const FinCategory& p, ObjectIndex a, ObjectIndex b) {
  for (ObjectIndex u = 0; u < p.object_count(); ++u) {
    if (p.hom(u, a).empty() || p.hom(u, b).empty()) continue;
    bool greatest = true;
    for (ObjectIndex v = 0; v < p.object_count() && greatest; ++v) {
      if (!p.hom(v, a).empty() && !p.hom(v, b).empty()) greatest = !p.hom(v, u).empty();
    }
    if (greatest) return u;
  }
  return std::nullopt;
}

LawReport check_adjunction(const AdjunctionWitness& w) {
  const FinCategory& c = *w.left.source;
  const FinCategory& d = *w.left.target;
  const auto& L = w.left;
  const auto& R = w.right;
  LawReport r{"adjunction", "L: " + c.name() + " -> " + d.name(), Verdict::holds, "", {}};
  auto fail = [&](std::map<std::string, std::string> ce) {
    r.verdict = Verdict::fails;
    r.counterexample = std::move(ce);
    return r;
  };
  for (ObjectIndex x = 0; x < c.object_count(); ++x) {
    for (ObjectIndex y = 0; y < d.object_count(); ++y) {
      const auto& b = w.bijections.at(x).at(y);
      const std::size_t target = c.hom(x, R.on_objects[y]).size();
      std::vector<bool> hit(target, false);
      bool ok = b.size() == d.hom(L.on_objects[x], y).size();
      for (std::size_t v : b) {
        ok = ok && v < target && !hit[v];
        if (v < target) hit[v] = true;
      }
      ok = ok && std::all_of(hit.begin(), hit.end(), [](bool h) { return h; });
      if (!ok) return fail({{"kind", "bijection"}, {"x", c.object_id(x)}, {"y", d.object_id(y)}});
    }
  }
  // phi(g o u o L f) = R g o phi(u) o f for f: x2 -> x, g: y -> y2.
  std::size_t squares = 0;
  for (ObjectIndex x = 0; x < c.object_count(); ++x) {
    for (ObjectIndex y = 0; y < d.object_count(); ++y) {
      const auto hom_d = d.hom(L.on_objects[x], y);
      const auto hom_c = c.hom(x, R.on_objects[y]);
      for (std::size_t k = 0; k < hom_d.size(); ++k) {
        const MorphismIndex u = hom_d[k];
        const MorphismIndex phi_u = hom_c[w.bijections[x][y][k]];
        for (ObjectIndex x2 = 0; x2 < c.object_count(); ++x2) {
          for (MorphismIndex f : c.hom(x2, x)) {
            for (ObjectIndex y2 = 0; y2 < d.object_count(); ++y2) {
              for (MorphismIndex g : d.hom(y, y2)) {
                const MorphismIndex moved = d.compose(g, d.compose(u, L.on_morphisms[f]));
                const std::size_t pos = position_in(d.hom(L.on_objects[x2], y2), moved);
                const MorphismIndex lhs = c.hom(x2, R.on_objects[y2])[w.bijections[x2][y2][pos]];
                const MorphismIndex rhs = c.compose(R.on_morphisms[g], c.compose(phi_u, f));
                ++squares;
                if (lhs != rhs) {
                  return fail({{"kind", "naturality"},
                               {"x", c.object_id(x)},
                               {"y", d.object_id(y)},
                               {"f", c.morphism_id(f)},
                               {"g", d.morphism_id(g)},
                               {"u", d.morphism_id(u)},
                               {"lhs", c.morphism_id(lhs)},
                               {"rhs", c.morphism_id(rhs)}});
                }
              }
            }
          }
        }
      }
    }
  }
  r.witness = std::to_string(squares) + " naturality squares commute";
  return r;
}

namespace {

LawReport preservation_report(const std::string& law, const CatFunctor& f, const Diagram& d, LimitKind kind,
                              const Caps& caps) {
  const bool proj = kind == LimitKind::projective;
  const std::string instance = std::string(proj ? "lim " : "colim ") + describe(d) + " under " + f.source->name() +
                               " -> " + f.target->name();
  const auto lim = represented_limit(d, kind, caps);
  if (!lim) return LawReport{law, instance, Verdict::not_applicable, "limit does not exist in the source", {}};
  const ObjectIndex image = f.on_objects[lim->apex];
  const Diagram fd = compose(f, d);
  const SetPresheaf direct = proj ? yoneda_h(f.target, image) : yoneda_k(f.target, image);
  const SetPresheaf limit = proj ? limit_presheaf(fd) : colimit_presheaf(fd);
  return compare_presheaves(law, instance, direct, limit, f.target->object_id(image), caps);
}

}  // namespace

LawReport check_adjoint_preserves_lim(const AdjunctionWitness& w, const Diagram& d, LimitKind kind,
                                      const Caps& caps) {
  const LawReport adj = check_adjunction(w);
  if (adj.verdict != Verdict::holds) {
    return LawReport{"adjoint_preserves_lim", describe(d), Verdict::not_applicable, "witness is not an adjunction", {}};
  }
  return preservation_report("adjoint_preserves_lim", kind == LimitKind::projective ? w.right : w.left, d, kind, caps);
}

std::optional<Comparison> representable_colim_comparison(const Diagram& alpha, const SetFunctor& f, const Caps& caps) {
  require_functorial(alpha);
  const FinCategory& c = *alpha.target;
  const SetPresheaf formal = ind_lim(alpha);
  const auto rep = representability_search(formal, caps);
  if (!rep) return std::nullopt;
  const ObjectIndex x = rep->object;
  const PresheafDiagram lifted = lift_h(alpha);
  // c_i in Hom(alpha_i, X) is the preimage under the iso of the class of
  // (i, id) in the formal colimit at alpha_i.
  std::vector<MorphismIndex> cocone;
  for (ObjectIndex i = 0; i < alpha.objects.size(); ++i) {
    const ObjectIndex ai = alpha.objects[i];
    const LimitResult at = colim(lifted.evaluate(ai));
    const std::size_t cls = at.legs[i](position_in(c.hom(ai, ai), c.identity(ai)));
    const auto& comp = rep->iso.components[ai];
    const auto it = std::find(comp.begin(), comp.end(), cls);
    cocone.push_back(c.hom(ai, x)[static_cast<std::size_t>(it - comp.begin())]);
  }
  const SetDiagram fa = postcompose(f, alpha);
  const LimitResult lhs = colim(fa);
  Comparison out{lhs.apex, f.values[x], {}};
  out.map = map_on_classes(lhs, fa, [&](ObjectIndex i, std::size_t e) { return f.actions[cocone[i]](e); });
  return out;
}

LawReport check_representable_colim(const Diagram& alpha, const SetFunctor& f, const Caps& caps) {
  const std::string instance = "colim F o " + describe(alpha);
  const auto c = representable_colim_comparison(alpha, f, caps);
  if (!c) return LawReport{"representable_colim", instance, Verdict::not_applicable, "formal colimit not representable", {}};
  return judge("representable_colim", instance, *c);
}

Comparison yoneda_extension_comparison(const SetFunctor& f, ObjectIndex x, const Caps& caps) {
  const CategoryRef& c = f.base;
  const SetPresheaf hx = yoneda_h(c, x);
  const ElementsCategory el = category_of_elements(hx, caps);
  SetDiagram d{el.category, Variance::covariant, {}, {}};
  for (ObjectIndex o = 0; o < el.category->object_count(); ++o) d.values.push_back(f.values[el.projection.on_objects[o]]);
  for (MorphismIndex m = 0; m < el.category->morphism_count(); ++m) {
    d.actions.push_back(f.actions[el.projection.on_morphisms[m]]);
  }
  const LimitResult ext = colim(d);
  const std::string terminal = "(" + c->object_id(x) + "," + c->morphism_id(c->identity(x)) + ")";
  const ObjectIndex o = el.category->object(terminal);
  return Comparison{f.values[x], ext.apex, ext.legs[o].table};
}

LawReport check_yoneda_extension(const SetFunctor& f, ObjectIndex x, const Caps& caps) {
  if (f.variance != Variance::covariant) {
    throw UnsupportedTargetError("Yoneda extension needs a covariant functor into finite sets");
  }
  return judge("yoneda_extension", "F(" + f.base->object_id(x) + ") against F~(h(" + f.base->object_id(x) + "))",
               yoneda_extension_comparison(f, x, caps));
}

LawReport check_yoneda_extension_colim(const SetFunctor& f, const Diagram& alpha, const Caps& caps) {
  const FinSet ext = yoneda_extension(f, ind_lim(alpha), caps);
  const LimitResult direct = colim(postcompose(f, alpha));
  LawReport r{"yoneda_extension_colim", "F~(colim " + describe(alpha) + ")", Verdict::holds, "", {}};
  if (ext.size() == direct.apex.size()) {
    r.witness = "both sides have " + std::to_string(ext.size()) + " elements";
  } else {
    r.verdict = Verdict::fails;
    r.counterexample = {{"kind", "cardinality"},
                        {"extension", std::to_string(ext.size())},
                        {"colimit", std::to_string(direct.apex.size())}};
  }
  return r;
}

LawReport check_yoneda(const CategoryRef& cat, ObjectIndex x, const SetPresheaf& a, const Caps& caps) {
  const YonedaCheck y = yoneda_check(cat, x, a, caps);
  Comparison c{numbered("Nat", y.transformations, "t"), a.values[x], y.image};
  return judge("yoneda", "Hom(y(" + cat->object_id(x) + "), A)", c);
}

LawReport check_preservation(const CatFunctor& f, const Diagram& d, LimitKind kind, const Caps& caps) {
  return preservation_report("preservation", f, d, kind, caps);
}

LawReport check_reflection(const CatFunctor& f, const Diagram& d, LimitKind kind, const Caps&) {
  require_functorial(d);
  const Diagram fd = compose(f, d);
  LawReport r{"reflection",
              std::string(kind == LimitKind::projective ? "lim " : "colim ") + describe(d) + " under " +
                  f.source->name() + " -> " + f.target->name(),
              Verdict::holds, "", {}};
  std::size_t reflected = 0;
  for (ObjectIndex x = 0; x < d.target->object_count(); ++x) {
    for (const auto& legs : brute_cones(d, x, kind)) {
      std::vector<MorphismIndex> image;
      for (MorphismIndex u : legs) image.push_back(f.on_morphisms[u]);
      if (!brute_universal(fd, f.on_objects[x], image, kind)) continue;
      ++reflected;
      if (!brute_universal(d, x, legs, kind)) {
        r.verdict = Verdict::fails;
        r.counterexample = {{"apex", d.target->object_id(x)}, {"legs", legs_text(d, legs)}};
        return r;
      }
    }
  }
  r.witness = std::to_string(reflected) + " cones with universal image, all universal";
  return r;
}

LawReport check_yoneda_preserves_lim(const Diagram& beta, const Caps& caps) {
  require_functorial(beta);
  const std::string instance = "h(lim " + describe(beta) + ")";
  const auto lim = brute_limit(beta, LimitKind::projective);
  if (!lim) return LawReport{"yoneda_preserves_lim", instance, Verdict::not_applicable, "no limit in the category", {}};
  return compare_presheaves("yoneda_preserves_lim", instance, yoneda_h(beta.target, lim->apex), limit_presheaf(beta),
                            beta.target->object_id(lim->apex), caps);
}

Diagram make_diagram(const CategoryRef& target, const ShapeKind& shape, const std::vector<ObjectIndex>& objects,
                     const std::vector<MorphismIndex>& arrows) {
  const CategoryRef s = share(build_shape(shape));
  Diagram d{s, Variance::covariant, target, objects, {}};
  std::size_t next = 0;
  for (MorphismIndex m = 0; m < s->morphism_count(); ++m) {
    if (s->is_identity(m)) {
      d.morphisms.push_back(target->identity(objects.at(s->src(m))));
    } else {
      d.morphisms.push_back(arrows.at(next++));
    }
  }
  require_functorial(d);
  return d;
}

}  // namespace catlim
