#include "catlim/presheaf.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace catlim {

namespace {

std::size_t hom_position(const FinCategory& c, ObjectIndex x, ObjectIndex y, MorphismIndex m) {
  const auto hom = c.hom(x, y);
  auto it = std::find(hom.begin(), hom.end(), m);
  if (it == hom.end()) {
    throw LawError("composite " + c.morphism_id(m) + " is not in Hom(" + c.object_id(x) + ", " + c.object_id(y) + ")");
  }
  return static_cast<std::size_t>(it - hom.begin());
}

FinSet hom_set(const FinCategory& c, ObjectIndex x, ObjectIndex y) {
  FinSet s{"Hom(" + c.object_id(x) + "," + c.object_id(y) + ")", {}};
  for (MorphismIndex m : c.hom(x, y)) s.elements.push_back(c.morphism_id(m));
  return s;
}

}  // namespace

SetPresheaf yoneda_h(const CategoryRef& cat, ObjectIndex x) {
  const FinCategory& c = *cat;
  SetPresheaf h{cat, Variance::contravariant, {}, {}};
  for (ObjectIndex z = 0; z < c.object_count(); ++z) h.values.push_back(hom_set(c, z, x));
  for (MorphismIndex f = 0; f < c.morphism_count(); ++f) {
    // f: Z -> W acts Hom(W, X) -> Hom(Z, X), u -> u o f.
    const ObjectIndex z = c.src(f), w = c.dst(f);
    FinFunction a{h.values[w], h.values[z], {}};
    for (MorphismIndex u : c.hom(w, x)) a.table.push_back(hom_position(c, z, x, c.compose(u, f)));
    h.actions.push_back(std::move(a));
  }
  return h;
}

SetPresheaf yoneda_k(const CategoryRef& cat, ObjectIndex x) {
  const FinCategory& c = *cat;
  SetPresheaf k{cat, Variance::covariant, {}, {}};
  for (ObjectIndex z = 0; z < c.object_count(); ++z) k.values.push_back(hom_set(c, x, z));
  for (MorphismIndex f = 0; f < c.morphism_count(); ++f) {
    // f: Z -> W acts Hom(X, Z) -> Hom(X, W), u -> f o u.
    const ObjectIndex z = c.src(f), w = c.dst(f);
    FinFunction a{k.values[z], k.values[w], {}};
    for (MorphismIndex u : c.hom(x, z)) a.table.push_back(hom_position(c, x, w, c.compose(f, u)));
    k.actions.push_back(std::move(a));
  }
  return k;
}

SetPresheaf yoneda(const CategoryRef& cat, ObjectIndex x, Variance variance) {
  return variance == Variance::contravariant ? yoneda_h(cat, x) : yoneda_k(cat, x);
}

NatTrans yoneda_h_map(const CategoryRef& cat, MorphismIndex f) {
  const FinCategory& c = *cat;
  NatTrans t;
  for (ObjectIndex z = 0; z < c.object_count(); ++z) {
    std::vector<std::size_t> comp;
    for (MorphismIndex u : c.hom(z, c.src(f))) comp.push_back(hom_position(c, z, c.dst(f), c.compose(f, u)));
    t.components.push_back(std::move(comp));
  }
  return t;
}

NatTrans yoneda_k_map(const CategoryRef& cat, MorphismIndex f) {
  const FinCategory& c = *cat;
  NatTrans t;
  for (ObjectIndex z = 0; z < c.object_count(); ++z) {
    std::vector<std::size_t> comp;
    for (MorphismIndex u : c.hom(c.dst(f), z)) comp.push_back(hom_position(c, c.src(f), z, c.compose(u, f)));
    t.components.push_back(std::move(comp));
  }
  return t;
}

bool is_natural(const SetPresheaf& f, const SetPresheaf& g, const NatTrans& theta) {
  const FinCategory& c = *f.base;
  if (theta.components.size() != c.object_count()) return false;
  for (ObjectIndex x = 0; x < c.object_count(); ++x) {
    if (theta.components[x].size() != f.values[x].size()) return false;
    for (std::size_t v : theta.components[x]) {
      if (v >= g.values[x].size()) return false;
    }
  }
  for (MorphismIndex m = 0; m < c.morphism_count(); ++m) {
    const ObjectIndex a = f.action_src(m), b = f.action_dst(m);
    for (std::size_t e = 0; e < f.values[a].size(); ++e) {
      if (g.actions[m](theta.components[a][e]) != theta.components[b][f.actions[m](e)]) return false;
    }
  }
  return true;
}

bool is_natural_iso(const SetPresheaf& f, const SetPresheaf& g, const NatTrans& theta) {
  if (!is_natural(f, g, theta)) return false;
  for (ObjectIndex x = 0; x < f.values.size(); ++x) {
    if (!is_bijection(FinFunction{f.values[x], g.values[x], theta.components[x]})) return false;
  }
  return true;
}

NatTrans compose(const NatTrans& second, const NatTrans& first) {
  NatTrans out;
  for (std::size_t x = 0; x < first.components.size(); ++x) {
    std::vector<std::size_t> comp;
    for (std::size_t v : first.components[x]) comp.push_back(second.components[x][v]);
    out.components.push_back(std::move(comp));
  }
  return out;
}

NatTrans identity_nat_trans(const SetPresheaf& f) {
  NatTrans t;
  for (const FinSet& v : f.values) {
    std::vector<std::size_t> comp(v.size());
    std::iota(comp.begin(), comp.end(), std::size_t{0});
    t.components.push_back(std::move(comp));
  }
  return t;
}

namespace {

// Backtracking over base objects, one component at a time. Objects with
// fewer candidates go first; each naturality square is checked as soon as
// both of its components are fixed.
class ComponentSearch {
 public:
  ComponentSearch(const SetPresheaf& f, const SetPresheaf& g, std::vector<std::vector<std::vector<std::size_t>>> cands,
                  std::size_t budget)
      : f_(f), g_(g), candidates_(std::move(cands)), budget_(budget) {
    const FinCategory& c = *f.base;
    const std::size_t n = c.object_count();
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), ObjectIndex{0});
    std::stable_sort(order_.begin(), order_.end(), [&](ObjectIndex a, ObjectIndex b) {
      return candidates_[a].size() < candidates_[b].size();
    });
    std::vector<std::size_t> position(n);
    for (std::size_t p = 0; p < n; ++p) position[order_[p]] = p;
    checks_.resize(n);
    for (MorphismIndex m = 0; m < c.morphism_count(); ++m) {
      if (c.is_identity(m)) continue;
      checks_[std::max(position[f.action_src(m)], position[f.action_dst(m)])].push_back(m);
    }
    current_.components.resize(n);
  }

  void run(const std::function<bool(const NatTrans&)>& visit) {
    for (const auto& c : candidates_) {
      if (c.empty()) return;
    }
    stopped_ = false;
    extend(0, visit);
  }

 private:
  bool square_ok(MorphismIndex m) const {
    const ObjectIndex a = f_.action_src(m), b = f_.action_dst(m);
    const auto& ta = current_.components[a];
    const auto& tb = current_.components[b];
    const auto& fm = f_.actions[m].table;
    const auto& gm = g_.actions[m].table;
    for (std::size_t e = 0; e < ta.size(); ++e) {
      if (gm[ta[e]] != tb[fm[e]]) return false;
    }
    return true;
  }

  void extend(std::size_t p, const std::function<bool(const NatTrans&)>& visit) {
    if (p == order_.size()) {
      if (!visit(current_)) stopped_ = true;
      return;
    }
    const ObjectIndex x = order_[p];
    for (const auto& cand : candidates_[x]) {
      if (++nodes_ > budget_) {
        throw CapacityError("natural transformation search exceeded the budget of " + std::to_string(budget_) +
                            " partial assignments");
      }
      current_.components[x] = cand;
      bool ok = true;
      for (MorphismIndex m : checks_[p]) {
        if (!square_ok(m)) {
          ok = false;
          break;
        }
      }
      if (ok) extend(p + 1, visit);
      if (stopped_) return;
    }
  }

  const SetPresheaf& f_;
  const SetPresheaf& g_;
  std::vector<std::vector<std::vector<std::size_t>>> candidates_;
  std::vector<ObjectIndex> order_;
  std::vector<std::vector<MorphismIndex>> checks_;
  NatTrans current_;
  std::size_t budget_;
  std::size_t nodes_ = 0;
  bool stopped_ = false;
};

void require_compatible(const SetPresheaf& f, const SetPresheaf& g) {
  if (f.variance != g.variance) throw LawError("presheaves of different variance");
  if (f.base != g.base && !(*f.base == *g.base)) throw LawError("presheaves over different base categories");
}

}  // namespace

void for_each_nat_trans(const SetPresheaf& f, const SetPresheaf& g, const std::function<bool(const NatTrans&)>& visit,
                        const Caps& caps) {
  require_compatible(f, g);
  std::vector<std::vector<std::vector<std::size_t>>> cands(f.values.size());
  for (ObjectIndex x = 0; x < f.values.size(); ++x) {
    for_each_function(
        f.values[x], g.values[x],
        [&](const std::vector<std::size_t>& t) {
          cands[x].push_back(t);
          return true;
        },
        caps);
  }
  ComponentSearch(f, g, std::move(cands), caps.search_budget).run(visit);
}

std::vector<NatTrans> enumerate_nat_trans(const SetPresheaf& f, const SetPresheaf& g, const Caps& caps) {
  std::vector<NatTrans> out;
  for_each_nat_trans(
      f, g,
      [&](const NatTrans& t) {
        out.push_back(t);
        return true;
      },
      caps);
  return out;
}

std::vector<NatTrans> presheaf_homs(const SetPresheaf& a, const SetPresheaf& b, const Caps& caps) {
  return a.variance == Variance::contravariant ? enumerate_nat_trans(a, b, caps) : enumerate_nat_trans(b, a, caps);
}

YonedaCheck yoneda_check(const CategoryRef& cat, ObjectIndex x, const SetPresheaf& a, const Caps& caps) {
  YonedaCheck out;
  const SetPresheaf y = yoneda(cat, x, a.variance);
  const std::size_t id_pos = hom_position(*cat, x, x, cat->identity(x));
  for_each_nat_trans(
      y, a,
      [&](const NatTrans& t) {
        out.image.push_back(t.components[x][id_pos]);
        return true;
      },
      caps);
  out.transformations = out.image.size();
  std::vector<bool> hit(a.values[x].size(), false);
  bool injective = true;
  for (std::size_t v : out.image) {
    if (hit[v]) injective = false;
    hit[v] = true;
  }
  const bool surjective = std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
  out.ok = injective && surjective;
  if (!out.ok) {
    out.detail = std::to_string(out.transformations) + " transformations against " +
                 std::to_string(a.values[x].size()) + " elements at " + cat->object_id(x) +
                 (injective ? "" : "; evaluation at the identity is not injective") +
                 (surjective ? "" : "; evaluation at the identity is not surjective");
  }
  return out;
}

SetDiagram PresheafDiagram::evaluate(ObjectIndex z) const {
  SetDiagram d{shape, variance, {}, {}};
  for (const SetPresheaf& node : nodes) d.values.push_back(node.values.at(z));
  for (MorphismIndex m = 0; m < shape->morphism_count(); ++m) {
    d.actions.push_back(FinFunction{d.values[edge_src(m)], d.values[edge_dst(m)], edges.at(m).components.at(z)});
  }
  return d;
}

SetPresheaf pointwise_lim(const PresheafDiagram& d) {
  const FinCategory& c = *d.base;
  std::vector<LimitResult> at;
  for (ObjectIndex z = 0; z < c.object_count(); ++z) at.push_back(lim_matching_families(d.evaluate(z)));

  SetPresheaf out{d.base, d.base_variance, {}, {}};
  for (ObjectIndex z = 0; z < c.object_count(); ++z) {
    out.values.push_back(at[z].apex);
    out.values.back().id = "lim@" + c.object_id(z);
  }
  const std::size_t n = d.shape->object_count();
  for (MorphismIndex f = 0; f < c.morphism_count(); ++f) {
    const ObjectIndex a = out.action_src(f), b = out.action_dst(f);
    std::map<std::vector<std::size_t>, std::size_t> families;
    for (std::size_t e = 0; e < at[b].apex.size(); ++e) {
      std::vector<std::size_t> key(n);
      for (ObjectIndex i = 0; i < n; ++i) key[i] = at[b].legs[i](e);
      families.emplace(std::move(key), e);
    }
    FinFunction action{out.values[a], out.values[b], std::vector<std::size_t>(out.values[a].size())};
    for (std::size_t e = 0; e < at[a].apex.size(); ++e) {
      std::vector<std::size_t> key(n);
      for (ObjectIndex i = 0; i < n; ++i) key[i] = d.nodes[i].actions[f](at[a].legs[i](e));
      auto it = families.find(key);
      if (it == families.end()) {
        throw Error("pointwise limit: no mediating element for " + c.morphism_id(f) + " at '" +
                    at[a].apex.elements[e] + "'");
      }
      action.table[e] = it->second;
    }
    out.actions.push_back(std::move(action));
  }
  return out;
}

SetPresheaf pointwise_colim(const PresheafDiagram& d) {
  const FinCategory& c = *d.base;
  std::vector<LimitResult> at;
  for (ObjectIndex z = 0; z < c.object_count(); ++z) at.push_back(colim(d.evaluate(z)));

  SetPresheaf out{d.base, d.base_variance, {}, {}};
  for (ObjectIndex z = 0; z < c.object_count(); ++z) {
    out.values.push_back(at[z].apex);
    out.values.back().id = "colim@" + c.object_id(z);
  }
  const std::size_t n = d.shape->object_count();
  for (MorphismIndex f = 0; f < c.morphism_count(); ++f) {
    const ObjectIndex a = out.action_src(f), b = out.action_dst(f);
    FinFunction action{out.values[a], out.values[b], std::vector<std::size_t>(out.values[a].size())};
    std::vector<bool> seen(out.values[a].size(), false);
    for (ObjectIndex i = 0; i < n; ++i) {
      for (std::size_t x = 0; x < d.nodes[i].values[a].size(); ++x) {
        const std::size_t cls = at[a].legs[i](x);
        const std::size_t image = at[b].legs[i](d.nodes[i].actions[f](x));
        if (seen[cls] && action.table[cls] != image) {
          throw Error("pointwise colimit: induced action of " + c.morphism_id(f) + " is not well defined on '" +
                      at[a].apex.elements[cls] + "'");
        }
        seen[cls] = true;
        action.table[cls] = image;
      }
    }
    out.actions.push_back(std::move(action));
  }
  return out;
}

SetPresheaf presheaf_lim(const PresheafDiagram& d) {
  return d.base_variance == Variance::contravariant ? pointwise_lim(d) : pointwise_colim(d);
}

SetPresheaf presheaf_colim(const PresheafDiagram& d) {
  return d.base_variance == Variance::contravariant ? pointwise_colim(d) : pointwise_lim(d);
}

PresheafDiagram lift_h(const Diagram& d) {
  require_functorial(d);
  PresheafDiagram out{d.target, Variance::contravariant, d.shape, d.variance, {}, {}};
  for (ObjectIndex x : d.objects) out.nodes.push_back(yoneda_h(d.target, x));
  for (MorphismIndex m : d.morphisms) out.edges.push_back(yoneda_h_map(d.target, m));
  return out;
}

PresheafDiagram lift_k(const Diagram& d) {
  require_functorial(d);
  PresheafDiagram out{d.target, Variance::covariant, d.shape, flip(d.variance), {}, {}};
  for (ObjectIndex x : d.objects) out.nodes.push_back(yoneda_k(d.target, x));
  for (MorphismIndex m : d.morphisms) out.edges.push_back(yoneda_k_map(d.target, m));
  return out;
}

SetPresheaf ind_lim(const Diagram& alpha) { return presheaf_colim(lift_h(alpha)); }
SetPresheaf pro_lim(const Diagram& beta) { return presheaf_lim(lift_k(beta)); }
SetPresheaf limit_presheaf(const Diagram& beta) { return pointwise_lim(lift_h(beta)); }
SetPresheaf colimit_presheaf(const Diagram& alpha) { return pointwise_lim(lift_k(alpha)); }

std::optional<NatTrans> find_natural_iso(const SetPresheaf& f, const SetPresheaf& g, const Caps& caps) {
  require_compatible(f, g);
  const std::size_t n = f.values.size();
  std::vector<std::vector<std::vector<std::size_t>>> cands(n);
  for (ObjectIndex x = 0; x < n; ++x) {
    if (f.values[x].size() != g.values[x].size()) return std::nullopt;
  }
  for (ObjectIndex x = 0; x < n; ++x) {
    std::vector<std::size_t> perm(f.values[x].size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    do {
      cands[x].push_back(perm);
      if (cands[x].size() > caps.search_budget) {
        throw CapacityError("natural isomorphism search exceeded the budget of " + std::to_string(caps.search_budget) +
                            " partial assignments");
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  std::optional<NatTrans> found;
  ComponentSearch(f, g, std::move(cands), caps.search_budget).run([&](const NatTrans& t) {
    found = t;
    return false;
  });
  return found;
}

std::optional<Representation> representability_search(const SetPresheaf& a, const Caps& caps) {
  const CategoryRef& cat = a.base;
  for (ObjectIndex x = 0; x < cat->object_count(); ++x) {
    const SetPresheaf y = yoneda(cat, x, a.variance);
    if (auto iso = find_natural_iso(y, a, caps)) return Representation{x, std::move(*iso)};
  }
  return std::nullopt;
}

ElementsCategory category_of_elements(const SetPresheaf& a, const Caps& caps) {
  const FinCategory& c = *a.base;
  const bool contra = a.variance == Variance::contravariant;
  auto name = [&](ObjectIndex x, std::size_t e) { return "(" + c.object_id(x) + "," + a.values[x].elements[e] + ")"; };

  CategorySpec spec;
  spec.name = "el";
  for (ObjectIndex x = 0; x < c.object_count(); ++x) {
    for (std::size_t e = 0; e < a.values[x].size(); ++e) spec.objects.push_back(name(x, e));
  }
  if (spec.objects.size() > caps.max_objects) {
    throw CapacityError("category of elements has " + std::to_string(spec.objects.size()) + " objects, cap is " +
                        std::to_string(caps.max_objects));
  }
  // A morphism over f is determined by f and the element it is labelled
  // with: the element at dst(f) for contravariant A, at src(f) otherwise.
  auto arrow = [&](MorphismIndex f, std::size_t e) { return c.morphism_id(f) + "@" + std::to_string(e); };
  std::vector<std::tuple<MorphismIndex, std::size_t, std::string, std::string>> arrows;
  for (MorphismIndex f = 0; f < c.morphism_count(); ++f) {
    const ObjectIndex x = c.src(f), y = c.dst(f);
    if (contra) {
      for (std::size_t b = 0; b < a.values[y].size(); ++b) {
        arrows.emplace_back(f, b, name(x, a.actions[f](b)), name(y, b));
      }
    } else {
      for (std::size_t e = 0; e < a.values[x].size(); ++e) {
        arrows.emplace_back(f, e, name(x, e), name(y, a.actions[f](e)));
      }
    }
  }
  for (const auto& [f, e, s, t] : arrows) spec.morphisms.push_back({arrow(f, e), s, t});
  for (ObjectIndex x = 0; x < c.object_count(); ++x) {
    for (std::size_t e = 0; e < a.values[x].size(); ++e) spec.identities[name(x, e)] = arrow(c.identity(x), e);
  }
  for (const auto& [g, eg, gs, gt] : arrows) {
    for (const auto& [f, ef, fs, ft] : arrows) {
      if (ft != gs || c.is_identity(f) || c.is_identity(g)) continue;
      // Contravariant: (g@c) o (f@b) = (g o f)@c. Covariant: (g@b) o (f@a) = (g o f)@a.
      const std::size_t label = contra ? eg : ef;
      spec.compose.push_back({arrow(g, eg), arrow(f, ef), arrow(c.compose(g, f), label)});
    }
  }

  ElementsCategory out;
  out.category = share(FinCategory::from_spec(spec, caps));
  const FinCategory& el = *out.category;
  out.projection = CatFunctor{out.category, a.base, std::vector<ObjectIndex>(el.object_count()),
                              std::vector<MorphismIndex>(el.morphism_count())};
  out.elements.resize(el.object_count());
  for (ObjectIndex x = 0; x < c.object_count(); ++x) {
    for (std::size_t e = 0; e < a.values[x].size(); ++e) {
      const ObjectIndex o = el.object(name(x, e));
      out.projection.on_objects[o] = x;
      out.elements[o] = {x, e};
    }
  }
  for (const auto& [f, e, s, t] : arrows) out.projection.on_morphisms[el.morphism(arrow(f, e))] = f;
  return out;
}

FinSet yoneda_extension(const SetFunctor& f, const SetPresheaf& a, const Caps& caps) {
  if (f.variance != Variance::covariant) {
    throw UnsupportedTargetError("Yoneda extension needs a covariant functor into finite sets");
  }
  if (f.base != a.base && !(*f.base == *a.base)) throw LawError("functor and presheaf over different categories");
  const ElementsCategory el = category_of_elements(a, caps);
  SetDiagram d{el.category, Variance::covariant, {}, {}};
  for (ObjectIndex o = 0; o < el.category->object_count(); ++o) {
    d.values.push_back(f.values[el.projection.on_objects[o]]);
  }
  for (MorphismIndex m = 0; m < el.category->morphism_count(); ++m) {
    d.actions.push_back(f.actions[el.projection.on_morphisms[m]]);
  }
  FinSet out = a.variance == Variance::contravariant ? colim(d).apex : lim_matching_families(d).apex;
  out.id = "ext";
  return out;
}

}  // namespace catlim
