#include "catlim/finset.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "catlim/disjoint_sets.hpp"

namespace catlim {

std::optional<std::size_t> FinSet::find(std::string_view element) const {
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (elements[i] == element) return i;
  }
  return std::nullopt;
}

std::size_t FinSet::index(std::string_view element) const {
  if (auto i = find(element)) return *i;
  throw UnknownIdError("set '" + id + "' has no element '" + std::string(element) + "'");
}

FinSet make_set(std::string id, std::vector<std::string> elements) {
  std::vector<std::string> sorted = elements;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw StructuralError("set '" + id + "' has duplicate elements");
  }
  return FinSet{std::move(id), std::move(elements)};
}

FinSet point_set() { return FinSet{"pt", {"pt"}}; }

FinFunction make_function(const FinSet& source, const FinSet& target,
                          const std::map<std::string, std::string>& table) {
  FinFunction f{source, target, std::vector<std::size_t>(source.size(), 0)};
  for (const auto& [from, to] : table) {
    if (!source.find(from)) {
      throw StructuralError("function " + source.id + " -> " + target.id + ": '" + from + "' is not in the source");
    }
  }
  for (std::size_t i = 0; i < source.size(); ++i) {
    auto it = table.find(source.elements[i]);
    if (it == table.end()) {
      throw StructuralError("function " + source.id + " -> " + target.id + " is undefined on '" +
                            source.elements[i] + "'");
    }
    auto j = target.find(it->second);
    if (!j) {
      throw StructuralError("function " + source.id + " -> " + target.id + " sends '" + it->first +
                            "' outside the target ('" + it->second + "')");
    }
    f.table[i] = *j;
  }
  return f;
}

FinFunction identity_function(const FinSet& set) {
  FinFunction f{set, set, std::vector<std::size_t>(set.size())};
  std::iota(f.table.begin(), f.table.end(), std::size_t{0});
  return f;
}

FinFunction compose(const FinFunction& g, const FinFunction& f) {
  if (f.target.size() != g.source.size()) {
    throw EndpointError("cannot compose " + g.source.id + " -> " + g.target.id + " after " + f.source.id + " -> " +
                        f.target.id);
  }
  FinFunction out{f.source, g.target, std::vector<std::size_t>(f.source.size())};
  for (std::size_t i = 0; i < f.table.size(); ++i) out.table[i] = g.table[f.table[i]];
  return out;
}

FinFunction constant_function(const FinSet& source, const FinSet& target, std::size_t value) {
  if (value >= target.size()) throw EndpointError("constant value outside target '" + target.id + "'");
  return FinFunction{source, target, std::vector<std::size_t>(source.size(), value)};
}

bool is_bijection(const FinFunction& f) {
  if (f.source.size() != f.target.size()) return false;
  std::vector<bool> hit(f.target.size(), false);
  for (std::size_t v : f.table) {
    if (v >= hit.size() || hit[v]) return false;
    hit[v] = true;
  }
  return true;
}

bool same_table(const FinFunction& a, const FinFunction& b) { return a.table == b.table; }

std::vector<std::string> functor_law_violations(const SetFunctor& f) {
  std::vector<std::string> out;
  const FinCategory& c = *f.base;
  if (f.values.size() != c.object_count() || f.actions.size() != c.morphism_count()) {
    out.push_back("functor does not assign every object and morphism of '" + c.name() + "'");
    return out;
  }
  for (MorphismIndex m = 0; m < c.morphism_count(); ++m) {
    const FinFunction& a = f.actions[m];
    if (a.source.elements != f.values[f.action_src(m)].elements ||
        a.target.elements != f.values[f.action_dst(m)].elements || a.table.size() != a.source.size()) {
      out.push_back("action of " + c.morphism_id(m) + " has wrong source or target");
      continue;
    }
    for (std::size_t v : a.table) {
      if (v >= a.target.size()) {
        out.push_back("action of " + c.morphism_id(m) + " leaves its target");
        break;
      }
    }
  }
  if (!out.empty()) return out;
  for (ObjectIndex x = 0; x < c.object_count(); ++x) {
    const FinFunction& a = f.actions[c.identity(x)];
    for (std::size_t i = 0; i < a.table.size(); ++i) {
      if (a.table[i] != i) {
        out.push_back("identity of " + c.object_id(x) + " does not act as the identity");
        break;
      }
    }
  }
  for (MorphismIndex g = 0; g < c.morphism_count(); ++g) {
    for (MorphismIndex h = 0; h < c.morphism_count(); ++h) {
      if (c.dst(h) != c.src(g)) continue;
      const MorphismIndex gh = c.table_entry(g, h);
      if (gh == FinCategory::npos) continue;
      const FinFunction expected = f.variance == Variance::covariant ? compose(f.actions[g], f.actions[h])
                                                                     : compose(f.actions[h], f.actions[g]);
      if (expected.table != f.actions[gh].table) {
        out.push_back("action of " + c.morphism_id(g) + " o " + c.morphism_id(h) + " is not the composite action");
      }
    }
  }
  return out;
}

void require_functor_laws(const SetFunctor& f) {
  const auto v = functor_law_violations(f);
  if (!v.empty()) throw LawError("set-valued functor breaks functor laws: " + v.front());
}

SetFunctor point_functor(const CategoryRef& base, Variance variance) {
  SetFunctor pt{base, variance, {}, {}};
  pt.values.assign(base->object_count(), point_set());
  pt.actions.assign(base->morphism_count(), identity_function(point_set()));
  return pt;
}

std::string to_string(LimitKind kind) { return kind == LimitKind::projective ? "projective" : "inductive"; }

std::string encode_family(const FinCategory& shape, std::span<const std::string> coordinates) {
  std::string out = "(";
  for (ObjectIndex i = 0; i < coordinates.size(); ++i) {
    if (i) out += ", ";
    out += shape.object_id(i) + ":" + coordinates[i];
  }
  return out + ")";
}

std::string tag_element(const std::string& shape_object, const std::string& element) {
  return shape_object + ":" + element;
}

namespace {

// Builds a projective result from index tuples, sorted by encoding.
LimitResult families_to_result(const SetDiagram& d, std::vector<std::vector<std::size_t>> families) {
  const FinCategory& shape = *d.base;
  struct Row {
    std::string code;
    std::vector<std::size_t> tuple;
  };
  std::vector<Row> rows;
  rows.reserve(families.size());
  std::vector<std::string> coords(shape.object_count());
  for (auto& t : families) {
    for (ObjectIndex i = 0; i < t.size(); ++i) coords[i] = d.values[i].elements[t[i]];
    rows.push_back({encode_family(shape, coords), std::move(t)});
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.code < b.code; });

  LimitResult r;
  r.kind = LimitKind::projective;
  r.apex.id = "lim";
  for (const auto& row : rows) r.apex.elements.push_back(row.code);
  for (ObjectIndex i = 0; i < shape.object_count(); ++i) {
    FinFunction leg{r.apex, d.values[i], std::vector<std::size_t>(rows.size())};
    for (std::size_t k = 0; k < rows.size(); ++k) leg.table[k] = rows[k].tuple[i];
    r.legs.push_back(std::move(leg));
  }
  return r;
}

}  // namespace

LimitResult lim_matching_families(const SetDiagram& d) {
  require_functor_laws(d);
  const FinCategory& shape = *d.base;
  const std::size_t n = shape.object_count();

  // Constraints become checkable once the later of their two coordinates
  // is fixed.
  std::vector<std::vector<MorphismIndex>> checks(n);
  for (MorphismIndex m = 0; m < shape.morphism_count(); ++m) {
    if (shape.is_identity(m)) continue;
    checks[std::max(d.action_src(m), d.action_dst(m))].push_back(m);
  }

  std::vector<std::vector<std::size_t>> families;
  std::vector<std::size_t> tuple(n, 0);
  std::function<void(ObjectIndex)> extend = [&](ObjectIndex i) {
    if (i == n) {
      families.push_back(tuple);
      return;
    }
    for (std::size_t x = 0; x < d.values[i].size(); ++x) {
      tuple[i] = x;
      bool ok = true;
      for (MorphismIndex m : checks[i]) {
        if (d.actions[m](tuple[d.action_src(m)]) != tuple[d.action_dst(m)]) {
          ok = false;
          break;
        }
      }
      if (ok) extend(i + 1);
    }
  };
  extend(0);
  return families_to_result(d, std::move(families));
}

LimitResult lim_as_nat_trans(const SetDiagram& d, const Caps& caps) {
  require_functor_laws(d);
  const FinCategory& shape = *d.base;
  const std::size_t n = shape.object_count();
  const SetFunctor pt = point_functor(d.base, d.variance);

  std::vector<std::vector<FinFunction>> candidates(n);
  for (ObjectIndex i = 0; i < n; ++i) candidates[i] = enumerate_functions(pt.values[i], d.values[i], caps);

  std::vector<const FinFunction*> chosen(n, nullptr);
  std::vector<std::vector<std::size_t>> families;
  // Naturality square for m: D(m) o theta_from == theta_to o pt(m).
  auto square_commutes = [&](MorphismIndex m) {
    const FinFunction lhs = compose(d.actions[m], *chosen[d.action_src(m)]);
    const FinFunction rhs = compose(*chosen[d.action_dst(m)], pt.actions[m]);
    return same_table(lhs, rhs);
  };
  std::function<void(ObjectIndex)> extend = [&](ObjectIndex i) {
    if (i == n) {
      std::vector<std::size_t> t(n);
      for (ObjectIndex k = 0; k < n; ++k) t[k] = chosen[k]->table[0];
      families.push_back(std::move(t));
      return;
    }
    for (const FinFunction& theta : candidates[i]) {
      chosen[i] = &theta;
      bool ok = true;
      for (MorphismIndex m = 0; m < shape.morphism_count() && ok; ++m) {
        const ObjectIndex a = d.action_src(m), b = d.action_dst(m);
        if (std::max(a, b) != i) continue;
        ok = square_commutes(m);
      }
      if (ok) extend(i + 1);
    }
    chosen[i] = nullptr;
  };
  extend(0);
  return families_to_result(d, std::move(families));
}

LimitResult colim(const SetDiagram& d) {
  require_functor_laws(d);
  const FinCategory& shape = *d.base;
  const std::size_t n = shape.object_count();

  std::vector<std::size_t> offset(n + 1, 0);
  for (ObjectIndex i = 0; i < n; ++i) offset[i + 1] = offset[i] + d.values[i].size();
  std::vector<std::string> tagged(offset[n]);
  for (ObjectIndex i = 0; i < n; ++i) {
    for (std::size_t x = 0; x < d.values[i].size(); ++x) {
      tagged[offset[i] + x] = tag_element(shape.object_id(i), d.values[i].elements[x]);
    }
  }

  DisjointSets classes(offset[n]);
  for (MorphismIndex m = 0; m < shape.morphism_count(); ++m) {
    const ObjectIndex a = d.action_src(m), b = d.action_dst(m);
    for (std::size_t x = 0; x < d.values[a].size(); ++x) {
      classes.unite(offset[a] + x, offset[b] + d.actions[m](x));
    }
  }

  std::map<std::size_t, std::string> label;  // root -> smallest member
  for (std::size_t k = 0; k < tagged.size(); ++k) {
    auto [it, fresh] = label.emplace(classes.find(k), tagged[k]);
    if (!fresh && tagged[k] < it->second) it->second = tagged[k];
  }
  std::vector<std::string> names;
  for (const auto& [root, name] : label) names.push_back(name);
  std::sort(names.begin(), names.end());

  LimitResult r;
  r.kind = LimitKind::inductive;
  r.apex = FinSet{"colim", names};
  for (ObjectIndex i = 0; i < n; ++i) {
    FinFunction leg{d.values[i], r.apex, std::vector<std::size_t>(d.values[i].size())};
    for (std::size_t x = 0; x < d.values[i].size(); ++x) {
      const std::string& name = label.at(classes.find(offset[i] + x));
      leg.table[x] = static_cast<std::size_t>(std::lower_bound(names.begin(), names.end(), name) - names.begin());
    }
    r.legs.push_back(std::move(leg));
  }
  return r;
}

namespace {

CategoryRef shape_ref(const ShapeKind& kind) {
  // Shapes are immutable and small; one shared instance per kind.
  static const CategoryRef discrete2 = share(build_shape(ShapeKind::discrete(2)));
  static const CategoryRef pair = share(build_shape(ShapeKind::parallel_pair()));
  static const CategoryRef cospan = share(build_shape(ShapeKind::cospan()));
  switch (kind.tag()) {
    case ShapeKind::Tag::parallel_pair: return pair;
    case ShapeKind::Tag::cospan: return cospan;
    default: return discrete2;
  }
}

// Fills identity actions and the given non-identity ones.
SetDiagram make_diagram(const CategoryRef& shape, std::vector<FinSet> values,
                        const std::map<std::string, FinFunction>& arrows) {
  SetDiagram d{shape, Variance::covariant, std::move(values), {}};
  for (MorphismIndex m = 0; m < shape->morphism_count(); ++m) {
    if (shape->is_identity(m)) {
      d.actions.push_back(identity_function(d.values[shape->src(m)]));
    } else {
      d.actions.push_back(arrows.at(shape->morphism_id(m)));
    }
  }
  return d;
}

void require_same_endpoints(const FinFunction& f, const FinFunction& g, bool same_source) {
  const bool ok = (same_source ? f.source.elements == g.source.elements : true) &&
                  f.target.elements == g.target.elements;
  if (!ok) {
    throw EndpointError("morphisms " + f.source.id + " -> " + f.target.id + " and " + g.source.id + " -> " +
                        g.target.id + " do not share the required endpoints");
  }
}

}  // namespace

SetDiagram product_diagram(const FinSet& x, const FinSet& y) {
  return make_diagram(shape_ref(ShapeKind::discrete(2)), {x, y}, {});
}

SetDiagram pullback_diagram(const FinFunction& f, const FinFunction& g) {
  require_same_endpoints(f, g, false);
  return make_diagram(shape_ref(ShapeKind::cospan()), {f.source, g.source, f.target}, {{"m1", f}, {"m2", g}});
}

SetDiagram parallel_diagram(const FinFunction& f, const FinFunction& g) {
  require_same_endpoints(f, g, true);
  return make_diagram(shape_ref(ShapeKind::parallel_pair()), {f.source, f.target}, {{"m1", f}, {"m2", g}});
}

LimitResult product(const FinSet& x, const FinSet& y) { return lim_matching_families(product_diagram(x, y)); }

LimitResult pullback(const FinFunction& f, const FinFunction& g) {
  return lim_matching_families(pullback_diagram(f, g));
}

LimitResult coproduct(const FinSet& x, const FinSet& y) { return colim(product_diagram(x, y)); }

LimitResult equalizer(const FinFunction& f, const FinFunction& g) {
  require_same_endpoints(f, g, true);
  LimitResult r;
  r.kind = LimitKind::projective;
  r.apex.id = "eq";
  std::vector<std::size_t> kept;
  for (std::size_t x = 0; x < f.source.size(); ++x) {
    if (f(x) == g(x)) {
      kept.push_back(x);
      r.apex.elements.push_back(f.source.elements[x]);
    }
  }
  FinFunction inclusion{r.apex, f.source, kept};
  r.legs.push_back(inclusion);
  r.legs.push_back(compose(f, inclusion));
  return r;
}

LimitResult coequalizer(const FinFunction& f, const FinFunction& g) {
  require_same_endpoints(f, g, true);
  const FinSet& y = f.target;
  DisjointSets classes(y.size());
  for (std::size_t x = 0; x < f.source.size(); ++x) classes.unite(f(x), g(x));

  std::map<std::size_t, std::string> label;
  for (std::size_t k = 0; k < y.size(); ++k) {
    auto [it, fresh] = label.emplace(classes.find(k), y.elements[k]);
    if (!fresh && y.elements[k] < it->second) it->second = y.elements[k];
  }
  std::vector<std::string> names;
  for (const auto& [root, name] : label) names.push_back(name);
  std::sort(names.begin(), names.end());

  LimitResult r;
  r.kind = LimitKind::inductive;
  r.apex = FinSet{"coeq", names};
  FinFunction quotient{y, r.apex, std::vector<std::size_t>(y.size())};
  for (std::size_t k = 0; k < y.size(); ++k) {
    quotient.table[k] = static_cast<std::size_t>(
        std::lower_bound(names.begin(), names.end(), label.at(classes.find(k))) - names.begin());
  }
  r.legs.push_back(compose(quotient, f));
  r.legs.push_back(quotient);
  return r;
}

std::size_t function_count(std::size_t source_size, std::size_t target_size) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < source_size; ++i) {
    if (target_size == 0) return 0;
    if (total > std::numeric_limits<std::size_t>::max() / target_size) return std::numeric_limits<std::size_t>::max();
    total *= target_size;
  }
  return total;
}

void for_each_function(const FinSet& x, const FinSet& y,
                       const std::function<bool(const std::vector<std::size_t>&)>& visit, const Caps& caps) {
  const std::size_t count = function_count(x.size(), y.size());
  if (count > caps.max_functions) {
    throw CapacityError("enumerating functions " + x.id + " -> " + y.id + " exceeds the cap of " +
                        std::to_string(caps.max_functions));
  }
  if (count == 0) return;
  std::vector<std::size_t> table(x.size(), 0);
  while (true) {
    if (!visit(table)) return;
    std::size_t pos = table.size();
    while (pos > 0) {
      --pos;
      if (++table[pos] < y.size()) break;
      table[pos] = 0;
      if (pos == 0) return;
    }
    if (table.empty()) return;
  }
}

std::vector<FinFunction> enumerate_functions(const FinSet& x, const FinSet& y, const Caps& caps) {
  std::vector<FinFunction> out;
  for_each_function(
      x, y,
      [&](const std::vector<std::size_t>& t) {
        out.push_back(FinFunction{x, y, t});
        return true;
      },
      caps);
  return out;
}

std::optional<FinFunction> iso_sets(const FinSet& x, const FinSet& y) {
  if (x.size() != y.size()) return std::nullopt;
  FinFunction f{x, y, std::vector<std::size_t>(x.size())};
  std::iota(f.table.begin(), f.table.end(), std::size_t{0});
  return f;
}

std::vector<FinSet> standard_probes(std::size_t max_size) {
  std::vector<FinSet> out;
  for (std::size_t n = 0; n <= max_size; ++n) {
    FinSet w{"W" + std::to_string(n), {}};
    for (std::size_t k = 1; k <= n; ++k) w.elements.push_back("w" + std::to_string(k));
    out.push_back(std::move(w));
  }
  return out;
}

namespace {

std::string table_text(const std::vector<std::size_t>& t) {
  std::string s = "[";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
  return s + "]";
}

}  // namespace

UniversalCheck verify_universal_property(const LimitResult& result, const SetDiagram& d,
                                         const std::vector<FinSet>& probes, const Caps& caps) {
  const FinCategory& shape = *d.base;
  const std::size_t n = shape.object_count();
  const bool projective = result.kind == LimitKind::projective;
  auto fail = [](std::string why) { return UniversalCheck{false, std::move(why)}; };

  if (result.legs.size() != n) return fail("result has " + std::to_string(result.legs.size()) + " legs, shape has " +
                                           std::to_string(n) + " objects");
  for (ObjectIndex i = 0; i < n; ++i) {
    const FinFunction& leg = result.legs[i];
    const std::size_t from = projective ? result.apex.size() : d.values[i].size();
    const std::size_t to = projective ? d.values[i].size() : result.apex.size();
    if (leg.table.size() != from) return fail("leg " + shape.object_id(i) + " has the wrong domain");
    for (std::size_t v : leg.table) {
      if (v >= to) return fail("leg " + shape.object_id(i) + " leaves its codomain");
    }
  }

  // The result itself must be a cone (cocone).
  for (MorphismIndex m = 0; m < shape.morphism_count(); ++m) {
    const ObjectIndex a = d.action_src(m), b = d.action_dst(m);
    if (projective) {
      for (std::size_t e = 0; e < result.apex.size(); ++e) {
        if (d.actions[m](result.legs[a](e)) != result.legs[b](e)) {
          return fail("legs do not commute with " + shape.morphism_id(m) + " at apex element '" +
                      result.apex.elements[e] + "'");
        }
      }
    } else {
      for (std::size_t x = 0; x < d.values[a].size(); ++x) {
        if (result.legs[b](d.actions[m](x)) != result.legs[a](x)) {
          return fail("injections do not commute with " + shape.morphism_id(m) + " at '" + d.values[a].elements[x] +
                      "'");
        }
      }
    }
  }

  for (const FinSet& w : probes) {
    std::vector<std::vector<std::vector<std::size_t>>> options(n);
    for (ObjectIndex i = 0; i < n; ++i) {
      const FinSet& from = projective ? w : d.values[i];
      const FinSet& to = projective ? d.values[i] : w;
      for_each_function(
          from, to,
          [&](const std::vector<std::size_t>& t) {
            options[i].push_back(t);
            return true;
          },
          caps);
    }

    std::vector<const std::vector<std::size_t>*> cone(n, nullptr);
    std::optional<UniversalCheck> failure;

    auto check_cone = [&]() {
      std::string shown;
      for (ObjectIndex i = 0; i < n; ++i) shown += " " + shape.object_id(i) + "=" + table_text(*cone[i]);
      if (projective) {
        for (std::size_t x = 0; x < w.size(); ++x) {
          std::size_t matches = 0;
          for (std::size_t e = 0; e < result.apex.size(); ++e) {
            bool all = true;
            for (ObjectIndex i = 0; i < n && all; ++i) all = result.legs[i](e) == (*cone[i])[x];
            matches += all;
          }
          if (matches != 1) {
            failure = fail("probe " + w.id + ", cone" + shown + ": " + std::to_string(matches) +
                           " candidate images for " + w.elements[x] + " (need exactly 1)");
            return;
          }
        }
      } else {
        for (std::size_t e = 0; e < result.apex.size(); ++e) {
          std::vector<bool> allowed(w.size(), true);
          for (ObjectIndex i = 0; i < n; ++i) {
            for (std::size_t x = 0; x < d.values[i].size(); ++x) {
              if (result.legs[i](x) != e) continue;
              for (std::size_t v = 0; v < w.size(); ++v) allowed[v] = allowed[v] && v == (*cone[i])[x];
            }
          }
          const auto count = static_cast<std::size_t>(std::count(allowed.begin(), allowed.end(), true));
          if (count != 1) {
            failure = fail("probe " + w.id + ", cocone" + shown + ": " + std::to_string(count) +
                           " candidate images of '" + result.apex.elements[e] + "' (need exactly 1)");
            return;
          }
        }
      }
    };

    std::function<void(ObjectIndex)> extend = [&](ObjectIndex i) {
      if (failure) return;
      if (i == n) {
        check_cone();
        return;
      }
      for (const auto& option : options[i]) {
        cone[i] = &option;
        bool ok = true;
        for (MorphismIndex m = 0; m < shape.morphism_count() && ok; ++m) {
          const ObjectIndex a = d.action_src(m), b = d.action_dst(m);
          if (std::max(a, b) != i) continue;
          // cone: D(m) o c_a == c_b ; cocone: c_b o D(m) == c_a
          if (projective) {
            for (std::size_t x = 0; x < w.size() && ok; ++x) ok = d.actions[m]((*cone[a])[x]) == (*cone[b])[x];
          } else {
            for (std::size_t x = 0; x < d.values[a].size() && ok; ++x) {
              ok = (*cone[b])[d.actions[m](x)] == (*cone[a])[x];
            }
          }
        }
        if (ok) extend(i + 1);
        if (failure) return;
      }
    };
    extend(0);
    if (failure) return *failure;
  }
  return {};
}

std::optional<FinFunction> comparison_iso(const LimitResult& a, const LimitResult& b) {
  if (a.kind != b.kind || a.legs.size() != b.legs.size() || a.apex.size() != b.apex.size()) return std::nullopt;
  FinFunction map{a.apex, b.apex, std::vector<std::size_t>(a.apex.size(), 0)};
  if (a.kind == LimitKind::projective) {
    for (std::size_t e = 0; e < a.apex.size(); ++e) {
      std::optional<std::size_t> found;
      for (std::size_t f = 0; f < b.apex.size(); ++f) {
        bool all = true;
        for (std::size_t i = 0; i < a.legs.size() && all; ++i) {
          all = a.legs[i].target.elements == b.legs[i].target.elements && a.legs[i](e) == b.legs[i](f);
        }
        if (!all) continue;
        if (found) return std::nullopt;
        found = f;
      }
      if (!found) return std::nullopt;
      map.table[e] = *found;
    }
  } else {
    std::vector<bool> assigned(a.apex.size(), false);
    for (std::size_t i = 0; i < a.legs.size(); ++i) {
      if (a.legs[i].source.elements != b.legs[i].source.elements) return std::nullopt;
      for (std::size_t x = 0; x < a.legs[i].table.size(); ++x) {
        const std::size_t from = a.legs[i](x), to = b.legs[i](x);
        if (assigned[from] && map.table[from] != to) return std::nullopt;
        assigned[from] = true;
        map.table[from] = to;
      }
    }
    if (std::find(assigned.begin(), assigned.end(), false) != assigned.end()) return std::nullopt;
  }
  if (!is_bijection(map)) return std::nullopt;
  return map;
}

}  // namespace catlim
