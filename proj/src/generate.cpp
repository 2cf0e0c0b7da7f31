#include "catlim/generate.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

namespace catlim {

std::string poset_arrow(const std::string& x, const std::string& y) { return x + "<=" + y; }

FinCategory make_poset(const std::string& name, const std::vector<std::string>& objects,
                       const std::function<bool(std::size_t, std::size_t)>& leq) {
  CategorySpec spec;
  spec.name = name;
  spec.objects = objects;
  const std::size_t n = objects.size();
  auto arrow = [&](std::size_t i, std::size_t j) {
    return i == j ? "id_" + objects[i] : poset_arrow(objects[i], objects[j]);
  };
  for (std::size_t i = 0; i < n; ++i) {
    spec.identities[objects[i]] = arrow(i, i);
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && leq(i, j)) spec.morphisms.push_back({arrow(i, j), objects[i], objects[j]});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (i == j || j == k || !leq(i, j) || !leq(j, k)) continue;
        spec.compose.push_back({arrow(j, k), arrow(i, j), arrow(i, k)});
      }
    }
  }
  return FinCategory::from_spec(spec);
}

namespace {

std::vector<std::string> letters(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::string(1, static_cast<char>('A' + i)));
  return out;
}

// Transitive closure of a random relation i -> j, i < j.
std::vector<std::vector<bool>> random_order(Rng& rng, std::size_t n, unsigned edge_percent) {
  std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    le[i][i] = true;
    for (std::size_t j = i + 1; j < n; ++j) le[i][j] = rng.chance(edge_percent);
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (le[i][k] && le[k][j]) le[i][j] = true;
      }
    }
  }
  return le;
}

// Paths in a DAG whose generators all go from lower to higher index.
// A path is listed first-to-last; its id joins generator ids last-first
// with '.', so "g.f" is g o f.
FinCategory free_category(const std::vector<std::string>& objects,
                          const std::vector<std::tuple<std::string, std::size_t, std::size_t>>& generators) {
  struct Path {
    std::vector<std::size_t> steps;
    std::size_t src, dst;
  };
  std::vector<Path> paths;
  for (std::size_t g = 0; g < generators.size(); ++g) {
    paths.push_back({{g}, std::get<1>(generators[g]), std::get<2>(generators[g])});
  }
  for (std::size_t p = 0; p < paths.size(); ++p) {
    for (std::size_t g = 0; g < generators.size(); ++g) {
      if (std::get<1>(generators[g]) != paths[p].dst) continue;
      Path next = paths[p];
      next.steps.push_back(g);
      next.dst = std::get<2>(generators[g]);
      paths.push_back(std::move(next));
    }
  }
  auto id_of = [&](const std::vector<std::size_t>& steps) {
    std::string s;
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
      if (!s.empty()) s += ".";
      s += std::get<0>(generators[*it]);
    }
    return s;
  };
  CategorySpec spec;
  spec.name = "free";
  spec.objects = objects;
  for (const Path& p : paths) spec.morphisms.push_back({id_of(p.steps), objects[p.src], objects[p.dst]});
  for (const Path& f : paths) {
    for (const Path& g : paths) {
      if (f.dst != g.src) continue;
      std::vector<std::size_t> steps = f.steps;
      steps.insert(steps.end(), g.steps.begin(), g.steps.end());
      spec.compose.push_back({id_of(g.steps), id_of(f.steps), id_of(steps)});
    }
  }
  return FinCategory::from_spec(spec);
}

FinCategory random_free_category(Rng& rng, const CategoryBounds& bounds) {
  for (;;) {
    const std::size_t n = rng.between(1, bounds.max_objects);
    std::vector<std::tuple<std::string, std::size_t, std::size_t>> gens;
    const std::size_t edges = rng.between(0, n + 1);
    for (std::size_t e = 0; e < edges && n > 1; ++e) {
      std::size_t a = rng.below(n), b = rng.below(n);
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      gens.emplace_back("f" + std::to_string(gens.size() + 1), a, b);
    }
    // Count paths before building, to respect the morphism bound.
    std::vector<std::size_t> into(n, 0);
    std::size_t total = n;
    for (std::size_t v = 0; v < n; ++v) {
      std::size_t ending = 0;
      for (const auto& [id, s, t] : gens) {
        if (t == v) ending += 1 + into[s];
      }
      into[v] = ending;
      total += ending;
    }
    if (total <= bounds.max_morphisms) return free_category(letters(n), gens);
  }
}

FinCategory cyclic_monoid(std::size_t n) {
  CategorySpec spec;
  spec.name = "Z" + std::to_string(n);
  spec.objects = {"M"};
  auto id = [](std::size_t a) { return a == 0 ? std::string("id_M") : "r" + std::to_string(a); };
  spec.identities["M"] = id(0);
  for (std::size_t a = 1; a < n; ++a) spec.morphisms.push_back({id(a), "M", "M"});
  for (std::size_t a = 1; a < n; ++a) {
    for (std::size_t b = 1; b < n; ++b) spec.compose.push_back({id(a), id(b), id((a + b) % n)});
  }
  return FinCategory::from_spec(spec);
}

FinCategory left_zero_monoid(std::size_t zeros) {
  CategorySpec spec;
  spec.name = "left_zero";
  spec.objects = {"M"};
  spec.identities["M"] = "id_M";
  for (std::size_t a = 1; a <= zeros; ++a) spec.morphisms.push_back({"z" + std::to_string(a), "M", "M"});
  for (std::size_t a = 1; a <= zeros; ++a) {
    for (std::size_t b = 1; b <= zeros; ++b) {
      spec.compose.push_back({"z" + std::to_string(a), "z" + std::to_string(b), "z" + std::to_string(a)});
    }
  }
  return FinCategory::from_spec(spec);
}

FinCategory groupoid_pair() {
  CategorySpec spec;
  spec.name = "groupoid";
  spec.objects = {"A", "B"};
  spec.morphisms = {{"u", "A", "B"}, {"v", "B", "A"}};
  spec.compose = {{"v", "u", "id_A"}, {"u", "v", "id_B"}};
  return FinCategory::from_spec(spec);
}

FinCategory idempotent_arrow() {
  CategorySpec spec;
  spec.name = "idempotent_arrow";
  spec.objects = {"A", "B"};
  spec.morphisms = {{"e", "A", "A"}, {"m", "A", "B"}, {"n", "A", "B"}};
  spec.compose = {{"e", "e", "e"}, {"m", "e", "n"}, {"n", "e", "n"}};
  return FinCategory::from_spec(spec);
}

}  // namespace

FinCategory random_poset(Rng& rng, std::size_t objects, unsigned edge_percent) {
  const auto le = random_order(rng, objects, edge_percent);
  return make_poset("poset", letters(objects), [&](std::size_t i, std::size_t j) { return le[i][j]; });
}

FinCategory random_category(Rng& rng, const CategoryBounds& bounds) {
  switch (rng.below(6)) {
    case 0:
      return random_free_category(rng, bounds);
    case 1: {
      for (;;) {
        FinCategory p = random_poset(rng, rng.between(1, bounds.max_objects), 40);
        if (p.morphism_count() <= bounds.max_morphisms) return p;
      }
    }
    case 2:
      return cyclic_monoid(rng.between(1, std::min<std::size_t>(4, bounds.max_morphisms)));
    case 3:
      return rng.chance(50) ? left_zero_monoid(1) : left_zero_monoid(2);
    case 4:
      return groupoid_pair();
    default:
      return idempotent_arrow();
  }
}

FinCategory random_lattice(Rng& rng, std::size_t max_objects) {
  const std::string base = "abcd";
  for (;;) {
    std::set<unsigned> family{0};
    const std::size_t draws = rng.between(1, 4);
    for (std::size_t d = 0; d < draws; ++d) family.insert(static_cast<unsigned>(rng.between(1, 15)));
    bool grew = true;
    while (grew) {
      grew = false;
      for (unsigned a : std::vector<unsigned>(family.begin(), family.end())) {
        for (unsigned b : std::vector<unsigned>(family.begin(), family.end())) grew |= family.insert(a | b).second;
      }
    }
    if (family.size() > max_objects) continue;
    std::vector<unsigned> members(family.begin(), family.end());
    std::vector<std::string> names;
    for (unsigned s : members) {
      std::string name = "{";
      for (unsigned bit = 0; bit < 4; ++bit) {
        if (s & (1u << bit)) {
          if (name.size() > 1) name += ",";
          name += base[bit];
        }
      }
      names.push_back(name + "}");
    }
    return make_poset("lattice", names,
                      [&](std::size_t i, std::size_t j) { return (members[i] & ~members[j]) == 0; });
  }
}

namespace {

FinSet numbered_set(const std::string& id, std::size_t n) {
  FinSet s{id, {}};
  for (std::size_t i = 0; i < n; ++i) s.elements.push_back(std::to_string(i));
  return s;
}

// Composable pairs whose functoriality can be checked once every
// non-identity morphism among g, f and g o f has an action.
struct FunctorConstraints {
  std::vector<MorphismIndex> order;  // non-identity morphisms
  std::vector<std::vector<std::array<MorphismIndex, 3>>> at;  // (g, f, g o f) per position

  explicit FunctorConstraints(const FinCategory& c) {
    std::vector<std::size_t> position(c.morphism_count(), 0);
    for (MorphismIndex m = 0; m < c.morphism_count(); ++m) {
      if (!c.is_identity(m)) {
        position[m] = order.size();
        order.push_back(m);
      }
    }
    at.resize(order.size());
    for (MorphismIndex g = 0; g < c.morphism_count(); ++g) {
      for (MorphismIndex f = 0; f < c.morphism_count(); ++f) {
        if (c.is_identity(g) || c.is_identity(f) || c.dst(f) != c.src(g)) continue;
        const MorphismIndex gf = c.compose(g, f);
        std::size_t p = std::max(position[g], position[f]);
        if (!c.is_identity(gf)) p = std::max(p, position[gf]);
        at[p].push_back({g, f, gf});
      }
    }
  }
};

bool composite_ok(Variance variance, const std::vector<std::vector<std::size_t>>& tables,
                  const std::array<MorphismIndex, 3>& triple) {
  const auto [g, f, gf] = triple;
  const auto& tg = tables[g];
  const auto& tf = tables[f];
  const auto& tgf = tables[gf];
  const bool co = variance == Variance::covariant;
  // Covariant: A(g o f) = A(g) A(f). Contravariant: A(g o f) = A(f) A(g).
  const auto& first = co ? tf : tg;
  const auto& second = co ? tg : tf;
  for (std::size_t x = 0; x < first.size(); ++x) {
    if (second[first[x]] != tgf[x]) return false;
  }
  return true;
}

SetFunctor assemble(const CategoryRef& base, Variance variance, const std::vector<std::size_t>& sizes,
                    const std::vector<std::vector<std::size_t>>& tables) {
  const FinCategory& c = *base;
  SetFunctor out{base, variance, {}, {}};
  for (ObjectIndex x = 0; x < c.object_count(); ++x) out.values.push_back(numbered_set(c.object_id(x), sizes[x]));
  for (MorphismIndex m = 0; m < c.morphism_count(); ++m) {
    out.actions.push_back(FinFunction{out.values[out.action_src(m)], out.values[out.action_dst(m)], tables[m]});
  }
  return out;
}

}  // namespace

std::size_t for_each_set_functor(const CategoryRef& base, Variance variance, std::size_t max_size,
                                 const std::function<bool(const SetFunctor&)>& visit, std::size_t limit) {
  const FinCategory& c = *base;
  const FunctorConstraints cons(c);
  const bool co = variance == Variance::covariant;
  auto from = [&](MorphismIndex m) { return co ? c.src(m) : c.dst(m); };
  auto to = [&](MorphismIndex m) { return co ? c.dst(m) : c.src(m); };

  std::size_t visited = 0;
  bool stop = false;
  std::vector<std::size_t> sizes(c.object_count(), 0);
  std::vector<std::vector<std::size_t>> tables(c.morphism_count());

  std::function<void(std::size_t)> extend = [&](std::size_t p) {
    if (stop) return;
    if (p == cons.order.size()) {
      if (visited == limit) {
        ++visited;
        stop = true;
        return;
      }
      ++visited;
      if (!visit(assemble(base, variance, sizes, tables))) stop = true;
      return;
    }
    const MorphismIndex m = cons.order[p];
    const std::size_t n = sizes[from(m)], k = sizes[to(m)];
    if (n > 0 && k == 0) return;
    std::vector<std::size_t>& t = tables[m];
    t.assign(n, 0);
    for (;;) {
      bool ok = true;
      for (const auto& triple : cons.at[p]) {
        if (!composite_ok(variance, tables, triple)) {
          ok = false;
          break;
        }
      }
      if (ok) extend(p + 1);
      if (stop) return;
      std::size_t i = n;
      while (i > 0 && ++t[i - 1] == k) t[--i] = 0;
      if (i == 0) break;
    }
  };

  for (;;) {
    for (ObjectIndex x = 0; x < c.object_count(); ++x) {
      tables[c.identity(x)].resize(sizes[x]);
      for (std::size_t i = 0; i < sizes[x]; ++i) tables[c.identity(x)][i] = i;
    }
    extend(0);
    if (stop) break;
    std::size_t i = sizes.size();
    while (i > 0 && ++sizes[i - 1] > max_size) sizes[--i] = 0;
    if (i == 0) break;
  }
  return visited;
}

SetFunctor random_set_functor(Rng& rng, const CategoryRef& base, Variance variance, std::size_t max_size) {
  const FinCategory& c = *base;
  const FunctorConstraints cons(c);
  const bool co = variance == Variance::covariant;
  for (;;) {
    std::vector<std::size_t> sizes(c.object_count());
    for (auto& s : sizes) s = rng.between(0, max_size);
    std::vector<std::vector<std::size_t>> tables(c.morphism_count());
    for (ObjectIndex x = 0; x < c.object_count(); ++x) {
      for (std::size_t i = 0; i < sizes[x]; ++i) tables[c.identity(x)].push_back(i);
    }
    std::size_t nodes = 0;
    std::function<bool(std::size_t)> extend = [&](std::size_t p) {
      if (p == cons.order.size()) return true;
      const MorphismIndex m = cons.order[p];
      const std::size_t n = sizes[co ? c.src(m) : c.dst(m)], k = sizes[co ? c.dst(m) : c.src(m)];
      if (n > 0 && k == 0) return false;
      for (int attempt = 0; attempt < 24 && nodes < 2000; ++attempt, ++nodes) {
        tables[m].assign(n, 0);
        for (auto& v : tables[m]) v = rng.below(k);
        bool ok = true;
        for (const auto& triple : cons.at[p]) ok = ok && composite_ok(variance, tables, triple);
        if (ok && extend(p + 1)) return true;
      }
      return false;
    };
    if (extend(0)) return assemble(base, variance, sizes, tables);
  }
}

FinSet random_set(Rng& rng, const std::string& id, std::size_t min_size, std::size_t max_size) {
  FinSet s{id, {}};
  const std::size_t n = rng.between(min_size, max_size);
  for (std::size_t i = 0; i < n; ++i) s.elements.push_back(id + std::to_string(i + 1));
  return s;
}

FinFunction random_function(Rng& rng, const FinSet& source, const FinSet& target) {
  FinFunction f{source, target, std::vector<std::size_t>(source.size(), 0)};
  for (auto& v : f.table) v = rng.below(target.size());
  return f;
}

SetDiagram random_set_diagram(Rng& rng, const ShapeKind& shape, std::size_t max_size) {
  const CategoryRef cat = share(build_shape(shape));
  const FinCategory& c = *cat;
  SetDiagram d{cat, Variance::covariant, {}, {}};
  std::vector<bool> needs_nonempty(c.object_count(), false);
  for (MorphismIndex m = 0; m < c.morphism_count(); ++m) {
    if (!c.is_identity(m)) needs_nonempty[c.dst(m)] = true;
  }
  for (ObjectIndex x = 0; x < c.object_count(); ++x) {
    const std::string id = std::string(1, static_cast<char>('x' + (x % 3))) + (x >= 3 ? std::to_string(x) : "");
    d.values.push_back(random_set(rng, id, needs_nonempty[x] ? 1 : 0, max_size));
  }
  for (MorphismIndex m = 0; m < c.morphism_count(); ++m) {
    if (c.is_identity(m)) {
      d.actions.push_back(identity_function(d.values[c.src(m)]));
    } else {
      d.actions.push_back(random_function(rng, d.values[c.src(m)], d.values[c.dst(m)]));
    }
  }
  return d;
}

}  // namespace catlim
