#include "catlim/io.hpp"

#include <fstream>
#include <sstream>

namespace catlim {

namespace {

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(where + ": missing field '" + key + "'");
  return j.at(key);
}

std::string text(const Json& j, const std::string& where) {
  if (!j.is_string()) throw ParseError(where + ": expected a string");
  return j.get<std::string>();
}

std::vector<std::string> text_list(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected a list");
  std::vector<std::string> out;
  for (const Json& e : j) out.push_back(text(e, where));
  return out;
}

std::map<std::string, std::string> text_map(const Json& j, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : j.items()) out[k] = text(v, where + "." + k);
  return out;
}

Variance variance_from(const Json& j, const std::string& where, Variance fallback) {
  if (!j.is_object() || !j.contains("variance")) return fallback;
  const std::string v = text(j.at("variance"), where + ".variance");
  if (v == "covariant") return Variance::covariant;
  if (v == "contravariant") return Variance::contravariant;
  throw ParseError(where + ": variance must be covariant or contravariant");
}

std::string variance_text(Variance v) { return v == Variance::covariant ? "covariant" : "contravariant"; }

ShapeKind shape_from(const Json& j, const std::string& where) {
  if (j.is_object()) return ShapeKind::custom(share(category_from_json(j)));
  try {
    return ShapeKind::parse(text(j, where));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(where + ": " + e.what());
  }
}

CategoryRef category_ref(const Json& j, const std::filesystem::path& dir) {
  if (j.is_string()) return share(category_from_json(read_json(dir / j.get<std::string>())));
  return share(category_from_json(j));
}

}  // namespace

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return Json::parse(buffer.str());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

FinCategory category_from_json(const Json& j, const Caps& caps) {
  const std::string where = "category";
  CategorySpec spec;
  if (j.contains("name")) spec.name = text(j.at("name"), where + ".name");
  spec.objects = text_list(field(j, "objects", where), where + ".objects");
  if (j.contains("morphisms")) {
    for (const Json& m : j.at("morphisms")) {
      spec.morphisms.push_back({text(field(m, "id", "morphism"), "morphism.id"),
                                text(field(m, "src", "morphism"), "morphism.src"),
                                text(field(m, "dst", "morphism"), "morphism.dst")});
    }
  }
  if (j.contains("identities")) spec.identities = text_map(j.at("identities"), where + ".identities");
  if (j.contains("compose")) {
    for (const Json& t : j.at("compose")) {
      const auto parts = text_list(t, where + ".compose");
      if (parts.size() != 3) throw ParseError("compose entries are [g, f, g o f] triples");
      spec.compose.push_back({parts[0], parts[1], parts[2]});
    }
  }
  return FinCategory::from_spec(spec, caps);
}

Json category_to_json(const FinCategory& c) {
  const CategorySpec spec = c.to_spec();
  Json j;
  j["name"] = spec.name;
  j["objects"] = spec.objects;
  j["morphisms"] = Json::array();
  for (const auto& m : spec.morphisms) j["morphisms"].push_back({{"id", m.id}, {"src", m.src}, {"dst", m.dst}});
  j["identities"] = spec.identities;
  j["compose"] = Json::array();
  for (const auto& t : spec.compose) j["compose"].push_back({t[0], t[1], t[2]});
  return j;
}

FinSet set_from_json(const Json& j, const std::string& fallback_id) {
  if (j.is_array()) return make_set(fallback_id, text_list(j, "set " + fallback_id));
  const std::string id = j.contains("id") ? text(j.at("id"), "set.id") : fallback_id;
  return make_set(id, text_list(field(j, "elements", "set " + id), "set " + id));
}

Json set_to_json(const FinSet& s) { return Json{{"id", s.id}, {"elements", s.elements}}; }

namespace {

// Fills values/actions of a functor on `base` from {values|objects, actions|morphisms}.
SetFunctor functor_tables(const Json& j, const CategoryRef& base, Variance variance, const char* values_key,
                          const char* actions_key, const std::string& where) {
  SetFunctor f{base, variance, {}, {}};
  const Json& values = field(j, values_key, where);
  for (ObjectIndex x = 0; x < base->object_count(); ++x) {
    const std::string& id = base->object_id(x);
    if (!values.contains(id)) throw ParseError(where + ": no value for object '" + id + "'");
    f.values.push_back(set_from_json(values.at(id), id));
  }
  for (const auto& [k, v] : values.items()) base->object(k);
  const Json actions = j.contains(actions_key) ? j.at(actions_key) : Json::object();
  for (const auto& [k, v] : actions.items()) base->morphism(k);
  for (MorphismIndex m = 0; m < base->morphism_count(); ++m) {
    const FinSet& from = f.values[f.action_src(m)];
    const FinSet& to = f.values[f.action_dst(m)];
    const std::string& id = base->morphism_id(m);
    if (actions.contains(id)) {
      f.actions.push_back(make_function(from, to, text_map(actions.at(id), where + "." + id)));
    } else if (base->is_identity(m)) {
      f.actions.push_back(identity_function(from));
    } else {
      throw ParseError(where + ": no table for morphism '" + id + "'");
    }
  }
  return f;
}

}  // namespace

SetDiagram diagram_from_json(const Json& j) {
  const ShapeKind shape = shape_from(field(j, "shape", "diagram"), "diagram.shape");
  const CategoryRef s = share(build_shape(shape));
  return functor_tables(j, s, variance_from(j, "diagram", Variance::covariant), "objects", "morphisms", "diagram");
}

SetFunctor functor_from_json(const Json& j, const CategoryRef& context, const std::filesystem::path& dir) {
  CategoryRef base = context;
  if (j.contains("base")) base = category_ref(j.at("base"), dir);
  if (!base) throw ParseError("functor document has no base category");
  return functor_tables(j, base, variance_from(j, "functor", Variance::contravariant), "values", "actions",
                        "functor");
}

Json functor_to_json(const SetFunctor& f, bool with_base) {
  Json j;
  if (with_base) j["base"] = category_to_json(*f.base);
  j["variance"] = variance_text(f.variance);
  j["values"] = Json::object();
  for (ObjectIndex x = 0; x < f.values.size(); ++x) j["values"][f.base->object_id(x)] = set_to_json(f.values[x]);
  j["actions"] = Json::object();
  for (MorphismIndex m = 0; m < f.actions.size(); ++m) {
    if (f.base->is_identity(m)) continue;
    Json table = Json::object();
    const FinFunction& fn = f.actions[m];
    for (std::size_t e = 0; e < fn.source.size(); ++e) table[fn.source.elements[e]] = fn.target.elements[fn(e)];
    j["actions"][f.base->morphism_id(m)] = table;
  }
  return j;
}

LimitExpression expression_from_json(const Json& j) {
  LimitExpression e;
  e.op = parse_limit_op(text(field(j, "op", "expression"), "expression.op"));
  e.shape = shape_from(field(j, "shape", "expression"), "expression.shape");
  e.nodes = text_map(field(j, "nodes", "expression"), "expression.nodes");
  if (j.contains("edges")) e.edges = text_map(j.at("edges"), "expression.edges");
  return e;
}

Json expression_to_json(const LimitExpression& e) {
  Json j;
  j["op"] = to_string(e.op);
  j["shape"] = e.shape.to_string();
  j["nodes"] = e.nodes;
  j["edges"] = e.edges;
  return j;
}

ConceptKB kb_from_json(const Json& j, const std::filesystem::path& dir) {
  ConceptKB kb;
  kb.semantic = category_ref(field(j, "semantic_category", "knowledge base"), dir);
  if (j.contains("concepts")) {
    for (const auto& [name, c] : j.at("concepts").items()) {
      ConceptEntry entry;
      if (c.contains("expressions")) {
        for (const Json& e : c.at("expressions")) entry.expressions.push_back(expression_from_json(e));
      }
      if (c.contains("trusted_leaf")) {
        if (!c.at("trusted_leaf").is_boolean()) throw ParseError("trusted_leaf of '" + name + "' must be a boolean");
        entry.trusted_leaf = c.at("trusted_leaf").get<bool>();
      }
      kb.concepts[name] = entry;
    }
  }
  if (j.contains("presheaf_overrides")) {
    for (const auto& [name, p] : j.at("presheaf_overrides").items()) {
      kb.overrides[name] = functor_from_json(p, kb.semantic, dir);
    }
  }
  if (j.contains("task_universe")) {
    const Json& t = j.at("task_universe");
    if (t.contains("probes")) kb.tasks.probes = text_list(t.at("probes"), "task_universe.probes");
    if (t.contains("functors")) {
      std::size_t i = 0;
      for (const Json& f : t.at("functors")) {
        const std::string name = f.contains("name") ? text(f.at("name"), "functor.name") : "F" + std::to_string(i);
        Json body = f;
        if (!body.contains("variance")) body["variance"] = "covariant";
        kb.tasks.functors.push_back({name, functor_from_json(body, kb.semantic, dir)});
        ++i;
      }
    }
  }
  validate_kb(kb);
  return kb;
}

Json kb_to_json(const ConceptKB& kb) {
  Json j;
  j["semantic_category"] = category_to_json(*kb.semantic);
  j["concepts"] = Json::object();
  for (const auto& [name, entry] : kb.concepts) {
    Json c;
    c["expressions"] = Json::array();
    for (const auto& e : entry.expressions) c["expressions"].push_back(expression_to_json(e));
    c["trusted_leaf"] = entry.trusted_leaf;
    j["concepts"][name] = c;
  }
  j["presheaf_overrides"] = Json::object();
  for (const auto& [name, p] : kb.overrides) j["presheaf_overrides"][name] = functor_to_json(p, false);
  j["task_universe"]["probes"] = kb.tasks.probes;
  j["task_universe"]["functors"] = Json::array();
  for (const auto& f : kb.tasks.functors) {
    Json fj = functor_to_json(f.functor, false);
    fj["name"] = f.name;
    j["task_universe"]["functors"].push_back(fj);
  }
  return j;
}

ConceptKB load_kb(const std::filesystem::path& path) {
  return kb_from_json(read_json(path), path.parent_path());
}

Json limit_result_to_json(const LimitResult& r, const FinCategory& shape) {
  Json j;
  j["kind"] = r.kind == LimitKind::projective ? "lim" : "colim";
  j["apex"] = set_to_json(r.apex);
  j["legs"] = Json::object();
  for (ObjectIndex i = 0; i < r.legs.size(); ++i) {
    Json table = Json::object();
    const FinFunction& leg = r.legs[i];
    for (std::size_t e = 0; e < leg.source.size(); ++e) table[leg.source.elements[e]] = leg.target.elements[leg(e)];
    j["legs"][shape.object_id(i)] = table;
  }
  return j;
}

// ---------------------------------------------------------------------------

std::vector<ManifestEntry> manifest_from_json(const Json& j) {
  const Json& list = j.is_object() && j.contains("laws") ? j.at("laws") : j;
  if (!list.is_array()) throw ParseError("a law manifest is a list of entries");
  std::vector<ManifestEntry> out;
  for (const Json& e : list) {
    ManifestEntry m;
    m.law = text(field(e, "law", "manifest entry"), "manifest entry.law");
    const Json& inst = field(e, "instance", "manifest entry");
    if (inst.is_object() && inst.contains("generated")) {
      const Json& g = inst.at("generated");
      m.generated = true;
      if (g.contains("seed")) m.seed = g.at("seed").get<std::uint64_t>();
      if (g.contains("max_objects")) m.bounds.max_objects = g.at("max_objects").get<std::size_t>();
      if (g.contains("instances")) m.bounds.instances = g.at("instances").get<std::size_t>();
      if (m.bounds.max_objects == 0 || m.bounds.instances == 0) throw ParseError("generated bounds must be positive");
    } else if (inst.is_object() && inst.contains("inline")) {
      m.generated = false;
      m.inline_instance = inst.at("inline");
    } else {
      throw ParseError("instance of '" + m.law + "' must be {\"generated\": ...} or {\"inline\": ...}");
    }
    out.push_back(std::move(m));
  }
  return out;
}

namespace {

LimitKind kind_from(const Json& j) {
  const std::string k = j.contains("kind") ? text(j.at("kind"), "kind") : "projective";
  if (k == "projective" || k == "lim" || k == "pro") return LimitKind::projective;
  if (k == "inductive" || k == "colim" || k == "ind") return LimitKind::inductive;
  throw ParseError("kind must be projective or inductive");
}

Diagram inline_diagram(const Json& j, const CategoryRef& c) {
  const ShapeKind shape = shape_from(field(j, "shape", "instance"), "instance.shape");
  std::vector<ObjectIndex> objects;
  for (const auto& id : text_list(field(j, "objects", "instance"), "instance.objects")) objects.push_back(c->object(id));
  std::vector<MorphismIndex> arrows;
  if (j.contains("arrows")) {
    for (const auto& id : text_list(j.at("arrows"), "instance.arrows")) arrows.push_back(c->morphism(id));
  }
  try {
    return make_diagram(c, shape, objects, arrows);
  } catch (const std::out_of_range&) {
    throw ParseError("instance lists too few objects or arrows for shape " + shape.to_string());
  }
}

CatFunctor inline_functor(const Json& j, const CategoryRef& source, const CategoryRef& target) {
  const auto objects = text_map(field(j, "objects", "functor"), "functor.objects");
  std::vector<ObjectIndex> on_objects;
  for (ObjectIndex x = 0; x < source->object_count(); ++x) {
    const auto it = objects.find(source->object_id(x));
    if (it == objects.end()) throw ParseError("functor has no image for '" + source->object_id(x) + "'");
    on_objects.push_back(target->object(it->second));
  }
  if (!j.contains("morphisms")) return poset_functor(source, target, on_objects);
  const auto morphisms = text_map(j.at("morphisms"), "functor.morphisms");
  CatFunctor f{source, target, on_objects, {}};
  for (MorphismIndex m = 0; m < source->morphism_count(); ++m) {
    const auto it = morphisms.find(source->morphism_id(m));
    if (it != morphisms.end()) {
      f.on_morphisms.push_back(target->morphism(it->second));
    } else if (source->is_identity(m)) {
      f.on_morphisms.push_back(target->identity(on_objects[source->src(m)]));
    } else {
      throw ParseError("functor has no image for '" + source->morphism_id(m) + "'");
    }
  }
  const auto v = functor_violations(f);
  if (!v.empty()) throw LawError("functor: " + v.front());
  return f;
}

AdjunctionWitness inline_adjunction(const Json& j) {
  const CategoryRef c = share(category_from_json(field(j, "source", "adjunction")));
  const CategoryRef d = share(category_from_json(field(j, "target", "adjunction")));
  AdjunctionWitness w{inline_functor(field(j, "left", "adjunction"), c, d),
                      inline_functor(field(j, "right", "adjunction"), d, c),
                      {}};
  w.bijections.assign(c->object_count(), std::vector<std::vector<std::size_t>>(d->object_count()));
  for (ObjectIndex x = 0; x < c->object_count(); ++x) {
    for (ObjectIndex y = 0; y < d->object_count(); ++y) {
      auto& b = w.bijections[x][y];
      b.resize(d->hom(w.left.on_objects[x], y).size());
      for (std::size_t k = 0; k < b.size(); ++k) b[k] = k;
    }
  }
  if (j.contains("bijections")) {
    for (const Json& entry : j.at("bijections")) {
      const ObjectIndex x = c->object(text(field(entry, "x", "bijection"), "bijection.x"));
      const ObjectIndex y = d->object(text(field(entry, "y", "bijection"), "bijection.y"));
      const auto lhs = d->hom(w.left.on_objects[x], y);
      const auto rhs = c->hom(x, w.right.on_objects[y]);
      for (const auto& [u, v] : text_map(field(entry, "map", "bijection"), "bijection.map")) {
        const MorphismIndex um = d->morphism(u), vm = c->morphism(v);
        const auto ui = std::find(lhs.begin(), lhs.end(), um);
        const auto vi = std::find(rhs.begin(), rhs.end(), vm);
        if (ui == lhs.end() || vi == rhs.end()) throw ParseError("bijection entry " + u + " -> " + v + " is not in the hom-sets");
        w.bijections[x][y][static_cast<std::size_t>(ui - lhs.begin())] = static_cast<std::size_t>(vi - rhs.begin());
      }
    }
  }
  return w;
}

LawReport run_inline(const std::string& law, const Json& j, const Caps& caps) {
  if (law == "adjunction") return check_adjunction(inline_adjunction(j));
  if (law == "preservation" || law == "reflection") {
    const CategoryRef c = share(category_from_json(field(j, "source", "instance")));
    const CategoryRef d = share(category_from_json(field(j, "target", "instance")));
    const CatFunctor f = inline_functor(field(j, "functor", "instance"), c, d);
    const Diagram dg = inline_diagram(j, c);
    return law == "preservation" ? check_preservation(f, dg, kind_from(j), caps)
                                 : check_reflection(f, dg, kind_from(j), caps);
  }
  const CategoryRef c = share(category_from_json(field(j, "category", "instance")));
  if (law == "hom_lim") {
    return check_hom_lim(inline_diagram(j, c), c->object(text(field(j, "object", "instance"), "object")),
                         kind_from(j), caps);
  }
  if (law == "yoneda") {
    const SetPresheaf a = functor_from_json(field(j, "presheaf", "instance"), c);
    return check_yoneda(c, c->object(text(field(j, "object", "instance"), "object")), a, caps);
  }
  if (law == "representable_colim") {
    Json fj = field(j, "functor", "instance");
    if (!fj.contains("variance")) fj["variance"] = "covariant";
    return check_representable_colim(inline_diagram(j, c), functor_from_json(fj, c), caps);
  }
  if (law == "yoneda_extension") {
    Json fj = field(j, "functor", "instance");
    if (!fj.contains("variance")) fj["variance"] = "covariant";
    return check_yoneda_extension(functor_from_json(fj, c), c->object(text(field(j, "object", "instance"), "object")),
                                  caps);
  }
  if (law == "yoneda_preserves_lim") return check_yoneda_preserves_lim(inline_diagram(j, c), caps);
  throw ParseError("law '" + law + "' takes generated instances only");
}

}  // namespace

std::vector<LawReport> run_manifest_entry(const ManifestEntry& e, const Caps& caps) {
  if (e.generated) return run_generated(e.law, e.seed, e.bounds);
  LawReport r = run_inline(e.law, e.inline_instance, caps);
  r.law = e.law;
  return {r};
}

Json law_report_to_json(const LawReport& r) {
  Json j;
  j["law"] = r.law;
  j["instance"] = r.instance;
  j["verdict"] = to_string(r.verdict);
  j["witness"] = r.witness;
  j["counterexample"] = r.counterexample;
  return j;
}

}  // namespace catlim
