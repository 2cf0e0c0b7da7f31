#include "catlim/concept.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "json.hpp"

namespace catlim {

std::string to_string(LimitOp op) { return op == LimitOp::projective ? "pro" : "ind"; }

LimitOp parse_limit_op(const std::string& text) {
  if (text == "pro" || text == "lim" || text == "projective") return LimitOp::projective;
  if (text == "ind" || text == "colim" || text == "inductive") return LimitOp::inductive;
  throw StructuralError("unknown limit operator '" + text + "'");
}

std::string describe(const LimitExpression& e) {
  std::string out = to_string(e.op) + " " + e.shape.to_string() + " {";
  bool first = true;
  for (const auto& [k, v] : e.nodes) {
    out += (first ? "" : ", ") + k + ": " + v;
    first = false;
  }
  if (!e.edges.empty()) out += ";";
  first = true;
  for (const auto& [k, v] : e.edges) {
    out += (first ? " " : ", ") + k + ": " + v;
    first = false;
  }
  return out + "}";
}

bool ConceptKB::resolves(const std::string& name) const {
  return overrides.count(name) > 0 || semantic->find_object(name).has_value();
}

ConceptEntry ConceptKB::entry(const std::string& name) const {
  if (!resolves(name)) throw UnknownIdError("unknown concept '" + name + "'");
  const auto it = concepts.find(name);
  return it == concepts.end() ? ConceptEntry{} : it->second;
}

Diagram expression_diagram(const ConceptKB& kb, const LimitExpression& e) {
  const CategoryRef shape = share(build_shape(e.shape));
  const FinCategory& c = *kb.semantic;
  Diagram d{shape, Variance::covariant, kb.semantic, {}, {}};
  for (ObjectIndex i = 0; i < shape->object_count(); ++i) {
    const auto it = e.nodes.find(shape->object_id(i));
    if (it == e.nodes.end()) throw StructuralError("expression has no node for " + shape->object_id(i));
    const auto x = c.find_object(it->second);
    if (!x) {
      throw UnknownIdError("expression node " + shape->object_id(i) + " names '" + it->second +
                           "', which is not an object of the semantic category");
    }
    d.objects.push_back(*x);
  }
  std::size_t arrows = 0;
  for (MorphismIndex m = 0; m < shape->morphism_count(); ++m) {
    if (shape->is_identity(m)) {
      d.morphisms.push_back(c.identity(d.objects[shape->src(m)]));
      continue;
    }
    ++arrows;
    const auto it = e.edges.find(shape->morphism_id(m));
    if (it == e.edges.end()) throw StructuralError("expression has no edge for " + shape->morphism_id(m));
    d.morphisms.push_back(c.morphism(it->second));
  }
  if (e.nodes.size() != shape->object_count() || e.edges.size() != arrows) {
    throw StructuralError("expression assigns ids that are not in shape " + e.shape.to_string());
  }
  require_functorial(d);
  return d;
}

void validate_kb(const ConceptKB& kb) {
  if (!kb.semantic) throw StructuralError("knowledge base without a semantic category");
  require_valid(*kb.semantic);
  for (const auto& [name, o] : kb.overrides) {
    if (o.base.get() != kb.semantic.get() && !(o.base && *o.base == *kb.semantic)) {
      throw StructuralError("override '" + name + "' is not over the semantic category");
    }
    const auto v = functor_law_violations(o);
    if (!v.empty()) throw LawError("override '" + name + "': " + v.front());
  }
  for (const auto& [name, entry] : kb.concepts) {
    if (!kb.resolves(name)) throw UnknownIdError("unknown concept '" + name + "'");
    for (const LimitExpression& e : entry.expressions) {
      try {
        expression_diagram(kb, e);
      } catch (const UnknownIdError& err) {
        throw UnknownIdError("concept '" + name + "': " + err.what());
      } catch (const LawError& err) {
        throw LawError("concept '" + name + "': " + err.what());
      } catch (const StructuralError& err) {
        throw StructuralError("concept '" + name + "': " + err.what());
      }
    }
  }
  for (const std::string& p : kb.tasks.probes) kb.semantic->object(p);
  for (const NamedFunctor& f : kb.tasks.functors) {
    if (f.functor.variance != Variance::covariant) {
      throw UnsupportedTargetError("task functor '" + f.name + "' must be covariant");
    }
    const auto v = functor_law_violations(f.functor);
    if (!v.empty()) throw LawError("task functor '" + f.name + "': " + v.front());
  }
}

Variance variance_for(LimitOp op) {
  return op == LimitOp::projective ? Variance::contravariant : Variance::covariant;
}

SetPresheaf realize(const ConceptKB& kb, const LimitExpression& e) {
  const Diagram d = expression_diagram(kb, e);
  return e.op == LimitOp::projective ? limit_presheaf(d) : colimit_presheaf(d);
}

SetPresheaf formal_colimit(const ConceptKB& kb, const LimitExpression& e) {
  return ind_lim(expression_diagram(kb, e));
}

SetPresheaf concept_presheaf(const ConceptKB& kb, const std::string& name, Variance variance) {
  if (const auto it = kb.overrides.find(name); it != kb.overrides.end()) return it->second;
  const auto x = kb.semantic->find_object(name);
  if (!x) throw UnknownIdError("unknown concept '" + name + "'");
  return yoneda(kb.semantic, *x, variance);
}

// ---------------------------------------------------------------------------

Extractor table_extractor() {
  return [](const ConceptKB& kb, const std::string& name) -> std::optional<LimitExpression> {
    const ConceptEntry e = kb.entry(name);
    if (e.expressions.empty()) return std::nullopt;
    return e.expressions.front();
  };
}

std::uint64_t node_seed(std::uint64_t seed, const std::string& name) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : name) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h ^ (seed * 0x9e3779b97f4a7c15ull);
}

Extractor random_extractor(std::uint64_t seed) {
  return [seed](const ConceptKB& kb, const std::string& name) -> std::optional<LimitExpression> {
    const ConceptEntry e = kb.entry(name);
    if (e.expressions.empty()) return std::nullopt;
    Rng rng(node_seed(seed, name));
    return e.expressions[rng.below(e.expressions.size())];
  };
}

std::optional<LimitExpression> extract_limit(const ConceptKB& kb, const std::string& name) {
  return table_extractor()(kb, name);
}

std::string to_string(LeafKind k) {
  switch (k) {
    case LeafKind::none: return "none";
    case LeafKind::basic: return "basic";
    case LeafKind::cycle_ref: return "cycle_ref";
    case LeafKind::extractor_null: return "extractor_null";
  }
  return "none";
}

namespace {

std::string path_text(const std::vector<std::string>& path) {
  std::string out;
  for (const auto& p : path) out += (out.empty() ? "" : " > ") + p;
  return out;
}

TreeNode decompose(const ConceptKB& kb, const std::string& name, const Extractor& extractor,
                   std::vector<std::string>& path, std::size_t depth_cap) {
  if (path.size() > depth_cap) {
    throw CapacityError("decomposition exceeds depth " + std::to_string(depth_cap) + " at " + path_text(path));
  }
  TreeNode node{name, LeafKind::none, std::nullopt, {}};
  if (!kb.resolves(name)) throw UnknownIdError("unknown concept '" + name + "'");
  const auto expr = extractor(kb, name);
  if (!expr) {
    node.leaf = kb.overrides.count(name) ? LeafKind::extractor_null : LeafKind::basic;
    return node;
  }
  expression_diagram(kb, *expr);
  node.expression = expr;
  for (const auto& [label, child] : expr->nodes) {
    if (std::find(path.begin(), path.end(), child) != path.end()) {
      node.children.push_back({label, TreeNode{child, LeafKind::cycle_ref, std::nullopt, {}}});
      continue;
    }
    path.push_back(child);
    node.children.push_back({label, decompose(kb, child, extractor, path, depth_cap)});
    path.pop_back();
  }
  return node;
}

void collect(const TreeNode& n, std::vector<const TreeNode*>& out) {
  out.push_back(&n);
  for (const auto& [label, child] : n.children) collect(child, out);
}

std::string lift_of(const LimitExpression& e) { return e.op == LimitOp::projective ? "h" : "k"; }

std::string edge_text(const LimitExpression& e) {
  std::string out;
  for (const auto& [k, v] : e.edges) out += (out.empty() ? "" : ", ") + k + ": " + v;
  return out;
}

void write_text(const TreeNode& n, const std::string& label, std::size_t indent, std::ostringstream& out) {
  out << std::string(indent * 2, ' ');
  if (!label.empty()) out << label << " -> ";
  out << n.name << ": ";
  if (!n.expression) {
    out << "leaf " << to_string(n.leaf) << "\n";
    return;
  }
  out << to_string(n.expression->op) << " " << n.expression->shape.to_string() << " via " << lift_of(*n.expression);
  if (!n.expression->edges.empty()) out << " [" << edge_text(*n.expression) << "]";
  out << "\n";
  for (const auto& [l, child] : n.children) write_text(child, l, indent + 1, out);
}

nlohmann::ordered_json to_json(const TreeNode& n) {
  nlohmann::ordered_json j;
  j["concept"] = n.name;
  if (!n.expression) {
    j["leaf"] = to_string(n.leaf);
    return j;
  }
  j["op"] = to_string(n.expression->op);
  j["lift"] = lift_of(*n.expression);
  j["shape"] = n.expression->shape.to_string();
  j["edges"] = n.expression->edges;
  j["children"] = nlohmann::ordered_json::array();
  for (const auto& [label, child] : n.children) {
    nlohmann::ordered_json c;
    c["label"] = label;
    c["node"] = to_json(child);
    j["children"].push_back(std::move(c));
  }
  return j;
}

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    if (ch == '\n') {
      out += "\\n";
      continue;
    }
    out += ch;
  }
  return out + "\"";
}

}  // namespace

DecompositionTree deconcept(const ConceptKB& kb, const std::string& name, const Extractor& extractor,
                            std::size_t depth_cap) {
  std::vector<std::string> path{name};
  return DecompositionTree{decompose(kb, name, extractor, path, depth_cap)};
}

std::vector<const TreeNode*> tree_nodes(const DecompositionTree& t) {
  std::vector<const TreeNode*> out;
  collect(t.root, out);
  return out;
}

std::string tree_text(const DecompositionTree& t) {
  std::ostringstream out;
  write_text(t.root, "", 0, out);
  return out.str();
}

std::string tree_json(const DecompositionTree& t) { return to_json(t.root).dump(2) + "\n"; }

std::string tree_dot(const DecompositionTree& t) {
  const auto nodes = tree_nodes(t);
  std::map<const TreeNode*, std::size_t> id;
  for (std::size_t i = 0; i < nodes.size(); ++i) id[nodes[i]] = i;
  std::ostringstream out;
  out << "digraph deconcept {\n";
  std::vector<std::string> edges;
  for (const TreeNode* n : nodes) {
    std::string label = n->name;
    std::string extra;
    if (n->expression) {
      label += "\n" + to_string(n->expression->op) + " " + n->expression->shape.to_string();
    } else {
      extra = n->leaf == LeafKind::cycle_ref ? ", shape=box, style=dashed" : ", shape=box";
    }
    out << "  n" << id[n] << " [label=" << dot_quote(label) << extra << "];\n";
    if (!n->expression) continue;
    std::map<std::string, std::size_t> child_of;
    for (const auto& [l, child] : n->children) {
      child_of[l] = id[&child];
      edges.push_back("  n" + std::to_string(id[n]) + " -> n" + std::to_string(id[&child]) +
                      " [label=" + dot_quote(l) + "];\n");
    }
    const FinCategory shape = build_shape(n->expression->shape);
    for (MorphismIndex m = 0; m < shape.morphism_count(); ++m) {
      if (shape.is_identity(m)) continue;
      edges.push_back("  n" + std::to_string(child_of[shape.object_id(shape.src(m))]) + " -> n" +
                      std::to_string(child_of[shape.object_id(shape.dst(m))]) + " [style=dashed, label=" +
                      dot_quote(shape.morphism_id(m)) + "];\n");
    }
  }
  std::sort(edges.begin(), edges.end());
  for (const auto& e : edges) out << e;
  out << "}\n";
  return out.str();
}

// ---------------------------------------------------------------------------

std::string describe(const ConceptKB& kb, const Task& t) {
  if (const auto* h = std::get_if<HomTask>(&t)) {
    return std::string(h->side == HomSide::domain ? "Hom(-, " : "Hom(") + h->probe +
           (h->side == HomSide::domain ? ")" : ", -)");
  }
  const auto& f = std::get<FunctorTask>(t);
  return "F[" + kb.tasks.functors.at(f.functor).name + "]";
}

namespace {

FinSet counted(const std::string& id, std::size_t n) {
  FinSet s{id, {}};
  for (std::size_t i = 0; i < n; ++i) s.elements.push_back(std::to_string(i));
  return s;
}

}  // namespace

FinSet apply_task(const ConceptKB& kb, const Task& t, const SetPresheaf& a, const Caps& caps) {
  const std::string id = describe(kb, t);
  if (const auto* h = std::get_if<HomTask>(&t)) {
    const SetPresheaf y = yoneda(kb.semantic, kb.semantic->object(h->probe), a.variance);
    const auto homs = h->side == HomSide::domain ? presheaf_homs(a, y, caps) : presheaf_homs(y, a, caps);
    return counted(id, homs.size());
  }
  const auto& f = kb.tasks.functors.at(std::get<FunctorTask>(t).functor);
  FinSet out = yoneda_extension(f.functor, a, caps);
  out.id = id;
  return out;
}

FinSet apply_task(const ConceptKB& kb, const Task& t, const std::string& name, Variance variance,
                  const Caps& caps) {
  return apply_task(kb, t, concept_presheaf(kb, name, variance), caps);
}

FinSet apply_task(const ConceptKB& kb, const Task& t, const LimitExpression& e, const Caps& caps) {
  const auto* h = std::get_if<HomTask>(&t);
  const bool combine = h && ((e.op == LimitOp::projective && h->side == HomSide::codomain) ||
                             (e.op == LimitOp::inductive && h->side == HomSide::domain));
  if (!combine) return apply_task(kb, t, realize(kb, e), caps);
  // Hom(P, lim beta) = lim Hom(P, beta_i) and Hom(colim alpha, P) = lim Hom(alpha_i, P).
  const Diagram d = expression_diagram(kb, e);
  const FinCategory& c = *kb.semantic;
  const ObjectIndex p = c.object(h->probe);
  const bool out_of_p = e.op == LimitOp::projective;
  SetDiagram sd{d.shape, out_of_p ? Variance::covariant : Variance::contravariant, {}, {}};
  for (ObjectIndex x : d.objects) {
    FinSet s{"Hom", {}};
    for (MorphismIndex m : out_of_p ? c.hom(p, x) : c.hom(x, p)) s.elements.push_back(c.morphism_id(m));
    sd.values.push_back(std::move(s));
  }
  for (MorphismIndex m = 0; m < d.shape->morphism_count(); ++m) {
    const ObjectIndex from = sd.action_src(m), to = sd.action_dst(m);
    const auto src_hom = out_of_p ? c.hom(p, d.objects[from]) : c.hom(d.objects[from], p);
    const auto dst_hom = out_of_p ? c.hom(p, d.objects[to]) : c.hom(d.objects[to], p);
    FinFunction fn{sd.values[from], sd.values[to], {}};
    for (MorphismIndex u : src_hom) {
      const MorphismIndex v = out_of_p ? c.compose(d.morphisms[m], u) : c.compose(u, d.morphisms[m]);
      fn.table.push_back(static_cast<std::size_t>(std::find(dst_hom.begin(), dst_hom.end(), v) - dst_hom.begin()));
    }
    sd.actions.push_back(std::move(fn));
  }
  FinSet out = lim_matching_families(sd).apex;
  out.id = describe(kb, t);
  return out;
}

double similarity_d(const FinSet& a, const FinSet& b, bool graded) {
  if (!graded || a.size() == b.size()) return iso_sets(a, b) ? 0.0 : 1.0;
  const double lo = static_cast<double>(std::min(a.size(), b.size()));
  const double hi = static_cast<double>(std::max<std::size_t>({a.size(), b.size(), 1}));
  return 1.0 - lo / hi;
}

std::vector<Task> task_universe(const ConceptKB& kb) {
  std::vector<Task> out;
  for (const std::string& p : kb.tasks.probes) {
    out.push_back(HomTask{HomSide::domain, p});
    out.push_back(HomTask{HomSide::codomain, p});
  }
  for (std::size_t i = 0; i < kb.tasks.functors.size(); ++i) out.push_back(FunctorTask{i});
  return out;
}

TaskSampler::TaskSampler(const ConceptKB& kb, std::uint64_t seed) : order_(task_universe(kb)) {
  if (order_.empty()) throw StructuralError("the knowledge base registers no tasks");
  Rng rng(seed);
  rng.shuffle(order_);
}

const Task& TaskSampler::next() {
  const Task& t = order_[pos_];
  pos_ = (pos_ + 1) % order_.size();
  return t;
}

// ---------------------------------------------------------------------------

namespace {

bool trusted(const ConceptKB& kb, const std::string& name) { return kb.entry(name).trusted_leaf; }

}  // namespace

TaskVerdict verify_with_tasks(const ConceptKB& kb, const std::string& name, const Extractor& extractor,
                              const TaskOptions& options, const Caps& caps) {
  if (options.m < 1) throw StructuralError("m must be at least 1");
  if (!(options.eps > 0 && options.eps <= 1)) throw StructuralError("eps must lie in (0, 1]");
  const DecompositionTree tree = deconcept(kb, name, extractor);
  std::vector<const TreeNode*> nodes{&tree.root};
  if (options.hierarchical) nodes = tree_nodes(tree);
  for (const TreeNode* n : nodes) {
    if (!n->expression) {
      if (!options.hierarchical || n->leaf == LeafKind::cycle_ref || trusted(kb, n->name)) continue;
      return TaskVerdict{false, n->name, std::nullopt, 1.0, "leaf is not marked trusted"};
    }
    const LimitExpression& e = *n->expression;
    const SetPresheaf a = concept_presheaf(kb, n->name, variance_for(e.op));
    TaskSampler sampler(kb, node_seed(options.seed, n->name));
    for (std::size_t i = 0; i < options.m; ++i) {
      const Task& t = sampler.next();
      const FinSet lhs = apply_task(kb, t, a, caps);
      const FinSet rhs = apply_task(kb, t, e, caps);
      const double loss = similarity_d(lhs, rhs);
      if (loss >= options.eps) {
        return TaskVerdict{false, n->name, t, loss,
                           describe(kb, t) + " gives " + std::to_string(lhs.size()) + " on the concept and " +
                               std::to_string(rhs.size()) + " on " + describe(e)};
      }
    }
  }
  return TaskVerdict{};
}

int limit_verifier(const ConceptKB& kb, const LimitExpression& e, const std::string& name, const Caps& caps) {
  const SetPresheaf r = realize(kb, e);
  const SetPresheaf a = concept_presheaf(kb, name, variance_for(e.op));
  if (a.variance != r.variance) return 0;
  return find_natural_iso(a, r, caps) ? 1 : 0;
}

Verifier default_verifier(const Caps& caps) {
  return [caps](const ConceptKB& kb, const LimitExpression& e, const std::string& name) {
    return limit_verifier(kb, e, name, caps);
  };
}

VerifierVerdict verify_with_verifier(const ConceptKB& kb, const std::string& name, const Extractor& extractor,
                                     const Verifier& verifier) {
  const DecompositionTree tree = deconcept(kb, name, extractor);
  for (const TreeNode* n : tree_nodes(tree)) {
    if (!n->expression) {
      if (n->leaf == LeafKind::cycle_ref || trusted(kb, n->name)) continue;
      return VerifierVerdict{false, n->name, "leaf is not marked trusted"};
    }
    if (verifier(kb, *n->expression, n->name) == 0) {
      return VerifierVerdict{false, n->name, describe(*n->expression) + " is not isomorphic to the concept"};
    }
  }
  return VerifierVerdict{};
}

bool precisely_understands(const ConceptKB& kb, const std::string& name, const Extractor& extractor,
                           const Caps& caps) {
  return verify_with_verifier(kb, name, extractor, default_verifier(caps)).pass;
}

// ---------------------------------------------------------------------------

const std::vector<ShapeKind>& hypothesis_shapes() {
  static const std::vector<ShapeKind> shapes{ShapeKind::discrete(1), ShapeKind::discrete(2),
                                             ShapeKind::discrete(3), ShapeKind::discrete(4),
                                             ShapeKind::parallel_pair(), ShapeKind::cospan(),
                                             ShapeKind::span()};
  return shapes;
}

void for_each_hypothesis(const ConceptKB& kb, const std::string& name, std::size_t k,
                         const std::function<bool(const LimitExpression&)>& visit) {
  const FinCategory& c = *kb.semantic;
  std::vector<ObjectIndex> allowed;
  for (ObjectIndex x = 0; x < c.object_count(); ++x) {
    if (c.object_id(x) != name) allowed.push_back(x);
  }
  auto ok = [&](ObjectIndex x) { return c.object_id(x) != name; };
  auto id_of = [&](ObjectIndex x) { return c.object_id(x); };
  bool go = true;
  auto emit = [&](const ShapeKind& shape, const std::map<std::string, std::string>& nodes,
                  const std::map<std::string, std::string>& edges) {
    for (LimitOp op : {LimitOp::projective, LimitOp::inductive}) {
      if (go) go = visit(LimitExpression{op, shape, nodes, edges});
    }
  };
  for (const ShapeKind& shape : hypothesis_shapes()) {
    if (!go) return;
    const std::size_t objects = shape.tag() == ShapeKind::Tag::discrete        ? shape.size()
                                : shape.tag() == ShapeKind::Tag::parallel_pair ? 2
                                                                               : 3;
    if (objects > k) continue;
    switch (shape.tag()) {
      case ShapeKind::Tag::discrete: {
        std::vector<std::size_t> pick;
        std::function<void(std::size_t)> rec = [&](std::size_t from) {
          if (!go) return;
          if (pick.size() == shape.size()) {
            std::map<std::string, std::string> nodes;
            for (std::size_t i = 0; i < pick.size(); ++i) nodes["I" + std::to_string(i + 1)] = id_of(allowed[pick[i]]);
            emit(shape, nodes, {});
            return;
          }
          for (std::size_t i = from; i < allowed.size(); ++i) {
            pick.push_back(i);
            rec(i);
            pick.pop_back();
          }
        };
        rec(0);
        break;
      }
      case ShapeKind::Tag::parallel_pair:
        for (MorphismIndex m1 = 0; m1 < c.morphism_count() && go; ++m1) {
          if (!ok(c.src(m1)) || !ok(c.dst(m1))) continue;
          for (MorphismIndex m2 : c.hom(c.src(m1), c.dst(m1))) {
            if (m2 < m1) continue;
            emit(shape, {{"I1", id_of(c.src(m1))}, {"I2", id_of(c.dst(m1))}},
                 {{"m1", c.morphism_id(m1)}, {"m2", c.morphism_id(m2)}});
          }
        }
        break;
      case ShapeKind::Tag::cospan:
      case ShapeKind::Tag::span: {
        const bool co = shape.tag() == ShapeKind::Tag::cospan;
        for (MorphismIndex m1 = 0; m1 < c.morphism_count() && go; ++m1) {
          if (!ok(c.src(m1)) || !ok(c.dst(m1))) continue;
          for (MorphismIndex m2 = m1; m2 < c.morphism_count() && go; ++m2) {
            if (!ok(c.src(m2)) || !ok(c.dst(m2))) continue;
            if (co ? c.dst(m2) != c.dst(m1) : c.src(m2) != c.src(m1)) continue;
            const std::map<std::string, std::string> nodes =
                co ? std::map<std::string, std::string>{{"I1", id_of(c.src(m1))},
                                                        {"I2", id_of(c.src(m2))},
                                                        {"I3", id_of(c.dst(m1))}}
                   : std::map<std::string, std::string>{{"I1", id_of(c.dst(m1))},
                                                        {"I2", id_of(c.dst(m2))},
                                                        {"I3", id_of(c.src(m1))}};
            emit(shape, nodes, {{"m1", c.morphism_id(m1)}, {"m2", c.morphism_id(m2)}});
          }
        }
        break;
      }
      case ShapeKind::Tag::custom:
        break;
    }
  }
}

LearnResult learn_concept(const ConceptKB& kb, const std::string& name, const LearnOptions& options,
                          const Caps& caps) {
  if (options.m < 1) throw StructuralError("m must be at least 1");
  if (!kb.resolves(name)) throw UnknownIdError("unknown concept '" + name + "'");
  // The m sampled tasks, grouped so each distinct task is evaluated once.
  TaskSampler sampler(kb, node_seed(options.seed, name));
  const std::size_t universe = task_universe(kb).size();
  std::vector<Task> distinct;
  std::vector<std::size_t> weight;
  for (std::size_t i = 0; i < options.m; ++i) {
    const Task& t = sampler.next();
    if (i < universe) {
      distinct.push_back(t);
      weight.push_back(1);
    } else {
      ++weight[i % universe];
    }
  }
  std::map<std::pair<std::size_t, Variance>, FinSet> target;
  auto target_of = [&](std::size_t i, Variance v) -> const FinSet& {
    auto it = target.find({i, v});
    if (it == target.end()) it = target.emplace(std::make_pair(i, v), apply_task(kb, distinct[i], name, v, caps)).first;
    return it->second;
  };

  LearnResult result;
  result.best_loss = static_cast<double>(options.m) + 1;
  for_each_hypothesis(kb, name, options.k, [&](const LimitExpression& e) {
    ++result.tried;
    double total = 0;
    const Variance v = variance_for(e.op);
    for (std::size_t i = 0; i < distinct.size() && total < result.best_loss; ++i) {
      total += static_cast<double>(weight[i]) * similarity_d(target_of(i, v), apply_task(kb, distinct[i], e, caps));
    }
    if (total < result.best_loss) {
      result.best_loss = total;
      result.best = e;
    }
    if (total == 0) {
      result.expression = e;
      return false;
    }
    return true;
  });
  if (!result.best) result.best_loss = 0;
  return result;
}

std::optional<ConceptKB> supervised_repair(const ConceptKB& kb, const std::string& name,
                                           const LimitExpression& target, const Caps& caps) {
  if (limit_verifier(kb, target, name, caps) != 1) return std::nullopt;
  ConceptKB out = kb;
  ConceptEntry& entry = out.concepts[name];
  if (entry.expressions.empty()) {
    entry.expressions.push_back(target);
  } else {
    entry.expressions.front() = target;
  }
  return out;
}

// ---------------------------------------------------------------------------

Analogy diagram_analogy(const LimitExpression& d1, const LimitExpression& d2, const Caps& caps) {
  const FinCategory s1 = build_shape(d1.shape);
  const FinCategory s2 = build_shape(d2.shape);
  auto arrows = [](const FinCategory& s) {
    std::vector<MorphismIndex> out;
    for (MorphismIndex m = 0; m < s.morphism_count(); ++m) {
      if (!s.is_identity(m)) out.push_back(m);
    }
    return out;
  };
  const auto a1 = arrows(s1), a2 = arrows(s2);
  const std::size_t total1 = s1.object_count() + a1.size() + 1;
  const std::size_t total2 = s2.object_count() + a2.size() + 1;
  const std::size_t denom = std::max(total1, total2);
  constexpr std::size_t unmapped = static_cast<std::size_t>(-1);

  auto concept_of = [](const LimitExpression& e, const FinCategory& s, ObjectIndex x) {
    const auto it = e.nodes.find(s.object_id(x));
    return it == e.nodes.end() ? std::string() : it->second;
  };

  Analogy best;
  std::size_t best_matched = 0;
  bool have = false;
  std::size_t visited = 0;
  std::vector<std::size_t> map(s1.object_count(), unmapped);
  std::vector<bool> used(s2.object_count(), false);

  auto evaluate = [&]() {
    std::map<std::string, std::string> fwd, back;
    std::size_t matched = d1.op == d2.op ? 1 : 0;
    for (ObjectIndex x = 0; x < map.size(); ++x) {
      if (map[x] == unmapped) continue;
      const std::string c1 = concept_of(d1, s1, x), c2 = concept_of(d2, s2, map[x]);
      const auto f = fwd.find(c1);
      const auto b = back.find(c2);
      if ((f != fwd.end() && f->second != c2) || (b != back.end() && b->second != c1)) return;
      fwd[c1] = c2;
      back[c2] = c1;
      ++matched;
    }
    std::map<std::string, std::string> arrow_map;
    std::vector<bool> taken(s2.morphism_count(), false);
    for (MorphismIndex m : a1) {
      const std::size_t from = map[s1.src(m)], to = map[s1.dst(m)];
      if (from == unmapped || to == unmapped) continue;
      for (MorphismIndex n : a2) {
        if (!taken[n] && s2.src(n) == from && s2.dst(n) == to) {
          taken[n] = true;
          arrow_map[s1.morphism_id(m)] = s2.morphism_id(n);
          ++matched;
          break;
        }
      }
    }
    if (have && matched <= best_matched) return;
    have = true;
    best_matched = matched;
    best.objects.clear();
    for (ObjectIndex x = 0; x < map.size(); ++x) {
      if (map[x] != unmapped) best.objects[s1.object_id(x)] = s2.object_id(map[x]);
    }
    best.morphisms = arrow_map;
    best.concepts = fwd;
  };

  std::function<void(ObjectIndex)> rec = [&](ObjectIndex x) {
    if (++visited > caps.search_budget) throw CapacityError("analogy search exceeded the search budget");
    if (x == map.size()) {
      evaluate();
      return;
    }
    for (ObjectIndex y = 0; y < s2.object_count(); ++y) {
      if (used[y]) continue;
      used[y] = true;
      map[x] = y;
      rec(x + 1);
      used[y] = false;
    }
    map[x] = unmapped;
    rec(x + 1);
  };
  rec(0);
  best.score = static_cast<double>(best_matched) / static_cast<double>(denom);
  best.full = best_matched == total1 && total1 == total2;
  return best;
}

// ---------------------------------------------------------------------------

std::optional<LimitExpression> replace_node(const ConceptKB& kb, const LimitExpression& e, const std::string& node,
                                            const std::string& name) {
  LimitExpression out = e;
  if (!out.nodes.count(node)) return std::nullopt;
  out.nodes[node] = name;
  const FinCategory& c = *kb.semantic;
  bool thin = true;
  for (ObjectIndex x = 0; x < c.object_count() && thin; ++x) {
    for (ObjectIndex y = 0; y < c.object_count() && thin; ++y) thin = c.hom(x, y).size() <= 1;
  }
  const FinCategory shape = build_shape(e.shape);
  if (thin) {
    for (MorphismIndex m = 0; m < shape.morphism_count(); ++m) {
      if (shape.is_identity(m)) continue;
      const auto from = c.find_object(out.nodes[shape.object_id(shape.src(m))]);
      const auto to = c.find_object(out.nodes[shape.object_id(shape.dst(m))]);
      if (!from || !to || c.hom(*from, *to).empty()) return std::nullopt;
      out.edges[shape.morphism_id(m)] = c.morphism_id(c.hom(*from, *to).front());
    }
  }
  try {
    expression_diagram(kb, out);
  } catch (const Error&) {
    return std::nullopt;
  }
  return out;
}

namespace {

std::optional<ObjectIndex> bound(const FinCategory& p, ObjectIndex a, ObjectIndex b, bool upper) {
  auto leq = [&](ObjectIndex x, ObjectIndex y) { return !p.hom(x, y).empty(); };
  for (ObjectIndex u = 0; u < p.object_count(); ++u) {
    if (upper ? !(leq(a, u) && leq(b, u)) : !(leq(u, a) && leq(u, b))) continue;
    bool extreme = true;
    for (ObjectIndex v = 0; v < p.object_count() && extreme; ++v) {
      if (upper ? (leq(a, v) && leq(b, v)) : (leq(v, a) && leq(v, b))) extreme = upper ? leq(u, v) : leq(v, u);
    }
    if (extreme) return u;
  }
  return std::nullopt;
}

}  // namespace

ConceptKB random_kb(Rng& rng, const KbBounds& bounds) {
  ConceptKB kb;
  kb.semantic = share(random_lattice(rng, bounds.max_objects));
  const FinCategory& c = *kb.semantic;
  auto name = [&](ObjectIndex x) { return c.object_id(x); };
  auto arrow = [&](ObjectIndex x, ObjectIndex y) { return c.morphism_id(c.hom(x, y).front()); };
  for (ObjectIndex x = 0; x < c.object_count(); ++x) {
    kb.tasks.probes.push_back(name(x));
    std::vector<LimitExpression> candidates;
    for (ObjectIndex a = 0; a < c.object_count(); ++a) {
      for (ObjectIndex b = a + 1; b < c.object_count(); ++b) {
        if (a == x || b == x) continue;
        const auto meet = bound(c, a, b, false);
        const auto join = bound(c, a, b, true);
        if (meet == x) {
          candidates.push_back({LimitOp::projective, ShapeKind::discrete(2), {{"I1", name(a)}, {"I2", name(b)}}, {}});
          if (join && *join != x) {
            candidates.push_back({LimitOp::projective, ShapeKind::cospan(),
                                  {{"I1", name(a)}, {"I2", name(b)}, {"I3", name(*join)}},
                                  {{"m1", arrow(a, *join)}, {"m2", arrow(b, *join)}}});
          }
        }
        if (join == x) {
          candidates.push_back({LimitOp::inductive, ShapeKind::discrete(2), {{"I1", name(a)}, {"I2", name(b)}}, {}});
          if (meet && *meet != x) {
            candidates.push_back({LimitOp::inductive, ShapeKind::span(),
                                  {{"I1", name(a)}, {"I2", name(b)}, {"I3", name(*meet)}},
                                  {{"m1", arrow(*meet, a)}, {"m2", arrow(*meet, b)}}});
          }
        }
      }
    }
    ConceptEntry entry;
    entry.trusted_leaf = true;
    if (!candidates.empty() && rng.chance(70)) {
      LimitExpression e = candidates[rng.below(candidates.size())];
      if (rng.chance(bounds.corrupt_percent)) {
        for (int attempt = 0; attempt < 8; ++attempt) {
          const std::string node = "I" + std::to_string(1 + rng.below(e.nodes.size()));
          if (auto r = replace_node(kb, e, node, name(rng.below(c.object_count())))) {
            e = *r;
            break;
          }
        }
      }
      entry.expressions.push_back(e);
    }
    kb.concepts[name(x)] = entry;
  }
  kb.tasks.functors.push_back({"F", random_set_functor(rng, kb.semantic, Variance::covariant, 2)});
  return kb;
}

}  // namespace catlim
