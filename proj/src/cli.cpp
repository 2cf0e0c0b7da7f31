#include "catlim/cli.hpp"

#include <algorithm>
#include <sstream>

#include "CLI11.hpp"
#include "catlim/io.hpp"

namespace catlim {

namespace {

struct Options {
  std::string format = "text";
  std::uint64_t seed = 0;
  std::vector<std::string> paths;
  std::string kb;
  std::string name;
  std::string other;
  std::string mode = "tasks";
  std::size_t m = 50;
  double eps = 0.5;
  std::size_t k = 4;
  bool dot = false;
  std::string supervised;
};

std::string elements_text(const FinSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? ", " : "") + s.elements[i];
  return out + "}";
}

std::string table_text(const Json& table) {
  std::string out;
  for (const auto& [k, v] : table.items()) out += (out.empty() ? "" : ", ") + k + " -> " + v.get<std::string>();
  return out;
}

// ---------------------------------------------------------------------------
// validate

Json validate_document(const std::filesystem::path& path) {
  const Json j = read_json(path);
  Json r;
  r["path"] = path.string();
  std::vector<std::string> violations;
  auto category_violations = [&](const Json& cj) {
    const FinCategory c = category_from_json(cj);
    for (const Violation& v : validate_category(c).violations) violations.push_back(to_string(v.kind) + ": " + v.message);
  };
  if (j.is_object() && j.contains("semantic_category")) {
    r["kind"] = "knowledge_base";
    const Json& sc = j.at("semantic_category");
    category_violations(sc.is_string() ? read_json(path.parent_path() / sc.get<std::string>()) : sc);
    if (violations.empty()) {
      try {
        (void)kb_from_json(j, path.parent_path());
      } catch (const LawError& e) {
        violations.push_back(e.what());
      }
    }
  } else if (j.is_object() && j.contains("shape")) {
    r["kind"] = "diagram";
    violations = functor_law_violations(diagram_from_json(j));
  } else if (j.is_object() && j.contains("values")) {
    r["kind"] = "functor";
    violations = functor_law_violations(functor_from_json(j, nullptr, path.parent_path()));
  } else if (j.is_object() && j.contains("objects")) {
    r["kind"] = "category";
    category_violations(j);
  } else {
    throw ParseError("'" + path.string() + "' is not a category, diagram, functor or knowledge base document");
  }
  r["valid"] = violations.empty();
  r["violations"] = violations;
  return r;
}

int cmd_validate(const Options& o, Json& result) {
  result["documents"] = Json::array();
  bool ok = true;
  for (const auto& p : o.paths) {
    Json d = validate_document(p);
    ok = ok && d["valid"].get<bool>();
    result["documents"].push_back(std::move(d));
  }
  result["valid"] = ok;
  return ok ? exit_ok : exit_failure;
}

std::string validate_text(const Json& r) {
  std::ostringstream out;
  for (const Json& d : r["documents"]) {
    const auto& v = d["violations"];
    out << d["path"].get<std::string>() << ": " << d["kind"].get<std::string>() << ", ";
    if (v.empty()) {
      out << "valid\n";
    } else {
      out << v.size() << (v.size() == 1 ? " violation\n" : " violations\n");
      for (const auto& s : v) out << "  " << s.get<std::string>() << "\n";
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// limit / colimit

int cmd_limit(const Options& o, LimitKind kind, Json& result) {
  const SetDiagram d = diagram_from_json(read_json(o.paths.front()));
  require_functor_laws(d);
  const LimitResult r = kind == LimitKind::projective ? lim_matching_families(d) : colim(d);
  result = limit_result_to_json(r, *d.base);
  result["size"] = r.apex.size();
  return exit_ok;
}

std::string limit_text(const Json& r) {
  std::ostringstream out;
  const FinSet apex = set_from_json(r["apex"], "apex");
  out << r["kind"].get<std::string>() << " (" << apex.size() << "): " << elements_text(apex) << "\n";
  for (const auto& [obj, table] : r["legs"].items()) out << "  leg " << obj << ": " << table_text(table) << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// laws

int cmd_laws(const Options& o, Json& result) {
  const auto entries = manifest_from_json(read_json(o.paths.front()));
  result["reports"] = Json::array();
  std::size_t counts[3] = {0, 0, 0};
  for (const auto& e : entries) {
    for (const LawReport& r : run_manifest_entry(e)) {
      ++counts[static_cast<int>(r.verdict)];
      result["reports"].push_back(law_report_to_json(r));
    }
  }
  result["summary"] = {{"holds", counts[0]}, {"fails", counts[1]}, {"not_applicable", counts[2]}};
  return counts[1] == 0 ? exit_ok : exit_failure;
}

std::string laws_text(const Json& r) {
  std::ostringstream out;
  for (const Json& rep : r["reports"]) {
    out << rep["verdict"].get<std::string>() << "  " << rep["law"].get<std::string>() << "  "
        << rep["instance"].get<std::string>() << "\n";
    if (!rep["witness"].get<std::string>().empty()) out << "    " << rep["witness"].get<std::string>() << "\n";
    if (!rep["counterexample"].empty()) out << "    counterexample: " << table_text(rep["counterexample"]) << "\n";
  }
  const Json& s = r["summary"];
  out << s["holds"].get<std::size_t>() << " holds, " << s["fails"].get<std::size_t>() << " fails, "
      << s["not_applicable"].get<std::size_t>() << " not applicable\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// concept commands

Json task_json(const ConceptKB& kb, const std::optional<Task>& t) {
  return t ? Json(describe(kb, *t)) : Json(nullptr);
}

int cmd_verify(const Options& o, Json& result) {
  const ConceptKB kb = load_kb(o.kb);
  if (o.m == 0) throw StructuralError("--m must be at least 1");
  if (!(o.eps > 0 && o.eps <= 1)) throw StructuralError("--eps must lie in (0, 1]");
  result["concept"] = o.name;
  result["mode"] = o.mode;
  if (o.mode == "tasks") {
    const TaskVerdict v = verify_with_tasks(kb, o.name, table_extractor(), {o.seed, o.m, o.eps, true});
    result["pass"] = v.pass;
    result["node"] = v.node;
    result["task"] = task_json(kb, v.task);
    result["loss"] = v.loss;
    result["detail"] = v.detail;
    return v.pass ? exit_ok : exit_failure;
  }
  const VerifierVerdict v = verify_with_verifier(kb, o.name, table_extractor(), default_verifier());
  result["pass"] = v.pass;
  result["node"] = v.node;
  result["detail"] = v.detail;
  return v.pass ? exit_ok : exit_failure;
}

std::string verify_text(const Json& r) {
  std::ostringstream out;
  out << (r["pass"].get<bool>() ? "pass " : "fail ") << r["concept"].get<std::string>() << " ("
      << r["mode"].get<std::string>() << ")";
  if (!r["pass"].get<bool>()) {
    out << "\n  node: " << r["node"].get<std::string>();
    if (r.contains("task") && !r["task"].is_null()) {
      out << "\n  task: " << r["task"].get<std::string>() << ", loss " << r["loss"].get<double>();
    }
    if (!r["detail"].get<std::string>().empty()) out << "\n  " << r["detail"].get<std::string>();
  }
  return out.str() + "\n";
}

int cmd_learn(const Options& o, Json& result) {
  const ConceptKB kb = load_kb(o.kb);
  result["concept"] = o.name;
  if (!o.supervised.empty()) {
    const LimitExpression target = expression_from_json(read_json(o.supervised));
    (void)expression_diagram(kb, target);
    const auto repaired = supervised_repair(kb, o.name, target);
    result["mode"] = "supervised";
    result["expression"] = expression_to_json(target);
    result["repaired"] = repaired.has_value();
    if (!repaired) return exit_failure;
    result["kb"] = kb_to_json(*repaired);
    return exit_ok;
  }
  if (o.m == 0 || o.k == 0) throw StructuralError("--m and --k must be at least 1");
  const LearnResult r = learn_concept(kb, o.name, {o.k, o.m, o.seed});
  result["mode"] = "search";
  result["found"] = r.expression.has_value();
  result["expression"] = r.expression ? expression_to_json(*r.expression) : Json(nullptr);
  result["tried"] = r.tried;
  result["best_loss"] = r.best_loss;
  result["best"] = r.best ? expression_to_json(*r.best) : Json(nullptr);
  return r.expression ? exit_ok : exit_failure;
}

std::string learn_text(const Json& r) {
  std::ostringstream out;
  const std::string name = r["concept"].get<std::string>();
  if (r["mode"] == "supervised") {
    out << (r["repaired"].get<bool>() ? "repaired " : "rejected ") << name << ": "
        << describe(expression_from_json(r["expression"])) << "\n";
    return out.str();
  }
  if (r["found"].get<bool>()) {
    out << name << " = " << describe(expression_from_json(r["expression"])) << " (" << r["tried"].get<std::size_t>()
        << " tried)\n";
  } else {
    out << "no expression for " << name << " (" << r["tried"].get<std::size_t>() << " tried, best loss "
        << r["best_loss"].get<double>() << ")\n";
    if (!r["best"].is_null()) out << "  best: " << describe(expression_from_json(r["best"])) << "\n";
  }
  return out.str();
}

int cmd_analogy(const Options& o, Json& result) {
  const ConceptKB kb = load_kb(o.kb);
  auto expr = [&](const std::string& n) {
    auto e = extract_limit(kb, n);
    if (!e) throw StructuralError("concept '" + n + "' has no limit expression");
    return *e;
  };
  const Analogy a = diagram_analogy(expr(o.name), expr(o.other));
  result["concept1"] = o.name;
  result["concept2"] = o.other;
  result["full"] = a.full;
  result["score"] = a.score;
  result["objects"] = a.objects;
  result["morphisms"] = a.morphisms;
  result["concepts"] = a.concepts;
  return exit_ok;
}

std::string analogy_text(const Json& r) {
  std::ostringstream out;
  out << r["concept1"].get<std::string>() << " ~ " << r["concept2"].get<std::string>() << ": score "
      << r["score"].get<double>() << (r["full"].get<bool>() ? " (full)" : " (partial)") << "\n";
  if (!r["objects"].empty()) out << "  objects: " << table_text(r["objects"]) << "\n";
  if (!r["morphisms"].empty()) out << "  morphisms: " << table_text(r["morphisms"]) << "\n";
  if (!r["concepts"].empty()) out << "  concepts: " << table_text(r["concepts"]) << "\n";
  return out.str();
}

int run(CLI::App& app, const Options& o, std::ostream& out) {
  const std::string cmd = app.get_subcommands().front()->get_name();
  const bool structured = o.format == "structured";
  if (cmd == "deconcept") {
    const auto tree = deconcept(load_kb(o.kb), o.name, table_extractor());
    out << (o.dot ? tree_dot(tree) : structured ? tree_json(tree) + "\n" : tree_text(tree));
    return exit_ok;
  }
  Json result = Json::object();
  int code = exit_ok;
  std::string (*text)(const Json&) = nullptr;
  if (cmd == "validate") {
    code = cmd_validate(o, result), text = validate_text;
  } else if (cmd == "limit" || cmd == "colimit") {
    code = cmd_limit(o, cmd == "limit" ? LimitKind::projective : LimitKind::inductive, result), text = limit_text;
  } else if (cmd == "laws") {
    code = cmd_laws(o, result), text = laws_text;
  } else if (cmd == "verify") {
    code = cmd_verify(o, result), text = verify_text;
  } else if (cmd == "learn") {
    code = cmd_learn(o, result), text = learn_text;
  } else {
    code = cmd_analogy(o, result), text = analogy_text;
  }
  out << (structured ? result.dump(2) + "\n" : text(result));
  return code;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite limits, presheaves and concept decomposition", "catlim"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--format", o.format, "text or structured")->check(CLI::IsMember({"text", "structured"}));
  app.add_option("--seed", o.seed, "seed for samplers and generators");

  auto* validate = app.add_subcommand("validate", "check category, diagram, functor or KB documents");
  validate->add_option("paths", o.paths)->required()->check(CLI::ExistingFile);
  for (const char* name : {"limit", "colimit"}) {
    app.add_subcommand(name, std::string("compute the ") + name + " of a diagram of finite sets")
        ->add_option("diagram", o.paths)->required()->expected(1)->check(CLI::ExistingFile);
  }
  app.add_subcommand("laws", "run a law manifest")->add_option("manifest", o.paths)->required()->expected(1)
      ->check(CLI::ExistingFile);

  auto kb_command = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("kb", o.kb)->required()->check(CLI::ExistingFile);
    sub->add_option("concept", o.name)->required();
    return sub;
  };
  kb_command("deconcept", "print the decomposition tree")->add_flag("--dot", o.dot, "emit DOT");
  auto* verify = kb_command("verify", "verify a concept against its decomposition");
  verify->add_option("--mode", o.mode)->check(CLI::IsMember({"tasks", "verifier"}));
  verify->add_option("--m", o.m, "tasks per node");
  verify->add_option("--eps", o.eps, "loss threshold");
  auto* learn = kb_command("learn", "search for a limit expression of a concept");
  learn->add_option("--k", o.k, "largest shape size");
  learn->add_option("--m", o.m, "tasks per hypothesis");
  learn->add_option("--supervised", o.supervised, "install this expression document if it verifies")
      ->check(CLI::ExistingFile);
  kb_command("analogy", "compare the expressions of two concepts")->add_option("other", o.other)->required();

  for (auto* sub : app.get_subcommands({})) {
    sub->fallthrough();
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return exit_input;
  }

  try {
    return run(app, o, out);
  } catch (const CapacityError& e) {
    err << "capacity: " << e.what() << "\n";
    return exit_capacity;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_input;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_input;
  }
}

}  // namespace catlim
