#include <gtest/gtest.h>

#include "catlim/concept.hpp"
#include "catlim/io.hpp"

using namespace catlim;

namespace {

std::filesystem::path fixture(const std::string& rel) { return std::filesystem::path(CATLIM_SOURCE_DIR) / "fixtures" / rel; }

ConceptKB dp_kb() { return load_kb(fixture("kb/dynamic_programming.json")); }

LimitExpression point(const std::string& x) {
  return {LimitOp::projective, ShapeKind::discrete(1), {{"I1", x}}, {}};
}

bool leq(const FinCategory& c, const std::string& a, const std::string& b) {
  return !c.hom(c.object(a), c.object(b)).empty();
}

// Greatest lower bound (or least upper bound) of `xs` in a poset, by
// scanning all objects.
std::optional<std::string> naive_bound(const FinCategory& c, const std::vector<std::string>& xs, bool lower) {
  std::vector<std::string> bounds;
  for (ObjectIndex z = 0; z < c.object_count(); ++z) {
    const std::string& id = c.object_id(z);
    bool ok = true;
    for (const auto& x : xs) ok = ok && (lower ? leq(c, id, x) : leq(c, x, id));
    if (ok) bounds.push_back(id);
  }
  for (const auto& b : bounds) {
    bool best = true;
    for (const auto& o : bounds) best = best && (lower ? leq(c, o, b) : leq(c, b, o));
    if (best) return b;
  }
  return std::nullopt;
}

// Discrete shapes only: pro means meet, ind means join.
bool oracle_holds(const ConceptKB& kb, const LimitExpression& e, const std::string& name) {
  std::vector<std::string> xs;
  for (const auto& [k, v] : e.nodes) xs.push_back(v);
  const auto b = naive_bound(*kb.semantic, xs, e.op == LimitOp::projective);
  return b && *b == name;
}

}  // namespace

TEST(Concept, ExtractorTakesFirstExpressionOrNothing) {
  const ConceptKB kb = dp_kb();
  EXPECT_FALSE(extract_limit(kb, "recursion_step").has_value());
  const auto wc = load_kb(fixture("kb/wall_clock.json"));
  ASSERT_TRUE(extract_limit(wc, "wall_clock"));
  EXPECT_EQ(extract_limit(wc, "wall_clock")->shape.to_string(), "cospan");
  const auto dp = extract_limit(kb, "dynamic_programming");
  ASSERT_TRUE(dp);
  EXPECT_EQ(*dp, kb.concepts.at("dynamic_programming").expressions.front());
  EXPECT_THROW(extract_limit(kb, "nonexistent"), UnknownIdError);
}

TEST(Concept, PointExpressionRealizesRepresentable) {
  const ConceptKB kb = dp_kb();
  for (ObjectIndex x = 0; x < kb.semantic->object_count(); ++x) {
    const std::string& id = kb.semantic->object_id(x);
    EXPECT_TRUE(find_natural_iso(realize(kb, point(id)), yoneda_h(kb.semantic, x))) << id;
    EXPECT_EQ(limit_verifier(kb, point(id), id), 1);
  }
}

TEST(Concept, InductiveDiscretePairIsPointwiseSumOfHoms) {
  const ConceptKB kb = dp_kb();
  const LimitExpression e = kb.concepts.at("optimal_state").expressions.front();
  const SetPresheaf formal = formal_colimit(kb, e);
  const FinCategory& c = *kb.semantic;
  for (ObjectIndex z = 0; z < c.object_count(); ++z) {
    const std::size_t expect = c.hom(z, c.object("memo_table")).size() + c.hom(z, c.object("memo_array")).size();
    EXPECT_EQ(formal.at(z).size(), expect) << c.object_id(z);
  }
}

TEST(Concept, ProjectiveCospanIsPointwisePullbackOfHoms) {
  const ConceptKB kb = dp_kb();
  const LimitExpression e = kb.concepts.at("for_loop").expressions.front();
  const SetPresheaf r = realize(kb, e);
  const FinCategory& c = *kb.semantic;
  const MorphismIndex m1 = c.morphism(e.edges.at("m1")), m2 = c.morphism(e.edges.at("m2"));
  for (ObjectIndex z = 0; z < c.object_count(); ++z) {
    std::size_t pairs = 0;
    for (MorphismIndex u : c.hom(z, c.object("loop"))) {
      for (MorphismIndex v : c.hom(z, c.object("counter_variable"))) pairs += c.compose(m1, u) == c.compose(m2, v);
    }
    EXPECT_EQ(r.at(z).size(), pairs) << c.object_id(z);
  }
}

TEST(Concept, FixtureExpressionsMatchNaiveBounds) {
  const ConceptKB kb = dp_kb();
  for (const auto& [name, entry] : kb.concepts) {
    for (const auto& e : entry.expressions) {
      if (e.shape.to_string().rfind("discrete", 0) != 0) continue;
      EXPECT_EQ(limit_verifier(kb, e, name), oracle_holds(kb, e, name) ? 1 : 0) << name << ": " << describe(e);
    }
  }
}

TEST(Concept, BrokenNaturalityWithMatchingCardinalities) {
  CategorySpec spec;
  spec.name = "Z3";
  spec.objects = {"M"};
  spec.morphisms = {{"e", "M", "M"}, {"r", "M", "M"}, {"s", "M", "M"}};
  spec.identities = {{"M", "e"}};
  spec.compose = {{"r", "r", "s"}, {"r", "s", "e"}, {"s", "r", "e"}, {"s", "s", "r"}};
  ConceptKB kb;
  kb.semantic = share(FinCategory::from_spec(spec));
  // Three points with a trivial action: same size as h(M), not isomorphic.
  const FinSet three = make_set("T", {"0", "1", "2"});
  kb.overrides["twisted"] = SetPresheaf{kb.semantic, Variance::contravariant, {three},
                                        {identity_function(three), identity_function(three), identity_function(three)}};
  validate_kb(kb);
  EXPECT_EQ(realize(kb, point("M")).at(0).size(), 3u);
  EXPECT_EQ(limit_verifier(kb, point("M"), "twisted"), 0);
  EXPECT_EQ(limit_verifier(kb, point("M"), "M"), 1);
}

TEST(Concept, OverrideBreakingFunctorLawsIsRejected) {
  Json j = read_json(fixture("kb/wall_clock.json"));
  j["presheaf_overrides"]["odd"] = {
      {"variance", "contravariant"},
      {"values", Json::object()},
  };
  for (const auto& o : j["semantic_category"]["objects"]) j["presheaf_overrides"]["odd"]["values"][o.get<std::string>()] = Json::array({"p", "q"});
  j["presheaf_overrides"]["odd"]["actions"] = Json::object();
  for (const auto& m : j["semantic_category"]["morphisms"]) {
    j["presheaf_overrides"]["odd"]["actions"][m["id"].get<std::string>()] = {{"p", "q"}, {"q", "p"}};
  }
  // clock<=thing and wall_clock<=clock each swap, so their composite must
  // be the identity, but wall_clock<=thing swaps too.
  EXPECT_THROW(kb_from_json(j), Error);
}

TEST(Concept, WallClockVerifierAndMutation) {
  const auto good = load_kb(fixture("kb/wall_clock.json"));
  const auto bad = load_kb(fixture("kb/wall_clock_corrupted.json"));
  const auto e_good = *extract_limit(good, "wall_clock");
  const auto e_bad = *extract_limit(bad, "wall_clock");
  EXPECT_EQ(limit_verifier(good, e_good, "wall_clock"), 1);
  EXPECT_EQ(limit_verifier(bad, e_bad, "wall_clock"), 0);
  EXPECT_TRUE(precisely_understands(good, "wall_clock", table_extractor()));
  const auto v = verify_with_verifier(bad, "wall_clock", table_extractor(), default_verifier());
  EXPECT_FALSE(v.pass);
  EXPECT_EQ(v.node, "wall_clock");
  const auto t = verify_with_tasks(bad, "wall_clock", table_extractor());
  EXPECT_FALSE(t.pass);
  EXPECT_EQ(t.node, "wall_clock");
  ASSERT_TRUE(t.task);
  EXPECT_EQ(t.loss, 1.0);
}

TEST(Concept, BasicConceptIsSingleNodeAndPassesVacuously) {
  const ConceptKB kb = dp_kb();
  const auto tree = deconcept(kb, "recursion_step", table_extractor());
  EXPECT_EQ(tree.root.leaf, LeafKind::basic);
  EXPECT_TRUE(tree.root.children.empty());
  EXPECT_TRUE(verify_with_tasks(kb, "recursion_step", table_extractor()).pass);
  EXPECT_TRUE(verify_with_verifier(kb, "recursion_step", table_extractor(), default_verifier()).pass);
}

TEST(Concept, UntrustedLeafFailsBothVerifiers) {
  Json j = read_json(fixture("kb/wall_clock.json"));
  j["concepts"]["wall_mountable"]["trusted_leaf"] = false;
  const ConceptKB kb = kb_from_json(j);
  const auto v = verify_with_verifier(kb, "wall_clock", table_extractor(), default_verifier());
  EXPECT_FALSE(v.pass);
  EXPECT_EQ(v.node, "wall_mountable");
  const auto t = verify_with_tasks(kb, "wall_clock", table_extractor());
  EXPECT_FALSE(t.pass);
  EXPECT_EQ(t.node, "wall_mountable");
}

TEST(Concept, DecompositionOfDynamicProgramming) {
  const ConceptKB kb = dp_kb();
  const auto tree = deconcept(kb, "dynamic_programming", table_extractor());
  ASSERT_EQ(tree.root.children.size(), 3u);
  EXPECT_EQ(tree.root.expression->op, LimitOp::projective);
  std::vector<std::string> names;
  for (const TreeNode* n : tree_nodes(tree)) names.push_back(n->name);
  const std::vector<std::string> expect = {
      "dynamic_programming", "problem_decomposition", "split_into_halves", "split_into_prefixes",
      "sub_problem_recursion", "for_loop", "loop", "counter_variable", "program_construct",
      "recursion_step", "boundary_case", "optimal_state", "memo_table", "memo_array"};
  EXPECT_EQ(names, expect);
  EXPECT_EQ(tree.root.children[0].second.expression->op, LimitOp::inductive);
  EXPECT_EQ(tree_text(tree), tree_text(deconcept(kb, "dynamic_programming", table_extractor())));
  EXPECT_NE(tree_dot(tree).find("digraph"), std::string::npos);
  EXPECT_NO_THROW((void)Json::parse(tree_json(tree)));
}

TEST(Concept, CycleBecomesFlaggedLeaf) {
  const auto kb = load_kb(fixture("kb/cyclic.json"));
  const auto tree = deconcept(kb, "ab", table_extractor());
  bool flagged = false;
  for (const TreeNode* n : tree_nodes(tree)) flagged = flagged || (n->leaf == LeafKind::cycle_ref && n->name == "ab");
  EXPECT_TRUE(flagged);
  EXPECT_LT(tree_nodes(tree).size(), 10u);
}

TEST(Concept, DepthCapNamesThePath) {
  const ConceptKB kb = dp_kb();
  try {
    (void)deconcept(kb, "dynamic_programming", table_extractor(), 3);
    FAIL() << "expected CapacityError";
  } catch (const CapacityError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("dynamic_programming"), std::string::npos);
    EXPECT_NE(msg.find("for_loop"), std::string::npos);
  }
  EXPECT_NO_THROW((void)deconcept(kb, "dynamic_programming", table_extractor(), 4));
}

TEST(Concept, RandomExtractorIsSeededAndOrderFree) {
  const ConceptKB kb = dp_kb();
  bool saw_second = false;
  for (std::uint64_t seed = 0; seed < 16; ++seed) {
    const auto a = tree_text(deconcept(kb, "dynamic_programming", random_extractor(seed)));
    EXPECT_EQ(a, tree_text(deconcept(kb, "dynamic_programming", random_extractor(seed))));
    const auto e = random_extractor(seed)(kb, "dynamic_programming");
    saw_second = saw_second || (*e == kb.concepts.at("dynamic_programming").expressions[1]);
    (void)random_extractor(seed)(kb, "optimal_state");
    EXPECT_EQ(*e, *random_extractor(seed)(kb, "dynamic_programming"));
  }
  EXPECT_TRUE(saw_second);
}

TEST(Concept, TaskCombinationMatchesDirectEvaluation) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    Rng rng(seed);
    const ConceptKB kb = random_kb(rng);
    for (const auto& [name, entry] : kb.concepts) {
      for (const auto& e : entry.expressions) {
        const SetPresheaf r = realize(kb, e);
        for (const Task& t : task_universe(kb)) {
          EXPECT_EQ(apply_task(kb, t, e).size(), apply_task(kb, t, r).size())
              << describe(e) << " / " << describe(kb, t);
        }
      }
    }
  }
}

TEST(Concept, FunctorTaskOnPointIsTheFunctorValue) {
  const ConceptKB kb = dp_kb();
  const SetFunctor& f = kb.tasks.functors.at(0).functor;
  for (ObjectIndex x = 0; x < kb.semantic->object_count(); ++x) {
    const std::string& id = kb.semantic->object_id(x);
    EXPECT_EQ(apply_task(kb, FunctorTask{0}, point(id)).size(), f.at(x).size()) << id;
    const HomTask dom{HomSide::domain, "loop"};
    EXPECT_EQ(apply_task(kb, dom, point(id)).size(), apply_task(kb, dom, id, Variance::contravariant).size());
  }
}

TEST(Concept, SimilarityLoss) {
  const FinSet two = make_set("A", {"a", "b"});
  const FinSet three = make_set("B", {"a", "b", "c"});
  EXPECT_EQ(similarity_d(two, two), 0.0);
  EXPECT_EQ(similarity_d(two, three), 1.0);
  EXPECT_DOUBLE_EQ(similarity_d(two, three, true), 1.0 / 3.0);
  EXPECT_EQ(similarity_d(make_set("E", {}), make_set("F", {}), true), 0.0);
}

TEST(Concept, ExhaustiveSweepOnConsistentFixture) {
  const ConceptKB kb = dp_kb();
  ASSERT_TRUE(precisely_understands(kb, "dynamic_programming", table_extractor()));
  const auto tree = deconcept(kb, "dynamic_programming", table_extractor());
  for (const TreeNode* n : tree_nodes(tree)) {
    if (!n->expression) continue;
    const Variance v = variance_for(n->expression->op);
    for (const Task& t : task_universe(kb)) {
      EXPECT_EQ(similarity_d(apply_task(kb, t, n->name, v), apply_task(kb, t, *n->expression)), 0.0)
          << n->name << " / " << describe(kb, t);
    }
  }
  EXPECT_TRUE(verify_with_tasks(kb, "dynamic_programming", table_extractor()).pass);
}

TEST(Concept, InnerCorruptionIsNamed) {
  ConceptKB kb = dp_kb();
  auto& e = kb.concepts.at("sub_problem_recursion").expressions.front();
  e.nodes["I3"] = "memo_table";
  const auto v = verify_with_verifier(kb, "dynamic_programming", table_extractor(), default_verifier());
  EXPECT_FALSE(v.pass);
  EXPECT_EQ(v.node, "sub_problem_recursion");
  const auto t = verify_with_tasks(kb, "dynamic_programming", table_extractor());
  EXPECT_FALSE(t.pass);
  EXPECT_EQ(t.node, "sub_problem_recursion");
}

TEST(Concept, LearnerRecoversPlantedConcept) {
  ConceptKB kb = dp_kb();
  kb.concepts.at("for_loop").expressions.clear();
  const LearnResult r = learn_concept(kb, "for_loop");
  ASSERT_TRUE(r.expression);
  EXPECT_EQ(limit_verifier(kb, *r.expression, "for_loop"), 1) << describe(*r.expression);
  EXPECT_EQ(r.best_loss, 0.0);
  const LearnResult again = learn_concept(kb, "for_loop");
  EXPECT_EQ(*again.expression, *r.expression);
}

TEST(Concept, LearnerFailsOnEmptyFeasibleSet) {
  const ConceptKB kb = dp_kb();
  const LearnResult r = learn_concept(kb, "program_construct", {.k = 1});
  EXPECT_FALSE(r.expression);
  EXPECT_GT(r.tried, 0u);
  EXPECT_GT(r.best_loss, 0.0);
}

TEST(Concept, SupervisedRepairRoundTrip) {
  const auto bad = load_kb(fixture("kb/wall_clock_corrupted.json"));
  const auto good = load_kb(fixture("kb/wall_clock.json"));
  const LimitExpression target = *extract_limit(good, "wall_clock");
  const auto repaired = supervised_repair(bad, "wall_clock", target);
  ASSERT_TRUE(repaired);
  EXPECT_TRUE(precisely_understands(*repaired, "wall_clock", table_extractor()));
  EXPECT_FALSE(precisely_understands(bad, "wall_clock", table_extractor()));
  EXPECT_FALSE(supervised_repair(bad, "wall_clock", *extract_limit(bad, "wall_clock")));
}

TEST(Concept, AnalogyScores) {
  const ConceptKB kb = dp_kb();
  const auto f = *extract_limit(kb, "for_loop");
  const auto w = *extract_limit(kb, "while_loop");
  const Analogy fw = diagram_analogy(f, w);
  EXPECT_TRUE(fw.full);
  EXPECT_EQ(fw.score, 1.0);
  EXPECT_EQ(fw.concepts.at("counter_variable"), "loop_condition");
  EXPECT_EQ(fw.concepts.at("loop"), "loop");
  EXPECT_EQ(diagram_analogy(f, f).score, 1.0);
  const LimitExpression pair{LimitOp::projective, ShapeKind::discrete(2), {{"I1", "x"}, {"I2", "y"}}, {}};
  const LimitExpression par{LimitOp::projective, ShapeKind::parallel_pair(), {{"I1", "x"}, {"I2", "y"}},
                            {{"m1", "u"}, {"m2", "v"}}};
  const Analogy a = diagram_analogy(pair, par);
  EXPECT_FALSE(a.full);
  EXPECT_DOUBLE_EQ(a.score, 3.0 / 5.0);
}

TEST(Concept, TasksAndVerifierAgreeOnRandomKbs) {
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    Rng rng(seed);
    const ConceptKB kb = random_kb(rng);
    for (const auto& [name, entry] : kb.concepts) {
      const bool tasks = verify_with_tasks(kb, name, table_extractor(), {.seed = seed}).pass;
      const bool verifier = verify_with_verifier(kb, name, table_extractor(), default_verifier()).pass;
      EXPECT_EQ(tasks, verifier) << "seed " << seed << " concept " << name;
    }
  }
}

TEST(Concept, KbDocumentRoundTrip) {
  const ConceptKB kb = dp_kb();
  const Json once = kb_to_json(kb);
  EXPECT_EQ(kb_to_json(kb_from_json(once)).dump(), once.dump());
}
