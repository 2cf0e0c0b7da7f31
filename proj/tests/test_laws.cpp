#include <gtest/gtest.h>

#include <set>

#include "catlim/law_suite.hpp"
#include "catlim/laws.hpp"

using namespace catlim;

namespace {

bool leq(const FinCategory& p, ObjectIndex a, ObjectIndex b) { return !p.hom(a, b).empty(); }

// Oracle for joins: scan upper bounds directly and keep those below every
// other upper bound.
std::optional<ObjectIndex> naive_join(const FinCategory& p, ObjectIndex a, ObjectIndex b) {
  std::vector<ObjectIndex> upper;
  for (ObjectIndex u = 0; u < p.object_count(); ++u) {
    if (leq(p, a, u) && leq(p, b, u)) upper.push_back(u);
  }
  for (ObjectIndex u : upper) {
    bool least = true;
    for (ObjectIndex v : upper) least = least && leq(p, u, v);
    if (least) return u;
  }
  return std::nullopt;
}

std::optional<ObjectIndex> naive_meet(const FinCategory& p, ObjectIndex a, ObjectIndex b) {
  std::vector<ObjectIndex> lower;
  for (ObjectIndex u = 0; u < p.object_count(); ++u) {
    if (leq(p, u, a) && leq(p, u, b)) lower.push_back(u);
  }
  for (ObjectIndex u : lower) {
    bool greatest = true;
    for (ObjectIndex v : lower) greatest = greatest && leq(p, v, u);
    if (greatest) return u;
  }
  return std::nullopt;
}

CategoryRef chain(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("c" + std::to_string(i));
  return share(make_poset("chain", names, [](std::size_t i, std::size_t j) { return i <= j; }));
}

// 0 <= q <= a, b <= p
CategoryRef diamond_with_bottom() {
  const std::vector<std::string> names{"0", "a", "b", "p", "q"};
  const std::set<std::pair<std::size_t, std::size_t>> covers{{0, 4}, {4, 1}, {4, 2}, {1, 3}, {2, 3}};
  return share(make_poset("diamond", names, [&](std::size_t i, std::size_t j) {
    if (i == j) return true;
    std::vector<std::size_t> frontier{i};
    std::set<std::size_t> seen{i};
    while (!frontier.empty()) {
      const std::size_t u = frontier.back();
      frontier.pop_back();
      for (const auto& [s, t] : covers) {
        if (s == u && seen.insert(t).second) frontier.push_back(t);
      }
    }
    return seen.count(j) > 0;
  }));
}

FinCategory cyclic3() {
  CategorySpec spec;
  spec.name = "Z3";
  spec.objects = {"M"};
  spec.morphisms = {{"e", "M", "M"}, {"r", "M", "M"}, {"s", "M", "M"}};
  spec.identities = {{"M", "e"}};
  spec.compose = {{"r", "r", "s"}, {"r", "s", "e"}, {"s", "r", "e"}, {"s", "s", "r"}};
  return FinCategory::from_spec(spec);
}

}  // namespace

TEST(Laws, HomLimApplicabilityMatchesNaiveJoinsAndMeets) {
  Rng rng(31);
  for (int i = 0; i < 12; ++i) {
    const CategoryRef c = share(i % 2 ? random_lattice(rng, 6) : random_poset(rng, 5, 40));
    for (const Diagram& d : poset_diagrams(c, ShapeKind::discrete(2))) {
      const ObjectIndex a = d.objects[0], b = d.objects[1];
      for (ObjectIndex x = 0; x < c->object_count(); ++x) {
        const LawReport lim = check_hom_lim(d, x, LimitKind::projective);
        const LawReport col = check_hom_lim(d, x, LimitKind::inductive);
        EXPECT_EQ(lim.verdict == Verdict::not_applicable, !naive_meet(*c, a, b).has_value());
        EXPECT_EQ(col.verdict == Verdict::not_applicable, !naive_join(*c, a, b).has_value());
        EXPECT_NE(lim.verdict, Verdict::fails) << lim.instance;
        EXPECT_NE(col.verdict, Verdict::fails) << col.instance;
      }
    }
  }
}

TEST(Laws, JoinAndMeetAgreeWithOracle) {
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    const CategoryRef c = share(random_poset(rng, 5, 50));
    for (ObjectIndex a = 0; a < c->object_count(); ++a) {
      for (ObjectIndex b = 0; b < c->object_count(); ++b) {
        EXPECT_EQ(poset_join(*c, a, b), naive_join(*c, a, b));
        EXPECT_EQ(poset_meet(*c, a, b), naive_meet(*c, a, b));
      }
    }
  }
}

TEST(Laws, HomLimOnGeneralCategory) {
  // Hom(X, M) x Hom(X, M) in Z/3 has 9 elements, but Hom(X, P) for any
  // single object has 3: the product does not exist.
  const CategoryRef c = share(cyclic3());
  const Diagram d = make_diagram(c, ShapeKind::discrete(2), {0, 0});
  EXPECT_EQ(check_hom_lim(d, 0, LimitKind::projective).verdict, Verdict::not_applicable);
  const Diagram one = make_diagram(c, ShapeKind::discrete(1), {0});
  EXPECT_EQ(check_hom_lim(one, 0, LimitKind::projective).verdict, Verdict::holds);
  EXPECT_EQ(check_hom_lim(one, 0, LimitKind::inductive).verdict, Verdict::holds);
}

TEST(Laws, WrongSideComparisonCanDiffer) {
  // In the diamond a v b = p, but Hom(p, p) is a point while the coproduct
  // of Hom(p, a) and Hom(p, b) is empty.
  const CategoryRef c = diamond_with_bottom();
  const Diagram d = make_diagram(c, ShapeKind::discrete(2), {c->object("a"), c->object("b")});
  const AsymmetryProbe probe = probe_wrong_side(d, c->object("p"), LimitKind::inductive);
  ASSERT_TRUE(probe.applicable);
  EXPECT_TRUE(probe.differs);
  EXPECT_EQ(probe.direct, 1u);
  EXPECT_EQ(probe.combined, 0u);
}

TEST(Laws, NatOutOfCoproductCountsMultiply) {
  Rng rng(12);
  for (int i = 0; i < 25; ++i) {
    const CategoryRef c = share(random_category(rng, {3, 9}));
    const PresheafDiagram d = random_presheaf_diagram(rng, c, Variance::contravariant, ShapeKind::discrete(2), 2);
    const SetPresheaf a = random_set_functor(rng, c, Variance::contravariant, 2);
    const LawReport r = check_indlim_hom(d, a);
    EXPECT_EQ(r.verdict, Verdict::holds) << r.instance;
    const Comparison cmp = nat_out_of_colim_comparison(d, a);
    EXPECT_EQ(cmp.lhs.size(), presheaf_homs(d.nodes[0], a).size() * presheaf_homs(d.nodes[1], a).size());
  }
}

TEST(Laws, OtherSideCountsAdd) {
  Rng rng(13);
  for (int i = 0; i < 25; ++i) {
    const CategoryRef c = share(random_category(rng, {3, 9}));
    const Variance v = i % 2 ? Variance::covariant : Variance::contravariant;
    const PresheafDiagram d = random_presheaf_diagram(rng, c, v, ShapeKind::discrete(2), 2);
    for (ObjectIndex x = 0; x < c->object_count(); ++x) {
      const Comparison cmp = nat_into_colim_comparison(d, x);
      EXPECT_EQ(cmp.rhs.size(), d.nodes[0].values[x].size() + d.nodes[1].values[x].size());
      EXPECT_EQ(check_otherside_hom(d, x).verdict, Verdict::holds);
    }
  }
}

TEST(Laws, ProlimHomHolds) {
  Rng rng(14);
  for (int i = 0; i < 20; ++i) {
    const CategoryRef c = share(random_category(rng, {3, 9}));
    const PresheafDiagram d = random_presheaf_diagram(rng, c, Variance::covariant, ShapeKind::parallel_pair(), 2);
    const SetPresheaf b = random_set_functor(rng, c, Variance::covariant, 2);
    EXPECT_EQ(check_prolim_hom(d, b).verdict, Verdict::holds);
  }
}

TEST(Laws, AdjunctionsHold) {
  Rng rng(3);
  EXPECT_EQ(check_adjunction(identity_adjunction(share(cyclic3()))).verdict, Verdict::holds);
  for (int i = 0; i < 10; ++i) {
    const CategoryRef c = share(random_lattice(rng, 6));
    for (ObjectIndex a = 0; a < c->object_count(); ++a) {
      const CatFunctor incl = upset_inclusion(c, a);
      std::vector<ObjectIndex> objects;
      for (ObjectIndex x = 0; x < c->object_count(); ++x) {
        objects.push_back(incl.source->object(c->object_id(*naive_join(*c, x, a))));
      }
      const auto w = poset_adjunction(poset_functor(c, incl.source, objects), incl);
      ASSERT_TRUE(w.has_value());
      EXPECT_EQ(check_adjunction(*w).verdict, Verdict::holds);
    }
  }
}

TEST(Laws, SwappedBijectionBreaksNaturality) {
  const CategoryRef c = share(cyclic3());
  AdjunctionWitness w = identity_adjunction(c);
  std::swap(w.bijections[0][0][1], w.bijections[0][0][2]);
  const LawReport r = check_adjunction(w);
  ASSERT_EQ(r.verdict, Verdict::fails);
  ASSERT_EQ(r.counterexample.at("kind"), "naturality");
  // Recompute the square from the ids alone.
  auto phi = [&](MorphismIndex u) {
    const auto hom = c->hom(0, 0);
    const std::size_t pos = static_cast<std::size_t>(std::find(hom.begin(), hom.end(), u) - hom.begin());
    return hom[w.bijections[0][0][pos]];
  };
  const MorphismIndex f = c->morphism(r.counterexample.at("f"));
  const MorphismIndex g = c->morphism(r.counterexample.at("g"));
  const MorphismIndex u = c->morphism(r.counterexample.at("u"));
  EXPECT_NE(phi(c->compose(g, c->compose(u, f))), c->compose(g, c->compose(phi(u), f)));
}

TEST(Laws, PosetAdjunctionRejectsNonAdjoint) {
  const CategoryRef c = chain(3);
  const CatFunctor top = constant_functor(c, c, 2);
  const CatFunctor bottom = constant_functor(c, c, 0);
  EXPECT_FALSE(poset_adjunction(top, bottom).has_value());
  EXPECT_THROW(poset_functor(c, c, {2, 1, 0}), LawError);
}

TEST(Laws, NonPreservingFunctorIsCaught) {
  // F collapses q to the bottom, so the meet of a and b is not preserved.
  const CategoryRef c = diamond_with_bottom();
  std::vector<ObjectIndex> objects;
  for (ObjectIndex x = 0; x < c->object_count(); ++x) objects.push_back(c->object_id(x) == "q" ? c->object("0") : x);
  const CatFunctor f = poset_functor(c, c, objects);
  const Diagram d = make_diagram(c, ShapeKind::discrete(2), {c->object("a"), c->object("b")});
  const LawReport r = check_preservation(f, d, LimitKind::projective);
  ASSERT_EQ(r.verdict, Verdict::fails);
  EXPECT_EQ(check_preservation(identity_functor(c), d, LimitKind::projective).verdict, Verdict::holds);
  EXPECT_EQ(naive_meet(*c, c->object("a"), c->object("b")), c->object("q"));
}

TEST(Laws, ConstantFunctorDoesNotReflect) {
  // In the chain every arrow into the top is sent to the identity of a
  // point, so a non-universal cocone looks universal after F.
  const CategoryRef c = chain(3);
  const CategoryRef point = chain(1);
  const CatFunctor f = constant_functor(c, point, 0);
  const Diagram d = make_diagram(c, ShapeKind::discrete(1), {0});
  const LawReport r = check_reflection(f, d, LimitKind::inductive);
  ASSERT_EQ(r.verdict, Verdict::fails);
  // A universal cocone on a single object is an iso; check the apex is not
  // isomorphic to c0.
  EXPECT_NE(r.counterexample.at("apex"), "c0");
  EXPECT_EQ(check_reflection(identity_functor(c), d, LimitKind::inductive).verdict, Verdict::holds);
}

TEST(Laws, RepresentableColimNeedsRepresentability) {
  Rng rng(21);
  const CategoryRef c = diamond_with_bottom();
  const SetFunctor f = random_set_functor(rng, c, Variance::covariant, 2);
  const Diagram pair = make_diagram(c, ShapeKind::discrete(2), {c->object("a"), c->object("b")});
  EXPECT_EQ(check_representable_colim(pair, f).verdict, Verdict::not_applicable);
  const ObjectIndex a = c->object("a"), p = c->object("p");
  const Diagram cospan = make_diagram(c, ShapeKind::cospan(), {a, c->object("b"), p},
                                      {c->hom(a, p).front(), c->hom(c->object("b"), p).front()});
  const LawReport r = check_representable_colim(cospan, f);
  EXPECT_EQ(r.verdict, Verdict::holds);
  // The formal colimit of a cospan is represented by its tip.
  const auto comparison = representable_colim_comparison(cospan, f);
  ASSERT_TRUE(comparison.has_value());
  EXPECT_EQ(comparison->rhs.elements, f.values[p].elements);
}

TEST(Laws, YonedaExtensionAgainstDirectCount) {
  Rng rng(22);
  for (int i = 0; i < 20; ++i) {
    const CategoryRef c = share(random_category(rng, {3, 9}));
    const SetFunctor f = random_set_functor(rng, c, Variance::covariant, 2);
    for (ObjectIndex x = 0; x < c->object_count(); ++x) {
      EXPECT_EQ(check_yoneda_extension(f, x).verdict, Verdict::holds);
    }
    const auto d = random_diagram(rng, c, ShapeKind::discrete(2));
    ASSERT_TRUE(d.has_value());
    const LawReport r = check_yoneda_extension_colim(f, *d);
    EXPECT_EQ(r.verdict, Verdict::holds);
    EXPECT_EQ(yoneda_extension(f, ind_lim(*d)).size(),
              f.values[d->objects[0]].size() + f.values[d->objects[1]].size());
  }
  const SetFunctor contra = random_set_functor(rng, chain(2), Variance::contravariant, 2);
  EXPECT_THROW(check_yoneda_extension(contra, 0), UnsupportedTargetError);
}

TEST(Laws, YonedaPreservesLimitsInLattices) {
  Rng rng(23);
  for (int i = 0; i < 6; ++i) {
    const CategoryRef c = share(random_lattice(rng, 6));
    for (const Diagram& d : poset_diagrams(c, ShapeKind::cospan())) {
      EXPECT_EQ(check_yoneda_preserves_lim(d).verdict, Verdict::holds);
    }
  }
}

TEST(Laws, JudgeMutationsAreRecheckable) {
  const FinSet lhs = make_set("L", {"l0", "l1", "l2"});
  const FinSet rhs = make_set("R", {"r0", "r1", "r2"});
  EXPECT_EQ(judge("t", "i", Comparison{lhs, rhs, {2, 0, 1}}).verdict, Verdict::holds);

  const LawReport collide = judge("t", "i", Comparison{lhs, rhs, {0, 0, 1}});
  ASSERT_EQ(collide.verdict, Verdict::fails);
  EXPECT_EQ(collide.counterexample.at("kind"), "collision");
  EXPECT_EQ(collide.counterexample.at("image"), "r0");

  const LawReport missed = judge("t", "i", Comparison{lhs, make_set("R", {"r0", "r1", "r2", "r3"}), {0, 1, 2}});
  ASSERT_EQ(missed.verdict, Verdict::fails);
  EXPECT_EQ(missed.counterexample.at("kind"), "missed");

  const LawReport undefined = judge("t", "i", Comparison{lhs, rhs, {0, 1, static_cast<std::size_t>(-1)}});
  ASSERT_EQ(undefined.verdict, Verdict::fails);
  EXPECT_EQ(undefined.counterexample.at("kind"), "undefined");
}

TEST(Laws, GeneratedSuiteHasNoFailures) {
  SuiteBounds bounds;
  bounds.instances = 3;
  for (const std::string& law : law_ids()) {
    const auto reports = run_generated(law, 2024, bounds);
    std::size_t holds = 0;
    for (const LawReport& r : reports) {
      EXPECT_NE(r.verdict, Verdict::fails) << law << " " << r.instance;
      holds += r.verdict == Verdict::holds;
    }
    EXPECT_GT(holds, 0u) << law;
  }
  EXPECT_THROW(run_generated("no_such_law", 1), StructuralError);
}

TEST(Laws, GeneratedSuiteIsDeterministic) {
  const auto a = run_generated("hom_lim", 77);
  const auto b = run_generated("hom_lim", 77);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].instance, b[i].instance);
    EXPECT_EQ(a[i].verdict, b[i].verdict);
    EXPECT_EQ(a[i].witness, b[i].witness);
  }
}
