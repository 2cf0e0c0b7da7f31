#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "catlim/generate.hpp"
#include "catlim/presheaf.hpp"

namespace catlim {

enum class LimitOp { inductive, projective };
/// "ind" / "pro".
std::string to_string(LimitOp op);
LimitOp parse_limit_op(const std::string& text);

/// A limit operator and a diagram in the semantic category. Nodes are keyed
/// by shape object id ("I1", ...), edges by non-identity shape morphism id
/// ("m1", ...). The diagram is drawn covariantly for both operators: a
/// cospan under "pro" is a pullback, a span under "ind" a pushout.
struct LimitExpression {
  LimitOp op = LimitOp::projective;
  ShapeKind shape = ShapeKind::discrete(1);
  std::map<std::string, std::string> nodes;
  std::map<std::string, std::string> edges;

  friend bool operator==(const LimitExpression&, const LimitExpression&) = default;
};

/// One line, e.g. "pro cospan {I1: a, I2: b, I3: c; m1: a<=c, m2: b<=c}".
std::string describe(const LimitExpression& e);

struct ConceptEntry {
  std::vector<LimitExpression> expressions;
  /// Leaves are only accepted by the verifiers when this is set.
  bool trusted_leaf = false;
};

struct NamedFunctor {
  std::string name;
  SetFunctor functor;  // covariant, on the semantic category
};

struct TaskUniverse {
  std::vector<std::string> probes;
  std::vector<NamedFunctor> functors;
};

struct ConceptKB {
  CategoryRef semantic;
  std::map<std::string, ConceptEntry> concepts;
  /// Concepts given directly as presheaves on the semantic category.
  std::map<std::string, SetPresheaf> overrides;
  TaskUniverse tasks;

  bool resolves(const std::string& name) const;
  /// The entry for `name`; objects without an entry get an empty,
  /// untrusted one. Throws UnknownIdError if the name does not resolve.
  ConceptEntry entry(const std::string& name) const;
};

/// Throws on the first problem: an invalid semantic category, an
/// unresolved name, an expression that is not a functorial diagram, an
/// override that breaks the functor laws, or an unknown probe.
void validate_kb(const ConceptKB& kb);

/// The expression's diagram in the semantic category. Node concepts must
/// be objects there.
Diagram expression_diagram(const ConceptKB& kb, const LimitExpression& e);

/// pro: the pointwise limit of h o beta, a presheaf in C^.
/// ind: the pointwise limit of k o alpha, the member of C^v whose
/// homs out of it are the colimit's.
SetPresheaf realize(const ConceptKB& kb, const LimitExpression& e);

/// The formal colimit of h o alpha in C^ (an ind-object), for
/// comparison with realize on inductive expressions.
SetPresheaf formal_colimit(const ConceptKB& kb, const LimitExpression& e);

/// Override if present, else h(name) or k(name).
SetPresheaf concept_presheaf(const ConceptKB& kb, const std::string& name,
                             Variance variance = Variance::contravariant);
/// The variance a concept is compared at under operator `op`.
Variance variance_for(LimitOp op);

// ---------------------------------------------------------------------------
// Extraction and decomposition

using Extractor = std::function<std::optional<LimitExpression>(const ConceptKB&, const std::string&)>;

/// First listed expression, or none.
Extractor table_extractor();
/// Picks among the listed expressions by a hash of (seed, concept), so the
/// choice does not depend on call order.
Extractor random_extractor(std::uint64_t seed);

std::optional<LimitExpression> extract_limit(const ConceptKB& kb, const std::string& name);

enum class LeafKind { none, basic, cycle_ref, extractor_null };
std::string to_string(LeafKind k);

struct TreeNode {
  std::string name;
  LeafKind leaf = LeafKind::none;
  /// Set on non-leaf nodes.
  std::optional<LimitExpression> expression;
  /// One child per shape object, labeled by its id.
  std::vector<std::pair<std::string, TreeNode>> children;
};

struct DecompositionTree {
  TreeNode root;
};

inline constexpr std::size_t default_depth_cap = 32;

/// Throws CapacityError naming the path when nesting exceeds depth_cap.
DecompositionTree deconcept(const ConceptKB& kb, const std::string& name, const Extractor& extractor,
                            std::size_t depth_cap = default_depth_cap);

/// Pre-order list of the tree's nodes.
std::vector<const TreeNode*> tree_nodes(const DecompositionTree& t);

std::string tree_text(const DecompositionTree& t);
std::string tree_json(const DecompositionTree& t);
std::string tree_dot(const DecompositionTree& t);

// ---------------------------------------------------------------------------
// Tasks

enum class HomSide { domain, codomain };

struct HomTask {
  HomSide side = HomSide::domain;
  std::string probe;
};
struct FunctorTask {
  std::size_t functor = 0;  // index into the KB's registered functors
};
using Task = std::variant<HomTask, FunctorTask>;

std::string describe(const ConceptKB& kb, const Task& t);

/// Hom(A, y(P)) on the domain side and Hom(y(P), A) on the codomain side,
/// with homs and y taken in C^ or C^v according to A's variance; a
/// functor task is the Yoneda extension at A.
FinSet apply_task(const ConceptKB& kb, const Task& t, const SetPresheaf& a, const Caps& caps = default_caps());
FinSet apply_task(const ConceptKB& kb, const Task& t, const std::string& name, Variance variance,
                  const Caps& caps = default_caps());
/// T(L_A): for codomain tasks on "pro" and domain tasks on "ind" the task
/// is applied to each node and combined with a finite-set limit; every
/// other task is applied to the realized presheaf.
FinSet apply_task(const ConceptKB& kb, const Task& t, const LimitExpression& e, const Caps& caps = default_caps());

/// 0 when the sets are isomorphic, else 1. Graded mode gives
/// 1 - min/max, for diagnostics only.
double similarity_d(const FinSet& a, const FinSet& b, bool graded = false);

/// Every task of the KB's universe: both hom sides per probe, then the
/// functors.
std::vector<Task> task_universe(const ConceptKB& kb);

/// Shuffles the universe once and cycles through it.
class TaskSampler {
 public:
  TaskSampler(const ConceptKB& kb, std::uint64_t seed);
  const Task& next();

 private:
  std::vector<Task> order_;
  std::size_t pos_ = 0;
};

/// Seed for the sampler of one node, independent of visiting order.
std::uint64_t node_seed(std::uint64_t seed, const std::string& name);

// ---------------------------------------------------------------------------
// Verification

struct TaskVerdict {
  bool pass = true;
  /// Concept at which verification stopped.
  std::string node;
  std::optional<Task> task;
  double loss = 0;
  std::string detail;
};

struct TaskOptions {
  std::uint64_t seed = 0;
  std::size_t m = 50;
  double eps = 0.5;
  /// Check every non-leaf node of the decomposition, not just the root.
  bool hierarchical = true;
};

TaskVerdict verify_with_tasks(const ConceptKB& kb, const std::string& name, const Extractor& extractor,
                              const TaskOptions& options = {}, const Caps& caps = default_caps());

using Verifier = std::function<int(const ConceptKB&, const LimitExpression&, const std::string&)>;

/// 1 iff realize(e) is naturally isomorphic to the concept at the
/// operator's variance. Budget exhaustion throws.
int limit_verifier(const ConceptKB& kb, const LimitExpression& e, const std::string& name,
                   const Caps& caps = default_caps());
Verifier default_verifier(const Caps& caps = default_caps());

struct VerifierVerdict {
  bool pass = true;
  std::string node;
  std::string detail;
};

VerifierVerdict verify_with_verifier(const ConceptKB& kb, const std::string& name, const Extractor& extractor,
                                     const Verifier& verifier);

bool precisely_understands(const ConceptKB& kb, const std::string& name, const Extractor& extractor,
                           const Caps& caps = default_caps());

// ---------------------------------------------------------------------------
// Learning and analogy

struct LearnOptions {
  std::size_t k = 4;
  std::size_t m = 50;
  std::uint64_t seed = 0;
};

/// discrete(1..4), parallel_pair, cospan, span.
const std::vector<ShapeKind>& hypothesis_shapes();

/// Visits the hypothesis space in its fixed order: shape, then operator
/// (pro before ind), then node assignments in index order. Expressions
/// naming `concept` are skipped, as are shapes with more than k objects.
/// Discrete shapes use non-decreasing node lists only.
void for_each_hypothesis(const ConceptKB& kb, const std::string& name, std::size_t k,
                         const std::function<bool(const LimitExpression&)>& visit);

struct LearnResult {
  std::optional<LimitExpression> expression;
  std::size_t tried = 0;
  /// Smallest total loss seen and the expression that reached it.
  double best_loss = 0;
  std::optional<LimitExpression> best;
};

LearnResult learn_concept(const ConceptKB& kb, const std::string& name, const LearnOptions& options = {},
                          const Caps& caps = default_caps());

/// A new KB whose entry for `concept` starts with `target`, replacing the
/// first expression, if limit_verifier accepts it.
std::optional<ConceptKB> supervised_repair(const ConceptKB& kb, const std::string& name,
                                           const LimitExpression& target, const Caps& caps = default_caps());

struct Analogy {
  bool full = false;
  double score = 0;
  std::map<std::string, std::string> objects;    // shape object -> shape object
  std::map<std::string, std::string> morphisms;  // shape morphism -> shape morphism
  std::map<std::string, std::string> concepts;   // node name -> node name
};

/// Best structure-preserving partial map from d1's shape to d2's under
/// which the node concepts correspond one-to-one. The score counts matched
/// objects, non-identity arrows and the operator against the larger side.
Analogy diagram_analogy(const LimitExpression& d1, const LimitExpression& d2, const Caps& caps = default_caps());

// ---------------------------------------------------------------------------
// Generated KBs

struct KbBounds {
  std::size_t max_objects = 7;
  /// Chance in percent that an expression is corrupted.
  unsigned corrupt_percent = 30;
};

/// A lattice KB: every object is a concept; objects that are meets or
/// joins of two others get a pro or ind expression (discrete pair, cospan
/// or span), some corrupted by swapping one node. All leaves are trusted.
/// Probes are all objects, with one random covariant functor.
ConceptKB random_kb(Rng& rng, const KbBounds& bounds = {});

/// Replaces node `node` of `e` by `concept`, fixing edge ids when the
/// semantic category is a poset. Absent if the result is not a diagram.
std::optional<LimitExpression> replace_node(const ConceptKB& kb, const LimitExpression& e, const std::string& node,
                                            const std::string& name);

}  // namespace catlim
