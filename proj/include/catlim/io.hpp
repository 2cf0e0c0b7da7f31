#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "catlim/concept.hpp"
#include "catlim/law_suite.hpp"
#include "json.hpp"

namespace catlim {

using Json = nlohmann::ordered_json;

/// Malformed or unreadable document. A StructuralError, so it shares the
/// input-error exit path.
class ParseError : public StructuralError {
 public:
  using StructuralError::StructuralError;
};

/// Reads and parses a JSON file; relative references inside it resolve
/// against its directory.
Json read_json(const std::filesystem::path& path);

/// {name, objects, morphisms: [{id, src, dst}], identities, compose: [[g, f, g o f]]}
FinCategory category_from_json(const Json& j, const Caps& caps = default_caps());
Json category_to_json(const FinCategory& c);

/// Either {id, elements} or a bare list of elements.
FinSet set_from_json(const Json& j, const std::string& fallback_id);
Json set_to_json(const FinSet& s);

/// {shape, variance, objects: {I: set}, morphisms: {m: {x: y}}}. Identity
/// morphisms of the shape may be omitted.
SetDiagram diagram_from_json(const Json& j);

/// {base, variance, values: {X: set}, actions: {f: {x: y}}}. `base` is an
/// inline category document, a path to one, or absent when `context` is
/// given.
SetFunctor functor_from_json(const Json& j, const CategoryRef& context = nullptr,
                             const std::filesystem::path& dir = {});
Json functor_to_json(const SetFunctor& f, bool with_base = true);

/// {op: "ind"|"pro", shape, nodes: {I: concept}, edges: {m: morphism}}
LimitExpression expression_from_json(const Json& j);
Json expression_to_json(const LimitExpression& e);

/// The knowledge-base document; runs validate_kb.
ConceptKB kb_from_json(const Json& j, const std::filesystem::path& dir = {});
Json kb_to_json(const ConceptKB& kb);
ConceptKB load_kb(const std::filesystem::path& path);

Json limit_result_to_json(const LimitResult& r, const FinCategory& shape);

/// One manifest entry: a law id and either {"generated": {seed,
/// max_objects, instances}} or an inline instance.
struct ManifestEntry {
  std::string law;
  bool generated = true;
  std::uint64_t seed = 0;
  SuiteBounds bounds;
  Json inline_instance;
};

std::vector<ManifestEntry> manifest_from_json(const Json& j);
/// Runs one entry. Inline instances are supported for hom_lim, yoneda,
/// adjunction, preservation, reflection, representable_colim,
/// yoneda_extension and yoneda_preserves_lim.
std::vector<LawReport> run_manifest_entry(const ManifestEntry& e, const Caps& caps = default_caps());

Json law_report_to_json(const LawReport& r);

}  // namespace catlim
