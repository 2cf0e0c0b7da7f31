#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace catlim {

/// Base of every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: dangling ids, missing fields, unparsable documents.
/// Kept distinct from LawError so file-format bugs never look like
/// mathematical failures.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A lookup by id that does not resolve.
class UnknownIdError : public StructuralError {
 public:
  using StructuralError::StructuralError;
};

/// Input is well formed but breaks a category or functor law that the
/// operation requires as a precondition.
class LawError : public Error {
 public:
  using Error::Error;
};

/// Morphism endpoints that do not line up (e.g. pullback legs with
/// different codomains).
class EndpointError : public Error {
 public:
  using Error::Error;
};

/// A size cap or search budget was exceeded.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// The requested target cannot host the construction.
class UnsupportedTargetError : public Error {
 public:
  using Error::Error;
};

/// Engine-wide size caps and search budgets.
struct Caps {
  std::size_t max_objects = 32;
  std::size_t max_morphisms = 256;
  /// Upper bound on |Y|^|X| for function enumeration.
  std::size_t max_functions = 1'000'000;
  /// Partial assignments explored by natural-isomorphism and
  /// natural-transformation searches.
  std::size_t search_budget = 100'000;
  std::size_t max_depth = 32;

  /// Defaults, with CATLIM_MAX_BUDGET overriding search_budget when set.
  static Caps from_environment();
};

/// Caps used when an operation is not handed explicit ones.
const Caps& default_caps();

}  // namespace catlim
