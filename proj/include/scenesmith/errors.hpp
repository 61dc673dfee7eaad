#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace scenesmith {

// Every failure raised by the engine carries a stable machine-readable code
// ("ParseError", "PlacementExhausted", ...) next to the human message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define SCENESMITH_DEFINE_ERROR(Name)                                  \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  };

// catalog
SCENESMITH_DEFINE_ERROR(ParseError)
SCENESMITH_DEFINE_ERROR(InvariantViolation)
// layout
SCENESMITH_DEFINE_ERROR(InvalidSpec)
SCENESMITH_DEFINE_ERROR(GenerationExhausted)
SCENESMITH_DEFINE_ERROR(DegeneratePolygon)
SCENESMITH_DEFINE_ERROR(NotAdjacent)
// furnish
SCENESMITH_DEFINE_ERROR(CatalogGap)
SCENESMITH_DEFINE_ERROR(PlacementExhausted)
SCENESMITH_DEFINE_ERROR(SemanticMismatch)
SCENESMITH_DEFINE_ERROR(RuleConflict)
SCENESMITH_DEFINE_ERROR(InvalidAdjustment)
// dress
SCENESMITH_DEFINE_ERROR(NoCompatibleMaterial)
SCENESMITH_DEFINE_ERROR(IncompatibleOverride)
// physicalize
SCENESMITH_DEFINE_ERROR(UnknownMaterialClass)
SCENESMITH_DEFINE_ERROR(MissingTemplate)
// taskgen
SCENESMITH_DEFINE_ERROR(UnsatisfiableRole)
SCENESMITH_DEFINE_ERROR(RoomMismatch)
SCENESMITH_DEFINE_ERROR(InsufficientAssets)
// scenefile
SCENESMITH_DEFINE_ERROR(FloorOutOfRange)

#undef SCENESMITH_DEFINE_ERROR

struct Issue {
  std::string code;
  std::string path;
  std::string message;

  bool operator==(const Issue&) const = default;
};

struct ValidationReport {
  std::vector<Issue> errors;
  std::vector<Issue> warnings;

  bool ok() const { return errors.empty(); }
  void error(std::string code, std::string path, std::string message) {
    errors.push_back({std::move(code), std::move(path), std::move(message)});
  }
  void warn(std::string code, std::string path, std::string message) {
    warnings.push_back({std::move(code), std::move(path), std::move(message)});
  }
  bool has_error(const std::string& code) const {
    for (const auto& e : errors) {
      if (e.code == code) return true;
    }
    return false;
  }
  void merge(const ValidationReport& other) {
    errors.insert(errors.end(), other.errors.begin(), other.errors.end());
    warnings.insert(warnings.end(), other.warnings.begin(),
                    other.warnings.end());
  }
};

}  // namespace scenesmith
