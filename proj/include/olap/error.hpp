#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace olap {

enum class ErrorCode {
  // schema
  DuplicateName,
  DanglingStarReference,
  EmptyStarEntry,
  HierarchyAttributeMissing,
  HierarchyRootMismatch,
  InvalidWeakAttribute,
  UnresolvedName,
  AmbiguousName,
  AttrNotInHierarchy,
  // data
  HeaderMismatch,
  DuplicateKey,
  DependencyViolation,
  UnresolvedReference,
  NonNumericMeasure,
  AttrFactMismatch,
  MixedDimensionAxis,
  UnknownMeasure,
  // rules
  LexError,
  SyntaxError,
  WeightOutOfRange,
  UnresolvedElement,
  DuplicateRuleName,
  UnknownRule,
  // algebra
  UnknownFact,
  UnknownDimension,
  UnknownHierarchy,
  FactNotStarred,
  SameDimensionOnBothAxes,
  EmptyMeasureList,
  DimNotInTable,
  RotationTargetConflict,
  AttrNotFiner,
  AttrNotCoarser,
  InvalidThreshold,
  // service
  CommandSyntaxError,
  UnknownSession,
  NoSchema,
  NoTable,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Line/column of the offending token in some source text, 1-based.
struct SourcePos {
  int line = 1;
  int column = 1;
  friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<SourcePos> pos = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  const std::optional<SourcePos>& position() const noexcept { return pos_; }
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
  std::optional<SourcePos> pos_;
};

}  // namespace olap
