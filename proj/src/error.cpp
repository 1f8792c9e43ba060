#include "olap/error.hpp"

namespace olap {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateName: return "duplicate-name";
    case ErrorCode::DanglingStarReference: return "dangling-star-reference";
    case ErrorCode::EmptyStarEntry: return "empty-star-entry";
    case ErrorCode::HierarchyAttributeMissing: return "hierarchy-attribute-missing";
    case ErrorCode::HierarchyRootMismatch: return "hierarchy-root-mismatch";
    case ErrorCode::InvalidWeakAttribute: return "invalid-weak-attribute";
    case ErrorCode::UnresolvedName: return "unresolved-name";
    case ErrorCode::AmbiguousName: return "ambiguous-name";
    case ErrorCode::AttrNotInHierarchy: return "attr-not-in-hierarchy";
    case ErrorCode::HeaderMismatch: return "header-mismatch";
    case ErrorCode::DuplicateKey: return "duplicate-key";
    case ErrorCode::DependencyViolation: return "dependency-violation";
    case ErrorCode::UnresolvedReference: return "unresolved-reference";
    case ErrorCode::NonNumericMeasure: return "non-numeric-measure";
    case ErrorCode::AttrFactMismatch: return "attr-fact-mismatch";
    case ErrorCode::MixedDimensionAxis: return "mixed-dimension-axis";
    case ErrorCode::UnknownMeasure: return "unknown-measure";
    case ErrorCode::LexError: return "lex-error";
    case ErrorCode::SyntaxError: return "syntax-error";
    case ErrorCode::WeightOutOfRange: return "weight-out-of-range";
    case ErrorCode::UnresolvedElement: return "unresolved-element";
    case ErrorCode::DuplicateRuleName: return "duplicate-rule-name";
    case ErrorCode::UnknownRule: return "unknown-rule";
    case ErrorCode::UnknownFact: return "unknown-fact";
    case ErrorCode::UnknownDimension: return "unknown-dimension";
    case ErrorCode::UnknownHierarchy: return "unknown-hierarchy";
    case ErrorCode::FactNotStarred: return "fact-not-starred";
    case ErrorCode::SameDimensionOnBothAxes: return "same-dimension-on-both-axes";
    case ErrorCode::EmptyMeasureList: return "empty-measure-list";
    case ErrorCode::DimNotInTable: return "dim-not-in-table";
    case ErrorCode::RotationTargetConflict: return "rotation-target-conflict";
    case ErrorCode::AttrNotFiner: return "attr-not-finer";
    case ErrorCode::AttrNotCoarser: return "attr-not-coarser";
    case ErrorCode::InvalidThreshold: return "invalid-threshold";
    case ErrorCode::CommandSyntaxError: return "command-syntax-error";
    case ErrorCode::UnknownSession: return "unknown-session";
    case ErrorCode::NoSchema: return "no-schema";
    case ErrorCode::NoTable: return "no-table";
    case ErrorCode::Io: return "io-error";
  }
  return "unknown";
}

namespace {
std::string with_position(ErrorCode code, const std::string& message,
                          const std::optional<SourcePos>& pos) {
  std::string out(to_string(code));
  if (pos) {
    out += " at " + std::to_string(pos->line) + ":" + std::to_string(pos->column);
  }
  out += ": " + message;
  return out;
}
}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::optional<SourcePos> pos)
    : std::runtime_error(with_position(code, message, pos)),
      code_(code),
      message_(message),
      pos_(pos) {}

}  // namespace olap
