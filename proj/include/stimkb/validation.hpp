#pragma once

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

namespace stimkb {

/// Reasons a record or annotation can be rejected. One per invariant.
enum class Violation {
  NoComponents,           // four-component axiom
  EmptyKey,
  KeyMismatch,            // key != dbName/id
  EmptySemantics,         // neither concept nor keyword
  UnknownConcept,
  UnknownVocabulary,
  TermNotInVocabulary,
  InvalidConfidenceLevel,
  ConfidenceOutOfRange,
  InvalidScale,           // scaleMin >= scaleMax
  NoDimensionValue,
  DimensionOutOfScale,
  NegativeDeviation,
  UnitValueOutOfRange,    // appraisal / sentiment outside [0, 1]
  EmptyActionTendency,
  EmptyContextKey,
  NegativeNumeric,
  EmptyPhysiologyPath,
};

std::string_view toString(Violation v);

struct Issue {
  Violation code;
  std::string message;
};

/// Outcome of a validation: empty means ok.
class Validation {
 public:
  bool ok() const noexcept { return issues_.empty(); }
  explicit operator bool() const noexcept { return ok(); }

  void fail(Violation code, std::string message) { issues_.push_back({code, std::move(message)}); }
  void merge(const Validation& other) {
    issues_.insert(issues_.end(), other.issues_.begin(), other.issues_.end());
  }
  bool has(Violation code) const {
    return std::any_of(issues_.begin(), issues_.end(),
                       [code](const Issue& i) { return i.code == code; });
  }
  const std::vector<Issue>& issues() const noexcept { return issues_; }

  /// All messages joined with "; ".
  std::string summary() const;

 private:
  std::vector<Issue> issues_;
};

}  // namespace stimkb
