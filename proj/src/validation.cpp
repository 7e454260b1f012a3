#include "stimkb/validation.hpp"

namespace stimkb {

std::string_view toString(Violation v) {
  switch (v) {
    case Violation::NoComponents: return "no-components";
    case Violation::EmptyKey: return "empty-key";
    case Violation::KeyMismatch: return "key-mismatch";
    case Violation::EmptySemantics: return "empty-semantics";
    case Violation::UnknownConcept: return "unknown-concept";
    case Violation::UnknownVocabulary: return "unknown-vocabulary";
    case Violation::TermNotInVocabulary: return "term-not-in-vocabulary";
    case Violation::InvalidConfidenceLevel: return "invalid-confidence-level";
    case Violation::ConfidenceOutOfRange: return "confidence-out-of-range";
    case Violation::InvalidScale: return "invalid-scale";
    case Violation::NoDimensionValue: return "no-dimension-value";
    case Violation::DimensionOutOfScale: return "dimension-out-of-scale";
    case Violation::NegativeDeviation: return "negative-deviation";
    case Violation::UnitValueOutOfRange: return "unit-value-out-of-range";
    case Violation::EmptyActionTendency: return "empty-action-tendency";
    case Violation::EmptyContextKey: return "empty-context-key";
    case Violation::NegativeNumeric: return "negative-numeric";
    case Violation::EmptyPhysiologyPath: return "empty-physiology-path";
  }
  return "unknown";
}

std::string Validation::summary() const {
  std::string out;
  for (const auto& i : issues_) {
    if (!out.empty()) out += "; ";
    out += i.message;
  }
  return out;
}

}  // namespace stimkb
