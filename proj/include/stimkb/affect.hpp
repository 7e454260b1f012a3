#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stimkb/validation.hpp"

namespace stimkb {

enum class ConfidenceLevel { VeryHigh, High, Average, Low, VeryLow };

std::optional<ConfidenceLevel> parseConfidenceLevel(std::string_view s);
std::string_view toString(ConfidenceLevel level);

/// Expert certainty about an annotation. Both parts are optional and
/// independent; absence means unknown.
struct Confidence {
  std::optional<ConfidenceLevel> level;
  std::optional<double> value;  // [0, 1]

  bool empty() const noexcept { return !level && !value; }
  friend bool operator==(const Confidence&, const Confidence&) = default;
};

struct Vocabulary {
  std::string id;
  std::vector<std::string> terms;  // sorted, unique

  bool contains(std::string_view term) const;
  friend bool operator==(const Vocabulary&, const Vocabulary&) = default;
};

/// Default categorical vocabulary available without any vocabulary file.
Vocabulary builtinBigSix();
inline constexpr std::string_view kBigSix = "BigSix";

/// Vocabularies keyed by id.
class VocabularySet {
 public:
  /// Contains only the built-in BigSix.
  static VocabularySet withDefaults();

  /// Throws ValidationError on a duplicate id (the built-in BigSix may be
  /// replaced once by a user definition).
  void add(Vocabulary v);
  const Vocabulary* find(std::string_view id) const;
  std::size_t size() const noexcept { return vocabs_.size(); }
  const std::map<std::string, Vocabulary, std::less<>>& all() const noexcept { return vocabs_; }

 private:
  std::map<std::string, Vocabulary, std::less<>> vocabs_;
  bool builtinBigSix_ = false;
};

/// Reads `vocab<TAB>term` lines. Each vocabulary's lines must be contiguous;
/// a vocabulary id that reappears after another block is a duplicate.
std::vector<Vocabulary> parseVocabularies(std::string_view text);

/// parseVocabularies merged over the built-in defaults.
VocabularySet loadVocabulary(std::string_view text);
std::string serializeVocabularies(const VocabularySet& vocabs);

struct CategoryAnnotation {
  std::string vocabulary;
  std::string term;
  Confidence confidence;

  friend bool operator==(const CategoryAnnotation&, const CategoryAnnotation&) = default;
};

enum class Dimension { Valence, Arousal, Dominance, Potency, Unpredictability, Intensity };

inline constexpr std::array<Dimension, 6> kAllDimensions{
    Dimension::Valence,  Dimension::Arousal,          Dimension::Dominance,
    Dimension::Potency,  Dimension::Unpredictability, Dimension::Intensity};

std::string_view toString(Dimension d);
std::optional<Dimension> parseDimension(std::string_view s);

/// Dimensional emotion values on the scale declared by their source database.
struct DimensionAnnotation {
  std::array<std::optional<double>, 6> values;  // indexed by Dimension
  std::optional<double> valenceSD;
  std::optional<double> arousalSD;
  std::optional<double> dominanceSD;
  double scaleMin = 1.0;
  double scaleMax = 9.0;
  Confidence confidence;

  std::optional<double>& operator[](Dimension d) { return values[static_cast<std::size_t>(d)]; }
  const std::optional<double>& operator[](Dimension d) const {
    return values[static_cast<std::size_t>(d)];
  }
  bool hasAny() const;

  friend bool operator==(const DimensionAnnotation&, const DimensionAnnotation&) = default;
};

struct AppraisalAnnotation {
  std::map<std::string, double> values;  // each in [0, 1]
  friend bool operator==(const AppraisalAnnotation&, const AppraisalAnnotation&) = default;
};

struct ActionTendencyAnnotation {
  std::string term;
  Confidence confidence;
  friend bool operator==(const ActionTendencyAnnotation&,
                         const ActionTendencyAnnotation&) = default;
};

struct SentimentAnnotation {
  double value = 0.0;  // [0, 1]
  Confidence confidence;
  friend bool operator==(const SentimentAnnotation&, const SentimentAnnotation&) = default;
};

Validation validateConfidence(const Confidence& c);
Validation validateCategory(const CategoryAnnotation& ann, const VocabularySet& vocabs);
Validation validateDimension(const DimensionAnnotation& ann);
Validation validateAppraisal(const AppraisalAnnotation& ann);
Validation validateActionTendency(const ActionTendencyAnnotation& ann);
Validation validateSentiment(const SentimentAnnotation& ann);

/// Maps every present value v to (v - scaleMin) / (scaleMax - scaleMin).
/// Throws PreconditionError when the scale is degenerate.
std::map<Dimension, double> normalizeDimension(const DimensionAnnotation& ann);

/// `vocab.term`, split at the first dot.
struct QualifiedTerm {
  std::string vocabulary;
  std::string term;

  /// Throws ParseError when either side of the dot is missing.
  static QualifiedTerm parse(std::string_view s);
  std::string str() const { return vocabulary + "." + term; }
  friend auto operator<=>(const QualifiedTerm&, const QualifiedTerm&) = default;
};

struct EquivalenceAxiom {
  QualifiedTerm lhs;
  QualifiedTerm rhs;
  friend bool operator==(const EquivalenceAxiom&, const EquivalenceAxiom&) = default;
};

/// Reads `vocabA<TAB>termA<TAB>vocabB<TAB>termB` lines.
std::vector<EquivalenceAxiom> parseAxioms(std::string_view text);
std::string serializeAxioms(std::span<const EquivalenceAxiom> axioms);

/// Smallest equivalence relation over qualified terms containing the axioms.
/// Terms never mentioned by an axiom are singleton classes.
class EquivalenceClosure {
 public:
  EquivalenceClosure() = default;
  explicit EquivalenceClosure(std::span<const EquivalenceAxiom> axioms);

  bool areEquivalent(const QualifiedTerm& a, const QualifiedTerm& b) const;
  bool areEquivalent(std::string_view a, std::string_view b) const;

  /// Class containing `t` (just `t` when unknown), sorted.
  std::vector<QualifiedTerm> classOf(const QualifiedTerm& t) const;

  /// All non-singleton classes, each sorted, in order of their first member.
  std::vector<std::vector<QualifiedTerm>> classes() const;

  const std::vector<EquivalenceAxiom>& axioms() const noexcept { return axioms_; }

 private:
  std::vector<EquivalenceAxiom> axioms_;
  std::map<QualifiedTerm, std::size_t> ids_;
  std::vector<QualifiedTerm> terms_;
  std::vector<std::size_t> classId_;  // representative per term, fully resolved
};

EquivalenceClosure buildEquivalenceClosure(std::span<const EquivalenceAxiom> axioms);

}  // namespace stimkb
