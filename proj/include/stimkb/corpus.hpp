#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stimkb/affect.hpp"
#include "stimkb/taxonomy.hpp"
#include "stimkb/validation.hpp"

namespace stimkb {

/// Internal key of a stimulus: "dbName/id".
using StimulusId = std::string;

StimulusId makeStimulusId(std::string_view dbName, std::string_view id);
/// Database part of a key (text before the first '/'), empty if none.
std::string_view databaseOf(std::string_view key);

enum class SemanticKind { Object, Scene, Event };

std::string_view toString(SemanticKind k);
std::optional<SemanticKind> parseSemanticKind(std::string_view s);

struct SemanticsAnnotation {
  SemanticKind kind = SemanticKind::Object;
  std::optional<std::string> concept_name;
  std::optional<std::string> keyword;

  friend bool operator==(const SemanticsAnnotation&, const SemanticsAnnotation&) = default;
};

struct ContextRecord {
  std::string id;
  std::string dbName;
  std::string mediaFormat;
  std::optional<std::int64_t> widthPx;
  std::optional<std::int64_t> heightPx;
  std::optional<std::int64_t> sizeBytes;
  std::optional<std::int64_t> colorDepthBits;
  std::optional<double> lengthSeconds;
  std::optional<std::string> author;
  std::optional<std::string> owner;
  std::optional<std::string> createdAt;  // ISO-8601
  std::optional<std::string> location;
  std::optional<std::string> dcType;
  std::optional<std::string> dcCreator;
  std::optional<std::string> dcContributor;
  std::optional<std::string> dcDate;
  std::optional<std::string> dcFormat;

  friend bool operator==(const ContextRecord&, const ContextRecord&) = default;
};

struct PhysiologyRef {
  std::string path;  // URI
  std::optional<std::string> channel;

  friend bool operator==(const PhysiologyRef&, const PhysiologyRef&) = default;
};

/// One annotated stimulus. At least one of the four components (semantics,
/// emotion, context, physiology) must be present.
struct StimulusRecord {
  StimulusId key;
  std::vector<SemanticsAnnotation> semantics;
  std::vector<CategoryAnnotation> categories;
  std::optional<DimensionAnnotation> dimensions;
  std::vector<AppraisalAnnotation> appraisals;
  std::vector<ActionTendencyAnnotation> actionTendencies;
  std::vector<SentimentAnnotation> sentiments;
  std::optional<ContextRecord> context;
  std::vector<PhysiologyRef> physiology;

  bool hasEmotion() const;
  friend bool operator==(const StimulusRecord&, const StimulusRecord&) = default;
};

/// Structural invariants only (no taxonomy or vocabulary lookups).
Validation validateStimulus(const StimulusRecord& rec);

/// Structural invariants plus concept resolution and vocabulary membership.
Validation validateStimulus(const StimulusRecord& rec, const TaxonomyGraph& g,
                            const VocabularySet& vocabs);

/// One record line of the record file format (see docs/record-format.md).
/// Throws ParseError on syntax errors.
StimulusRecord parseRecordLine(std::string_view line, std::size_t lineNumber = 0);
std::string serializeRecord(const StimulusRecord& rec);

struct NumberedRecord {
  std::size_t line;
  StimulusRecord record;
};

/// Syntax-only parse of a record file.
std::vector<NumberedRecord> parseRecords(std::string_view text);
std::string serializeRecords(std::span<const StimulusRecord> records);

/// Parses and fully validates a record file. The first invalid record raises
/// ValidationError naming its line, key and reasons.
std::vector<StimulusRecord> parseCorpusRecords(std::string_view text, const TaxonomyGraph& g,
                                               const VocabularySet& vocabs);

/// Legacy ratings table, header
/// `id db keyword valence valenceSD arousal arousalSD dominance dominanceSD`,
/// `NA` for missing values. Each row becomes a keyword-only Object annotation,
/// ratings on the [1, 9] scale and a context carrying (db, id).
std::vector<StimulusRecord> parseLegacyTable(std::string_view text);

struct ExpansionReport {
  std::size_t mappedKeywords = 0;   // keyword annotations that had a mapping
  std::size_t addedAnnotations = 0;
  std::vector<std::pair<StimulusId, std::string>> unmapped;
};

/// Every keyword-only annotation with a mapping entry gains one concept
/// annotation (same kind) per mapped concept that the record does not already
/// carry. Unmapped keywords are reported, not rejected.
ExpansionReport expandKeywords(std::vector<StimulusRecord>& records, const KeywordMapping& mapping);

/// Append-only store of validated records with concept and keyword indices.
class Corpus {
 public:
  using KeySet = std::set<StimulusId>;

  /// Throws ValidationError for a structurally invalid record or duplicate key.
  void add(StimulusRecord rec);

  /// Throws LookupError for unknown keys.
  const StimulusRecord& get(std::string_view key) const;
  bool contains(std::string_view key) const;

  /// Exact concept / case-folded keyword lookups; empty set when absent.
  const KeySet& byConcept(std::string_view concept_name) const;
  const KeySet& byKeyword(std::string_view keyword) const;

  std::size_t size() const noexcept { return records_.size(); }
  const std::map<StimulusId, StimulusRecord, std::less<>>& records() const noexcept {
    return records_;
  }
  const std::map<std::string, KeySet, std::less<>>& conceptIndex() const noexcept {
    return conceptIndex_;
  }
  const std::map<std::string, KeySet, std::less<>>& keywordIndex() const noexcept {
    return keywordIndex_;
  }

 private:
  std::map<StimulusId, StimulusRecord, std::less<>> records_;
  std::map<std::string, KeySet, std::less<>> conceptIndex_;
  std::map<std::string, KeySet, std::less<>> keywordIndex_;
};

}  // namespace stimkb
