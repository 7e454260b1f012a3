#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stimkb/affect.hpp"
#include "stimkb/corpus.hpp"
#include "stimkb/eval.hpp"
#include "stimkb/retrieval.hpp"
#include "stimkb/taxonomy.hpp"

namespace stimkb {

/// Flat `key=value` file. Relative paths resolve against the manifest's
/// directory. Keys: taxonomy (required), mapping, vocabulary, axioms, corpus,
/// legacy, queries, judgments, seed, measure, limit, sample.
struct WorkspaceManifest {
  std::filesystem::path taxonomy;
  std::optional<std::filesystem::path> mapping;
  std::optional<std::filesystem::path> vocabulary;
  std::optional<std::filesystem::path> axioms;
  std::optional<std::filesystem::path> corpus;
  std::optional<std::filesystem::path> legacy;
  std::optional<std::filesystem::path> queries;
  std::optional<std::filesystem::path> judgments;
  std::uint64_t seed = 1;
  std::optional<Measure> measure;
  std::size_t limit = kDefaultLimit;
  std::size_t sampleSize = 100;
};

WorkspaceManifest parseManifest(std::string_view text, const std::filesystem::path& baseDir);
WorkspaceManifest loadManifest(const std::filesystem::path& path);

struct Workspace {
  TaxonomyGraph taxonomy;
  KeywordMapping mapping;
  VocabularySet vocabularies = VocabularySet::withDefaults();
  EquivalenceClosure equivalences;
  Corpus corpus;
  std::vector<EvalQuery> queries;
  RelevanceJudgments judgments;
  std::uint64_t seed = 1;
  std::optional<Measure> measure;
  std::size_t limit = kDefaultLimit;
  std::size_t sampleSize = 100;

  /// Borrowing view; the workspace must outlive it.
  KnowledgeBase knowledgeBase() const;
};

struct RecordProblem {
  std::string source;  // file path
  std::size_t line = 0;
  StimulusId key;
  std::string reasons;
};

struct IngestSummary {
  std::size_t concepts = 0;
  std::size_t records = 0;
  std::size_t mappedKeywords = 0;
  std::size_t addedAnnotations = 0;
  std::vector<std::pair<StimulusId, std::string>> unmapped;
  std::vector<RecordProblem> invalid;
};

/// Reads every file of the manifest. Parse errors are rethrown as ParseError
/// naming the file; invalid records are collected in `summary.invalid` and
/// left out of the corpus.
Workspace buildWorkspace(const WorkspaceManifest& m, IngestSummary& summary);

/// Versioned JSON document holding the whole workspace.
std::string saveSnapshot(const Workspace& ws);
Workspace loadSnapshot(std::string_view json);

inline constexpr int kSnapshotVersion = 1;

}  // namespace stimkb
