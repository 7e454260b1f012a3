#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stimkb/corpus.hpp"
#include "stimkb/retrieval.hpp"
#include "stimkb/similarity.hpp"

namespace stimkb {

using Judgments = std::map<StimulusId, bool, std::less<>>;

/// Relevance judgments keyed by query id.
class RelevanceJudgments {
 public:
  /// Throws ValidationError when the pair is already judged differently.
  void set(std::string_view query, std::string_view stimulus, bool relevant);

  /// Absent query or pair yields nullopt.
  std::optional<bool> find(std::string_view query, std::string_view stimulus) const;
  const Judgments& forQuery(std::string_view query) const;  // empty when unknown

  std::size_t size() const noexcept;  // number of judged pairs
  const std::map<std::string, Judgments, std::less<>>& all() const noexcept { return byQuery_; }

 private:
  std::map<std::string, Judgments, std::less<>> byQuery_;
};

/// Lines of `query-id<TAB>stimulus-id<TAB>0|1`. Throws ParseError.
RelevanceJudgments parseJudgments(std::string_view text);
std::string serializeJudgments(const RelevanceJudgments& j);

struct LiftPoint {
  std::size_t rank = 0;           // 1-based cutoff r
  std::size_t relevantInTop = 0;  // relevant entries among the top r
  double lift = 0.0;              // precision@r / base rate
  friend bool operator==(const LiftPoint&, const LiftPoint&) = default;
};

/// `relevant[i]` is the judgment of the entry at rank i+1.
/// Throws PreconditionError when nothing is relevant.
std::vector<LiftPoint> liftCurve(const std::vector<bool>& relevant);

/// Throws PreconditionError when an entry is unjudged or nothing is relevant.
std::vector<LiftPoint> liftCurve(const RankedResult& ranked, const Judgments& j);

/// Rank with the highest lift; ties go to the smallest rank. Comparison is
/// exact (integer cross-multiplication), not on the rounded lift values.
std::size_t selectThreshold(std::span<const LiftPoint> curve);

/// The first t of n entries are True. Throws PreconditionError unless 1 <= t <= n.
std::vector<bool> classifyAtThreshold(std::size_t n, std::size_t t);
Judgments classifyAtThreshold(const RankedResult& ranked, std::size_t t);

struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const noexcept { return tp + fp + fn + tn; }
  ConfusionMatrix& operator+=(const ConfusionMatrix& o) noexcept;
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

ConfusionMatrix confusion(const std::vector<bool>& labels, const std::vector<bool>& relevant);

/// Throws PreconditionError unless both maps have the same keys.
ConfusionMatrix confusion(const Judgments& labels, const Judgments& relevant);

/// Ratios with a zero denominator are reported as 0.
struct Metrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double falloutStandard = 0.0;  // fp / (fp + tn)
  double missRate = 0.0;         // fn / (fn + tp)
  double specificity = 0.0;      // tn / (fp + tn)
  double f1 = 0.0;
  bool precisionUndefined = false;  // tp + fp == 0
};

Metrics metrics(const ConfusionMatrix& m);

/// Micro average: metrics of the element-wise sum. Throws PreconditionError on
/// an empty list.
Metrics aggregate(std::span<const ConfusionMatrix> matrices);

enum class Scheme { Keyword, Concept };

std::string_view toString(Scheme s);
constexpr Scheme schemeOf(Measure m) { return isLexical(m) ? Scheme::Keyword : Scheme::Concept; }

struct EvalQuery {
  std::string id;
  std::optional<std::string> keyword;
  std::optional<std::string> concept_name;
  friend bool operator==(const EvalQuery&, const EvalQuery&) = default;
};

/// Lines of `query-id<TAB>keyword<TAB>concept`; `-` marks an absent term.
std::vector<EvalQuery> parseEvalQueries(std::string_view text);
std::string serializeEvalQueries(std::span<const EvalQuery> queries);

struct ExperimentConfig {
  std::vector<Measure> measures{Measure::Inclusion, Measure::Levenshtein, Measure::PathLength,
                                Measure::WuPalmer};
  std::size_t sampleSize = 100;  // clipped to the corpus size
  std::uint64_t seed = 1;
  int maxResamples = 10;  // extra draws when a sample holds no relevant stimulus
};

/// Deterministic sample of `k` keys for (seed, stream, attempt), returned sorted.
std::vector<StimulusId> sampleCandidates(std::span<const StimulusId> keys, std::size_t k,
                                         std::uint64_t seed, std::uint64_t stream,
                                         std::uint64_t attempt);

struct QueryOutcome {
  std::string query;
  Measure measure = Measure::Levenshtein;
  std::size_t candidates = 0;
  std::size_t threshold = 0;
  ConfusionMatrix matrix;
};

struct ReportRow {
  Scheme scheme = Scheme::Keyword;
  Measure measure = Measure::Levenshtein;
  std::size_t queries = 0;
  ConfusionMatrix total;
  Metrics metrics;
};

struct ExperimentReport {
  std::vector<ReportRow> rows;  // in config measure order
  std::vector<QueryOutcome> outcomes;
  std::vector<std::string> notes;
};

/// Candidate samples are drawn once per query and shared by every measure.
/// Unjudged candidates count as non-relevant.
ExperimentReport runExperiment(const KnowledgeBase& kb, std::span<const EvalQuery> queries,
                               const RelevanceJudgments& judgments, const ExperimentConfig& config);

/// Columns: scheme measure queries accuracy precision recall fallout f_measure
/// fallout_standard miss_rate f1_standard precision_undefined. `fallout` is
/// the miss rate and `f_measure` the standard F1. Notes follow as `#` lines.
std::string formatReport(const ExperimentReport& report);

}  // namespace stimkb
