#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stimkb/affect.hpp"
#include "stimkb/corpus.hpp"
#include "stimkb/error.hpp"
#include "stimkb/similarity.hpp"
#include "stimkb/taxonomy.hpp"

namespace stimkb {

/// Syntax error in a query string; column() is the 0-based offending offset.
class QuerySyntaxError : public ParseError {
 public:
  QuerySyntaxError(const std::string& what, std::size_t position)
      : ParseError(what + " at position " + std::to_string(position), 0, position) {}
};

enum class QueryMode { Filter, Rank };

inline constexpr std::size_t kDefaultLimit = 100;

/// Closed interval on a dimension's source scale.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v) const noexcept { return v >= lo && v <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct Query {
  std::optional<Term> term;
  std::map<Dimension, Interval> boxes;
  std::optional<QualifiedTerm> category;
  std::optional<std::string> dbName;
  std::optional<Measure> measure;
  QueryMode mode = QueryMode::Rank;
  std::size_t limit = kDefaultLimit;

  friend bool operator==(const Query&, const Query&) = default;
};

/// Values used when a query leaves out measure or limit. A default measure
/// only applies to terms of the kind it reads.
struct QueryDefaults {
  std::optional<Measure> measure;
  std::size_t limit = kDefaultLimit;
};

/// Whitespace-separated clauses:
///   concept:<Ident> | keyword:"<text>" | keyword:<word> | valence:[f,f] |
///   arousal:[f,f] | dominance:[f,f] | category:<vocab>.<term> | db:<Ident> |
///   measure:<name> | mode:filter|rank | limit:<int>
/// Without a measure clause a term gets the default measure, else wupalmer
/// for concepts and levenshtein for keywords. Throws QuerySyntaxError.
Query parseQuery(std::string_view text, const QueryDefaults& defaults = {});

/// Canonical text form; parseQuery(formatQuery(q)) == q.
std::string formatQuery(const Query& q);

struct ScoredStimulus {
  StimulusId id;
  double score = 0.0;
  friend bool operator==(const ScoredStimulus&, const ScoredStimulus&) = default;
};

/// Scores non-increasing, ties by ascending id, no duplicates.
struct RankedResult {
  std::vector<ScoredStimulus> entries;
  Query query;
  Measure measure = Measure::Levenshtein;
};

/// Everything a query reads. All pointers must outlive the call.
struct KnowledgeBase {
  const TaxonomyGraph* taxonomy = nullptr;
  const Corpus* corpus = nullptr;
  const EquivalenceClosure* equivalences = nullptr;  // optional
  SimilarityContext similarity;  // taxonomy filled from `taxonomy` when null
};

/// Stimuli satisfying every present clause of a Filter query, sorted.
/// Throws PreconditionError for a non-filter or clause-less query and
/// LookupError for an unknown query concept.
std::vector<StimulusId> filterQuery(const KnowledgeBase& kb, const Query& q);

/// MAX over the record's annotations of the operand kind the measure reads;
/// 0 when the record has none.
double scoreStimulus(const KnowledgeBase& kb, const StimulusRecord& rec, const Term& term,
                     Measure measure);

/// Scores and orders the given candidates, truncating to `limit` after sorting.
std::vector<ScoredStimulus> rankCandidates(const KnowledgeBase& kb,
                                           std::span<const StimulusId> candidates,
                                           const Term& term, Measure measure,
                                           std::size_t limit);

/// Ranks every record passing the query's box, db and category clauses.
RankedResult rankedQuery(const KnowledgeBase& kb, const Query& q);

}  // namespace stimkb
