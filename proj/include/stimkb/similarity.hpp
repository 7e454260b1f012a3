#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "stimkb/taxonomy.hpp"

namespace stimkb {

/// Relatedness measures. Every measure returns rel in [0, 1] with rel(x, y) = 1
/// exactly when x = y (after case folding for the lexical ones).
enum class Measure { Inclusion, Levenshtein, PathLength, WuPalmer, LeacockChodorow, Li };

inline constexpr Measure kAllMeasures[] = {Measure::Inclusion,  Measure::Levenshtein,
                                           Measure::PathLength, Measure::WuPalmer,
                                           Measure::LeacockChodorow, Measure::Li};

/// Accepts `inclusion | levenshtein | pathlen | wupalmer | lch | li`, any case.
std::optional<Measure> parseMeasure(std::string_view name);
std::string_view toString(Measure m);

/// Inclusion and Levenshtein compare keyword strings; the rest compare concepts.
constexpr bool isLexical(Measure m) {
  return m == Measure::Inclusion || m == Measure::Levenshtein;
}

/// Unit-cost edit distance over code points.
std::size_t editDistance(std::u32string_view a, std::u32string_view b);

/// 1 if equal after folding; |shorter|/|longer| if one contains the other;
/// 0 otherwise. Throws PreconditionError on empty input.
double inclusionRel(std::string_view a, std::string_view b);

/// 1 - editDistance / max length, over folded code points.
double levenshteinRel(std::string_view a, std::string_view b);

/// 1 / (1 + shortest path).
double pathLengthRel(const TaxonomyGraph& g, std::string_view a, std::string_view b);

/// 2*N3 / (N1 + N2 + 2*N3) where N3 = depth(lcs) and N1, N2 are the shortest
/// upward distances from the operands to the lcs. On a tree this is
/// 2*depth(lcs) / (depth(a) + depth(b)).
double wuPalmerRel(const TaxonomyGraph& g, std::string_view a, std::string_view b);

struct LeacockChodorowParams {
  double zeroDistance = 0.5;  // stands in for d = 0 inside the log
};

/// -log(max(d, eps) / 2D) divided by -log(eps / 2D), D = maxDepth.
double leacockChodorowRel(const TaxonomyGraph& g, std::string_view a, std::string_view b,
                          const LeacockChodorowParams& params = {});

struct LiParams {
  double alpha = 0.2;
  double beta = 0.6;
};

/// exp(-alpha*d) * tanh(beta*h) / tanh(beta*max(h, depth(a), depth(b))),
/// h = depth(lcs).
double liRel(const TaxonomyGraph& g, std::string_view a, std::string_view b,
             const LiParams& params = {});

/// A query or annotation operand: either a taxonomy concept or a keyword.
struct Term {
  enum class Kind { Concept, Keyword };
  Kind kind = Kind::Keyword;
  std::string text;

  static Term ofConcept(std::string name) { return {Kind::Concept, std::move(name)}; }
  static Term ofKeyword(std::string word) { return {Kind::Keyword, std::move(word)}; }
  bool isConcept() const noexcept { return kind == Kind::Concept; }
  friend bool operator==(const Term&, const Term&) = default;
};

/// Inputs shared by the concept measures.
struct SimilarityContext {
  const TaxonomyGraph* taxonomy = nullptr;
  LeacockChodorowParams lch;
  LiParams li;
};

/// Dispatches to the measure. Throws PreconditionError when the measure does
/// not match the operand kind, or a concept measure has no taxonomy.
double relatedness(Measure m, const SimilarityContext& ctx, const Term& x, const Term& y);

}  // namespace stimkb
