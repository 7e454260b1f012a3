#include "stimkb/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "stimkb/error.hpp"
#include "stimkb/text.hpp"

namespace stimkb {

std::optional<Measure> parseMeasure(std::string_view name) {
  const std::string n = text::foldCase(name);
  if (n == "inclusion") return Measure::Inclusion;
  if (n == "levenshtein") return Measure::Levenshtein;
  if (n == "pathlen") return Measure::PathLength;
  if (n == "wupalmer") return Measure::WuPalmer;
  if (n == "lch") return Measure::LeacockChodorow;
  if (n == "li") return Measure::Li;
  return std::nullopt;
}

std::string_view toString(Measure m) {
  switch (m) {
    case Measure::Inclusion: return "inclusion";
    case Measure::Levenshtein: return "levenshtein";
    case Measure::PathLength: return "pathlen";
    case Measure::WuPalmer: return "wupalmer";
    case Measure::LeacockChodorow: return "lch";
    case Measure::Li: return "li";
  }
  return "?";
}

std::size_t editDistance(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

namespace {

void requireNonEmpty(std::string_view a, std::string_view b) {
  if (a.empty() || b.empty()) throw PreconditionError("lexical measures need non-empty strings");
}

}  // namespace

double inclusionRel(std::string_view a, std::string_view b) {
  requireNonEmpty(a, b);
  const auto fa = text::foldedCodePoints(a);
  const auto fb = text::foldedCodePoints(b);
  if (fa == fb) return 1.0;
  const auto& shorter = fa.size() <= fb.size() ? fa : fb;
  const auto& longer = fa.size() <= fb.size() ? fb : fa;
  if (longer.find(shorter) == std::u32string::npos) return 0.0;
  return static_cast<double>(shorter.size()) / static_cast<double>(longer.size());
}

double levenshteinRel(std::string_view a, std::string_view b) {
  requireNonEmpty(a, b);
  const auto fa = text::foldedCodePoints(a);
  const auto fb = text::foldedCodePoints(b);
  const auto longest = std::max(fa.size(), fb.size());
  return 1.0 - static_cast<double>(editDistance(fa, fb)) / static_cast<double>(longest);
}

double pathLengthRel(const TaxonomyGraph& g, std::string_view a, std::string_view b) {
  return 1.0 / (1.0 + g.shortestPath(a, b));
}

double wuPalmerRel(const TaxonomyGraph& g, std::string_view a, std::string_view b) {
  const auto ia = g.indexOf(a);
  const auto ib = g.indexOf(b);
  const auto l = g.lcs(ia, ib);
  const double n3 = g.depth(l);
  const double n1 = g.upwardDistance(ia, l);
  const double n2 = g.upwardDistance(ib, l);
  return 2.0 * n3 / (n1 + n2 + 2.0 * n3);
}

double leacockChodorowRel(const TaxonomyGraph& g, std::string_view a, std::string_view b,
                          const LeacockChodorowParams& params) {
  const double d = g.shortestPath(a, b);
  const double twiceDepth = 2.0 * g.maxDepth();
  const double eps = params.zeroDistance;
  const double raw = -std::log(std::max(d, eps) / twiceDepth);
  const double top = -std::log(eps / twiceDepth);
  return std::clamp(raw / top, 0.0, 1.0);
}

double liRel(const TaxonomyGraph& g, std::string_view a, std::string_view b,
             const LiParams& params) {
  const auto ia = g.indexOf(a);
  const auto ib = g.indexOf(b);
  const double d = g.shortestPath(ia, ib);
  const int h = g.depth(g.lcs(ia, ib));
  const int norm = std::max({h, g.depth(ia), g.depth(ib)});
  return std::exp(-params.alpha * d) * std::tanh(params.beta * h) / std::tanh(params.beta * norm);
}

double relatedness(Measure m, const SimilarityContext& ctx, const Term& x, const Term& y) {
  const bool wantConcepts = !isLexical(m);
  if (x.isConcept() != wantConcepts || y.isConcept() != wantConcepts) {
    throw PreconditionError(std::string("measure ") + std::string(toString(m)) + " applies to " +
                            (wantConcepts ? "concepts" : "keywords") + " only");
  }
  if (wantConcepts && !ctx.taxonomy) throw PreconditionError("concept measure without taxonomy");
  switch (m) {
    case Measure::Inclusion: return inclusionRel(x.text, y.text);
    case Measure::Levenshtein: return levenshteinRel(x.text, y.text);
    case Measure::PathLength: return pathLengthRel(*ctx.taxonomy, x.text, y.text);
    case Measure::WuPalmer: return wuPalmerRel(*ctx.taxonomy, x.text, y.text);
    case Measure::LeacockChodorow:
      return leacockChodorowRel(*ctx.taxonomy, x.text, y.text, ctx.lch);
    case Measure::Li: return liRel(*ctx.taxonomy, x.text, y.text, ctx.li);
  }
  throw InvariantError("unhandled measure");
}

}  // namespace stimkb
