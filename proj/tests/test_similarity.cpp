#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "stimkb/error.hpp"
#include "stimkb/similarity.hpp"
#include "stimkb/text.hpp"

using namespace stimkb;

namespace {

// Entity(1) > Animal(2) > Dog(3) > Puppy(4); Animal > Cat(3); Entity > Plant(2) > Tree(3)
const TaxonomyGraph& zoo() {
  static const auto g = parseTaxonomy(
      "Animal\tEntity\nPlant\tEntity\nDog\tAnimal\nCat\tAnimal\nPuppy\tDog\nTree\tPlant\n");
  return g;
}

std::string randomWord(std::mt19937_64& rng, std::size_t maxLen) {
  static const char* const pieces[] = {"a", "b", "c", "A", "B", "\xC4\x8D", "\xC4\x8C"};
  std::string s;
  const std::size_t n = 1 + rng() % maxLen;
  for (std::size_t i = 0; i < n; ++i) s += pieces[rng() % 7];
  return s;
}

}  // namespace

TEST(Measures, Names) {
  for (auto m : kAllMeasures) EXPECT_EQ(parseMeasure(toString(m)), m);
  EXPECT_EQ(parseMeasure("WuPalmer"), Measure::WuPalmer);
  EXPECT_EQ(parseMeasure("LCH"), Measure::LeacockChodorow);
  EXPECT_FALSE(parseMeasure("resnik"));
}

TEST(Inclusion, Examples) {
  EXPECT_EQ(inclusionRel("Train", "train"), 1.0);
  EXPECT_DOUBLE_EQ(inclusionRel("dog", "attackdog"), 3.0 / 9.0);
  EXPECT_DOUBLE_EQ(inclusionRel("ATTACKDOG", "dog"), 3.0 / 9.0);
  EXPECT_EQ(inclusionRel("dog", "cat"), 0.0);
  EXPECT_THROW(inclusionRel("", "cat"), PreconditionError);
}

TEST(Levenshtein, Examples) {
  EXPECT_EQ(levenshteinRel("Train", "Train"), 1.0);
  EXPECT_EQ(levenshteinRel("dog", "dogs"), 0.75);
  EXPECT_EQ(levenshteinRel("\xC4\x8C" "a", "\xC4\x8D" "A"), 1.0);
  EXPECT_EQ(editDistance(U"kitten", U"sitting"), 3u);
  EXPECT_THROW(levenshteinRel("a", ""), PreconditionError);
}

TEST(Levenshtein, MatchesRecursiveOracle) {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 400; ++i) {
    const auto a = randomWord(rng, 8);
    const auto b = randomWord(rng, 8);
    const auto fa = text::foldedCodePoints(a);
    const auto fb = text::foldedCodePoints(b);
    const std::size_t d = oracle::levenshtein(fa, fb);
    EXPECT_EQ(editDistance(fa, fb), d);
    const double expect = 1.0 - static_cast<double>(d) / static_cast<double>(std::max(fa.size(), fb.size()));
    EXPECT_EQ(levenshteinRel(a, b), expect) << a << " " << b;
  }
}

TEST(ConceptMeasures, FixtureValues) {
  const auto& g = zoo();
  EXPECT_EQ(pathLengthRel(g, "Dog", "Dog"), 1.0);
  EXPECT_EQ(pathLengthRel(g, "Dog", "Animal"), 0.5);
  EXPECT_DOUBLE_EQ(pathLengthRel(g, "Dog", "Cat"), 1.0 / 3.0);

  EXPECT_EQ(wuPalmerRel(g, "Dog", "Dog"), 1.0);
  EXPECT_DOUBLE_EQ(wuPalmerRel(g, "Dog", "Animal"), 0.8);
  EXPECT_DOUBLE_EQ(wuPalmerRel(g, "Animal", "Plant"), 0.5);

  ASSERT_EQ(g.maxDepth(), 4);
  EXPECT_EQ(leacockChodorowRel(g, "Cat", "Cat"), 1.0);
  EXPECT_NEAR(leacockChodorowRel(g, "Dog", "Cat"), std::log(4.0) / std::log(16.0), 1e-15);
  EXPECT_NEAR(leacockChodorowRel(g, "Dog", "Cat"), 0.5, 1e-15);

  EXPECT_EQ(liRel(g, "Tree", "Tree"), 1.0);
  const double li = liRel(g, "Dog", "Cat");
  EXPECT_NEAR(li, std::exp(-0.4) * std::tanh(1.2) / std::tanh(1.8), 1e-15);
  EXPECT_NEAR(li, 0.5902110748856692, 1e-12);

  EXPECT_THROW(pathLengthRel(g, "Dog", "Unicorn"), LookupError);
  EXPECT_THROW(wuPalmerRel(g, "Unicorn", "Dog"), LookupError);
}

TEST(ConceptMeasures, LeacockChodorowOnLongestPath) {
  // Two chains of depth 4 under one root: the longest path is 6 < 2 * 4.
  const auto g = parseTaxonomy("A\tR\nB\tA\nC\tB\nX\tR\nY\tX\nZ\tY\n");
  const double r = leacockChodorowRel(g, "C", "Z");
  EXPECT_GT(r, 0.0);
  EXPECT_LT(r, 1.0);
  EXPECT_NEAR(r, std::log(8.0 / 6.0) / std::log(8.0 / 0.5), 1e-15);
}

TEST(ConceptMeasures, WuPalmerOnTreeMatchesDepthForm) {
  std::mt19937_64 rng(43);
  const auto edges = oracle::randomDag(rng, 60, 1, false);
  const auto g = TaxonomyGraph::fromEdges(edges);
  for (const auto& a : g.concepts()) {
    for (const auto& b : g.concepts()) {
      const double expect = 2.0 * g.depth(g.lcs(a, b)) / (g.depth(a) + g.depth(b));
      EXPECT_DOUBLE_EQ(wuPalmerRel(g, a, b), expect);
    }
  }
}

TEST(ConceptMeasures, PathLengthIsStrictlyMonotone) {
  std::mt19937_64 rng(47);
  const auto g = TaxonomyGraph::fromEdges(oracle::randomDag(rng, 80, 3, true));
  const auto& cs = g.concepts();
  for (std::size_t i = 0; i < 400; ++i) {
    const auto& a = cs[rng() % cs.size()];
    const auto& b = cs[rng() % cs.size()];
    const auto& c = cs[rng() % cs.size()];
    const int dab = g.shortestPath(a, b), dac = g.shortestPath(a, c);
    if (dab < dac) { EXPECT_GT(pathLengthRel(g, a, b), pathLengthRel(g, a, c)); }
    if (dab == dac) { EXPECT_EQ(pathLengthRel(g, a, b), pathLengthRel(g, a, c)); }
  }
}

TEST(Relatedness, DispatchAndMismatch) {
  SimilarityContext ctx{&zoo(), {}, {}};
  EXPECT_EQ(relatedness(Measure::Levenshtein, ctx, Term::ofKeyword("a"), Term::ofKeyword("a")), 1.0);
  EXPECT_EQ(relatedness(Measure::PathLength, ctx, Term::ofConcept("Dog"), Term::ofConcept("Dog")), 1.0);
  EXPECT_THROW(relatedness(Measure::WuPalmer, ctx, Term::ofKeyword("Dog"), Term::ofKeyword("Dog")),
               PreconditionError);
  EXPECT_THROW(relatedness(Measure::Inclusion, ctx, Term::ofConcept("Dog"), Term::ofConcept("Dog")),
               PreconditionError);
  EXPECT_THROW(relatedness(Measure::Li, {}, Term::ofConcept("Dog"), Term::ofConcept("Dog")),
               PreconditionError);
  ctx.li.alpha = 0.0;
  EXPECT_NEAR(relatedness(Measure::Li, ctx, Term::ofConcept("Dog"), Term::ofConcept("Cat")),
              std::tanh(1.2) / std::tanh(1.8), 1e-15);
}

TEST(Relatedness, AxiomsOnRandomDag) {
  std::mt19937_64 rng(53);
  const auto g = TaxonomyGraph::fromEdges(oracle::randomDag(rng, 70, 3, true));
  const SimilarityContext ctx{&g, {}, {}};
  for (Measure m : kAllMeasures) {
    if (isLexical(m)) continue;
    for (const auto& a : g.concepts()) {
      for (const auto& b : g.concepts()) {
        const double r = relatedness(m, ctx, Term::ofConcept(a), Term::ofConcept(b));
        EXPECT_GE(r, 0.0);
        EXPECT_LE(r, 1.0);
        EXPECT_EQ(r == 1.0, a == b) << toString(m) << " " << a << " " << b;
        EXPECT_EQ(r, relatedness(m, ctx, Term::ofConcept(b), Term::ofConcept(a)));
      }
    }
  }
}

TEST(Relatedness, AxiomsOnRandomStrings) {
  std::mt19937_64 rng(59);
  const SimilarityContext ctx;
  for (int i = 0; i < 1000; ++i) {
    const auto a = randomWord(rng, 6);
    const auto b = randomWord(rng, 6);
    const bool same = text::foldCase(a) == text::foldCase(b);
    for (Measure m : {Measure::Inclusion, Measure::Levenshtein}) {
      const double r = relatedness(m, ctx, Term::ofKeyword(a), Term::ofKeyword(b));
      EXPECT_GE(r, 0.0);
      EXPECT_LE(r, 1.0);
      EXPECT_EQ(r == 1.0, same);
      EXPECT_EQ(r, relatedness(m, ctx, Term::ofKeyword(b), Term::ofKeyword(a)));
      EXPECT_EQ(relatedness(m, ctx, Term::ofKeyword(a), Term::ofKeyword(a)), 1.0);
    }
  }
}
