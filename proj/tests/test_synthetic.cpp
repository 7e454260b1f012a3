#include <gtest/gtest.h>

#include "stimkb/error.hpp"
#include "stimkb/synthetic.hpp"

using namespace stimkb;

namespace {

double pooledPrecision(const ExperimentReport& r, Scheme scheme) {
  ConfusionMatrix sum;
  for (const auto& row : r.rows) {
    if (row.scheme == scheme) sum += row.total;
  }
  return metrics(sum).precision;
}

}  // namespace

TEST(Synthetic, ShapeAndCoverage) {
  const auto ws = generateSynthetic({});
  EXPECT_EQ(ws.taxonomy.size(), 50u);
  EXPECT_EQ(ws.records.size(), 100u);
  EXPECT_EQ(ws.queries.size(), 24u);
  EXPECT_EQ(ws.judgments.size(), 24u * 100u);
  const auto vocabs = VocabularySet::withDefaults();
  for (const auto& rec : ws.records) {
    EXPECT_TRUE(validateStimulus(rec, ws.taxonomy, vocabs)) << rec.key;
    ASSERT_EQ(rec.semantics.size(), 1u);
    EXPECT_TRUE(rec.semantics[0].keyword);
  }
  for (const auto& q : ws.queries) {
    EXPECT_EQ(q.keyword, q.concept_name);
    EXPECT_TRUE(ws.taxonomy.contains(*q.concept_name));
  }
  EXPECT_GT(ws.taxonomy.maxDepth(), 3);
}

TEST(Synthetic, Deterministic) {
  SyntheticConfig cfg;
  cfg.seed = 5;
  const auto a = generateSynthetic(cfg);
  const auto b = generateSynthetic(cfg);
  EXPECT_EQ(a.records, b.records);
  EXPECT_EQ(a.queries, b.queries);
  EXPECT_EQ(a.judgments.all(), b.judgments.all());
  EXPECT_EQ(serializeTaxonomy(a.taxonomy), serializeTaxonomy(b.taxonomy));
  cfg.seed = 6;
  EXPECT_NE(generateSynthetic(cfg).records, a.records);
}

TEST(Synthetic, CleanKeywordsMatchConcepts) {
  SyntheticConfig cfg;
  cfg.typoRate = cfg.aliasRate = cfg.homonymRate = cfg.conceptNoiseRate = 0.0;
  const auto ws = generateSynthetic(cfg);
  for (const auto& rec : ws.records) EXPECT_EQ(rec.semantics[0].keyword, rec.semantics[0].concept_name);
}

TEST(Synthetic, BadConfig) {
  SyntheticConfig cfg;
  cfg.concepts = 2;
  EXPECT_THROW(generateSynthetic(cfg), PreconditionError);
  cfg = {};
  cfg.queries = 50;
  EXPECT_THROW(generateSynthetic(cfg), PreconditionError);
  cfg = {};
  cfg.stimuli = 0;
  EXPECT_THROW(generateSynthetic(cfg), PreconditionError);
}

TEST(Synthetic, ConceptsBeatKeywordsAcrossSeeds) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    SyntheticConfig cfg;
    cfg.seed = seed;
    const auto ws = generateSynthetic(cfg);
    Corpus corpus;
    for (const auto& r : ws.records) corpus.add(r);
    const KnowledgeBase kb{&ws.taxonomy, &corpus, nullptr, {}};
    ExperimentConfig ec;
    ec.seed = seed;
    ec.sampleSize = 60;
    const auto report = runExperiment(kb, ws.queries, ws.judgments, ec);
    EXPECT_GT(pooledPrecision(report, Scheme::Concept), pooledPrecision(report, Scheme::Keyword))
        << "seed " << seed;
  }
}
