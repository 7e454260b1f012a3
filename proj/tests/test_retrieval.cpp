#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "stimkb/error.hpp"
#include "stimkb/retrieval.hpp"
#include "stimkb/workspace.hpp"

using namespace stimkb;

namespace {

const Workspace& fixtureWorkspace() {
  static const Workspace ws = [] {
    IngestSummary summary;
    auto w = buildWorkspace(loadManifest(STIMKB_DATA_DIR "/fixture/manifest.txt"), summary);
    EXPECT_TRUE(summary.invalid.empty());
    return w;
  }();
  return ws;
}

std::vector<StimulusId> ids(const std::vector<ScoredStimulus>& entries) {
  std::vector<StimulusId> out;
  for (const auto& e : entries) out.push_back(e.id);
  return out;
}

struct RandomKb {
  TaxonomyGraph taxonomy;
  Corpus corpus;
  EquivalenceClosure equivalences;

  KnowledgeBase kb() const { return {&taxonomy, &corpus, &equivalences, {}}; }
};

const char* const kWords[] = {"dog", "Dogs", "cat", "hotdog", "snow", "street", "crowd", "c"};
const char* const kTerms[] = {"anger", "fear", "joy"};
const char* const kVocabs[] = {"BigSix", "OCC"};

RandomKb randomKb(std::mt19937_64& rng) {
  RandomKb r;
  r.taxonomy = TaxonomyGraph::fromEdges(oracle::randomDag(rng, 30, 2, true));
  r.equivalences = EquivalenceClosure(std::vector<EquivalenceAxiom>{
      {{"BigSix", "anger"}, {"OCC", "anger"}}, {{"BigSix", "joy"}, {"OCC", "fear"}}});
  const auto& cs = r.taxonomy.concepts();
  for (int i = 0; i < 60; ++i) {
    StimulusRecord rec;
    const std::string db = i % 3 ? "IAPS" : "IADS";
    rec.key = db + "/" + std::to_string(i);
    const std::size_t ns = rng() % 3;
    for (std::size_t k = 0; k < ns; ++k) {
      SemanticsAnnotation s;
      if (rng() % 3) s.concept_name = cs[rng() % cs.size()];
      if (!s.concept_name || rng() % 2) s.keyword = kWords[rng() % 8];
      rec.semantics.push_back(s);
    }
    if (rng() % 2) {
      DimensionAnnotation d;
      d[Dimension::Valence] = 1 + static_cast<double>(rng() % 17) / 2;
      if (rng() % 4) d[Dimension::Arousal] = 1 + static_cast<double>(rng() % 17) / 2;
      rec.dimensions = d;
    }
    if (rng() % 2) rec.categories.push_back({kVocabs[rng() % 2], kTerms[rng() % 3], {}});
    if (!validateStimulus(rec)) rec.sentiments.push_back({0.5, {}});
    r.corpus.add(rec);
  }
  return r;
}

Query randomQuery(std::mt19937_64& rng, const RandomKb& r, QueryMode mode) {
  Query q;
  q.mode = mode;
  const auto& cs = r.taxonomy.concepts();
  const bool wantConcept = mode == QueryMode::Filter || rng() % 2;
  if (mode == QueryMode::Rank || rng() % 3) {
    if (wantConcept) {
      q.term = Term::ofConcept(cs[rng() % cs.size()]);
      q.measure = static_cast<Measure>(2 + rng() % 4);
    } else {
      q.term = Term::ofKeyword(kWords[rng() % 8]);
      q.measure = static_cast<Measure>(rng() % 2);
    }
    if (mode == QueryMode::Filter) q.measure.reset();
  }
  if (rng() % 3 == 0) {
    const double lo = 1 + static_cast<double>(rng() % 9);
    q.boxes[Dimension::Valence] = {lo, lo + static_cast<double>(rng() % 5)};
  }
  if (rng() % 4 == 0) q.boxes[Dimension::Arousal] = {2, 7};
  if (rng() % 4 == 0) q.category = QualifiedTerm{kVocabs[rng() % 2], kTerms[rng() % 3]};
  if (rng() % 5 == 0) q.dbName = "IADS";
  if (mode == QueryMode::Filter && !q.term && !q.category && q.boxes.empty()) {
    q.category = QualifiedTerm{"OCC", "anger"};
  }
  q.limit = 1 + rng() % 70;
  return q;
}

bool passesBrute(const RandomKb& r, const StimulusRecord& rec, const Query& q) {
  for (const auto& [dim, box] : q.boxes) {
    if (!rec.dimensions || !(*rec.dimensions)[dim]) return false;
    const double v = *(*rec.dimensions)[dim];
    if (v < box.lo || v > box.hi) return false;
  }
  if (q.dbName && rec.key.substr(0, rec.key.find('/')) != *q.dbName) return false;
  if (q.category) {
    bool any = false;
    for (const auto& c : rec.categories) {
      any = any || r.equivalences.areEquivalent(QualifiedTerm{c.vocabulary, c.term}, *q.category);
    }
    if (!any) return false;
  }
  return true;
}

}  // namespace

TEST(QueryParse, Defaults) {
  const auto q = parseQuery("keyword:Man measure:levenshtein");
  ASSERT_TRUE(q.term);
  EXPECT_FALSE(q.term->isConcept());
  EXPECT_EQ(q.term->text, "Man");
  EXPECT_EQ(q.mode, QueryMode::Rank);
  EXPECT_EQ(q.measure, Measure::Levenshtein);
  EXPECT_EQ(q.limit, 100u);
  EXPECT_EQ(parseQuery("concept:Human").measure, Measure::WuPalmer);
  EXPECT_EQ(parseQuery("keyword:Man").measure, Measure::Levenshtein);
  EXPECT_FALSE(parseQuery("valence:[1,2] mode:filter").measure);
}

TEST(QueryParse, ManifestDefaults) {
  const QueryDefaults d{Measure::PathLength, 7};
  EXPECT_EQ(parseQuery("concept:Human", d).measure, Measure::PathLength);
  EXPECT_EQ(parseQuery("keyword:Man", d).measure, Measure::Levenshtein);
  EXPECT_EQ(parseQuery("keyword:Man", d).limit, 7u);
  EXPECT_EQ(parseQuery("concept:Human measure:li limit:3", d).measure, Measure::Li);
  EXPECT_EQ(parseQuery("concept:Human measure:li limit:3", d).limit, 3u);
}

TEST(QueryParse, Clauses) {
  const auto q = parseQuery(
      "  keyword:\"winter \\\"street\\\"\"  valence:[6.5, 9] arousal:[1,3.5] category:BigSix.anger "
      "db:IAPS measure:INCLUSION mode:Filter limit:5 ");
  EXPECT_EQ(q.term->text, "winter \"street\"");
  EXPECT_EQ(q.boxes.at(Dimension::Valence), (Interval{6.5, 9}));
  EXPECT_EQ(q.boxes.at(Dimension::Arousal), (Interval{1, 3.5}));
  EXPECT_EQ(q.category, (QualifiedTerm{"BigSix", "anger"}));
  EXPECT_EQ(q.dbName, "IAPS");
  EXPECT_EQ(q.measure, Measure::Inclusion);
  EXPECT_EQ(q.mode, QueryMode::Filter);
  EXPECT_EQ(q.limit, 5u);
}

TEST(QueryParse, SyntaxErrorsPointAtTheClause) {
  const std::pair<const char*, std::size_t> cases[] = {
      {"concept:Human concept:Man", 14},
      {"concept:Human keyword:x", 14},
      {"colour:red", 0},
      {"concept", 0},
      {"valence:[9,1]", 8},
      {"valence:[a,1]", 9},
      {"valence:[1,2", 8},
      {"measure:resnik", 8},
      {"mode:sort", 5},
      {"limit:0", 6},
      {"keyword:\"open", 8},
      {"category:anger", 9},
      {"concept:Hu.man", 8},
      {"keyword:", 8},
  };
  for (const auto& [text, pos] : cases) {
    try {
      parseQuery(text);
      ADD_FAILURE() << text;
    } catch (const QuerySyntaxError& e) {
      EXPECT_EQ(e.column(), pos) << text << ": " << e.what();
    }
  }
}

TEST(QueryParse, FormatRoundTrip) {
  std::mt19937_64 rng(61);
  RandomKb r = randomKb(rng);
  for (int i = 0; i < 300; ++i) {
    auto q = randomQuery(rng, r, i % 2 ? QueryMode::Rank : QueryMode::Filter);
    if (q.term && !q.measure) q.measure = q.term->isConcept() ? Measure::WuPalmer : Measure::Levenshtein;
    if (q.term && !q.term->isConcept() && rng() % 2) q.term->text = "a \"quoted\" \\ word";
    EXPECT_EQ(parseQuery(formatQuery(q)), q) << formatQuery(q);
  }
}

TEST(Fixture, GroupOfPeopleFilter) {
  const auto& ws = fixtureWorkspace();
  EXPECT_EQ(ws.corpus.size(), 4u);
  const auto hits = filterQuery(ws.knowledgeBase(), parseQuery("concept:GroupOfPeople mode:filter"));
  EXPECT_EQ(hits, std::vector<StimulusId>{"IADS/311"});
  const auto objects = filterQuery(ws.knowledgeBase(), parseQuery("concept:Object mode:filter"));
  EXPECT_EQ(objects.size(), 4u);
}

TEST(Fixture, EmptyDimensionBox) {
  const auto& ws = fixtureWorkspace();
  const auto q = parseQuery("valence:[6.5,9] arousal:[1,3.5] mode:filter");
  EXPECT_TRUE(filterQuery(ws.knowledgeBase(), q).empty());
  const auto wide = parseQuery("valence:[5,9] arousal:[1,7] mode:filter");
  EXPECT_EQ(filterQuery(ws.knowledgeBase(), wide),
            (std::vector<StimulusId>{"IAPS/5635", "IAPS/7039", "IAPS/8163"}));
}

TEST(Fixture, InclusionOnLegacyKeywords) {
  const auto& ws = fixtureWorkspace();
  const auto r = rankedQuery(ws.knowledgeBase(), parseQuery("keyword:WinterStreet measure:inclusion db:IAPS"));
  ASSERT_EQ(r.entries.size(), 3u);
  EXPECT_EQ(r.entries[0], (ScoredStimulus{"IAPS/5635", 1.0}));
  EXPECT_EQ(r.entries[1].score, 0.0);
  EXPECT_EQ(r.entries[2].score, 0.0);
  const StimulusId legacy[] = {"IAPS/7039", "IAPS/5635"};
  const auto two = rankCandidates(ws.knowledgeBase(), legacy, Term::ofKeyword("WinterStreet"),
                                  Measure::Inclusion, 10);
  EXPECT_EQ(ids(two), (std::vector<StimulusId>{"IAPS/5635", "IAPS/7039"}));
  EXPECT_EQ(two[1].score, 0.0);
}

TEST(Fixture, ExactConceptRanksFirstUnderEveryConceptMeasure) {
  const auto& ws = fixtureWorkspace();
  for (Measure m : {Measure::PathLength, Measure::WuPalmer, Measure::LeacockChodorow, Measure::Li}) {
    Query q;
    q.term = Term::ofConcept("GroupOfPeople");
    q.measure = m;
    const auto r = rankedQuery(ws.knowledgeBase(), q);
    ASSERT_FALSE(r.entries.empty());
    EXPECT_EQ(r.entries[0], (ScoredStimulus{"IADS/311", 1.0})) << toString(m);
    EXPECT_LT(r.entries[1].score, 1.0);
  }
}

TEST(Retrieval, Errors) {
  const auto& ws = fixtureWorkspace();
  const auto kb = ws.knowledgeBase();
  EXPECT_THROW(filterQuery(kb, parseQuery("concept:Unicorn mode:filter")), LookupError);
  EXPECT_THROW(rankedQuery(kb, parseQuery("concept:Unicorn")), LookupError);
  EXPECT_THROW(filterQuery(kb, parseQuery("concept:Human")), PreconditionError);
  EXPECT_THROW(filterQuery(kb, parseQuery("keyword:x mode:filter")), PreconditionError);
  EXPECT_THROW(filterQuery(kb, parseQuery("db:IAPS mode:filter")), PreconditionError);
  EXPECT_THROW(rankedQuery(kb, parseQuery("valence:[1,9]")), PreconditionError);
  EXPECT_THROW(rankedQuery(kb, parseQuery("concept:Human measure:levenshtein")), PreconditionError);
  EXPECT_THROW(rankedQuery(kb, parseQuery("keyword:x measure:pathlen")), PreconditionError);
}

TEST(Retrieval, CategoryMatchesAcrossEquivalentVocabularies) {
  const auto vocabs = loadVocabulary("OCC\tanger\nOCC\tjoy\nFSRE\tanger\n");
  const auto closure = buildEquivalenceClosure(
      parseAxioms("BigSix\tanger\tOCC\tanger\nBigSix\tanger\tFSRE\tanger\n"));
  const auto g = parseTaxonomy("Thing\tEntity\n");
  Corpus c;
  c.add(parseRecordLine("key=A/1;category=vocab:FSRE,term:anger"));
  c.add(parseRecordLine("key=A/2;category=vocab:OCC,term:joy"));
  c.add(parseRecordLine("key=A/3;category=vocab:BigSix,term:anger;object=keyword:fist"));
  const KnowledgeBase kb{&g, &c, &closure, {}};
  EXPECT_EQ(filterQuery(kb, parseQuery("category:OCC.anger mode:filter")),
            (std::vector<StimulusId>{"A/1", "A/3"}));
  EXPECT_EQ(filterQuery(kb, parseQuery("category:OCC.joy mode:filter")),
            std::vector<StimulusId>{"A/2"});
  const KnowledgeBase plain{&g, &c, nullptr, {}};
  EXPECT_TRUE(filterQuery(plain, parseQuery("category:OCC.anger mode:filter")).empty());
  const auto ranked = rankedQuery(kb, parseQuery("keyword:fist category:FSRE.anger"));
  EXPECT_EQ(ids(ranked.entries), (std::vector<StimulusId>{"A/3", "A/1"}));
}

TEST(Retrieval, FilterMatchesBruteForce) {
  std::mt19937_64 rng(67);
  for (int round = 0; round < 20; ++round) {
    const auto r = randomKb(rng);
    const oracle::Dag dag(r.taxonomy.edges(), r.taxonomy.concepts());
    for (int i = 0; i < 30; ++i) {
      const auto q = randomQuery(rng, r, QueryMode::Filter);
      std::vector<StimulusId> expect;
      for (const auto& [key, rec] : r.corpus.records()) {
        if (!passesBrute(r, rec, q)) continue;
        if (q.term) {
          bool any = false;
          for (const auto& s : rec.semantics) {
            any = any || (s.concept_name && dag.subsumes(*s.concept_name, q.term->text));
          }
          if (!any) continue;
        }
        expect.push_back(key);
      }
      EXPECT_EQ(filterQuery(r.kb(), q), expect) << formatQuery(q);
    }
  }
}

TEST(Retrieval, RankMatchesScoreAllThenSort) {
  std::mt19937_64 rng(71);
  for (int round = 0; round < 20; ++round) {
    const auto r = randomKb(rng);
    const SimilarityContext ctx{&r.taxonomy, {}, {}};
    for (int i = 0; i < 30; ++i) {
      const auto q = randomQuery(rng, r, QueryMode::Rank);
      std::vector<ScoredStimulus> all;
      for (const auto& [key, rec] : r.corpus.records()) {
        if (!passesBrute(r, rec, q)) continue;
        double best = 0.0;
        for (const auto& s : rec.semantics) {
          const auto& operand = q.term->isConcept() ? s.concept_name : s.keyword;
          if (operand) best = std::max(best, relatedness(*q.measure, ctx, *q.term, {q.term->kind, *operand}));
        }
        all.push_back({key, best});
      }
      std::stable_sort(all.begin(), all.end(),
                       [](const auto& a, const auto& b) { return a.score > b.score; });
      if (all.size() > q.limit) all.resize(q.limit);
      const auto got = rankedQuery(r.kb(), q);
      EXPECT_EQ(got.entries, all) << formatQuery(q);
      EXPECT_EQ(got.measure, *q.measure);
    }
  }
}
