#include <gtest/gtest.h>

#include <filesystem>

#include "stimkb/error.hpp"
#include "stimkb/text.hpp"
#include "stimkb/workspace.hpp"

using namespace stimkb;
namespace fs = std::filesystem;

namespace {

const fs::path kFixture = STIMKB_DATA_DIR "/fixture";

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("stimkb-test-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "-" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  void write(const std::string& name, const std::string& content) const {
    text::writeFile(path_ / name, content);
  }

 private:
  fs::path path_;
};

}  // namespace

TEST(Manifest, ParsesAndResolvesPaths) {
  const auto m = parseManifest("# c\ntaxonomy=t.tsv\ncorpus=/abs/c.records\nseed=42\nmeasure=LI\nlimit=5\nsample=7\n",
                               "/base");
  EXPECT_EQ(m.taxonomy, fs::path("/base/t.tsv"));
  EXPECT_EQ(m.corpus, fs::path("/abs/c.records"));
  EXPECT_EQ(m.seed, 42u);
  EXPECT_EQ(m.measure, Measure::Li);
  EXPECT_EQ(m.limit, 5u);
  EXPECT_EQ(m.sampleSize, 7u);
  EXPECT_FALSE(m.mapping);
}

TEST(Manifest, Errors) {
  EXPECT_THROW(parseManifest("corpus=c\n", "."), ParseError);
  EXPECT_THROW(parseManifest("taxonomy=a\ntaxonomy=b\n", "."), ParseError);
  EXPECT_THROW(parseManifest("taxonomy=a\ncolour=red\n", "."), ParseError);
  EXPECT_THROW(parseManifest("taxonomy=a\nseed=-1\n", "."), ParseError);
  EXPECT_THROW(parseManifest("taxonomy=a\nlimit=0\n", "."), ParseError);
  EXPECT_THROW(parseManifest("taxonomy=a\nmeasure=resnik\n", "."), ParseError);
  EXPECT_THROW(parseManifest("taxonomy\n", "."), ParseError);
  EXPECT_THROW(loadManifest("/nonexistent/manifest.txt"), LookupError);
}

TEST(Workspace, FixtureIngests) {
  IngestSummary s;
  const auto ws = buildWorkspace(loadManifest(kFixture / "manifest.txt"), s);
  EXPECT_TRUE(s.invalid.empty());
  EXPECT_EQ(s.records, 4u);
  EXPECT_EQ(ws.corpus.size(), 4u);
  EXPECT_EQ(s.concepts, ws.taxonomy.size());
  EXPECT_EQ(s.mappedKeywords, 2u);
  EXPECT_EQ(s.addedAnnotations, 10u);
  EXPECT_TRUE(ws.equivalences.areEquivalent("FSRE.anger", "OCC.anger"));
  EXPECT_EQ(ws.vocabularies.size(), 3u);
  EXPECT_EQ(ws.queries.size(), 1u);
  EXPECT_EQ(ws.judgments.size(), 4u);
  EXPECT_EQ(ws.sampleSize, 4u);

  const auto& sound = ws.corpus.get("IADS/311");
  EXPECT_EQ(sound.context->lengthSeconds, 6.0);
  const auto& pic = ws.corpus.get("IAPS/8163");
  EXPECT_EQ(pic.semantics.size(), 6u);
  EXPECT_EQ(pic.physiology.size(), 2u);
  EXPECT_EQ((*ws.corpus.get("IAPS/5635").dimensions)[Dimension::Valence], 6.25);
  EXPECT_EQ((*ws.corpus.get("IAPS/7039").dimensions)[Dimension::Arousal], 3.29);
}

TEST(Workspace, SnapshotRoundTrip) {
  IngestSummary s;
  const auto ws = buildWorkspace(loadManifest(kFixture / "manifest.txt"), s);
  const auto json = saveSnapshot(ws);
  const auto back = loadSnapshot(json);
  EXPECT_EQ(back.corpus.records(), ws.corpus.records());
  EXPECT_EQ(back.taxonomy.edges(), ws.taxonomy.edges());
  EXPECT_EQ(back.mapping.entries(), ws.mapping.entries());
  EXPECT_EQ(back.vocabularies.all(), ws.vocabularies.all());
  EXPECT_EQ(back.equivalences.classes(), ws.equivalences.classes());
  EXPECT_EQ(back.queries, ws.queries);
  EXPECT_EQ(back.judgments.all(), ws.judgments.all());
  EXPECT_EQ(back.seed, ws.seed);
  EXPECT_EQ(back.sampleSize, ws.sampleSize);
  EXPECT_EQ(saveSnapshot(back), json);
}

TEST(Workspace, SnapshotErrors) {
  EXPECT_THROW(loadSnapshot("not json"), ParseError);
  EXPECT_THROW(loadSnapshot(R"({"format":"other","version":1})"), ParseError);
  EXPECT_THROW(loadSnapshot(R"({"format":"stimkb-snapshot","version":99})"), ParseError);
  EXPECT_THROW(loadSnapshot(R"({"format":"stimkb-snapshot","version":1})"), ParseError);
}

TEST(Workspace, MissingFileIsALookupErrorNamingThePath) {
  TempDir dir;
  dir.write("manifest.txt", "taxonomy=missing.tsv\n");
  IngestSummary s;
  try {
    buildWorkspace(loadManifest(dir.path() / "manifest.txt"), s);
    FAIL();
  } catch (const LookupError& e) {
    EXPECT_NE(std::string(e.what()).find("missing.tsv"), std::string::npos) << e.what();
  }
}

TEST(Workspace, ParseErrorsNameTheFile) {
  TempDir dir;
  dir.write("manifest.txt", "taxonomy=t.tsv\ncorpus=c.records\n");
  dir.write("t.tsv", "A\tB\n");
  dir.write("c.records", "key=A/1;object=concept:A\nkey=A/2;bogus=1\n");
  IngestSummary s;
  try {
    buildWorkspace(loadManifest(dir.path() / "manifest.txt"), s);
    FAIL();
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("c.records"), std::string::npos) << msg;
    EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
  }
}

TEST(Workspace, InvalidRecordsAreCollected) {
  TempDir dir;
  dir.write("manifest.txt", "taxonomy=t.tsv\ncorpus=c.records\n");
  dir.write("t.tsv", "A\tB\n");
  dir.write("c.records",
            "key=A/1;object=concept:A\n"
            "key=A/2;object=concept:Unicorn\n"
            "key=A/1;object=keyword:again\n"
            "key=A/3;category=vocab:BigSix,term:ecstasy\n");
  IngestSummary s;
  const auto ws = buildWorkspace(loadManifest(dir.path() / "manifest.txt"), s);
  EXPECT_EQ(ws.corpus.size(), 1u);
  ASSERT_EQ(s.invalid.size(), 3u);
  EXPECT_EQ(s.invalid[0].key, "A/2");
  EXPECT_EQ(s.invalid[0].line, 2u);
  EXPECT_NE(s.invalid[0].reasons.find("Unicorn"), std::string::npos);
  EXPECT_EQ(s.invalid[1].reasons, "duplicate key");
  EXPECT_EQ(s.invalid[2].line, 4u);
}

TEST(Workspace, AxiomsMustUseKnownTerms) {
  TempDir dir;
  dir.write("manifest.txt", "taxonomy=t.tsv\naxioms=a.tsv\n");
  dir.write("t.tsv", "A\tB\n");
  dir.write("a.tsv", "BigSix\tanger\tOCC\tanger\n");
  IngestSummary s;
  EXPECT_THROW(buildWorkspace(loadManifest(dir.path() / "manifest.txt"), s), ValidationError);
}
