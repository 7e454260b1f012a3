#include "stimkb/workspace.hpp"

#include <map>

#include <json.hpp>

#include "stimkb/error.hpp"
#include "stimkb/text.hpp"

namespace stimkb {

namespace fs = std::filesystem;

WorkspaceManifest parseManifest(std::string_view text, const fs::path& baseDir) {
  WorkspaceManifest m;
  std::map<std::string, std::size_t> seen;
  bool haveTaxonomy = false;
  for (const auto& line : text::contentLines(text)) {
    const auto eq = line.content.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key=value", line.number);
    const std::string key(text::trim(line.content.substr(0, eq)));
    const std::string value(text::trim(line.content.substr(eq + 1)));
    if (value.empty()) throw ParseError("empty value for " + key, line.number);
    if (!seen.emplace(key, line.number).second) {
      throw ParseError("duplicate manifest key " + key, line.number);
    }
    const fs::path path = baseDir / value;
    auto number = [&](std::string_view what) {
      const auto v = text::parseInt(value);
      if (!v || *v < 0) throw ParseError(std::string(what) + " must be a non-negative integer", line.number);
      return static_cast<std::uint64_t>(*v);
    };
    if (key == "taxonomy") {
      m.taxonomy = path;
      haveTaxonomy = true;
    } else if (key == "mapping") {
      m.mapping = path;
    } else if (key == "vocabulary") {
      m.vocabulary = path;
    } else if (key == "axioms") {
      m.axioms = path;
    } else if (key == "corpus") {
      m.corpus = path;
    } else if (key == "legacy") {
      m.legacy = path;
    } else if (key == "queries") {
      m.queries = path;
    } else if (key == "judgments") {
      m.judgments = path;
    } else if (key == "seed") {
      m.seed = number("seed");
    } else if (key == "measure") {
      m.measure = parseMeasure(value);
      if (!m.measure) throw ParseError("unknown measure " + value, line.number);
    } else if (key == "limit") {
      m.limit = number("limit");
      if (m.limit == 0) throw ParseError("limit must be positive", line.number);
    } else if (key == "sample") {
      m.sampleSize = number("sample");
      if (m.sampleSize == 0) throw ParseError("sample must be positive", line.number);
    } else {
      throw ParseError("unknown manifest key " + key, line.number);
    }
  }
  if (!haveTaxonomy) throw ParseError("manifest has no taxonomy entry");
  return m;
}

WorkspaceManifest loadManifest(const fs::path& path) {
  const auto content = text::readFile(path);
  try {
    return parseManifest(content, path.parent_path());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

KnowledgeBase Workspace::knowledgeBase() const {
  KnowledgeBase kb;
  kb.taxonomy = &taxonomy;
  kb.corpus = &corpus;
  kb.equivalences = &equivalences;
  kb.similarity.taxonomy = &taxonomy;
  return kb;
}

namespace {

// Runs `fn` on the file content; parse errors get the path prepended.
template <typename Fn>
auto withFile(const fs::path& path, Fn fn) {
  const auto content = text::readFile(path);
  try {
    return fn(content);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void checkAxioms(const std::vector<EquivalenceAxiom>& axioms, const VocabularySet& vocabs,
                 const std::string& source) {
  for (const auto& ax : axioms) {
    for (const auto* t : {&ax.lhs, &ax.rhs}) {
      const auto* v = vocabs.find(t->vocabulary);
      if (!v) throw ValidationError(source + ": axiom names unknown vocabulary " + t->vocabulary);
      if (!v->contains(t->term)) {
        throw ValidationError(source + ": axiom term " + t->str() + " is not in its vocabulary");
      }
    }
  }
}

}  // namespace

Workspace buildWorkspace(const WorkspaceManifest& m, IngestSummary& summary) {
  Workspace ws;
  ws.seed = m.seed;
  ws.measure = m.measure;
  ws.limit = m.limit;
  ws.sampleSize = m.sampleSize;

  ws.taxonomy = withFile(m.taxonomy, [](const std::string& s) { return parseTaxonomy(s); });
  if (m.mapping) {
    ws.mapping = withFile(*m.mapping, [&](const std::string& s) { return parseMapping(s, ws.taxonomy); });
  }
  if (m.vocabulary) {
    ws.vocabularies = withFile(*m.vocabulary, [&](const std::string& s) {
      try {
        return loadVocabulary(s);
      } catch (const ValidationError& e) {
        throw ParseError(e.what());
      }
    });
  }
  if (m.axioms) {
    auto axioms = withFile(*m.axioms, [](const std::string& s) { return parseAxioms(s); });
    checkAxioms(axioms, ws.vocabularies, m.axioms->string());
    ws.equivalences = EquivalenceClosure(axioms);
  }

  std::vector<StimulusRecord> records;
  std::vector<std::pair<std::string, std::size_t>> origin;
  if (m.corpus) {
    for (auto& nr : withFile(*m.corpus, [](const std::string& s) { return parseRecords(s); })) {
      records.push_back(std::move(nr.record));
      origin.emplace_back(m.corpus->string(), nr.line);
    }
  }
  if (m.legacy) {
    for (auto& rec : withFile(*m.legacy, [](const std::string& s) { return parseLegacyTable(s); })) {
      records.push_back(std::move(rec));
      origin.emplace_back(m.legacy->string(), 0);
    }
  }
  const auto expansion = expandKeywords(records, ws.mapping);
  summary.mappedKeywords = expansion.mappedKeywords;
  summary.addedAnnotations = expansion.addedAnnotations;
  summary.unmapped = expansion.unmapped;

  for (std::size_t i = 0; i < records.size(); ++i) {
    auto& rec = records[i];
    const auto v = validateStimulus(rec, ws.taxonomy, ws.vocabularies);
    if (!v.ok()) {
      summary.invalid.push_back({origin[i].first, origin[i].second, rec.key, v.summary()});
      continue;
    }
    if (ws.corpus.contains(rec.key)) {
      summary.invalid.push_back({origin[i].first, origin[i].second, rec.key, "duplicate key"});
      continue;
    }
    ws.corpus.add(std::move(rec));
  }

  if (m.queries) {
    ws.queries = withFile(*m.queries, [](const std::string& s) { return parseEvalQueries(s); });
  }
  if (m.judgments) {
    ws.judgments = withFile(*m.judgments, [](const std::string& s) { return parseJudgments(s); });
  }
  summary.concepts = ws.taxonomy.size();
  summary.records = records.size();
  return ws;
}

std::string saveSnapshot(const Workspace& ws) {
  std::vector<StimulusRecord> records;
  for (const auto& [key, rec] : ws.corpus.records()) records.push_back(rec);
  nlohmann::ordered_json doc;
  doc["format"] = "stimkb-snapshot";
  doc["version"] = kSnapshotVersion;
  doc["taxonomy"] = serializeTaxonomy(ws.taxonomy);
  doc["mapping"] = serializeMapping(ws.mapping);
  doc["vocabularies"] = serializeVocabularies(ws.vocabularies);
  doc["axioms"] = serializeAxioms(ws.equivalences.axioms());
  doc["records"] = serializeRecords(records);
  doc["queries"] = serializeEvalQueries(ws.queries);
  doc["judgments"] = serializeJudgments(ws.judgments);
  doc["seed"] = ws.seed;
  doc["measure"] = ws.measure ? std::string(toString(*ws.measure)) : std::string();
  doc["limit"] = ws.limit;
  doc["sample"] = ws.sampleSize;
  return doc.dump(1) + "\n";
}

Workspace loadSnapshot(std::string_view json) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("snapshot is not valid JSON: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != "stimkb-snapshot") {
      throw ParseError("not a stimkb snapshot");
    }
    const int version = doc.at("version").get<int>();
    if (version != kSnapshotVersion) {
      throw ParseError("unsupported snapshot version " + std::to_string(version));
    }
    auto str = [&](const char* key) { return doc.at(key).get<std::string>(); };
    Workspace ws;
    ws.taxonomy = parseTaxonomy(str("taxonomy"));
    ws.mapping = parseMapping(str("mapping"), ws.taxonomy);
    ws.vocabularies = loadVocabulary(str("vocabularies"));
    ws.equivalences = EquivalenceClosure(parseAxioms(str("axioms")));
    for (auto& nr : parseRecords(str("records"))) ws.corpus.add(std::move(nr.record));
    ws.queries = parseEvalQueries(str("queries"));
    ws.judgments = parseJudgments(str("judgments"));
    ws.seed = doc.at("seed").get<std::uint64_t>();
    const auto measure = str("measure");
    if (!measure.empty()) {
      ws.measure = parseMeasure(measure);
      if (!ws.measure) throw ParseError("unknown measure in snapshot: " + measure);
    }
    ws.limit = doc.at("limit").get<std::size_t>();
    ws.sampleSize = doc.at("sample").get<std::size_t>();
    return ws;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed snapshot: ") + e.what());
  }
}

}  // namespace stimkb
