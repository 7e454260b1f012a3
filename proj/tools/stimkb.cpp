// stimkb: ingest, validate, query, evaluate and sequence stimulus metadata.
//
// Exit status: 0 success, 2 usage or parse error, 3 invalid data,
// 4 internal error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stimkb/error.hpp"
#include "stimkb/eval.hpp"
#include "stimkb/retrieval.hpp"
#include "stimkb/sequence.hpp"
#include "stimkb/synthetic.hpp"
#include "stimkb/text.hpp"
#include "stimkb/workspace.hpp"

namespace fs = std::filesystem;
using namespace stimkb;

namespace {

enum ExitCode { kOk = 0, kUsage = 2, kInvalid = 3, kInternal = 4 };

struct Options {
  std::string manifest;
  std::string snapshot;
  std::string format = "tsv";
  bool human = false;
  std::optional<std::uint64_t> seed;

  std::string query;

  std::string judgments;
  std::string queries;
  std::string measures;
  std::optional<std::size_t> sample;
  std::string out;

  std::size_t count = 1;
  std::int64_t durationMs = 1000;
  std::int64_t isiMs = 0;
  std::string track = "visual";
  std::string merge;
  std::string sequenceOut;
  std::string scheduleOut;

  std::size_t synthConcepts = 50;
  std::size_t synthStimuli = 100;
  std::size_t synthQueries = 24;
  std::size_t synthSample = 60;
};

void emit(const Options& o, const std::string& content) {
  if (o.out.empty()) {
    std::cout << content;
  } else {
    text::writeFile(o.out, content);
  }
}

Workspace openSnapshot(const Options& o) {
  return loadSnapshot(text::readFile(o.snapshot));
}

std::string dbOf(const StimulusRecord& rec) {
  if (rec.context && !rec.context->dbName.empty()) return rec.context->dbName;
  return std::string(databaseOf(rec.key));
}

std::string idOf(const StimulusRecord& rec) {
  if (rec.context && !rec.context->id.empty()) return rec.context->id;
  const auto slash = rec.key.find('/');
  return slash == std::string::npos ? rec.key : rec.key.substr(slash + 1);
}

void reportInvalid(const IngestSummary& s) {
  for (const auto& p : s.invalid) {
    std::cerr << p.source;
    if (p.line) std::cerr << ":" << p.line;
    std::cerr << ": record " << p.key << ": " << p.reasons << "\n";
  }
}

void printSummary(const Options& o, const IngestSummary& s) {
  if (o.human) {
    std::cout << s.records << " records, " << s.invalid.size() << " invalid\n"
              << s.concepts << " concepts, " << s.mappedKeywords << " mapped keywords, "
              << s.unmapped.size() << " unmapped keywords, " << s.addedAnnotations
              << " concept annotations added\n";
    for (const auto& [key, kw] : s.unmapped) std::cout << "unmapped: " << key << " " << kw << "\n";
    return;
  }
  if (o.format == "json") {
    nlohmann::ordered_json j;
    j["records"] = s.records;
    j["invalid"] = s.invalid.size();
    j["concepts"] = s.concepts;
    j["mapped_keywords"] = s.mappedKeywords;
    j["unmapped_keywords"] = s.unmapped.size();
    j["added_annotations"] = s.addedAnnotations;
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::cout << "records\t" << s.records << "\n"
            << "invalid\t" << s.invalid.size() << "\n"
            << "concepts\t" << s.concepts << "\n"
            << "mapped_keywords\t" << s.mappedKeywords << "\n"
            << "unmapped_keywords\t" << s.unmapped.size() << "\n"
            << "added_annotations\t" << s.addedAnnotations << "\n";
}

int cmdIngest(const Options& o, bool write) {
  IngestSummary summary;
  Workspace ws = buildWorkspace(loadManifest(o.manifest), summary);
  if (o.seed) ws.seed = *o.seed;
  reportInvalid(summary);
  printSummary(o, summary);
  if (!summary.invalid.empty()) return kInvalid;
  if (write) text::writeFile(o.snapshot, saveSnapshot(ws));
  return kOk;
}

void printQuerySyntaxError(const std::string& query, const QuerySyntaxError& e) {
  std::cerr << "error: " << e.what() << "\n  " << query << "\n  "
            << std::string(e.column(), ' ') << "^\n";
}

int cmdQuery(const Options& o) {
  Workspace ws = openSnapshot(o);
  const Query q = parseQuery(o.query, {ws.measure, ws.limit});
  const KnowledgeBase kb = ws.knowledgeBase();
  const bool json = o.format == "json";
  std::string out;
  if (q.mode == QueryMode::Filter) {
    const auto ids = filterQuery(kb, q);
    if (json) {
      nlohmann::ordered_json j;
      j["query"] = formatQuery(q);
      j["results"] = ids;
      out = j.dump(2) + "\n";
    } else {
      for (const auto& id : ids) out += id + "\n";
    }
    emit(o, out);
    return kOk;
  }
  const auto result = rankedQuery(kb, q);
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < result.entries.size(); ++i) {
    const auto& e = result.entries[i];
    const auto& rec = ws.corpus.get(e.id);
    if (json) {
      nlohmann::ordered_json row;
      row["rank"] = i + 1;
      row["score"] = e.score;
      row["stimulus"] = e.id;
      row["db"] = dbOf(rec);
      row["id"] = idOf(rec);
      rows.push_back(std::move(row));
    } else if (o.human) {
      out += std::to_string(i + 1) + ". " + e.id + "  " + text::formatFixed(e.score, 4) + "\n";
    } else {
      out += std::to_string(i + 1) + "\t" + text::formatFixed(e.score, 6) + "\t" + e.id + "\t" +
             dbOf(rec) + "\t" + idOf(rec) + "\n";
    }
  }
  if (json) {
    nlohmann::ordered_json j;
    j["query"] = formatQuery(q);
    j["measure"] = std::string(toString(result.measure));
    j["results"] = std::move(rows);
    out = j.dump(2) + "\n";
  }
  emit(o, out);
  return kOk;
}

std::vector<Measure> parseMeasureList(const std::string& list) {
  std::vector<Measure> out;
  for (auto name : text::split(list, ',')) {
    const auto m = parseMeasure(text::trim(name));
    if (!m) throw ParseError("unknown measure '" + std::string(name) + "'");
    out.push_back(*m);
  }
  return out;
}

int cmdEval(const Options& o) {
  Workspace ws = openSnapshot(o);
  if (!o.judgments.empty()) ws.judgments = parseJudgments(text::readFile(o.judgments));
  if (!o.queries.empty()) ws.queries = parseEvalQueries(text::readFile(o.queries));
  if (ws.queries.empty()) throw PreconditionError("no evaluation queries in workspace");
  ExperimentConfig config;
  config.seed = o.seed.value_or(ws.seed);
  config.sampleSize = o.sample.value_or(ws.sampleSize);
  if (!o.measures.empty()) config.measures = parseMeasureList(o.measures);
  const auto report = runExperiment(ws.knowledgeBase(), ws.queries, ws.judgments, config);
  if (o.format == "json") {
    nlohmann::ordered_json j;
    j["seed"] = config.seed;
    j["sample"] = config.sampleSize;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : report.rows) {
      nlohmann::ordered_json row;
      row["scheme"] = std::string(toString(r.scheme));
      row["measure"] = std::string(toString(r.measure));
      row["queries"] = r.queries;
      row["tp"] = r.total.tp;
      row["fp"] = r.total.fp;
      row["fn"] = r.total.fn;
      row["tn"] = r.total.tn;
      row["accuracy"] = r.metrics.accuracy;
      row["precision"] = r.metrics.precision;
      row["recall"] = r.metrics.recall;
      row["fallout_standard"] = r.metrics.falloutStandard;
      row["miss_rate"] = r.metrics.missRate;
      row["f1_standard"] = r.metrics.f1;
      row["precision_undefined"] = r.metrics.precisionUndefined;
      j["rows"].push_back(std::move(row));
    }
    j["notes"] = report.notes;
    emit(o, j.dump(2) + "\n");
  } else {
    emit(o, formatReport(report));
  }
  return kOk;
}

int cmdSequence(const Options& o) {
  Workspace ws = openSnapshot(o);
  const Query q = parseQuery(o.query, {ws.measure, ws.limit});
  if (q.mode != QueryMode::Rank) throw PreconditionError("sequence needs a rank-mode query");
  const auto result = rankedQuery(ws.knowledgeBase(), q);
  auto seq = buildSequence(result, {o.count, o.durationMs, o.isiMs, o.track});
  if (!o.merge.empty()) seq = mergeSequences(sequenceFromJson(text::readFile(o.merge)), seq);
  const auto schedule = emitSchedule(seq);
  if (!o.sequenceOut.empty()) text::writeFile(o.sequenceOut, sequenceToJson(seq));
  if (!o.scheduleOut.empty()) text::writeFile(o.scheduleOut, scheduleToTsv(schedule));
  if (o.sequenceOut.empty() && o.scheduleOut.empty()) {
    emit(o, o.format == "json" ? sequenceToJson(seq) : scheduleToTsv(schedule));
  }
  return kOk;
}

int cmdStats(const Options& o) {
  const Workspace ws = openSnapshot(o);
  std::set<std::string> concepts;
  std::set<std::string> keywords;
  std::size_t annotations = 0;
  std::size_t withDimensions = 0;
  for (const auto& [key, rec] : ws.corpus.records()) {
    for (const auto& s : rec.semantics) {
      ++annotations;
      if (s.concept_name) concepts.insert(*s.concept_name);
      if (s.keyword) keywords.insert(text::foldCase(*s.keyword));
    }
    if (rec.dimensions && rec.dimensions->hasAny()) ++withDimensions;
  }
  const std::vector<std::pair<std::string, std::size_t>> rows{
      {"records", ws.corpus.size()},
      {"distinct_concepts", concepts.size()},
      {"distinct_keywords", keywords.size()},
      {"semantic_annotations", annotations},
      {"records_with_dimensions", withDimensions},
      {"taxonomy_concepts", ws.taxonomy.size()},
      {"vocabularies", ws.vocabularies.size()},
      {"equivalence_classes", ws.equivalences.classes().size()},
  };
  std::string out;
  if (o.human) {
    out = std::to_string(ws.corpus.size()) + " records, " + std::to_string(concepts.size()) +
          " distinct concepts, " + std::to_string(keywords.size()) + " distinct keywords\n";
  } else if (o.format == "json") {
    nlohmann::ordered_json j;
    for (const auto& [k, v] : rows) j[k] = v;
    out = j.dump(2) + "\n";
  } else {
    for (const auto& [k, v] : rows) out += k + "\t" + std::to_string(v) + "\n";
  }
  emit(o, out);
  return kOk;
}

int cmdSynth(const Options& o) {
  SyntheticConfig config;
  config.seed = o.seed.value_or(config.seed);
  config.concepts = o.synthConcepts;
  config.stimuli = o.synthStimuli;
  config.queries = o.synthQueries;
  const auto ws = generateSynthetic(config);
  const fs::path dir = o.out;
  fs::create_directories(dir);
  text::writeFile(dir / "taxonomy.tsv", serializeTaxonomy(ws.taxonomy));
  text::writeFile(dir / "corpus.records", serializeRecords(ws.records));
  text::writeFile(dir / "queries.tsv", serializeEvalQueries(ws.queries));
  text::writeFile(dir / "judgments.tsv", serializeJudgments(ws.judgments));
  text::writeFile(dir / "manifest.txt",
                  "taxonomy=taxonomy.tsv\ncorpus=corpus.records\nqueries=queries.tsv\n"
                  "judgments=judgments.tsv\nseed=" + std::to_string(config.seed) +
                      "\nsample=" + std::to_string(o.synthSample) + "\n");
  std::cout << "wrote " << ws.records.size() << " records, " << ws.taxonomy.size()
            << " concepts, " << ws.queries.size() << " queries to " << dir.string() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Knowledge base for affectively annotated multimedia stimuli"};
  app.require_subcommand(1);
  Options o;

  auto addFormat = [&](CLI::App* c) {
    c->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"tsv", "json"}));
    c->add_flag("--human", o.human, "Human-readable output");
  };

  auto* ingest = app.add_subcommand("ingest", "Build a snapshot from a manifest");
  ingest->add_option("--manifest", o.manifest, "Workspace manifest")->required();
  ingest->add_option("--snapshot", o.snapshot, "Snapshot file to write")->required();
  ingest->add_option("--seed", o.seed, "Override the manifest seed");
  addFormat(ingest);

  auto* validate = app.add_subcommand("validate", "Check every file of a manifest");
  validate->add_option("--manifest", o.manifest, "Workspace manifest")->required();
  addFormat(validate);

  auto* query = app.add_subcommand("query", "Run a filter or ranked query");
  query->add_option("--snapshot", o.snapshot, "Snapshot file")->required();
  query->add_option("query", o.query, "Query text")->required();
  query->add_option("--out", o.out, "Write output to a file");
  addFormat(query);

  auto* eval = app.add_subcommand("eval", "Run the lift-threshold retrieval experiment");
  eval->add_option("--snapshot", o.snapshot, "Snapshot file")->required();
  eval->add_option("--judgments", o.judgments, "Judgments file (default: from snapshot)");
  eval->add_option("--queries", o.queries, "Evaluation queries (default: from snapshot)");
  eval->add_option("--measures", o.measures, "Comma-separated measures");
  eval->add_option("--seed", o.seed, "Sampling seed (default: from snapshot)");
  eval->add_option("--sample", o.sample, "Candidates per query");
  eval->add_option("--out", o.out, "Write the report to a file");
  addFormat(eval);

  auto* sequence = app.add_subcommand("sequence", "Build a presentation sequence from a query");
  sequence->add_option("--snapshot", o.snapshot, "Snapshot file")->required();
  sequence->add_option("query", o.query, "Rank-mode query text")->required();
  sequence->add_option("--count", o.count, "Number of items")->check(CLI::PositiveNumber);
  sequence->add_option("--duration", o.durationMs, "Item duration in ms")->check(CLI::PositiveNumber);
  sequence->add_option("--isi", o.isiMs, "Inter-stimulus interval in ms")->check(CLI::NonNegativeNumber);
  sequence->add_option("--track", o.track, "Track label");
  sequence->add_option("--merge", o.merge, "Sequence JSON to merge with");
  sequence->add_option("--sequence-out", o.sequenceOut, "Write the sequence JSON here");
  sequence->add_option("--schedule-out", o.scheduleOut, "Write the event schedule here");
  sequence->add_option("--out", o.out, "Write output to a file");
  addFormat(sequence);

  auto* stats = app.add_subcommand("stats", "Corpus statistics");
  stats->add_option("--snapshot", o.snapshot, "Snapshot file")->required();
  stats->add_option("--out", o.out, "Write output to a file");
  addFormat(stats);

  auto* synth = app.add_subcommand("synth", "Write a synthetic evaluation workspace");
  synth->add_option("--out", o.out, "Output directory")->required();
  synth->add_option("--seed", o.seed, "Generator seed");
  synth->add_option("--concepts", o.synthConcepts, "Taxonomy size including the root");
  synth->add_option("--stimuli", o.synthStimuli, "Number of stimuli");
  synth->add_option("--queries", o.synthQueries, "Number of queries");
  synth->add_option("--sample", o.synthSample, "Candidates per query written to the manifest");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*ingest) return cmdIngest(o, true);
    if (*validate) return cmdIngest(o, false);
    if (*query) return cmdQuery(o);
    if (*eval) return cmdEval(o);
    if (*sequence) return cmdSequence(o);
    if (*stats) return cmdStats(o);
    if (*synth) return cmdSynth(o);
  } catch (const QuerySyntaxError& e) {
    printQuerySyntaxError(o.query, e);
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const LookupError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ValidationError& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
