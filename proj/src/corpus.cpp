#include "stimkb/corpus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <regex>

#include "stimkb/error.hpp"
#include "stimkb/text.hpp"

namespace stimkb {

StimulusId makeStimulusId(std::string_view dbName, std::string_view id) {
  return std::string(dbName) + "/" + std::string(id);
}

std::string_view databaseOf(std::string_view key) {
  const auto slash = key.find('/');
  return slash == std::string_view::npos ? std::string_view{} : key.substr(0, slash);
}

std::string_view toString(SemanticKind k) {
  switch (k) {
    case SemanticKind::Object: return "object";
    case SemanticKind::Scene: return "scene";
    case SemanticKind::Event: return "event";
  }
  return "object";
}

std::optional<SemanticKind> parseSemanticKind(std::string_view s) {
  if (s == "object") return SemanticKind::Object;
  if (s == "scene") return SemanticKind::Scene;
  if (s == "event") return SemanticKind::Event;
  return std::nullopt;
}

bool StimulusRecord::hasEmotion() const {
  return !categories.empty() || dimensions.has_value() || !appraisals.empty() ||
         !actionTendencies.empty() || !sentiments.empty();
}

// ---------------------------------------------------------------------------
// Validation

Validation validateStimulus(const StimulusRecord& rec) {
  Validation r;
  const std::string who = rec.key.empty() ? std::string("<no key>") : rec.key;
  if (rec.key.empty()) r.fail(Violation::EmptyKey, "record has an empty key");
  if (rec.semantics.empty() && !rec.hasEmotion() && !rec.context && rec.physiology.empty()) {
    r.fail(Violation::NoComponents,
           who + ": no semantics, emotion, context or physiology component");
  }
  for (const auto& s : rec.semantics) {
    const bool hasConcept = s.concept_name && !s.concept_name->empty();
    const bool hasKeyword = s.keyword && !s.keyword->empty();
    if (!hasConcept && !hasKeyword) {
      r.fail(Violation::EmptySemantics, who + ": semantics annotation without concept or keyword");
    }
  }
  if (rec.dimensions) r.merge(validateDimension(*rec.dimensions));
  for (const auto& c : rec.categories) r.merge(validateConfidence(c.confidence));
  for (const auto& a : rec.appraisals) r.merge(validateAppraisal(a));
  for (const auto& a : rec.actionTendencies) r.merge(validateActionTendency(a));
  for (const auto& s : rec.sentiments) r.merge(validateSentiment(s));
  if (rec.context) {
    const auto& c = *rec.context;
    if (c.dbName.empty() || c.id.empty()) {
      r.fail(Violation::EmptyContextKey, who + ": context needs both dbName and id");
    } else if (!rec.key.empty() && rec.key != makeStimulusId(c.dbName, c.id)) {
      r.fail(Violation::KeyMismatch,
             who + ": key does not match context " + makeStimulusId(c.dbName, c.id));
    }
    for (const auto* v : {&c.widthPx, &c.heightPx, &c.sizeBytes, &c.colorDepthBits}) {
      if (*v && **v < 0) r.fail(Violation::NegativeNumeric, who + ": negative context number");
    }
    if (c.lengthSeconds && !(*c.lengthSeconds >= 0.0)) {
      r.fail(Violation::NegativeNumeric, who + ": negative stimulus length");
    }
  }
  for (const auto& p : rec.physiology) {
    if (p.path.empty()) r.fail(Violation::EmptyPhysiologyPath, who + ": empty physiology path");
  }
  return r;
}

Validation validateStimulus(const StimulusRecord& rec, const TaxonomyGraph& g,
                            const VocabularySet& vocabs) {
  Validation r = validateStimulus(rec);
  for (const auto& s : rec.semantics) {
    if (s.concept_name && !s.concept_name->empty() && !g.contains(*s.concept_name)) {
      r.fail(Violation::UnknownConcept, rec.key + ": unknown concept " + *s.concept_name);
    }
  }
  for (const auto& c : rec.categories) {
    // Confidence was already checked structurally.
    Validation cat = validateCategory({c.vocabulary, c.term, {}}, vocabs);
    r.merge(cat);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Record line format

namespace {

constexpr char kEscape = '\\';

std::string escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case ';': out += "\\;"; break;
      case ',': out += "\\,"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      default: out += c;
    }
  }
  return out;
}

// Splits on `sep` outside escapes; escapes are kept for the next stage.
std::vector<std::string_view> splitEscaped(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == kEscape) {
      ++i;
    } else if (s[i] == sep) {
      parts.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  parts.push_back(s.substr(start));
  return parts;
}

class LineParser {
 public:
  explicit LineParser(std::size_t line) : line_(line) {}

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_); }

  std::string unescape(std::string_view s) const {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] != kEscape) {
        out += s[i];
        continue;
      }
      if (++i == s.size()) fail("dangling escape");
      switch (s[i]) {
        case 't': out += '\t'; break;
        case 'n': out += '\n'; break;
        case '\\': case ';': case ',': case ':': case '=': out += s[i]; break;
        default: fail(std::string("unknown escape \\") + s[i]);
      }
    }
    return out;
  }

  // `a:1,b:2` -> ordered name/value pairs; duplicate names are rejected.
  std::vector<std::pair<std::string, std::string>> pairs(std::string_view field,
                                                         std::string_view value) const {
    std::vector<std::pair<std::string, std::string>> out;
    for (auto part : splitEscaped(value, ',')) {
      const auto colon = part.find(':');
      if (colon == std::string_view::npos) {
        fail("field " + std::string(field) + ": expected name:value, got '" + std::string(part) + "'");
      }
      std::string name(part.substr(0, colon));
      for (const auto& [n, v] : out) {
        if (n == name) fail("field " + std::string(field) + ": repeated '" + name + "'");
      }
      out.emplace_back(std::move(name), unescape(part.substr(colon + 1)));
    }
    return out;
  }

  double real(std::string_view what, const std::string& v) const {
    auto d = text::parseDouble(v);
    if (!d) fail(std::string(what) + ": not a number: '" + v + "'");
    return *d;
  }

  std::int64_t integer(std::string_view what, const std::string& v) const {
    auto i = text::parseInt(v);
    if (!i) fail(std::string(what) + ": not an integer: '" + v + "'");
    return *i;
  }

  ConfidenceLevel level(const std::string& v) const {
    auto l = parseConfidenceLevel(v);
    if (!l) fail("confidence level must be VeryHigh, High, Average, Low or VeryLow, got '" + v + "'");
    return *l;
  }

 private:
  std::size_t line_;
};

bool isIsoTimestamp(const std::string& s) {
  static const std::regex re(
      R"(\d{4}-\d{2}-\d{2}(T\d{2}:\d{2}(:\d{2}(\.\d+)?)?(Z|[+-]\d{2}:\d{2})?)?)");
  return std::regex_match(s, re);
}

void appendConfidence(std::vector<std::string>& parts, const Confidence& c) {
  if (c.level) parts.push_back("level:" + std::string(toString(*c.level)));
  if (c.value) parts.push_back("confidence:" + text::formatDouble(*c.value));
}

std::string joinParts(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += ',';
    out += p;
  }
  return out;
}

}  // namespace

StimulusRecord parseRecordLine(std::string_view line, std::size_t lineNumber) {
  LineParser p(lineNumber);
  StimulusRecord rec;
  bool sawKey = false;
  for (auto field : splitEscaped(line, ';')) {
    if (text::trim(field).empty()) continue;
    const auto eq = field.find('=');
    if (eq == std::string_view::npos) p.fail("expected name=value, got '" + std::string(field) + "'");
    const std::string name(text::trim(field.substr(0, eq)));
    const std::string_view value = field.substr(eq + 1);

    if (name == "key") {
      if (sawKey) p.fail("repeated key field");
      sawKey = true;
      rec.key = p.unescape(value);
    } else if (auto kind = parseSemanticKind(name)) {
      SemanticsAnnotation s;
      s.kind = *kind;
      for (auto& [n, v] : p.pairs(name, value)) {
        if (n == "concept") s.concept_name = std::move(v);
        else if (n == "keyword") s.keyword = std::move(v);
        else p.fail(name + ": unknown attribute '" + n + "'");
      }
      rec.semantics.push_back(std::move(s));
    } else if (name == "category") {
      CategoryAnnotation c;
      for (auto& [n, v] : p.pairs(name, value)) {
        if (n == "vocab") c.vocabulary = std::move(v);
        else if (n == "term") c.term = std::move(v);
        else if (n == "level") c.confidence.level = p.level(v);
        else if (n == "confidence") c.confidence.value = p.real(n, v);
        else p.fail("category: unknown attribute '" + n + "'");
      }
      if (c.vocabulary.empty() || c.term.empty()) p.fail("category needs vocab and term");
      rec.categories.push_back(std::move(c));
    } else if (name == "dimensions") {
      if (rec.dimensions) p.fail("repeated dimensions field");
      DimensionAnnotation d;
      for (auto& [n, v] : p.pairs(name, value)) {
        if (auto dim = parseDimension(n); dim && n == toString(*dim)) d[*dim] = p.real(n, v);
        else if (n == "valenceSD") d.valenceSD = p.real(n, v);
        else if (n == "arousalSD") d.arousalSD = p.real(n, v);
        else if (n == "dominanceSD") d.dominanceSD = p.real(n, v);
        else if (n == "min") d.scaleMin = p.real(n, v);
        else if (n == "max") d.scaleMax = p.real(n, v);
        else if (n == "level") d.confidence.level = p.level(v);
        else if (n == "confidence") d.confidence.value = p.real(n, v);
        else p.fail("dimensions: unknown attribute '" + n + "'");
      }
      rec.dimensions = std::move(d);
    } else if (name == "appraisal") {
      AppraisalAnnotation a;
      for (auto& [n, v] : p.pairs(name, value)) {
        if (!text::isIdentifier(n)) p.fail("appraisal: invalid name '" + n + "'");
        a.values[n] = p.real(n, v);
      }
      rec.appraisals.push_back(std::move(a));
    } else if (name == "action") {
      ActionTendencyAnnotation a;
      for (auto& [n, v] : p.pairs(name, value)) {
        if (n == "term") a.term = std::move(v);
        else if (n == "level") a.confidence.level = p.level(v);
        else if (n == "confidence") a.confidence.value = p.real(n, v);
        else p.fail("action: unknown attribute '" + n + "'");
      }
      rec.actionTendencies.push_back(std::move(a));
    } else if (name == "sentiment") {
      SentimentAnnotation s;
      bool sawValue = false;
      for (auto& [n, v] : p.pairs(name, value)) {
        if (n == "value") {
          s.value = p.real(n, v);
          sawValue = true;
        } else if (n == "level") {
          s.confidence.level = p.level(v);
        } else if (n == "confidence") {
          s.confidence.value = p.real(n, v);
        } else {
          p.fail("sentiment: unknown attribute '" + n + "'");
        }
      }
      if (!sawValue) p.fail("sentiment needs a value");
      rec.sentiments.push_back(std::move(s));
    } else if (name == "context") {
      if (rec.context) p.fail("repeated context field");
      ContextRecord c;
      for (auto& [n, v] : p.pairs(name, value)) {
        if (n == "db") c.dbName = std::move(v);
        else if (n == "id") c.id = std::move(v);
        else if (n == "format") c.mediaFormat = std::move(v);
        else if (n == "width") c.widthPx = p.integer(n, v);
        else if (n == "height") c.heightPx = p.integer(n, v);
        else if (n == "size") c.sizeBytes = p.integer(n, v);
        else if (n == "depth") c.colorDepthBits = p.integer(n, v);
        else if (n == "length") c.lengthSeconds = p.real(n, v);
        else if (n == "author") c.author = std::move(v);
        else if (n == "owner") c.owner = std::move(v);
        else if (n == "created") {
          if (!isIsoTimestamp(v)) p.fail("created: not an ISO-8601 timestamp: '" + v + "'");
          c.createdAt = std::move(v);
        } else if (n == "location") c.location = std::move(v);
        else if (n == "dc.type") c.dcType = std::move(v);
        else if (n == "dc.creator") c.dcCreator = std::move(v);
        else if (n == "dc.contributor") c.dcContributor = std::move(v);
        else if (n == "dc.date") c.dcDate = std::move(v);
        else if (n == "dc.format") c.dcFormat = std::move(v);
        else p.fail("context: unknown attribute '" + n + "'");
      }
      rec.context = std::move(c);
    } else if (name == "physio") {
      PhysiologyRef ref;
      for (auto& [n, v] : p.pairs(name, value)) {
        if (n == "path") ref.path = std::move(v);
        else if (n == "channel") ref.channel = std::move(v);
        else p.fail("physio: unknown attribute '" + n + "'");
      }
      rec.physiology.push_back(std::move(ref));
    } else {
      p.fail("unknown field '" + name + "'");
    }
  }
  if (!sawKey) p.fail("record has no key field");
  return rec;
}

std::string serializeRecord(const StimulusRecord& rec) {
  std::vector<std::string> fields;
  fields.push_back("key=" + escape(rec.key));
  for (const auto& s : rec.semantics) {
    std::vector<std::string> parts;
    if (s.concept_name) parts.push_back("concept:" + escape(*s.concept_name));
    if (s.keyword) parts.push_back("keyword:" + escape(*s.keyword));
    fields.push_back(std::string(toString(s.kind)) + "=" + joinParts(parts));
  }
  for (const auto& c : rec.categories) {
    std::vector<std::string> parts{"vocab:" + escape(c.vocabulary), "term:" + escape(c.term)};
    appendConfidence(parts, c.confidence);
    fields.push_back("category=" + joinParts(parts));
  }
  if (rec.dimensions) {
    const auto& d = *rec.dimensions;
    std::vector<std::string> parts;
    for (Dimension dim : kAllDimensions) {
      if (d[dim]) parts.push_back(std::string(toString(dim)) + ":" + text::formatDouble(*d[dim]));
    }
    if (d.valenceSD) parts.push_back("valenceSD:" + text::formatDouble(*d.valenceSD));
    if (d.arousalSD) parts.push_back("arousalSD:" + text::formatDouble(*d.arousalSD));
    if (d.dominanceSD) parts.push_back("dominanceSD:" + text::formatDouble(*d.dominanceSD));
    parts.push_back("min:" + text::formatDouble(d.scaleMin));
    parts.push_back("max:" + text::formatDouble(d.scaleMax));
    appendConfidence(parts, d.confidence);
    fields.push_back("dimensions=" + joinParts(parts));
  }
  for (const auto& a : rec.appraisals) {
    std::vector<std::string> parts;
    for (const auto& [n, v] : a.values) parts.push_back(n + ":" + text::formatDouble(v));
    fields.push_back("appraisal=" + joinParts(parts));
  }
  for (const auto& a : rec.actionTendencies) {
    std::vector<std::string> parts{"term:" + escape(a.term)};
    appendConfidence(parts, a.confidence);
    fields.push_back("action=" + joinParts(parts));
  }
  for (const auto& s : rec.sentiments) {
    std::vector<std::string> parts{"value:" + text::formatDouble(s.value)};
    appendConfidence(parts, s.confidence);
    fields.push_back("sentiment=" + joinParts(parts));
  }
  if (rec.context) {
    const auto& c = *rec.context;
    std::vector<std::string> parts{"db:" + escape(c.dbName), "id:" + escape(c.id)};
    if (!c.mediaFormat.empty()) parts.push_back("format:" + escape(c.mediaFormat));
    auto num = [&parts](const char* n, const std::optional<std::int64_t>& v) {
      if (v) parts.push_back(std::string(n) + ":" + std::to_string(*v));
    };
    auto str = [&parts](const char* n, const std::optional<std::string>& v) {
      if (v) parts.push_back(std::string(n) + ":" + escape(*v));
    };
    num("width", c.widthPx);
    num("height", c.heightPx);
    num("size", c.sizeBytes);
    num("depth", c.colorDepthBits);
    if (c.lengthSeconds) parts.push_back("length:" + text::formatDouble(*c.lengthSeconds));
    str("author", c.author);
    str("owner", c.owner);
    str("created", c.createdAt);
    str("location", c.location);
    str("dc.type", c.dcType);
    str("dc.creator", c.dcCreator);
    str("dc.contributor", c.dcContributor);
    str("dc.date", c.dcDate);
    str("dc.format", c.dcFormat);
    fields.push_back("context=" + joinParts(parts));
  }
  for (const auto& ph : rec.physiology) {
    std::vector<std::string> parts{"path:" + escape(ph.path)};
    if (ph.channel) parts.push_back("channel:" + escape(*ph.channel));
    fields.push_back("physio=" + joinParts(parts));
  }
  std::string out;
  for (const auto& f : fields) {
    if (!out.empty()) out += ';';
    out += f;
  }
  return out;
}

std::vector<NumberedRecord> parseRecords(std::string_view text) {
  std::vector<NumberedRecord> out;
  for (const auto& line : text::contentLines(text)) {
    out.push_back({line.number, parseRecordLine(line.content, line.number)});
  }
  return out;
}

std::string serializeRecords(std::span<const StimulusRecord> records) {
  std::string out;
  for (const auto& r : records) {
    out += serializeRecord(r);
    out += '\n';
  }
  return out;
}

std::vector<StimulusRecord> parseCorpusRecords(std::string_view text, const TaxonomyGraph& g,
                                               const VocabularySet& vocabs) {
  std::vector<StimulusRecord> out;
  for (auto& [line, rec] : parseRecords(text)) {
    const auto v = validateStimulus(rec, g, vocabs);
    if (!v.ok()) {
      throw ValidationError("line " + std::to_string(line) + ": record " + rec.key + ": " +
                            v.summary());
    }
    out.push_back(std::move(rec));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Legacy ratings table

std::vector<StimulusRecord> parseLegacyTable(std::string_view text) {
  static constexpr std::array<std::string_view, 9> kColumns{
      "id", "db", "keyword", "valence", "valenceSD", "arousal", "arousalSD", "dominance",
      "dominanceSD"};
  std::vector<StimulusRecord> out;
  const auto lines = text::contentLines(text);
  if (lines.empty()) return out;

  std::array<std::size_t, kColumns.size()> col{};
  {
    const auto header = text::split(lines.front().content, '\t');
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
      auto it = std::find_if(header.begin(), header.end(),
                             [&](std::string_view h) { return text::trim(h) == kColumns[c]; });
      if (it == header.end()) {
        throw ParseError("legacy table header is missing column " + std::string(kColumns[c]),
                         lines.front().number);
      }
      col[c] = static_cast<std::size_t>(it - header.begin());
    }
  }
  const std::size_t width = *std::max_element(col.begin(), col.end()) + 1;

  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto& line = lines[li];
    const auto f = text::split(line.content, '\t');
    if (f.size() < width) {
      throw ParseError("expected " + std::to_string(width) + " columns, found " +
                           std::to_string(f.size()),
                       line.number);
    }
    auto cell = [&](std::size_t c) { return text::trim(f[col[c]]); };
    auto rating = [&](std::size_t c) -> std::optional<double> {
      const auto s = cell(c);
      if (s == "NA") return std::nullopt;
      auto v = text::parseDouble(s);
      if (!v) {
        throw ParseError("non-numeric " + std::string(kColumns[c]) + " '" + std::string(s) + "'",
                         line.number);
      }
      return v;
    };
    const std::string id(cell(0));
    const std::string db(cell(1));
    const std::string keyword(cell(2));
    if (id.empty() || db.empty()) throw ParseError("empty id or db", line.number);

    StimulusRecord rec;
    rec.key = makeStimulusId(db, id);
    if (!keyword.empty() && keyword != "NA") {
      rec.semantics.push_back({SemanticKind::Object, std::nullopt, keyword});
    }
    DimensionAnnotation d;
    d[Dimension::Valence] = rating(3);
    d.valenceSD = rating(4);
    d[Dimension::Arousal] = rating(5);
    d.arousalSD = rating(6);
    d[Dimension::Dominance] = rating(7);
    d.dominanceSD = rating(8);
    if (d.hasAny()) rec.dimensions = std::move(d);
    ContextRecord ctx;
    ctx.dbName = db;
    ctx.id = id;
    rec.context = std::move(ctx);
    out.push_back(std::move(rec));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Keyword expansion

ExpansionReport expandKeywords(std::vector<StimulusRecord>& records, const KeywordMapping& mapping) {
  ExpansionReport report;
  for (auto& rec : records) {
    std::vector<SemanticsAnnotation> added;
    for (const auto& s : rec.semantics) {
      if (s.concept_name || !s.keyword) continue;
      const auto& concepts = mapping.lookup(*s.keyword);
      if (concepts.empty()) {
        report.unmapped.emplace_back(rec.key, *s.keyword);
        continue;
      }
      ++report.mappedKeywords;
      for (const auto& c : concepts) {
        auto same = [&](const SemanticsAnnotation& o) {
          return o.kind == s.kind && o.concept_name == c;
        };
        if (std::any_of(rec.semantics.begin(), rec.semantics.end(), same) ||
            std::any_of(added.begin(), added.end(), same)) {
          continue;
        }
        added.push_back({s.kind, c, std::nullopt});
      }
    }
    report.addedAnnotations += added.size();
    rec.semantics.insert(rec.semantics.end(), added.begin(), added.end());
  }
  return report;
}

// ---------------------------------------------------------------------------
// Corpus

void Corpus::add(StimulusRecord rec) {
  const auto v = validateStimulus(rec);
  if (!v.ok()) throw ValidationError("record " + rec.key + ": " + v.summary());
  if (records_.count(rec.key)) throw ValidationError("duplicate stimulus key " + rec.key);
  for (const auto& s : rec.semantics) {
    if (s.concept_name) conceptIndex_[*s.concept_name].insert(rec.key);
    if (s.keyword) keywordIndex_[text::foldCase(*s.keyword)].insert(rec.key);
  }
  auto key = rec.key;
  records_.emplace(std::move(key), std::move(rec));
}

const StimulusRecord& Corpus::get(std::string_view key) const {
  auto it = records_.find(key);
  if (it == records_.end()) throw LookupError("unknown stimulus " + std::string(key));
  return it->second;
}

bool Corpus::contains(std::string_view key) const { return records_.find(key) != records_.end(); }

const Corpus::KeySet& Corpus::byConcept(std::string_view concept_name) const {
  static const KeySet kEmpty;
  auto it = conceptIndex_.find(concept_name);
  return it == conceptIndex_.end() ? kEmpty : it->second;
}

const Corpus::KeySet& Corpus::byKeyword(std::string_view keyword) const {
  static const KeySet kEmpty;
  auto it = keywordIndex_.find(text::foldCase(keyword));
  return it == keywordIndex_.end() ? kEmpty : it->second;
}

}  // namespace stimkb
