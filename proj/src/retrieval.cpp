#include "stimkb/retrieval.hpp"

#include <algorithm>
#include <cctype>

#include "stimkb/text.hpp"

namespace stimkb {

namespace {

bool isSpace(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

class QueryScanner {
 public:
  explicit QueryScanner(std::string_view s) : s_(s) {}

  [[noreturn]] void fail(const std::string& what, std::size_t pos) const {
    throw QuerySyntaxError(what, pos);
  }

  void skipSpace() {
    while (pos_ < s_.size() && isSpace(s_[pos_])) ++pos_;
  }
  bool done() const { return pos_ >= s_.size(); }
  std::size_t pos() const { return pos_; }

  std::string_view clauseName() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ':' && !isSpace(s_[pos_])) ++pos_;
    if (pos_ >= s_.size() || s_[pos_] != ':') {
      fail("expected name:value clause", start);
    }
    const auto name = s_.substr(start, pos_ - start);
    ++pos_;  // ':'
    return name;
  }

  std::string_view bareValue() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && !isSpace(s_[pos_])) ++pos_;
    if (pos_ == start) fail("missing value", start);
    return s_.substr(start, pos_ - start);
  }

  std::string quotedValue() {
    const std::size_t start = pos_;
    ++pos_;  // opening quote
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
      out += s_[pos_++];
    }
    if (pos_ >= s_.size()) fail("unterminated quoted string", start);
    ++pos_;  // closing quote
    if (pos_ < s_.size() && !isSpace(s_[pos_])) fail("expected whitespace after quoted string", pos_);
    return out;
  }

  Interval interval() {
    const std::size_t start = pos_;
    if (pos_ >= s_.size() || s_[pos_] != '[') fail("expected [lo,hi]", pos_);
    const auto close = s_.find(']', pos_);
    if (close == std::string_view::npos) fail("unterminated interval", start);
    const auto body = s_.substr(pos_ + 1, close - pos_ - 1);
    const auto comma = body.find(',');
    if (comma == std::string_view::npos) fail("expected [lo,hi]", start);
    const auto lo = text::parseDouble(text::trim(body.substr(0, comma)));
    if (!lo) fail("invalid lower bound", pos_ + 1);
    const auto hi = text::parseDouble(text::trim(body.substr(comma + 1)));
    if (!hi) fail("invalid upper bound", pos_ + 2 + comma);
    pos_ = close + 1;
    if (pos_ < s_.size() && !isSpace(s_[pos_])) fail("expected whitespace after interval", pos_);
    if (*lo > *hi) fail("inverted interval", start);
    return {*lo, *hi};
  }

  bool peek(char c) const { return pos_ < s_.size() && s_[pos_] == c; }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

std::optional<std::string> dbNameOf(const StimulusRecord& rec) {
  if (rec.context) return rec.context->dbName;
  auto db = databaseOf(rec.key);
  if (db.empty()) return std::nullopt;
  return std::string(db);
}

bool matchesBoxes(const StimulusRecord& rec, const Query& q) {
  for (const auto& [dim, box] : q.boxes) {
    if (!rec.dimensions) return false;
    const auto& v = (*rec.dimensions)[dim];
    if (!v || !box.contains(*v)) return false;
  }
  return true;
}

bool matchesCategory(const KnowledgeBase& kb, const StimulusRecord& rec, const QualifiedTerm& want) {
  for (const auto& c : rec.categories) {
    const QualifiedTerm have{c.vocabulary, c.term};
    if (have == want) return true;
    if (kb.equivalences && kb.equivalences->areEquivalent(have, want)) return true;
  }
  return false;
}

// Clauses shared by both modes: boxes, db and category.
bool passesRestrictions(const KnowledgeBase& kb, const StimulusRecord& rec, const Query& q) {
  if (!matchesBoxes(rec, q)) return false;
  if (q.dbName && dbNameOf(rec) != q.dbName) return false;
  if (q.category && !matchesCategory(kb, rec, *q.category)) return false;
  return true;
}

SimilarityContext similarityOf(const KnowledgeBase& kb) {
  SimilarityContext ctx = kb.similarity;
  if (!ctx.taxonomy) ctx.taxonomy = kb.taxonomy;
  return ctx;
}

void requireCorpus(const KnowledgeBase& kb) {
  if (!kb.corpus) throw PreconditionError("knowledge base has no corpus");
}

}  // namespace

Query parseQuery(std::string_view text, const QueryDefaults& defaults) {
  QueryScanner sc(text);
  Query q;
  q.limit = defaults.limit;
  std::vector<std::string> seen;
  while (true) {
    sc.skipSpace();
    if (sc.done()) break;
    const std::size_t clauseStart = sc.pos();
    const std::string name(sc.clauseName());
    if (std::find(seen.begin(), seen.end(), name) != seen.end()) {
      sc.fail("repeated clause '" + name + "'", clauseStart);
    }
    seen.push_back(name);

    if (name == "concept") {
      if (q.term) sc.fail("at most one of concept/keyword", clauseStart);
      const auto v = sc.bareValue();
      if (!text::isIdentifier(v)) sc.fail("invalid concept name", clauseStart + name.size() + 1);
      q.term = Term::ofConcept(std::string(v));
    } else if (name == "keyword") {
      if (q.term) sc.fail("at most one of concept/keyword", clauseStart);
      std::string v = sc.peek('"') ? sc.quotedValue() : std::string(sc.bareValue());
      if (v.empty()) sc.fail("empty keyword", clauseStart);
      q.term = Term::ofKeyword(std::move(v));
    } else if (auto dim = parseDimension(name);
               dim && (*dim == Dimension::Valence || *dim == Dimension::Arousal ||
                       *dim == Dimension::Dominance) &&
               name == toString(*dim)) {
      q.boxes[*dim] = sc.interval();
    } else if (name == "category") {
      const std::size_t at = sc.pos();
      const auto v = sc.bareValue();
      try {
        q.category = QualifiedTerm::parse(v);
      } catch (const ParseError&) {
        sc.fail("expected category:<vocab>.<term>", at);
      }
    } else if (name == "db") {
      const std::size_t at = sc.pos();
      const auto v = sc.bareValue();
      if (!text::isIdentifier(v)) sc.fail("invalid database name", at);
      q.dbName = std::string(v);
    } else if (name == "measure") {
      const std::size_t at = sc.pos();
      const auto m = parseMeasure(sc.bareValue());
      if (!m) sc.fail("unknown measure (inclusion|levenshtein|pathlen|wupalmer|lch|li)", at);
      q.measure = *m;
    } else if (name == "mode") {
      const std::size_t at = sc.pos();
      const std::string v = text::foldCase(sc.bareValue());
      if (v == "filter") q.mode = QueryMode::Filter;
      else if (v == "rank") q.mode = QueryMode::Rank;
      else sc.fail("mode must be filter or rank", at);
    } else if (name == "limit") {
      const std::size_t at = sc.pos();
      const auto v = text::parseInt(sc.bareValue());
      if (!v || *v <= 0) sc.fail("limit must be a positive integer", at);
      q.limit = static_cast<std::size_t>(*v);
    } else {
      sc.fail("unknown clause '" + name + "'", clauseStart);
    }
  }
  if (q.term && !q.measure) {
    if (defaults.measure && isLexical(*defaults.measure) != q.term->isConcept()) {
      q.measure = defaults.measure;
    } else {
      q.measure = q.term->isConcept() ? Measure::WuPalmer : Measure::Levenshtein;
    }
  }
  return q;
}

std::string formatQuery(const Query& q) {
  std::vector<std::string> parts;
  if (q.term) {
    if (q.term->isConcept()) {
      parts.push_back("concept:" + q.term->text);
    } else {
      std::string quoted = "keyword:\"";
      for (char c : q.term->text) {
        if (c == '"' || c == '\\') quoted += '\\';
        quoted += c;
      }
      parts.push_back(quoted + "\"");
    }
  }
  for (const auto& [dim, box] : q.boxes) {
    parts.push_back(std::string(toString(dim)) + ":[" + text::formatDouble(box.lo) + "," +
                    text::formatDouble(box.hi) + "]");
  }
  if (q.category) parts.push_back("category:" + q.category->str());
  if (q.dbName) parts.push_back("db:" + *q.dbName);
  if (q.measure) parts.push_back("measure:" + std::string(toString(*q.measure)));
  parts.push_back(q.mode == QueryMode::Filter ? "mode:filter" : "mode:rank");
  parts.push_back("limit:" + std::to_string(q.limit));
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += ' ';
    out += p;
  }
  return out;
}

std::vector<StimulusId> filterQuery(const KnowledgeBase& kb, const Query& q) {
  requireCorpus(kb);
  if (q.mode != QueryMode::Filter) throw PreconditionError("filterQuery needs mode:filter");
  if (q.term && !q.term->isConcept()) {
    throw PreconditionError("keyword clauses rank, they do not filter; use mode:rank");
  }
  if (!q.term && !q.category && q.boxes.empty()) {
    throw PreconditionError("filter query needs a concept, category or dimension clause");
  }
  std::optional<TaxonomyGraph::Index> want;
  if (q.term) {
    if (!kb.taxonomy) throw PreconditionError("concept filter without taxonomy");
    want = kb.taxonomy->indexOf(q.term->text);
  }
  std::vector<StimulusId> out;
  for (const auto& [key, rec] : kb.corpus->records()) {
    if (!passesRestrictions(kb, rec, q)) continue;
    if (want) {
      const bool subsumed = std::any_of(rec.semantics.begin(), rec.semantics.end(), [&](const auto& s) {
        return s.concept_name && kb.taxonomy->contains(*s.concept_name) &&
               kb.taxonomy->isSubclassOf(kb.taxonomy->indexOf(*s.concept_name), *want);
      });
      if (!subsumed) continue;
    }
    out.push_back(key);
  }
  return out;
}

double scoreStimulus(const KnowledgeBase& kb, const StimulusRecord& rec, const Term& term,
                     Measure measure) {
  const auto ctx = similarityOf(kb);
  double best = 0.0;
  for (const auto& s : rec.semantics) {
    const auto& operand = term.isConcept() ? s.concept_name : s.keyword;
    if (!operand || operand->empty()) continue;
    const Term other{term.kind, *operand};
    best = std::max(best, relatedness(measure, ctx, term, other));
  }
  return best;
}

std::vector<ScoredStimulus> rankCandidates(const KnowledgeBase& kb,
                                           std::span<const StimulusId> candidates,
                                           const Term& term, Measure measure,
                                           std::size_t limit) {
  requireCorpus(kb);
  if (isLexical(measure) == term.isConcept()) {
    throw PreconditionError("measure " + std::string(toString(measure)) + " does not apply to a " +
                            (term.isConcept() ? "concept" : "keyword") + " term");
  }
  if (term.isConcept()) {
    if (!kb.taxonomy) throw PreconditionError("concept ranking without taxonomy");
    kb.taxonomy->indexOf(term.text);  // unknown concept -> LookupError
  }
  std::vector<ScoredStimulus> scored;
  scored.reserve(candidates.size());
  for (const auto& id : candidates) {
    scored.push_back({id, scoreStimulus(kb, kb.corpus->get(id), term, measure)});
  }
  std::sort(scored.begin(), scored.end(), [](const ScoredStimulus& a, const ScoredStimulus& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  });
  scored.erase(std::unique(scored.begin(), scored.end(),
                           [](const auto& a, const auto& b) { return a.id == b.id; }),
               scored.end());
  if (scored.size() > limit) scored.resize(limit);
  return scored;
}

RankedResult rankedQuery(const KnowledgeBase& kb, const Query& q) {
  requireCorpus(kb);
  if (q.mode != QueryMode::Rank) throw PreconditionError("rankedQuery needs mode:rank");
  if (!q.term) throw PreconditionError("rank query needs a concept or keyword term");
  if (!q.measure) throw PreconditionError("rank query needs a measure");
  std::vector<StimulusId> candidates;
  for (const auto& [key, rec] : kb.corpus->records()) {
    if (passesRestrictions(kb, rec, q)) candidates.push_back(key);
  }
  RankedResult r;
  r.query = q;
  r.measure = *q.measure;
  r.entries = rankCandidates(kb, candidates, *q.term, *q.measure, q.limit);
  return r;
}

}  // namespace stimkb
