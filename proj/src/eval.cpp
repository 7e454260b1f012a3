#include "stimkb/eval.hpp"

#include <algorithm>
#include <random>

#include "stimkb/error.hpp"
#include "stimkb/text.hpp"

namespace stimkb {

namespace {

const Judgments kNoJudgments;

double ratio(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

void RelevanceJudgments::set(std::string_view query, std::string_view stimulus, bool relevant) {
  auto q = byQuery_.find(query);
  if (q == byQuery_.end()) q = byQuery_.emplace(std::string(query), Judgments{}).first;
  auto [it, fresh] = q->second.emplace(std::string(stimulus), relevant);
  if (!fresh && it->second != relevant) {
    throw ValidationError("conflicting judgments for " + std::string(query) + " / " +
                          std::string(stimulus));
  }
}

std::optional<bool> RelevanceJudgments::find(std::string_view query,
                                             std::string_view stimulus) const {
  const auto& j = forQuery(query);
  auto it = j.find(stimulus);
  if (it == j.end()) return std::nullopt;
  return it->second;
}

const Judgments& RelevanceJudgments::forQuery(std::string_view query) const {
  auto it = byQuery_.find(query);
  return it == byQuery_.end() ? kNoJudgments : it->second;
}

std::size_t RelevanceJudgments::size() const noexcept {
  std::size_t n = 0;
  for (const auto& [q, j] : byQuery_) n += j.size();
  return n;
}

RelevanceJudgments parseJudgments(std::string_view text) {
  RelevanceJudgments out;
  for (const auto& line : text::contentLines(text)) {
    const auto f = text::split(line.content, '\t');
    if (f.size() != 3) {
      throw ParseError("expected query<TAB>stimulus<TAB>0|1", line.number);
    }
    if (f[0].empty() || f[1].empty()) throw ParseError("empty query or stimulus id", line.number);
    if (f[2] != "0" && f[2] != "1") {
      throw ParseError("relevance must be 0 or 1, got '" + std::string(f[2]) + "'", line.number);
    }
    try {
      out.set(f[0], f[1], f[2] == "1");
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line.number);
    }
  }
  return out;
}

std::string serializeJudgments(const RelevanceJudgments& j) {
  std::string out;
  for (const auto& [q, pairs] : j.all()) {
    for (const auto& [s, rel] : pairs) {
      out += q + "\t" + s + "\t" + (rel ? "1" : "0") + "\n";
    }
  }
  return out;
}

std::vector<LiftPoint> liftCurve(const std::vector<bool>& relevant) {
  const std::size_t n = relevant.size();
  const std::size_t total = static_cast<std::size_t>(std::count(relevant.begin(), relevant.end(), true));
  if (total == 0) throw PreconditionError("lift is undefined without relevant items");
  std::vector<LiftPoint> curve;
  curve.reserve(n);
  std::size_t hits = 0;
  for (std::size_t r = 1; r <= n; ++r) {
    if (relevant[r - 1]) ++hits;
    // (hits / r) / (total / n), rounded once
    const double lift = static_cast<double>(hits * n) / static_cast<double>(r * total);
    curve.push_back({r, hits, lift});
  }
  return curve;
}

std::vector<LiftPoint> liftCurve(const RankedResult& ranked, const Judgments& j) {
  std::vector<bool> relevant;
  relevant.reserve(ranked.entries.size());
  for (const auto& e : ranked.entries) {
    auto it = j.find(e.id);
    if (it == j.end()) throw PreconditionError("stimulus " + e.id + " is not judged");
    relevant.push_back(it->second);
  }
  return liftCurve(relevant);
}

std::size_t selectThreshold(std::span<const LiftPoint> curve) {
  if (curve.empty()) throw PreconditionError("empty lift curve");
  const LiftPoint* best = &curve[0];
  for (const auto& p : curve) {
    // hits_p / r_p > hits_best / r_best
    if (p.relevantInTop * best->rank > best->relevantInTop * p.rank) best = &p;
  }
  return best->rank;
}

std::vector<bool> classifyAtThreshold(std::size_t n, std::size_t t) {
  if (t < 1 || t > n) {
    throw PreconditionError("threshold " + std::to_string(t) + " outside 1.." + std::to_string(n));
  }
  std::vector<bool> labels(n, false);
  std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(t), true);
  return labels;
}

Judgments classifyAtThreshold(const RankedResult& ranked, std::size_t t) {
  const auto labels = classifyAtThreshold(ranked.entries.size(), t);
  Judgments out;
  for (std::size_t i = 0; i < labels.size(); ++i) out.emplace(ranked.entries[i].id, labels[i]);
  return out;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& o) noexcept {
  tp += o.tp;
  fp += o.fp;
  fn += o.fn;
  tn += o.tn;
  return *this;
}

ConfusionMatrix confusion(const std::vector<bool>& labels, const std::vector<bool>& relevant) {
  if (labels.size() != relevant.size()) {
    throw PreconditionError("labels and judgments differ in length");
  }
  ConfusionMatrix m;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i]) {
      relevant[i] ? ++m.tp : ++m.fp;
    } else {
      relevant[i] ? ++m.fn : ++m.tn;
    }
  }
  return m;
}

ConfusionMatrix confusion(const Judgments& labels, const Judgments& relevant) {
  if (labels.size() != relevant.size()) {
    throw PreconditionError("labels and judgments cover different stimuli");
  }
  std::vector<bool> l, r;
  auto a = labels.begin();
  auto b = relevant.begin();
  for (; a != labels.end(); ++a, ++b) {
    if (a->first != b->first) throw PreconditionError("no judgment for stimulus " + a->first);
    l.push_back(a->second);
    r.push_back(b->second);
  }
  return confusion(l, r);
}

Metrics metrics(const ConfusionMatrix& m) {
  Metrics out;
  out.accuracy = ratio(m.tp + m.tn, m.total());
  out.precision = ratio(m.tp, m.tp + m.fp);
  out.precisionUndefined = m.tp + m.fp == 0;
  out.recall = ratio(m.tp, m.tp + m.fn);
  out.missRate = ratio(m.fn, m.tp + m.fn);
  out.falloutStandard = ratio(m.fp, m.fp + m.tn);
  out.specificity = ratio(m.tn, m.fp + m.tn);
  const double pr = out.precision + out.recall;
  out.f1 = pr > 0.0 ? 2.0 * out.precision * out.recall / pr : 0.0;
  return out;
}

Metrics aggregate(std::span<const ConfusionMatrix> matrices) {
  if (matrices.empty()) throw PreconditionError("nothing to aggregate");
  ConfusionMatrix sum;
  for (const auto& m : matrices) sum += m;
  return metrics(sum);
}

std::string_view toString(Scheme s) { return s == Scheme::Keyword ? "keyword" : "concept"; }

std::vector<EvalQuery> parseEvalQueries(std::string_view text) {
  std::vector<EvalQuery> out;
  std::map<std::string, std::size_t, std::less<>> seen;
  for (const auto& line : text::contentLines(text)) {
    const auto f = text::split(line.content, '\t');
    if (f.size() != 3) throw ParseError("expected id<TAB>keyword<TAB>concept", line.number);
    if (f[0].empty()) throw ParseError("empty query id", line.number);
    if (!seen.emplace(std::string(f[0]), line.number).second) {
      throw ParseError("duplicate query id " + std::string(f[0]), line.number);
    }
    EvalQuery q;
    q.id = std::string(f[0]);
    if (!f[1].empty() && f[1] != "-") q.keyword = std::string(f[1]);
    if (!f[2].empty() && f[2] != "-") q.concept_name = std::string(f[2]);
    if (!q.keyword && !q.concept_name) {
      throw ParseError("query " + q.id + " has neither keyword nor concept", line.number);
    }
    out.push_back(std::move(q));
  }
  return out;
}

std::string serializeEvalQueries(std::span<const EvalQuery> queries) {
  std::string out;
  for (const auto& q : queries) {
    out += q.id + "\t" + q.keyword.value_or("-") + "\t" + q.concept_name.value_or("-") + "\n";
  }
  return out;
}

std::vector<StimulusId> sampleCandidates(std::span<const StimulusId> keys, std::size_t k,
                                         std::uint64_t seed, std::uint64_t stream,
                                         std::uint64_t attempt) {
  std::vector<StimulusId> pool(keys.begin(), keys.end());
  std::sort(pool.begin(), pool.end());
  k = std::min(k, pool.size());
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(attempt)};
  std::mt19937_64 rng(seq);
  // Partial Fisher-Yates. Plain modulo keeps the draw identical across
  // standard libraries, unlike uniform_int_distribution.
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng() % (pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

ExperimentReport runExperiment(const KnowledgeBase& kb, std::span<const EvalQuery> queries,
                               const RelevanceJudgments& judgments,
                               const ExperimentConfig& config) {
  if (!kb.corpus) throw PreconditionError("experiment without corpus");
  if (config.measures.empty()) throw PreconditionError("experiment without measures");
  if (config.sampleSize == 0) throw PreconditionError("candidate sample size must be positive");

  std::vector<StimulusId> keys;
  for (const auto& [key, rec] : kb.corpus->records()) keys.push_back(key);

  ExperimentReport report;
  std::vector<std::vector<ConfusionMatrix>> perMeasure(config.measures.size());

  for (std::size_t qi = 0; qi < queries.size(); ++qi) {
    const EvalQuery& q = queries[qi];
    const Judgments& judged = judgments.forQuery(q.id);
    auto isRelevant = [&](const StimulusId& s) {
      auto it = judged.find(s);
      return it != judged.end() && it->second;
    };

    std::vector<StimulusId> sample;
    for (int attempt = 0; attempt <= config.maxResamples; ++attempt) {
      sample = sampleCandidates(keys, config.sampleSize, config.seed, qi,
                                static_cast<std::uint64_t>(attempt));
      if (std::any_of(sample.begin(), sample.end(), isRelevant)) break;
      sample.clear();
    }
    if (sample.empty()) {
      report.notes.push_back("query " + q.id + " skipped: no relevant candidate in " +
                             std::to_string(config.maxResamples + 1) + " samples");
      continue;
    }

    for (std::size_t mi = 0; mi < config.measures.size(); ++mi) {
      const Measure m = config.measures[mi];
      const bool lexical = isLexical(m);
      const auto& operand = lexical ? q.keyword : q.concept_name;
      if (!operand) {
        report.notes.push_back("query " + q.id + " skipped for " + std::string(toString(m)) +
                               ": no " + (lexical ? "keyword" : "concept"));
        continue;
      }
      const Term term = lexical ? Term::ofKeyword(*operand) : Term::ofConcept(*operand);
      const auto ranked = rankCandidates(kb, sample, term, m, sample.size());
      std::vector<bool> relevant;
      relevant.reserve(ranked.size());
      for (const auto& e : ranked) relevant.push_back(isRelevant(e.id));
      const auto curve = liftCurve(relevant);
      const std::size_t t = selectThreshold(curve);
      const auto matrix = confusion(classifyAtThreshold(ranked.size(), t), relevant);
      report.outcomes.push_back({q.id, m, ranked.size(), t, matrix});
      perMeasure[mi].push_back(matrix);
    }
  }

  for (std::size_t mi = 0; mi < config.measures.size(); ++mi) {
    ReportRow row;
    row.measure = config.measures[mi];
    row.scheme = schemeOf(row.measure);
    row.queries = perMeasure[mi].size();
    for (const auto& m : perMeasure[mi]) row.total += m;
    row.metrics = metrics(row.total);
    report.rows.push_back(row);
  }
  return report;
}

std::string formatReport(const ExperimentReport& report) {
  std::string out =
      "scheme\tmeasure\tqueries\taccuracy\tprecision\trecall\tfallout\tf_measure\t"
      "fallout_standard\tmiss_rate\tf1_standard\tprecision_undefined\n";
  auto num = [](double v) { return text::formatFixed(v, 4); };
  for (const auto& r : report.rows) {
    const Metrics& m = r.metrics;
    out += std::string(toString(r.scheme)) + "\t" + std::string(toString(r.measure)) + "\t" +
           std::to_string(r.queries) + "\t" + num(m.accuracy) + "\t" + num(m.precision) + "\t" +
           num(m.recall) + "\t" + num(m.missRate) + "\t" + num(m.f1) + "\t" +
           num(m.falloutStandard) + "\t" + num(m.missRate) + "\t" + num(m.f1) + "\t" +
           (m.precisionUndefined ? "1" : "0") + "\n";
  }
  for (const auto& n : report.notes) out += "# " + n + "\n";
  return out;
}

}  // namespace stimkb
