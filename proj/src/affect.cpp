#include "stimkb/affect.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "stimkb/error.hpp"
#include "stimkb/text.hpp"

namespace stimkb {

namespace {

constexpr std::array<std::string_view, 5> kLevelNames{"VeryHigh", "High", "Average", "Low",
                                                      "VeryLow"};
constexpr std::array<std::string_view, 6> kDimensionNames{
    "valence", "arousal", "dominance", "potency", "unpredictability", "intensity"};

bool inUnitInterval(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

std::optional<ConfidenceLevel> parseConfidenceLevel(std::string_view s) {
  for (std::size_t i = 0; i < kLevelNames.size(); ++i) {
    if (kLevelNames[i] == s) return static_cast<ConfidenceLevel>(i);
  }
  return std::nullopt;
}

std::string_view toString(ConfidenceLevel level) {
  const auto i = static_cast<std::size_t>(level);
  return i < kLevelNames.size() ? kLevelNames[i] : std::string_view("?");
}

std::string_view toString(Dimension d) { return kDimensionNames.at(static_cast<std::size_t>(d)); }

std::optional<Dimension> parseDimension(std::string_view s) {
  const std::string folded = text::foldCase(s);
  for (std::size_t i = 0; i < kDimensionNames.size(); ++i) {
    if (kDimensionNames[i] == folded) return static_cast<Dimension>(i);
  }
  return std::nullopt;
}

bool Vocabulary::contains(std::string_view term) const {
  return std::binary_search(terms.begin(), terms.end(), term);
}

Vocabulary builtinBigSix() {
  return {std::string(kBigSix), {"anger", "disgust", "fear", "happiness", "sadness", "surprise"}};
}

VocabularySet VocabularySet::withDefaults() {
  VocabularySet s;
  s.vocabs_.emplace(std::string(kBigSix), builtinBigSix());
  s.builtinBigSix_ = true;
  return s;
}

void VocabularySet::add(Vocabulary v) {
  if (v.terms.empty()) throw ValidationError("vocabulary " + v.id + " has no terms");
  std::sort(v.terms.begin(), v.terms.end());
  v.terms.erase(std::unique(v.terms.begin(), v.terms.end()), v.terms.end());
  auto it = vocabs_.find(v.id);
  if (it != vocabs_.end()) {
    if (v.id == kBigSix && builtinBigSix_) {
      builtinBigSix_ = false;
      it->second = std::move(v);
      return;
    }
    throw ValidationError("duplicate vocabulary id: " + v.id);
  }
  vocabs_.emplace(v.id, std::move(v));
}

const Vocabulary* VocabularySet::find(std::string_view id) const {
  auto it = vocabs_.find(id);
  return it == vocabs_.end() ? nullptr : &it->second;
}

std::vector<Vocabulary> parseVocabularies(std::string_view text) {
  std::vector<Vocabulary> out;
  std::set<std::string> closed;
  for (const auto& line : text::contentLines(text)) {
    const auto fields = text::split(line.content, '\t');
    if (fields.size() != 2) throw ParseError("expected vocab<TAB>term", line.number);
    const auto id = text::trim(fields[0]);
    const auto term = text::trim(fields[1]);
    if (id.empty()) throw ParseError("empty vocabulary id", line.number);
    if (term.empty()) throw ParseError("empty term in vocabulary " + std::string(id), line.number);
    if (out.empty() || out.back().id != id) {
      if (closed.count(std::string(id))) {
        throw ParseError("duplicate vocabulary id: " + std::string(id), line.number);
      }
      if (!out.empty()) closed.insert(out.back().id);
      out.push_back({std::string(id), {}});
    }
    out.back().terms.emplace_back(term);
  }
  for (auto& v : out) {
    std::sort(v.terms.begin(), v.terms.end());
    v.terms.erase(std::unique(v.terms.begin(), v.terms.end()), v.terms.end());
  }
  return out;
}

VocabularySet loadVocabulary(std::string_view text) {
  auto set = VocabularySet::withDefaults();
  for (auto& v : parseVocabularies(text)) set.add(std::move(v));
  return set;
}

std::string serializeVocabularies(const VocabularySet& vocabs) {
  std::string out;
  for (const auto& [id, v] : vocabs.all()) {
    for (const auto& t : v.terms) {
      out += id;
      out += '\t';
      out += t;
      out += '\n';
    }
  }
  return out;
}

bool DimensionAnnotation::hasAny() const {
  return std::any_of(values.begin(), values.end(), [](const auto& v) { return v.has_value(); });
}

Validation validateConfidence(const Confidence& c) {
  Validation r;
  if (c.level && static_cast<std::size_t>(*c.level) >= kLevelNames.size()) {
    r.fail(Violation::InvalidConfidenceLevel, "confidence level is not one of the five levels");
  }
  if (c.value && !inUnitInterval(*c.value)) {
    r.fail(Violation::ConfidenceOutOfRange,
           "confidence value " + text::formatDouble(*c.value) + " outside [0,1]");
  }
  return r;
}

Validation validateCategory(const CategoryAnnotation& ann, const VocabularySet& vocabs) {
  Validation r;
  const Vocabulary* v = vocabs.find(ann.vocabulary);
  if (!v) {
    r.fail(Violation::UnknownVocabulary, "unknown vocabulary " + ann.vocabulary);
  } else if (!v->contains(ann.term)) {
    r.fail(Violation::TermNotInVocabulary,
           "term " + ann.term + " not in vocabulary " + ann.vocabulary);
  }
  r.merge(validateConfidence(ann.confidence));
  return r;
}

Validation validateDimension(const DimensionAnnotation& ann) {
  Validation r;
  const bool scaleOk = std::isfinite(ann.scaleMin) && std::isfinite(ann.scaleMax) &&
                       ann.scaleMin < ann.scaleMax;
  if (!scaleOk) {
    r.fail(Violation::InvalidScale, "dimension scale [" + text::formatDouble(ann.scaleMin) + "," +
                                        text::formatDouble(ann.scaleMax) + "] is not increasing");
  }
  if (!ann.hasAny()) r.fail(Violation::NoDimensionValue, "dimension annotation has no values");
  for (Dimension d : kAllDimensions) {
    const auto& v = ann[d];
    if (!v || !scaleOk) continue;
    if (!(*v >= ann.scaleMin && *v <= ann.scaleMax)) {
      r.fail(Violation::DimensionOutOfScale,
             std::string(toString(d)) + " " + text::formatDouble(*v) + " outside scale [" +
                 text::formatDouble(ann.scaleMin) + "," + text::formatDouble(ann.scaleMax) + "]");
    }
  }
  for (const auto* sd : {&ann.valenceSD, &ann.arousalSD, &ann.dominanceSD}) {
    if (*sd && !(**sd >= 0.0)) {
      r.fail(Violation::NegativeDeviation, "negative standard deviation");
    }
  }
  r.merge(validateConfidence(ann.confidence));
  return r;
}

Validation validateAppraisal(const AppraisalAnnotation& ann) {
  Validation r;
  for (const auto& [name, v] : ann.values) {
    if (!inUnitInterval(v)) {
      r.fail(Violation::UnitValueOutOfRange,
             "appraisal " + name + " = " + text::formatDouble(v) + " outside [0,1]");
    }
  }
  return r;
}

Validation validateActionTendency(const ActionTendencyAnnotation& ann) {
  Validation r;
  if (ann.term.empty()) r.fail(Violation::EmptyActionTendency, "action tendency without a term");
  r.merge(validateConfidence(ann.confidence));
  return r;
}

Validation validateSentiment(const SentimentAnnotation& ann) {
  Validation r;
  if (!inUnitInterval(ann.value)) {
    r.fail(Violation::UnitValueOutOfRange,
           "sentiment " + text::formatDouble(ann.value) + " outside [0,1]");
  }
  r.merge(validateConfidence(ann.confidence));
  return r;
}

std::map<Dimension, double> normalizeDimension(const DimensionAnnotation& ann) {
  const double span = ann.scaleMax - ann.scaleMin;
  if (!(span > 0.0)) throw PreconditionError("degenerate dimension scale");
  std::map<Dimension, double> out;
  for (Dimension d : kAllDimensions) {
    if (const auto& v = ann[d]) out.emplace(d, (*v - ann.scaleMin) / span);
  }
  return out;
}

QualifiedTerm QualifiedTerm::parse(std::string_view s) {
  const auto dot = s.find('.');
  if (dot == std::string_view::npos || dot == 0 || dot + 1 == s.size()) {
    throw ParseError("malformed qualified term '" + std::string(s) + "', expected vocab.term");
  }
  return {std::string(s.substr(0, dot)), std::string(s.substr(dot + 1))};
}

std::vector<EquivalenceAxiom> parseAxioms(std::string_view text) {
  std::vector<EquivalenceAxiom> out;
  for (const auto& line : text::contentLines(text)) {
    const auto f = text::split(line.content, '\t');
    if (f.size() != 4) throw ParseError("expected vocabA<TAB>termA<TAB>vocabB<TAB>termB", line.number);
    for (auto part : f) {
      if (text::trim(part).empty()) throw ParseError("empty field in axiom", line.number);
    }
    out.push_back({{std::string(text::trim(f[0])), std::string(text::trim(f[1]))},
                   {std::string(text::trim(f[2])), std::string(text::trim(f[3]))}});
  }
  return out;
}

std::string serializeAxioms(std::span<const EquivalenceAxiom> axioms) {
  std::string out;
  for (const auto& a : axioms) {
    out += a.lhs.vocabulary + '\t' + a.lhs.term + '\t' + a.rhs.vocabulary + '\t' + a.rhs.term + '\n';
  }
  return out;
}

EquivalenceClosure::EquivalenceClosure(std::span<const EquivalenceAxiom> axioms)
    : axioms_(axioms.begin(), axioms.end()) {
  // Ids follow term order, so the representative (smallest id in a class) does
  // not depend on axiom order.
  for (const auto& a : axioms_) {
    ids_.emplace(a.lhs, 0);
    ids_.emplace(a.rhs, 0);
  }
  for (auto& [term, id] : ids_) {
    id = terms_.size();
    terms_.push_back(term);
  }
  std::vector<std::size_t> parent(terms_.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](std::size_t i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  };
  for (const auto& a : axioms_) {
    const auto x = find(ids_.at(a.lhs));
    const auto y = find(ids_.at(a.rhs));
    if (x != y) parent[std::max(x, y)] = std::min(x, y);
  }
  classId_.resize(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) classId_[i] = find(i);
}

bool EquivalenceClosure::areEquivalent(const QualifiedTerm& a, const QualifiedTerm& b) const {
  if (a == b) return true;
  auto ia = ids_.find(a);
  auto ib = ids_.find(b);
  if (ia == ids_.end() || ib == ids_.end()) return false;
  return classId_[ia->second] == classId_[ib->second];
}

bool EquivalenceClosure::areEquivalent(std::string_view a, std::string_view b) const {
  return areEquivalent(QualifiedTerm::parse(a), QualifiedTerm::parse(b));
}

std::vector<QualifiedTerm> EquivalenceClosure::classOf(const QualifiedTerm& t) const {
  auto it = ids_.find(t);
  if (it == ids_.end()) return {t};
  std::vector<QualifiedTerm> out;
  const auto cls = classId_[it->second];
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (classId_[i] == cls) out.push_back(terms_[i]);
  }
  return out;
}

std::vector<std::vector<QualifiedTerm>> EquivalenceClosure::classes() const {
  std::map<std::size_t, std::vector<QualifiedTerm>> byRep;
  for (std::size_t i = 0; i < terms_.size(); ++i) byRep[classId_[i]].push_back(terms_[i]);
  std::vector<std::vector<QualifiedTerm>> out;
  for (auto& [rep, members] : byRep) {
    if (members.size() > 1) out.push_back(std::move(members));
  }
  return out;
}

EquivalenceClosure buildEquivalenceClosure(std::span<const EquivalenceAxiom> axioms) {
  return EquivalenceClosure(axioms);
}

}  // namespace stimkb
