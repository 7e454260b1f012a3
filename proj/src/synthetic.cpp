#include "stimkb/synthetic.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <set>
#include <string>

#include "stimkb/error.hpp"

namespace stimkb {

namespace {

// Draws are done by hand so output does not depend on the standard library's
// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

constexpr std::string_view kConsonants = "bdfgklmnprstvz";
constexpr std::string_view kVowels = "aeiou";

std::string makeWord(Rng& rng) {
  std::string w;
  const std::size_t syllables = 2 + rng.below(2);
  for (std::size_t i = 0; i < syllables; ++i) {
    w += kConsonants[rng.below(kConsonants.size())];
    w += kVowels[rng.below(kVowels.size())];
  }
  if (rng.below(2) == 0) w += kConsonants[rng.below(kConsonants.size())];
  w[0] = static_cast<char>(w[0] - 'a' + 'A');
  return w;
}

std::string uniqueWord(Rng& rng, std::set<std::string>& used) {
  for (;;) {
    auto w = makeWord(rng);
    if (used.insert(w).second) return w;
  }
}

std::string typo(Rng& rng, const std::string& word) {
  std::string w = word;
  const std::size_t pos = 1 + rng.below(w.size() - 1);
  switch (rng.below(3)) {
    case 0: {
      const char v = kVowels[rng.below(kVowels.size())];
      w[pos] = v == w[pos] ? 'y' : v;
      break;
    }
    case 1: w.insert(pos, 1, kConsonants[rng.below(kConsonants.size())]); break;
    default: w.erase(pos, 1); break;
  }
  if (w == word) w += 'h';
  return w;
}

}  // namespace

SyntheticWorkspace generateSynthetic(const SyntheticConfig& config) {
  if (config.concepts < 3) throw PreconditionError("synthetic taxonomy needs at least 3 concepts");
  if (config.stimuli == 0) throw PreconditionError("synthetic corpus needs stimuli");
  if (config.queries == 0 || config.queries >= config.concepts) {
    throw PreconditionError("query count must be between 1 and concepts - 1");
  }
  Rng rng(config.seed);
  std::set<std::string> used{std::string(kVirtualRoot)};

  // Concept i > 0 hangs under a random earlier concept, biased toward recent
  // ones so the tree gets some depth.
  std::vector<std::string> names{std::string(kVirtualRoot)};
  std::vector<TaxonomyEdge> edges;
  for (std::size_t i = 1; i < config.concepts; ++i) {
    names.push_back(uniqueWord(rng, used));
    const std::size_t window = std::min<std::size_t>(i, 8);
    const std::size_t parent = i - 1 - rng.below(window);
    edges.push_back({names[i], names[parent]});
  }
  SyntheticWorkspace ws;
  ws.taxonomy = TaxonomyGraph::fromEdges(edges);
  const auto& g = ws.taxonomy;

  std::vector<std::string> aliases(names.size());
  for (std::size_t i = 1; i < names.size(); ++i) aliases[i] = uniqueWord(rng, used);

  std::vector<std::size_t> trueConcept;
  for (std::size_t s = 0; s < config.stimuli; ++s) {
    const std::size_t c = 1 + rng.below(names.size() - 1);
    trueConcept.push_back(c);
    std::size_t annotated = c;
    if (rng.unit() < config.conceptNoiseRate) {
      std::vector<std::size_t> near;
      for (std::size_t d = 1; d < names.size(); ++d) {
        if (g.shortestPath(names[c], names[d]) == 2) near.push_back(d);
      }
      if (!near.empty()) annotated = near[rng.below(near.size())];
    }
    std::string keyword;
    const double u = rng.unit();
    if (u < config.homonymRate) {
      std::vector<std::size_t> distant;
      for (std::size_t d = 1; d < names.size(); ++d) {
        if (g.shortestPath(names[c], names[d]) > config.relevanceRadius + 1) distant.push_back(d);
      }
      keyword = distant.empty() ? names[c] : names[distant[rng.below(distant.size())]];
    } else if (u < config.homonymRate + config.aliasRate) {
      keyword = aliases[c];
    } else if (u < config.homonymRate + config.aliasRate + config.typoRate) {
      keyword = typo(rng, names[c]);
    } else {
      keyword = names[c];
    }
    char id[32];
    std::snprintf(id, sizeof id, "%04zu", s + 1);
    StimulusRecord rec;
    rec.key = makeStimulusId("SYN", id);
    rec.semantics.push_back({SemanticKind::Object, names[annotated], keyword});
    ContextRecord ctx;
    ctx.dbName = "SYN";
    ctx.id = id;
    rec.context = ctx;
    ws.records.push_back(std::move(rec));
  }

  std::vector<std::size_t> pool;
  for (std::size_t i = 1; i < names.size(); ++i) pool.push_back(i);
  for (std::size_t i = 0; i < config.queries; ++i) {
    std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
    const std::string& q = names[pool[i]];
    char id[32];
    std::snprintf(id, sizeof id, "q%02zu", i + 1);
    ws.queries.push_back({id, q, q});
    for (std::size_t s = 0; s < ws.records.size(); ++s) {
      ws.judgments.set(id, ws.records[s].key,
                       g.shortestPath(q, names[trueConcept[s]]) <= config.relevanceRadius);
    }
  }
  return ws;
}

}  // namespace stimkb
