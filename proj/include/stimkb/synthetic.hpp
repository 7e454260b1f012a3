#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "stimkb/corpus.hpp"
#include "stimkb/eval.hpp"
#include "stimkb/taxonomy.hpp"

namespace stimkb {

/// Generated evaluation corpus: a random concept tree, stimuli with one
/// concept and one keyword each, and relevance planted by taxonomy proximity.
struct SyntheticConfig {
  std::size_t concepts = 50;  // including the root
  std::size_t stimuli = 100;
  std::size_t queries = 24;
  std::uint64_t seed = 20130101;
  double typoRate = 0.2;      // keyword is the concept name with one edit
  double aliasRate = 0.2;     // keyword is an unrelated synonym of the concept
  double homonymRate = 0.25;  // keyword is the name of a distant concept
  double conceptNoiseRate = 0.15;  // annotated concept is two steps off the true one
  int relevanceRadius = 1;    // relevant iff the true concept is within this path length
};

struct SyntheticWorkspace {
  TaxonomyGraph taxonomy;
  std::vector<StimulusRecord> records;
  std::vector<EvalQuery> queries;
  RelevanceJudgments judgments;  // every (query, stimulus) pair is judged
};

SyntheticWorkspace generateSynthetic(const SyntheticConfig& config);

}  // namespace stimkb
