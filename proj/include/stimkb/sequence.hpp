#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "stimkb/corpus.hpp"
#include "stimkb/retrieval.hpp"

namespace stimkb {

struct SequenceItem {
  StimulusId stimulus;
  std::string track;  // modality, e.g. "visual"
  std::int64_t startMs = 0;
  std::int64_t durationMs = 0;

  std::int64_t endMs() const noexcept { return startMs + durationMs; }
  friend bool operator==(const SequenceItem&, const SequenceItem&) = default;
};

/// Timed presentation plan. Items on one track are sorted and never overlap;
/// items on different tracks may.
struct StimulusSequence {
  std::vector<SequenceItem> items;
  std::int64_t totalMs = 0;

  friend bool operator==(const StimulusSequence&, const StimulusSequence&) = default;
};

/// Throws ValidationError naming the first violated invariant.
void validateSequence(const StimulusSequence& s);

/// Sorts items by (startMs, track, stimulus), recomputes totalMs, then validates.
StimulusSequence makeSequence(std::vector<SequenceItem> items);

struct SequenceParams {
  std::size_t count = 1;
  std::int64_t durationMs = 1000;
  std::int64_t isiMs = 0;  // gap between consecutive items
  std::string track = "visual";
};

/// Top `count` entries in ranked order; item k starts at k*(duration + isi).
/// Throws PreconditionError if results are too few or params are invalid.
StimulusSequence buildSequence(const RankedResult& results, const SequenceParams& params);

/// Union of both sequences. Throws ValidationError when a shared track has
/// overlapping items.
StimulusSequence mergeSequences(const StimulusSequence& a, const StimulusSequence& b);

enum class SyncKind { Onset, Offset };

struct SyncEvent {
  std::int64_t timestampMs = 0;
  SyncKind kind = SyncKind::Onset;
  StimulusId stimulus;
  std::string track;

  friend bool operator==(const SyncEvent&, const SyncEvent&) = default;
};

std::string_view toString(SyncKind k);

/// Two events per item, sorted by time; at equal times offsets come first,
/// then by track and stimulus.
std::vector<SyncEvent> emitSchedule(const StimulusSequence& s);

/// Pairs onsets with offsets to recover the items. Throws ValidationError on
/// an unpaired event.
StimulusSequence reconstructSequence(const std::vector<SyncEvent>& events);

/// `{"items":[{"stimulus","track","startMs","durationMs"}],"totalMs"}`
std::string sequenceToJson(const StimulusSequence& s);
StimulusSequence sequenceFromJson(std::string_view json);

/// Lines of `timestampMs<TAB>kind<TAB>track<TAB>stimulus`, kind onset|offset.
std::string scheduleToTsv(const std::vector<SyncEvent>& events);

}  // namespace stimkb
