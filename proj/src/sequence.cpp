#include "stimkb/sequence.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include <json.hpp>

#include "stimkb/error.hpp"

namespace stimkb {

namespace {

bool itemOrder(const SequenceItem& a, const SequenceItem& b) {
  return std::tie(a.startMs, a.track, a.stimulus, a.durationMs) <
         std::tie(b.startMs, b.track, b.stimulus, b.durationMs);
}

std::int64_t computeTotal(const std::vector<SequenceItem>& items) {
  std::int64_t total = 0;
  for (const auto& it : items) total = std::max(total, it.endMs());
  return total;
}

}  // namespace

void validateSequence(const StimulusSequence& s) {
  for (const auto& it : s.items) {
    if (it.stimulus.empty()) throw ValidationError("sequence item without stimulus");
    if (it.track.empty()) throw ValidationError("sequence item " + it.stimulus + " without track");
    if (it.startMs < 0) throw ValidationError("item " + it.stimulus + " starts before 0");
    if (it.durationMs <= 0) throw ValidationError("item " + it.stimulus + " has no duration");
  }
  std::map<std::string, const SequenceItem*> lastOnTrack;
  for (const auto& it : s.items) {
    auto [pos, fresh] = lastOnTrack.emplace(it.track, &it);
    if (!fresh) {
      const SequenceItem& prev = *pos->second;
      if (it.startMs < prev.startMs) {
        throw ValidationError("items on track " + it.track + " are not sorted by start");
      }
      if (it.startMs < prev.endMs()) {
        throw ValidationError("items " + prev.stimulus + " and " + it.stimulus +
                              " overlap on track " + it.track);
      }
      pos->second = &it;
    }
  }
  if (s.totalMs != computeTotal(s.items)) {
    throw ValidationError("totalMs does not match the last item end");
  }
}

StimulusSequence makeSequence(std::vector<SequenceItem> items) {
  std::sort(items.begin(), items.end(), itemOrder);
  StimulusSequence s{std::move(items), 0};
  s.totalMs = computeTotal(s.items);
  validateSequence(s);
  return s;
}

StimulusSequence buildSequence(const RankedResult& results, const SequenceParams& params) {
  if (params.count == 0) throw PreconditionError("sequence count must be positive");
  if (params.durationMs <= 0) throw PreconditionError("item duration must be positive");
  if (params.isiMs < 0) throw PreconditionError("inter-stimulus interval must be non-negative");
  if (params.track.empty()) throw PreconditionError("sequence track label is empty");
  if (results.entries.empty()) throw PreconditionError("no ranked results to sequence");
  if (params.count > results.entries.size()) {
    throw PreconditionError("requested " + std::to_string(params.count) + " items but only " +
                            std::to_string(results.entries.size()) + " results are available");
  }
  std::vector<SequenceItem> items;
  const std::int64_t step = params.durationMs + params.isiMs;
  for (std::size_t k = 0; k < params.count; ++k) {
    items.push_back({results.entries[k].id, params.track,
                     static_cast<std::int64_t>(k) * step, params.durationMs});
  }
  return makeSequence(std::move(items));
}

StimulusSequence mergeSequences(const StimulusSequence& a, const StimulusSequence& b) {
  std::vector<SequenceItem> items = a.items;
  items.insert(items.end(), b.items.begin(), b.items.end());
  return makeSequence(std::move(items));
}

std::string_view toString(SyncKind k) { return k == SyncKind::Onset ? "onset" : "offset"; }

std::vector<SyncEvent> emitSchedule(const StimulusSequence& s) {
  std::vector<SyncEvent> events;
  events.reserve(2 * s.items.size());
  for (const auto& it : s.items) {
    events.push_back({it.startMs, SyncKind::Onset, it.stimulus, it.track});
    events.push_back({it.endMs(), SyncKind::Offset, it.stimulus, it.track});
  }
  // Offset sorts before Onset at equal timestamps.
  auto rank = [](SyncKind k) { return k == SyncKind::Offset ? 0 : 1; };
  std::stable_sort(events.begin(), events.end(), [&](const SyncEvent& x, const SyncEvent& y) {
    return std::make_tuple(x.timestampMs, rank(x.kind), std::cref(x.track), std::cref(x.stimulus)) <
           std::make_tuple(y.timestampMs, rank(y.kind), std::cref(y.track), std::cref(y.stimulus));
  });
  return events;
}

StimulusSequence reconstructSequence(const std::vector<SyncEvent>& events) {
  // Per track at most one item is open at a time.
  std::map<std::string, const SyncEvent*> open;
  std::vector<SequenceItem> items;
  for (const auto& e : events) {
    if (e.kind == SyncKind::Onset) {
      if (!open.emplace(e.track, &e).second) {
        throw ValidationError("onset of " + e.stimulus + " while track " + e.track + " is busy");
      }
      continue;
    }
    auto it = open.find(e.track);
    if (it == open.end() || it->second->stimulus != e.stimulus) {
      throw ValidationError("offset of " + e.stimulus + " without matching onset");
    }
    items.push_back({e.stimulus, e.track, it->second->timestampMs,
                     e.timestampMs - it->second->timestampMs});
    open.erase(it);
  }
  if (!open.empty()) throw ValidationError("onset of " + open.begin()->second->stimulus + " never ends");
  return makeSequence(std::move(items));
}

std::string sequenceToJson(const StimulusSequence& s) {
  nlohmann::ordered_json doc;
  doc["items"] = nlohmann::ordered_json::array();
  for (const auto& it : s.items) {
    nlohmann::ordered_json item;
    item["stimulus"] = it.stimulus;
    item["track"] = it.track;
    item["startMs"] = it.startMs;
    item["durationMs"] = it.durationMs;
    doc["items"].push_back(std::move(item));
  }
  doc["totalMs"] = s.totalMs;
  return doc.dump(2) + "\n";
}

StimulusSequence sequenceFromJson(std::string_view json) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json);
    std::vector<SequenceItem> items;
    for (const auto& item : doc.at("items")) {
      items.push_back({item.at("stimulus").get<std::string>(), item.at("track").get<std::string>(),
                       item.at("startMs").get<std::int64_t>(),
                       item.at("durationMs").get<std::int64_t>()});
    }
    auto s = makeSequence(std::move(items));
    if (doc.at("totalMs").get<std::int64_t>() != s.totalMs) {
      throw ValidationError("totalMs does not match the last item end");
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("sequence JSON: ") + e.what());
  }
}

std::string scheduleToTsv(const std::vector<SyncEvent>& events) {
  std::string out;
  for (const auto& e : events) {
    out += std::to_string(e.timestampMs);
    out += '\t';
    out += toString(e.kind);
    out += '\t';
    out += e.track;
    out += '\t';
    out += e.stimulus;
    out += '\n';
  }
  return out;
}

}  // namespace stimkb
