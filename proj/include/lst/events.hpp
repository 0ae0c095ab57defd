#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lst/prefix.hpp"

namespace lst {

// Nesting tags around an event's leaf, outermost first.
enum class EvWrap { ParA, ParB, CatA };
enum class EvLeaf { One, Int, Bool, PuncA, PuncB, CatPunc };

struct Event {
  std::vector<EvWrap> path;
  EvLeaf leaf = EvLeaf::One;
  std::int64_t n = 0;
  bool b = false;

  static Event one() { return {}; }
  static Event int_(std::int64_t v) { return {{}, EvLeaf::Int, v, false}; }
  static Event bool_(bool v) { return {{}, EvLeaf::Bool, 0, v}; }
  static Event punc_a() { return {{}, EvLeaf::PuncA, 0, false}; }
  static Event punc_b() { return {{}, EvLeaf::PuncB, 0, false}; }
  static Event cat_punc() { return {{}, EvLeaf::CatPunc, 0, false}; }
  Event wrapped(EvWrap w) const;

  std::string str() const;
  friend bool operator==(const Event&, const Event&) = default;
};

bool event_has_type(const Event& x, const StreamType& s);
// Throws IllTypedEvent.
StreamType event_deriv(const Event& x, const StreamType& s);
// Single event to prefix at s.
Prefix event_to_prefix(const Event& x, const StreamType& s);

// The maximal prefix of a nullable type.
Prefix done_prefix(const StreamType& s);

// Throws IllTypedEvent naming the index of the first bad event.
Prefix deserialize(const std::vector<Event>& xs, const StreamType& s);
StreamType events_deriv(const std::vector<Event>& xs, const StreamType& s);

// Canonical serialization; parallel parts are interleaved round-robin,
// left first.
std::vector<Event> serialize(const Prefix& p, const StreamType& s);
// Same, with parallel interleavings drawn from rng.
std::vector<Event> serialize_shuffled(const Prefix& p, const StreamType& s, std::mt19937_64& rng);

int event_size(const Event& x);
int size_bound(const StreamType& s);

// Wire format: one JSON object per line.
std::string event_to_json(const Event& x);
Event event_from_json(const std::string& line);
std::string events_to_text(const std::vector<Event>& xs);
// Blank lines are skipped. Throws ParseError with the line number.
std::vector<Event> events_from_text(const std::string& text);

}  // namespace lst
