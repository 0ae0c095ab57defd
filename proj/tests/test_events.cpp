#include <doctest.h>

#include "lst/events.hpp"
#include "oracles.hpp"

using namespace lst;

namespace {
StreamType T(const char* s) { return parse_type(s); }
}  // namespace

TEST_CASE("event typing") {
  Event b = Event::punc_b();
  CHECK(event_has_type(b, T("1*")));
  CHECK(event_deriv(b, T("1*")) == T("1 . 1*"));
  CHECK(event_has_type(Event::cat_punc(), T("Eps . 1")));
  CHECK(event_deriv(Event::cat_punc(), T("Eps . 1")) == T("1"));
  CHECK_FALSE(event_has_type(Event::one(), T("Eps")));
  CHECK_FALSE(event_has_type(Event::cat_punc(), T("1 . 1")));
}

TEST_CASE("deserialize") {
  CHECK(deserialize({}, T("Int . Bool")) == emp(T("Int . Bool")));
  CHECK(deserialize({Event::punc_a()}, T("1*")) == Prefix::star_done());
  std::vector<Event> xs{Event::punc_b(), Event::one().wrapped(EvWrap::CatA), Event::cat_punc(), Event::punc_a()};
  CHECK(deserialize(xs, T("1*")) == Prefix::stp_b(Prefix::one_full(), Prefix::star_done()));
  try {
    deserialize({Event::one(), Event::one()}, T("1"));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IllTypedEvent);
  }
}

TEST_CASE("serialize") {
  CHECK(serialize(emp(T("1 || Int*")), T("1 || Int*")).empty());
  CHECK(serialize(Prefix::one_full(), T("1")) == std::vector<Event>{Event::one()});
  auto xs = serialize(Prefix::par(Prefix::one_full(), Prefix::one_full()), T("1 || 1"));
  CHECK(xs == std::vector<Event>{Event::one().wrapped(EvWrap::ParA), Event::one().wrapped(EvWrap::ParB)});
}

TEST_CASE("sizes") {
  CHECK(size_bound(StreamType::eps()) == 0);
  CHECK(size_bound(T("1 || 1")) == 2);
  CHECK(event_size(Event::one().wrapped(EvWrap::CatA)) == 2);
}

TEST_CASE("codec round trip at depth 1") {
  std::mt19937_64 rng(9);
  for (auto& s : oracle::types_to_depth(1)) {
    for (auto& p : oracle::all_prefixes(s, 2)) {
      auto xs = serialize(p, s);
      CHECK(xs.size() == oracle::event_count(p));
      CHECK(deserialize(xs, s) == p);
      CHECK(deserialize(serialize_shuffled(p, s, rng), s) == p);
      for (auto& x : xs) CHECK(event_size(x) <= size_bound(s));
    }
  }
}

TEST_CASE("wire format") {
  Event x = Event::int_(52).wrapped(EvWrap::CatA).wrapped(EvWrap::ParB);
  std::string line = event_to_json(x);
  CHECK(line == R"({"path":["parB","catA","int"],"payload":52})");
  CHECK(event_from_json(line) == x);
  CHECK(event_from_json(R"({"path":["puncA"],"payload":null})") == Event::punc_a());
  CHECK(event_from_json(R"({"path":["bool"],"payload":true})") == Event::bool_(true));
  std::vector<Event> xs{Event::punc_b(), Event::bool_(false).wrapped(EvWrap::CatA), Event::cat_punc()};
  CHECK(events_from_text(events_to_text(xs) + "\n\n") == xs);
  try {
    events_from_text("{\"path\":[\"int\"],\"payload\":1}\nnot json\n");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ParseError);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("deserialize agrees with folding single-event prefixes") {
  std::mt19937_64 rng(10);
  auto fold = [](const std::vector<Event>& xs, const StreamType& s) {
    Prefix acc = emp(s);
    StreamType cur = s;
    for (auto& x : xs) {
      acc = concat_prefix(acc, event_to_prefix(x, cur));
      cur = event_deriv(x, cur);
    }
    return acc;
  };
  auto types = oracle::sample_types(2, 300, 11);
  for (auto& t : oracle::types_to_depth(1)) types.push_back(t);
  for (auto& s : types) {
    for (auto& p : oracle::all_prefixes(s, 3, 60)) {
      auto xs = serialize_shuffled(p, s, rng);
      // Every prefix of the event list, not just complete ones.
      for (size_t n = 0; n <= xs.size(); ++n) {
        std::vector<Event> head(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(n));
        CHECK(deserialize(head, s) == fold(head, s));
      }
    }
  }
}
