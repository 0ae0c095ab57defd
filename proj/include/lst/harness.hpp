#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "lst/events.hpp"
#include "lst/semantics.hpp"

namespace lst {

// Random well-typed prefix of s. `budget` bounds star lengths and nesting.
Prefix random_prefix(const StreamType& s, std::mt19937_64& rng, int budget, bool maximal);
// Random environment for g that respects the semicolon order condition.
Environment random_env(const BunchedContext& g, std::mt19937_64& rng, int budget, bool maximal);

using ChannelEvents = std::map<std::string, std::vector<Event>>;

ChannelEvents env_to_events(const Environment& eta, const BunchedContext& g);

enum class ChunkMode { Whole, Event, Fixed, Random };
struct Chunking {
  ChunkMode mode = ChunkMode::Whole;
  size_t k = 1;
  std::uint64_t seed = 0;
};
// whole | event | k=N | random:SEED
Chunking parse_chunking(const std::string& text);

// Groups channel events into step environments. Absent channels are padded
// with empty prefixes; events for a channel to the right of a semicolon are
// held back until everything to its left is complete. Throws
// IllTypedEvent when the inputs cannot be delivered in a well-typed order.
std::vector<Environment> chunk_inputs(const ChannelEvents& in, const BunchedContext& g, const Chunking& how);

// Pointwise concatenation of a run's inputs, tracking derivatives.
Environment concat_inputs(const std::vector<Environment>& chunks, const BunchedContext& g);

// Every split eta = first . second with both halves well typed. Exhaustive
// when there are at most `limit`, otherwise `samples` random ones.
struct Split {
  Environment first, second;
  std::vector<size_t> cuts;  // event index per channel, in channel order
};
std::vector<Split> two_way_splits(const Environment& eta, const BunchedContext& g, size_t limit, size_t samples,
                                  std::mt19937_64& rng);

struct Comparison {
  bool ok = true;
  std::string detail;
};

// Runs the chunks incrementally and compares concatenated outputs and the
// final residual against one step on the concatenated input.
Comparison compare_with_batch(const Term& e, const BunchedContext& g, const StreamType& s,
                              const std::vector<Environment>& chunks, const RunOptions& opts = {});

// Two orders of feeding the halves of a comma context.
Comparison check_determinism(const Term& e, const BunchedContext& g, const StreamType& s, const Environment& eta,
                             std::int64_t fuel = kDefaultFuel);

struct FuzzReport {
  size_t trials = 0;
  size_t failures = 0;
  std::string first_failure;  // reproduction info
};

// Random inputs and random chunkings per trial, each compared with the
// batch step. Trials run on a worker pool, so opts.stepper must be safe to
// call concurrently. The report does not depend on scheduling.
FuzzReport fuzz_entry(const Term& e, const BunchedContext& g, const StreamType& s, size_t trials,
                      std::uint64_t seed, int budget, const RunOptions& opts = {});

}  // namespace lst
