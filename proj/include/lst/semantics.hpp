#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "lst/core.hpp"

namespace lst {

constexpr std::int64_t kDefaultFuel = 10000;

struct StepResult {
  Prefix output;
  Term residual;
  std::int64_t fuel_used = 0;
};

struct ArgsStepResult {
  Environment env;
  Args residual;
  std::int64_t fuel_used = 0;
};

// One reactive step. Fuel is spent only by fix unfolds; running out throws
// FuelExhausted.
StepResult step(const Environment& eta, const Term& e, std::int64_t fuel);

ArgsStepResult step_args(const Environment& eta, const Args& a, const BunchedContext& target, std::int64_t fuel);

struct RunOptions {
  std::int64_t fuel_per_step = kDefaultFuel;
  // Re-typecheck every residual at the derivative context and type.
  bool debug_types = false;
  // Stands in for step in incremental runs (harness self-tests).
  std::function<StepResult(const Environment&, const Term&, std::int64_t)> stepper;
};

struct RunResult {
  std::vector<Prefix> outputs;
  Term residual;
  BunchedContext ctx;   // remaining input context
  StreamType type;      // remaining output type
};

// Folds step over the inputs. Errors carry the index of the failing step.
RunResult run_incremental(const Term& e, const BunchedContext& gamma, const StreamType& s,
                          const std::vector<Environment>& inputs, const RunOptions& opts = {});

// Single step on the whole input; the reference the incremental runs are
// compared against.
Prefix run_batch_oracle(const Term& e, const Environment& total, std::int64_t fuel = kDefaultFuel);

// Concatenation of a run's outputs.
Prefix concat_outputs(const std::vector<Prefix>& outs, const StreamType& s);

}  // namespace lst
