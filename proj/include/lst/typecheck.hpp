#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lst/core.hpp"
#include "lst/normctx.hpp"

namespace lst {

// Ω | Γ → s @ i, the signature of the recursive definition being checked.
struct RecSig {
  HistContext omega;
  BunchedContext gamma;
  StreamType ret;
  Inert i = Inert::I;
};

struct Typing {
  StreamType type;
  Inert inert = Inert::I;
};

// Bidirectional checker over normalized contexts.
//
// In strict mode terms are checked as given. In annotate mode missing
// annotations and buffers are filled in, jumpy lets become argument lets,
// and the rebuilt term is returned. Fix definitions are memoized per
// definition, so one checker can be reused across the steps of a run.
class TypeChecker {
 public:
  explicit TypeChecker(bool annotate = false);
  ~TypeChecker();
  TypeChecker(const TypeChecker&) = delete;
  TypeChecker& operator=(const TypeChecker&) = delete;

  Typing check(const HistContext& omega, const BunchedContext& gamma, const std::optional<RecSig>& sig,
               const Term& e, const std::optional<StreamType>& expected = std::nullopt);

  // Annotate mode only: the rebuilt term of the last successful check.
  const Term& result() const;

  Inert check_args(const HistContext& omega, const BunchedContext& gamma, const std::optional<RecSig>& sig,
                   const Args& a, const BunchedContext& target);

  // Checks (and in annotate mode rewrites) a recursive definition.
  std::pair<RecDefP, Inert> check_def(const RecDefP& def);

  // Unbounded-buffer warnings collected so far.
  const std::vector<std::string>& warnings() const;

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

Typing core_typecheck(const HistContext& omega, const BunchedContext& gamma, const std::optional<RecSig>& sig,
                      const Term& e, const std::optional<StreamType>& expected = std::nullopt);

Inert check_args(const HistContext& omega, const BunchedContext& gamma, const std::optional<RecSig>& sig,
                 const Args& a, const BunchedContext& target);

struct Annotated {
  Term term;
  Typing typing;
  std::vector<std::string> warnings;
};

Annotated annotate(const HistContext& omega, const BunchedContext& gamma, const Term& e,
                   const std::optional<StreamType>& expected = std::nullopt);

// Stream type used for a historical program with no expected type.
StreamType default_stream_type(const HistType& a);

}  // namespace lst
