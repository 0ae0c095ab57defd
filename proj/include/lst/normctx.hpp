#pragma once

#include <set>
#include <string>
#include <vector>

#include "lst/types.hpp"

namespace lst {

using VarSet = std::set<std::string>;

// A bunched context modulo unit laws, associativity of both formers and
// exchange for comma. Seq children are never Seq or Empty; Par children are
// never Par or Empty and are sorted by their least variable name.
struct NormCtx {
  enum class Kind { Empty, Var, Seq, Par };

  Kind kind = Kind::Empty;
  std::string name;
  StreamType type;
  std::vector<NormCtx> kids;

  static NormCtx empty() { return NormCtx{}; }
  static NormCtx var(std::string x, StreamType s);
  static NormCtx seq(std::vector<NormCtx> parts);
  static NormCtx par(std::vector<NormCtx> parts);
  static NormCtx from(const BunchedContext& g);

  BunchedContext to_ctx() const;
  std::vector<std::string> vars() const;
  void collect_vars(std::vector<std::string>& out) const;
  bool has(const std::string& x) const;
  const StreamType* lookup(const std::string& x) const;
  const std::string& min_var() const;
  std::string str() const;

  NormCtx restrict(const VarSet& keep) const;
  NormCtx replace(const std::string& x, const NormCtx& sub) const;

  friend bool operator==(const NormCtx& a, const NormCtx& b);
  friend bool operator!=(const NormCtx& a, const NormCtx& b) { return !(a == b); }
};

// Γ ≤ Γ1;Γ2 with v1 ⊆ Γ1 and v2 ⊆ Γ2. The context must already be restricted
// to v1 ∪ v2. Throws OrderViolation when no split exists.
std::pair<NormCtx, NormCtx> split_seq(const NormCtx& g, const VarSet& v1, const VarSet& v2);

// Finds Γ(Δ) with vars(Δ) = s (s nonempty, g restricted) and returns Γ(x:t).
// Throws OrderViolation if s does not form a sub-bunch.
NormCtx extract_module(const NormCtx& g, const VarSet& s, const std::string& x, const StreamType& t);

// Candidate contexts Γ(x:t) for every practical hole position in g.
std::vector<NormCtx> unit_placements(const NormCtx& g, const std::string& x, const StreamType& t);

}  // namespace lst
