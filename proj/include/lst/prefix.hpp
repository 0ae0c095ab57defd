#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>

#include "lst/hist.hpp"
#include "lst/types.hpp"

namespace lst {

enum class PKind {
  EpsEmp, OneEmp, OneFull, IntEmp, IntFull, BoolEmp, BoolFull,
  ParP, CatPA, CatPB, SumPEmp, SumPA, SumPB, StarEmp, StarDone, StpA, StpB
};

// Structured partial stream values. Construction is unchecked; see
// prefix_has_type.
class Prefix {
 public:
  Prefix();  // epsEmp
  static Prefix eps_emp();
  static Prefix one_emp();
  static Prefix one_full();
  static Prefix int_emp();
  static Prefix int_full(std::int64_t n);
  static Prefix bool_emp();
  static Prefix bool_full(bool b);
  static Prefix par(Prefix a, Prefix b);
  static Prefix cat_a(Prefix a);
  static Prefix cat_b(Prefix a, Prefix b);
  static Prefix sum_emp();
  static Prefix sum_a(Prefix a);
  static Prefix sum_b(Prefix a);
  static Prefix star_emp();
  static Prefix star_done();
  static Prefix stp_a(Prefix a);
  static Prefix stp_b(Prefix a, Prefix b);

  PKind kind() const;
  const Prefix& a() const;  // first child
  const Prefix& b() const;  // second child
  std::int64_t int_val() const;
  bool bool_val() const;
  size_t size() const;  // constructor count; epsEmp is 0
  size_t hash() const;  // structural

  std::string str() const;
  friend bool operator==(const Prefix& x, const Prefix& y);
  friend bool operator!=(const Prefix& x, const Prefix& y) { return !(x == y); }

  struct Node;

 private:
  explicit Prefix(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

using Environment = std::map<std::string, Prefix>;

bool prefix_has_type(const Prefix& p, const StreamType& s);
bool is_maximal(const Prefix& p);
bool is_empty(const Prefix& p);

Prefix emp(const StreamType& s);
Environment emp_ctx(const BunchedContext& g);

// Throw IllTyped when p does not type at s.
StreamType deriv_type(const Prefix& p, const StreamType& s);
BunchedContext deriv_ctx(const Environment& eta, const BunchedContext& g);

// Throws Incompatible when no concatenation rule applies.
Prefix concat_prefix(const Prefix& p, const Prefix& p2);
std::optional<Prefix> try_concat_prefix(const Prefix& p, const Prefix& p2);
Environment concat_env(const Environment& eta, const Environment& eta2);

bool env_has_type(const Environment& eta, const BunchedContext& g);
bool maximal_on(const Environment& eta, const std::set<std::string>& vars);
bool empty_on(const Environment& eta, const std::set<std::string>& vars);
bool agree(const Environment& eta, const Environment& eta2, const BunchedContext& d, const BunchedContext& d2);

HistValue flatten_prefix(const Prefix& p, const StreamType& s);
Prefix value_to_prefix(const HistValue& v, const StreamType& s);

std::string env_str(const Environment& eta);
std::set<std::string> ctx_var_set(const BunchedContext& g);

}  // namespace lst
