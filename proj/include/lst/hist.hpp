#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lst/types.hpp"

namespace lst {

enum class ValKind { Unit, Int, Bool, Pair, Inl, Inr, List };

class HistValue {
 public:
  HistValue();  // unit
  static HistValue unit();
  static HistValue int_(std::int64_t n);
  static HistValue bool_(bool b);
  static HistValue pair(HistValue a, HistValue b);
  static HistValue inl(HistValue a);
  static HistValue inr(HistValue a);
  static HistValue list(std::vector<HistValue> items);

  ValKind kind() const;
  std::int64_t int_val() const;
  bool bool_val() const;
  const HistValue& a() const;  // pair fst, inl/inr payload
  const HistValue& b() const;  // pair snd
  const std::vector<HistValue>& items() const;

  std::string str() const;
  friend bool operator==(const HistValue& x, const HistValue& y);
  friend bool operator!=(const HistValue& x, const HistValue& y) { return !(x == y); }

  struct Node;

 private:
  explicit HistValue(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

bool value_has_type(const HistValue& v, const HistType& a);

enum class HistOp { Add, Sub, Mul, Div, Lt, Le, Eq, Gt, Ge };

enum class HKind {
  Var, Unit, Int, Bool, Pair, Fst, Snd, Inl, Inr, Case,
  Nil, Cons, Fold, Arith, Cmp, If, Len, Init
};

// History-language terms. Case binds x in kids[1] and y in kids[2]; Fold
// binds x (element) and y (accumulator) in kids[2].
class HistTerm {
 public:
  HistTerm();  // unit
  static HistTerm var(std::string x);
  static HistTerm unit();
  static HistTerm int_(std::int64_t n);
  static HistTerm bool_(bool b);
  static HistTerm pair(HistTerm a, HistTerm b);
  static HistTerm fst(HistTerm a);
  static HistTerm snd(HistTerm a);
  static HistTerm inl(HistTerm a);
  static HistTerm inr(HistTerm a);
  static HistTerm case_(HistTerm scrut, std::string xl, HistTerm bl, std::string xr, HistTerm br);
  static HistTerm nil();
  static HistTerm cons(HistTerm hd, HistTerm tl);
  static HistTerm fold(HistTerm list, HistTerm init, std::string x, std::string acc, HistTerm body);
  static HistTerm arith(HistOp op, HistTerm a, HistTerm b);
  static HistTerm cmp(HistOp op, HistTerm a, HistTerm b);
  static HistTerm if_(HistTerm c, HistTerm t, HistTerm e);
  static HistTerm len(HistTerm a);
  static HistTerm init(HistTerm a);

  HKind kind() const;
  const std::string& name() const;  // Var
  const std::string& x() const;     // Case left binder, Fold element binder
  const std::string& y() const;     // Case right binder, Fold accumulator
  std::int64_t int_val() const;
  bool bool_val() const;
  HistOp op() const;
  const std::vector<HistTerm>& kids() const;
  const HistTerm& kid(size_t i) const { return kids()[i]; }

  std::string str() const;
  friend bool operator==(const HistTerm& a, const HistTerm& b);
  friend bool operator!=(const HistTerm& a, const HistTerm& b) { return !(a == b); }

  struct Node;

 private:
  explicit HistTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

using HistSubst = std::map<std::string, HistValue>;

HistType hist_typecheck(const HistContext& omega, const HistTerm& m);
// Checks m against a known type; needed for terms like `nil` whose type is
// not determined by the term alone.
void hist_check(const HistContext& omega, const HistTerm& m, const HistType& expected);

HistValue hist_eval(const HistTerm& m);
HistValue hist_eval(const HistTerm& m, const HistSubst& env);

HistTerm value_to_term(const HistValue& v);
HistTerm hist_subst(const HistTerm& m, const HistSubst& theta);
std::set<std::string> hist_fv(const HistTerm& m);

// Parsing of the brace syntax. A TokenStream-level entry point lives in the
// frontend; this one parses a whole string.
HistTerm parse_hist(const std::string& text);

}  // namespace lst
