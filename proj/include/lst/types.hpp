#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lst/error.hpp"

namespace lst {

enum class TypeKind { Eps, One, Int, Bool, Cat, Plus, Par, Star, Var };

// Stream types. Immutable, shared structure; equality is syntactic.
class StreamType {
 public:
  StreamType();  // ε

  static StreamType eps();
  static StreamType one();
  static StreamType int_();
  static StreamType bool_();
  static StreamType cat(StreamType a, StreamType b);
  static StreamType plus(StreamType a, StreamType b);
  static StreamType par(StreamType a, StreamType b);
  static StreamType star(StreamType a);
  static StreamType var(std::string name);

  TypeKind kind() const;
  const StreamType& left() const;   // Cat/Plus/Par left, Star body
  const StreamType& right() const;  // Cat/Plus/Par right
  const StreamType& body() const { return left(); }
  const std::string& name() const;

  bool is_closed() const;
  std::string str() const;

  friend bool operator==(const StreamType& a, const StreamType& b);
  friend bool operator!=(const StreamType& a, const StreamType& b) { return !(a == b); }

  struct Node;

 private:
  explicit StreamType(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

bool nullable(const StreamType& s);

// Parses the textual syntax `Eps | 1 | Int | Bool | s . t | s + t | s || t | s* | (s)`.
// Identifiers other than the keywords are type variables.
StreamType parse_type(const std::string& text);

StreamType subst_type(const StreamType& s, const std::map<std::string, StreamType>& sub);

enum class HistKind { Unit, Int, Bool, Prod, Sum, List };

class HistType {
 public:
  HistType();  // Unit
  static HistType unit();
  static HistType int_();
  static HistType bool_();
  static HistType prod(HistType a, HistType b);
  static HistType sum(HistType a, HistType b);
  static HistType list(HistType a);

  HistKind kind() const;
  const HistType& a() const;
  const HistType& b() const;
  std::string str() const;

  friend bool operator==(const HistType& x, const HistType& y);
  friend bool operator!=(const HistType& x, const HistType& y) { return !(x == y); }

  struct Node;

 private:
  explicit HistType(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

using HistContext = std::vector<std::pair<std::string, HistType>>;

HistType flatten_type(const StreamType& s);

enum class CtxKind { Empty, Bind, Comma, Semic };
enum class Side { Left, Right };
using CtxPath = std::vector<Side>;

class BunchedContext {
 public:
  BunchedContext();  // ·
  static BunchedContext empty();
  static BunchedContext bind(std::string x, StreamType s);
  static BunchedContext comma(BunchedContext a, BunchedContext b);
  static BunchedContext semic(BunchedContext a, BunchedContext b);

  CtxKind kind() const;
  const std::string& var() const;
  const StreamType& type() const;
  const BunchedContext& left() const;
  const BunchedContext& right() const;

  std::vector<std::string> vars() const;  // left-to-right
  bool binds(const std::string& x) const;
  std::string str() const;

  const BunchedContext& at(const CtxPath& path) const;
  BunchedContext fill(const CtxPath& path, const BunchedContext& delta) const;

  friend bool operator==(const BunchedContext& a, const BunchedContext& b);
  friend bool operator!=(const BunchedContext& a, const BunchedContext& b) { return !(a == b); }

  struct Node;

 private:
  explicit BunchedContext(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

bool nullable_ctx(const BunchedContext& g);
HistContext flatten_ctx(const BunchedContext& g);

// Returns the path to x's binding and its type; throws NotBound.
std::pair<CtxPath, StreamType> ctx_lookup(const BunchedContext& g, const std::string& x);

// Γ ≤ Δ under the context subtyping rules (with associativity of both
// formers). Decided through normal forms, see NormCtx.
bool subtype_ctx(const BunchedContext& g, const BunchedContext& d);

// Parses `x : s, (y : t ; z : r)`; `;` binds tighter than `,`.
BunchedContext parse_ctx(const std::string& text);

}  // namespace lst
