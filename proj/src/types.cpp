#include "lst/types.hpp"

#include <cctype>
#include <functional>
#include <set>

#include "lst/normctx.hpp"

namespace lst {

const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotBound: return "NotBound";
    case ErrorKind::IllTyped: return "IllTyped";
    case ErrorKind::Incompatible: return "Incompatible";
    case ErrorKind::NotMaximal: return "NotMaximal";
    case ErrorKind::MissingBinding: return "MissingBinding";
    case ErrorKind::HistTypeError: return "HistTypeError";
    case ErrorKind::DivByZero: return "DivByZero";
    case ErrorKind::UnboundVar: return "UnboundVar";
    case ErrorKind::OrderViolation: return "OrderViolation";
    case ErrorKind::InertnessViolation: return "InertnessViolation";
    case ErrorKind::BufferIllTyped: return "BufferIllTyped";
    case ErrorKind::RecOutsideFix: return "RecOutsideFix";
    case ErrorKind::SigMismatch: return "SigMismatch";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::CaptureError: return "CaptureError";
    case ErrorKind::FuelExhausted: return "FuelExhausted";
    case ErrorKind::RuntimeTypeFault: return "RuntimeTypeFault";
    case ErrorKind::IllTypedEvent: return "IllTypedEvent";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ScopeError: return "ScopeError";
    case ErrorKind::UnknownFunction: return "UnknownFunction";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::NonClosedTypeArg: return "NonClosedTypeArg";
    case ErrorKind::MacroCycle: return "MacroCycle";
    case ErrorKind::IoError: return "IoError";
  }
  return "Error";
}

bool Error::is_typing() const {
  switch (kind_) {
    case ErrorKind::UnboundVar:
    case ErrorKind::OrderViolation:
    case ErrorKind::InertnessViolation:
    case ErrorKind::BufferIllTyped:
    case ErrorKind::RecOutsideFix:
    case ErrorKind::SigMismatch:
    case ErrorKind::ShapeMismatch:
    case ErrorKind::TypeMismatch:
    case ErrorKind::HistTypeError:
    case ErrorKind::NotBound:
    case ErrorKind::IllTyped:
      return true;
    default:
      return false;
  }
}

// ---------------------------------------------------------------- StreamType

struct StreamType::Node {
  TypeKind kind;
  StreamType l, r;
  std::string name;
};

namespace {
const StreamType& eps_ref() {
  static const StreamType e;
  return e;
}
}  // namespace

StreamType::StreamType() = default;

StreamType StreamType::eps() { return StreamType(); }
StreamType StreamType::one() {
  static const StreamType t(std::make_shared<const Node>(Node{TypeKind::One, {}, {}, {}}));
  return t;
}
StreamType StreamType::int_() {
  static const StreamType t(std::make_shared<const Node>(Node{TypeKind::Int, {}, {}, {}}));
  return t;
}
StreamType StreamType::bool_() {
  static const StreamType t(std::make_shared<const Node>(Node{TypeKind::Bool, {}, {}, {}}));
  return t;
}
StreamType StreamType::cat(StreamType a, StreamType b) {
  return StreamType(std::make_shared<const Node>(Node{TypeKind::Cat, std::move(a), std::move(b), {}}));
}
StreamType StreamType::plus(StreamType a, StreamType b) {
  return StreamType(std::make_shared<const Node>(Node{TypeKind::Plus, std::move(a), std::move(b), {}}));
}
StreamType StreamType::par(StreamType a, StreamType b) {
  return StreamType(std::make_shared<const Node>(Node{TypeKind::Par, std::move(a), std::move(b), {}}));
}
StreamType StreamType::star(StreamType a) {
  return StreamType(std::make_shared<const Node>(Node{TypeKind::Star, std::move(a), {}, {}}));
}
StreamType StreamType::var(std::string name) {
  return StreamType(std::make_shared<const Node>(Node{TypeKind::Var, {}, {}, std::move(name)}));
}

TypeKind StreamType::kind() const { return node_ ? node_->kind : TypeKind::Eps; }
const StreamType& StreamType::left() const { return node_ ? node_->l : eps_ref(); }
const StreamType& StreamType::right() const { return node_ ? node_->r : eps_ref(); }
const std::string& StreamType::name() const {
  static const std::string none;
  return node_ ? node_->name : none;
}

bool operator==(const StreamType& a, const StreamType& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TypeKind::Cat:
    case TypeKind::Plus:
    case TypeKind::Par:
      return a.left() == b.left() && a.right() == b.right();
    case TypeKind::Star:
      return a.left() == b.left();
    case TypeKind::Var:
      return a.name() == b.name();
    default:
      return true;
  }
}

bool StreamType::is_closed() const {
  switch (kind()) {
    case TypeKind::Var: return false;
    case TypeKind::Cat:
    case TypeKind::Plus:
    case TypeKind::Par: return left().is_closed() && right().is_closed();
    case TypeKind::Star: return left().is_closed();
    default: return true;
  }
}

namespace {

int type_level(const StreamType& s) {
  switch (s.kind()) {
    case TypeKind::Par: return 0;
    case TypeKind::Plus: return 1;
    case TypeKind::Cat: return 2;
    case TypeKind::Star: return 3;
    default: return 4;
  }
}

void print_type(const StreamType& s, int ctx, std::string& out) {
  int lv = type_level(s);
  bool paren = lv < ctx;
  if (paren) out += '(';
  switch (s.kind()) {
    case TypeKind::Eps: out += "Eps"; break;
    case TypeKind::One: out += "1"; break;
    case TypeKind::Int: out += "Int"; break;
    case TypeKind::Bool: out += "Bool"; break;
    case TypeKind::Var: out += s.name(); break;
    case TypeKind::Star:
      print_type(s.left(), 4, out);
      out += '*';
      break;
    case TypeKind::Cat:
    case TypeKind::Plus:
    case TypeKind::Par: {
      const char* op = s.kind() == TypeKind::Cat ? " . " : s.kind() == TypeKind::Plus ? " + " : " || ";
      print_type(s.left(), lv + 1, out);
      out += op;
      print_type(s.right(), lv, out);
      break;
    }
  }
  if (paren) out += ')';
}

}  // namespace

std::string StreamType::str() const {
  std::string out;
  print_type(*this, 0, out);
  return out;
}

bool nullable(const StreamType& s) {
  switch (s.kind()) {
    case TypeKind::Eps: return true;
    case TypeKind::Par: return nullable(s.left()) && nullable(s.right());
    default: return false;
  }
}

StreamType subst_type(const StreamType& s, const std::map<std::string, StreamType>& sub) {
  switch (s.kind()) {
    case TypeKind::Var: {
      auto it = sub.find(s.name());
      return it == sub.end() ? s : it->second;
    }
    case TypeKind::Cat: return StreamType::cat(subst_type(s.left(), sub), subst_type(s.right(), sub));
    case TypeKind::Plus: return StreamType::plus(subst_type(s.left(), sub), subst_type(s.right(), sub));
    case TypeKind::Par: return StreamType::par(subst_type(s.left(), sub), subst_type(s.right(), sub));
    case TypeKind::Star: return StreamType::star(subst_type(s.left(), sub));
    default: return s;
  }
}

// ------------------------------------------------------------ type parsing

namespace {

struct TypeLexer {
  const std::string& src;
  size_t pos = 0;

  explicit TypeLexer(const std::string& s) : src(s) {}

  void skip() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }
  bool at_end() {
    skip();
    return pos >= src.size();
  }
  bool eat(const std::string& tok) {
    skip();
    if (src.compare(pos, tok.size(), tok) == 0) {
      pos += tok.size();
      return true;
    }
    return false;
  }
  bool peek(const std::string& tok) {
    skip();
    return src.compare(pos, tok.size(), tok) == 0;
  }
  std::string ident() {
    skip();
    size_t b = pos;
    while (pos < src.size() && (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_' || src[pos] == '\''))
      ++pos;
    return src.substr(b, pos - b);
  }
  [[noreturn]] void error(const std::string& what) {
    fail(ErrorKind::ParseError, what + " at offset " + std::to_string(pos) + " in `" + src + "`");
  }

  StreamType parse_par() {
    StreamType a = parse_plus();
    if (eat("||") || eat("‖")) return StreamType::par(a, parse_par());
    return a;
  }
  StreamType parse_plus() {
    StreamType a = parse_cat();
    if (eat("+")) return StreamType::plus(a, parse_plus());
    return a;
  }
  StreamType parse_cat() {
    StreamType a = parse_post();
    if (eat(".") || eat("·")) return StreamType::cat(a, parse_cat());
    return a;
  }
  StreamType parse_post() {
    StreamType a = parse_atom();
    while (eat("*") || eat("★")) a = StreamType::star(a);
    return a;
  }
  StreamType parse_atom() {
    if (eat("(")) {
      StreamType a = parse_par();
      if (!eat(")")) error("expected `)`");
      return a;
    }
    if (eat("ε")) return StreamType::eps();
    skip();
    if (pos < src.size() && src[pos] == '1' &&
        (pos + 1 >= src.size() || !std::isalnum(static_cast<unsigned char>(src[pos + 1])))) {
      ++pos;
      return StreamType::one();
    }
    std::string id = ident();
    if (id.empty()) error("expected a type");
    if (id == "Eps") return StreamType::eps();
    if (id == "Int") return StreamType::int_();
    if (id == "Bool") return StreamType::bool_();
    if (std::isdigit(static_cast<unsigned char>(id[0]))) error("unexpected number `" + id + "`");
    return StreamType::var(id);
  }

  BunchedContext parse_comma() {
    BunchedContext a = parse_semic();
    if (eat(",")) return BunchedContext::comma(a, parse_comma());
    return a;
  }
  BunchedContext parse_semic() {
    BunchedContext a = parse_catom();
    if (eat(";")) return BunchedContext::semic(a, parse_semic());
    return a;
  }
  BunchedContext parse_catom() {
    if (eat("(")) {
      if (eat(")")) return BunchedContext::empty();
      BunchedContext a = parse_comma();
      if (!eat(")")) error("expected `)`");
      return a;
    }
    if (eat("·")) return BunchedContext::empty();
    std::string x = ident();
    if (x.empty()) error("expected a binding");
    if (!eat(":")) error("expected `:`");
    return BunchedContext::bind(x, parse_par());
  }
};

}  // namespace

StreamType parse_type(const std::string& text) {
  TypeLexer lx(text);
  StreamType t = lx.parse_par();
  if (!lx.at_end()) lx.error("trailing input");
  return t;
}

BunchedContext parse_ctx(const std::string& text) {
  TypeLexer lx(text);
  if (lx.at_end()) return BunchedContext::empty();
  BunchedContext g = lx.parse_comma();
  if (!lx.at_end()) lx.error("trailing input");
  return g;
}

// ------------------------------------------------------------------ HistType

struct HistType::Node {
  HistKind kind;
  HistType a, b;
};

namespace {
const HistType& unit_ref() {
  static const HistType u;
  return u;
}
}  // namespace

HistType::HistType() = default;
HistType HistType::unit() { return HistType(); }
HistType HistType::int_() {
  static const HistType t(std::make_shared<const Node>(Node{HistKind::Int, {}, {}}));
  return t;
}
HistType HistType::bool_() {
  static const HistType t(std::make_shared<const Node>(Node{HistKind::Bool, {}, {}}));
  return t;
}
HistType HistType::prod(HistType a, HistType b) {
  return HistType(std::make_shared<const Node>(Node{HistKind::Prod, std::move(a), std::move(b)}));
}
HistType HistType::sum(HistType a, HistType b) {
  return HistType(std::make_shared<const Node>(Node{HistKind::Sum, std::move(a), std::move(b)}));
}
HistType HistType::list(HistType a) {
  return HistType(std::make_shared<const Node>(Node{HistKind::List, std::move(a), {}}));
}
HistKind HistType::kind() const { return node_ ? node_->kind : HistKind::Unit; }
const HistType& HistType::a() const { return node_ ? node_->a : unit_ref(); }
const HistType& HistType::b() const { return node_ ? node_->b : unit_ref(); }

bool operator==(const HistType& x, const HistType& y) {
  if (x.node_ == y.node_) return true;
  if (x.kind() != y.kind()) return false;
  switch (x.kind()) {
    case HistKind::Prod:
    case HistKind::Sum: return x.a() == y.a() && x.b() == y.b();
    case HistKind::List: return x.a() == y.a();
    default: return true;
  }
}

std::string HistType::str() const {
  switch (kind()) {
    case HistKind::Unit: return "Unit";
    case HistKind::Int: return "Int";
    case HistKind::Bool: return "Bool";
    case HistKind::Prod: return "(" + a().str() + " * " + b().str() + ")";
    case HistKind::Sum: return "(" + a().str() + " + " + b().str() + ")";
    case HistKind::List: return "[" + a().str() + "]";
  }
  return "?";
}

HistType flatten_type(const StreamType& s) {
  switch (s.kind()) {
    case TypeKind::Eps:
    case TypeKind::One: return HistType::unit();
    case TypeKind::Int: return HistType::int_();
    case TypeKind::Bool: return HistType::bool_();
    case TypeKind::Cat:
    case TypeKind::Par: return HistType::prod(flatten_type(s.left()), flatten_type(s.right()));
    case TypeKind::Plus: return HistType::sum(flatten_type(s.left()), flatten_type(s.right()));
    case TypeKind::Star: return HistType::list(flatten_type(s.left()));
    case TypeKind::Var: fail(ErrorKind::NonClosedTypeArg, "cannot flatten type variable " + s.name());
  }
  return HistType::unit();
}

// ------------------------------------------------------------ BunchedContext

struct BunchedContext::Node {
  CtxKind kind;
  std::string var;
  StreamType type;
  BunchedContext l, r;
};

namespace {
const BunchedContext& empty_ref() {
  static const BunchedContext e;
  return e;
}
}  // namespace

BunchedContext::BunchedContext() = default;
BunchedContext BunchedContext::empty() { return BunchedContext(); }
BunchedContext BunchedContext::bind(std::string x, StreamType s) {
  return BunchedContext(std::make_shared<const Node>(Node{CtxKind::Bind, std::move(x), std::move(s), {}, {}}));
}
BunchedContext BunchedContext::comma(BunchedContext a, BunchedContext b) {
  return BunchedContext(std::make_shared<const Node>(Node{CtxKind::Comma, {}, {}, std::move(a), std::move(b)}));
}
BunchedContext BunchedContext::semic(BunchedContext a, BunchedContext b) {
  return BunchedContext(std::make_shared<const Node>(Node{CtxKind::Semic, {}, {}, std::move(a), std::move(b)}));
}

CtxKind BunchedContext::kind() const { return node_ ? node_->kind : CtxKind::Empty; }
const std::string& BunchedContext::var() const {
  static const std::string none;
  return node_ ? node_->var : none;
}
const StreamType& BunchedContext::type() const { return node_ ? node_->type : eps_ref(); }
const BunchedContext& BunchedContext::left() const { return node_ ? node_->l : empty_ref(); }
const BunchedContext& BunchedContext::right() const { return node_ ? node_->r : empty_ref(); }

bool operator==(const BunchedContext& a, const BunchedContext& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case CtxKind::Empty: return true;
    case CtxKind::Bind: return a.var() == b.var() && a.type() == b.type();
    default: return a.left() == b.left() && a.right() == b.right();
  }
}

std::vector<std::string> BunchedContext::vars() const {
  std::vector<std::string> out;
  std::function<void(const BunchedContext&)> go = [&](const BunchedContext& g) {
    switch (g.kind()) {
      case CtxKind::Empty: break;
      case CtxKind::Bind: out.push_back(g.var()); break;
      default:
        go(g.left());
        go(g.right());
    }
  };
  go(*this);
  return out;
}

bool BunchedContext::binds(const std::string& x) const {
  switch (kind()) {
    case CtxKind::Empty: return false;
    case CtxKind::Bind: return var() == x;
    default: return left().binds(x) || right().binds(x);
  }
}

std::string BunchedContext::str() const {
  switch (kind()) {
    case CtxKind::Empty: return "·";
    case CtxKind::Bind: return var() + " : " + type().str();
    case CtxKind::Comma: return "(" + left().str() + ", " + right().str() + ")";
    case CtxKind::Semic: return "(" + left().str() + "; " + right().str() + ")";
  }
  return "?";
}

const BunchedContext& BunchedContext::at(const CtxPath& path) const {
  const BunchedContext* cur = this;
  for (Side s : path) {
    if (cur->kind() != CtxKind::Comma && cur->kind() != CtxKind::Semic)
      fail(ErrorKind::NotBound, "context path runs past a leaf");
    cur = s == Side::Left ? &cur->left() : &cur->right();
  }
  return *cur;
}

BunchedContext BunchedContext::fill(const CtxPath& path, const BunchedContext& delta) const {
  std::function<BunchedContext(const BunchedContext&, size_t)> go = [&](const BunchedContext& g, size_t i) {
    if (i == path.size()) return delta;
    if (g.kind() == CtxKind::Comma) {
      return path[i] == Side::Left ? comma(go(g.left(), i + 1), g.right()) : comma(g.left(), go(g.right(), i + 1));
    }
    if (g.kind() == CtxKind::Semic) {
      return path[i] == Side::Left ? semic(go(g.left(), i + 1), g.right()) : semic(g.left(), go(g.right(), i + 1));
    }
    fail(ErrorKind::NotBound, "context path runs past a leaf");
  };
  return go(*this, 0);
}

bool nullable_ctx(const BunchedContext& g) {
  switch (g.kind()) {
    case CtxKind::Empty: return true;
    case CtxKind::Bind: return nullable(g.type());
    default: return nullable_ctx(g.left()) && nullable_ctx(g.right());
  }
}

HistContext flatten_ctx(const BunchedContext& g) {
  HistContext out;
  std::function<void(const BunchedContext&)> go = [&](const BunchedContext& c) {
    switch (c.kind()) {
      case CtxKind::Empty: break;
      case CtxKind::Bind: out.emplace_back(c.var(), flatten_type(c.type())); break;
      default:
        go(c.left());
        go(c.right());
    }
  };
  go(g);
  return out;
}

std::pair<CtxPath, StreamType> ctx_lookup(const BunchedContext& g, const std::string& x) {
  CtxPath path;
  std::function<const StreamType*(const BunchedContext&)> go = [&](const BunchedContext& c) -> const StreamType* {
    switch (c.kind()) {
      case CtxKind::Empty: return nullptr;
      case CtxKind::Bind: return c.var() == x ? &c.type() : nullptr;
      default:
        path.push_back(Side::Left);
        if (auto* t = go(c.left())) return t;
        path.back() = Side::Right;
        if (auto* t = go(c.right())) return t;
        path.pop_back();
        return nullptr;
    }
  };
  const StreamType* t = go(g);
  if (!t) fail(ErrorKind::NotBound, "variable " + x + " is not bound in " + g.str());
  return {path, *t};
}

bool subtype_ctx(const BunchedContext& g, const BunchedContext& d) {
  // Weakening only ever deletes bindings and the remaining rules are the
  // normal-form equations, so Γ ≤ Δ holds exactly when Γ restricted to the
  // variables of Δ normalizes to Δ.
  NormCtx nd = NormCtx::from(d);
  NormCtx ng = NormCtx::from(g);
  VarSet keep;
  for (auto& v : d.vars()) {
    if (!g.binds(v)) return false;
    keep.insert(v);
  }
  return ng.restrict(keep) == nd;
}

}  // namespace lst
