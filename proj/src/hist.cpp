#include "lst/hist.hpp"

#include <functional>
#include <sstream>

namespace lst {

// ---- values ----

struct HistValue::Node {
  ValKind kind = ValKind::Unit;
  std::int64_t n = 0;
  bool b = false;
  std::vector<HistValue> kids;
};

HistValue::HistValue() : node_(nullptr) {}
HistValue HistValue::unit() { return HistValue(); }

HistValue HistValue::int_(std::int64_t n) {
  auto node = std::make_shared<Node>();
  node->kind = ValKind::Int;
  node->n = n;
  return HistValue(node);
}

HistValue HistValue::bool_(bool b) {
  auto node = std::make_shared<Node>();
  node->kind = ValKind::Bool;
  node->b = b;
  return HistValue(node);
}

HistValue HistValue::pair(HistValue a, HistValue b) {
  auto node = std::make_shared<Node>();
  node->kind = ValKind::Pair;
  node->kids = {std::move(a), std::move(b)};
  return HistValue(node);
}

HistValue HistValue::inl(HistValue a) {
  auto node = std::make_shared<Node>();
  node->kind = ValKind::Inl;
  node->kids = {std::move(a)};
  return HistValue(node);
}

HistValue HistValue::inr(HistValue a) {
  auto node = std::make_shared<Node>();
  node->kind = ValKind::Inr;
  node->kids = {std::move(a)};
  return HistValue(node);
}

HistValue HistValue::list(std::vector<HistValue> items) {
  auto node = std::make_shared<Node>();
  node->kind = ValKind::List;
  node->kids = std::move(items);
  return HistValue(node);
}

ValKind HistValue::kind() const { return node_ ? node_->kind : ValKind::Unit; }
std::int64_t HistValue::int_val() const { return node_ ? node_->n : 0; }
bool HistValue::bool_val() const { return node_ && node_->b; }
const HistValue& HistValue::a() const { return node_->kids.at(0); }
const HistValue& HistValue::b() const { return node_->kids.at(1); }

const std::vector<HistValue>& HistValue::items() const {
  static const std::vector<HistValue> none;
  return node_ ? node_->kids : none;
}

std::string HistValue::str() const {
  switch (kind()) {
    case ValKind::Unit: return "()";
    case ValKind::Int: return std::to_string(int_val());
    case ValKind::Bool: return bool_val() ? "true" : "false";
    case ValKind::Pair: return "(" + a().str() + ", " + b().str() + ")";
    case ValKind::Inl: return "inl " + a().str();
    case ValKind::Inr: return "inr " + a().str();
    case ValKind::List: {
      std::string out = "[";
      for (size_t i = 0; i < items().size(); ++i) {
        if (i) out += ", ";
        out += items()[i].str();
      }
      return out + "]";
    }
  }
  return "?";
}

bool operator==(const HistValue& x, const HistValue& y) {
  if (x.kind() != y.kind()) return false;
  switch (x.kind()) {
    case ValKind::Unit: return true;
    case ValKind::Int: return x.int_val() == y.int_val();
    case ValKind::Bool: return x.bool_val() == y.bool_val();
    default: return x.items() == y.items();
  }
}

bool value_has_type(const HistValue& v, const HistType& a) {
  switch (a.kind()) {
    case HistKind::Unit: return v.kind() == ValKind::Unit;
    case HistKind::Int: return v.kind() == ValKind::Int;
    case HistKind::Bool: return v.kind() == ValKind::Bool;
    case HistKind::Prod:
      return v.kind() == ValKind::Pair && value_has_type(v.a(), a.a()) && value_has_type(v.b(), a.b());
    case HistKind::Sum:
      if (v.kind() == ValKind::Inl) return value_has_type(v.a(), a.a());
      if (v.kind() == ValKind::Inr) return value_has_type(v.a(), a.b());
      return false;
    case HistKind::List:
      if (v.kind() != ValKind::List) return false;
      for (auto& i : v.items())
        if (!value_has_type(i, a.a())) return false;
      return true;
  }
  return false;
}

// ---- terms ----

struct HistTerm::Node {
  HKind kind = HKind::Unit;
  std::string name, x, y;
  std::int64_t n = 0;
  bool b = false;
  HistOp op = HistOp::Add;
  std::vector<HistTerm> kids;
};

namespace {

std::shared_ptr<HistTerm::Node> mk(HKind k, std::vector<HistTerm> kids = {}) {
  auto n = std::make_shared<HistTerm::Node>();
  n->kind = k;
  n->kids = std::move(kids);
  return n;
}

}  // namespace

HistTerm::HistTerm() : node_(nullptr) {}

HistTerm HistTerm::var(std::string x) {
  auto n = mk(HKind::Var);
  n->name = std::move(x);
  return HistTerm(n);
}

HistTerm HistTerm::unit() { return HistTerm(); }

HistTerm HistTerm::int_(std::int64_t v) {
  auto n = mk(HKind::Int);
  n->n = v;
  return HistTerm(n);
}

HistTerm HistTerm::bool_(bool v) {
  auto n = mk(HKind::Bool);
  n->b = v;
  return HistTerm(n);
}

HistTerm HistTerm::pair(HistTerm a, HistTerm b) { return HistTerm(mk(HKind::Pair, {a, b})); }
HistTerm HistTerm::fst(HistTerm a) { return HistTerm(mk(HKind::Fst, {a})); }
HistTerm HistTerm::snd(HistTerm a) { return HistTerm(mk(HKind::Snd, {a})); }
HistTerm HistTerm::inl(HistTerm a) { return HistTerm(mk(HKind::Inl, {a})); }
HistTerm HistTerm::inr(HistTerm a) { return HistTerm(mk(HKind::Inr, {a})); }

HistTerm HistTerm::case_(HistTerm scrut, std::string xl, HistTerm bl, std::string xr, HistTerm br) {
  auto n = mk(HKind::Case, {scrut, bl, br});
  n->x = std::move(xl);
  n->y = std::move(xr);
  return HistTerm(n);
}

HistTerm HistTerm::nil() { return HistTerm(mk(HKind::Nil)); }
HistTerm HistTerm::cons(HistTerm hd, HistTerm tl) { return HistTerm(mk(HKind::Cons, {hd, tl})); }

HistTerm HistTerm::fold(HistTerm list, HistTerm init, std::string x, std::string acc, HistTerm body) {
  auto n = mk(HKind::Fold, {list, init, body});
  n->x = std::move(x);
  n->y = std::move(acc);
  return HistTerm(n);
}

HistTerm HistTerm::arith(HistOp op, HistTerm a, HistTerm b) {
  auto n = mk(HKind::Arith, {a, b});
  n->op = op;
  return HistTerm(n);
}

HistTerm HistTerm::cmp(HistOp op, HistTerm a, HistTerm b) {
  auto n = mk(HKind::Cmp, {a, b});
  n->op = op;
  return HistTerm(n);
}

HistTerm HistTerm::if_(HistTerm c, HistTerm t, HistTerm e) { return HistTerm(mk(HKind::If, {c, t, e})); }
HistTerm HistTerm::len(HistTerm a) { return HistTerm(mk(HKind::Len, {a})); }
HistTerm HistTerm::init(HistTerm a) { return HistTerm(mk(HKind::Init, {a})); }

HKind HistTerm::kind() const { return node_ ? node_->kind : HKind::Unit; }

namespace {
const std::string kEmpty;
const std::vector<HistTerm> kNoKids;
}  // namespace

const std::string& HistTerm::name() const { return node_ ? node_->name : kEmpty; }
const std::string& HistTerm::x() const { return node_ ? node_->x : kEmpty; }
const std::string& HistTerm::y() const { return node_ ? node_->y : kEmpty; }
std::int64_t HistTerm::int_val() const { return node_ ? node_->n : 0; }
bool HistTerm::bool_val() const { return node_ && node_->b; }
HistOp HistTerm::op() const { return node_ ? node_->op : HistOp::Add; }
const std::vector<HistTerm>& HistTerm::kids() const { return node_ ? node_->kids : kNoKids; }

namespace {

const char* op_text(HistOp op) {
  switch (op) {
    case HistOp::Add: return "+";
    case HistOp::Sub: return "-";
    case HistOp::Mul: return "*";
    case HistOp::Div: return "/";
    case HistOp::Lt: return "<";
    case HistOp::Le: return "<=";
    case HistOp::Eq: return "==";
    case HistOp::Gt: return ">";
    case HistOp::Ge: return ">=";
  }
  return "?";
}

}  // namespace

std::string HistTerm::str() const {
  switch (kind()) {
    case HKind::Var: return name();
    case HKind::Unit: return "()";
    case HKind::Int: return std::to_string(int_val());
    case HKind::Bool: return bool_val() ? "true" : "false";
    case HKind::Pair: return "(" + kid(0).str() + ", " + kid(1).str() + ")";
    case HKind::Fst: return "fst(" + kid(0).str() + ")";
    case HKind::Snd: return "snd(" + kid(0).str() + ")";
    case HKind::Inl: return "inl(" + kid(0).str() + ")";
    case HKind::Inr: return "inr(" + kid(0).str() + ")";
    case HKind::Case:
      return "(case " + kid(0).str() + " of inl " + x() + " => " + kid(1).str() + " | inr " + y() +
             " => " + kid(2).str() + ")";
    case HKind::Nil: return "[]";
    case HKind::Cons: return "(" + kid(0).str() + " :: " + kid(1).str() + ")";
    case HKind::Fold:
      return "fold(" + kid(0).str() + ", " + kid(1).str() + ", " + x() + " " + y() + " => " +
             kid(2).str() + ")";
    case HKind::Arith:
    case HKind::Cmp: return "(" + kid(0).str() + " " + op_text(op()) + " " + kid(1).str() + ")";
    case HKind::If:
      return "(if " + kid(0).str() + " then " + kid(1).str() + " else " + kid(2).str() + ")";
    case HKind::Len: return "|" + kid(0).str() + "|";
    case HKind::Init: return "init(" + kid(0).str() + ")";
  }
  return "?";
}

bool operator==(const HistTerm& a, const HistTerm& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case HKind::Var: return a.name() == b.name();
    case HKind::Int: return a.int_val() == b.int_val();
    case HKind::Bool: return a.bool_val() == b.bool_val();
    case HKind::Arith:
    case HKind::Cmp:
      if (a.op() != b.op()) return false;
      break;
    case HKind::Case:
    case HKind::Fold:
      if (a.x() != b.x() || a.y() != b.y()) return false;
      break;
    default: break;
  }
  return a.kids() == b.kids();
}

// ---- typing by unification ----

namespace {

struct UType {
  enum K { Meta, Unit, Int, Bool, Prod, Sum, List } k = Unit;
  int meta = -1;
  std::vector<std::shared_ptr<UType>> kids;
};
using UT = std::shared_ptr<UType>;

class Unifier {
 public:
  UT fresh() {
    auto t = std::make_shared<UType>();
    t->k = UType::Meta;
    t->meta = static_cast<int>(sol_.size());
    sol_.push_back(nullptr);
    return t;
  }
  static UT con(UType::K k, std::vector<UT> kids = {}) {
    auto t = std::make_shared<UType>();
    t->k = k;
    t->kids = std::move(kids);
    return t;
  }
  UT from(const HistType& a) {
    switch (a.kind()) {
      case HistKind::Unit: return con(UType::Unit);
      case HistKind::Int: return con(UType::Int);
      case HistKind::Bool: return con(UType::Bool);
      case HistKind::Prod: return con(UType::Prod, {from(a.a()), from(a.b())});
      case HistKind::Sum: return con(UType::Sum, {from(a.a()), from(a.b())});
      case HistKind::List: return con(UType::List, {from(a.a())});
    }
    return con(UType::Unit);
  }
  UT walk(UT t) {
    while (t->k == UType::Meta && sol_[t->meta]) t = sol_[t->meta];
    return t;
  }
  bool occurs(int m, UT t) {
    t = walk(t);
    if (t->k == UType::Meta) return t->meta == m;
    for (auto& k : t->kids)
      if (occurs(m, k)) return true;
    return false;
  }
  void unify(UT a, UT b, const HistTerm& at) {
    a = walk(a);
    b = walk(b);
    if (a->k == UType::Meta && b->k == UType::Meta && a->meta == b->meta) return;
    if (a->k == UType::Meta) {
      if (occurs(a->meta, b)) mismatch(a, b, at);
      sol_[a->meta] = b;
      return;
    }
    if (b->k == UType::Meta) {
      unify(b, a, at);
      return;
    }
    if (a->k != b->k) mismatch(a, b, at);
    for (size_t i = 0; i < a->kids.size(); ++i) unify(a->kids[i], b->kids[i], at);
  }
  HistType resolve(UT t) {
    t = walk(t);
    switch (t->k) {
      case UType::Meta:
      case UType::Unit: return HistType::unit();
      case UType::Int: return HistType::int_();
      case UType::Bool: return HistType::bool_();
      case UType::Prod: return HistType::prod(resolve(t->kids[0]), resolve(t->kids[1]));
      case UType::Sum: return HistType::sum(resolve(t->kids[0]), resolve(t->kids[1]));
      case UType::List: return HistType::list(resolve(t->kids[0]));
    }
    return HistType::unit();
  }
  std::string show(UT t) {
    t = walk(t);
    switch (t->k) {
      case UType::Meta: return "?" + std::to_string(t->meta);
      case UType::Unit: return "Unit";
      case UType::Int: return "Int";
      case UType::Bool: return "Bool";
      case UType::Prod: return "(" + show(t->kids[0]) + " * " + show(t->kids[1]) + ")";
      case UType::Sum: return "(" + show(t->kids[0]) + " + " + show(t->kids[1]) + ")";
      case UType::List: return "[" + show(t->kids[0]) + "]";
    }
    return "?";
  }
  [[noreturn]] void mismatch(UT a, UT b, const HistTerm& at) {
    fail(ErrorKind::HistTypeError, "cannot match " + show(a) + " with " + show(b) + " in " + at.str());
  }

 private:
  std::vector<UT> sol_;
};

using Scope = std::vector<std::pair<std::string, UT>>;

UT infer(Unifier& u, Scope& sc, const HistTerm& m) {
  auto sub = [&](const HistTerm& t) { return infer(u, sc, t); };
  switch (m.kind()) {
    case HKind::Var:
      for (auto it = sc.rbegin(); it != sc.rend(); ++it)
        if (it->first == m.name()) return it->second;
      fail(ErrorKind::HistTypeError, "unbound historical variable " + m.name());
    case HKind::Unit: return Unifier::con(UType::Unit);
    case HKind::Int: return Unifier::con(UType::Int);
    case HKind::Bool: return Unifier::con(UType::Bool);
    case HKind::Pair: return Unifier::con(UType::Prod, {sub(m.kid(0)), sub(m.kid(1))});
    case HKind::Fst:
    case HKind::Snd: {
      UT a = u.fresh(), b = u.fresh();
      u.unify(sub(m.kid(0)), Unifier::con(UType::Prod, {a, b}), m);
      return m.kind() == HKind::Fst ? a : b;
    }
    case HKind::Inl: return Unifier::con(UType::Sum, {sub(m.kid(0)), u.fresh()});
    case HKind::Inr: return Unifier::con(UType::Sum, {u.fresh(), sub(m.kid(0))});
    case HKind::Case: {
      UT a = u.fresh(), b = u.fresh();
      u.unify(sub(m.kid(0)), Unifier::con(UType::Sum, {a, b}), m);
      sc.push_back({m.x(), a});
      UT r1 = sub(m.kid(1));
      sc.pop_back();
      sc.push_back({m.y(), b});
      UT r2 = sub(m.kid(2));
      sc.pop_back();
      u.unify(r1, r2, m);
      return r1;
    }
    case HKind::Nil: return Unifier::con(UType::List, {u.fresh()});
    case HKind::Cons: {
      UT hd = sub(m.kid(0));
      UT l = Unifier::con(UType::List, {hd});
      u.unify(sub(m.kid(1)), l, m);
      return l;
    }
    case HKind::Fold: {
      UT el = u.fresh();
      u.unify(sub(m.kid(0)), Unifier::con(UType::List, {el}), m);
      UT acc = sub(m.kid(1));
      sc.push_back({m.x(), el});
      sc.push_back({m.y(), acc});
      UT body = sub(m.kid(2));
      sc.pop_back();
      sc.pop_back();
      u.unify(body, acc, m);
      return acc;
    }
    case HKind::Arith: {
      UT i = Unifier::con(UType::Int);
      u.unify(sub(m.kid(0)), i, m);
      u.unify(sub(m.kid(1)), i, m);
      return i;
    }
    case HKind::Cmp: {
      UT a = sub(m.kid(0));
      u.unify(a, sub(m.kid(1)), m);
      if (m.op() != HistOp::Eq) u.unify(a, Unifier::con(UType::Int), m);
      return Unifier::con(UType::Bool);
    }
    case HKind::If: {
      u.unify(sub(m.kid(0)), Unifier::con(UType::Bool), m);
      UT t = sub(m.kid(1));
      u.unify(t, sub(m.kid(2)), m);
      return t;
    }
    case HKind::Len: {
      u.unify(sub(m.kid(0)), Unifier::con(UType::List, {u.fresh()}), m);
      return Unifier::con(UType::Int);
    }
    case HKind::Init: {
      UT l = Unifier::con(UType::List, {u.fresh()});
      u.unify(sub(m.kid(0)), l, m);
      return l;
    }
  }
  fail(ErrorKind::HistTypeError, "unknown historical term");
}

Scope scope_of(Unifier& u, const HistContext& omega) {
  Scope sc;
  for (auto& [x, a] : omega) sc.push_back({x, u.from(a)});
  return sc;
}

}  // namespace

HistType hist_typecheck(const HistContext& omega, const HistTerm& m) {
  Unifier u;
  Scope sc = scope_of(u, omega);
  return u.resolve(infer(u, sc, m));
}

void hist_check(const HistContext& omega, const HistTerm& m, const HistType& expected) {
  Unifier u;
  Scope sc = scope_of(u, omega);
  u.unify(infer(u, sc, m), u.from(expected), m);
}

// ---- evaluation ----

namespace {

using VEnv = std::vector<std::pair<std::string, HistValue>>;

HistValue eval(const HistTerm& m, VEnv& env) {
  auto sub = [&](const HistTerm& t) { return eval(t, env); };
  auto bad = [&]() -> HistValue {
    fail(ErrorKind::HistTypeError, "ill-typed historical program " + m.str());
  };
  switch (m.kind()) {
    case HKind::Var:
      for (auto it = env.rbegin(); it != env.rend(); ++it)
        if (it->first == m.name()) return it->second;
      fail(ErrorKind::HistTypeError, "unbound historical variable " + m.name());
    case HKind::Unit: return HistValue::unit();
    case HKind::Int: return HistValue::int_(m.int_val());
    case HKind::Bool: return HistValue::bool_(m.bool_val());
    case HKind::Pair: return HistValue::pair(sub(m.kid(0)), sub(m.kid(1)));
    case HKind::Fst:
    case HKind::Snd: {
      HistValue v = sub(m.kid(0));
      if (v.kind() != ValKind::Pair) return bad();
      return m.kind() == HKind::Fst ? v.a() : v.b();
    }
    case HKind::Inl: return HistValue::inl(sub(m.kid(0)));
    case HKind::Inr: return HistValue::inr(sub(m.kid(0)));
    case HKind::Case: {
      HistValue v = sub(m.kid(0));
      if (v.kind() != ValKind::Inl && v.kind() != ValKind::Inr) return bad();
      bool left = v.kind() == ValKind::Inl;
      env.push_back({left ? m.x() : m.y(), v.a()});
      HistValue r = sub(m.kid(left ? 1 : 2));
      env.pop_back();
      return r;
    }
    case HKind::Nil: return HistValue::list({});
    case HKind::Cons: {
      HistValue hd = sub(m.kid(0));
      HistValue tl = sub(m.kid(1));
      if (tl.kind() != ValKind::List) return bad();
      std::vector<HistValue> items{hd};
      items.insert(items.end(), tl.items().begin(), tl.items().end());
      return HistValue::list(std::move(items));
    }
    case HKind::Fold: {
      HistValue l = sub(m.kid(0));
      if (l.kind() != ValKind::List) return bad();
      HistValue acc = sub(m.kid(1));
      for (auto& el : l.items()) {
        env.push_back({m.x(), el});
        env.push_back({m.y(), acc});
        acc = sub(m.kid(2));
        env.pop_back();
        env.pop_back();
      }
      return acc;
    }
    case HKind::Arith: {
      HistValue a = sub(m.kid(0)), b = sub(m.kid(1));
      if (a.kind() != ValKind::Int || b.kind() != ValKind::Int) return bad();
      std::int64_t x = a.int_val(), y = b.int_val();
      switch (m.op()) {
        case HistOp::Add: return HistValue::int_(x + y);
        case HistOp::Sub: return HistValue::int_(x - y);
        case HistOp::Mul: return HistValue::int_(x * y);
        case HistOp::Div:
          if (y == 0) fail(ErrorKind::DivByZero, "division by zero in " + m.str());
          return HistValue::int_(x / y);
        default: return bad();
      }
    }
    case HKind::Cmp: {
      HistValue a = sub(m.kid(0)), b = sub(m.kid(1));
      if (m.op() == HistOp::Eq) return HistValue::bool_(a == b);
      if (a.kind() != ValKind::Int || b.kind() != ValKind::Int) return bad();
      std::int64_t x = a.int_val(), y = b.int_val();
      switch (m.op()) {
        case HistOp::Lt: return HistValue::bool_(x < y);
        case HistOp::Le: return HistValue::bool_(x <= y);
        case HistOp::Gt: return HistValue::bool_(x > y);
        case HistOp::Ge: return HistValue::bool_(x >= y);
        default: return bad();
      }
    }
    case HKind::If: {
      HistValue c = sub(m.kid(0));
      if (c.kind() != ValKind::Bool) return bad();
      return sub(m.kid(c.bool_val() ? 1 : 2));
    }
    case HKind::Len: {
      HistValue l = sub(m.kid(0));
      if (l.kind() != ValKind::List) return bad();
      return HistValue::int_(static_cast<std::int64_t>(l.items().size()));
    }
    case HKind::Init: {
      HistValue l = sub(m.kid(0));
      if (l.kind() != ValKind::List) return bad();
      std::vector<HistValue> items = l.items();
      if (!items.empty()) items.pop_back();
      return HistValue::list(std::move(items));
    }
  }
  return bad();
}

}  // namespace

HistValue hist_eval(const HistTerm& m) {
  VEnv env;
  return eval(m, env);
}

HistValue hist_eval(const HistTerm& m, const HistSubst& env) {
  VEnv e(env.begin(), env.end());
  return eval(m, e);
}

// ---- substitution ----

HistTerm value_to_term(const HistValue& v) {
  switch (v.kind()) {
    case ValKind::Unit: return HistTerm::unit();
    case ValKind::Int: return HistTerm::int_(v.int_val());
    case ValKind::Bool: return HistTerm::bool_(v.bool_val());
    case ValKind::Pair: return HistTerm::pair(value_to_term(v.a()), value_to_term(v.b()));
    case ValKind::Inl: return HistTerm::inl(value_to_term(v.a()));
    case ValKind::Inr: return HistTerm::inr(value_to_term(v.a()));
    case ValKind::List: {
      HistTerm out = HistTerm::nil();
      for (size_t i = v.items().size(); i-- > 0;) out = HistTerm::cons(value_to_term(v.items()[i]), out);
      return out;
    }
  }
  return HistTerm::unit();
}

namespace {

HistTerm subst(const HistTerm& m, const HistSubst& theta, const std::set<std::string>& bound) {
  auto go = [&](const HistTerm& t) { return subst(t, theta, bound); };
  auto under = [&](const HistTerm& t, std::initializer_list<std::string> names) {
    std::set<std::string> b = bound;
    b.insert(names);
    return subst(t, theta, b);
  };
  switch (m.kind()) {
    case HKind::Var: {
      if (bound.count(m.name())) return m;
      auto it = theta.find(m.name());
      return it == theta.end() ? m : value_to_term(it->second);
    }
    case HKind::Unit:
    case HKind::Int:
    case HKind::Bool:
    case HKind::Nil: return m;
    case HKind::Pair: return HistTerm::pair(go(m.kid(0)), go(m.kid(1)));
    case HKind::Fst: return HistTerm::fst(go(m.kid(0)));
    case HKind::Snd: return HistTerm::snd(go(m.kid(0)));
    case HKind::Inl: return HistTerm::inl(go(m.kid(0)));
    case HKind::Inr: return HistTerm::inr(go(m.kid(0)));
    case HKind::Case:
      return HistTerm::case_(go(m.kid(0)), m.x(), under(m.kid(1), {m.x()}), m.y(), under(m.kid(2), {m.y()}));
    case HKind::Cons: return HistTerm::cons(go(m.kid(0)), go(m.kid(1)));
    case HKind::Fold:
      return HistTerm::fold(go(m.kid(0)), go(m.kid(1)), m.x(), m.y(), under(m.kid(2), {m.x(), m.y()}));
    case HKind::Arith: return HistTerm::arith(m.op(), go(m.kid(0)), go(m.kid(1)));
    case HKind::Cmp: return HistTerm::cmp(m.op(), go(m.kid(0)), go(m.kid(1)));
    case HKind::If: return HistTerm::if_(go(m.kid(0)), go(m.kid(1)), go(m.kid(2)));
    case HKind::Len: return HistTerm::len(go(m.kid(0)));
    case HKind::Init: return HistTerm::init(go(m.kid(0)));
  }
  return m;
}

void fv(const HistTerm& m, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (m.kind()) {
    case HKind::Var:
      if (!bound.count(m.name())) out.insert(m.name());
      return;
    case HKind::Case: {
      fv(m.kid(0), bound, out);
      for (int i : {1, 2}) {
        const std::string& b = i == 1 ? m.x() : m.y();
        bool had = bound.count(b);
        bound.insert(b);
        fv(m.kid(i), bound, out);
        if (!had) bound.erase(b);
      }
      return;
    }
    case HKind::Fold: {
      fv(m.kid(0), bound, out);
      fv(m.kid(1), bound, out);
      std::set<std::string> inner = bound;
      inner.insert(m.x());
      inner.insert(m.y());
      fv(m.kid(2), inner, out);
      return;
    }
    default:
      for (auto& k : m.kids()) fv(k, bound, out);
  }
}

}  // namespace

HistTerm hist_subst(const HistTerm& m, const HistSubst& theta) {
  if (theta.empty()) return m;
  return subst(m, theta, {});
}

std::set<std::string> hist_fv(const HistTerm& m) {
  std::set<std::string> bound, out;
  fv(m, bound, out);
  return out;
}

}  // namespace lst
