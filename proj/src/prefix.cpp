#include "lst/prefix.hpp"

namespace lst {

struct Prefix::Node {
  PKind kind = PKind::EpsEmp;
  std::int64_t n = 0;
  bool b = false;
  size_t size = 1;  // node count, for cheap inequality
  size_t hash = 0;
  Prefix l, r;
};

namespace {

std::shared_ptr<Prefix::Node> node(PKind k) {
  auto n = std::make_shared<Prefix::Node>();
  n->kind = k;
  n->hash = static_cast<size_t>(k) + 1;
  return n;
}

size_t mix(size_t h, size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

}  // namespace

Prefix::Prefix() : node_(nullptr) {}
Prefix Prefix::eps_emp() { return Prefix(); }
Prefix Prefix::one_emp() { return Prefix(node(PKind::OneEmp)); }
Prefix Prefix::one_full() { return Prefix(node(PKind::OneFull)); }
Prefix Prefix::int_emp() { return Prefix(node(PKind::IntEmp)); }
Prefix Prefix::bool_emp() { return Prefix(node(PKind::BoolEmp)); }
Prefix Prefix::sum_emp() { return Prefix(node(PKind::SumPEmp)); }
Prefix Prefix::star_emp() { return Prefix(node(PKind::StarEmp)); }
Prefix Prefix::star_done() { return Prefix(node(PKind::StarDone)); }

Prefix Prefix::int_full(std::int64_t v) {
  auto n = node(PKind::IntFull);
  n->n = v;
  n->hash = mix(n->hash, std::hash<std::int64_t>{}(v));
  return Prefix(n);
}

Prefix Prefix::bool_full(bool v) {
  auto n = node(PKind::BoolFull);
  n->b = v;
  n->hash = mix(n->hash, v);
  return Prefix(n);
}

#define LST_PREFIX1(fn, K)    \
  Prefix Prefix::fn(Prefix a) { \
    auto n = node(PKind::K);    \
    n->size += a.size();        \
    n->hash = mix(n->hash, a.hash()); \
    n->l = std::move(a);        \
    return Prefix(n);           \
  }
#define LST_PREFIX2(fn, K)              \
  Prefix Prefix::fn(Prefix a, Prefix b) { \
    auto n = node(PKind::K);              \
    n->size += a.size() + b.size();       \
    n->hash = mix(mix(n->hash, a.hash()), b.hash()); \
    n->l = std::move(a);                  \
    n->r = std::move(b);                  \
    return Prefix(n);                     \
  }

LST_PREFIX2(par, ParP)
LST_PREFIX1(cat_a, CatPA)
LST_PREFIX2(cat_b, CatPB)
LST_PREFIX1(sum_a, SumPA)
LST_PREFIX1(sum_b, SumPB)
LST_PREFIX1(stp_a, StpA)
LST_PREFIX2(stp_b, StpB)

#undef LST_PREFIX1
#undef LST_PREFIX2

PKind Prefix::kind() const { return node_ ? node_->kind : PKind::EpsEmp; }
const Prefix& Prefix::a() const { return node_->l; }
const Prefix& Prefix::b() const { return node_->r; }
std::int64_t Prefix::int_val() const { return node_ ? node_->n : 0; }
bool Prefix::bool_val() const { return node_ && node_->b; }
size_t Prefix::size() const { return node_ ? node_->size : 0; }
size_t Prefix::hash() const { return node_ ? node_->hash : 0; }

std::string Prefix::str() const {
  switch (kind()) {
    case PKind::EpsEmp: return "epsEmp";
    case PKind::OneEmp: return "oneEmp";
    case PKind::OneFull: return "oneFull";
    case PKind::IntEmp: return "intEmp";
    case PKind::IntFull: return "intFull(" + std::to_string(int_val()) + ")";
    case PKind::BoolEmp: return "boolEmp";
    case PKind::BoolFull: return std::string("boolFull(") + (bool_val() ? "true" : "false") + ")";
    case PKind::ParP: return "parp(" + a().str() + ", " + b().str() + ")";
    case PKind::CatPA: return "catpA(" + a().str() + ")";
    case PKind::CatPB: return "catpB(" + a().str() + "; " + b().str() + ")";
    case PKind::SumPEmp: return "sumpEmp";
    case PKind::SumPA: return "sumpA(" + a().str() + ")";
    case PKind::SumPB: return "sumpB(" + a().str() + ")";
    case PKind::StarEmp: return "starEmp";
    case PKind::StarDone: return "starDone";
    case PKind::StpA: return "stpA(" + a().str() + ")";
    case PKind::StpB: return "stpB(" + a().str() + "; " + b().str() + ")";
  }
  return "?";
}

bool operator==(const Prefix& x, const Prefix& y) {
  if (x.node_ == y.node_) return true;
  if (x.kind() != y.kind() || x.size() != y.size() || x.hash() != y.hash()) return false;
  switch (x.kind()) {
    case PKind::IntFull: return x.int_val() == y.int_val();
    case PKind::BoolFull: return x.bool_val() == y.bool_val();
    case PKind::ParP:
    case PKind::CatPB:
    case PKind::StpB: return x.a() == y.a() && x.b() == y.b();
    case PKind::CatPA:
    case PKind::SumPA:
    case PKind::SumPB:
    case PKind::StpA: return x.a() == y.a();
    default: return true;
  }
}

bool is_maximal(const Prefix& p) {
  switch (p.kind()) {
    case PKind::EpsEmp:
    case PKind::OneFull:
    case PKind::IntFull:
    case PKind::BoolFull:
    case PKind::StarDone: return true;
    case PKind::ParP:
    case PKind::CatPB:
    case PKind::StpB: return is_maximal(p.a()) && is_maximal(p.b());
    case PKind::SumPA:
    case PKind::SumPB: return is_maximal(p.a());
    default: return false;
  }
}

bool is_empty(const Prefix& p) {
  switch (p.kind()) {
    case PKind::EpsEmp:
    case PKind::OneEmp:
    case PKind::IntEmp:
    case PKind::BoolEmp:
    case PKind::SumPEmp:
    case PKind::StarEmp: return true;
    case PKind::ParP: return is_empty(p.a()) && is_empty(p.b());
    case PKind::CatPA: return is_empty(p.a());
    default: return false;
  }
}

bool prefix_has_type(const Prefix& p, const StreamType& s) {
  switch (p.kind()) {
    case PKind::EpsEmp: return s.kind() == TypeKind::Eps;
    case PKind::OneEmp:
    case PKind::OneFull: return s.kind() == TypeKind::One;
    case PKind::IntEmp:
    case PKind::IntFull: return s.kind() == TypeKind::Int;
    case PKind::BoolEmp:
    case PKind::BoolFull: return s.kind() == TypeKind::Bool;
    case PKind::ParP:
      return s.kind() == TypeKind::Par && prefix_has_type(p.a(), s.left()) && prefix_has_type(p.b(), s.right());
    case PKind::CatPA: return s.kind() == TypeKind::Cat && prefix_has_type(p.a(), s.left());
    case PKind::CatPB:
      return s.kind() == TypeKind::Cat && prefix_has_type(p.a(), s.left()) && is_maximal(p.a()) &&
             prefix_has_type(p.b(), s.right());
    case PKind::SumPEmp: return s.kind() == TypeKind::Plus;
    case PKind::SumPA: return s.kind() == TypeKind::Plus && prefix_has_type(p.a(), s.left());
    case PKind::SumPB: return s.kind() == TypeKind::Plus && prefix_has_type(p.a(), s.right());
    case PKind::StarEmp:
    case PKind::StarDone: return s.kind() == TypeKind::Star;
    case PKind::StpA: return s.kind() == TypeKind::Star && prefix_has_type(p.a(), s.body());
    case PKind::StpB:
      return s.kind() == TypeKind::Star && prefix_has_type(p.a(), s.body()) && is_maximal(p.a()) &&
             prefix_has_type(p.b(), s);
  }
  return false;
}

Prefix emp(const StreamType& s) {
  switch (s.kind()) {
    case TypeKind::Eps: return Prefix::eps_emp();
    case TypeKind::One: return Prefix::one_emp();
    case TypeKind::Int: return Prefix::int_emp();
    case TypeKind::Bool: return Prefix::bool_emp();
    case TypeKind::Par: return Prefix::par(emp(s.left()), emp(s.right()));
    case TypeKind::Cat: return Prefix::cat_a(emp(s.left()));
    case TypeKind::Plus: return Prefix::sum_emp();
    case TypeKind::Star: return Prefix::star_emp();
    case TypeKind::Var: fail(ErrorKind::NonClosedTypeArg, "emp of open type " + s.str());
  }
  return Prefix();
}

namespace {

void emp_into(const BunchedContext& g, Environment& out) {
  switch (g.kind()) {
    case CtxKind::Empty: return;
    case CtxKind::Bind: out[g.var()] = emp(g.type()); return;
    default:
      emp_into(g.left(), out);
      emp_into(g.right(), out);
  }
}

[[noreturn]] void ill(const Prefix& p, const StreamType& s) {
  fail(ErrorKind::IllTyped, "prefix " + p.str() + " does not have type " + s.str());
}

}  // namespace

Environment emp_ctx(const BunchedContext& g) {
  Environment out;
  emp_into(g, out);
  return out;
}

StreamType deriv_type(const Prefix& p, const StreamType& s) {
  switch (p.kind()) {
    case PKind::EpsEmp:
      if (s.kind() != TypeKind::Eps) ill(p, s);
      return s;
    case PKind::OneEmp:
      if (s.kind() != TypeKind::One) ill(p, s);
      return s;
    case PKind::IntEmp:
      if (s.kind() != TypeKind::Int) ill(p, s);
      return s;
    case PKind::BoolEmp:
      if (s.kind() != TypeKind::Bool) ill(p, s);
      return s;
    case PKind::OneFull:
      if (s.kind() != TypeKind::One) ill(p, s);
      return StreamType::eps();
    case PKind::IntFull:
      if (s.kind() != TypeKind::Int) ill(p, s);
      return StreamType::eps();
    case PKind::BoolFull:
      if (s.kind() != TypeKind::Bool) ill(p, s);
      return StreamType::eps();
    case PKind::ParP:
      if (s.kind() != TypeKind::Par) ill(p, s);
      return StreamType::par(deriv_type(p.a(), s.left()), deriv_type(p.b(), s.right()));
    case PKind::CatPA:
      if (s.kind() != TypeKind::Cat) ill(p, s);
      return StreamType::cat(deriv_type(p.a(), s.left()), s.right());
    case PKind::CatPB:
      if (s.kind() != TypeKind::Cat || !is_maximal(p.a()) || !prefix_has_type(p.a(), s.left())) ill(p, s);
      return deriv_type(p.b(), s.right());
    case PKind::SumPEmp:
      if (s.kind() != TypeKind::Plus) ill(p, s);
      return s;
    case PKind::SumPA:
      if (s.kind() != TypeKind::Plus) ill(p, s);
      return deriv_type(p.a(), s.left());
    case PKind::SumPB:
      if (s.kind() != TypeKind::Plus) ill(p, s);
      return deriv_type(p.a(), s.right());
    case PKind::StarEmp:
      if (s.kind() != TypeKind::Star) ill(p, s);
      return s;
    case PKind::StarDone:
      if (s.kind() != TypeKind::Star) ill(p, s);
      return StreamType::eps();
    case PKind::StpA:
      if (s.kind() != TypeKind::Star) ill(p, s);
      return StreamType::cat(deriv_type(p.a(), s.body()), s);
    case PKind::StpB:
      if (s.kind() != TypeKind::Star || !is_maximal(p.a()) || !prefix_has_type(p.a(), s.body())) ill(p, s);
      return deriv_type(p.b(), s);
  }
  ill(p, s);
}

BunchedContext deriv_ctx(const Environment& eta, const BunchedContext& g) {
  switch (g.kind()) {
    case CtxKind::Empty: return g;
    case CtxKind::Bind: {
      auto it = eta.find(g.var());
      if (it == eta.end()) fail(ErrorKind::IllTyped, "environment has no binding for " + g.var());
      return BunchedContext::bind(g.var(), deriv_type(it->second, g.type()));
    }
    case CtxKind::Comma: return BunchedContext::comma(deriv_ctx(eta, g.left()), deriv_ctx(eta, g.right()));
    case CtxKind::Semic: return BunchedContext::semic(deriv_ctx(eta, g.left()), deriv_ctx(eta, g.right()));
  }
  return g;
}

std::optional<Prefix> try_concat_prefix(const Prefix& p, const Prefix& q) {
  switch (p.kind()) {
    case PKind::EpsEmp:
      if (q.kind() == PKind::EpsEmp) return p;
      return std::nullopt;
    case PKind::OneEmp:
      if (q.kind() == PKind::OneEmp || q.kind() == PKind::OneFull) return q;
      return std::nullopt;
    case PKind::IntEmp:
      if (q.kind() == PKind::IntEmp || q.kind() == PKind::IntFull) return q;
      return std::nullopt;
    case PKind::BoolEmp:
      if (q.kind() == PKind::BoolEmp || q.kind() == PKind::BoolFull) return q;
      return std::nullopt;
    case PKind::OneFull:
    case PKind::IntFull:
    case PKind::BoolFull:
    case PKind::StarDone:
      if (q.kind() == PKind::EpsEmp) return p;
      return std::nullopt;
    case PKind::ParP: {
      if (q.kind() != PKind::ParP) return std::nullopt;
      auto l = try_concat_prefix(p.a(), q.a());
      auto r = try_concat_prefix(p.b(), q.b());
      if (!l || !r) return std::nullopt;
      return Prefix::par(*l, *r);
    }
    case PKind::CatPA: {
      if (q.kind() != PKind::CatPA && q.kind() != PKind::CatPB) return std::nullopt;
      auto l = try_concat_prefix(p.a(), q.a());
      if (!l) return std::nullopt;
      return q.kind() == PKind::CatPA ? Prefix::cat_a(*l) : Prefix::cat_b(*l, q.b());
    }
    case PKind::CatPB: {
      auto r = try_concat_prefix(p.b(), q);
      if (!r) return std::nullopt;
      return Prefix::cat_b(p.a(), *r);
    }
    case PKind::SumPEmp:
      if (q.kind() == PKind::SumPEmp || q.kind() == PKind::SumPA || q.kind() == PKind::SumPB) return q;
      return std::nullopt;
    case PKind::SumPA: {
      auto r = try_concat_prefix(p.a(), q);
      if (!r) return std::nullopt;
      return Prefix::sum_a(*r);
    }
    case PKind::SumPB: {
      auto r = try_concat_prefix(p.a(), q);
      if (!r) return std::nullopt;
      return Prefix::sum_b(*r);
    }
    case PKind::StarEmp:
      switch (q.kind()) {
        case PKind::StarEmp:
        case PKind::StarDone:
        case PKind::StpA:
        case PKind::StpB: return q;
        default: return std::nullopt;
      }
    case PKind::StpA: {
      if (q.kind() != PKind::CatPA && q.kind() != PKind::CatPB) return std::nullopt;
      auto l = try_concat_prefix(p.a(), q.a());
      if (!l) return std::nullopt;
      return q.kind() == PKind::CatPA ? Prefix::stp_a(*l) : Prefix::stp_b(*l, q.b());
    }
    case PKind::StpB: {
      auto r = try_concat_prefix(p.b(), q);
      if (!r) return std::nullopt;
      return Prefix::stp_b(p.a(), *r);
    }
  }
  return std::nullopt;
}

Prefix concat_prefix(const Prefix& p, const Prefix& q) {
  auto r = try_concat_prefix(p, q);
  if (!r) fail(ErrorKind::Incompatible, "cannot concatenate " + p.str() + " with " + q.str());
  return *r;
}

Environment concat_env(const Environment& eta, const Environment& eta2) {
  Environment out;
  for (auto& [x, p] : eta) {
    auto it = eta2.find(x);
    if (it == eta2.end()) continue;
    if (auto r = try_concat_prefix(p, it->second)) out.emplace(x, *r);
  }
  return out;
}

std::set<std::string> ctx_var_set(const BunchedContext& g) {
  auto v = g.vars();
  return {v.begin(), v.end()};
}

namespace {

const Prefix& must(const Environment& eta, const std::string& x) {
  auto it = eta.find(x);
  if (it == eta.end()) fail(ErrorKind::MissingBinding, "environment has no binding for " + x);
  return it->second;
}

}  // namespace

bool maximal_on(const Environment& eta, const std::set<std::string>& vars) {
  bool ok = true;
  for (auto& x : vars) ok = is_maximal(must(eta, x)) && ok;
  return ok;
}

bool empty_on(const Environment& eta, const std::set<std::string>& vars) {
  bool ok = true;
  for (auto& x : vars) ok = is_empty(must(eta, x)) && ok;
  return ok;
}

bool agree(const Environment& eta, const Environment& eta2, const BunchedContext& d, const BunchedContext& d2) {
  auto v = ctx_var_set(d), v2 = ctx_var_set(d2);
  if (maximal_on(eta, v) && !maximal_on(eta2, v2)) return false;
  if (empty_on(eta, v) && !empty_on(eta2, v2)) return false;
  return true;
}

bool env_has_type(const Environment& eta, const BunchedContext& g) {
  switch (g.kind()) {
    case CtxKind::Empty: return true;
    case CtxKind::Bind: {
      auto it = eta.find(g.var());
      return it != eta.end() && prefix_has_type(it->second, g.type());
    }
    case CtxKind::Comma: return env_has_type(eta, g.left()) && env_has_type(eta, g.right());
    case CtxKind::Semic:
      return env_has_type(eta, g.left()) && env_has_type(eta, g.right()) &&
             (empty_on(eta, ctx_var_set(g.right())) || maximal_on(eta, ctx_var_set(g.left())));
  }
  return false;
}

HistValue flatten_prefix(const Prefix& p, const StreamType& s) {
  if (!is_maximal(p)) fail(ErrorKind::NotMaximal, "prefix " + p.str() + " is not maximal");
  if (!prefix_has_type(p, s)) ill(p, s);
  switch (p.kind()) {
    case PKind::EpsEmp:
    case PKind::OneFull: return HistValue::unit();
    case PKind::IntFull: return HistValue::int_(p.int_val());
    case PKind::BoolFull: return HistValue::bool_(p.bool_val());
    case PKind::ParP:
      return HistValue::pair(flatten_prefix(p.a(), s.left()), flatten_prefix(p.b(), s.right()));
    case PKind::CatPB:
      return HistValue::pair(flatten_prefix(p.a(), s.left()), flatten_prefix(p.b(), s.right()));
    case PKind::SumPA: return HistValue::inl(flatten_prefix(p.a(), s.left()));
    case PKind::SumPB: return HistValue::inr(flatten_prefix(p.a(), s.right()));
    case PKind::StarDone:
    case PKind::StpB: {
      std::vector<HistValue> items;
      const Prefix* cur = &p;
      while (cur->kind() == PKind::StpB) {
        items.push_back(flatten_prefix(cur->a(), s.body()));
        cur = &cur->b();
      }
      return HistValue::list(std::move(items));
    }
    default: ill(p, s);
  }
}

Prefix value_to_prefix(const HistValue& v, const StreamType& s) {
  auto bad = [&]() -> Prefix {
    fail(ErrorKind::IllTyped, "value " + v.str() + " does not flatten from type " + s.str());
  };
  switch (s.kind()) {
    case TypeKind::Eps:
      if (v.kind() != ValKind::Unit) return bad();
      return Prefix::eps_emp();
    case TypeKind::One:
      if (v.kind() != ValKind::Unit) return bad();
      return Prefix::one_full();
    case TypeKind::Int:
      if (v.kind() != ValKind::Int) return bad();
      return Prefix::int_full(v.int_val());
    case TypeKind::Bool:
      if (v.kind() != ValKind::Bool) return bad();
      return Prefix::bool_full(v.bool_val());
    case TypeKind::Par:
      if (v.kind() != ValKind::Pair) return bad();
      return Prefix::par(value_to_prefix(v.a(), s.left()), value_to_prefix(v.b(), s.right()));
    case TypeKind::Cat:
      if (v.kind() != ValKind::Pair) return bad();
      return Prefix::cat_b(value_to_prefix(v.a(), s.left()), value_to_prefix(v.b(), s.right()));
    case TypeKind::Plus:
      if (v.kind() == ValKind::Inl) return Prefix::sum_a(value_to_prefix(v.a(), s.left()));
      if (v.kind() == ValKind::Inr) return Prefix::sum_b(value_to_prefix(v.a(), s.right()));
      return bad();
    case TypeKind::Star: {
      if (v.kind() != ValKind::List) return bad();
      Prefix out = Prefix::star_done();
      for (size_t i = v.items().size(); i-- > 0;) out = Prefix::stp_b(value_to_prefix(v.items()[i], s.body()), out);
      return out;
    }
    case TypeKind::Var: return bad();
  }
  return bad();
}

std::string env_str(const Environment& eta) {
  std::string out = "{";
  bool first = true;
  for (auto& [x, p] : eta) {
    if (!first) out += ", ";
    first = false;
    out += x + " -> " + p.str();
  }
  return out + "}";
}

}  // namespace lst
