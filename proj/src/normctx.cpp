#include "lst/normctx.hpp"

#include <algorithm>
#include <functional>

namespace lst {

NormCtx NormCtx::var(std::string x, StreamType s) {
  NormCtx n;
  n.kind = Kind::Var;
  n.name = std::move(x);
  n.type = std::move(s);
  return n;
}

NormCtx NormCtx::seq(std::vector<NormCtx> parts) {
  std::vector<NormCtx> kids;
  for (auto& p : parts) {
    if (p.kind == Kind::Empty) continue;
    if (p.kind == Kind::Seq) {
      for (auto& k : p.kids) kids.push_back(std::move(k));
    } else {
      kids.push_back(std::move(p));
    }
  }
  if (kids.empty()) return empty();
  if (kids.size() == 1) return std::move(kids[0]);
  NormCtx n;
  n.kind = Kind::Seq;
  n.kids = std::move(kids);
  return n;
}

NormCtx NormCtx::par(std::vector<NormCtx> parts) {
  std::vector<NormCtx> kids;
  for (auto& p : parts) {
    if (p.kind == Kind::Empty) continue;
    if (p.kind == Kind::Par) {
      for (auto& k : p.kids) kids.push_back(std::move(k));
    } else {
      kids.push_back(std::move(p));
    }
  }
  if (kids.empty()) return empty();
  if (kids.size() == 1) return std::move(kids[0]);
  std::sort(kids.begin(), kids.end(),
            [](const NormCtx& a, const NormCtx& b) { return a.min_var() < b.min_var(); });
  NormCtx n;
  n.kind = Kind::Par;
  n.kids = std::move(kids);
  return n;
}

NormCtx NormCtx::from(const BunchedContext& g) {
  switch (g.kind()) {
    case CtxKind::Empty: return empty();
    case CtxKind::Bind: return var(g.var(), g.type());
    case CtxKind::Comma: return par({from(g.left()), from(g.right())});
    case CtxKind::Semic: return seq({from(g.left()), from(g.right())});
  }
  return empty();
}

BunchedContext NormCtx::to_ctx() const {
  switch (kind) {
    case Kind::Empty: return BunchedContext::empty();
    case Kind::Var: return BunchedContext::bind(name, type);
    case Kind::Seq:
    case Kind::Par: {
      BunchedContext acc = kids.back().to_ctx();
      for (size_t i = kids.size() - 1; i-- > 0;) {
        acc = kind == Kind::Seq ? BunchedContext::semic(kids[i].to_ctx(), acc)
                                : BunchedContext::comma(kids[i].to_ctx(), acc);
      }
      return acc;
    }
  }
  return BunchedContext::empty();
}

void NormCtx::collect_vars(std::vector<std::string>& out) const {
  if (kind == Kind::Var) {
    out.push_back(name);
    return;
  }
  for (auto& k : kids) k.collect_vars(out);
}

std::vector<std::string> NormCtx::vars() const {
  std::vector<std::string> out;
  collect_vars(out);
  return out;
}

bool NormCtx::has(const std::string& x) const { return lookup(x) != nullptr; }

const StreamType* NormCtx::lookup(const std::string& x) const {
  if (kind == Kind::Var) return name == x ? &type : nullptr;
  for (auto& k : kids)
    if (auto* t = k.lookup(x)) return t;
  return nullptr;
}

const std::string& NormCtx::min_var() const {
  static const std::string none;
  if (kind == Kind::Var) return name;
  if (kids.empty()) return none;
  if (kind == Kind::Par) return kids[0].min_var();
  const std::string* best = &kids[0].min_var();
  for (auto& k : kids)
    if (k.min_var() < *best) best = &k.min_var();
  return *best;
}

std::string NormCtx::str() const {
  switch (kind) {
    case Kind::Empty: return "·";
    case Kind::Var: return name + " : " + type.str();
    default: {
      std::string out = "(";
      for (size_t i = 0; i < kids.size(); ++i) {
        if (i) out += kind == Kind::Seq ? "; " : ", ";
        out += kids[i].str();
      }
      return out + ")";
    }
  }
}

NormCtx NormCtx::restrict(const VarSet& keep) const {
  switch (kind) {
    case Kind::Empty: return empty();
    case Kind::Var: return keep.count(name) ? *this : empty();
    case Kind::Seq:
    case Kind::Par: {
      std::vector<NormCtx> parts;
      parts.reserve(kids.size());
      for (auto& k : kids) parts.push_back(k.restrict(keep));
      return kind == Kind::Seq ? seq(std::move(parts)) : par(std::move(parts));
    }
  }
  return empty();
}

NormCtx NormCtx::replace(const std::string& x, const NormCtx& sub) const {
  switch (kind) {
    case Kind::Empty: return empty();
    case Kind::Var: return name == x ? sub : *this;
    default: {
      std::vector<NormCtx> parts;
      for (auto& k : kids) parts.push_back(k.replace(x, sub));
      return kind == Kind::Seq ? seq(std::move(parts)) : par(std::move(parts));
    }
  }
}

bool operator==(const NormCtx& a, const NormCtx& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == NormCtx::Kind::Var) return a.name == b.name && a.type == b.type;
  if (a.kids.size() != b.kids.size()) return false;
  for (size_t i = 0; i < a.kids.size(); ++i)
    if (!(a.kids[i] == b.kids[i])) return false;
  return true;
}

namespace {

size_t count_in(const NormCtx& c, const VarSet& s) {
  if (c.kind == NormCtx::Kind::Var) return s.count(c.name);
  size_t n = 0;
  for (auto& k : c.kids) n += count_in(k, s);
  return n;
}

size_t count_all(const NormCtx& c) {
  if (c.kind == NormCtx::Kind::Var) return 1;
  size_t n = 0;
  for (auto& k : c.kids) n += count_all(k);
  return n;
}

}  // namespace

std::pair<NormCtx, NormCtx> split_seq(const NormCtx& g, const VarSet& v1, const VarSet& v2) {
  bool has1 = count_in(g, v1) > 0;
  bool has2 = count_in(g, v2) > 0;
  if (!has2) return {g, NormCtx::empty()};
  if (!has1) return {NormCtx::empty(), g};
  for (auto& x : g.vars())
    if (v1.count(x) && v2.count(x))
      fail(ErrorKind::OrderViolation, "variable " + x + " is used on both sides of a sequential pair");
  if (g.kind != NormCtx::Kind::Seq)
    fail(ErrorKind::OrderViolation,
         "inputs in " + g.str() + " are not sequentially ordered as the pair requires");
  size_t boundary = g.kids.size();
  for (size_t i = 0; i < g.kids.size(); ++i) {
    bool l = count_in(g.kids[i], v1) > 0;
    bool r = count_in(g.kids[i], v2) > 0;
    if (l && r)
      fail(ErrorKind::OrderViolation, "bunch " + g.kids[i].str() + " feeds both halves of a sequential pair");
    if (r && boundary == g.kids.size()) boundary = i;
    if (l && boundary != g.kids.size())
      fail(ErrorKind::OrderViolation, "the sequential pair consumes " + g.str() + " out of order");
  }
  std::vector<NormCtx> left(g.kids.begin(), g.kids.begin() + static_cast<long>(boundary));
  std::vector<NormCtx> right(g.kids.begin() + static_cast<long>(boundary), g.kids.end());
  return {NormCtx::seq(std::move(left)), NormCtx::seq(std::move(right))};
}

NormCtx extract_module(const NormCtx& g, const VarSet& s, const std::string& x, const StreamType& t) {
  std::function<NormCtx(const NormCtx&)> go = [&](const NormCtx& c) -> NormCtx {
    size_t hit = count_in(c, s);
    if (hit == count_all(c)) return NormCtx::var(x, t);
    std::vector<size_t> touched;
    for (size_t i = 0; i < c.kids.size(); ++i)
      if (count_in(c.kids[i], s) > 0) touched.push_back(i);
    if (touched.size() == 1) {
      std::vector<NormCtx> kids = c.kids;
      kids[touched[0]] = go(c.kids[touched[0]]);
      return c.kind == NormCtx::Kind::Seq ? NormCtx::seq(std::move(kids)) : NormCtx::par(std::move(kids));
    }
    for (size_t i : touched)
      if (count_in(c.kids[i], s) != count_all(c.kids[i]))
        fail(ErrorKind::OrderViolation, "let-bound inputs do not form a sub-bunch of " + g.str());
    if (c.kind == NormCtx::Kind::Seq) {
      for (size_t j = 1; j < touched.size(); ++j)
        if (touched[j] != touched[j - 1] + 1)
          fail(ErrorKind::OrderViolation, "let-bound inputs are not contiguous in " + g.str());
      std::vector<NormCtx> kids(c.kids.begin(), c.kids.begin() + static_cast<long>(touched.front()));
      kids.push_back(NormCtx::var(x, t));
      kids.insert(kids.end(), c.kids.begin() + static_cast<long>(touched.back() + 1), c.kids.end());
      return NormCtx::seq(std::move(kids));
    }
    std::vector<NormCtx> kids;
    for (size_t i = 0; i < c.kids.size(); ++i)
      if (count_in(c.kids[i], s) == 0) kids.push_back(c.kids[i]);
    kids.push_back(NormCtx::var(x, t));
    return NormCtx::par(std::move(kids));
  };
  for (auto& v : s)
    if (!g.has(v)) fail(ErrorKind::UnboundVar, "variable " + v + " is not in scope");
  return go(g);
}

std::vector<NormCtx> unit_placements(const NormCtx& g, const std::string& x, const StreamType& t) {
  NormCtx xv = NormCtx::var(x, t);
  std::vector<NormCtx> out;
  auto add = [&](NormCtx c) {
    for (auto& o : out)
      if (o == c) return;
    out.push_back(std::move(c));
  };
  if (g.kind == NormCtx::Kind::Empty) {
    add(xv);
    return out;
  }
  add(NormCtx::par({g, xv}));
  std::function<void(const NormCtx&, const std::function<NormCtx(NormCtx)>&)> visit =
      [&](const NormCtx& node, const std::function<NormCtx(NormCtx)>& rebuild) {
        add(rebuild(NormCtx::seq({xv, node})));
        add(rebuild(NormCtx::seq({node, xv})));
        add(rebuild(NormCtx::par({xv, node})));
        for (size_t i = 0; i < node.kids.size(); ++i) {
          visit(node.kids[i], [&, i](NormCtx r) {
            std::vector<NormCtx> kids = node.kids;
            kids[i] = std::move(r);
            return rebuild(node.kind == NormCtx::Kind::Seq ? NormCtx::seq(std::move(kids))
                                                           : NormCtx::par(std::move(kids)));
          });
        }
      };
  visit(g, [](NormCtx r) { return r; });
  return out;
}

}  // namespace lst
