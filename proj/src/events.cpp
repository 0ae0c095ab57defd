#include "lst/events.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace lst {

namespace {

const char* wrap_tag(EvWrap w) {
  switch (w) {
    case EvWrap::ParA: return "parA";
    case EvWrap::ParB: return "parB";
    case EvWrap::CatA: return "catA";
  }
  return "?";
}

const char* leaf_tag(EvLeaf l) {
  switch (l) {
    case EvLeaf::One: return "one";
    case EvLeaf::Int: return "int";
    case EvLeaf::Bool: return "bool";
    case EvLeaf::PuncA: return "puncA";
    case EvLeaf::PuncB: return "puncB";
    case EvLeaf::CatPunc: return "catPunc";
  }
  return "?";
}

bool typed_at(const Event& x, size_t i, const StreamType& s) {
  if (i < x.path.size()) {
    switch (x.path[i]) {
      case EvWrap::ParA: return s.kind() == TypeKind::Par && typed_at(x, i + 1, s.left());
      case EvWrap::ParB: return s.kind() == TypeKind::Par && typed_at(x, i + 1, s.right());
      case EvWrap::CatA: return s.kind() == TypeKind::Cat && typed_at(x, i + 1, s.left());
    }
    return false;
  }
  switch (x.leaf) {
    case EvLeaf::One: return s.kind() == TypeKind::One;
    case EvLeaf::Int: return s.kind() == TypeKind::Int;
    case EvLeaf::Bool: return s.kind() == TypeKind::Bool;
    case EvLeaf::PuncA:
    case EvLeaf::PuncB: return s.kind() == TypeKind::Plus || s.kind() == TypeKind::Star;
    case EvLeaf::CatPunc: return s.kind() == TypeKind::Cat && nullable(s.left());
  }
  return false;
}

// Both assume typed_at.
StreamType deriv_at(const Event& x, size_t i, const StreamType& s) {
  if (i < x.path.size()) {
    switch (x.path[i]) {
      case EvWrap::ParA: return StreamType::par(deriv_at(x, i + 1, s.left()), s.right());
      case EvWrap::ParB: return StreamType::par(s.left(), deriv_at(x, i + 1, s.right()));
      case EvWrap::CatA: return StreamType::cat(deriv_at(x, i + 1, s.left()), s.right());
    }
  }
  switch (x.leaf) {
    case EvLeaf::One:
    case EvLeaf::Int:
    case EvLeaf::Bool: return StreamType::eps();
    case EvLeaf::PuncA: return s.kind() == TypeKind::Plus ? s.left() : StreamType::eps();
    case EvLeaf::PuncB:
      return s.kind() == TypeKind::Plus ? s.right() : StreamType::cat(s.body(), s);
    case EvLeaf::CatPunc: return s.right();
  }
  return s;
}

Prefix prefix_at(const Event& x, size_t i, const StreamType& s) {
  if (i < x.path.size()) {
    switch (x.path[i]) {
      case EvWrap::ParA: return Prefix::par(prefix_at(x, i + 1, s.left()), emp(s.right()));
      case EvWrap::ParB: return Prefix::par(emp(s.left()), prefix_at(x, i + 1, s.right()));
      case EvWrap::CatA: return Prefix::cat_a(prefix_at(x, i + 1, s.left()));
    }
  }
  switch (x.leaf) {
    case EvLeaf::One: return Prefix::one_full();
    case EvLeaf::Int: return Prefix::int_full(x.n);
    case EvLeaf::Bool: return Prefix::bool_full(x.b);
    case EvLeaf::PuncA:
      return s.kind() == TypeKind::Plus ? Prefix::sum_a(emp(s.left())) : Prefix::star_done();
    case EvLeaf::PuncB:
      return s.kind() == TypeKind::Plus ? Prefix::sum_b(emp(s.right())) : Prefix::stp_a(emp(s.body()));
    case EvLeaf::CatPunc: return Prefix::cat_b(done_prefix(s.left()), emp(s.right()));
  }
  return emp(s);
}

// Appends p's events to out, each under the wrappers in `wraps`. Assumes p
// has type s.
template <class Pick>
void ser(const Prefix& p, const StreamType& s, Pick& pick, std::vector<EvWrap>& wraps, std::vector<Event>& out) {
  auto emit = [&](Event x) {
    x.path = wraps;
    out.push_back(std::move(x));
  };
  auto under = [&](EvWrap w, const Prefix& q, const StreamType& t) {
    wraps.push_back(w);
    ser(q, t, pick, wraps, out);
    wraps.pop_back();
  };
  switch (p.kind()) {
    case PKind::EpsEmp:
    case PKind::OneEmp:
    case PKind::IntEmp:
    case PKind::BoolEmp:
    case PKind::SumPEmp:
    case PKind::StarEmp: break;
    case PKind::OneFull: emit(Event::one()); break;
    case PKind::IntFull: emit(Event::int_(p.int_val())); break;
    case PKind::BoolFull: emit(Event::bool_(p.bool_val())); break;
    case PKind::ParP: {
      std::vector<EvWrap> wa = wraps, wb = wraps;
      wa.push_back(EvWrap::ParA);
      wb.push_back(EvWrap::ParB);
      std::vector<Event> xs, ys;
      ser(p.a(), s.left(), pick, wa, xs);
      ser(p.b(), s.right(), pick, wb, ys);
      size_t i = 0, j = 0;
      while (i < xs.size() || j < ys.size()) {
        bool left = j == ys.size() || (i < xs.size() && pick(xs.size() - i, ys.size() - j, i + j));
        out.push_back(left ? xs[i++] : ys[j++]);
      }
      break;
    }
    case PKind::CatPA: under(EvWrap::CatA, p.a(), s.left()); break;
    case PKind::CatPB:
      under(EvWrap::CatA, p.a(), s.left());
      emit(Event::cat_punc());
      ser(p.b(), s.right(), pick, wraps, out);
      break;
    case PKind::SumPA:
      emit(Event::punc_a());
      ser(p.a(), s.left(), pick, wraps, out);
      break;
    case PKind::SumPB:
      emit(Event::punc_b());
      ser(p.a(), s.right(), pick, wraps, out);
      break;
    case PKind::StarDone:
    case PKind::StpA:
    case PKind::StpB: {
      // Walk the spine iteratively; streams can be long.
      const Prefix* q = &p;
      while (q->kind() == PKind::StpB) {
        emit(Event::punc_b());
        under(EvWrap::CatA, q->a(), s.body());
        emit(Event::cat_punc());
        q = &q->b();
      }
      if (q->kind() == PKind::StarDone) {
        emit(Event::punc_a());
      } else if (q->kind() == PKind::StpA) {
        emit(Event::punc_b());
        under(EvWrap::CatA, q->a(), s.body());
      }
      break;
    }
  }
}

template <class Pick>
std::vector<Event> ser_top(const Prefix& p, const StreamType& s, Pick& pick) {
  if (!prefix_has_type(p, s)) fail(ErrorKind::IllTyped, "prefix " + p.str() + " does not have type " + s.str());
  std::vector<Event> out;
  std::vector<EvWrap> wraps;
  ser(p, s, pick, wraps, out);
  return out;
}

}  // namespace

Event Event::wrapped(EvWrap w) const {
  Event e = *this;
  e.path.insert(e.path.begin(), w);
  return e;
}

std::string Event::str() const {
  std::string s;
  for (auto w : path) s += std::string(wrap_tag(w)) + "(";
  s += leaf_tag(leaf);
  if (leaf == EvLeaf::Int) s += " " + std::to_string(n);
  if (leaf == EvLeaf::Bool) s += b ? " true" : " false";
  s += std::string(path.size(), ')');
  return s;
}

bool event_has_type(const Event& x, const StreamType& s) { return typed_at(x, 0, s); }

StreamType event_deriv(const Event& x, const StreamType& s) {
  if (!typed_at(x, 0, s)) fail(ErrorKind::IllTypedEvent, "event " + x.str() + " does not have type " + s.str());
  return deriv_at(x, 0, s);
}

Prefix event_to_prefix(const Event& x, const StreamType& s) {
  if (!typed_at(x, 0, s)) fail(ErrorKind::IllTypedEvent, "event " + x.str() + " does not have type " + s.str());
  return prefix_at(x, 0, s);
}

Prefix done_prefix(const StreamType& s) {
  switch (s.kind()) {
    case TypeKind::Eps: return Prefix::eps_emp();
    case TypeKind::Cat: return Prefix::cat_b(done_prefix(s.left()), done_prefix(s.right()));
    case TypeKind::Par: return Prefix::par(done_prefix(s.left()), done_prefix(s.right()));
    default: fail(ErrorKind::IllTyped, "type " + s.str() + " is not nullable");
  }
}

namespace {

// An event seen `d` wrappers deep.
struct At {
  const Event* x;
  size_t d;
  bool bare() const { return x->path.size() == d; }
  EvWrap head() const { return x->path[d]; }
};

// The left part of a catPunc-closed concatenation, completed.
Prefix close_left(const Prefix& l, const StreamType& s) { return concat_prefix(l, done_prefix(deriv_type(l, s))); }

// One pass over events already checked in order by deserialize; equal to
// folding concatenation over prefix_at, without re-walking the result.
Prefix build(const std::vector<At>& xs, const StreamType& s) {
  if (xs.empty()) return emp(s);
  switch (s.kind()) {
    case TypeKind::One: return Prefix::one_full();
    case TypeKind::Int: return Prefix::int_full(xs[0].x->n);
    case TypeKind::Bool: return Prefix::bool_full(xs[0].x->b);
    case TypeKind::Par: {
      std::vector<At> l, r;
      for (auto& a : xs) (a.head() == EvWrap::ParA ? l : r).push_back({a.x, a.d + 1});
      return Prefix::par(build(l, s.left()), build(r, s.right()));
    }
    case TypeKind::Cat: {
      std::vector<At> l;
      size_t i = 0;
      for (; i < xs.size() && !xs[i].bare(); ++i) l.push_back({xs[i].x, xs[i].d + 1});
      Prefix lp = build(l, s.left());
      if (i == xs.size()) return Prefix::cat_a(lp);
      std::vector<At> r(xs.begin() + static_cast<std::ptrdiff_t>(i) + 1, xs.end());
      return Prefix::cat_b(close_left(lp, s.left()), build(r, s.right()));
    }
    case TypeKind::Plus: {
      std::vector<At> rest(xs.begin() + 1, xs.end());
      if (xs[0].x->leaf == EvLeaf::PuncA) return Prefix::sum_a(build(rest, s.left()));
      return Prefix::sum_b(build(rest, s.right()));
    }
    case TypeKind::Star: {
      std::vector<Prefix> done;
      Prefix tail = Prefix::star_emp();
      size_t i = 0;
      while (i < xs.size()) {
        if (xs[i].x->leaf == EvLeaf::PuncA) {
          tail = Prefix::star_done();
          break;
        }
        std::vector<At> el;
        for (++i; i < xs.size() && !xs[i].bare(); ++i) el.push_back({xs[i].x, xs[i].d + 1});
        Prefix ep = build(el, s.body());
        if (i == xs.size()) {
          tail = Prefix::stp_a(ep);
          break;
        }
        done.push_back(close_left(ep, s.body()));
        ++i;  // the catPunc
      }
      for (auto it = done.rbegin(); it != done.rend(); ++it) tail = Prefix::stp_b(*it, tail);
      return tail;
    }
    default:
      fail(ErrorKind::IllTypedEvent, "event at type " + s.str());
  }
}

}  // namespace

Prefix deserialize(const std::vector<Event>& xs, const StreamType& s) {
  events_deriv(xs, s);
  std::vector<At> all;
  all.reserve(xs.size());
  for (auto& x : xs) all.push_back({&x, 0});
  return build(all, s);
}

StreamType events_deriv(const std::vector<Event>& xs, const StreamType& s) {
  StreamType cur = s;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (!typed_at(xs[i], 0, cur))
      fail(ErrorKind::IllTypedEvent,
           "event " + std::to_string(i) + " " + xs[i].str() + " does not have type " + cur.str());
    cur = deriv_at(xs[i], 0, cur);
  }
  return cur;
}

std::vector<Event> serialize(const Prefix& p, const StreamType& s) {
  auto pick = [](size_t, size_t, size_t k) { return k % 2 == 0; };
  return ser_top(p, s, pick);
}

std::vector<Event> serialize_shuffled(const Prefix& p, const StreamType& s, std::mt19937_64& rng) {
  auto pick = [&rng](size_t l, size_t r, size_t) {
    return std::uniform_int_distribution<size_t>(0, l + r - 1)(rng) < l;
  };
  return ser_top(p, s, pick);
}

int event_size(const Event& x) { return static_cast<int>(x.path.size()) + 1; }

int size_bound(const StreamType& s) {
  switch (s.kind()) {
    case TypeKind::Eps: return 0;
    case TypeKind::One:
    case TypeKind::Int:
    case TypeKind::Bool: return 1;
    case TypeKind::Par: return 1 + std::max(size_bound(s.left()), size_bound(s.right()));
    case TypeKind::Cat: return std::max(1 + size_bound(s.left()), size_bound(s.right()));
    case TypeKind::Plus: return std::max({1, size_bound(s.left()), size_bound(s.right())});
    case TypeKind::Star: return std::max(1, 1 + size_bound(s.body()));
    case TypeKind::Var: fail(ErrorKind::NonClosedTypeArg, "size bound of open type " + s.str());
  }
  return 0;
}

std::string event_to_json(const Event& x) {
  nlohmann::json path = nlohmann::json::array();
  for (auto w : x.path) path.push_back(wrap_tag(w));
  path.push_back(leaf_tag(x.leaf));
  nlohmann::json j;
  j["path"] = path;
  if (x.leaf == EvLeaf::Int)
    j["payload"] = x.n;
  else if (x.leaf == EvLeaf::Bool)
    j["payload"] = x.b;
  else
    j["payload"] = nullptr;
  return j.dump();
}

Event event_from_json(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::ParseError, std::string("bad event json: ") + e.what());
  }
  if (!j.is_object() || !j.contains("path") || !j["path"].is_array() || j["path"].empty())
    fail(ErrorKind::ParseError, "event needs a nonempty path: " + line);
  Event ev;
  const auto& path = j["path"];
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    std::string t = path[i].is_string() ? path[i].get<std::string>() : "";
    if (t == "parA") ev.path.push_back(EvWrap::ParA);
    else if (t == "parB") ev.path.push_back(EvWrap::ParB);
    else if (t == "catA") ev.path.push_back(EvWrap::CatA);
    else fail(ErrorKind::ParseError, "bad nesting tag '" + t + "' in " + line);
  }
  std::string leaf = path.back().is_string() ? path.back().get<std::string>() : "";
  nlohmann::json payload = j.contains("payload") ? j["payload"] : nlohmann::json();
  if (leaf == "one") {
    ev.leaf = EvLeaf::One;
  } else if (leaf == "int") {
    if (!payload.is_number_integer()) fail(ErrorKind::ParseError, "int event needs an integer payload: " + line);
    ev.leaf = EvLeaf::Int;
    ev.n = payload.get<std::int64_t>();
  } else if (leaf == "bool") {
    if (!payload.is_boolean()) fail(ErrorKind::ParseError, "bool event needs a boolean payload: " + line);
    ev.leaf = EvLeaf::Bool;
    ev.b = payload.get<bool>();
  } else if (leaf == "puncA") {
    ev.leaf = EvLeaf::PuncA;
  } else if (leaf == "puncB") {
    ev.leaf = EvLeaf::PuncB;
  } else if (leaf == "catPunc") {
    ev.leaf = EvLeaf::CatPunc;
  } else {
    fail(ErrorKind::ParseError, "bad leaf tag '" + leaf + "' in " + line);
  }
  return ev;
}

std::string events_to_text(const std::vector<Event>& xs) {
  std::string out;
  for (auto& x : xs) out += event_to_json(x) + "\n";
  return out;
}

std::vector<Event> events_from_text(const std::string& text) {
  std::vector<Event> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(event_from_json(line));
    } catch (const Error& e) {
      fail(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": " + e.detail());
    }
  }
  return out;
}

}  // namespace lst
