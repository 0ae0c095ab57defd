#include "oracles.hpp"

#include <algorithm>
#include <stdexcept>

namespace oracle {

using lst::PKind;
using lst::TypeKind;

namespace {

std::vector<StreamType> bases() {
  return {StreamType::eps(), StreamType::one(), StreamType::int_(), StreamType::bool_()};
}

StreamType random_type(int depth, std::mt19937_64& rng) {
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  if (depth == 0) return bases()[pick(4)];
  switch (pick(4)) {
    case 0: return StreamType::star(random_type(depth - 1, rng));
    default: {
      // One side carries the full depth.
      StreamType deep = random_type(depth - 1, rng);
      StreamType other = random_type(pick(depth), rng);
      if (pick(2)) std::swap(deep, other);
      int k = pick(3);
      if (k == 0) return StreamType::cat(deep, other);
      if (k == 1) return StreamType::plus(deep, other);
      return StreamType::par(deep, other);
    }
  }
}

struct Gen {
  int star_len;
  size_t cap;

  std::vector<Prefix> of(const StreamType& s) { return go(s, star_len); }

  std::vector<Prefix> go(const StreamType& s, int budget) {
    std::vector<Prefix> out;
    auto push = [&](Prefix p) {
      if (out.size() < cap) out.push_back(std::move(p));
    };
    switch (s.kind()) {
      case TypeKind::Eps: push(Prefix::eps_emp()); break;
      case TypeKind::One:
        push(Prefix::one_emp());
        push(Prefix::one_full());
        break;
      case TypeKind::Int:
        push(Prefix::int_emp());
        push(Prefix::int_full(0));
        push(Prefix::int_full(7));
        break;
      case TypeKind::Bool:
        push(Prefix::bool_emp());
        push(Prefix::bool_full(false));
        push(Prefix::bool_full(true));
        break;
      case TypeKind::Par:
        for (auto& a : go(s.left(), budget))
          for (auto& b : go(s.right(), budget)) push(Prefix::par(a, b));
        break;
      case TypeKind::Cat:
        for (auto& a : go(s.left(), budget)) {
          push(Prefix::cat_a(a));
          if (maximal(a))
            for (auto& b : go(s.right(), budget)) push(Prefix::cat_b(a, b));
        }
        break;
      case TypeKind::Plus:
        push(Prefix::sum_emp());
        for (auto& a : go(s.left(), budget)) push(Prefix::sum_a(a));
        for (auto& b : go(s.right(), budget)) push(Prefix::sum_b(b));
        break;
      case TypeKind::Star:
        push(Prefix::star_emp());
        push(Prefix::star_done());
        if (budget > 0) {
          auto heads = go(s.body(), budget - 1);
          for (auto& a : heads) {
            push(Prefix::stp_a(a));
            if (maximal(a))
              for (auto& rest : go(s, budget - 1)) push(Prefix::stp_b(a, rest));
          }
        }
        break;
      case TypeKind::Var: break;
    }
    return out;
  }
};

}  // namespace

std::vector<StreamType> types_to_depth(int depth) {
  std::vector<StreamType> out = bases();
  std::vector<StreamType> prev = out;
  for (int d = 1; d <= depth; ++d) {
    std::vector<StreamType> next = bases();
    for (auto& a : prev) {
      next.push_back(StreamType::star(a));
      for (auto& b : prev) {
        next.push_back(StreamType::cat(a, b));
        next.push_back(StreamType::plus(a, b));
        next.push_back(StreamType::par(a, b));
      }
    }
    prev = next;
  }
  return prev;
}

std::vector<StreamType> sample_types(int depth, size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<StreamType> out;
  for (size_t i = 0; i < n; ++i) out.push_back(random_type(depth, rng));
  return out;
}

std::vector<Prefix> all_prefixes(const StreamType& s, int star_len, size_t cap) {
  return Gen{star_len, cap}.of(s);
}

bool has_type(const Prefix& p, const StreamType& s) {
  switch (p.kind()) {
    case PKind::EpsEmp: return s.kind() == TypeKind::Eps;
    case PKind::OneEmp:
    case PKind::OneFull: return s.kind() == TypeKind::One;
    case PKind::IntEmp:
    case PKind::IntFull: return s.kind() == TypeKind::Int;
    case PKind::BoolEmp:
    case PKind::BoolFull: return s.kind() == TypeKind::Bool;
    case PKind::ParP: return s.kind() == TypeKind::Par && has_type(p.a(), s.left()) && has_type(p.b(), s.right());
    case PKind::CatPA: return s.kind() == TypeKind::Cat && has_type(p.a(), s.left());
    case PKind::CatPB:
      return s.kind() == TypeKind::Cat && has_type(p.a(), s.left()) && maximal(p.a()) && has_type(p.b(), s.right());
    case PKind::SumPEmp: return s.kind() == TypeKind::Plus;
    case PKind::SumPA: return s.kind() == TypeKind::Plus && has_type(p.a(), s.left());
    case PKind::SumPB: return s.kind() == TypeKind::Plus && has_type(p.a(), s.right());
    case PKind::StarEmp:
    case PKind::StarDone: return s.kind() == TypeKind::Star;
    case PKind::StpA: return s.kind() == TypeKind::Star && has_type(p.a(), s.body());
    case PKind::StpB: return s.kind() == TypeKind::Star && has_type(p.a(), s.body()) && maximal(p.a()) && has_type(p.b(), s);
  }
  return false;
}

bool maximal(const Prefix& p) {
  switch (p.kind()) {
    case PKind::EpsEmp:  // both empty and maximal
    case PKind::OneFull:
    case PKind::IntFull:
    case PKind::BoolFull:
    case PKind::StarDone: return true;
    case PKind::ParP:
    case PKind::CatPB:
    case PKind::StpB: return maximal(p.a()) && maximal(p.b());
    case PKind::SumPA:
    case PKind::SumPB: return maximal(p.a());
    default: return false;
  }
}

bool empty(const Prefix& p) {
  switch (p.kind()) {
    case PKind::EpsEmp:
    case PKind::OneEmp:
    case PKind::IntEmp:
    case PKind::BoolEmp:
    case PKind::SumPEmp:
    case PKind::StarEmp: return true;
    case PKind::ParP: return empty(p.a()) && empty(p.b());
    case PKind::CatPA: return empty(p.a());
    default: return false;
  }
}

std::optional<StreamType> deriv(const Prefix& p, const StreamType& s) {
  if (!has_type(p, s)) return std::nullopt;
  switch (p.kind()) {
    case PKind::OneFull:
    case PKind::IntFull:
    case PKind::BoolFull:
    case PKind::StarDone: return StreamType::eps();
    case PKind::ParP: return StreamType::par(*deriv(p.a(), s.left()), *deriv(p.b(), s.right()));
    case PKind::CatPA: return StreamType::cat(*deriv(p.a(), s.left()), s.right());
    case PKind::CatPB: return deriv(p.b(), s.right());
    case PKind::SumPA: return deriv(p.a(), s.left());
    case PKind::SumPB: return deriv(p.a(), s.right());
    case PKind::StpA: return StreamType::cat(*deriv(p.a(), s.body()), s);
    case PKind::StpB: return deriv(p.b(), s);
    default: return s;  // the empty prefixes
  }
}

size_t event_count(const Prefix& p) {
  switch (p.kind()) {
    case PKind::OneFull:
    case PKind::IntFull:
    case PKind::BoolFull:
    case PKind::StarDone: return 1;
    case PKind::ParP: return event_count(p.a()) + event_count(p.b());
    case PKind::CatPA: return event_count(p.a());
    case PKind::CatPB: return event_count(p.a()) + 1 + event_count(p.b());
    case PKind::SumPA:
    case PKind::SumPB: return 1 + event_count(p.a());
    case PKind::StpA: return 1 + event_count(p.a());
    case PKind::StpB: return 1 + event_count(p.a()) + 1 + event_count(p.b());
    default: return 0;
  }
}

Prefix star(const std::vector<Prefix>& xs) {
  Prefix out = Prefix::star_done();
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) out = Prefix::stp_b(*it, out);
  return out;
}

std::vector<Prefix> items(const Prefix& p) {
  std::vector<Prefix> out;
  const Prefix* cur = &p;
  while (cur->kind() == PKind::StpB) {
    out.push_back(cur->a());
    cur = &cur->b();
  }
  if (cur->kind() != PKind::StarDone) throw std::runtime_error("items: incomplete star " + p.str());
  return out;
}

Prefix ints(const Ints& xs) {
  std::vector<Prefix> ps;
  for (auto x : xs) ps.push_back(Prefix::int_full(x));
  return star(ps);
}

Ints ints_of(const Prefix& p) {
  Ints out;
  for (auto& x : items(p)) {
    if (x.kind() != PKind::IntFull) throw std::runtime_error("ints_of: not an int " + x.str());
    out.push_back(x.int_val());
  }
  return out;
}

std::vector<Ints> int_lists_of(const Prefix& p) {
  std::vector<Ints> out;
  for (auto& w : items(p)) {
    if (w.kind() == PKind::CatPB) {
      Ints run{w.a().int_val()};
      for (auto x : ints_of(w.b())) run.push_back(x);
      out.push_back(run);
    } else {
      out.push_back(ints_of(w));
    }
  }
  return out;
}

std::vector<Ints> thresh(const Ints& xs, std::int64_t t) {
  std::vector<Ints> runs;
  bool in_run = false;
  for (auto x : xs) {
    if (x > t) {
      if (!in_run) runs.emplace_back();
      runs.back().push_back(x);
      in_run = true;
    } else {
      in_run = false;
    }
  }
  return runs;
}

Ints average_above(const Ints& xs, std::int64_t t) {
  Ints out;
  for (auto& r : thresh(xs, t)) {
    std::int64_t sum = 0;
    for (auto x : r) sum += x;
    out.push_back(sum / static_cast<std::int64_t>(r.size()));
  }
  return out;
}

Ints map_incr(const Ints& xs) {
  Ints out;
  for (auto x : xs) out.push_back(x + 1);
  return out;
}

Ints filter_big(const Ints& xs) {
  Ints out;
  std::copy_if(xs.begin(), xs.end(), std::back_inserter(out), [](auto x) { return x > 10; });
  return out;
}

std::int64_t fold_sum(const Ints& xs, std::int64_t acc) {
  for (auto x : xs) acc += x;
  return acc;
}

Ints running_sum(const Ints& xs, std::int64_t acc) {
  Ints out;
  for (auto x : xs) out.push_back(acc += x);
  return out;
}

std::pair<Ints, Ints> round_robin(const Ints& xs, bool b) {
  std::pair<Ints, Ints> out;
  for (auto x : xs) {
    (b ? out.first : out.second).push_back(x);
    b = !b;
  }
  return out;
}

std::pair<Ints, Ints> dec_partition(const Ints& xs) {
  std::pair<Ints, Ints> out;
  for (auto x : xs) (x > 10 ? out.first : out.second).push_back(x);
  return out;
}

std::pair<Ints, Ints> first_n(const Ints& xs, std::int64_t n) {
  size_t k = static_cast<size_t>(std::clamp<std::int64_t>(n, 0, static_cast<std::int64_t>(xs.size())));
  return {Ints(xs.begin(), xs.begin() + k), Ints(xs.begin() + k, xs.end())};
}

std::vector<Ints> tumble(const Ints& xs, std::int64_t k) {
  std::vector<Ints> out;
  for (size_t i = 0; i < xs.size(); i += k)
    out.emplace_back(xs.begin() + i, xs.begin() + std::min(xs.size(), i + static_cast<size_t>(k)));
  return out;
}

std::vector<std::pair<std::int64_t, std::int64_t>> parsepairs(const Ints& xs) {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  for (size_t i = 0; i + 1 < xs.size(); i += 2) out.emplace_back(xs[i], xs[i + 1]);
  return out;
}

// Windows keep the newest element first, as the listing conses onto acc.
std::vector<Ints> sliding(const Ints& xs, std::int64_t k) {
  std::vector<Ints> out;
  Ints acc;
  for (auto x : xs) {
    if (static_cast<std::int64_t>(acc.size()) >= k && !acc.empty()) acc.pop_back();
    acc.insert(acc.begin(), x);
    out.push_back(acc);
  }
  return out;
}

std::vector<Ints> punc_window(const Punc& xs) {
  std::vector<Ints> out;
  if (xs.empty()) return out;
  Ints cur;
  for (auto& x : xs) {
    if (x) {
      cur.push_back(*x);
    } else {
      out.push_back(cur);
      cur.clear();
    }
  }
  // A trailing window without a closing mark is still emitted.
  if (!xs.back().has_value()) return out;
  out.push_back(cur);
  return out;
}

}  // namespace oracle
