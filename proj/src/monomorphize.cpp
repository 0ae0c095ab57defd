#include "lst/frontend.hpp"

namespace lst {

namespace {

BunchedContext close_ctx(const BunchedContext& g, const std::map<std::string, StreamType>& ts) {
  switch (g.kind()) {
    case CtxKind::Empty: return g;
    case CtxKind::Bind: return BunchedContext::bind(g.var(), close_type(g.type(), ts));
    case CtxKind::Comma: return BunchedContext::comma(close_ctx(g.left(), ts), close_ctx(g.right(), ts));
    case CtxKind::Semic: return BunchedContext::semic(close_ctx(g.left(), ts), close_ctx(g.right(), ts));
  }
  return g;
}

void leaf_types(const BunchedContext& g, std::vector<StreamType>& out) {
  switch (g.kind()) {
    case CtxKind::Empty: return;
    case CtxKind::Bind: out.push_back(g.type()); return;
    default:
      leaf_types(g.left(), out);
      leaf_types(g.right(), out);
  }
}

void check_sig(const std::string& where, const std::string& param, const MacroSig& sig,
               const std::map<std::string, StreamType>& ts, const RecDef& def) {
  auto mismatch = [&](const std::string& what) {
    fail(ErrorKind::SigMismatch, where + ": macro argument " + def.name + " for <" + param + "> " + what);
  };
  if (sig.hist.size() != def.omega.size()) mismatch("has the wrong number of historical parameters");
  for (size_t i = 0; i < sig.hist.size(); ++i)
    if (!(flatten_type(close_type(sig.hist[i], ts)) == def.omega[i].second))
      mismatch("has historical parameter " + std::to_string(i + 1) + " of type " + def.omega[i].second.str());
  std::vector<StreamType> got;
  leaf_types(def.gamma, got);
  if (got.size() != sig.params.size()) mismatch("has the wrong number of stream parameters");
  for (size_t i = 0; i < got.size(); ++i)
    if (!(close_type(sig.params[i], ts) == got[i]))
      mismatch("has stream parameter " + std::to_string(i + 1) + " of type " + got[i].str());
  if (!(close_type(sig.ret, ts) == def.ret)) mismatch("returns " + def.ret.str());
}

}  // namespace

Compiler::Compiler(const std::string& program, bool with_prelude, const std::string* prelude_override) {
  if (with_prelude) {
    for (auto& d : parse_program(prelude_override ? *prelude_override : prelude_source())) {
      d.from_prelude = true;
      index_[d.name] = decls_.size();
      decls_.push_back(std::move(d));
    }
  }
  for (auto& d : parse_program(program)) {
    auto it = index_.find(d.name);
    if (it != index_.end()) {
      if (!decls_[it->second].from_prelude)
        fail(ErrorKind::ScopeError, "line " + std::to_string(d.line) + ": duplicate function " + d.name);
      decls_[it->second] = std::move(d);
      continue;
    }
    index_[d.name] = decls_.size();
    decls_.push_back(std::move(d));
  }
}

bool Compiler::has(const std::string& name) const { return index_.count(name) > 0; }

const SurfaceDecl& Compiler::decl(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) fail(ErrorKind::UnknownFunction, "unknown function " + name);
  return decls_[it->second];
}

RecDefP Compiler::instantiate(const FunRef& ref) {
  std::string key = ref.key();
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  const SurfaceDecl& d = decl(ref.name);
  if (in_progress_.count(key))
    fail(ErrorKind::MacroCycle, "instantiating " + key + " requires itself (only direct self-recursion is supported)");
  if (ref.targs.size() != d.type_params.size())
    fail(ErrorKind::ArityMismatch, d.name + " takes " + std::to_string(d.type_params.size()) +
                                       " type arguments, got " + std::to_string(ref.targs.size()));
  if (ref.margs.size() != d.macro_params.size())
    fail(ErrorKind::ArityMismatch, d.name + " takes " + std::to_string(d.macro_params.size()) +
                                       " macro arguments, got " + std::to_string(ref.margs.size()));
  in_progress_.insert(key);
  struct Guard {
    std::set<std::string>& s;
    std::string k;
    ~Guard() { s.erase(k); }
  } guard{in_progress_, key};

  ElabEnv env;
  env.decl = &d;
  for (size_t i = 0; i < ref.targs.size(); ++i) {
    if (!ref.targs[i].is_closed())
      fail(ErrorKind::NonClosedTypeArg, "type argument " + ref.targs[i].str() + " to " + d.name + " is not closed");
    env.tsubst[d.type_params[i]] = ref.targs[i];
  }
  for (size_t i = 0; i < ref.margs.size(); ++i) {
    RecDefP target = instantiate(ref.margs[i]);
    check_sig(key, d.macro_params[i].first, d.macro_params[i].second, env.tsubst, *target);
    env.msubst[d.macro_params[i].first] = ref.margs[i];
  }
  env.resolve = [this](const FunRef& r) { return instantiate(r); };

  auto def = std::make_shared<RecDef>();
  def->name = key;
  for (auto& [h, t] : d.hist_params) def->omega.emplace_back(h, flatten_type(close_type(t, env.tsubst)));
  def->gamma = close_ctx(d.params, env.tsubst);
  def->ret = close_type(d.ret, env.tsubst);
  def->body = elaborate(d.body, env);
  cache_[key] = def;
  return def;
}

CompiledEntry Compiler::compile(const FunRef& ref, const std::vector<HistTerm>& hargs) {
  RecDefP def = instantiate(ref);
  if (hargs.size() != def->omega.size())
    fail(ErrorKind::ArityMismatch, def->name + " takes " + std::to_string(def->omega.size()) +
                                       " historical arguments, got " + std::to_string(hargs.size()));
  Term call = tm::fix(def, hargs, mirror_args(def->gamma, "", Term()));
  TypeChecker tc(true);
  Typing ty = tc.check({}, def->gamma, std::nullopt, call, def->ret);
  CompiledEntry out;
  out.term = tc.result();
  out.def = out.term->def;
  out.gamma = def->gamma;
  out.type = ty.type;
  out.inert = ty.inert;
  out.warnings = tc.warnings();
  return out;
}

}  // namespace lst
