// delta: check, run and fuzz delta programs; convert between events and
// prefixes.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lst/events.hpp"
#include "lst/frontend.hpp"
#include "lst/harness.hpp"
#include "lst/semantics.hpp"

using namespace lst;

namespace {

enum Exit { kOk = 0, kDiagnostic = 1, kRuntime = 2, kCounterexample = 3 };

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::IoError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int exit_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::FuelExhausted:
    case ErrorKind::DivByZero:
    case ErrorKind::RuntimeTypeFault:
    case ErrorKind::IllTypedEvent:
    case ErrorKind::Incompatible:
    case ErrorKind::NotMaximal:
    case ErrorKind::MissingBinding: return kRuntime;
    default: return kDiagnostic;
  }
}

struct ProgramOpts {
  std::string file;
  std::string prelude;
  bool no_prelude = false;
  std::string entry;
  std::vector<std::string> type_args, macro_args, hist_args;
};

void add_program_opts(CLI::App* cmd, ProgramOpts& o, bool file_required) {
  auto* f = cmd->add_option("file", o.file, "delta source file");
  if (file_required) f->required();
  cmd->add_option("--entry", o.entry, "function to compile");
  cmd->add_option("--type-arg", o.type_args, "type argument, in order (e.g. Int)");
  cmd->add_option("--macro-arg", o.macro_args, "macro argument, in order (e.g. liftP[Int]<pos>)");
  cmd->add_option("--hist-arg", o.hist_args, "historical argument, in order (e.g. 50)");
  cmd->add_option("--prelude", o.prelude, "replace the embedded prelude with this file");
  cmd->add_flag("--no-prelude", o.no_prelude, "do not load the prelude");
}

std::unique_ptr<Compiler> make_compiler(const ProgramOpts& o) {
  std::string src = o.file.empty() ? "" : read_file(o.file);
  if (!o.prelude.empty()) {
    std::string pre = read_file(o.prelude);
    return std::make_unique<Compiler>(src, true, &pre);
  }
  return std::make_unique<Compiler>(src, !o.no_prelude);
}

FunRef entry_ref(const ProgramOpts& o) {
  FunRef r;
  r.name = o.entry;
  for (auto& t : o.type_args) r.targs.push_back(parse_type(t));
  for (auto& m : o.macro_args) r.margs.push_back(resolve_macro_arg(parse_macro_arg(m), {}, {}));
  return r;
}

std::vector<HistTerm> hist_args(const ProgramOpts& o) {
  std::vector<HistTerm> out;
  for (auto& h : o.hist_args) out.push_back(parse_hist(h));
  return out;
}

void print_entry(const std::string& label, const CompiledEntry& c) {
  std::cout << label << " : " << c.gamma.str() << " -> " << c.type.str() << " @ " << inert_name(c.inert) << "\n";
  for (auto& w : c.warnings) std::cout << "warning: " << w << "\n";
}

int cmd_check(const ProgramOpts& o) {
  auto comp = make_compiler(o);
  if (!o.entry.empty()) {
    FunRef ref = entry_ref(o);
    print_entry(ref.key(), comp->compile(ref, hist_args(o)));
    return kOk;
  }
  bool only_prelude = o.file.empty();
  for (auto& d : comp->decls()) {
    if (d.from_prelude != only_prelude) continue;
    if (!d.type_params.empty() || !d.macro_params.empty() || !d.hist_params.empty()) {
      // Needs arguments; instantiate what can be, report the rest.
      if (d.type_params.empty() && d.macro_params.empty()) {
        RecDefP def = comp->instantiate(FunRef{d.name, {}, {}});
        TypeChecker tc(true);
        auto [checked, inert] = tc.check_def(def);
        std::cout << d.name << " : {";
        for (size_t i = 0; i < checked->omega.size(); ++i)
          std::cout << (i ? ", " : "") << checked->omega[i].first << " : " << checked->omega[i].second.str();
        std::cout << "} " << checked->gamma.str() << " -> " << checked->ret.str() << " @ " << inert_name(inert)
                  << "\n";
        for (auto& w : tc.warnings()) std::cout << "warning: " << w << "\n";
      } else {
        std::cout << d.name << " : generic; check with --entry and arguments\n";
      }
      continue;
    }
    print_entry(d.name, comp->compile(FunRef{d.name, {}, {}}));
  }
  return kOk;
}

struct RunOpts {
  ProgramOpts prog;
  std::vector<std::string> inputs;
  std::string chunk = "whole";
  std::int64_t fuel = kDefaultFuel;
  bool debug_types = false;
  bool print_prefix = false;
};

ChannelEvents read_inputs(const std::vector<std::string>& specs) {
  ChannelEvents in;
  for (auto& s : specs) {
    auto eq = s.find('=');
    if (eq == std::string::npos) fail(ErrorKind::ParseError, "--in expects var=file, got " + s);
    in[s.substr(0, eq)] = events_from_text(read_file(s.substr(eq + 1)));
  }
  return in;
}

int cmd_run(const RunOpts& o) {
  if (o.prog.entry.empty()) fail(ErrorKind::UnknownFunction, "run needs --entry");
  auto comp = make_compiler(o.prog);
  CompiledEntry c = comp->compile(entry_ref(o.prog), hist_args(o.prog));
  auto chunks = chunk_inputs(read_inputs(o.inputs), c.gamma, parse_chunking(o.chunk));
  RunOptions ro;
  ro.fuel_per_step = o.fuel;
  ro.debug_types = o.debug_types;
  RunResult r = run_incremental(c.term, c.gamma, c.type, chunks, ro);
  if (o.print_prefix) {
    std::cout << concat_outputs(r.outputs, c.type).str() << "\n";
    return kOk;
  }
  StreamType cur = c.type;
  for (auto& p : r.outputs) {
    std::cout << events_to_text(serialize(p, cur));
    cur = deriv_type(p, cur);
  }
  return kOk;
}

int cmd_serialize(const std::string& type, const std::string& value, const std::string& events) {
  if (value.empty() && events.empty()) fail(ErrorKind::ParseError, "serialize needs --value or --events");
  StreamType s = parse_type(type);
  Prefix p;
  if (!events.empty())
    p = deserialize(events_from_text(read_file(events)), s);
  else
    p = value_to_prefix(hist_eval(parse_hist(value)), s);
  std::cout << events_to_text(serialize(p, s));
  return kOk;
}

int cmd_deserialize(const std::string& type, const std::string& file) {
  StreamType s = parse_type(type);
  std::cout << deserialize(events_from_text(read_file(file)), s).str() << "\n";
  return kOk;
}

int cmd_fuzz(const ProgramOpts& o, size_t trials, std::vector<std::uint64_t> seeds, int budget, std::int64_t fuel,
             bool debug) {
  if (o.entry.empty()) fail(ErrorKind::UnknownFunction, "fuzz needs --entry");
  auto comp = make_compiler(o);
  CompiledEntry c = comp->compile(entry_ref(o), hist_args(o));
  RunOptions ro;
  ro.fuel_per_step = fuel;
  ro.debug_types = debug;
  if (seeds.empty()) seeds = {1, 2, 3};
  size_t total = 0, failures = 0;
  for (auto seed : seeds) {
    FuzzReport rep = fuzz_entry(c.term, c.gamma, c.type, trials, seed, budget, ro);
    total += rep.trials;
    failures += rep.failures;
    if (rep.failures) {
      std::cout << "counterexample: " << rep.first_failure << "\n";
      break;
    }
  }
  std::cout << "trials " << total << ", failures " << failures << "\n";
  return failures ? kCounterexample : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"delta: typed stream programs"};
  app.require_subcommand(1);

  ProgramOpts check_o;
  auto* check = app.add_subcommand("check", "typecheck a program (the prelude when no file is given)");
  add_program_opts(check, check_o, false);

  RunOpts run_o;
  auto* run = app.add_subcommand("run", "run an entry over event files");
  add_program_opts(run, run_o.prog, true);
  run->add_option("--in", run_o.inputs, "input channel, var=file");
  run->add_option("--chunk", run_o.chunk, "whole | event | k=N | random:SEED");
  run->add_option("--fuel", run_o.fuel, "fix unfolds allowed per step");
  run->add_flag("--debug-types", run_o.debug_types, "re-typecheck the residual after every step");
  run->add_flag("--print-prefix", run_o.print_prefix, "print the whole output prefix instead of events");

  std::string ser_type, ser_value, ser_events;
  auto* ser = app.add_subcommand("serialize", "canonical events for a value or an event file");
  ser->add_option("--type", ser_type, "stream type")->required();
  auto* v = ser->add_option("--value", ser_value, "historical value of a complete stream");
  auto* ev = ser->add_option("--events", ser_events, "event file to canonicalize");
  v->excludes(ev);

  std::string de_type, de_file;
  auto* de = app.add_subcommand("deserialize", "prefix denoted by an event file");
  de->add_option("--type", de_type, "stream type")->required();
  de->add_option("file", de_file, "event file")->required();

  ProgramOpts fuzz_o;
  size_t trials = 100;
  std::vector<std::uint64_t> seeds;
  int budget = 4;
  std::int64_t fuzz_fuel = kDefaultFuel;
  bool fuzz_debug = false;
  auto* fuzz = app.add_subcommand("fuzz", "compare random chunkings and interleavings with the batch step");
  add_program_opts(fuzz, fuzz_o, true);
  fuzz->add_option("--trials", trials, "trials per seed");
  fuzz->add_option("--seed", seeds, "seeds (default 1 2 3)");
  fuzz->add_option("--budget", budget, "size budget for generated inputs");
  fuzz->add_option("--fuel", fuzz_fuel, "fix unfolds allowed per step");
  fuzz->add_flag("--debug-types", fuzz_debug, "re-typecheck residuals");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check) return cmd_check(check_o);
    if (*run) return cmd_run(run_o);
    if (*ser) return cmd_serialize(ser_type, ser_value, ser_events);
    if (*de) return cmd_deserialize(de_type, de_file);
    if (*fuzz) return cmd_fuzz(fuzz_o, trials, seeds, budget, fuzz_fuel, fuzz_debug);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_for(e);
  }
  return kOk;
}
