#pragma once

// The library listings in tests/corpus/library.delta at representative
// closed types, shared by the unit tests and the acceptance binary.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lst/frontend.hpp"
#include "lst/types.hpp"

namespace corpus {

struct Entry {
  std::string name;
  std::vector<std::string> targs;
  std::vector<std::string> margs;
  std::vector<std::string> hargs;
};

inline const std::vector<Entry>& entries() {
  static const std::vector<Entry> all = {
      {"map", {"Int", "Int"}, {"incr"}, {}},
      {"mapMaybe", {"Int", "Int"}, {"liftP[Int]<big>"}, {}},
      {"liftP", {"Int"}, {"big"}, {}},
      {"filter", {"Int"}, {"big"}, {}},
      {"fold", {"Int", "Int"}, {"addAcc"}, {"0"}},
      {"runningFold", {"Int", "Int"}, {"addAcc"}, {"0"}},
      {"head", {"Int"}, {}, {}},
      {"thresh", {}, {}, {"50"}},
      {"averageSingle", {}, {}, {}},
      {"averageAbove", {}, {}, {"50"}},
      {"roundRobin", {"Int"}, {}, {"true"}},
      {"decPartition", {"Int", "Int", "Int"}, {"splitBig"}, {}},
      {"firstN", {"Int"}, {}, {"2"}},
      {"tumble", {"Int"}, {}, {"2"}},
      {"parsepairs", {"Int"}, {}, {}},
      {"slidingWindower", {"Int"}, {}, {"3", "nil"}},
      {"tilFirstPunc", {"Int"}, {}, {}},
      {"puncWindow", {"Int"}, {}, {}},
      {"sync", {"Int", "Bool"}, {}, {}},
  };
  return all;
}

inline std::string source() {
  std::ifstream in(std::string(LST_SOURCE_DIR) + "/tests/corpus/library.delta");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline lst::FunRef ref(const Entry& e) {
  lst::FunRef r;
  r.name = e.name;
  for (auto& t : e.targs) r.targs.push_back(lst::parse_type(t));
  for (auto& m : e.margs) r.margs.push_back(lst::resolve_macro_arg(lst::parse_macro_arg(m), {}, {}));
  return r;
}

inline lst::CompiledEntry compile(lst::Compiler& c, const Entry& e) {
  std::vector<lst::HistTerm> hs;
  for (auto& h : e.hargs) hs.push_back(lst::parse_hist(h));
  return c.compile(ref(e), hs);
}

inline const Entry& find(const std::string& name) {
  for (auto& e : entries())
    if (e.name == name) return e;
  throw std::runtime_error("no corpus entry " + name);
}

}  // namespace corpus
