#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "patprof/atom.hpp"
#include "patprof/errors.hpp"

namespace patprof {

// Static-cost table for the built-in atoms, version 1.
//
// Costs were seeded from log2 of the estimated charset size and then tuned
// so that niche classes (Bin, DotDash, Base64) and broad classes (Punct,
// Symb, Any) do not displace more natural descriptions. Tests pin these
// numbers; bump the version when changing any of them.
inline constexpr int kDefaultCostVersion = 1;

struct DefaultAtomSpec {
  const char* name;
  const char* charset;  // nullptr for the regex atom / Any
  double cost;
};

inline constexpr DefaultAtomSpec kDefaultAtoms[] = {
    {"Lower", "a-z", 9.1},
    {"Upper", "A-Z", 8.2},
    {"TitleCaseWord", nullptr, 9.0},  // regex [A-Z][a-z]+
    {"Alpha", "a-zA-Z", 10.4},
    {"Space", "\\s", 6.2},
    {"DotDash", ".\\-", 16.0},
    {"AlphaDash", "a-zA-Z\\-", 13.2},
    {"AlphaSpace", "a-zA-Z\\s", 12.4},
    {"Bin", "01", 18.0},
    {"Digit", "0-9", 7.7},
    {"Hex", "a-fA-F0-9", 26.3},
    {"AlphaDigit", "a-zA-Z0-9", 14.8},
    {"AlphaDigitSpace", "a-zA-Z0-9\\s", 16.6},
    {"Punct", ".,:?/\\-", 40.0},
    {"Symb", "\\-.,:?/@#$%&*+=_()\\[\\]{}|\\\\\\^~<>;!'\"`", 160.0},
    {"Base64", "a-zA-Z0-9+/=", 32.0},
    {"Any", nullptr, 5000.0},
};

// Base cost of constant atoms: Q(Const_s) = kappa / |s|.
inline constexpr double kDefaultKappa = 5.0;

// The user-facing atom vocabulary. Atom names are unique; adding an atom
// under an existing name shadows it. Immutable in practice: build once,
// then share across learning calls.
class AtomUniverse {
 public:
  static AtomUniverse empty() { return AtomUniverse(); }

  // The 17 built-in atoms: the classes above (width 0) plus TitleCaseWord
  // as a regex atom and Any matching every character.
  static AtomUniverse defaults() {
    AtomUniverse u;
    for (const auto& spec : kDefaultAtoms) {
      std::string name = spec.name;
      if (name == "TitleCaseWord") {
        u.add(Atom::regex(name, "[A-Z][a-z]+", spec.cost));
      } else if (name == "Any") {
        u.add(Atom::char_class(name, CharSet::all(), spec.cost));
      } else {
        bool err = false;
        CharSet cs = parse_charset_spec(u32_from_ascii(spec.charset), &err);
        if (err) throw ConfigError(std::string("bad built-in charset for ") + spec.name);
        u.add(Atom::char_class(name, std::move(cs), spec.cost));
      }
    }
    return u;
  }

  void add(Atom a) {
    std::string name = a.kind() == AtomKind::Const ? a.key() : a.name();
    auto it = by_name_.find(name);
    if (it != by_name_.end()) {
      atoms_[it->second] = std::move(a);
      return;
    }
    by_name_.emplace(std::move(name), atoms_.size());
    atoms_.push_back(std::move(a));
  }

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

  const Atom* find(const std::string& name) const {
    auto it = by_name_.find(name);
    return it == by_name_.end() ? nullptr : &atoms_[it->second];
  }

  double kappa() const { return kappa_; }
  void set_kappa(double k) {
    if (!(k > 0.0)) throw ConfigError("kappa must be positive");
    kappa_ = k;
  }

  // Constant-string atom priced by the kappa/|s| rule.
  Atom constant(StrView lit) const {
    return Atom::constant(Str(lit), kappa_ / static_cast<double>(lit.size()));
  }

  // FNV-1a over the canonical atom list; used to validate caches.
  std::uint64_t fingerprint() const {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    auto mix = [&](const std::string& s) {
      for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
      }
      h ^= 0xFF;
      h *= 0x100000001B3ULL;
    };
    for (const Atom& a : atoms_) {
      mix(a.key());
      mix(std::to_string(a.cost()));
    }
    mix(std::to_string(kappa_));
    return h;
  }

 private:
  std::vector<Atom> atoms_;
  std::map<std::string, std::size_t> by_name_;
  double kappa_ = kDefaultKappa;
};

// Dictionary matcher: longest word in the list that is a prefix of the input.
inline PrefixFn dictionary_matcher(std::vector<Str> words) {
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
  return [words = std::move(words)](StrView s) -> std::size_t {
    std::size_t best = 0;
    for (const Str& w : words) {
      if (w.size() <= best || w.size() > s.size()) continue;
      if (s.compare(0, w.size(), w) == 0) best = w.size();
    }
    return best;
  };
}

inline std::vector<Str> load_word_list(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open word list: " + path.string());
  std::vector<Str> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto u32 = utf8_to_u32(line);
    if (!u32) throw ConfigError("word list is not valid UTF-8: " + path.string());
    words.push_back(std::move(*u32));
  }
  return words;
}

// Atom-config document:
//   { "atoms": [ { "name": ..., "kind": "const"|"class"|"regex"|"dictionary",
//                  "definition": ..., "cost": ... }, ... ] }
// Declared atoms extend the defaults; matching names shadow them.
inline AtomUniverse parse_universe(const nlohmann::json& doc,
                                   const std::filesystem::path& base_dir) {
  AtomUniverse u = AtomUniverse::defaults();
  if (doc.is_null()) return u;
  if (!doc.is_object()) throw ConfigError("atom config must be a JSON object");
  if (!doc.contains("atoms")) return u;
  const auto& arr = doc.at("atoms");
  if (!arr.is_array()) throw ConfigError("atom config: 'atoms' must be an array");

  for (const auto& entry : arr) {
    std::string name = entry.value("name", std::string());
    auto bad = [&](const std::string& why) -> ConfigError {
      return ConfigError("atom config entry '" + (name.empty() ? "<unnamed>" : name) +
                         "': " + why);
    };
    if (name.empty()) throw bad("missing name");
    if (!entry.contains("kind") || !entry.at("kind").is_string()) throw bad("missing kind");
    if (!entry.contains("cost") || !entry.at("cost").is_number()) throw bad("missing cost");
    double cost = entry.at("cost").get<double>();
    if (!(cost > 0.0)) throw bad("cost must be positive");
    std::string def = entry.value("definition", std::string());
    if (def.empty()) throw bad("missing definition");
    std::string kind = entry.at("kind").get<std::string>();

    if (kind == "const") {
      auto lit = utf8_to_u32(def);
      if (!lit || lit->empty()) throw bad("const definition must be nonempty UTF-8");
      Atom a = Atom::constant(std::move(*lit), cost);
      // Const atoms key by their literal; register under the declared name too.
      u.add(std::move(a));
    } else if (kind == "class") {
      auto spec = utf8_to_u32(def);
      if (!spec) throw bad("charset is not valid UTF-8");
      bool err = false;
      CharSet cs = parse_charset_spec(*spec, &err);
      if (err || cs.empty()) throw bad("bad charset ranges");
      u.add(Atom::char_class(name, std::move(cs), cost));
    } else if (kind == "regex") {
      try {
        u.add(Atom::regex(name, def, cost));
      } catch (const ConfigError& e) {
        throw bad(e.what());
      }
    } else if (kind == "dictionary") {
      std::filesystem::path p = def;
      if (p.is_relative()) p = base_dir / p;
      u.add(Atom::funct(name, dictionary_matcher(load_word_list(p)), cost));
    } else {
      throw bad("unknown kind '" + kind + "'");
    }
  }
  return u;
}

inline AtomUniverse load_universe(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open atom config: " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed atom config " + path.string() + ": " + e.what());
  }
  return parse_universe(doc, path.parent_path());
}

}  // namespace patprof
