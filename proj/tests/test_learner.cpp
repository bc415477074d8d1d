#include <catch2/catch.hpp>

#include <set>

#include "oracles.hpp"
#include "patprof/learner.hpp"
#include "support.hpp"

using namespace patprof;
using testutil::u;
using testutil::us;

namespace {

std::vector<StrView> views(const std::vector<Str>& strings) {
  return std::vector<StrView>(strings.begin(), strings.end());
}

bool contains_atom(const std::vector<Atom>& atoms, const std::string& key) {
  for (const Atom& a : atoms)
    if (a.key() == key) return true;
  return false;
}

std::set<std::string> pattern_keys(const std::vector<Pattern>& ps) {
  std::set<std::string> keys;
  for (const Pattern& p : ps) keys.insert(p.key());
  return keys;
}

AtomUniverse reduced(std::initializer_list<const char*> names) {
  AtomUniverse defaults = AtomUniverse::defaults();
  AtomUniverse uni = AtomUniverse::empty();
  for (const char* n : names) uni.add(*defaults.find(n));
  return uni;
}

}  // namespace

TEST_CASE("compatible atoms on the postal-code example") {
  auto data = us({"V6E3V6", "V6C2S6", "V6V1X5", "V6X3S4"});
  auto vs = views(data);
  auto atoms = compatible_atoms(vs, AtomUniverse::defaults());

  CHECK(atoms.size() == 18);
  CHECK(contains_atom(atoms, "C:V6"));
  CHECK(contains_atom(atoms, "C:V"));
  CHECK(contains_atom(atoms, "K:Upper:1"));
  CHECK(contains_atom(atoms, "K:Upper:0"));
  CHECK(contains_atom(atoms, "K:AlphaSpace:0"));
  CHECK(contains_atom(atoms, "K:AlphaDigit:6"));
  CHECK_FALSE(contains_atom(atoms, "K:Digit:0"));
  CHECK_FALSE(contains_atom(atoms, "K:Lower:0"));
}

TEST_CASE("compatible atoms fall back to constants when no class fits") {
  AtomUniverse only_digit = reduced({"Digit"});
  auto data = us({"a"});
  auto vs = views(data);
  auto atoms = compatible_atoms(vs, only_digit);
  REQUIRE(atoms.size() == 1);
  CHECK(atoms[0].key() == "C:a");
}

TEST_CASE("width variants appear only when the run length is uniform") {
  AtomUniverse only_lower = reduced({"Lower"});
  auto data = us({"ab", "cd"});
  auto vs = views(data);
  auto atoms = compatible_atoms(vs, only_lower);
  REQUIRE(atoms.size() == 2);  // Lower+ and Lower^2; empty common prefix
  CHECK(contains_atom(atoms, "K:Lower:0"));
  CHECK(contains_atom(atoms, "K:Lower:2"));

  auto uneven = us({"ab", "cde"});
  auto uneven_views = views(uneven);
  auto atoms2 = compatible_atoms(uneven_views, only_lower);
  REQUIRE(atoms2.size() == 1);
  CHECK(atoms2[0].key() == "K:Lower:0");
}

TEST_CASE("learning over only empty strings yields the Empty pattern") {
  std::vector<Str> data = {Str(), Str()};
  PatternGraph g = learn_patterns(data, AtomUniverse::defaults());
  auto ps = g.patterns(4);
  REQUIRE(ps.size() == 1);
  CHECK(ps[0].is_empty_pattern());
  BestPattern best = g.best();
  REQUIRE(best.pattern.has_value());
  CHECK(best.pattern->is_empty_pattern());
  CHECK(best.cost == 0.0);
}

TEST_CASE("mixing empty and nonempty strings yields bottom") {
  auto data = us({"", "a"});
  BestPattern best = learn_best_pattern(data, AtomUniverse::defaults());
  CHECK(best.is_bottom());
  CHECK(best.cost == kInfiniteCost);
}

TEST_CASE("gender example: graph holds both candidate patterns, best wins") {
  auto data = us({"Male", "Female"});
  PatternGraph g = learn_patterns(data, AtomUniverse::defaults());

  auto keys = pattern_keys(g.patterns(4));
  CHECK(keys.count("K:Upper:1|K:Lower:0") == 1);
  CHECK(keys.count("K:Upper:1|K:Hex:1|K:Lower:0") == 1);

  BestPattern best = g.best();
  REQUIRE(best.pattern.has_value());
  CHECK(best.pattern->human() == "U·Lower⁺");
  CHECK(best.cost == Approx(8.9).margin(0.05));
  CHECK(best.cost == Approx(pattern_cost_total(*best.pattern, data)));
}

TEST_CASE("graph for a trailing-noise pair contains no digit-final pattern") {
  // "1817" and "1813?" disagree after the digits, so every shared pattern
  // must absorb the tail with Any; none may end in a digit class.
  auto data = us({"1817", "1813?"});
  PatternGraph g = learn_patterns(data, AtomUniverse::defaults());
  auto ps = g.patterns(4);
  REQUIRE_FALSE(ps.empty());

  auto keys = pattern_keys(ps);
  CHECK(keys.count("C:181|K:Any:0") == 1);
  for (const Pattern& p : ps) {
    REQUIRE_FALSE(p.atoms().empty());
    const Atom& last = p.atoms().back();
    bool digit_final = last.kind() == AtomKind::Class && last.charset().contains(U'1') &&
                       !last.charset().contains(U'?');
    CHECK_FALSE(digit_final);
  }

  // matches the independent enumeration
  auto expected = oracle::brute_force_patterns(data, AtomUniverse::defaults(), 4);
  CHECK(keys == expected);
}

TEST_CASE("soundness: every graph pattern describes every input") {
  Rng rng(11);
  const char* alphabets[] = {"ab1", "xy-9", "AB 0?", "a.Z"};
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<Str> data;
    std::size_t count = 2 + rng.below(3);
    std::string alphabet = alphabets[rng.below(4)];
    for (std::size_t i = 0; i < count; ++i) {
      std::string s;
      std::size_t len = rng.below(7);
      for (std::size_t c = 0; c < len; ++c) s.push_back(alphabet[rng.below(alphabet.size())]);
      data.push_back(u(s.c_str()));
    }
    PatternGraph g;
    try {
      g = learn_patterns(data, AtomUniverse::defaults());
    } catch (const UsageError&) {
      continue;
    }
    for (const Pattern& p : g.patterns(4, 200000)) {
      for (const Str& s : data) CHECK(p.describes(s));
    }
  }
}

TEST_CASE("completeness on small instances matches the brute-force oracle") {
  AtomUniverse uni = reduced({"Lower", "Digit", "Alpha", "Any"});
  auto check = [&](std::vector<Str> data) {
    auto expected = oracle::brute_force_patterns(data, uni, 3);
    PatternGraph g = learn_patterns(data, uni);
    auto got = pattern_keys(g.patterns(3));
    CHECK(got == expected);
  };
  check(us({"ab"}));
  check(us({"ab", "cd"}));
  check(us({"a1", "b2", "c3"}));
  check(us({"ab3", "cd4"}));
  check(us({"x", "xx", "xxx"}));
}

TEST_CASE("best pattern equals the cheapest brute-force candidate") {
  AtomUniverse uni = reduced({"Lower", "Digit", "Any"});
  Rng rng(5);
  const std::string alphabet = "ab12";
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Str> data;
    std::size_t count = 1 + rng.below(3);
    for (std::size_t i = 0; i < count; ++i) {
      std::string s;
      std::size_t len = 1 + rng.below(4);
      for (std::size_t c = 0; c < len; ++c) s.push_back(alphabet[rng.below(alphabet.size())]);
      data.push_back(u(s.c_str()));
    }
    auto keys = oracle::brute_force_patterns(data, uni, 4);
    PatternGraph g = learn_patterns(data, uni);
    BestPattern best = g.best();

    double oracle_best = kInfiniteCost;
    for (const Pattern& p : g.patterns(4)) {
      double c = pattern_cost_total(p, data);
      oracle_best = std::min(oracle_best, c);
    }
    if (keys.empty()) {
      CHECK(best.is_bottom());
    } else {
      REQUIRE(best.pattern.has_value());
      // strings here are at most 4 chars, so patterns have at most 4 atoms
      // and the bounded enumeration is exhaustive
      CHECK(best.cost == Approx(oracle_best));
    }
  }
}

TEST_CASE("scaling every static cost leaves the best pattern unchanged") {
  const double lambda = 11.3;
  AtomUniverse base = AtomUniverse::defaults();
  AtomUniverse scaled = AtomUniverse::empty();
  for (const Atom& a : base.atoms()) {
    switch (a.kind()) {
      case AtomKind::Class:
        scaled.add(Atom::char_class(a.name(), a.charset(), a.cost() * lambda));
        break;
      case AtomKind::Regex:
        scaled.add(Atom::regex(a.name(), a.regex_source(), a.cost() * lambda));
        break;
      default:
        break;
    }
  }
  scaled.set_kappa(base.kappa() * lambda);

  Rng rng(3);
  const char* samples[] = {"Male", "Female", "PMC123", "a-1", "b-2", "1999", "2001"};
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Str> data;
    std::size_t count = 2 + rng.below(2);
    for (std::size_t i = 0; i < count; ++i) data.push_back(u(samples[rng.below(7)]));
    BestPattern base = learn_best_pattern(data, AtomUniverse::defaults());
    BestPattern big = learn_best_pattern(data, scaled);
    REQUIRE(base.pattern.has_value() == big.pattern.has_value());
    if (base.pattern) {
      CHECK(base.pattern->key() == big.pattern->key());
      CHECK(big.cost == Approx(base.cost * lambda));
    }
  }
}

TEST_CASE("state budget: constant enrichment is dropped before failing") {
  // a long single-class run explodes only through constants; without them the
  // class atoms jump straight across the run
  auto run = us({"aaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa"});
  LearnOptions opts;
  opts.state_budget = 4;
  PatternGraph g = learn_patterns(run, AtomUniverse::defaults(), opts);
  CHECK(g.const_enrichment_dropped());
  CHECK(g.has_accept());

  // alternating classes force one state per position even without constants
  auto alternating = us({"a1a1a1a1a1a1"});
  CHECK_THROWS_AS(learn_patterns(alternating, AtomUniverse::defaults(), opts),
                  CapacityError);
}

TEST_CASE("enumeration oracle edge cases") {
  AtomUniverse only_digit = reduced({"Digit"});

  std::vector<Str> empty_only = {Str()};
  auto eps = oracle::brute_force_patterns(empty_only, only_digit, 4);
  CHECK(eps == std::set<std::string>{Pattern().key()});

  // no atom matches both a letter and a digit in a digit-only universe
  auto mixed = us({"a", "1"});
  CHECK(oracle::brute_force_patterns(mixed, only_digit, 4).empty());

  // limits are refused, never silently truncated
  auto too_many = us({"a", "b", "c", "d"});
  CHECK_THROWS_AS(oracle::brute_force_patterns(too_many, only_digit, 4),
                  oracle::OracleLimitError);
  auto too_long = us({"abcdefg"});
  CHECK_THROWS_AS(oracle::brute_force_patterns(too_long, only_digit, 4),
                  oracle::OracleLimitError);
}

TEST_CASE("every edge advances every cursor") {
  auto data = us({"07-jun", "20-feb"});
  PatternGraph g = learn_patterns(data, AtomUniverse::defaults());
  for (std::size_t node = 0; node < g.state_count(); ++node) {
    for (const auto& e : g.edges_from(node)) {
      const auto& from = g.offsets(node);
      const auto& to = g.offsets(e.to);
      for (std::size_t i = 0; i < from.size(); ++i) CHECK(to[i] > from[i]);
    }
  }
}
