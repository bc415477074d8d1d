#include <catch2/catch.hpp>

#include <set>

#include "patprof/significant.hpp"
#include "support.hpp"

using namespace patprof;
using testutil::make_labeled;
using testutil::u;
using testutil::us;

namespace {

const AtomUniverse& defaults() {
  static AtomUniverse uni = AtomUniverse::defaults();
  return uni;
}

ProfileEntry entry_for(const std::vector<Str>& data) {
  ProfileEntry e;
  BestPattern bp = learn_best_pattern(data, defaults());
  REQUIRE(bp.pattern.has_value());
  e.pattern = *bp.pattern;
  e.cost = bp.cost;
  e.data = data;
  e.count = data.size();
  return e;
}

Profile profile_of(std::initializer_list<std::vector<Str>> partitions) {
  Profile p;
  for (const auto& data : partitions) p.entries.push_back(entry_for(data));
  p.universe_fingerprint = defaults().fingerprint();
  return p;
}

}  // namespace

TEST_CASE("single-entry profile orders trivially") {
  Profile p = profile_of({us({"a1", "b2"})});
  PartitionOrder order = order_partitions(p, defaults());
  REQUIRE(order.order.size() == 1);
  CHECK(order.order[0] == 0);
}

TEST_CASE("most dissimilar partition is pulled forward") {
  // two digit flavours and a word flavour: after the cheapest entry, the
  // word partition must come before the second digit variant
  Profile p = profile_of({
      us({"1234", "5678", "9012"}),     // digits, 4 wide
      us({"11-22", "33-44", "55-66"}),  // digits with a dash
      us({"alpha", "omega", "delta"}),  // words
  });
  PartitionOrder order = order_partitions(p, defaults());
  REQUIRE(order.order.size() == 3);

  std::size_t word_pos = 0, second_digit_pos = 0;
  for (std::size_t i = 0; i < order.order.size(); ++i) {
    if (order.order[i] == 2) word_pos = i;
    if (order.order[i] == 1) second_digit_pos = i;
  }
  CHECK(word_pos < second_digit_pos);

  // greedy max-min property holds at every step
  auto joint = [&](std::size_t a, std::size_t b) {
    std::vector<Str> merged = p.entries[a].data;
    merged.insert(merged.end(), p.entries[b].data.begin(), p.entries[b].data.end());
    return learn_best_pattern(merged, defaults()).cost;
  };
  for (std::size_t step = 1; step < order.order.size(); ++step) {
    double chosen_score = kInfiniteCost;
    for (std::size_t prev = 0; prev < step; ++prev)
      chosen_score = std::min(chosen_score, joint(order.order[step], order.order[prev]));
    for (std::size_t other = step + 1; other < order.order.size(); ++other) {
      double other_score = kInfiniteCost;
      for (std::size_t prev = 0; prev < step; ++prev)
        other_score = std::min(other_score, joint(order.order[other], order.order[prev]));
      CHECK(chosen_score >= other_score);
    }
  }
}

TEST_CASE("ordering starts at the minimum-cost entry and is a permutation") {
  Profile p = profile_of({
      us({"xx-yy", "aa-bb"}),
      us({"123456", "234567"}),  // cheapest entry: one wide digit block
      us({"alpha", "beta"}),
  });
  PartitionOrder order = order_partitions(p, defaults());
  REQUIRE(order.order.size() == 3);
  CHECK(order.order[0] == 1);

  std::set<std::size_t> unique(order.order.begin(), order.order.end());
  CHECK(unique.size() == 3);
}

TEST_CASE("identical partitions tie-break by entry index") {
  std::vector<Str> same = us({"q7", "w8"});
  Profile p = profile_of({same, same});
  PartitionOrder order = order_partitions(p, defaults());
  REQUIRE(order.order.size() == 2);
  CHECK(order.order[0] == 0);
  CHECK(order.order[1] == 1);
}

TEST_CASE("picker cycles partitions round-robin without repeats") {
  Profile p = profile_of({
      us({"1", "2"}),
      us({"aa", "bb"}),
      us({"x-", "y-"}),
  });
  PartitionOrder order = order_partitions(p, defaults());
  SignificantPicker picker(p, order, 0);

  std::vector<Str> first_cycle;
  for (int i = 0; i < 3; ++i) {
    auto s = picker.next();
    REQUIRE(s.has_value());
    first_cycle.push_back(*s);
  }
  // one pick per partition before any partition repeats
  auto owner = [&](const Str& s) {
    for (std::size_t e = 0; e < p.entries.size(); ++e)
      for (const Str& t : p.entries[e].data)
        if (t == s) return e;
    return p.entries.size();
  };
  std::set<std::size_t> owners;
  for (const Str& s : first_cycle) owners.insert(owner(s));
  CHECK(owners.size() == 3);

  // second cycle starts again from the first partition's remainder
  auto fourth = picker.next();
  REQUIRE(fourth.has_value());
  CHECK(owner(*fourth) == owner(first_cycle[0]));

  // six strings total; all get labeled exactly once, then exhausted
  std::set<Str> seen(first_cycle.begin(), first_cycle.end());
  seen.insert(*fourth);
  while (auto s = picker.next()) CHECK(seen.insert(*s).second);
  CHECK(seen.size() == 6);
  CHECK_FALSE(picker.next().has_value());
}

TEST_CASE("exhausted partitions are skipped") {
  Profile p = profile_of({us({"1"}), us({"aa", "bb"})});
  PartitionOrder order = order_partitions(p, defaults());
  SignificantPicker picker(p, order, 7);
  std::set<Str> seen;
  while (auto s = picker.next()) seen.insert(*s);
  CHECK(seen.size() == 3);
}

TEST_CASE("pre-labeled strings are never suggested") {
  Profile p = profile_of({us({"1", "2"}), us({"aa"})});
  PartitionOrder order = order_partitions(p, defaults());
  SignificantPicker picker(p, order, 0);
  picker.mark_labeled(u("aa"));
  std::set<Str> seen;
  while (auto s = picker.next()) seen.insert(*s);
  CHECK(seen == std::set<Str>{u("1"), u("2")});
}

TEST_CASE("unlearnable unions count as maximally dissimilar") {
  // a tiny state budget makes joint learning fail; ordering must still
  // produce a total permutation with infinite step costs
  Profile p = profile_of({us({"a1b2c3"}), us({"d4e5f6"}), us({"x7y8z9"})});
  LearnOptions opts;
  opts.state_budget = 2;
  PartitionOrder order = order_partitions(p, defaults(), opts);
  REQUIRE(order.order.size() == 3);
  std::set<std::size_t> unique(order.order.begin(), order.order.end());
  CHECK(unique.size() == 3);
  CHECK(order.step_costs[1] == kInfiniteCost);
}

TEST_CASE("same seed, same picks") {
  Rng gen(23);
  auto data = make_labeled({"d3'-'d3", "u2d4", "l6"}, {15, 15, 15}, gen);
  Rng r1(5), r2(5);
  Profile p1 = big_profile(data.strings, {}, defaults(), r1);
  Profile p2 = big_profile(data.strings, {}, defaults(), r2);

  PartitionOrder o1 = order_partitions(p1, defaults());
  PartitionOrder o2 = order_partitions(p2, defaults());
  CHECK(o1.order == o2.order);

  SignificantPicker pick1(p1, o1, 9), pick2(p2, o2, 9);
  for (int i = 0; i < 10; ++i) {
    auto a = pick1.next();
    auto b = pick2.next();
    REQUIRE(a.has_value() == b.has_value());
    if (!a) break;
    CHECK(*a == *b);
  }
}
