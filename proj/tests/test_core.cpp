#include "doctest.h"
#include "lol/core.hpp"
#include "support.hpp"

using namespace lol;
using namespace lol::test;

TEST_CASE("is_subsequence basics") {
  const Pattern s = mk_pattern({{0, 0}, {2, 2}, {1, 1}});
  CHECK(is_subsequence(Pattern{}, s));
  CHECK(is_subsequence(Pattern{}, Pattern{}));
  CHECK(is_subsequence(s, s));
  CHECK(is_subsequence(mk_pattern({{0, 0}, {1, 1}}), s));
  CHECK_FALSE(is_subsequence(mk_pattern({{1, 1}, {0, 0}}), s));
}

TEST_CASE("is_subsequence agrees with the brute-force enumerator") {
  Rng rng(11);
  for (int round = 0; round < 200; ++round) {
    const Pattern big = random_pattern(rng, 3, 3, 6);
    const auto all = brute_subsequences(big);
    const Pattern probe = random_pattern(rng, 3, 3, 4);
    CHECK(is_subsequence(probe, big) == (all.count(probe) > 0));
    for (const Pattern& sub : all) CHECK(is_subsequence(sub, big));
  }
}

TEST_CASE("downward_closure enumerates exactly the subsequences") {
  const Pattern seed = mk_pattern({{0, 0}, {1, 1}});
  const PatternClassExplicit cls = downward_closure({seed}, 2, 2);
  CHECK(cls.size() == 4);
  CHECK(cls.member(Pattern{}));
  CHECK(cls.member(mk_pattern({{0, 0}})));
  CHECK(cls.member(mk_pattern({{1, 1}})));
  CHECK(cls.member(seed));
  CHECK_FALSE(cls.member(mk_pattern({{1, 1}, {0, 0}})));

  CHECK(downward_closure({}, 2, 2).empty());
}

TEST_CASE("downward_closure of overlapping seeds matches the brute-force union") {
  Rng rng(12);
  for (int round = 0; round < 100; ++round) {
    const Pattern a = random_pattern(rng, 3, 3, 5);
    const Pattern b = random_pattern(rng, 3, 3, 5);
    auto expect = brute_subsequences(a);
    const auto more = brute_subsequences(b);
    expect.insert(more.begin(), more.end());
    const PatternClassExplicit cls = downward_closure({a, b}, 3, 3);
    CHECK(cls.size() == expect.size());
    CHECK(cls.patterns == expect);
  }
}

TEST_CASE("restrict_class unrolls the definition") {
  const PatternClassExplicit cls = downward_closure({mk_pattern({{0, 0}, {1, 1}})}, 2, 2);
  const PatternClassExplicit at00 = restrict_class(cls, 0, 0);
  CHECK(at00.size() == 2);
  CHECK(at00.member(Pattern{}));
  CHECK(at00.member(mk_pattern({{1, 1}})));
  CHECK(restrict_class(cls, 0, 1).empty());
}

TEST_CASE("restrict_class equals the brute-force membership filter") {
  Rng rng(13);
  for (int round = 0; round < 60; ++round) {
    const PatternClassExplicit cls =
        downward_closure({random_pattern(rng, 3, 3, 4), random_pattern(rng, 3, 3, 4)}, 3, 3);
    for (int x = 0; x < 3; ++x)
      for (Label y = 0; y < 3; ++y) {
        const PatternClassExplicit got = restrict_class(cls, x, y);
        std::set<Pattern> expect;
        for (const Pattern& s : all_patterns(3, 3, 3)) {
          Pattern prefixed = mk_pattern({{x, y}}).concat(s);
          if (cls.member(prefixed)) expect.insert(s);
        }
        CHECK(got.patterns == expect);
        CHECK(is_downward_closed(got));
      }
  }
}

TEST_CASE("induced oracle basics") {
  auto cls = mk_class(1, 2, 1, {{{0}}});
  InducedOracle oracle(VersionSpace::full(cls));
  CHECK(oracle.member(Pattern{}));
  CHECK(oracle.member(mk_pattern({{0, 0}})));
  CHECK_FALSE(oracle.member(mk_pattern({{0, 1}})));
}

TEST_CASE("induced oracle matches materialization up to length 3") {
  Rng rng(14);
  for (int round = 0; round < 25; ++round) {
    auto cls = random_class(rng, 3, 3, 6, 2);
    InducedOracle oracle(VersionSpace::full(cls));
    const auto materialized = materialize_induced(*cls, 3);
    for (const Pattern& s : all_patterns(cls->domain_size, cls->num_labels, 3))
      CHECK(oracle.member(s) == (materialized.count(s) > 0));
  }
}

TEST_CASE("induced membership is permutation invariant") {
  Rng rng(15);
  for (int round = 0; round < 100; ++round) {
    auto cls = random_class(rng, 3, 4, 8, 2);
    InducedOracle oracle(VersionSpace::full(cls));
    Pattern s = random_pattern(rng, cls->domain_size, cls->num_labels, 5);
    Pattern shuffled = s;
    for (std::size_t i = shuffled.size(); i > 1; --i)
      std::swap(shuffled.examples[i - 1],
                shuffled.examples[static_cast<std::size_t>(rng_int(rng, static_cast<int>(i)))]);
    CHECK(oracle.member(s) == oracle.member(shuffled));
  }
}

TEST_CASE("mistakes counts the missed positions") {
  auto cls = mk_class(2, 3, 1, {{{0}, {1}}});
  const MultiHypothesis& h = cls->hypotheses[0];
  CHECK(mistakes(h, mk_pattern({{0, 0}, {1, 1}, {0, 0}})) == 0);
  Pattern missed;
  for (int i = 0; i < 7; ++i) missed.push(DomainPoint{0}, 2);
  CHECK(mistakes(h, missed) == 7);

  Rng rng(16);
  for (int round = 0; round < 100; ++round) {
    auto rc = random_class(rng, 3, 4, 4, 2);
    const Pattern s = random_pattern(rng, rc->domain_size, rc->num_labels, 6);
    for (const auto& hyp : rc->hypotheses) {
      long expect = 0;  // independent per-position pass
      for (const Example& e : s.examples) {
        bool hit = false;
        for (Label y : hyp.labels_for[static_cast<std::size_t>(point_index(e.x))])
          hit = hit || y == e.y;
        if (!hit) ++expect;
      }
      CHECK(mistakes(hyp, s) == expect);
    }
  }
}

TEST_CASE("opt is the exhaustive minimum") {
  Rng rng(17);
  for (int round = 0; round < 100; ++round) {
    auto cls = random_class(rng, 3, 4, 8, 2);
    const Pattern s = random_pattern(rng, cls->domain_size, cls->num_labels, 6);
    long expect = static_cast<long>(s.size()) + 1;
    for (const auto& hyp : cls->hypotheses) {
      long misses = 0;
      for (const Example& e : s.examples)
        if (!hyp.assigns(point_index(e.x), e.y)) ++misses;
      expect = std::min(expect, misses);
    }
    CHECK(opt(*cls, s) == expect);
  }

  auto realizable_cls = mk_class(1, 2, 1, {{{1}}});
  CHECK(opt(*realizable_cls, mk_pattern({{0, 1}, {0, 1}})) == 0);

  HypothesisClass empty_cls;
  empty_cls.domain_size = 1;
  empty_cls.num_labels = 2;
  CHECK_THROWS_AS(opt(empty_cls, Pattern{}), std::invalid_argument);
}

TEST_CASE("closure idempotence and restriction closure on random seeds") {
  Rng rng(18);
  for (int round = 0; round < 60; ++round) {
    std::vector<Pattern> seeds{random_pattern(rng, 4, 4, 4), random_pattern(rng, 4, 4, 4)};
    const PatternClassExplicit once = downward_closure(seeds, 4, 4);
    std::vector<Pattern> members(once.patterns.begin(), once.patterns.end());
    const PatternClassExplicit twice = downward_closure(members, 4, 4);
    CHECK(once.patterns == twice.patterns);
    CHECK(is_downward_closed(once));
    const int x = rng_int(rng, 4);
    const Label y = static_cast<Label>(rng_int(rng, 4));
    CHECK(is_downward_closed(restrict_class(once, x, y)));
  }
}

TEST_CASE("induced restriction equals the consistent-subset class") {
  Rng rng(19);
  for (int round = 0; round < 30; ++round) {
    auto cls = random_class(rng, 4, 4, 10, 2);
    const int x = rng_int(rng, cls->domain_size);
    const Label y = static_cast<Label>(rng_int(rng, cls->num_labels));

    // materialized P(H) restricted at (x,y) vs P(H') with H' the consistent subset
    const auto induced = materialize_induced(*cls, 3);
    std::set<Pattern> restricted_then;
    for (const Pattern& s : all_patterns(cls->domain_size, cls->num_labels, 2)) {
      Pattern prefixed = mk_pattern({{x, y}}).concat(s);
      if (induced.count(prefixed)) restricted_then.insert(s);
    }
    HypothesisClass consistent;
    consistent.domain_size = cls->domain_size;
    consistent.num_labels = cls->num_labels;
    consistent.list_width = cls->list_width;
    for (const auto& h : cls->hypotheses)
      if (h.assigns(x, y)) consistent.hypotheses.push_back(h);
    std::set<Pattern> then_restricted;
    if (!consistent.hypotheses.empty()) then_restricted = materialize_induced(consistent, 2);
    CHECK(restricted_then == then_restricted);
  }
}

TEST_CASE("pattern closure flags contradictory seeds") {
  const PatternClassExplicit cls = downward_closure({mk_pattern({{0, 0}, {0, 1}})}, 1, 2);
  CHECK(cls.has_contradictions);
  const PatternClassExplicit clean = downward_closure({mk_pattern({{0, 0}, {1, 1}})}, 2, 2);
  CHECK_FALSE(clean.has_contradictions);
}
