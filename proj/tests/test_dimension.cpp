#include <numeric>

#include "doctest.h"
#include "lol/adversaries.hpp"
#include "lol/dimension.hpp"
#include "lol/io.hpp"
#include "support.hpp"

using namespace lol;
using namespace lol::test;

namespace {

MistakeTree depth1_tree() {
  MistakeTree t;
  t.depth = 1;
  t.out_degree = 2;
  t.root = std::make_unique<MistakeTreeNode>();
  t.root->x = 0;
  t.root->edges.emplace_back(0, nullptr);
  t.root->edges.emplace_back(1, nullptr);
  return t;
}

MistakeTree depth2_tree() {
  MistakeTree t;
  t.depth = 2;
  t.out_degree = 2;
  t.root = std::make_unique<MistakeTreeNode>();
  t.root->x = 0;
  for (Label y : {0, 1}) {
    auto child = std::make_unique<MistakeTreeNode>();
    child->x = 1;
    child->edges.emplace_back(0, nullptr);
    child->edges.emplace_back(1, nullptr);
    t.root->edges.emplace_back(y, std::move(child));
  }
  return t;
}

}  // namespace

TEST_CASE("branch_pattern walks root to leaf") {
  MistakeTree empty;
  empty.depth = 0;
  empty.out_degree = 2;
  CHECK(branch_pattern(empty, {}).empty());

  const MistakeTree t1 = depth1_tree();
  const std::vector<int> left{0};
  CHECK(branch_pattern(t1, left) == mk_pattern({{0, 0}}));
  const std::vector<int> right{1};
  CHECK(branch_pattern(t1, right) == mk_pattern({{0, 1}}));
  const std::vector<int> bad{2};
  CHECK_THROWS_AS(branch_pattern(t1, bad), std::invalid_argument);

  const MistakeTree t2 = depth2_tree();
  std::set<Pattern> seen;
  for (int a : {0, 1})
    for (int b : {0, 1}) {
      const std::vector<int> branch{a, b};
      seen.insert(branch_pattern(t2, branch));
    }
  const std::set<Pattern> expect{mk_pattern({{0, 0}, {1, 0}}), mk_pattern({{0, 0}, {1, 1}}),
                                 mk_pattern({{0, 1}, {1, 0}}), mk_pattern({{0, 1}, {1, 1}})};
  CHECK(seen == expect);
}

TEST_CASE("is_shattered on trivial and witness trees") {
  auto cls = mk_class(2, 2, 1, {{{0}, {0}}, {{1}, {0}}, {{0}, {1}}, {{1}, {1}}});
  InducedOracle oracle(VersionSpace::full(cls));
  MistakeTree empty;
  empty.depth = 0;
  empty.out_degree = 2;
  CHECK(is_shattered(empty, oracle));
  CHECK(is_shattered(depth2_tree(), oracle));

  auto single = mk_class(1, 2, 1, {{{0}}});
  InducedOracle single_oracle(VersionSpace::full(single));
  CHECK_FALSE(is_shattered(depth1_tree(), single_oracle));
}

TEST_CASE("dimension witnesses are shattered and nothing deeper is") {
  Rng rng(21);
  int deeper_checked = 0;
  for (int round = 0; round < 12; ++round) {
    auto cls = random_class(rng, 2, 3, 8, 2);
    const int k = 1;
    if (cls->num_labels <= k) continue;
    DimensionSolver solver(k);
    DimensionResult res = solver.with_witness(ClassState::version_space(cls));
    if (res.infinite || res.dim < 0 || res.dim > 2) continue;
    InducedOracle oracle(VersionSpace::full(cls));
    REQUIRE(res.witness.has_value());
    res.witness->validate();
    CHECK(res.witness->depth == res.dim);
    CHECK(is_shattered(*res.witness, oracle));
    // exhaustive: no complete (k+1)-ary tree of depth dim+1 is shattered
    enumerate_trees(cls->domain_size, cls->num_labels, k + 1, res.dim + 1,
                    [&](const MistakeTree& t) {
                      CHECK_FALSE(is_shattered(t, oracle));
                      ++deeper_checked;
                    });
  }
  CHECK(deeper_checked > 0);
}

TEST_CASE("P1 has dimension d") {
  // all functions [2] -> [3] with k = 2
  ExtremalP1 p1 = extremal_p1(2, 2);
  DimensionResult res = list_littlestone_dim(*p1.cls, 2);
  CHECK(res.dim == 2);
  CHECK_FALSE(res.infinite);

  for (int d = 1; d <= 4; ++d)
    for (int k = 1; k <= 2; ++k) {
      ExtremalP1 deeper = extremal_p1(d, k);
      CHECK(list_littlestone_dim(*deeper.cls, k).dim == d);
    }
}

TEST_CASE("singleton classes have dimension zero") {
  auto cls = mk_class(2, 3, 1, {{{1}, {2}}});
  for (int k : {1, 2}) CHECK(list_littlestone_dim(*cls, k).dim == 0);
}

TEST_CASE("empty class and k >= L are rejected sentinel cases") {
  HypothesisClass empty;
  empty.domain_size = 1;
  empty.num_labels = 3;
  CHECK(list_littlestone_dim(empty, 1).dim == -1);

  auto cls = mk_class(1, 2, 1, {{{0}}});
  DimensionSolver solver(2);
  CHECK_THROWS_AS(solver.dim(ClassState::version_space(cls)), std::invalid_argument);
}

TEST_CASE("a single width-2 hypothesis has infinite 2-ary dimension") {
  auto cls = mk_class(1, 3, 2, {{{0, 1}}});
  DimensionSolver solver(1);
  CHECK(solver.dim(ClassState::version_space(cls)) == kInfiniteDim);
  CHECK(minimal_finite_list_size(cls) == 2);
}

TEST_CASE("explicit pattern classes recurse to the same dimensions") {
  // closure of one length-2 pattern: dim 0 under k=1 (no branching anywhere)
  const PatternClassExplicit cls = downward_closure({mk_pattern({{0, 0}, {1, 1}})}, 2, 2);
  CHECK(list_littlestone_dim(cls, 1).dim == 0);

  // both labels available at one point: dim 1
  const PatternClassExplicit fork =
      downward_closure({mk_pattern({{0, 0}}), mk_pattern({{0, 1}})}, 1, 2);
  CHECK(list_littlestone_dim(fork, 1).dim == 1);
}

TEST_CASE("minimax value: horizon zero, P1 instance, stabilization") {
  ExtremalP1 p1 = extremal_p1(2, 2);
  ClassState state = ClassState::version_space(p1.cls);
  MinimaxOracle oracle(2, 3);
  CHECK(oracle.value(state, 0) == 0);
  CHECK(oracle.value(state, 1) == 1);
  CHECK(oracle.value(state, 2) == 2);
  CHECK(oracle.value(state, 3) == 2);
  CHECK(oracle.stabilized(state, 5) == 2);
}

TEST_CASE("dimension equals the stabilized minimax value on random classes") {
  Rng rng(22);
  int tested = 0;
  while (tested < 40) {
    auto cls = random_class(rng, 3, 4, 8, 2);
    const int k = 1 + rng_int(rng, std::min(3, cls->num_labels - 1));
    DimensionSolver solver(k);
    const int d = solver.dim(ClassState::version_space(cls));
    MinimaxOracle oracle(k, cls->num_labels);
    if (d == kInfiniteDim) {
      // the game value must keep growing with the horizon
      for (int h = 1; h <= 4; ++h) CHECK(oracle.value(ClassState::version_space(cls), h) == h);
    } else {
      long prev = -1;
      for (int h = 0; h <= d + 1; ++h) {
        const long v = oracle.value(ClassState::version_space(cls), h);
        CHECK(v >= prev);  // nondecreasing in the horizon
        prev = v;
      }
      CHECK(oracle.stabilized(ClassState::version_space(cls), d + 3) == d);
      ++tested;
    }
  }
}

TEST_CASE("monotonicity of the dimension") {
  Rng rng(23);
  for (int round = 0; round < 30; ++round) {
    auto big = random_class(rng, 3, 3, 8, 2);
    const int k = 1;
    DimensionSolver solver(k);
    const int d_big = solver.dim(ClassState::version_space(big));

    // removing hypotheses never increases the dimension
    auto small = std::make_shared<HypothesisClass>(*big);
    small->hypotheses.resize(1 + static_cast<std::size_t>(rng_int(rng, big->size())));
    DimensionSolver solver2(k);
    const int d_small = solver2.dim(ClassState::version_space(small));
    if (d_big == kInfiniteDim) continue;
    CHECK(d_small != kInfiniteDim);
    CHECK(d_small <= d_big);

    // restriction never increases the dimension
    const int x = rng_int(rng, big->domain_size);
    const Label y = static_cast<Label>(rng_int(rng, big->num_labels));
    ClassState r = ClassState::version_space(big).restricted(x, y);
    if (!r.empty()) CHECK(solver.dim(r) <= d_big);
  }
}

TEST_CASE("at most k labels keep the full dimension after restriction") {
  Rng rng(24);
  for (int round = 0; round < 40; ++round) {
    auto cls = random_class(rng, 3, 4, 8, 2);
    const int k = 1 + rng_int(rng, std::min(2, cls->num_labels - 1));
    DimensionSolver solver(k);
    const int d = solver.dim(ClassState::version_space(cls));
    if (d == kInfiniteDim || d < 0) continue;
    for (int x = 0; x < cls->domain_size; ++x) {
      int full = 0;
      for (Label y = 0; y < cls->num_labels; ++y) {
        ClassState r = ClassState::version_space(cls).restricted(x, y);
        if (!r.empty() && solver.dim(r) == d) ++full;
      }
      CHECK(full <= k);
    }
  }
}

TEST_CASE("dimension is invariant under domain and label relabeling") {
  Rng rng(25);
  for (int round = 0; round < 25; ++round) {
    auto cls = random_class(rng, 3, 4, 8, 2);
    const int k = 1 + rng_int(rng, std::min(2, cls->num_labels - 1));
    std::vector<int> xperm(static_cast<std::size_t>(cls->domain_size));
    std::vector<Label> yperm(static_cast<std::size_t>(cls->num_labels));
    std::iota(xperm.begin(), xperm.end(), 0);
    std::iota(yperm.begin(), yperm.end(), 0);
    for (std::size_t i = xperm.size(); i > 1; --i)
      std::swap(xperm[i - 1], xperm[static_cast<std::size_t>(rng_int(rng, static_cast<int>(i)))]);
    for (std::size_t i = yperm.size(); i > 1; --i)
      std::swap(yperm[i - 1], yperm[static_cast<std::size_t>(rng_int(rng, static_cast<int>(i)))]);

    auto permuted = std::make_shared<HypothesisClass>(*cls);
    for (auto& h : permuted->hypotheses) {
      std::vector<std::vector<Label>> remapped(h.labels_for.size());
      for (std::size_t x = 0; x < h.labels_for.size(); ++x) {
        std::vector<Label> image;
        for (Label y : h.labels_for[x]) image.push_back(yperm[static_cast<std::size_t>(y)]);
        std::sort(image.begin(), image.end());
        remapped[static_cast<std::size_t>(xperm[x])] = std::move(image);
      }
      h.labels_for = std::move(remapped);
    }
    DimensionSolver sa(k), sb(k);
    CHECK(sa.dim(ClassState::version_space(cls)) ==
          sb.dim(ClassState::version_space(permuted)));
  }
}

TEST_CASE("tree JSON round trip") {
  ExtremalP1 p1 = extremal_p1(2, 1);
  DimensionSolver solver(1);
  DimensionResult res = solver.with_witness(ClassState::version_space(p1.cls));
  REQUIRE(res.witness.has_value());
  const std::string text = tree_to_json(*res.witness);
  MistakeTree back = tree_from_json(text);
  CHECK(back.depth == res.witness->depth);
  CHECK(back.out_degree == res.witness->out_degree);
  CHECK(tree_to_json(back) == text);
}
