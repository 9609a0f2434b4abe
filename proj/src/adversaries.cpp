#include "lol/adversaries.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

namespace lol {

AdversaryTranscript tree_adversary(const CompleteTreeSource& tree, Learner& learner) {
  if (learner.list_size() != tree.out_degree() - 1)
    throw std::invalid_argument("learner list size must be the tree out-degree minus one");
  AdversaryTranscript out;
  std::vector<int> path;
  for (int depth = 0; depth < tree.depth(); ++depth) {
    const auto node = tree.node(path);
    LabelList pred = learner.predict_list(node.x);
    int chosen = -1;
    for (std::size_t e = 0; e < node.edge_labels.size(); ++e) {
      if (!pred.contains(node.edge_labels[e])) {
        chosen = static_cast<int>(e);
        break;
      }
    }
    if (chosen < 0) throw std::logic_error("k+1 distinct edge labels cannot all be covered");
    const Label y = node.edge_labels[static_cast<std::size_t>(chosen)];
    out.forced.push(node.x, y);
    out.predictions.push_back(pred);
    out.round_losses.push_back(1.0);
    out.total_loss += 1.0;
    ++out.mistakes;
    learner.feed(node.x, y);
    path.push_back(chosen);
  }
  return out;
}

AdversaryTranscript random_branch_adversary(const CompleteTreeSource& tree, Learner& learner,
                                            Rng& rng) {
  if (learner.list_size() != tree.out_degree() - 1)
    throw std::invalid_argument("learner list size must be the tree out-degree minus one");
  const int b = tree.out_degree();
  AdversaryTranscript out;
  std::vector<int> path;
  for (int depth = 0; depth < tree.depth(); ++depth) {
    const auto node = tree.node(path);
    ListDistribution marg = learner.predict_marginals(node.x);
    double covered = 0;
    for (Label y : node.edge_labels) covered += marg.marginals.at(static_cast<std::size_t>(y));
    const double loss = 1.0 - covered / b;
    if (loss < 1.0 / b - 1e-9)
      throw std::logic_error("expected loss below 1/(k+1): marginal mass exceeds k");
    const int chosen = rng_int(rng, b);
    const Label y = node.edge_labels[static_cast<std::size_t>(chosen)];
    out.forced.push(node.x, y);
    out.round_losses.push_back(loss);
    out.total_loss += loss;
    learner.feed(node.x, y);
    path.push_back(chosen);
  }
  return out;
}

CorruptedBranch corrupted_branch_sequence(const CompleteTreeSource& tree, Rational p,
                                          int num_labels, Rng& rng) {
  const long T = tree.depth();
  const int kh = tree.out_degree();
  if (kh >= num_labels)
    throw std::invalid_argument("no label outside the branch set exists: k_H = |Y|");
  if ((p.num * T) % p.den != 0)
    throw std::invalid_argument("p*T must be an integer");
  const long corrupt_count = p.num * T / p.den;
  if (corrupt_count < 0 || corrupt_count > T) throw std::invalid_argument("p outside [0,1]");

  CorruptedBranch out;
  out.p = p;
  out.corrupted_positions = rng_distinct(rng, static_cast<int>(T), static_cast<int>(corrupt_count));

  std::vector<int> path;
  std::size_t next_corrupt = 0;
  for (long t = 0; t < T; ++t) {
    const auto node = tree.node(path);
    const int chosen = rng_int(rng, kh);
    Label y = node.edge_labels[static_cast<std::size_t>(chosen)];
    if (next_corrupt < out.corrupted_positions.size() &&
        out.corrupted_positions[next_corrupt] == static_cast<int>(t)) {
      // uniform replacement outside this node's edge-label set
      std::vector<Label> outside;
      for (Label cand = 0; cand < num_labels; ++cand)
        if (std::find(node.edge_labels.begin(), node.edge_labels.end(), cand) ==
            node.edge_labels.end())
          outside.push_back(cand);
      y = outside[static_cast<std::size_t>(rng_int(rng, static_cast<int>(outside.size())))];
      ++next_corrupt;
    }
    out.sequence.push(node.x, y);
    path.push_back(chosen);  // the walk itself follows the uncorrupted branch
  }
  return out;
}

double corrupted_round_loss(double p, double beta, int k_hypothesis, int num_labels) {
  const double kh = k_hypothesis;
  const double rest = num_labels - kh;
  return (1.0 - p) * beta / kh + p * (rest - beta) / rest;
}

Pattern symmetric_difference_sequence(const MultiHypothesis& ha, const MultiHypothesis& hb,
                                      int x, long horizon, Rng& rng) {
  const auto& la = ha.labels_for.at(static_cast<std::size_t>(x));
  const auto& lb = hb.labels_for.at(static_cast<std::size_t>(x));
  if (la.size() != lb.size()) throw std::invalid_argument("lists must have equal size");
  if (la == lb) throw std::invalid_argument("the two hypotheses agree on x");
  std::vector<Label> uni;
  std::set_union(la.begin(), la.end(), lb.begin(), lb.end(), std::back_inserter(uni));
  Pattern s;
  for (long t = 0; t < horizon; ++t)
    s.push(DomainPoint{x}, uni[static_cast<std::size_t>(rng_int(rng, static_cast<int>(uni.size())))]);
  return s;
}

// ---------------------------------------------------------------------------
// Extremal P1

namespace {

/// Uniform k-of-(k+1) guess on unseen points; afterwards a fixed list
/// containing the recorded label.
class P1Learner final : public Learner {
 public:
  P1Learner(int k, int num_labels) : k_(k), num_labels_(num_labels) {}

  int list_size() const override { return k_; }
  int num_labels() const override { return num_labels_; }
  bool is_randomized() const override { return true; }

  ListDistribution predict_marginals(const DomainPoint& x) const override {
    ListDistribution d;
    d.list_size = k_;
    const auto it = known_.find(point_index(x));
    if (it == known_.end()) {
      d.marginals.assign(static_cast<std::size_t>(num_labels_),
                         static_cast<double>(k_) / num_labels_);
      return d;
    }
    // known label plus the smallest k-1 other labels
    d.marginals.assign(static_cast<std::size_t>(num_labels_), 0.0);
    d.marginals[static_cast<std::size_t>(it->second)] = 1.0;
    int filled = 1;
    for (Label y = 0; y < num_labels_ && filled < k_; ++y)
      if (y != it->second) {
        d.marginals[static_cast<std::size_t>(y)] = 1.0;
        ++filled;
      }
    return d;
  }

  void feed(const DomainPoint& x, Label y) override { known_.emplace(point_index(x), y); }

 private:
  int k_;
  int num_labels_;
  std::map<int, Label> known_;
};

}  // namespace

std::unique_ptr<Learner> ExtremalP1::make_learner() const {
  return std::make_unique<P1Learner>(k, k + 1);
}

ExtremalP1 extremal_p1(int d, int k) {
  if (d < 1 || k < 1) throw std::invalid_argument("need d >= 1 and k >= 1");
  const int L = k + 1;
  auto cls = std::make_shared<HypothesisClass>();
  cls->domain_size = d;
  cls->num_labels = L;
  cls->list_width = 1;
  long count = 1;
  for (int i = 0; i < d; ++i) count *= L;
  for (long code = 0; code < count; ++code) {
    MultiHypothesis h;
    long c = code;
    for (int x = 0; x < d; ++x) {
      h.labels_for.push_back({static_cast<Label>(c % L)});
      c /= L;
    }
    cls->hypotheses.push_back(std::move(h));
  }
  ExtremalP1 out;
  out.cls = std::move(cls);
  out.d = d;
  out.k = k;
  return out;
}

// ---------------------------------------------------------------------------
// Extremal P2

ExtremalP2 extremal_p2(int d, int k, double epsilon) {
  if (d < 1 || k < 1) throw std::invalid_argument("need d >= 1 and k >= 1");
  if (epsilon <= 0 || epsilon >= d) throw std::invalid_argument("need 0 < epsilon < d");
  ExtremalP2 out;
  out.d = d;
  out.k = k;
  out.epsilon = epsilon;
  return out;
}

long ExtremalP2::horizon() const {
  return static_cast<long>(std::ceil(static_cast<double>(k) * d * d / epsilon)) + d - 1;
}

std::unique_ptr<Learner> ExtremalP2::make_soa() const {
  // restrictions at label 0 always have strictly smaller dimension than the
  // rest, so the top-k prediction is {1..k} at every budget
  std::vector<Label> ls;
  for (Label y = 1; y <= k; ++y) ls.push_back(y);
  return std::make_unique<ConstantListLearner>(LabelList(std::move(ls)), k + 1);
}

AdversaryTranscript ExtremalP2::run(Learner& learner, Rng& rng) const {
  if (learner.num_labels() != k + 1)
    throw std::invalid_argument("the p2 class uses k+1 labels");
  AdversaryTranscript out;
  const long T = horizon();
  int zeros_used = 0;
  for (long t = 0; t < T; ++t) {
    const DomainPoint x{static_cast<int>(t)};  // fresh point each round
    ListDistribution marg = learner.predict_marginals(x);
    Label y;
    double loss;
    if (marg.marginals[0] <= epsilon / d && zeros_used < d) {
      y = 0;
      loss = 1.0 - marg.marginals[0];
      ++zeros_used;
    } else {
      // uniform over {1..k}: expected loss is 1 - (mass on {1..k})/k
      double mass = 0;
      for (Label cand = 1; cand <= k; ++cand)
        mass += marg.marginals[static_cast<std::size_t>(cand)];
      loss = 1.0 - mass / k;
      y = static_cast<Label>(1 + rng_int(rng, k));
    }
    out.forced.push(x, y);
    out.round_losses.push_back(loss);
    out.total_loss += loss;
    learner.feed(x, y);
  }
  return out;
}

long ExtremalP2::opt_fresh_stream(const Pattern& s, int d) {
  long zeros = 0;
  for (const Example& e : s.examples)
    if (e.y == 0) ++zeros;
  return std::max<long>(0, zeros - d);
}

long ExtremalP2::opt_brute_force(const Pattern& s, int d, int k) {
  // enumerate assignments {0..k}^points with at most d zeros
  std::vector<int> points;
  for (const Example& e : s.examples) points.push_back(point_index(e.x));
  std::vector<int> distinct = points;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  const std::size_t n = distinct.size();
  if (n > 12) throw BudgetExceeded("brute-force opt limited to 12 distinct points");
  long best = static_cast<long>(s.size());
  std::vector<Label> assign(n, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == n) {
      int zeros = 0;
      for (Label y : assign) zeros += (y == 0);
      if (zeros > d) return;
      long miss = 0;
      for (const Example& e : s.examples) {
        const std::size_t idx = static_cast<std::size_t>(
            std::lower_bound(distinct.begin(), distinct.end(), point_index(e.x)) -
            distinct.begin());
        if (assign[idx] != e.y) ++miss;
      }
      best = std::min(best, miss);
      return;
    }
    for (Label y = 0; y <= k; ++y) {
      assign[i] = y;
      rec(i + 1);
    }
  };
  rec(0);
  return best;
}

// ---------------------------------------------------------------------------
// Monotone pattern class

bool MonotoneDemo::member(const Pattern& s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      if (s.examples[i].y < s.examples[j].y) return false;  // labels must not increase
      if (s.examples[i].y != s.examples[j].y && point_eq(s.examples[i].x, s.examples[j].x))
        return false;  // contradiction
    }
    if (s.examples[i].y != 0 && s.examples[i].y != 1) return false;
  }
  return true;
}

namespace {

class MonotoneLearner final : public Learner {
 public:
  int list_size() const override { return 1; }
  int num_labels() const override { return 2; }
  bool is_randomized() const override { return false; }
  LabelList predict_list(const DomainPoint&) const override {
    return LabelList({burned_ ? 0 : 1});
  }
  void feed(const DomainPoint&, Label y) override {
    if (!burned_ && y == 0) burned_ = true;
  }

 private:
  bool burned_ = false;
};

std::unique_ptr<MistakeTreeNode> monotone_tree_node(int level, int depth) {
  if (level == depth) return nullptr;
  auto node = std::make_unique<MistakeTreeNode>();
  node->x = level;  // one fresh point per level keeps every branch contradiction-free
  node->edges.emplace_back(0, monotone_tree_node(level + 1, depth));
  node->edges.emplace_back(1, monotone_tree_node(level + 1, depth));
  return node;
}

}  // namespace

std::unique_ptr<Learner> MonotoneDemo::make_learner() {
  return std::make_unique<MonotoneLearner>();
}

MistakeTree MonotoneDemo::separation_tree(int depth) {
  MistakeTree t;
  t.depth = depth;
  t.out_degree = 2;
  t.root = monotone_tree_node(0, depth);
  return t;
}

bool MonotoneDemo::verify_separation(const HypothesisClass& cls, int depth,
                                     MistakeTree* witness) {
  if (cls.domain_size < depth) return false;
  MistakeTree t = separation_tree(depth);
  auto shared = std::make_shared<HypothesisClass>(cls);
  InducedOracle oracle(VersionSpace::full(shared));
  const bool ok = is_shattered(t, oracle);
  if (witness) *witness = std::move(t);
  return ok;
}

bool MonotoneDemo::extends_demo(const HypothesisClass& cls, int max_len) {
  // any binary assignment over distinct points reorders into a monotone
  // pattern, so the class must realize every assignment on every point subset
  auto shared = std::make_shared<HypothesisClass>(cls);
  InducedOracle oracle(VersionSpace::full(shared));
  const int n = cls.domain_size;
  std::vector<int> points;
  std::function<bool(int)> rec = [&](int start) -> bool {
    const int len = static_cast<int>(points.size());
    if (len > 0) {
      for (uint32_t bits = 0; bits < (1u << len); ++bits) {
        Pattern s;
        for (int i = 0; i < len; ++i)
          s.push(DomainPoint{points[static_cast<std::size_t>(i)]},
                 (bits >> i) & 1u ? 1 : 0);
        if (!oracle.member(s)) return false;
      }
    }
    if (len == max_len) return true;
    for (int x = start; x < n; ++x) {
      points.push_back(x);
      if (!rec(x + 1)) return false;
      points.pop_back();
    }
    return true;
  };
  return rec(0);
}

}  // namespace lol
