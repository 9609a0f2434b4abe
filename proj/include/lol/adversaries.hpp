#pragma once

#include "lol/dimension.hpp"
#include "lol/learners.hpp"
#include "lol/rng.hpp"

namespace lol {

struct AdversaryTranscript {
  Pattern forced;                      // the presented sequence
  std::vector<LabelList> predictions;  // deterministic opponents only
  std::vector<double> round_losses;    // exact expected loss per round
  double total_loss = 0;
  long mistakes = 0;
};

/// Walks a complete (k+1)-ary tree against a deterministic k-list learner,
/// always descending along an edge whose label the learner left out. Forces
/// exactly depth() mistakes; the forced sequence is a branch pattern.
AdversaryTranscript tree_adversary(const CompleteTreeSource& tree, Learner& learner);

/// Walks the tree choosing a uniformly random edge each round and charges the
/// learner its exact expected loss 1 - (marginal mass on the edge labels)/b,
/// which is at least 1/(k+1) for every marginal vector.
AdversaryTranscript random_branch_adversary(const CompleteTreeSource& tree, Learner& learner,
                                            Rng& rng);

struct CorruptedBranch {
  Pattern sequence;
  std::vector<int> corrupted_positions;  // ascending, 0-based
  Rational p;
};

/// Uniform random branch of a complete k_H-ary tree with p*T uniformly chosen
/// positions relabeled by a uniform label outside that node's edge set.
/// Requires p*T integral.
CorruptedBranch corrupted_branch_sequence(const CompleteTreeSource& tree, Rational p,
                                          int num_labels, Rng& rng);

/// Per-round loss of a k_H-list learner on the corrupted-branch distribution,
/// as a function of the marginal mass beta it puts outside the branch labels:
/// (1-p) beta / k_H + p (L - k_H - beta) / (L - k_H). At least p whenever
/// p <= 1/(k_H+1).
double corrupted_round_loss(double p, double beta, int k_hypothesis, int num_labels);

/// T examples on one point with labels drawn i.i.d. uniformly from
/// hA(x) union hB(x). Requires the two lists distinct and of equal size.
Pattern symmetric_difference_sequence(const MultiHypothesis& ha, const MultiHypothesis& hb,
                                      int x, long horizon, Rng& rng);

// ---------------------------------------------------------------------------
// Extremal classes

/// All functions [d] -> [k+1], plus the randomized learner that guesses a
/// uniform k-list on unseen points and afterwards any list containing the
/// observed label. Expected mistakes <= d/(k+1) on realizable sequences.
struct ExtremalP1 {
  std::shared_ptr<const HypothesisClass> cls;
  std::unique_ptr<Learner> make_learner() const;
  int d = 0;
  int k = 0;
};

ExtremalP1 extremal_p1(int d, int k);

/// The class {h : |h^{-1}(0)| <= d} over a fresh point per round, kept
/// implicit, with its proof adversary: present x_t = t; play label 0 while
/// the learner's marginal on 0 is at most eps/d (up to d times), otherwise a
/// uniform label from {1..k}. Forces expected mistakes >= d - eps at horizon
/// ceil(k d^2 / eps) + d - 1.
struct ExtremalP2 {
  int d = 0;
  int k = 0;
  double epsilon = 0;

  long horizon() const;
  /// The List SOA specialized to this class: it always predicts {1..k}.
  std::unique_ptr<Learner> make_soa() const;
  AdversaryTranscript run(Learner& learner, Rng& rng) const;
  /// opt over the implicit class for a fresh-point sequence: zero-labeled
  /// rounds beyond the first d (nonzero rounds are always matchable).
  static long opt_fresh_stream(const Pattern& s, int d);
  /// Brute-force opt for tiny horizons (validation only).
  static long opt_brute_force(const Pattern& s, int d, int k);
};

ExtremalP2 extremal_p2(int d, int k, double epsilon);

// ---------------------------------------------------------------------------
// Monotone pattern class (pattern classes vs. hypothesis classes)

/// Binary-label patterns whose label sequence is non-increasing and which
/// repeat no point with two labels. Learnable with one mistake, yet any
/// hypothesis class extending it shatters arbitrarily deep binary trees.
struct MonotoneDemo {
  static bool member(const Pattern& s);
  /// Predicts 1 until the first mistake, 0 forever after.
  static std::unique_ptr<Learner> make_learner();
  /// Complete binary tree of the given depth over points 0..depth-1, one per
  /// level; every branch reorders into a member pattern.
  static MistakeTree separation_tree(int depth);
  /// True iff the class realizes every binary assignment the tree induces.
  static bool verify_separation(const HypothesisClass& cls, int depth,
                                MistakeTree* witness = nullptr);
  /// True iff the class realizes every monotone pattern over distinct points
  /// of its domain up to the given length (the "extends the demo" premise).
  static bool extends_demo(const HypothesisClass& cls, int max_len);
};

class MonotoneOracle final : public PatternOracle {
 public:
  bool member(const Pattern& s) const override { return MonotoneDemo::member(s); }
};

}  // namespace lol
