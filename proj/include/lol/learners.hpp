#pragma once

#include <functional>
#include <memory>

#include "lol/core.hpp"
#include "lol/dimension.hpp"
#include "lol/rng.hpp"

namespace lol {

/// Marginal inclusion probabilities of a randomized list prediction: one
/// entry per label, each in [0,1], summing to the list size.
struct ListDistribution {
  std::vector<double> marginals;
  int list_size = 0;

  double loss(Label y) const { return 1.0 - marginals.at(static_cast<std::size_t>(y)); }
  void validate(double tol = 1e-9) const;
};

ListDistribution indicator_distribution(const LabelList& list, int num_labels);

/// Online list learner. predict is pure given the learner state; feed is the
/// only mutator. Deterministic learners emit a LabelList (their marginals are
/// the indicator vector); randomized learners emit marginals only.
class Learner {
 public:
  virtual ~Learner() = default;
  virtual int list_size() const = 0;
  virtual int num_labels() const = 0;
  virtual bool is_randomized() const = 0;
  virtual LabelList predict_list(const DomainPoint& x) const;
  virtual ListDistribution predict_marginals(const DomainPoint& x) const;
  virtual void feed(const DomainPoint& x, Label y) = 0;
};

struct TraceRow {
  long t = 0;  // 1-based round
  DomainPoint x;
  ListDistribution prediction;
  Label y = 0;
  double loss = 0;  // 1[y not in list] resp. 1 - marginals[y]
};

struct Trace {
  std::vector<TraceRow> rows;
  double total_loss = 0;
  long mistake_rounds = 0;  // rounds with loss == 1 (deterministic view)
};

Trace run_online(Learner& learner, const std::vector<Example>& stream);

// ---------------------------------------------------------------------------
// List SOA

/// Predicts the k labels whose restricted version space has the largest
/// dimension (ties by label index) and updates the space lazily, only when
/// the fed label falls outside the prediction. Feeding an example no active
/// hypothesis survives freezes the space instead of emptying it.
class SoaLearner final : public Learner {
 public:
  SoaLearner(ClassState init, int k, std::shared_ptr<DimensionSolver> solver = nullptr);

  int list_size() const override { return k_; }
  int num_labels() const override { return state_.num_labels(); }
  bool is_randomized() const override { return false; }
  LabelList predict_list(const DomainPoint& x) const override;
  void feed(const DomainPoint& x, Label y) override;

  bool frozen() const { return frozen_; }
  long update_count() const { return updates_; }
  const ClassState& state() const { return state_; }

 private:
  int k_;
  ClassState state_;
  std::shared_ptr<DimensionSolver> solver_;
  bool frozen_ = false;
  long updates_ = 0;
};

// ---------------------------------------------------------------------------
// List Perceptron

/// One weight vector per label; predicts the k labels with the largest inner
/// products. On a mistake the true label's vector gains k*x and every
/// predicted label's vector loses x.
class PerceptronLearner final : public Learner {
 public:
  PerceptronLearner(int feature_dim, int num_labels, int k);

  int list_size() const override { return k_; }
  int num_labels() const override { return num_labels_; }
  bool is_randomized() const override { return false; }
  LabelList predict_list(const DomainPoint& x) const override;
  void feed(const DomainPoint& x, Label y) override;

  double potential() const;  // sum over labels of squared weight norms
  const std::vector<FeatureVec>& weights() const { return w_; }
  long mistake_count() const { return mistakes_; }

 private:
  int feature_dim_;
  int num_labels_;
  int k_;
  std::vector<FeatureVec> w_;
  long mistakes_ = 0;
};

// ---------------------------------------------------------------------------
// Online cover of a pattern class (list Sauer-Shelah-Perles machinery)

/// Splits A (in its given order) into ceil(|A|/k) chunks of k consecutive
/// elements; a short final chunk is completed with A's first elements. Each
/// returned set is sorted ascending. When |A| < k the front-padding rule runs
/// out of elements; the chunk is then completed with the smallest labels of
/// [0, num_labels) not already present (num_labels must be supplied).
std::vector<std::vector<Label>> canonical_k_cover(const std::vector<Label>& a, int k,
                                                  int num_labels = -1);

/// Expert parameters: the rounds I on which the expert deviates from the SOA
/// (|I| <= d), and for each such round the element ordinal i_t in {1..k} and
/// the cover-set ordinal j_t in {1..ceil((L-k)/k)}.
struct CoverExpertParams {
  std::vector<long> steps;                    // ascending, 1-based
  std::vector<std::pair<int, int>> choices;   // (i_t, j_t) aligned with steps
};

/// Adaptive k-list function with memory. predict is pure; advance consumes
/// the round's point and updates internal memory.
class OnlineListFunction {
 public:
  virtual ~OnlineListFunction() = default;
  virtual LabelList predict(const DomainPoint& x) const = 0;
  virtual void advance(const DomainPoint& x) = 0;
};

/// Simulates the lazy List SOA on a self-fed history: on rounds outside I it
/// plays the SOA list and self-feeds its smallest label; on rounds in I it
/// plays set j_t of the canonical k-cover of the complement and self-feeds
/// that set's i_t-th smallest element. Beyond the horizon it plays the
/// all-smallest list and stops evolving.
class CoverExpert final : public OnlineListFunction {
 public:
  CoverExpert(ClassState cls, int k, long horizon, CoverExpertParams params,
              std::shared_ptr<DimensionSolver> solver);

  LabelList predict(const DomainPoint& x) const override;
  void advance(const DomainPoint& x) override;

 private:
  LabelList output_for(const DomainPoint& x, Label* self_feed) const;

  SoaLearner soa_;
  int k_;
  long horizon_;
  CoverExpertParams params_;
  long t_ = 1;
  std::size_t next_step_ = 0;
};

/// Lazy enumerator of the full cover family. The family has exactly
/// sum_{i=0}^{d} C(T,i) * (ceil((L-k)/k)*k)^i members.
class CoverFamily {
 public:
  CoverFamily(int dim, long horizon, int num_labels, int k);

  unsigned long long size() const;  // closed form; throws BudgetExceeded on overflow
  bool next(CoverExpertParams& out);
  void reset();

 private:
  bool advance_state();

  int d_;
  long T_;
  int k_;
  int pair_count_;
  int s_ = 0;
  std::vector<long> subset_;
  std::vector<int> assign_;
  bool done_ = false;
};

// ---------------------------------------------------------------------------
// Multiplicative weights over adaptive experts

/// Exponentially weighted forecaster: predicts the weight-normalized convex
/// combination of the experts' indicator vectors and multiplies the weight of
/// every erring expert by (1-gamma), gamma = min(1/2, sqrt(ln n / T)).
class MwLearner final : public Learner {
 public:
  MwLearner(std::vector<std::unique_ptr<OnlineListFunction>> experts, long horizon,
            int num_labels, int k);

  int list_size() const override { return k_; }
  int num_labels() const override { return num_labels_; }
  bool is_randomized() const override { return true; }
  ListDistribution predict_marginals(const DomainPoint& x) const override;
  void feed(const DomainPoint& x, Label y) override;

  double gamma() const { return gamma_; }
  std::size_t expert_count() const { return experts_.size(); }
  const std::vector<long>& expert_mistakes() const { return expert_mistakes_; }
  long best_expert_mistakes() const;

 private:
  std::vector<std::unique_ptr<OnlineListFunction>> experts_;
  std::vector<double> weights_;
  std::vector<long> expert_mistakes_;
  double gamma_;
  int num_labels_;
  int k_;
};

/// Regret guarantee of the forecaster above against its own expert pool.
double mw_regret_bound(std::size_t experts, long horizon);

// ---------------------------------------------------------------------------
// Agnostic learners

inline constexpr unsigned long long kDefaultExpertBudget = 1u << 21;

/// Horizon-aware agnostic learner: multiplicative weights over the cover
/// family of the class.
class AgnosticFixedT final : public Learner {
 public:
  AgnosticFixedT(std::shared_ptr<const HypothesisClass> cls, int k, long horizon,
                 unsigned long long expert_budget = kDefaultExpertBudget);

  int list_size() const override { return k_; }
  int num_labels() const override { return num_labels_; }
  bool is_randomized() const override { return true; }
  ListDistribution predict_marginals(const DomainPoint& x) const override;
  void feed(const DomainPoint& x, Label y) override;

  int dim() const { return d_; }
  const MwLearner& mw() const { return *mw_; }
  double regret_bound() const { return fixed_horizon_bound(d_, T_, num_labels_, k_); }

  /// 2 sqrt(dT + dT ln((T/d) ceil((L-k)/k) k)) for d >= 1; 0 when d == 0.
  static double fixed_horizon_bound(int d, long horizon, int num_labels, int k);

 private:
  std::unique_ptr<MwLearner> mw_;
  int d_;
  long T_;
  int num_labels_;
  int k_;
};

/// Doubling-trick wrapper: restarts the fixed-horizon learner on blocks of
/// lengths 1, 2, 4, ... so the regret bound holds simultaneously for all T.
class AgnosticAnytime final : public Learner {
 public:
  AgnosticAnytime(std::shared_ptr<const HypothesisClass> cls, int k,
                  unsigned long long expert_budget = kDefaultExpertBudget);

  int list_size() const override { return k_; }
  int num_labels() const override { return num_labels_; }
  bool is_randomized() const override { return true; }
  ListDistribution predict_marginals(const DomainPoint& x) const override;
  void feed(const DomainPoint& x, Label y) override;

  int dim() const { return d_; }
  double regret_bound(long horizon) const { return anytime_bound(d_, horizon, num_labels_, k_); }

  /// (2 sqrt 2 / (sqrt 2 - 1)) sqrt(dT + dT ln((T/d) ceil((L-k)/k) k)).
  static double anytime_bound(int d, long horizon, int num_labels, int k);
  /// Realized block lengths for a horizon, e.g. T=11 -> 1,2,4,4.
  static std::vector<long> planned_blocks(long horizon);

 private:
  void start_block(long length);

  std::shared_ptr<const HypothesisClass> cls_;
  int k_;
  unsigned long long budget_;
  int d_;
  int num_labels_;
  std::unique_ptr<AgnosticFixedT> block_;
  long block_len_ = 1;
  long fed_in_block_ = 0;
};

/// Negative-regret construction: runs the anytime learner with the minimal
/// feasible list size k_H and completes each list with k - k_H labels drawn
/// uniformly from the rest, realized exactly at the marginal level. The
/// per-round expected loss satisfies loss_A = p * loss_B with
/// p = (L - k) / (L - k_H).
class HybridLearner final : public Learner {
 public:
  HybridLearner(std::shared_ptr<const HypothesisClass> cls, int k,
                unsigned long long expert_budget = kDefaultExpertBudget);

  int list_size() const override { return k_; }
  int num_labels() const override { return num_labels_; }
  bool is_randomized() const override { return true; }
  ListDistribution predict_marginals(const DomainPoint& x) const override;
  void feed(const DomainPoint& x, Label y) override;

  double p() const { return p_; }
  int base_list_size() const { return k_base_; }
  const Learner& base() const { return *base_; }

 private:
  std::unique_ptr<AgnosticAnytime> base_;
  int k_;
  int k_base_;
  int num_labels_;
  double p_;
  double add_frac_;  // (k - k_H) / (L - k_H)
};

// ---------------------------------------------------------------------------
// Madow (systematic) sampling: a k-subset whose inclusion probabilities match
// the marginals exactly.

LabelList madow_sample_offset(const ListDistribution& dist, double offset);
LabelList madow_sample(const ListDistribution& dist, Rng& rng);

// ---------------------------------------------------------------------------
// Baseline learners (adversary opponents and demos)

class ConstantListLearner final : public Learner {
 public:
  ConstantListLearner(LabelList list, int num_labels);
  int list_size() const override { return list_.size(); }
  int num_labels() const override { return num_labels_; }
  bool is_randomized() const override { return false; }
  LabelList predict_list(const DomainPoint&) const override { return list_; }
  void feed(const DomainPoint&, Label) override {}

 private:
  LabelList list_;
  int num_labels_;
};

/// Marginal k/L on every label, every round.
class UniformListLearner final : public Learner {
 public:
  UniformListLearner(int k, int num_labels);
  int list_size() const override { return k_; }
  int num_labels() const override { return num_labels_; }
  bool is_randomized() const override { return true; }
  ListDistribution predict_marginals(const DomainPoint&) const override;
  void feed(const DomainPoint&, Label) override {}

 private:
  int k_;
  int num_labels_;
};

/// Deterministic: rotates through all labels, shifting by one on each feed.
class CyclingListLearner final : public Learner {
 public:
  CyclingListLearner(int k, int num_labels);
  int list_size() const override { return k_; }
  int num_labels() const override { return num_labels_; }
  bool is_randomized() const override { return false; }
  LabelList predict_list(const DomainPoint&) const override;
  void feed(const DomainPoint&, Label) override { ++shift_; }

 private:
  int k_;
  int num_labels_;
  long shift_ = 0;
};

/// Deterministic: the k most frequent labels seen so far, ties by index.
class FrequencyListLearner final : public Learner {
 public:
  FrequencyListLearner(int k, int num_labels);
  int list_size() const override { return k_; }
  int num_labels() const override { return num_labels_; }
  bool is_randomized() const override { return false; }
  LabelList predict_list(const DomainPoint&) const override;
  void feed(const DomainPoint&, Label y) override;

 private:
  int k_;
  int num_labels_;
  std::vector<long> counts_;
};

}  // namespace lol
