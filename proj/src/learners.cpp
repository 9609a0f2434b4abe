#include "lol/learners.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lol {

void ListDistribution::validate(double tol) const {
  double sum = 0;
  for (double m : marginals) {
    if (m < -tol || m > 1 + tol) throw std::invalid_argument("marginal outside [0,1]");
    sum += m;
  }
  if (std::abs(sum - list_size) > tol)
    throw std::invalid_argument("marginals do not sum to the list size");
}

ListDistribution indicator_distribution(const LabelList& list, int num_labels) {
  ListDistribution d;
  d.marginals.assign(static_cast<std::size_t>(num_labels), 0.0);
  for (Label y : list.labels) d.marginals.at(static_cast<std::size_t>(y)) = 1.0;
  d.list_size = list.size();
  return d;
}

LabelList Learner::predict_list(const DomainPoint&) const {
  throw std::logic_error("randomized learner emits marginals, not a single list");
}

ListDistribution Learner::predict_marginals(const DomainPoint& x) const {
  return indicator_distribution(predict_list(x), num_labels());
}

Trace run_online(Learner& learner, const std::vector<Example>& stream) {
  Trace trace;
  long t = 0;
  for (const Example& e : stream) {
    ++t;
    TraceRow row;
    row.t = t;
    row.x = e.x;
    row.prediction = learner.predict_marginals(e.x);
    row.y = e.y;
    row.loss = row.prediction.loss(e.y);
    trace.total_loss += row.loss;
    if (row.loss > 0.5) ++trace.mistake_rounds;
    learner.feed(e.x, e.y);
    trace.rows.push_back(std::move(row));
  }
  return trace;
}

// ---------------------------------------------------------------------------
// List SOA

SoaLearner::SoaLearner(ClassState init, int k, std::shared_ptr<DimensionSolver> solver)
    : k_(k), state_(std::move(init)), solver_(std::move(solver)) {
  if (state_.empty()) throw std::invalid_argument("SOA needs a nonempty class");
  if (!solver_) solver_ = std::make_shared<DimensionSolver>(k_);
  if (solver_->k() != k_) throw std::invalid_argument("solver list size mismatch");
  if (solver_->dim(state_) == kInfiniteDim)
    throw std::invalid_argument("SOA needs a class of finite dimension");
}

LabelList SoaLearner::predict_list(const DomainPoint& x) const {
  const int xi = point_index(x);
  const int L = state_.num_labels();
  std::vector<std::pair<int, Label>> ranked;  // (-dim, y): best first after sort
  ranked.reserve(static_cast<std::size_t>(L));
  for (Label y = 0; y < L; ++y) {
    ClassState r = state_.restricted(xi, y);
    int d = r.empty() ? -1 : solver_->dim(r);
    ranked.emplace_back(-d, y);
  }
  std::sort(ranked.begin(), ranked.end());
  std::vector<Label> top;
  top.reserve(static_cast<std::size_t>(k_));
  for (int i = 0; i < k_; ++i) top.push_back(ranked[static_cast<std::size_t>(i)].second);
  return LabelList(std::move(top));
}

void SoaLearner::feed(const DomainPoint& x, Label y) {
  if (predict_list(x).contains(y)) return;  // lazy: no update without a mistake
  ClassState next = state_.restricted(point_index(x), y);
  if (next.empty()) {
    frozen_ = true;  // unrealizable input; keep the last consistent space
    return;
  }
  state_ = std::move(next);
  ++updates_;
}

// ---------------------------------------------------------------------------
// List Perceptron

PerceptronLearner::PerceptronLearner(int feature_dim, int num_labels, int k)
    : feature_dim_(feature_dim), num_labels_(num_labels), k_(k) {
  if (feature_dim < 1) throw std::invalid_argument("feature dimension must be positive");
  if (k < 1 || k >= num_labels) throw std::invalid_argument("need 1 <= k < |Y|");
  w_.assign(static_cast<std::size_t>(num_labels), FeatureVec(static_cast<std::size_t>(feature_dim), 0.0));
}

LabelList PerceptronLearner::predict_list(const DomainPoint& x) const {
  const FeatureVec& v = point_vec(x);
  if (static_cast<int>(v.size()) != feature_dim_)
    throw std::invalid_argument("feature vector dimension mismatch");
  std::vector<std::pair<double, Label>> ranked;
  ranked.reserve(w_.size());
  for (Label y = 0; y < num_labels_; ++y) {
    double score = std::inner_product(v.begin(), v.end(), w_[static_cast<std::size_t>(y)].begin(), 0.0);
    ranked.emplace_back(-score, y);
  }
  std::sort(ranked.begin(), ranked.end());
  std::vector<Label> top;
  for (int i = 0; i < k_; ++i) top.push_back(ranked[static_cast<std::size_t>(i)].second);
  return LabelList(std::move(top));
}

void PerceptronLearner::feed(const DomainPoint& x, Label y) {
  LabelList pred = predict_list(x);
  if (pred.contains(y)) return;
  const FeatureVec& v = point_vec(x);
  FeatureVec& wy = w_.at(static_cast<std::size_t>(y));
  for (std::size_t i = 0; i < v.size(); ++i) wy[i] += k_ * v[i];
  for (Label p : pred.labels) {
    FeatureVec& wp = w_[static_cast<std::size_t>(p)];
    for (std::size_t i = 0; i < v.size(); ++i) wp[i] -= v[i];
  }
  ++mistakes_;
}

double PerceptronLearner::potential() const {
  double s = 0;
  for (const FeatureVec& wy : w_)
    s += std::inner_product(wy.begin(), wy.end(), wy.begin(), 0.0);
  return s;
}

// ---------------------------------------------------------------------------
// Canonical cover and cover experts

std::vector<std::vector<Label>> canonical_k_cover(const std::vector<Label>& a, int k,
                                                  int num_labels) {
  if (a.empty()) throw std::invalid_argument("canonical cover of an empty set");
  if (k < 1) throw std::invalid_argument("cover sets must have positive size");
  const std::size_t m = (a.size() + static_cast<std::size_t>(k) - 1) / static_cast<std::size_t>(k);
  std::vector<std::vector<Label>> out(m);
  for (std::size_t b = 0; b < m; ++b) {
    std::vector<Label>& set = out[b];
    for (std::size_t i = b * static_cast<std::size_t>(k);
         i < (b + 1) * static_cast<std::size_t>(k) && i < a.size() + a.size(); ++i)
      set.push_back(a[i < a.size() ? i : i - a.size()]);  // pad from the front
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    if (static_cast<int>(set.size()) < k) {
      // |A| < k: the front-padding rule is exhausted; fill with the smallest
      // absent labels of the full label space
      if (num_labels < 0) throw std::invalid_argument("set smaller than k needs the label count");
      for (Label y = 0; y < num_labels && static_cast<int>(set.size()) < k; ++y)
        if (!std::binary_search(set.begin(), set.end(), y)) {
          set.insert(std::lower_bound(set.begin(), set.end(), y), y);
        }
    }
    if (static_cast<int>(set.size()) != k)
      throw std::invalid_argument("cannot complete a cover set to k distinct labels");
  }
  return out;
}

CoverExpert::CoverExpert(ClassState cls, int k, long horizon, CoverExpertParams params,
                         std::shared_ptr<DimensionSolver> solver)
    : soa_(std::move(cls), k, std::move(solver)),
      k_(k),
      horizon_(horizon),
      params_(std::move(params)) {}

LabelList CoverExpert::output_for(const DomainPoint& x, Label* self_feed) const {
  if (t_ > horizon_) {  // constant beyond the horizon
    std::vector<Label> ls(static_cast<std::size_t>(k_));
    std::iota(ls.begin(), ls.end(), 0);
    if (self_feed) *self_feed = 0;
    return LabelList(std::move(ls));
  }
  LabelList soa_list = soa_.predict_list(x);
  const bool deviate = next_step_ < params_.steps.size() && params_.steps[next_step_] == t_;
  if (!deviate) {
    if (self_feed) *self_feed = soa_list.labels.front();
    return soa_list;
  }
  std::vector<Label> complement;
  for (Label y = 0; y < soa_.num_labels(); ++y)
    if (!soa_list.contains(y)) complement.push_back(y);
  auto cover = canonical_k_cover(complement, k_, soa_.num_labels());
  const auto [i_t, j_t] = params_.choices[next_step_];
  if (j_t < 1 || j_t > static_cast<int>(cover.size()))
    throw std::invalid_argument("cover-set ordinal out of range");
  std::vector<Label> set = cover[static_cast<std::size_t>(j_t - 1)];
  if (i_t < 1 || i_t > static_cast<int>(set.size()))
    throw std::invalid_argument("element ordinal out of range");
  if (self_feed) *self_feed = set[static_cast<std::size_t>(i_t - 1)];
  return LabelList(std::move(set));
}

LabelList CoverExpert::predict(const DomainPoint& x) const { return output_for(x, nullptr); }

void CoverExpert::advance(const DomainPoint& x) {
  if (t_ > horizon_) {
    ++t_;
    return;
  }
  Label fed = 0;
  (void)output_for(x, &fed);
  const bool deviate = next_step_ < params_.steps.size() && params_.steps[next_step_] == t_;
  soa_.feed(x, fed);
  if (deviate) ++next_step_;
  ++t_;
}

// ---------------------------------------------------------------------------
// CoverFamily

CoverFamily::CoverFamily(int dim, long horizon, int num_labels, int k)
    : d_(dim), T_(horizon), k_(k) {
  if (dim == kInfiniteDim) throw std::invalid_argument("cover family needs a finite dimension");
  if (dim < 0) throw std::invalid_argument("cover family needs a nonempty class");
  if (k < 1 || k >= num_labels) throw std::invalid_argument("need 1 <= k < |Y|");
  if (horizon < 1) throw std::invalid_argument("horizon must be positive");
  const int m = (num_labels - k + k - 1) / k;  // ceil((L-k)/k)
  pair_count_ = m * k;
  reset();
}

void CoverFamily::reset() {
  s_ = 0;
  subset_.clear();
  assign_.clear();
  done_ = false;
}

unsigned long long CoverFamily::size() const {
  unsigned long long total = 0;
  for (int i = 0; i <= std::min<long>(d_, T_); ++i) {
    unsigned long long binom = 1;
    for (int j = 0; j < i; ++j) {
      if (__builtin_mul_overflow(binom, static_cast<unsigned long long>(T_ - j), &binom))
        throw BudgetExceeded("cover family size overflows");
      binom /= static_cast<unsigned long long>(j + 1);
    }
    unsigned long long term = binom;
    for (int j = 0; j < i; ++j)
      if (__builtin_mul_overflow(term, static_cast<unsigned long long>(pair_count_), &term))
        throw BudgetExceeded("cover family size overflows");
    if (__builtin_add_overflow(total, term, &total))
      throw BudgetExceeded("cover family size overflows");
  }
  return total;
}

bool CoverFamily::next(CoverExpertParams& out) {
  if (done_) return false;
  out.steps.assign(subset_.begin(), subset_.end());
  out.choices.clear();
  for (int digit : assign_)
    out.choices.emplace_back(digit % k_ + 1, digit / k_ + 1);
  advance_state();
  return true;
}

bool CoverFamily::advance_state() {
  // odometer over the (i,j) digits first
  for (std::size_t i = assign_.size(); i-- > 0;) {
    if (++assign_[i] < pair_count_) return true;
    assign_[i] = 0;
  }
  // then the next size-s subset of [1..T]
  if (!subset_.empty()) {
    std::size_t i = subset_.size();
    while (i-- > 0) {
      if (subset_[i] < T_ - static_cast<long>(subset_.size() - 1 - i)) {
        ++subset_[i];
        for (std::size_t j = i + 1; j < subset_.size(); ++j) subset_[j] = subset_[j - 1] + 1;
        return true;
      }
    }
  }
  // then the next subset size
  ++s_;
  if (s_ > d_ || s_ > T_) {
    done_ = true;
    return false;
  }
  subset_.resize(static_cast<std::size_t>(s_));
  std::iota(subset_.begin(), subset_.end(), 1);
  assign_.assign(static_cast<std::size_t>(s_), 0);
  return true;
}

// ---------------------------------------------------------------------------
// Multiplicative weights

MwLearner::MwLearner(std::vector<std::unique_ptr<OnlineListFunction>> experts, long horizon,
                     int num_labels, int k)
    : experts_(std::move(experts)), num_labels_(num_labels), k_(k) {
  if (experts_.empty()) throw std::invalid_argument("multiplicative weights needs an expert");
  if (horizon < 1) throw std::invalid_argument("horizon must be positive");
  weights_.assign(experts_.size(), 1.0);
  expert_mistakes_.assign(experts_.size(), 0);
  gamma_ = std::min(0.5, std::sqrt(std::log(static_cast<double>(experts_.size())) /
                                   static_cast<double>(horizon)));
}

ListDistribution MwLearner::predict_marginals(const DomainPoint& x) const {
  ListDistribution dist;
  dist.marginals.assign(static_cast<std::size_t>(num_labels_), 0.0);
  dist.list_size = k_;
  double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  for (std::size_t f = 0; f < experts_.size(); ++f) {
    const double share = weights_[f] / total;
    for (Label y : experts_[f]->predict(x).labels)
      dist.marginals[static_cast<std::size_t>(y)] += share;
  }
  dist.validate(1e-6);
  return dist;
}

void MwLearner::feed(const DomainPoint& x, Label y) {
  const double before = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  double missed_weight = 0;
  for (std::size_t f = 0; f < experts_.size(); ++f) {
    if (!experts_[f]->predict(x).contains(y)) {
      missed_weight += weights_[f];
      weights_[f] *= (1.0 - gamma_);
      ++expert_mistakes_[f];
    }
  }
  // W_{t+1} = W_t (1 - gamma l_t) with l_t the weighted mistake fraction
  const double after = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  const double expected = before * (1.0 - gamma_ * (missed_weight / before));
  if (std::abs(after - expected) > 1e-9 * std::max(1.0, before))
    throw std::logic_error("multiplicative weights update identity violated");
  if (after < 1e-300) {  // predictions depend only on weight ratios
    const double scale = 1.0 / after;
    for (double& w : weights_) w *= scale;
  }
  for (auto& f : experts_) f->advance(x);
}

long MwLearner::best_expert_mistakes() const {
  return *std::min_element(expert_mistakes_.begin(), expert_mistakes_.end());
}

double mw_regret_bound(std::size_t experts, long horizon) {
  return 2.0 * std::sqrt(static_cast<double>(horizon) * std::log(static_cast<double>(experts)));
}

// ---------------------------------------------------------------------------
// Agnostic learners

namespace {

std::unique_ptr<MwLearner> build_cover_mw(const std::shared_ptr<const HypothesisClass>& cls,
                                          int k, long horizon, int d,
                                          unsigned long long expert_budget) {
  CoverFamily family(d, horizon, cls->num_labels, k);
  const unsigned long long n = family.size();
  if (n > expert_budget)
    throw BudgetExceeded("cover family of size " + std::to_string(n) +
                         " exceeds the expert budget of " + std::to_string(expert_budget));
  auto solver = std::make_shared<DimensionSolver>(k);
  std::vector<std::unique_ptr<OnlineListFunction>> experts;
  experts.reserve(static_cast<std::size_t>(n));
  CoverExpertParams params;
  while (family.next(params))
    experts.push_back(std::make_unique<CoverExpert>(ClassState::version_space(cls), k, horizon,
                                                    params, solver));
  return std::make_unique<MwLearner>(std::move(experts), horizon, cls->num_labels, k);
}

}  // namespace

AgnosticFixedT::AgnosticFixedT(std::shared_ptr<const HypothesisClass> cls, int k, long horizon,
                               unsigned long long expert_budget)
    : T_(horizon), num_labels_(cls->num_labels), k_(k) {
  DimensionSolver solver(k);
  d_ = solver.dim(ClassState::version_space(cls));
  if (d_ == kInfiniteDim)
    throw std::invalid_argument("agnostic learning needs a finite list dimension");
  mw_ = build_cover_mw(cls, k, horizon, d_, expert_budget);
}

ListDistribution AgnosticFixedT::predict_marginals(const DomainPoint& x) const {
  return mw_->predict_marginals(x);
}

void AgnosticFixedT::feed(const DomainPoint& x, Label y) { mw_->feed(x, y); }

double AgnosticFixedT::fixed_horizon_bound(int d, long horizon, int num_labels, int k) {
  if (d == 0) return 0.0;
  const double T = static_cast<double>(horizon);
  const double m = std::ceil(static_cast<double>(num_labels - k) / k);
  const double arg = (T / d) * m * k;
  return 2.0 * std::sqrt(d * T + d * T * std::log(arg));
}

AgnosticAnytime::AgnosticAnytime(std::shared_ptr<const HypothesisClass> cls, int k,
                                 unsigned long long expert_budget)
    : cls_(std::move(cls)), k_(k), budget_(expert_budget), num_labels_(cls_->num_labels) {
  DimensionSolver solver(k);
  d_ = solver.dim(ClassState::version_space(cls_));
  if (d_ == kInfiniteDim)
    throw std::invalid_argument("agnostic learning needs a finite list dimension");
  start_block(1);
}

void AgnosticAnytime::start_block(long length) {
  block_len_ = length;
  fed_in_block_ = 0;
  block_ = std::make_unique<AgnosticFixedT>(cls_, k_, length, budget_);
}

ListDistribution AgnosticAnytime::predict_marginals(const DomainPoint& x) const {
  return block_->predict_marginals(x);
}

void AgnosticAnytime::feed(const DomainPoint& x, Label y) {
  block_->feed(x, y);
  if (++fed_in_block_ == block_len_) start_block(block_len_ * 2);
}

double AgnosticAnytime::anytime_bound(int d, long horizon, int num_labels, int k) {
  if (d == 0) return 0.0;
  const double T = static_cast<double>(horizon);
  const double m = std::ceil(static_cast<double>(num_labels - k) / k);
  const double arg = (T / d) * m * k;
  const double c = 2.0 * std::sqrt(2.0) / (std::sqrt(2.0) - 1.0);
  return c * std::sqrt(d * T + d * T * std::log(arg));
}

std::vector<long> AgnosticAnytime::planned_blocks(long horizon) {
  std::vector<long> blocks;
  long remaining = horizon;
  long len = 1;
  while (remaining > 0) {
    blocks.push_back(std::min(len, remaining));
    remaining -= blocks.back();
    len *= 2;
  }
  return blocks;
}

// ---------------------------------------------------------------------------
// Hybrid learner

HybridLearner::HybridLearner(std::shared_ptr<const HypothesisClass> cls, int k,
                             unsigned long long expert_budget)
    : k_(k), num_labels_(cls->num_labels) {
  if (k > num_labels_) throw std::invalid_argument("list size exceeds the label count");
  k_base_ = minimal_finite_list_size(cls);
  if (k <= k_base_)
    throw std::invalid_argument("negative regret needs a list larger than the minimal size " +
                                std::to_string(k_base_));
  base_ = std::make_unique<AgnosticAnytime>(cls, k_base_, expert_budget);
  p_ = static_cast<double>(num_labels_ - k_) / static_cast<double>(num_labels_ - k_base_);
  add_frac_ = static_cast<double>(k_ - k_base_) / static_cast<double>(num_labels_ - k_base_);
}

ListDistribution HybridLearner::predict_marginals(const DomainPoint& x) const {
  ListDistribution base = base_->predict_marginals(x);
  ListDistribution out;
  out.list_size = k_;
  out.marginals.resize(base.marginals.size());
  // uniform completion: labels outside the base list are added with
  // probability (k - k_H) / (L - k_H)
  for (std::size_t y = 0; y < base.marginals.size(); ++y)
    out.marginals[y] = base.marginals[y] + (1.0 - base.marginals[y]) * add_frac_;
  out.validate(1e-6);
  return out;
}

void HybridLearner::feed(const DomainPoint& x, Label y) { base_->feed(x, y); }

// ---------------------------------------------------------------------------
// Madow sampling

LabelList madow_sample_offset(const ListDistribution& dist, double offset) {
  dist.validate();
  if (offset < 0 || offset >= 1) throw std::invalid_argument("offset must lie in [0,1)");
  const int k = dist.list_size;
  // label y owns the interval [c_{y-1}, c_y); the k probe points offset+i each
  // land in exactly one interval, and no interval is longer than the spacing
  std::vector<double> cum(dist.marginals.size());
  double run = 0;
  for (std::size_t y = 0; y < dist.marginals.size(); ++y) {
    run += std::clamp(dist.marginals[y], 0.0, 1.0);
    cum[y] = run;
  }
  const double spacing = run / k;
  std::vector<Label> picked;
  picked.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    const double target = (offset + i) * spacing;
    auto it = std::upper_bound(cum.begin(), cum.end(), target);
    if (it == cum.end()) --it;
    Label y = static_cast<Label>(it - cum.begin());
    if (!picked.empty() && picked.back() == y)  // guard against fp boundary ties
      y = static_cast<Label>(std::min<std::size_t>(dist.marginals.size() - 1,
                                                   static_cast<std::size_t>(y) + 1));
    picked.push_back(y);
  }
  return LabelList(std::move(picked));
}

LabelList madow_sample(const ListDistribution& dist, Rng& rng) {
  return madow_sample_offset(dist, rng_unit(rng));
}

// ---------------------------------------------------------------------------
// Baseline learners

ConstantListLearner::ConstantListLearner(LabelList list, int num_labels)
    : list_(std::move(list)), num_labels_(num_labels) {
  for (Label y : list_.labels)
    if (y < 0 || y >= num_labels) throw std::invalid_argument("label out of range");
}

UniformListLearner::UniformListLearner(int k, int num_labels) : k_(k), num_labels_(num_labels) {
  if (k < 1 || k > num_labels) throw std::invalid_argument("need 1 <= k <= |Y|");
}

ListDistribution UniformListLearner::predict_marginals(const DomainPoint&) const {
  ListDistribution d;
  d.list_size = k_;
  d.marginals.assign(static_cast<std::size_t>(num_labels_),
                     static_cast<double>(k_) / static_cast<double>(num_labels_));
  return d;
}

CyclingListLearner::CyclingListLearner(int k, int num_labels) : k_(k), num_labels_(num_labels) {
  if (k < 1 || k > num_labels) throw std::invalid_argument("need 1 <= k <= |Y|");
}

LabelList CyclingListLearner::predict_list(const DomainPoint&) const {
  std::vector<Label> ls;
  for (int i = 0; i < k_; ++i)
    ls.push_back(static_cast<Label>((shift_ + i) % num_labels_));
  return LabelList(std::move(ls));
}

FrequencyListLearner::FrequencyListLearner(int k, int num_labels)
    : k_(k), num_labels_(num_labels), counts_(static_cast<std::size_t>(num_labels), 0) {
  if (k < 1 || k > num_labels) throw std::invalid_argument("need 1 <= k <= |Y|");
}

LabelList FrequencyListLearner::predict_list(const DomainPoint&) const {
  std::vector<std::pair<long, Label>> ranked;
  for (Label y = 0; y < num_labels_; ++y) ranked.emplace_back(-counts_[static_cast<std::size_t>(y)], y);
  std::sort(ranked.begin(), ranked.end());
  std::vector<Label> ls;
  for (int i = 0; i < k_; ++i) ls.push_back(ranked[static_cast<std::size_t>(i)].second);
  return LabelList(std::move(ls));
}

void FrequencyListLearner::feed(const DomainPoint&, Label y) {
  ++counts_.at(static_cast<std::size_t>(y));
}

}  // namespace lol
