#include "lol/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace lol {

namespace {

double dot(const FeatureVec& a, const FeatureVec& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double gaussian(Rng& rng) {
  // Box-Muller on the deterministic uniform helper
  double u1 = rng_unit(rng);
  while (u1 <= 0) u1 = rng_unit(rng);
  const double u2 = rng_unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

/// The margin an example certifies: sort scores descending; the gap between
/// the true label's score and the score at overall rank k+1. Returns the pair
/// (smallest competitor gap, rank-(k+1) gap).
std::pair<double, double> example_gaps(const FeatureVec& x, Label y,
                                       const std::vector<FeatureVec>& w, int k) {
  std::vector<double> gaps;  // competitor gaps
  const double sy = dot(w[static_cast<std::size_t>(y)], x);
  for (std::size_t c = 0; c < w.size(); ++c) {
    if (static_cast<Label>(c) == y) continue;
    gaps.push_back(sy - dot(w[c], x));
  }
  std::sort(gaps.begin(), gaps.end());
  // overall rank k+1 (true label is rank 1) is the k-th smallest competitor gap
  return {gaps.front(), gaps[static_cast<std::size_t>(k - 1)]};
}

}  // namespace

SeparableData generate_separable(int feature_dim, int num_labels, int k, long count,
                                 double gamma_target, double radius, Rng& rng) {
  if (num_labels < k + 1) throw std::invalid_argument("need |Y| >= k+1");
  if (feature_dim < 2) throw std::invalid_argument("need at least two feature dimensions");
  if (gamma_target <= 0 || radius <= 0) throw std::invalid_argument("need positive margin and radius");

  SeparableData out;
  out.radius = radius;
  out.cert.k = k;
  out.cert.w.assign(static_cast<std::size_t>(num_labels), FeatureVec(static_cast<std::size_t>(feature_dim)));
  double sumsq = 0;
  for (auto& wy : out.cert.w) {
    for (double& c : wy) c = gaussian(rng);
    sumsq += dot(wy, wy);
  }
  const double scale = 1.0 / std::sqrt(sumsq);
  for (auto& wy : out.cert.w)
    for (double& c : wy) c *= scale;

  const long budget = 1000 * std::max<long>(count, 1);
  long attempts = 0;
  double achieved = std::numeric_limits<double>::infinity();
  while (static_cast<long>(out.pattern.size()) < count) {
    if (++attempts > budget) {
      const double rate = static_cast<double>(out.pattern.size()) / static_cast<double>(attempts);
      throw BudgetExceeded("margin rejection budget exhausted; acceptance rate " +
                           std::to_string(rate));
    }
    // uniform in the radius ball
    FeatureVec x(static_cast<std::size_t>(feature_dim));
    for (double& c : x) c = gaussian(rng);
    const double norm = std::sqrt(dot(x, x));
    if (norm == 0) continue;
    const double r = radius * std::pow(rng_unit(rng), 1.0 / feature_dim);
    for (double& c : x) c *= r / norm;

    Label best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (Label y = 0; y < num_labels; ++y) {
      const double s = dot(out.cert.w[static_cast<std::size_t>(y)], x);
      if (s > best_score) {
        best_score = s;
        best = y;
      }
    }
    const auto [min_gap, rank_gap] = example_gaps(x, best, out.cert.w, k);
    if (min_gap <= 0 || rank_gap < gamma_target) continue;
    achieved = std::min(achieved, rank_gap);
    out.pattern.push(DomainPoint{std::move(x)}, best);
  }
  out.cert.gamma = count > 0 ? achieved : gamma_target;
  return out;
}

CertificateCheck verify_certificate(const Pattern& data, const SeparatorCertificate& cert, int k) {
  CertificateCheck check;
  double sumsq = 0;
  for (const auto& wy : cert.w) sumsq += dot(wy, wy);
  if (std::abs(sumsq - 1.0) > 1e-9) {
    check.reason = "separators are not normalized";
    return check;
  }
  if (static_cast<int>(cert.w.size()) < k + 1) {
    check.reason = "fewer than k+1 labels";
    return check;
  }
  double achieved = std::numeric_limits<double>::infinity();
  for (const Example& e : data.examples) {
    const auto [min_gap, rank_gap] = example_gaps(point_vec(e.x), e.y, cert.w, k);
    if (min_gap <= 0) {
      check.reason = "an example is not strictly separated";
      return check;
    }
    achieved = std::min(achieved, rank_gap);
  }
  check.achieved = achieved;
  if (!data.examples.empty() && achieved < cert.gamma) {
    check.reason = "claimed margin exceeds the achieved margin";
    return check;
  }
  check.ok = true;
  return check;
}

}  // namespace lol
