#pragma once

#include "lol/core.hpp"
#include "lol/rng.hpp"

namespace lol {

/// Normalized separator family (sum of squared norms 1) together with the
/// margin it certifies: for every generated example, the true label's score
/// beats all but at most k-1 competitors by at least gamma, and beats every
/// competitor strictly.
struct SeparatorCertificate {
  std::vector<FeatureVec> w;  // one direction per label
  double gamma = 0;
  int k = 1;
};

struct SeparableData {
  Pattern pattern;  // vector-valued domain points
  SeparatorCertificate cert;
  double radius = 0;
};

/// Draws a random normalized separator family, then rejection-samples points
/// of norm at most `radius` until each accepted example meets the margin
/// condition at `gamma_target`. The certificate's gamma is the (larger)
/// achieved margin, a valid lower bound on the sequence's true k'th margin.
/// Throws BudgetExceeded after 1000*T failed draws.
SeparableData generate_separable(int feature_dim, int num_labels, int k, long count,
                                 double gamma_target, double radius, Rng& rng);

struct CertificateCheck {
  bool ok = false;
  double achieved = 0;  // min over examples of the rank-(k+1) score gap
  std::string reason;
};

/// Checks normalization, strict separability, and the margin rank condition;
/// reports the largest gamma the certificate supports.
CertificateCheck verify_certificate(const Pattern& data, const SeparatorCertificate& cert, int k);

}  // namespace lol
