#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace lol {

using Label = int;

// Domain points are integer indices for finite-domain classes; the linear
// separability path uses real feature vectors instead.
using FeatureVec = std::vector<double>;
using DomainPoint = std::variant<int, FeatureVec>;

int point_index(const DomainPoint& x);
const FeatureVec& point_vec(const DomainPoint& x);
bool point_eq(const DomainPoint& a, const DomainPoint& b);
bool point_less(const DomainPoint& a, const DomainPoint& b);
std::string point_str(const DomainPoint& x);

struct Example {
  DomainPoint x;
  Label y = 0;
};

bool operator==(const Example& a, const Example& b);
bool operator<(const Example& a, const Example& b);

/// An ordered, possibly empty sequence of examples.
struct Pattern {
  std::vector<Example> examples;

  std::size_t size() const { return examples.size(); }
  bool empty() const { return examples.empty(); }
  Pattern prefix(std::size_t n) const;
  Pattern concat(const Pattern& tail) const;
  void push(DomainPoint x, Label y) { examples.push_back({std::move(x), y}); }
};

bool operator==(const Pattern& a, const Pattern& b);
bool operator<(const Pattern& a, const Pattern& b);

/// True iff every example of `a` appears in `b` in order (not necessarily
/// contiguously).
bool is_subsequence(const Pattern& a, const Pattern& b);

/// A set of exactly k distinct labels, kept sorted ascending.
struct LabelList {
  std::vector<Label> labels;

  LabelList() = default;
  explicit LabelList(std::vector<Label> ls);
  int size() const { return static_cast<int>(labels.size()); }
  bool contains(Label y) const;
};

bool operator==(const LabelList& a, const LabelList& b);

/// Maps every domain point to a set of exactly `width` labels. Width 1 is the
/// ordinary single-labeled hypothesis.
struct MultiHypothesis {
  std::vector<std::vector<Label>> labels_for;  // per x, sorted ascending

  bool assigns(int x, Label y) const;
  int width() const { return labels_for.empty() ? 0 : static_cast<int>(labels_for[0].size()); }
};

struct HypothesisClass {
  std::vector<MultiHypothesis> hypotheses;
  int domain_size = 0;
  int num_labels = 0;
  int list_width = 1;  // k' shared by all hypotheses

  int size() const { return static_cast<int>(hypotheses.size()); }
  void validate() const;
};

/// A finite pattern class stored fully closed: every subsequence of a member
/// is itself a member, and the empty pattern is present iff the class is
/// nonempty.
struct PatternClassExplicit {
  std::set<Pattern> patterns;
  int domain_size = 0;
  int num_labels = 0;
  bool has_contradictions = false;  // flagged by the loader, never rejected

  bool empty() const { return patterns.empty(); }
  bool member(const Pattern& s) const { return patterns.count(s) > 0; }
  std::size_t size() const { return patterns.size(); }
};

/// Closes a set of seed patterns downward: the result contains exactly the
/// subsequences of the seeds, deduplicated.
PatternClassExplicit downward_closure(const std::vector<Pattern>& seeds,
                                      int domain_size, int num_labels);

bool is_downward_closed(const PatternClassExplicit& p);

/// P_{x->y} = { S : (x,y) followed by S is in P }.
PatternClassExplicit restrict_class(const PatternClassExplicit& p, int x, Label y);

/// Subset view of a hypothesis class obtained by successive restrictions.
struct VersionSpace {
  std::shared_ptr<const HypothesisClass> base;
  std::vector<uint8_t> active;  // 1 = hypothesis still alive

  static VersionSpace full(std::shared_ptr<const HypothesisClass> cls);
  int count_active() const;
  bool empty() const { return count_active() == 0; }
  VersionSpace restricted(int x, Label y) const;
  uint64_t mask() const;  // requires |H| <= 64
};

/// Membership oracle interface over patterns.
class PatternOracle {
 public:
  virtual ~PatternOracle() = default;
  virtual bool member(const Pattern& s) const = 0;
};

class ExplicitOracle final : public PatternOracle {
 public:
  explicit ExplicitOracle(const PatternClassExplicit& cls) : cls_(&cls) {}
  bool member(const Pattern& s) const override { return cls_->member(s); }

 private:
  const PatternClassExplicit* cls_;
};

/// P(H): a pattern is a member iff some active hypothesis is consistent with
/// every one of its examples. Order-insensitive by construction.
class InducedOracle final : public PatternOracle {
 public:
  explicit InducedOracle(VersionSpace vs) : vs_(std::move(vs)) {}
  bool member(const Pattern& s) const override;

 private:
  VersionSpace vs_;
};

/// M(h; S): number of positions t with y_t not in h(x_t).
long mistakes(const MultiHypothesis& h, const Pattern& s);

/// min over active hypotheses of mistakes(h, S). Throws on an empty class.
long opt(const VersionSpace& vs, const Pattern& s);
long opt(const HypothesisClass& cls, const Pattern& s);

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace lol
