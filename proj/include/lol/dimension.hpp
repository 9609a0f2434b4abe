#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>

#include "lol/core.hpp"

namespace lol {

/// Complete mistake tree: every internal node carries a domain point and
/// exactly `out_degree` child edges with pairwise-distinct labels; all
/// root-to-leaf paths have the same length.
struct MistakeTreeNode {
  int x = 0;
  std::vector<std::pair<Label, std::unique_ptr<MistakeTreeNode>>> edges;

  bool leaf() const { return edges.empty(); }
};

struct MistakeTree {
  std::unique_ptr<MistakeTreeNode> root;  // null iff depth 0
  int depth = 0;
  int out_degree = 0;

  void validate() const;  // completeness + distinct edge labels
};

MistakeTree copy_tree(const MistakeTree& t);

/// The example sequence induced by a root-to-leaf path, given as child
/// indices. Throws when an index is out of range.
Pattern branch_pattern(const MistakeTree& tree, std::span<const int> branch);

/// True iff every branch of the tree induces a member pattern.
bool is_shattered(const MistakeTree& tree, const PatternOracle& oracle);

/// A complete (possibly huge) tree exposed one node at a time, so adversary
/// walks need not materialize it. `path` lists the child indices taken so far.
class CompleteTreeSource {
 public:
  struct NodeView {
    DomainPoint x;
    std::vector<Label> edge_labels;  // size out_degree, distinct
  };

  virtual ~CompleteTreeSource() = default;
  virtual int depth() const = 0;
  virtual int out_degree() const = 0;
  virtual NodeView node(std::span<const int> path) const = 0;
};

class ExplicitTreeSource final : public CompleteTreeSource {
 public:
  explicit ExplicitTreeSource(const MistakeTree& tree) : tree_(&tree) {}
  int depth() const override { return tree_->depth; }
  int out_degree() const override { return tree_->out_degree; }
  NodeView node(std::span<const int> path) const override;

 private:
  const MistakeTree* tree_;
};

/// Depth-T tree whose level-i nodes all carry the same point and the same
/// edge-label set. Shattered by any class with one hypothesis covering the
/// labels at each level.
class UniformTreeSource final : public CompleteTreeSource {
 public:
  UniformTreeSource(int depth, std::vector<DomainPoint> level_points,
                    std::vector<std::vector<Label>> level_labels);
  int depth() const override { return depth_; }
  int out_degree() const override { return static_cast<int>(level_labels_[0].size()); }
  NodeView node(std::span<const int> path) const override;

 private:
  int depth_;
  std::vector<DomainPoint> level_points_;
  std::vector<std::vector<Label>> level_labels_;
};

constexpr int kInfiniteDim = std::numeric_limits<int>::max();

struct DimensionResult {
  int dim = -1;          // -1 empty class; kInfiniteDim when unbounded
  bool infinite = false;
  std::optional<MistakeTree> witness;  // present iff 0 <= dim < infinity
};

/// Restrictable class state: an explicit pattern set or a hypothesis version
/// space. Everything the dimension recursion and the List SOA need.
class ClassState {
 public:
  static ClassState explicit_class(PatternClassExplicit cls);
  static ClassState version_space(std::shared_ptr<const HypothesisClass> cls);
  static ClassState version_space(VersionSpace vs);

  bool empty() const;
  int domain_size() const;
  int num_labels() const;
  ClassState restricted(int x, Label y) const;
  bool member(const Pattern& s) const;
  bool is_version_space() const { return std::holds_alternative<VersionSpace>(v_); }
  const VersionSpace& as_version_space() const { return std::get<VersionSpace>(v_); }
  const PatternClassExplicit& as_explicit() const { return std::get<PatternClassExplicit>(v_); }

 private:
  std::variant<PatternClassExplicit, VersionSpace> v_;
};

class ClassOracle final : public PatternOracle {
 public:
  explicit ClassOracle(ClassState c) : c_(std::move(c)) {}
  bool member(const Pattern& s) const override { return c_.member(s); }

 private:
  ClassState c_;
};

/// Exact L_k computation with memoization. Version spaces get exact infinite
/// detection by a fixed-point peel over the reachable mask lattice; explicit
/// classes recurse (their dimension is bounded by the longest pattern).
///
/// dim(P) >= m+1 iff there are x and k+1 distinct labels y with
/// dim(P_{x->y}) >= m; the witness tree follows the argmax choices with ties
/// broken by (dim descending, label ascending).
class DimensionSolver {
 public:
  explicit DimensionSolver(int k);

  int dim(const ClassState& c);               // -1, finite, or kInfiniteDim
  DimensionResult with_witness(const ClassState& c);
  int k() const { return k_; }

 private:
  int dim_explicit(const PatternClassExplicit& cls);
  int dim_version_space(const VersionSpace& vs);
  void ensure_levels(const VersionSpace& vs);
  MistakeTree build_witness(const ClassState& c, int depth);
  void build_witness_node(const ClassState& c, int depth, MistakeTreeNode* out);

  int k_;
  std::unordered_map<std::string, int> explicit_memo_;
  // per base class: mask -> dim (kInfiniteDim for the fixed-point survivors)
  std::unordered_map<const HypothesisClass*, std::unordered_map<uint64_t, int>> vs_levels_;
};

/// Convenience one-shot wrappers.
DimensionResult list_littlestone_dim(const PatternClassExplicit& cls, int k);
DimensionResult list_littlestone_dim(const HypothesisClass& cls, int k);

/// Minimal list size with finite dimension. Always <= num_labels.
int minimal_finite_list_size(std::shared_ptr<const HypothesisClass> cls);

/// Value of the horizon-bounded adversary game:
///   V_0 = 0,
///   V_h(C) = max_x min_{k-lists L} max_{y: C_{x->y} nonempty}
///            (1[y not in L] + V_{h-1}(C_{x->y})),
/// with a presented x contributing 0 when it admits no realizable label.
/// Kept deliberately independent of the dimension recursion: lists are
/// enumerated by brute force so the two computations share no logic.
class MinimaxOracle {
 public:
  MinimaxOracle(int k, int num_labels);

  long value(const ClassState& c, int horizon);
  /// Iterates horizons until V_h == V_{h+1}; throws if not stabilized by
  /// `cap`. Theorem-level contract: the fixed point equals L_k.
  long stabilized(const ClassState& c, int cap);

 private:
  long eval(const ClassState& c, int horizon);
  std::string key_of(const ClassState& c) const;

  int k_;
  int num_labels_;
  std::vector<std::vector<Label>> all_lists_;  // every k-subset of [L]
  std::unordered_map<std::string, long> memo_;
};

std::string class_key(const ClassState& c);

}  // namespace lol
