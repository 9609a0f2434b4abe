#include "lol/dimension.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <sstream>
#include <unordered_set>

namespace lol {

namespace {

int node_depth_checked(const MistakeTreeNode* n, int out_degree) {
  if (n == nullptr || n->leaf()) return 0;
  if (static_cast<int>(n->edges.size()) != out_degree)
    throw std::invalid_argument("mistake tree node without full out-degree");
  std::vector<Label> seen;
  int d = -1;
  for (const auto& [y, child] : n->edges) {
    seen.push_back(y);
    int cd = node_depth_checked(child.get(), out_degree);
    if (d >= 0 && cd != d) throw std::invalid_argument("mistake tree is not complete");
    d = cd;
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
    throw std::invalid_argument("mistake tree edges must carry distinct labels");
  return d + 1;
}

}  // namespace

void MistakeTree::validate() const {
  if (depth == 0) {
    if (root && !root->leaf()) throw std::invalid_argument("depth-0 tree with a nonleaf root");
    return;
  }
  if (!root) throw std::invalid_argument("positive-depth tree without a root");
  if (node_depth_checked(root.get(), out_degree) != depth)
    throw std::invalid_argument("tree depth field does not match the structure");
}

namespace {

std::unique_ptr<MistakeTreeNode> copy_node(const MistakeTreeNode* n) {
  if (!n) return nullptr;
  auto out = std::make_unique<MistakeTreeNode>();
  out->x = n->x;
  for (const auto& [y, child] : n->edges) out->edges.emplace_back(y, copy_node(child.get()));
  return out;
}

}  // namespace

MistakeTree copy_tree(const MistakeTree& t) {
  MistakeTree out;
  out.depth = t.depth;
  out.out_degree = t.out_degree;
  out.root = copy_node(t.root.get());
  return out;
}

Pattern branch_pattern(const MistakeTree& tree, std::span<const int> branch) {
  Pattern p;
  const MistakeTreeNode* n = tree.root.get();
  for (int step : branch) {
    if (!n || n->leaf()) throw std::invalid_argument("branch longer than the tree");
    if (step < 0 || step >= static_cast<int>(n->edges.size()))
      throw std::invalid_argument("branch index out of range");
    p.push(DomainPoint{n->x}, n->edges[static_cast<std::size_t>(step)].first);
    n = n->edges[static_cast<std::size_t>(step)].second.get();
  }
  if (n && !n->leaf()) throw std::invalid_argument("branch does not reach a leaf");
  return p;
}

namespace {

bool shattered_below(const MistakeTreeNode* n, Pattern& prefix, const PatternOracle& oracle) {
  if (!n || n->leaf()) return oracle.member(prefix);
  for (const auto& [y, child] : n->edges) {
    prefix.push(DomainPoint{n->x}, y);
    bool ok = shattered_below(child.get(), prefix, oracle);
    prefix.examples.pop_back();
    if (!ok) return false;
  }
  return true;
}

}  // namespace

bool is_shattered(const MistakeTree& tree, const PatternOracle& oracle) {
  Pattern prefix;
  return shattered_below(tree.root.get(), prefix, oracle);
}

CompleteTreeSource::NodeView ExplicitTreeSource::node(std::span<const int> path) const {
  const MistakeTreeNode* n = tree_->root.get();
  for (int step : path) {
    if (!n || n->leaf()) throw std::invalid_argument("path below a leaf");
    n = n->edges.at(static_cast<std::size_t>(step)).second.get();
  }
  if (!n) throw std::invalid_argument("path hits an empty tree");
  NodeView v;
  v.x = DomainPoint{n->x};
  for (const auto& [y, child] : n->edges) v.edge_labels.push_back(y);
  return v;
}

UniformTreeSource::UniformTreeSource(int depth, std::vector<DomainPoint> level_points,
                                     std::vector<std::vector<Label>> level_labels)
    : depth_(depth), level_points_(std::move(level_points)), level_labels_(std::move(level_labels)) {
  if (level_points_.empty() || level_labels_.empty())
    throw std::invalid_argument("uniform tree needs points and labels");
}

CompleteTreeSource::NodeView UniformTreeSource::node(std::span<const int> path) const {
  const std::size_t level = path.size();
  if (static_cast<int>(level) >= depth_) throw std::invalid_argument("path below a leaf");
  NodeView v;
  v.x = level_points_[level % level_points_.size()];
  v.edge_labels = level_labels_[level % level_labels_.size()];
  return v;
}

// ---------------------------------------------------------------------------
// ClassState

ClassState ClassState::explicit_class(PatternClassExplicit cls) {
  ClassState c;
  c.v_ = std::move(cls);
  return c;
}

ClassState ClassState::version_space(std::shared_ptr<const HypothesisClass> cls) {
  return version_space(VersionSpace::full(std::move(cls)));
}

ClassState ClassState::version_space(VersionSpace vs) {
  ClassState c;
  c.v_ = std::move(vs);
  return c;
}

bool ClassState::empty() const {
  if (is_version_space()) return as_version_space().empty();
  return as_explicit().empty();
}

int ClassState::domain_size() const {
  if (is_version_space()) return as_version_space().base->domain_size;
  return as_explicit().domain_size;
}

int ClassState::num_labels() const {
  if (is_version_space()) return as_version_space().base->num_labels;
  return as_explicit().num_labels;
}

ClassState ClassState::restricted(int x, Label y) const {
  if (is_version_space()) return version_space(as_version_space().restricted(x, y));
  return explicit_class(restrict_class(as_explicit(), x, y));
}

bool ClassState::member(const Pattern& s) const {
  if (is_version_space()) return InducedOracle(as_version_space()).member(s);
  return as_explicit().member(s);
}

std::string class_key(const ClassState& c) {
  std::ostringstream os;
  if (c.is_version_space()) {
    const VersionSpace& vs = c.as_version_space();
    os << "V" << static_cast<const void*>(vs.base.get()) << ":";
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(vs.mask()));
    os << buf;
  } else {
    os << "E";
    for (const Pattern& s : c.as_explicit().patterns) {
      for (const Example& e : s.examples) os << point_index(e.x) << "." << e.y << ",";
      os << ";";
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// DimensionSolver

DimensionSolver::DimensionSolver(int k) : k_(k) {
  if (k < 1) throw std::invalid_argument("list size must be at least 1");
}

int DimensionSolver::dim(const ClassState& c) {
  if (k_ >= c.num_labels())
    throw std::invalid_argument("no k+1 distinct labels exist: k >= |Y|");
  if (c.empty()) return -1;
  if (c.is_version_space()) return dim_version_space(c.as_version_space());
  return dim_explicit(c.as_explicit());
}

int DimensionSolver::dim_explicit(const PatternClassExplicit& cls) {
  if (cls.patterns.empty()) return -1;
  const std::string key = class_key(ClassState::explicit_class(cls));
  if (auto it = explicit_memo_.find(key); it != explicit_memo_.end()) return it->second;

  int best = 0;
  for (int x = 0; x < cls.domain_size; ++x) {
    std::vector<int> dims;
    dims.reserve(static_cast<std::size_t>(cls.num_labels));
    for (Label y = 0; y < cls.num_labels; ++y)
      dims.push_back(dim_explicit(restrict_class(cls, x, y)));
    std::sort(dims.begin(), dims.end(), std::greater<int>());
    int kth = dims[static_cast<std::size_t>(k_)];  // (k+1)-th largest
    if (kth >= 0) best = std::max(best, 1 + kth);
  }
  explicit_memo_[key] = best;
  return best;
}

void DimensionSolver::ensure_levels(const VersionSpace& vs) {
  const HypothesisClass* base = vs.base.get();
  auto& dims = vs_levels_[base];
  const uint64_t seed = vs.mask();
  if (dims.count(seed)) return;

  const int n = base->domain_size;
  const int L = base->num_labels;
  const int H = base->size();
  if (H > 64) throw BudgetExceeded("version-space dimension limited to 64 hypotheses");

  // restriction masks per (x, y)
  std::vector<std::vector<uint64_t>> consistent(static_cast<std::size_t>(n),
                                                std::vector<uint64_t>(static_cast<std::size_t>(L), 0));
  for (int x = 0; x < n; ++x)
    for (Label y = 0; y < L; ++y)
      for (int i = 0; i < H; ++i)
        if (base->hypotheses[static_cast<std::size_t>(i)].assigns(x, y))
          consistent[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] |= (uint64_t{1} << i);

  // reachable nonzero masks, from the queried mask and anything recorded before
  std::unordered_set<uint64_t> reach;
  std::vector<uint64_t> work{seed};
  for (const auto& [m, d] : dims) work.push_back(m);
  while (!work.empty()) {
    uint64_t m = work.back();
    work.pop_back();
    if (m == 0 || reach.count(m)) continue;
    reach.insert(m);
    for (int x = 0; x < n; ++x)
      for (Label y = 0; y < L; ++y) {
        uint64_t r = m & consistent[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
        if (r != 0 && !reach.count(r)) work.push_back(r);
      }
  }

  // peel: alive_m = { masks with dim >= m }; survivors of a fixed point are
  // exactly the masks of infinite dimension
  std::unordered_set<uint64_t> alive = reach;
  dims.clear();
  int level = 0;
  while (!alive.empty()) {
    std::unordered_set<uint64_t> next;
    for (uint64_t m : alive) {
      bool grows = false;
      for (int x = 0; x < n && !grows; ++x) {
        int supported = 0;
        for (Label y = 0; y < L; ++y) {
          uint64_t r = m & consistent[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
          if (r != 0 && alive.count(r)) ++supported;
        }
        if (supported >= k_ + 1) grows = true;
      }
      if (grows) next.insert(m);
    }
    if (next.size() == alive.size()) {
      for (uint64_t m : alive) dims[m] = kInfiniteDim;
      return;
    }
    for (uint64_t m : alive)
      if (!next.count(m)) dims[m] = level;
    alive = std::move(next);
    ++level;
  }
}

int DimensionSolver::dim_version_space(const VersionSpace& vs) {
  if (vs.empty()) return -1;
  ensure_levels(vs);
  return vs_levels_[vs.base.get()].at(vs.mask());
}

DimensionResult DimensionSolver::with_witness(const ClassState& c) {
  DimensionResult r;
  r.dim = dim(c);
  if (r.dim == kInfiniteDim) {
    r.infinite = true;
    return r;
  }
  if (r.dim >= 0) r.witness = build_witness(c, r.dim);
  return r;
}

MistakeTree DimensionSolver::build_witness(const ClassState& c, int depth) {
  MistakeTree t;
  t.depth = depth;
  t.out_degree = k_ + 1;
  if (depth == 0) return t;
  t.root = std::make_unique<MistakeTreeNode>();
  build_witness_node(c, depth, t.root.get());
  return t;
}

void DimensionSolver::build_witness_node(const ClassState& c, int depth, MistakeTreeNode* out) {
  const int L = c.num_labels();
  // smallest x admitting k+1 labels whose restrictions still have dim >= depth-1,
  // labels ranked by (dim descending, index ascending)
  for (int x = 0; x < c.domain_size(); ++x) {
    std::vector<std::pair<int, Label>> ranked;  // (-dim, y) ascending sort
    std::vector<ClassState> restr;
    restr.reserve(static_cast<std::size_t>(L));
    for (Label y = 0; y < L; ++y) {
      restr.push_back(c.restricted(x, y));
      int d = restr.back().empty() ? -1 : dim(restr.back());
      ranked.emplace_back(d == kInfiniteDim ? std::numeric_limits<int>::min() : -d, y);
    }
    std::sort(ranked.begin(), ranked.end());
    if (-ranked[static_cast<std::size_t>(k_)].first >= depth - 1 ||
        ranked[static_cast<std::size_t>(k_)].first == std::numeric_limits<int>::min()) {
      out->x = x;
      for (int i = 0; i <= k_; ++i) {
        Label y = ranked[static_cast<std::size_t>(i)].second;
        std::unique_ptr<MistakeTreeNode> child;
        if (depth > 1) {
          child = std::make_unique<MistakeTreeNode>();
          build_witness_node(restr[static_cast<std::size_t>(y)], depth - 1, child.get());
        }
        out->edges.emplace_back(y, std::move(child));
      }
      return;
    }
  }
  throw std::logic_error("witness construction found no branching point");
}

DimensionResult list_littlestone_dim(const PatternClassExplicit& cls, int k) {
  DimensionSolver solver(k);
  return solver.with_witness(ClassState::explicit_class(cls));
}

DimensionResult list_littlestone_dim(const HypothesisClass& cls, int k) {
  DimensionSolver solver(k);
  auto shared = std::make_shared<HypothesisClass>(cls);
  return solver.with_witness(ClassState::version_space(shared));
}

int minimal_finite_list_size(std::shared_ptr<const HypothesisClass> cls) {
  const int L = cls->num_labels;
  for (int k = 1; k < L; ++k) {
    DimensionSolver solver(k);
    if (solver.dim(ClassState::version_space(cls)) != kInfiniteDim) return k;
  }
  return L;  // (L+1)-ary trees cannot exist, so L_L is trivially finite
}

// ---------------------------------------------------------------------------
// MinimaxOracle

namespace {

void k_subsets(int L, int k, std::vector<std::vector<Label>>& out) {
  std::vector<Label> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int y = start; y < L; ++y) {
      cur.push_back(y);
      rec(y + 1);
      cur.pop_back();
    }
  };
  rec(0);
}

}  // namespace

MinimaxOracle::MinimaxOracle(int k, int num_labels) : k_(k), num_labels_(num_labels) {
  if (k < 1 || k >= num_labels) throw std::invalid_argument("need 1 <= k < |Y|");
  k_subsets(num_labels, k, all_lists_);
}

long MinimaxOracle::value(const ClassState& c, int horizon) {
  if (horizon < 0) throw std::invalid_argument("horizon must be nonnegative");
  return eval(c, horizon);
}

long MinimaxOracle::eval(const ClassState& c, int horizon) {
  if (horizon == 0 || c.empty()) return 0;
  const std::string key = class_key(c) + "#" + std::to_string(horizon);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  long best_x = 0;
  for (int x = 0; x < c.domain_size(); ++x) {
    std::vector<std::pair<Label, ClassState>> live;
    for (Label y = 0; y < num_labels_; ++y) {
      ClassState r = c.restricted(x, y);
      if (!r.empty()) live.emplace_back(y, std::move(r));
    }
    if (live.empty()) continue;  // no realizable continuation at x
    long best_list = -1;
    for (const auto& list : all_lists_) {
      long worst = 0;
      for (const auto& [y, r] : live) {
        long miss = std::binary_search(list.begin(), list.end(), y) ? 0 : 1;
        worst = std::max(worst, miss + eval(r, horizon - 1));
      }
      if (best_list < 0 || worst < best_list) best_list = worst;
    }
    best_x = std::max(best_x, best_list);
  }
  memo_[key] = best_x;
  return best_x;
}

long MinimaxOracle::stabilized(const ClassState& c, int cap) {
  long prev = 0;  // V_0
  for (int h = 1; h <= cap; ++h) {
    long cur = eval(c, h);
    if (cur == prev) return cur;
    prev = cur;
  }
  throw std::runtime_error("minimax value did not stabilize within the horizon cap");
}

}  // namespace lol
