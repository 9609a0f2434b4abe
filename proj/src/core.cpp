#include "lol/core.hpp"

#include <algorithm>
#include <sstream>

namespace lol {

int point_index(const DomainPoint& x) {
  if (const int* i = std::get_if<int>(&x)) return *i;
  throw std::invalid_argument("domain point is a feature vector, not an index");
}

const FeatureVec& point_vec(const DomainPoint& x) {
  if (const FeatureVec* v = std::get_if<FeatureVec>(&x)) return *v;
  throw std::invalid_argument("domain point is an index, not a feature vector");
}

bool point_eq(const DomainPoint& a, const DomainPoint& b) { return a == b; }

bool point_less(const DomainPoint& a, const DomainPoint& b) {
  if (a.index() != b.index()) return a.index() < b.index();
  if (a.index() == 0) return std::get<int>(a) < std::get<int>(b);
  return std::get<FeatureVec>(a) < std::get<FeatureVec>(b);
}

std::string point_str(const DomainPoint& x) {
  if (const int* i = std::get_if<int>(&x)) return std::to_string(*i);
  std::ostringstream os;
  os << "(";
  const FeatureVec& v = std::get<FeatureVec>(x);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ")";
  return os.str();
}

bool operator==(const Example& a, const Example& b) {
  return a.y == b.y && point_eq(a.x, b.x);
}

bool operator<(const Example& a, const Example& b) {
  if (point_less(a.x, b.x)) return true;
  if (point_less(b.x, a.x)) return false;
  return a.y < b.y;
}

Pattern Pattern::prefix(std::size_t n) const {
  Pattern p;
  p.examples.assign(examples.begin(), examples.begin() + static_cast<long>(std::min(n, examples.size())));
  return p;
}

Pattern Pattern::concat(const Pattern& tail) const {
  Pattern p = *this;
  p.examples.insert(p.examples.end(), tail.examples.begin(), tail.examples.end());
  return p;
}

bool operator==(const Pattern& a, const Pattern& b) { return a.examples == b.examples; }

bool operator<(const Pattern& a, const Pattern& b) {
  return std::lexicographical_compare(a.examples.begin(), a.examples.end(),
                                      b.examples.begin(), b.examples.end());
}

bool is_subsequence(const Pattern& a, const Pattern& b) {
  std::size_t i = 0;
  for (std::size_t j = 0; i < a.size() && j < b.size(); ++j) {
    if (a.examples[i] == b.examples[j]) ++i;
  }
  return i == a.size();
}

LabelList::LabelList(std::vector<Label> ls) : labels(std::move(ls)) {
  std::sort(labels.begin(), labels.end());
  auto it = std::unique(labels.begin(), labels.end());
  if (it != labels.end()) throw std::invalid_argument("label list has duplicates");
}

bool LabelList::contains(Label y) const {
  return std::binary_search(labels.begin(), labels.end(), y);
}

bool operator==(const LabelList& a, const LabelList& b) { return a.labels == b.labels; }

bool MultiHypothesis::assigns(int x, Label y) const {
  const auto& ls = labels_for.at(static_cast<std::size_t>(x));
  return std::binary_search(ls.begin(), ls.end(), y);
}

void HypothesisClass::validate() const {
  for (const auto& h : hypotheses) {
    if (static_cast<int>(h.labels_for.size()) != domain_size)
      throw std::invalid_argument("hypothesis not defined on every domain point");
    for (const auto& ls : h.labels_for) {
      if (static_cast<int>(ls.size()) != list_width)
        throw std::invalid_argument("hypothesis image size differs from class width");
      for (Label y : ls)
        if (y < 0 || y >= num_labels) throw std::invalid_argument("label out of range");
      if (!std::is_sorted(ls.begin(), ls.end()) ||
          std::adjacent_find(ls.begin(), ls.end()) != ls.end())
        throw std::invalid_argument("hypothesis image must be a sorted label set");
    }
  }
}

namespace {

void all_subsequences(const Pattern& s, std::set<Pattern>& out) {
  // 2^|S| subsequences; class sizes are kept tiny by design.
  const std::size_t n = s.size();
  if (n > 20) throw BudgetExceeded("pattern too long to close explicitly");
  for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
    Pattern sub;
    for (std::size_t i = 0; i < n; ++i)
      if (bits & (1u << i)) sub.examples.push_back(s.examples[i]);
    out.insert(std::move(sub));
  }
}

bool pattern_has_contradiction(const Pattern& s) {
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if (point_eq(s.examples[i].x, s.examples[j].x) && s.examples[i].y != s.examples[j].y)
        return true;
  return false;
}

}  // namespace

PatternClassExplicit downward_closure(const std::vector<Pattern>& seeds,
                                      int domain_size, int num_labels) {
  PatternClassExplicit cls;
  cls.domain_size = domain_size;
  cls.num_labels = num_labels;
  for (const Pattern& s : seeds) {
    all_subsequences(s, cls.patterns);
    if (pattern_has_contradiction(s)) cls.has_contradictions = true;
  }
  return cls;
}

bool is_downward_closed(const PatternClassExplicit& p) {
  if (p.patterns.empty()) return true;
  if (!p.member(Pattern{})) return false;
  for (const Pattern& s : p.patterns) {
    // removing any single example keeps us in the class iff closure holds
    for (std::size_t i = 0; i < s.size(); ++i) {
      Pattern sub;
      for (std::size_t j = 0; j < s.size(); ++j)
        if (j != i) sub.examples.push_back(s.examples[j]);
      if (!p.member(sub)) return false;
    }
  }
  return true;
}

PatternClassExplicit restrict_class(const PatternClassExplicit& p, int x, Label y) {
  PatternClassExplicit out;
  out.domain_size = p.domain_size;
  out.num_labels = p.num_labels;
  out.has_contradictions = p.has_contradictions;
  const Example head{DomainPoint{x}, y};
  for (const Pattern& s : p.patterns) {
    if (!s.empty() && s.examples.front() == head) {
      Pattern tail;
      tail.examples.assign(s.examples.begin() + 1, s.examples.end());
      out.patterns.insert(std::move(tail));
    }
  }
  return out;
}

VersionSpace VersionSpace::full(std::shared_ptr<const HypothesisClass> cls) {
  VersionSpace vs;
  vs.active.assign(static_cast<std::size_t>(cls->size()), 1);
  vs.base = std::move(cls);
  return vs;
}

int VersionSpace::count_active() const {
  int n = 0;
  for (uint8_t a : active) n += a;
  return n;
}

VersionSpace VersionSpace::restricted(int x, Label y) const {
  VersionSpace out = *this;
  for (std::size_t i = 0; i < active.size(); ++i)
    if (out.active[i] && !base->hypotheses[i].assigns(x, y)) out.active[i] = 0;
  return out;
}

uint64_t VersionSpace::mask() const {
  if (active.size() > 64) throw std::invalid_argument("class too large for mask form");
  uint64_t m = 0;
  for (std::size_t i = 0; i < active.size(); ++i)
    if (active[i]) m |= (uint64_t{1} << i);
  return m;
}

bool InducedOracle::member(const Pattern& s) const {
  for (std::size_t i = 0; i < vs_.active.size(); ++i) {
    if (!vs_.active[i]) continue;
    const MultiHypothesis& h = vs_.base->hypotheses[i];
    bool ok = true;
    for (const Example& e : s.examples)
      if (!h.assigns(point_index(e.x), e.y)) { ok = false; break; }
    if (ok) return true;
  }
  return false;
}

long mistakes(const MultiHypothesis& h, const Pattern& s) {
  long m = 0;
  for (const Example& e : s.examples)
    if (!h.assigns(point_index(e.x), e.y)) ++m;
  return m;
}

long opt(const VersionSpace& vs, const Pattern& s) {
  long best = -1;
  for (std::size_t i = 0; i < vs.active.size(); ++i) {
    if (!vs.active[i]) continue;
    long m = mistakes(vs.base->hypotheses[i], s);
    if (best < 0 || m < best) best = m;
  }
  if (best < 0) throw std::invalid_argument("opt over an empty hypothesis class");
  return best;
}

long opt(const HypothesisClass& cls, const Pattern& s) {
  long best = -1;
  for (const auto& h : cls.hypotheses) {
    long m = mistakes(h, s);
    if (best < 0 || m < best) best = m;
  }
  if (best < 0) throw std::invalid_argument("opt over an empty hypothesis class");
  return best;
}

}  // namespace lol
