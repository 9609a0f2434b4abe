#pragma once

// Shared generators and brute-force oracles for the test suites. Oracles here
// are written independently of the library code paths they check.

#include <functional>
#include <set>

#include "lol/core.hpp"
#include "lol/dimension.hpp"
#include "lol/rng.hpp"

namespace lol::test {

inline Pattern mk_pattern(std::initializer_list<std::pair<int, Label>> examples) {
  Pattern p;
  for (const auto& [x, y] : examples) p.push(DomainPoint{x}, y);
  return p;
}

inline std::shared_ptr<HypothesisClass> mk_class(
    int domain, int labels, int width,
    std::initializer_list<std::vector<std::vector<Label>>> hypotheses) {
  auto cls = std::make_shared<HypothesisClass>();
  cls->domain_size = domain;
  cls->num_labels = labels;
  cls->list_width = width;
  for (const auto& maps : hypotheses) {
    MultiHypothesis h;
    h.labels_for = maps;
    for (auto& ls : h.labels_for) std::sort(ls.begin(), ls.end());
    cls->hypotheses.push_back(std::move(h));
  }
  cls->validate();
  return cls;
}

inline std::shared_ptr<HypothesisClass> random_class(Rng& rng, int max_domain = 4,
                                                     int max_labels = 5, int max_hyps = 12,
                                                     int max_width = 2) {
  auto cls = std::make_shared<HypothesisClass>();
  cls->domain_size = 1 + rng_int(rng, max_domain);
  cls->num_labels = 2 + rng_int(rng, max_labels - 1);
  cls->list_width = 1 + rng_int(rng, std::min(max_width, cls->num_labels));
  const int count = 1 + rng_int(rng, max_hyps);
  for (int i = 0; i < count; ++i) {
    MultiHypothesis h;
    for (int x = 0; x < cls->domain_size; ++x) {
      std::vector<Label> image = rng_distinct(rng, cls->num_labels, cls->list_width);
      h.labels_for.push_back(std::move(image));
    }
    cls->hypotheses.push_back(std::move(h));
  }
  cls->validate();
  return cls;
}

inline Pattern random_pattern(Rng& rng, int domain, int labels, int max_len) {
  Pattern p;
  const int len = rng_int(rng, max_len + 1);
  for (int i = 0; i < len; ++i)
    p.push(DomainPoint{rng_int(rng, domain)}, static_cast<Label>(rng_int(rng, labels)));
  return p;
}

// Brute-force subsequence enumerator (recursive take/skip, unlike the
// library's bitmask closure).
inline void collect_subsequences(const Pattern& s, std::size_t i, Pattern& cur,
                                 std::set<Pattern>& out) {
  if (i == s.size()) {
    out.insert(cur);
    return;
  }
  collect_subsequences(s, i + 1, cur, out);
  cur.examples.push_back(s.examples[i]);
  collect_subsequences(s, i + 1, cur, out);
  cur.examples.pop_back();
}

inline std::set<Pattern> brute_subsequences(const Pattern& s) {
  std::set<Pattern> out;
  Pattern cur;
  collect_subsequences(s, 0, cur, out);
  return out;
}

// Independent consistency check: y in h(x) for every example, by linear scan.
inline bool consistent_with(const MultiHypothesis& h, const Pattern& s) {
  for (const Example& e : s.examples) {
    bool found = false;
    for (Label y : h.labels_for[static_cast<std::size_t>(point_index(e.x))])
      if (y == e.y) found = true;
    if (!found) return false;
  }
  return true;
}

// Materializes P(H) up to the given length by plain enumeration.
inline std::set<Pattern> materialize_induced(const HypothesisClass& cls, int max_len) {
  std::set<Pattern> out;
  Pattern cur;
  std::function<void()> rec = [&] {
    for (const auto& h : cls.hypotheses)
      if (consistent_with(h, cur)) {
        out.insert(cur);
        break;
      }
    if (static_cast<int>(cur.size()) == max_len) return;
    for (int x = 0; x < cls.domain_size; ++x)
      for (Label y = 0; y < cls.num_labels; ++y) {
        cur.push(DomainPoint{x}, y);
        rec();
        cur.examples.pop_back();
      }
  };
  rec();
  return out;
}

// All patterns over (domain, labels) up to max_len.
inline std::vector<Pattern> all_patterns(int domain, int labels, int max_len) {
  std::vector<Pattern> out;
  Pattern cur;
  std::function<void()> rec = [&] {
    out.push_back(cur);
    if (static_cast<int>(cur.size()) == max_len) return;
    for (int x = 0; x < domain; ++x)
      for (Label y = 0; y < labels; ++y) {
        cur.push(DomainPoint{x}, y);
        rec();
        cur.examples.pop_back();
      }
  };
  rec();
  return out;
}

// Every complete out_degree-ary mistake tree of the given depth over the
// finite domain and label set, visited one at a time.
inline void enumerate_trees(int domain, int labels, int out_degree, int depth,
                            const std::function<void(const MistakeTree&)>& visit) {
  std::function<void(MistakeTreeNode*, int, std::function<void()>)> build =
      [&](MistakeTreeNode* node, int remaining, std::function<void()> done) {
        std::vector<int> combo(static_cast<std::size_t>(out_degree));
        std::function<void(int, int)> pick_labels = [&](int start, int chosen) {
          if (chosen == out_degree) {
            node->edges.clear();
            for (int e = 0; e < out_degree; ++e)
              node->edges.emplace_back(combo[static_cast<std::size_t>(e)],
                                       remaining > 1 ? std::make_unique<MistakeTreeNode>() : nullptr);
            if (remaining == 1) {
              done();
              return;
            }
            std::function<void(std::size_t)> fill = [&](std::size_t e) {
              if (e == node->edges.size()) {
                done();
                return;
              }
              build(node->edges[e].second.get(), remaining - 1, [&fill, e] { fill(e + 1); });
            };
            fill(0);
            return;
          }
          for (int y = start; y < labels; ++y) {
            combo[static_cast<std::size_t>(chosen)] = y;
            pick_labels(y + 1, chosen + 1);
          }
        };
        for (int x = 0; x < domain; ++x) {
          node->x = x;
          pick_labels(0, 0);
        }
      };
  MistakeTree t;
  t.depth = depth;
  t.out_degree = out_degree;
  if (depth == 0) {
    visit(t);
    return;
  }
  t.root = std::make_unique<MistakeTreeNode>();
  build(t.root.get(), depth, [&] { visit(t); });
}

}  // namespace lol::test
