#pragma once

// Depth-first generation of permutations by appending the relative rank of a
// new last entry.  Every node of depth i holds a permutation of length i whose
// windows keep their relative order in all descendants.

#include <vector>

#include "cpa/parallel.hpp"

namespace cpa::detail {

struct PrefixState {
  std::vector<int> w;

  void push(int rank) {
    for (int& x : w) {
      if (x >= rank) ++x;
    }
    w.push_back(rank);
  }
  void pop() {
    const int rank = w.back();
    w.pop_back();
    for (int& x : w) {
      if (x > rank) --x;
    }
  }
};

// Visitor contract:
//   bool enter(const std::vector<int>& w, bool record);  // descend?
//   void leave(int depth);
template <class Visitor>
void walk_subtree(PrefixState& s, int max_depth, Visitor& vis) {
  const int depth = static_cast<int>(s.w.size());
  if (depth >= max_depth) return;
  for (int r = 1; r <= depth + 1; ++r) {
    s.push(r);
    if (vis.enter(s.w, true)) walk_subtree(s, max_depth, vis);
    vis.leave(depth + 1);
    s.pop();
  }
}

// Walks all permutations of length <= max_depth.  The tree is split at a small
// depth into independent tasks; make() builds a fresh visitor per task and
// merge(visitor) folds it into the caller's result (called serially).
template <class Make, class Merge>
void parallel_walk(int max_depth, unsigned threads, Make make, Merge merge) {
  const int split = std::min(max_depth, 5);
  {
    // Nodes shallower than the split depth are visited once, serially.
    auto vis = make();
    PrefixState s;
    walk_subtree(s, split - 1, vis);
    merge(vis);
  }
  if (split < 1) return;
  std::size_t tasks = 1;
  for (int i = 2; i <= split; ++i) tasks *= static_cast<std::size_t>(i);
  std::vector<decltype(make())> visitors;
  visitors.reserve(tasks);
  for (std::size_t t = 0; t < tasks; ++t) visitors.push_back(make());
  parallel_for(tasks, threads, [&](std::size_t t) {
    auto& vis = visitors[t];
    PrefixState s;
    std::size_t code = t;
    std::vector<int> ranks(static_cast<std::size_t>(split));
    for (int i = split; i >= 1; --i) {
      ranks[static_cast<std::size_t>(i - 1)] = static_cast<int>(code % static_cast<std::size_t>(i)) + 1;
      code /= static_cast<std::size_t>(i);
    }
    int entered = 0;
    bool alive = true;
    for (int i = 1; i <= split && alive; ++i) {
      s.push(ranks[static_cast<std::size_t>(i - 1)]);
      ++entered;
      alive = vis.enter(s.w, i == split);
    }
    if (alive) walk_subtree(s, max_depth, vis);
    for (int d = entered; d >= 1; --d) {
      vis.leave(d);
      s.pop();
    }
  });
  for (auto& v : visitors) merge(v);
}

}  // namespace cpa::detail
