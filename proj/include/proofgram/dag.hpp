#pragma once

// Iterative traversals over hash-consed terms. Proof terms expanded from
// grammars can be tens of thousands of levels deep, so nothing here recurses.

#include "proofgram/term.hpp"

#include <unordered_map>
#include <vector>

namespace proofgram {

/// Distinct nodes reachable from the roots, children before parents.
template <class T>
std::vector<T> post_order(std::span<const T> roots) {
  std::vector<T> order;
  std::unordered_map<const detail::Node*, bool> seen;
  struct Frame { T t; std::size_t next; };
  std::vector<Frame> stack;
  for (T root : roots) {
    if (seen.contains(root.node_ptr())) continue;
    seen.emplace(root.node_ptr(), true);
    stack.push_back({root, 0});
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next < f.t.arity()) {
        T kid = T::from_node(f.t.node_ptr()->kids[f.next++]);
        if (seen.emplace(kid.node_ptr(), true).second) stack.push_back({kid, 0});
        continue;
      }
      order.push_back(f.t);
      stack.pop_back();
    }
  }
  return order;
}

template <class T>
std::vector<T> post_order(T root) {
  return post_order(std::span<const T>(&root, 1));
}

/// Bottom-up rebuild with memoization on shared nodes. `fn(node, new_children)`
/// returns the replacement for `node` given its already-rebuilt children.
template <class T, class Fn>
T rebuild(T root, Fn&& fn, std::unordered_map<const detail::Node*, T>& memo) {
  if (auto it = memo.find(root.node_ptr()); it != memo.end()) return it->second;
  struct Frame { T t; std::size_t next; std::vector<T> kids; };
  std::vector<Frame> stack;
  stack.push_back({root, 0, {}});
  T result{};
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next < f.t.arity()) {
      T kid = T::from_node(f.t.node_ptr()->kids[f.next++]);
      if (auto it = memo.find(kid.node_ptr()); it != memo.end()) {
        f.kids.push_back(it->second);
      } else {
        stack.push_back({kid, 0, {}});
        stack.back().kids.reserve(kid.arity());
      }
      continue;
    }
    T out = fn(f.t, std::span<const T>(f.kids));
    memo.emplace(f.t.node_ptr(), out);
    stack.pop_back();
    if (stack.empty()) result = out;
    else stack.back().kids.push_back(out);
  }
  return result;
}

template <class T, class Fn>
T rebuild(T root, Fn&& fn) {
  std::unordered_map<const detail::Node*, T> memo;
  return rebuild(root, std::forward<Fn>(fn), memo);
}

} // namespace proofgram
