#include "smellcast/cycles.hpp"

#include <algorithm>
#include <limits>

namespace smellcast::cycles {

namespace {

constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();

// Johnson's CIRCUIT procedure over the vertices with in_scope[v] set.
class CircuitSearch {
 public:
  CircuitSearch(const Adjacency& adj, const CycleSink& sink)
      : adj_(adj), sink_(sink), blocked_(adj.size(), 0), b_lists_(adj.size()) {}

  void reset(std::vector<char> in_scope, std::size_t root) {
    in_scope_ = std::move(in_scope);
    root_ = root;
    for (std::size_t v = 0; v < adj_.size(); ++v) {
      if (in_scope_[v]) {
        blocked_[v] = 0;
        b_lists_[v].clear();
      }
    }
    stack_.clear();
  }

  bool stopped() const { return stopped_; }

  // Starts at the root; when `first` is set only that successor is explored.
  void run(std::size_t first = kUnset) {
    stack_.push_back(root_);
    blocked_[root_] = 1;
    bool found = false;
    for (auto w : adj_[root_]) {
      if (!in_scope_[w]) continue;
      if (first != kUnset && w != first) continue;
      if (circuit(w)) found = true;
      if (stopped_) return;
    }
    (void)found;
    stack_.pop_back();
  }

 private:
  bool circuit(std::size_t v) {
    bool found = false;
    stack_.push_back(v);
    blocked_[v] = 1;
    for (auto w : adj_[v]) {
      if (!in_scope_[w]) continue;
      if (w == root_) {
        found = true;
        if (!sink_(stack_)) {
          stopped_ = true;
          return true;
        }
      } else if (!blocked_[w]) {
        if (circuit(w)) found = true;
        if (stopped_) return true;
      }
    }
    if (found) {
      unblock(v);
    } else {
      for (auto w : adj_[v]) {
        if (!in_scope_[w]) continue;
        auto& lst = b_lists_[w];
        if (std::find(lst.begin(), lst.end(), v) == lst.end()) lst.push_back(v);
      }
    }
    stack_.pop_back();
    return found;
  }

  void unblock(std::size_t u) {
    std::vector<std::size_t> work{u};
    blocked_[u] = 0;
    while (!work.empty()) {
      auto x = work.back();
      work.pop_back();
      auto pending = std::move(b_lists_[x]);
      b_lists_[x].clear();
      for (auto w : pending) {
        if (blocked_[w]) {
          blocked_[w] = 0;
          work.push_back(w);
        }
      }
    }
  }

  const Adjacency& adj_;
  const CycleSink& sink_;
  std::vector<char> in_scope_;
  std::vector<char> blocked_;
  std::vector<std::vector<std::size_t>> b_lists_;
  std::vector<std::size_t> stack_;
  std::size_t root_ = 0;
  bool stopped_ = false;
};

}  // namespace

std::vector<std::size_t> strongly_connected_components(const Adjacency& adj,
                                                       std::size_t* component_count) {
  const auto n = adj.size();
  std::vector<std::size_t> index(n, kUnset), low(n, 0), comp(n, kUnset);
  std::vector<char> on_stack(n, 0);
  std::vector<std::size_t> stack;
  std::size_t next_index = 0;
  std::size_t next_comp = 0;

  // (vertex, next child position)
  std::vector<std::pair<std::size_t, std::size_t>> call;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    call.emplace_back(root, 0);
    while (!call.empty()) {
      auto& [v, child] = call.back();
      if (child == 0) {
        index[v] = low[v] = next_index++;
        stack.push_back(v);
        on_stack[v] = 1;
      }
      if (child < adj[v].size()) {
        const auto w = adj[v][child++];
        if (index[w] == kUnset) {
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = next_comp;
        } while (w != v);
        ++next_comp;
      }
      const auto finished = v;
      call.pop_back();
      if (!call.empty()) {
        auto parent = call.back().first;
        low[parent] = std::min(low[parent], low[finished]);
      }
    }
  }
  if (component_count) *component_count = next_comp;
  return comp;
}

bool enumerate_all(const Adjacency& adj, const CycleSink& sink) {
  const auto n = adj.size();
  CircuitSearch search(adj, sink);
  std::size_t start = 0;
  while (start < n) {
    // Subgraph induced by vertices >= start.
    Adjacency sub(n);
    for (std::size_t v = start; v < n; ++v) {
      for (auto w : adj[v]) {
        if (w >= start) sub[v].push_back(w);
      }
    }
    std::size_t count = 0;
    const auto comp = strongly_connected_components(sub, &count);
    std::vector<std::size_t> size(count, 0);
    for (std::size_t v = start; v < n; ++v) ++size[comp[v]];

    std::size_t root = kUnset;
    for (std::size_t v = start; v < n; ++v) {
      if (size[comp[v]] >= 2) {
        root = v;
        break;
      }
    }
    if (root == kUnset) break;

    std::vector<char> scope(n, 0);
    for (std::size_t v = root; v < n; ++v) scope[v] = comp[v] == comp[root];
    search.reset(std::move(scope), root);
    search.run();
    if (search.stopped()) return false;
    start = root + 1;
  }
  return true;
}

bool enumerate_through_edge(const Adjacency& adj, std::size_t source, std::size_t target,
                            const CycleSink& sink) {
  const auto comp = strongly_connected_components(adj);
  if (comp[source] != comp[target]) return true;
  std::vector<char> scope(adj.size(), 0);
  for (std::size_t v = 0; v < adj.size(); ++v) scope[v] = comp[v] == comp[source];
  CircuitSearch search(adj, sink);
  search.reset(std::move(scope), source);
  search.run(target);
  return !search.stopped();
}

std::vector<std::size_t> canonical_rotation(std::span<const std::size_t> cycle) {
  std::vector<std::size_t> out(cycle.begin(), cycle.end());
  if (out.empty()) return out;
  auto smallest = std::min_element(out.begin(), out.end());
  std::rotate(out.begin(), smallest, out.end());
  return out;
}

}  // namespace smellcast::cycles
