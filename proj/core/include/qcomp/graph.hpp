// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

namespace qcomp {

using Adjacency = std::vector<std::vector<std::uint32_t>>;

struct SccResult {
  std::vector<int> comp;  // component ids, sinks of the condensation first
  int count = 0;
};

// Iterative Tarjan over all vertices of adj.
inline SccResult tarjan_scc(const Adjacency& adj) {
  const std::size_t n = adj.size();
  SccResult out;
  out.comp.assign(n, -1);
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<std::uint32_t> stack;
  std::vector<std::pair<std::uint32_t, std::size_t>> call;
  int counter = 0;

  auto open = [&](std::uint32_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = 1;
    call.emplace_back(v, 0);
  };

  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    open(root);
    while (!call.empty()) {
      std::uint32_t v = call.back().first;
      std::size_t i = call.back().second;
      if (i < adj[v].size()) {
        call.back().second = i + 1;
        std::uint32_t w = adj[v][i];
        if (index[w] == -1) {
          open(w);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          out.comp[w] = out.count;
        } while (w != v);
        ++out.count;
      }
      call.pop_back();
      if (!call.empty()) {
        std::uint32_t u = call.back().first;
        low[u] = std::min(low[u], low[v]);
      }
    }
  }
  return out;
}

// Per component: true when it contains a cycle (several vertices or a self-loop).
inline std::vector<char> cyclic_components(const Adjacency& adj, const SccResult& scc) {
  std::vector<int> size(scc.count, 0);
  std::vector<char> cyclic(scc.count, 0);
  for (std::uint32_t v = 0; v < adj.size(); ++v) {
    if (++size[scc.comp[v]] > 1) cyclic[scc.comp[v]] = 1;
    for (auto w : adj[v]) {
      if (w == v) cyclic[scc.comp[v]] = 1;
    }
  }
  return cyclic;
}

}  // namespace qcomp
