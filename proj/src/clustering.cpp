#include "egosim/clustering.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "egosim/error.hpp"

namespace egosim {

std::vector<EntityId> select_top_degree(const AggregatedGraph& graph,
                                        std::size_t n) {
  std::vector<EntityId> nodes(graph.node_count());
  for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i] = EntityId(i);
  std::sort(nodes.begin(), nodes.end(), [&](EntityId a, EntityId b) {
    std::uint32_t da = graph.degree(a), db = graph.degree(b);
    if (da != db) return da > db;
    return a < b;
  });
  if (n < nodes.size()) nodes.resize(n);
  return nodes;
}

std::vector<ScoredEdge> retain_top_edges(std::span<const EntityId> nodes,
                                         const ScoreTable& table,
                                         std::size_t m) {
  std::unordered_set<EntityId> in(nodes.begin(), nodes.end());
  std::vector<ScoredEdge> edges;
  for (std::size_t t = 0; t < table.pairs.size(); ++t) {
    const PairKey& key = table.pairs[t];
    if (in.count(key.lo) && in.count(key.hi))
      edges.push_back({key, table.scores[t]});
  }
  std::sort(edges.begin(), edges.end(),
            [](const ScoredEdge& a, const ScoredEdge& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.key < b.key;
            });
  if (m < edges.size()) edges.resize(m);
  return edges;
}

namespace {

// Path-compressing union-find over dense local indices.
struct UnionFind {
  std::vector<std::uint32_t> parent;
  std::vector<std::uint32_t> size;

  explicit UnionFind(std::size_t n) : parent(n), size(n, 1) {
    for (std::size_t i = 0; i < n; ++i) parent[i] = std::uint32_t(i);
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
    return true;
  }
};

}  // namespace

ClusterReport cluster(std::span<const EntityId> nodes,
                      std::span<const ScoredEdge> edges) {
  std::unordered_map<EntityId, std::uint32_t> local;
  local.reserve(nodes.size());
  for (EntityId id : nodes) {
    if (!local.emplace(id, std::uint32_t(local.size())).second)
      raise(errc::invalid_input,
            "node " + std::to_string(id) + " selected twice");
  }

  UnionFind uf(nodes.size());
  // Smallest member per component, maintained across merges so the log can
  // name the two sides.
  std::vector<EntityId> least(nodes.size());
  for (EntityId id : nodes) least[local[id]] = id;

  ClusterReport report;
  std::vector<bool> touched(nodes.size(), false);
  std::size_t rank = 0;
  for (const ScoredEdge& e : edges) {
    ++rank;
    auto a = local.find(e.key.lo);
    auto b = local.find(e.key.hi);
    if (a == local.end() || b == local.end())
      raise(errc::invalid_input, "retained edge leaves the selected node set");
    touched[a->second] = true;
    touched[b->second] = true;
    std::uint32_t ra = uf.find(a->second);
    std::uint32_t rb = uf.find(b->second);
    if (ra == rb) continue;
    MergeStep step;
    step.rank = rank;
    step.edge = e.key;
    step.score = e.score;
    step.group_a = std::min(least[ra], least[rb]);
    step.group_b = std::max(least[ra], least[rb]);
    report.merges.push_back(step);
    uf.unite(ra, rb);
    std::uint32_t root = uf.find(ra);
    least[root] = std::min(least[ra], least[rb]);
  }

  std::unordered_map<std::uint32_t, std::vector<EntityId>> components;
  for (EntityId id : nodes) {
    std::uint32_t idx = local[id];
    if (!touched[idx]) {
      report.isolated.push_back(id);
      continue;
    }
    components[uf.find(idx)].push_back(id);
  }
  std::sort(report.isolated.begin(), report.isolated.end());

  for (auto& [root, members] : components) {
    std::sort(members.begin(), members.end());
    report.groups.push_back(std::move(members));
  }
  std::sort(report.groups.begin(), report.groups.end(),
            [](const std::vector<EntityId>& a, const std::vector<EntityId>& b) {
              if (a.size() != b.size()) return a.size() > b.size();
              return a.front() < b.front();
            });
  return report;
}

}  // namespace egosim
