#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "egosim/graph.hpp"
#include "egosim/similarity.hpp"
#include "egosim/types.hpp"

namespace egosim {

// The n highest-degree nodes, ties broken by ascending id. n larger than the
// graph returns every node.
std::vector<EntityId> select_top_degree(const AggregatedGraph& graph,
                                        std::size_t n);

struct ScoredEdge {
  PairKey key;
  double score = 0.0;
};

// The m best-scoring pairs of the table whose endpoints both lie in nodes,
// ordered by descending score with ties by ascending key (the same order the
// merge process consumes them in). m larger than available keeps everything.
std::vector<ScoredEdge> retain_top_edges(std::span<const EntityId> nodes,
                                         const ScoreTable& table,
                                         std::size_t m);

struct MergeStep {
  std::size_t rank = 0;  // 1-based position in the retained edge order
  PairKey edge;
  double score = 0.0;
  EntityId group_a = 0;  // smallest member of each side before the merge
  EntityId group_b = 0;
};

struct ClusterReport {
  // Groups with >= 2 members, ordered by descending size then ascending
  // smallest member; members ascend by id.
  std::vector<std::vector<EntityId>> groups;
  std::vector<EntityId> isolated;  // selected nodes no retained edge touched
  std::vector<MergeStep> merges;   // single-linkage dendrogram
};

// Single-linkage agglomeration: edges are applied best-first and each edge
// joining two different groups merges them; groups are the connected
// components of the retained edges. Scores only matter through their order,
// so any strictly increasing transform yields identical groups.
ClusterReport cluster(std::span<const EntityId> nodes,
                      std::span<const ScoredEdge> edges);

}  // namespace egosim
