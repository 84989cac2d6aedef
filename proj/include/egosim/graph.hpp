#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "egosim/corpus.hpp"
#include "egosim/types.hpp"

namespace egosim {

// Aggregated co-occurrence graph in CSR form. Nodes are all interned
// entities, including isolated ones; an edge (i,j) with weight α counts the
// samples containing both endpoints. Adjacency rows are ascending by id.
class AggregatedGraph {
 public:
  AggregatedGraph() = default;

  std::size_t node_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const { return adj_.size() / 2; }

  std::span<const EntityId> neighbors(EntityId i) const;
  std::span<const std::uint32_t> weights(EntityId i) const;
  std::uint32_t degree(EntityId i) const;
  std::uint64_t strength(EntityId i) const;  // Σ weights of incident edges
  std::uint32_t edge_weight(EntityId i, EntityId j) const;  // 0 when absent

  static AggregatedGraph from_rows(
      std::vector<std::vector<std::pair<EntityId, std::uint32_t>>> rows);

 private:
  std::vector<std::uint64_t> offsets_;
  std::vector<EntityId> adj_;
  std::vector<std::uint32_t> weights_;
  std::vector<std::uint64_t> strength_;

  void check_node(EntityId i) const;
};

AggregatedGraph build_graph(const Corpus& corpus);

void save_graph(const AggregatedGraph& graph, const std::string& path);
AggregatedGraph load_graph(const std::string& path);

// Per-pair co-occurrence statistics: how many samples contain both entities,
// and how many distinct third entities ever appear alongside the pair.
// Entries exist exactly for co-occurring pairs and iterate in canonical
// PairKey order. third_entity_count(i,j) <= common_neighbors(i,j) always.
class PairStats {
 public:
  struct View {
    PairKey key;
    std::uint32_t cooccur;
    std::uint32_t third_entities;
  };

  std::size_t size() const { return keys_.size(); }
  View at(std::size_t idx) const {
    return {keys_[idx], cooccur_[idx], third_[idx]};
  }
  // Index into the canonical order, or npos when the pair never co-occurs.
  static constexpr std::size_t npos = std::size_t(-1);
  std::size_t find(PairKey key) const;

  std::uint32_t cooccur_count(PairKey key) const;
  std::uint32_t third_entity_count(PairKey key) const;

  std::span<const PairKey> keys() const { return keys_; }
  std::span<const std::uint32_t> cooccur_counts() const { return cooccur_; }
  std::span<const std::uint32_t> third_entity_counts() const { return third_; }

  // Samples longer than the cap still contribute fully; this only reports
  // how many tripped the guard.
  std::size_t long_sample_count() const { return long_samples_; }
  std::uint64_t triples_processed() const { return triples_; }

  friend PairStats build_pair_stats(const Corpus&, std::uint32_t, unsigned);
  friend void save_pair_stats(const PairStats&, const std::string&);
  friend PairStats load_pair_stats(const std::string& path);

 private:
  std::vector<PairKey> keys_;
  std::vector<std::uint32_t> cooccur_;
  std::vector<std::uint32_t> third_;
  std::size_t long_samples_ = 0;
  std::uint64_t triples_ = 0;
};

// Single pass over samples; workers own static sample ranges and their
// partial maps merge deterministically, so the result is identical for any
// worker count. Samples longer than sample_cap are counted (see
// long_sample_count) but processed in full.
PairStats build_pair_stats(const Corpus& corpus, std::uint32_t sample_cap = 64,
                           unsigned threads = 1);

void save_pair_stats(const PairStats& stats, const std::string& path);
PairStats load_pair_stats(const std::string& path);

enum class EgoMode {
  text_faithful,      // count the ego itself alongside the third entities
  algorithm_literal,  // distinct third entities only
};

// Number of neighbors entity j has inside i's ego network. In text-faithful
// mode a co-occurring pair scores third_entities + 1 (j is always adjacent
// to the ego itself); pairs that never co-occur score 0 in both modes.
// Symmetric in i and j.
std::uint32_t ego_coneighbors(const PairStats& stats, EntityId i, EntityId j,
                              EgoMode mode = EgoMode::text_faithful);

// |N_i ∩ N_j| over the aggregated graph.
std::uint32_t common_neighbors(const AggregatedGraph& graph, EntityId i,
                               EntityId j);

// Aggregated graph over only the samples containing ego, on the same id
// space. Brute-force reference for ego_coneighbors: the text-faithful count
// for (ego, j) equals j's degree in this graph.
AggregatedGraph build_ego_network(const Corpus& corpus, EntityId ego);

}  // namespace egosim
