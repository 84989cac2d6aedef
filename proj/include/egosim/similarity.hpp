#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "egosim/graph.hpp"
#include "egosim/types.hpp"

namespace egosim {

enum class IndexId {
  rss,
  cn,
  jaccard,
  salton,
  hpi,
  hdi,
  ego,
  coupling,
  embed_cosine,
};

std::string_view index_name(IndexId id);
std::optional<IndexId> index_from_name(std::string_view name);
std::span<const IndexId> all_indices();

enum class Universe {
  cooccurring,      // pairs with at least one shared sample (graph edges)
  shared_neighbor,  // pairs with at least one common neighbor
  all,              // every unordered pair of entities
};

std::string_view universe_name(Universe u);
std::optional<Universe> universe_from_name(std::string_view name);

// Externally trained vectors, one per entity name.
class EmbeddingTable {
 public:
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return rows_.size(); }
  void insert(std::string_view name, std::vector<double> vec);
  const std::vector<double>* find(std::string_view name) const;

  // Text format: optional "count dim" header line, then one row per line:
  // name followed by dim reals. Dimensions must agree across rows.
  static EmbeddingTable load(const std::string& path);

 private:
  std::size_t dim_ = 0;
  std::unordered_map<std::string, std::vector<double>> rows_;
};

// --- pairwise indices over the aggregated graph ---------------------------
// All of these require i != j (invalid_pair otherwise). The cn family maps
// an empty denominator to 0; ops whose value is genuinely undefined (both
// endpoints isolated for rss, zero ego degree for ego/coupling, missing or
// zero-norm vectors for embed_cosine) raise instead.

double rss(const AggregatedGraph& g, EntityId i, EntityId j);
double cn(const AggregatedGraph& g, EntityId i, EntityId j);
double jaccard(const AggregatedGraph& g, EntityId i, EntityId j);
double salton(const AggregatedGraph& g, EntityId i, EntityId j);
double hdi(const AggregatedGraph& g, EntityId i, EntityId j);
double hpi(const AggregatedGraph& g, EntityId i, EntityId j);

// Fraction of i's neighborhood that lies inside j's ego surroundings:
// coupling(i,j) = coneigh(i,j) / |N_i|. Not symmetric.
double coupling(const AggregatedGraph& g, const PairStats& stats, EntityId i,
                EntityId j, EgoMode mode = EgoMode::text_faithful);

// Ego similarity: coneigh(i,j) * |V| / (|N_i| * |N_j|). Evaluated in
// canonical pair orientation as ((coneigh / deg_lo) * |V|) / deg_hi, so the
// value is exactly symmetric and factors bit-for-bit through
// coupling(lo, hi) * |V| / deg_hi.
double ego(const AggregatedGraph& g, const PairStats& stats, EntityId i,
           EntityId j, EgoMode mode = EgoMode::text_faithful);

double embed_cosine(const EmbeddingTable& table, const std::string& name_i,
                    const std::string& name_j);

// --- bulk scoring ----------------------------------------------------------

struct ScoreTable {
  IndexId index = IndexId::ego;
  Universe universe = Universe::cooccurring;
  std::vector<PairKey> pairs;   // canonical ascending
  std::vector<double> scores;   // parallel to pairs
  std::size_t omitted = 0;      // pairs skipped because the index was undefined

  std::size_t find(PairKey key) const;  // npos when absent
  static constexpr std::size_t npos = std::size_t(-1);
};

struct ScoreOptions {
  Universe universe = Universe::cooccurring;
  EgoMode ego_mode = EgoMode::text_faithful;
  unsigned threads = 1;
};

// Scores every pair of the universe with one index. Pairs on which the index
// is undefined are omitted and counted. Chunks may be computed in parallel;
// results are positionally assembled, so content is identical for any worker
// count. The embeddings table is only consulted for embed_cosine.
ScoreTable score_all_pairs(IndexId index, const Corpus& corpus,
                           const AggregatedGraph& graph,
                           const PairStats& stats,
                           const EmbeddingTable* embeddings,
                           const ScoreOptions& options = {});

// Universe enumeration (canonical order), shared by scoring and the CLI.
std::vector<PairKey> enumerate_universe(Universe universe,
                                        const AggregatedGraph& graph,
                                        const PairStats& stats);

}  // namespace egosim
