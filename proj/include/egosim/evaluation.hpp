#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "egosim/graph.hpp"
#include "egosim/similarity.hpp"
#include "egosim/types.hpp"

namespace egosim {

// Pearson correlation. Needs n >= 2 and nonzero variance on both sides.
double pearson(std::span<const double> xs, std::span<const double> ys);

// Pairwise Pearson over the intersection of the tables' scored pairs.
// matrix[a][b] aligns with the input order; the diagonal is exactly 1.
struct CorrelationMatrix {
  std::vector<std::string> names;
  std::vector<std::vector<double>> values;
  std::size_t common_pairs = 0;
};
CorrelationMatrix index_correlation_matrix(
    std::span<const ScoreTable* const> tables);

// Items sorted by descending score, ties broken by ascending key.
template <typename Key>
struct Ranked {
  std::vector<std::pair<Key, double>> items;
};
using RankedPairs = Ranked<PairKey>;
using RankedEntities = Ranked<EntityId>;

RankedPairs rank_pairs(const ScoreTable& table);

// Overlap |top-k(a) ∩ top-k(b)| / k. k must be >= 1 and no larger than
// either list.
double topk_overlap(const RankedPairs& a, const RankedPairs& b, std::size_t k);
double topk_overlap(const RankedEntities& a, const RankedEntities& b,
                    std::size_t k);

// Ranked partners of x among the table's scored pairs. truncated is set when
// fewer than k partners exist (all of them are returned).
struct NeighborList {
  RankedEntities ranked;
  bool truncated = false;
};
NeighborList topk_neighbors(const ScoreTable& table, EntityId x,
                            std::size_t k);

struct LabeledPair {
  PairKey key;
  bool positive = false;
};

struct LabeledPairSet {
  std::vector<LabeledPair> pairs;  // canonical ascending, no duplicates
  std::size_t positives = 0;
};

// TSV: name_i <tab> name_j <tab> {1|0}. Unknown entity names and duplicate
// pairs are input errors (reported with line numbers).
LabeledPairSet load_labels(const std::string& path, const EntityTable& table);
void save_labels(const LabeledPairSet& labels, const EntityTable& table,
                 const std::string& path);

// Positives share a name prefix of prefix_len bytes, negatives differ; pairs
// are drawn without replacement from the co-occurring universe with the
// given seed. Raises invalid_input when the corpus cannot supply the
// requested counts.
LabeledPairSet generate_prefix_labels(const Corpus& corpus,
                                      const AggregatedGraph& graph,
                                      std::size_t prefix_len,
                                      std::size_t n_positive,
                                      std::size_t n_negative,
                                      std::uint64_t seed);

// Labeled pairs missing from the table score 0 and are tallied in
// unscored_labeled (the spec'd warning counter).
struct JoinedLabels {
  std::vector<double> scores;  // parallel to labels.pairs
  std::size_t unscored_labeled = 0;
};
JoinedLabels join_scores(const ScoreTable& table, const LabeledPairSet& labels);

// Fraction of positives in the k highest-scored labeled pairs
// (ties by ascending key). Requires 1 <= k <= |labels|.
double precision_at_k(const ScoreTable& table, const LabeledPairSet& labels,
                      std::size_t k, std::size_t* unscored = nullptr);

struct AucResult {
  double value = 0.0;
  std::uint64_t comparisons = 0;  // |P|*|N| (exact) or sample count
  std::uint64_t wins = 0;         // positive strictly above negative
  std::uint64_t ties = 0;
  bool sampled = false;
};

// Exact mode scores all |P|*|N| comparisons (counted via sorted sweep);
// sampled mode draws n comparisons with the seeded generator.
AucResult auc_exact(const ScoreTable& table, const LabeledPairSet& labels,
                    std::size_t* unscored = nullptr);
AucResult auc_sampled(const ScoreTable& table, const LabeledPairSet& labels,
                      std::uint64_t n, std::uint64_t seed,
                      std::size_t* unscored = nullptr);

// --- association shift -----------------------------------------------------

// How a context entity x distributes between two target entities i and j,
// measured two ways: r1 from aggregated common neighbors, r2 from ego
// co-neighbor counts. ratio = r2/r1 and diff = r2 - r1. Denominators (and
// r1, which divides ratio) must be nonzero; otherwise undefined_value.
struct ShiftResult {
  double r1 = 0.0;
  double r2 = 0.0;
  double ratio = 0.0;
  double diff = 0.0;
};

ShiftResult shift_from_counts(std::uint32_t cn_xi, std::uint32_t cn_xj,
                              std::uint32_t ego_xi, std::uint32_t ego_xj);

ShiftResult association_shift(const AggregatedGraph& graph,
                              const PairStats& stats, EntityId x, EntityId i,
                              EntityId j,
                              EgoMode mode = EgoMode::algorithm_literal);

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  std::uint64_t count = 0;
};

struct Histogram {
  std::vector<HistogramBin> bins;
  std::uint64_t total = 0;

  // Linear bins span [min, max] of the values; log10 bins span the positive
  // values, with zeros collected into a degenerate leading [0,0] bin. A
  // degenerate range produces a single [v,v] bin.
  static Histogram linear(std::span<const double> values, std::size_t bins);
  static Histogram log10(std::span<const double> values, std::size_t bins);
};

struct ShiftSweepOptions {
  EgoMode mode = EgoMode::algorithm_literal;
  std::size_t bins = 50;
  // 0 = every observed triple (x; i<j both co-occurring with x);
  // otherwise that many seeded random triples.
  std::uint64_t sample_triples = 0;
  std::uint64_t seed = 42;
  unsigned threads = 1;
};

struct ShiftHistograms {
  Histogram pair_ratio;   // coneigh(i,j) / cn(i,j) over co-occurring pairs
  Histogram shift_ratio;  // r2/r1 over triples, log-binned
  Histogram shift_diff;   // r2-r1 over triples, linear bins
  std::uint64_t triples_scanned = 0;
  std::uint64_t triples_skipped = 0;  // zero denominators
  std::uint64_t pairs_skipped = 0;    // cn == 0 in the pair ratio
};

ShiftHistograms shift_histograms(const AggregatedGraph& graph,
                                 const PairStats& stats,
                                 const ShiftSweepOptions& options = {});

}  // namespace egosim
