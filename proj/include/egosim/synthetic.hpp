#pragma once

#include <cstdint>
#include <random>

#include "egosim/corpus.hpp"
#include "egosim/evaluation.hpp"

namespace egosim {

struct RandomCorpusParams {
  std::size_t max_entities = 50;
  std::size_t max_samples = 500;
  std::size_t max_sample_len = 6;
};

// Uniformly messy corpus: entity count, sample count and sample lengths are
// drawn per corpus; samples may repeat entities (collapsed by Sample) and
// some entities may end up in no sample at all.
Corpus random_corpus(std::mt19937_64& rng, const RandomCorpusParams& params = {});

struct TwoBlockParams {
  std::size_t block_size = 30;
  std::size_t within_samples = 300;   // per block
  std::size_t bridge_samples = 300;   // hub + both blocks
  std::size_t label_positives = 200;  // within-block co-occurring pairs
  std::size_t label_negatives = 200;  // cross-block pairs
};

struct TwoBlockData {
  Corpus corpus;
  LabeledPairSet labels;
};

// Two dense blocks plus one hub entity that keeps dragging members of both
// blocks into shared samples. Aggregated neighborhoods of cross-block pairs
// end up heavily overlapping (through the hub traffic) even though the pair
// itself shares almost no direct context, which is exactly the regime where
// common-neighbor counting over-reports similarity. Positives are sampled
// within-block co-occurring pairs; negatives are cross-block pairs.
TwoBlockData two_block_corpus(std::uint64_t seed,
                              const TwoBlockParams& params = {});

}  // namespace egosim
