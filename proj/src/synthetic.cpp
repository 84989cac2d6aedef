#include "egosim/synthetic.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

#include "egosim/error.hpp"

namespace egosim {

Corpus random_corpus(std::mt19937_64& rng, const RandomCorpusParams& params) {
  Corpus corpus;
  std::size_t entities = 2 + std::size_t(rng() % (params.max_entities - 1));
  for (std::size_t e = 0; e < entities; ++e)
    corpus.table.intern("e" + std::to_string(e));

  std::size_t samples = 1 + std::size_t(rng() % params.max_samples);
  std::vector<EntityId> ids;
  for (std::size_t s = 0; s < samples; ++s) {
    std::size_t len = 1 + std::size_t(rng() % params.max_sample_len);
    ids.clear();
    for (std::size_t t = 0; t < len; ++t)
      ids.push_back(EntityId(rng() % entities));
    corpus.samples.emplace_back(ids);
  }
  return corpus;
}

TwoBlockData two_block_corpus(std::uint64_t seed, const TwoBlockParams& params) {
  if (params.block_size < 4)
    raise(errc::invalid_input, "two-block corpus needs blocks of at least 4");

  std::mt19937_64 rng(seed);
  TwoBlockData data;
  std::size_t b = params.block_size;

  std::vector<EntityId> block_a, block_b;
  for (std::size_t t = 0; t < b; ++t)
    block_a.push_back(data.corpus.table.intern("a" + std::to_string(t)));
  for (std::size_t t = 0; t < b; ++t)
    block_b.push_back(data.corpus.table.intern("b" + std::to_string(t)));
  EntityId hub = data.corpus.table.intern("hub");

  auto pick_distinct = [&](const std::vector<EntityId>& pool, std::size_t k,
                           std::vector<EntityId>& out) {
    while (out.size() < k) {
      EntityId id = pool[std::size_t(rng() % pool.size())];
      if (std::find(out.begin(), out.end(), id) == out.end())
        out.push_back(id);
    }
  };

  std::vector<EntityId> ids;
  for (const auto* block : {&block_a, &block_b}) {
    for (std::size_t s = 0; s < params.within_samples; ++s) {
      std::size_t len = 3 + std::size_t(rng() % 3);  // 3..5
      ids.clear();
      pick_distinct(*block, len, ids);
      data.corpus.samples.emplace_back(ids);
    }
  }
  for (std::size_t s = 0; s < params.bridge_samples; ++s) {
    ids.clear();
    ids.push_back(hub);
    std::vector<EntityId> part;
    pick_distinct(block_a, 2, part);
    ids.insert(ids.end(), part.begin(), part.end());
    part.clear();
    pick_distinct(block_b, 2, part);
    ids.insert(ids.end(), part.begin(), part.end());
    data.corpus.samples.emplace_back(ids);
  }

  // Positives: distinct within-block pairs that actually co-occurred.
  std::unordered_set<std::uint64_t> cooccur;
  for (const Sample& s : data.corpus.samples) {
    auto sids = s.ids();
    for (std::size_t x = 0; x < sids.size(); ++x)
      for (std::size_t y = x + 1; y < sids.size(); ++y)
        cooccur.insert(PairKey(sids[x], sids[y]).packed());
  }
  auto same_block = [&](PairKey key) {
    bool alo = key.lo < b, ahi = key.hi < b;  // block A ids precede block B
    return alo == ahi && key.lo != hub && key.hi != hub;
  };

  std::unordered_set<std::uint64_t> chosen;
  std::size_t guard = 0;
  while (data.labels.positives < params.label_positives) {
    if (++guard > 1000000)
      raise(errc::invalid_input, "could not sample enough positive pairs");
    const std::vector<EntityId>& block = (rng() & 1) ? block_b : block_a;
    std::vector<EntityId> two;
    pick_distinct(block, 2, two);
    PairKey key(two[0], two[1]);
    if (!cooccur.count(key.packed())) continue;
    if (!chosen.insert(key.packed()).second) continue;
    data.labels.pairs.push_back({key, true});
    ++data.labels.positives;
  }
  std::size_t negatives = 0;
  guard = 0;
  while (negatives < params.label_negatives) {
    if (++guard > 1000000)
      raise(errc::invalid_input, "could not sample enough negative pairs");
    PairKey key(block_a[std::size_t(rng() % b)], block_b[std::size_t(rng() % b)]);
    if (same_block(key)) continue;
    if (!chosen.insert(key.packed()).second) continue;
    data.labels.pairs.push_back({key, false});
    ++negatives;
  }
  std::sort(data.labels.pairs.begin(), data.labels.pairs.end(),
            [](const LabeledPair& x, const LabeledPair& y) {
              return x.key < y.key;
            });
  return data;
}

}  // namespace egosim
