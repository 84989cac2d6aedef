#include "egosim/graph.hpp"

#include <algorithm>
#include <fstream>
#include <thread>
#include <unordered_map>

#include "egosim/error.hpp"
#include "egosim/io_util.hpp"
#include "egosim/kernels.hpp"

namespace egosim {

void AggregatedGraph::check_node(EntityId i) const {
  if (i >= node_count())
    raise(errc::not_found, "unknown node id " + std::to_string(i));
}

std::span<const EntityId> AggregatedGraph::neighbors(EntityId i) const {
  check_node(i);
  return {adj_.data() + offsets_[i], adj_.data() + offsets_[i + 1]};
}

std::span<const std::uint32_t> AggregatedGraph::weights(EntityId i) const {
  check_node(i);
  return {weights_.data() + offsets_[i], weights_.data() + offsets_[i + 1]};
}

std::uint32_t AggregatedGraph::degree(EntityId i) const {
  check_node(i);
  return std::uint32_t(offsets_[i + 1] - offsets_[i]);
}

std::uint64_t AggregatedGraph::strength(EntityId i) const {
  check_node(i);
  return strength_[i];
}

std::uint32_t AggregatedGraph::edge_weight(EntityId i, EntityId j) const {
  check_node(i);
  check_node(j);
  auto row = neighbors(i);
  auto it = std::lower_bound(row.begin(), row.end(), j);
  if (it == row.end() || *it != j) return 0;
  return weights_[offsets_[i] + std::size_t(it - row.begin())];
}

AggregatedGraph AggregatedGraph::from_rows(
    std::vector<std::vector<std::pair<EntityId, std::uint32_t>>> rows) {
  AggregatedGraph g;
  g.offsets_.resize(rows.size() + 1, 0);
  std::size_t total = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::sort(rows[i].begin(), rows[i].end());
    total += rows[i].size();
    g.offsets_[i + 1] = total;
  }
  g.adj_.reserve(total);
  g.weights_.reserve(total);
  g.strength_.resize(rows.size(), 0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::uint64_t s = 0;
    for (auto [nbr, w] : rows[i]) {
      g.adj_.push_back(nbr);
      g.weights_.push_back(w);
      s += w;
    }
    g.strength_[i] = s;
  }
  return g;
}

namespace {

AggregatedGraph graph_from_samples(const std::vector<Sample>& samples,
                                   std::size_t node_count) {
  std::unordered_map<std::uint64_t, std::uint32_t> alpha;
  for (const Sample& s : samples) {
    auto ids = s.ids();
    for (std::size_t a = 0; a < ids.size(); ++a)
      for (std::size_t b = a + 1; b < ids.size(); ++b)
        ++alpha[PairKey(ids[a], ids[b]).packed()];
  }
  std::vector<std::vector<std::pair<EntityId, std::uint32_t>>> rows(node_count);
  for (const auto& [packed, w] : alpha) {
    PairKey key = PairKey::from_packed(packed);
    rows[key.lo].emplace_back(key.hi, w);
    rows[key.hi].emplace_back(key.lo, w);
  }
  return AggregatedGraph::from_rows(std::move(rows));
}

}  // namespace

AggregatedGraph build_graph(const Corpus& corpus) {
  return graph_from_samples(corpus.samples, corpus.table.size());
}

AggregatedGraph build_ego_network(const Corpus& corpus, EntityId ego) {
  if (ego >= corpus.table.size())
    raise(errc::not_found, "unknown ego id " + std::to_string(ego));
  std::vector<Sample> kept;
  for (const Sample& s : corpus.samples)
    if (s.contains(ego)) kept.push_back(s);
  return graph_from_samples(kept, corpus.table.size());
}

namespace {
constexpr char kGraphMagic[8] = {'E', 'G', 'O', 'G', 'R', 'P', 'H', '1'};
}

void save_graph(const AggregatedGraph& graph, const std::string& path) {
  io::atomic_write(path, [&](std::ostream& out) {
    out.write(kGraphMagic, 8);
    std::size_t v = graph.node_count();
    io::put_u64(out, v);
    for (EntityId i = 0; i < v; ++i) {
      auto nbrs = graph.neighbors(i);
      auto ws = graph.weights(i);
      io::put_u64(out, nbrs.size());
      for (std::size_t t = 0; t < nbrs.size(); ++t) {
        io::put_u32(out, nbrs[t]);
        io::put_u32(out, ws[t]);
      }
    }
  });
}

AggregatedGraph load_graph(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::io, "cannot open graph snapshot " + path);
  char magic[8];
  in.read(magic, 8);
  if (in.gcount() != 8 || !std::equal(magic, magic + 8, kGraphMagic))
    raise(errc::io, "not a graph snapshot: " + path);
  std::uint64_t v = io::take_u64(in, "node count");
  std::vector<std::vector<std::pair<EntityId, std::uint32_t>>> rows(v);
  for (std::uint64_t i = 0; i < v; ++i) {
    std::uint64_t len = io::take_u64(in, "row length");
    rows[i].reserve(len);
    for (std::uint64_t t = 0; t < len; ++t) {
      EntityId nbr = io::take_u32(in, "neighbor");
      std::uint32_t w = io::take_u32(in, "weight");
      if (nbr >= v) raise(errc::io, "neighbor id out of range in " + path);
      rows[i].emplace_back(nbr, w);
    }
  }
  return AggregatedGraph::from_rows(std::move(rows));
}

// ============================================================
// pair statistics
// ============================================================

namespace {

// Accumulates thirds as an append buffer that is de-duplicated lazily; heavy
// pairs would otherwise hold one entry per (sample, third) occurrence.
struct PairAcc {
  std::uint32_t cooccur = 0;
  std::vector<EntityId> thirds;
  std::uint32_t deduped = 0;

  void compact() {
    std::sort(thirds.begin(), thirds.end());
    thirds.erase(std::unique(thirds.begin(), thirds.end()), thirds.end());
    deduped = std::uint32_t(thirds.size());
  }
  void maybe_compact() {
    if (thirds.size() >= 16 && thirds.size() >= 2 * std::size_t(deduped))
      compact();
  }
};

struct Shard {
  std::unordered_map<std::uint64_t, PairAcc> pairs;
  std::size_t long_samples = 0;
  std::uint64_t triples = 0;
};

void accumulate(const Sample& s, std::uint32_t sample_cap, Shard& shard) {
  auto ids = s.ids();
  std::size_t len = ids.size();
  if (len > sample_cap) ++shard.long_samples;
  if (len >= 3)
    shard.triples += std::uint64_t(len) * (len - 1) * (len - 2) / 6;
  for (std::size_t a = 0; a < len; ++a) {
    for (std::size_t b = a + 1; b < len; ++b) {
      PairAcc& acc = shard.pairs[PairKey(ids[a], ids[b]).packed()];
      ++acc.cooccur;
      for (std::size_t c = 0; c < len; ++c)
        if (c != a && c != b) acc.thirds.push_back(ids[c]);
      acc.maybe_compact();
    }
  }
}

}  // namespace

PairStats build_pair_stats(const Corpus& corpus, std::uint32_t sample_cap,
                           unsigned threads) {
  if (threads == 0) threads = 1;
  std::size_t n = corpus.samples.size();
  unsigned workers = unsigned(std::min<std::size_t>(threads, n ? n : 1));

  std::vector<Shard> shards(workers);
  if (workers <= 1) {
    for (const Sample& s : corpus.samples)
      accumulate(s, sample_cap, shards[0]);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        std::size_t begin = n * w / workers;
        std::size_t end = n * (w + 1) / workers;
        for (std::size_t s = begin; s < end; ++s)
          accumulate(corpus.samples[s], sample_cap, shards[w]);
      });
    }
    for (auto& t : pool) t.join();
  }

  // Deterministic merge: counts add, third buffers concatenate; the final
  // sort + de-dup below erases any trace of the partitioning.
  Shard merged = std::move(shards[0]);
  for (unsigned w = 1; w < workers; ++w) {
    merged.long_samples += shards[w].long_samples;
    merged.triples += shards[w].triples;
    for (auto& [key, acc] : shards[w].pairs) {
      PairAcc& into = merged.pairs[key];
      into.cooccur += acc.cooccur;
      into.thirds.insert(into.thirds.end(), acc.thirds.begin(),
                         acc.thirds.end());
    }
    shards[w].pairs.clear();
  }

  PairStats stats;
  stats.long_samples_ = merged.long_samples;
  stats.triples_ = merged.triples;
  stats.keys_.reserve(merged.pairs.size());
  for (const auto& [packed, acc] : merged.pairs)
    stats.keys_.push_back(PairKey::from_packed(packed));
  std::sort(stats.keys_.begin(), stats.keys_.end());
  stats.cooccur_.reserve(stats.keys_.size());
  stats.third_.reserve(stats.keys_.size());
  for (const PairKey& key : stats.keys_) {
    PairAcc& acc = merged.pairs[key.packed()];
    acc.compact();
    stats.cooccur_.push_back(acc.cooccur);
    stats.third_.push_back(std::uint32_t(acc.thirds.size()));
  }
  return stats;
}

std::size_t PairStats::find(PairKey key) const {
  auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
  if (it == keys_.end() || *it != key) return npos;
  return std::size_t(it - keys_.begin());
}

std::uint32_t PairStats::cooccur_count(PairKey key) const {
  std::size_t idx = find(key);
  return idx == npos ? 0 : cooccur_[idx];
}

std::uint32_t PairStats::third_entity_count(PairKey key) const {
  std::size_t idx = find(key);
  return idx == npos ? 0 : third_[idx];
}

namespace {
constexpr char kPairMagic[8] = {'E', 'G', 'O', 'P', 'A', 'I', 'R', '1'};
}

void save_pair_stats(const PairStats& stats, const std::string& path) {
  io::atomic_write(path, [&](std::ostream& out) {
    out.write(kPairMagic, 8);
    io::put_u64(out, stats.size());
    io::put_u64(out, stats.long_samples_);
    io::put_u64(out, stats.triples_);
    for (std::size_t t = 0; t < stats.size(); ++t) {
      io::put_u32(out, stats.keys_[t].lo);
      io::put_u32(out, stats.keys_[t].hi);
      io::put_u32(out, stats.cooccur_[t]);
      io::put_u32(out, stats.third_[t]);
    }
  });
}

PairStats load_pair_stats(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::io, "cannot open pair stats snapshot " + path);
  char magic[8];
  in.read(magic, 8);
  if (in.gcount() != 8 || !std::equal(magic, magic + 8, kPairMagic))
    raise(errc::io, "not a pair stats snapshot: " + path);
  PairStats stats;
  std::uint64_t count = io::take_u64(in, "pair count");
  stats.long_samples_ = io::take_u64(in, "long sample count");
  stats.triples_ = io::take_u64(in, "triple count");
  stats.keys_.reserve(count);
  stats.cooccur_.reserve(count);
  stats.third_.reserve(count);
  PairKey prev;
  for (std::uint64_t t = 0; t < count; ++t) {
    PairKey key;
    key.lo = io::take_u32(in, "pair lo");
    key.hi = io::take_u32(in, "pair hi");
    if (t > 0 && !(prev < key))
      raise(errc::io, "pair stats not in canonical order: " + path);
    prev = key;
    stats.keys_.push_back(key);
    stats.cooccur_.push_back(io::take_u32(in, "cooccur count"));
    stats.third_.push_back(io::take_u32(in, "third entity count"));
  }
  return stats;
}

std::uint32_t ego_coneighbors(const PairStats& stats, EntityId i, EntityId j,
                              EgoMode mode) {
  if (i == j)
    raise(errc::invalid_pair, "ego co-neighbors need two distinct entities");
  std::size_t idx = stats.find(PairKey(i, j));
  if (idx == PairStats::npos) return 0;
  auto view = stats.at(idx);
  if (mode == EgoMode::algorithm_literal) return view.third_entities;
  return view.third_entities + 1;
}

std::uint32_t common_neighbors(const AggregatedGraph& graph, EntityId i,
                               EntityId j) {
  if (i == j)
    raise(errc::invalid_pair, "common neighbors need two distinct entities");
  auto a = graph.neighbors(i);
  auto b = graph.neighbors(j);
  return std::uint32_t(kernels::active().intersect_count(a.data(), a.size(),
                                                         b.data(), b.size()));
}

}  // namespace egosim
