#include "egosim/similarity.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "egosim/error.hpp"
#include "egosim/kernels.hpp"
#include "parallel.hpp"

namespace egosim {

namespace {

constexpr std::array<IndexId, 9> kAllIndices = {
    IndexId::rss, IndexId::cn,       IndexId::jaccard,
    IndexId::salton, IndexId::hpi,   IndexId::hdi,
    IndexId::ego, IndexId::coupling, IndexId::embed_cosine,
};

void require_pair(EntityId i, EntityId j) {
  if (i == j)
    raise(errc::invalid_pair,
          "similarity needs two distinct entities, got id " +
              std::to_string(i) + " twice");
}

}  // namespace

std::string_view index_name(IndexId id) {
  switch (id) {
    case IndexId::rss: return "rss";
    case IndexId::cn: return "cn";
    case IndexId::jaccard: return "jaccard";
    case IndexId::salton: return "salton";
    case IndexId::hpi: return "hpi";
    case IndexId::hdi: return "hdi";
    case IndexId::ego: return "ego";
    case IndexId::coupling: return "coupling";
    case IndexId::embed_cosine: return "embed-cosine";
  }
  return "?";
}

std::optional<IndexId> index_from_name(std::string_view name) {
  for (IndexId id : kAllIndices)
    if (index_name(id) == name) return id;
  return std::nullopt;
}

std::span<const IndexId> all_indices() { return kAllIndices; }

std::string_view universe_name(Universe u) {
  switch (u) {
    case Universe::cooccurring: return "cooccurring";
    case Universe::shared_neighbor: return "shared-neighbor";
    case Universe::all: return "all";
  }
  return "?";
}

std::optional<Universe> universe_from_name(std::string_view name) {
  if (name == "cooccurring") return Universe::cooccurring;
  if (name == "shared-neighbor") return Universe::shared_neighbor;
  if (name == "all") return Universe::all;
  return std::nullopt;
}

// ============================================================
// embeddings
// ============================================================

void EmbeddingTable::insert(std::string_view name, std::vector<double> vec) {
  if (rows_.empty()) {
    dim_ = vec.size();
  } else if (vec.size() != dim_) {
    raise(errc::invalid_input,
          "embedding dimension mismatch for '" + std::string(name) + "'");
  }
  rows_.insert_or_assign(std::string(name), std::move(vec));
}

const std::vector<double>* EmbeddingTable::find(std::string_view name) const {
  auto it = rows_.find(std::string(name));
  return it == rows_.end() ? nullptr : &it->second;
}

EmbeddingTable EmbeddingTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(errc::io, "cannot open embeddings file " + path);

  EmbeddingTable table;
  std::string line;
  std::size_t line_no = 0;
  bool first_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream row(line);
    std::string name;
    if (!(row >> name)) continue;  // blank line

    if (first_line) {
      // "count dim" header: exactly two integer tokens.
      first_line = false;
      std::string second;
      if (row >> second) {
        std::string rest;
        bool two_tokens = !(row >> rest);
        char* end_a = nullptr;
        char* end_b = nullptr;
        (void)std::strtoul(name.c_str(), &end_a, 10);
        (void)std::strtoul(second.c_str(), &end_b, 10);
        if (two_tokens && *end_a == '\0' && *end_b == '\0') continue;
      }
      row.clear();
      row.str(line);
      row >> name;
    }

    std::vector<double> vec;
    double v;
    while (row >> v) vec.push_back(v);
    if (!row.eof())
      raise(errc::io, "bad embedding value at " + path + ":" +
                          std::to_string(line_no));
    if (vec.empty())
      raise(errc::io, "embedding row without values at " + path + ":" +
                          std::to_string(line_no));
    table.insert(name, std::move(vec));
  }
  if (in.bad()) raise(errc::io, "read failure on " + path);
  return table;
}

// ============================================================
// pairwise ops (each routes through the same kernels as the bulk path)
// ============================================================

double rss(const AggregatedGraph& g, EntityId i, EntityId j) {
  require_pair(i, j);
  if (g.degree(i) == 0 && g.degree(j) == 0)
    raise(errc::undefined_value, "rss undefined for two isolated entities");
  double w = double(g.edge_weight(i, j));
  double si = double(g.strength(i));
  double sj = double(g.strength(j));
  double out;
  kernels::active().rss(&w, &si, &sj, &out, 1);
  return out;
}

double cn(const AggregatedGraph& g, EntityId i, EntityId j) {
  require_pair(i, j);
  return double(common_neighbors(g, i, j));
}

double jaccard(const AggregatedGraph& g, EntityId i, EntityId j) {
  require_pair(i, j);
  double c = double(common_neighbors(g, i, j));
  double di = double(g.degree(i));
  double dj = double(g.degree(j));
  double out;
  kernels::active().jaccard(&c, &di, &dj, &out, 1);
  return out;
}

double salton(const AggregatedGraph& g, EntityId i, EntityId j) {
  require_pair(i, j);
  double c = double(common_neighbors(g, i, j));
  double di = double(g.degree(i));
  double dj = double(g.degree(j));
  double out;
  kernels::active().salton(&c, &di, &dj, &out, 1);
  return out;
}

double hpi(const AggregatedGraph& g, EntityId i, EntityId j) {
  require_pair(i, j);
  double c = double(common_neighbors(g, i, j));
  double di = double(g.degree(i));
  double dj = double(g.degree(j));
  double out;
  kernels::active().hpi(&c, &di, &dj, &out, 1);
  return out;
}

double hdi(const AggregatedGraph& g, EntityId i, EntityId j) {
  require_pair(i, j);
  double c = double(common_neighbors(g, i, j));
  double di = double(g.degree(i));
  double dj = double(g.degree(j));
  double out;
  kernels::active().hdi(&c, &di, &dj, &out, 1);
  return out;
}

double coupling(const AggregatedGraph& g, const PairStats& stats, EntityId i,
                EntityId j, EgoMode mode) {
  require_pair(i, j);
  std::uint32_t deg = g.degree(i);
  if (deg == 0)
    raise(errc::undefined_value,
          "coupling undefined: entity " + std::to_string(i) + " is isolated");
  return double(ego_coneighbors(stats, i, j, mode)) / double(deg);
}

double ego(const AggregatedGraph& g, const PairStats& stats, EntityId i,
           EntityId j, EgoMode mode) {
  require_pair(i, j);
  PairKey key(i, j);
  double deg_lo = double(g.degree(key.lo));
  double deg_hi = double(g.degree(key.hi));
  if (deg_lo == 0.0 || deg_hi == 0.0)
    raise(errc::undefined_value,
          "ego similarity undefined for an isolated entity");
  double co = double(ego_coneighbors(stats, i, j, mode));
  double out;
  kernels::active().ego(&co, &deg_lo, &deg_hi, double(g.node_count()), &out, 1);
  return out;
}

double embed_cosine(const EmbeddingTable& table, const std::string& name_i,
                    const std::string& name_j) {
  if (name_i == name_j)
    raise(errc::invalid_pair, "cosine needs two distinct entities");
  const std::vector<double>* a = table.find(name_i);
  const std::vector<double>* b = table.find(name_j);
  if (!a) raise(errc::not_found, "no embedding for '" + name_i + "'");
  if (!b) raise(errc::not_found, "no embedding for '" + name_j + "'");
  const auto& ops = kernels::active();
  double na = ops.dot(a->data(), a->data(), a->size());
  double nb = ops.dot(b->data(), b->data(), b->size());
  if (na == 0.0 || nb == 0.0)
    raise(errc::undefined_value, "cosine undefined for a zero vector");
  return ops.dot(a->data(), b->data(), a->size()) /
         (std::sqrt(na) * std::sqrt(nb));
}

// ============================================================
// bulk scoring
// ============================================================

std::size_t ScoreTable::find(PairKey key) const {
  auto it = std::lower_bound(pairs.begin(), pairs.end(), key);
  if (it == pairs.end() || *it != key) return npos;
  return std::size_t(it - pairs.begin());
}

std::vector<PairKey> enumerate_universe(Universe universe,
                                        const AggregatedGraph& graph,
                                        const PairStats& stats) {
  std::vector<PairKey> pairs;
  switch (universe) {
    case Universe::cooccurring:
      pairs.assign(stats.keys().begin(), stats.keys().end());
      break;
    case Universe::shared_neighbor: {
      // (i,j) share a neighbor x exactly when both sit in x's row.
      std::vector<std::uint64_t> packed;
      std::size_t v = graph.node_count();
      for (EntityId x = 0; x < v; ++x) {
        auto row = graph.neighbors(x);
        for (std::size_t a = 0; a < row.size(); ++a)
          for (std::size_t b = a + 1; b < row.size(); ++b)
            packed.push_back(PairKey(row[a], row[b]).packed());
      }
      std::sort(packed.begin(), packed.end());
      packed.erase(std::unique(packed.begin(), packed.end()), packed.end());
      pairs.reserve(packed.size());
      for (std::uint64_t p : packed) pairs.push_back(PairKey::from_packed(p));
      break;
    }
    case Universe::all: {
      std::size_t v = graph.node_count();
      pairs.reserve(v * (v - 1) / 2);
      for (EntityId i = 0; i < v; ++i)
        for (EntityId j = i + 1; j < v; ++j) pairs.emplace_back(i, j);
      break;
    }
  }
  return pairs;
}

using detail::run_chunked;

ScoreTable score_all_pairs(IndexId index, const Corpus& corpus,
                           const AggregatedGraph& graph,
                           const PairStats& stats,
                           const EmbeddingTable* embeddings,
                           const ScoreOptions& options) {
  if (index == IndexId::embed_cosine && !embeddings)
    raise(errc::invalid_input, "embed-cosine needs an embeddings table");

  std::vector<PairKey> universe =
      enumerate_universe(options.universe, graph, stats);

  ScoreTable table;
  table.index = index;
  table.universe = options.universe;

  // Keep only pairs on which the index is defined; the rest are counted.
  for (const PairKey& key : universe) {
    bool defined = true;
    switch (index) {
      case IndexId::ego:
        defined = graph.degree(key.lo) > 0 && graph.degree(key.hi) > 0;
        break;
      case IndexId::coupling:
        defined = graph.degree(key.lo) > 0;
        break;
      case IndexId::rss:
        defined = graph.degree(key.lo) > 0 || graph.degree(key.hi) > 0;
        break;
      case IndexId::embed_cosine: {
        const std::vector<double>* a =
            embeddings->find(corpus.table.name(key.lo));
        const std::vector<double>* b =
            embeddings->find(corpus.table.name(key.hi));
        defined = a && b &&
                  kernels::active().dot(a->data(), a->data(), a->size()) > 0 &&
                  kernels::active().dot(b->data(), b->data(), b->size()) > 0;
        break;
      }
      default:
        break;  // cn family is total once i != j
    }
    if (defined)
      table.pairs.push_back(key);
    else
      ++table.omitted;
  }

  std::size_t n = table.pairs.size();
  table.scores.assign(n, 0.0);
  const auto& ops = kernels::active();

  auto fill_counts = [&](std::size_t begin, std::size_t end,
                         std::vector<double>& c, std::vector<double>& di,
                         std::vector<double>& dj) {
    for (std::size_t t = begin; t < end; ++t) {
      const PairKey& key = table.pairs[t];
      c[t - begin] = double(common_neighbors(graph, key.lo, key.hi));
      di[t - begin] = double(graph.degree(key.lo));
      dj[t - begin] = double(graph.degree(key.hi));
    }
  };

  switch (index) {
    case IndexId::cn: {
      run_chunked(n, options.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t)
          table.scores[t] =
              double(common_neighbors(graph, table.pairs[t].lo,
                                      table.pairs[t].hi));
      });
      break;
    }
    case IndexId::jaccard:
    case IndexId::salton:
    case IndexId::hpi:
    case IndexId::hdi: {
      run_chunked(n, options.threads, [&](std::size_t begin, std::size_t end) {
        std::size_t len = end - begin;
        std::vector<double> c(len), di(len), dj(len);
        fill_counts(begin, end, c, di, dj);
        double* out = table.scores.data() + begin;
        if (index == IndexId::jaccard)
          ops.jaccard(c.data(), di.data(), dj.data(), out, len);
        else if (index == IndexId::salton)
          ops.salton(c.data(), di.data(), dj.data(), out, len);
        else if (index == IndexId::hpi)
          ops.hpi(c.data(), di.data(), dj.data(), out, len);
        else
          ops.hdi(c.data(), di.data(), dj.data(), out, len);
      });
      break;
    }
    case IndexId::rss: {
      run_chunked(n, options.threads, [&](std::size_t begin, std::size_t end) {
        std::size_t len = end - begin;
        std::vector<double> w(len), si(len), sj(len);
        for (std::size_t t = begin; t < end; ++t) {
          const PairKey& key = table.pairs[t];
          w[t - begin] = double(graph.edge_weight(key.lo, key.hi));
          si[t - begin] = double(graph.strength(key.lo));
          sj[t - begin] = double(graph.strength(key.hi));
        }
        ops.rss(w.data(), si.data(), sj.data(), table.scores.data() + begin,
                len);
      });
      break;
    }
    case IndexId::ego: {
      double v = double(graph.node_count());
      run_chunked(n, options.threads, [&](std::size_t begin, std::size_t end) {
        std::size_t len = end - begin;
        std::vector<double> co(len), dlo(len), dhi(len);
        for (std::size_t t = begin; t < end; ++t) {
          const PairKey& key = table.pairs[t];
          co[t - begin] =
              double(ego_coneighbors(stats, key.lo, key.hi, options.ego_mode));
          dlo[t - begin] = double(graph.degree(key.lo));
          dhi[t - begin] = double(graph.degree(key.hi));
        }
        ops.ego(co.data(), dlo.data(), dhi.data(), v,
                table.scores.data() + begin, len);
      });
      break;
    }
    case IndexId::coupling: {
      run_chunked(n, options.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t) {
          const PairKey& key = table.pairs[t];
          table.scores[t] =
              double(ego_coneighbors(stats, key.lo, key.hi, options.ego_mode)) /
              double(graph.degree(key.lo));
        }
      });
      break;
    }
    case IndexId::embed_cosine: {
      run_chunked(n, options.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t) {
          const PairKey& key = table.pairs[t];
          table.scores[t] = embed_cosine(*embeddings,
                                         corpus.table.name(key.lo),
                                         corpus.table.name(key.hi));
        }
      });
      break;
    }
  }
  return table;
}

}  // namespace egosim
