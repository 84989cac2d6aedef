#include "egosim/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <unordered_set>

#include "egosim/error.hpp"
#include "egosim/io_util.hpp"
#include "egosim/kernels.hpp"
#include "parallel.hpp"

namespace egosim {

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size())
    raise(errc::invalid_input, "pearson inputs differ in length");
  std::size_t n = xs.size();
  if (n < 2)
    raise(errc::undefined_value, "pearson needs at least two observations");

  const auto& ops = kernels::active();
  double mx = ops.sum(xs.data(), n) / double(n);
  double my = ops.sum(ys.data(), n) / double(n);
  std::vector<double> cx(n), cy(n);
  for (std::size_t t = 0; t < n; ++t) {
    cx[t] = xs[t] - mx;
    cy[t] = ys[t] - my;
  }
  double sxx = ops.dot(cx.data(), cx.data(), n);
  double syy = ops.dot(cy.data(), cy.data(), n);
  if (sxx == 0.0 || syy == 0.0)
    raise(errc::undefined_value, "pearson undefined for constant input");
  return ops.dot(cx.data(), cy.data(), n) /
         (std::sqrt(sxx) * std::sqrt(syy));
}

CorrelationMatrix index_correlation_matrix(
    std::span<const ScoreTable* const> tables) {
  if (tables.size() < 2)
    raise(errc::invalid_input, "correlation matrix needs at least two tables");

  std::vector<PairKey> common(tables[0]->pairs.begin(),
                              tables[0]->pairs.end());
  for (std::size_t t = 1; t < tables.size() && !common.empty(); ++t) {
    std::vector<PairKey> next;
    std::set_intersection(common.begin(), common.end(),
                          tables[t]->pairs.begin(), tables[t]->pairs.end(),
                          std::back_inserter(next));
    common = std::move(next);
  }
  if (common.empty())
    raise(errc::invalid_input, "score tables share no pairs");

  std::vector<std::vector<double>> aligned(tables.size());
  for (std::size_t t = 0; t < tables.size(); ++t) {
    aligned[t].reserve(common.size());
    for (const PairKey& key : common)
      aligned[t].push_back(tables[t]->scores[tables[t]->find(key)]);
  }

  CorrelationMatrix m;
  m.common_pairs = common.size();
  for (const ScoreTable* t : tables)
    m.names.emplace_back(index_name(t->index));
  m.values.assign(tables.size(), std::vector<double>(tables.size(), 0.0));
  for (std::size_t a = 0; a < tables.size(); ++a) {
    m.values[a][a] = 1.0;
    for (std::size_t b = a + 1; b < tables.size(); ++b) {
      double r = pearson(aligned[a], aligned[b]);
      m.values[a][b] = r;
      m.values[b][a] = r;
    }
  }
  return m;
}

namespace {

template <typename Key>
void sort_ranked(std::vector<std::pair<Key, double>>& items) {
  std::sort(items.begin(), items.end(),
            [](const std::pair<Key, double>& a, const std::pair<Key, double>& b) {
              if (a.second != b.second) return a.second > b.second;
              return a.first < b.first;
            });
}

template <typename Key>
double overlap_impl(const Ranked<Key>& a, const Ranked<Key>& b,
                    std::size_t k) {
  if (k < 1) raise(errc::invalid_input, "top-k overlap needs k >= 1");
  if (k > a.items.size() || k > b.items.size())
    raise(errc::invalid_input,
          "k = " + std::to_string(k) + " exceeds a ranked list's length");
  std::vector<Key> ka, kb;
  ka.reserve(k);
  kb.reserve(k);
  for (std::size_t t = 0; t < k; ++t) {
    ka.push_back(a.items[t].first);
    kb.push_back(b.items[t].first);
  }
  std::sort(ka.begin(), ka.end());
  std::sort(kb.begin(), kb.end());
  std::size_t hits = 0, i = 0, j = 0;
  while (i < k && j < k) {
    if (ka[i] < kb[j]) {
      ++i;
    } else if (kb[j] < ka[i]) {
      ++j;
    } else {
      ++hits;
      ++i;
      ++j;
    }
  }
  return double(hits) / double(k);
}

}  // namespace

RankedPairs rank_pairs(const ScoreTable& table) {
  RankedPairs ranked;
  ranked.items.reserve(table.pairs.size());
  for (std::size_t t = 0; t < table.pairs.size(); ++t)
    ranked.items.emplace_back(table.pairs[t], table.scores[t]);
  sort_ranked(ranked.items);
  return ranked;
}

double topk_overlap(const RankedPairs& a, const RankedPairs& b,
                    std::size_t k) {
  return overlap_impl(a, b, k);
}

double topk_overlap(const RankedEntities& a, const RankedEntities& b,
                    std::size_t k) {
  return overlap_impl(a, b, k);
}

NeighborList topk_neighbors(const ScoreTable& table, EntityId x,
                            std::size_t k) {
  if (k < 1) raise(errc::invalid_input, "top-k neighbors needs k >= 1");
  NeighborList out;
  for (std::size_t t = 0; t < table.pairs.size(); ++t) {
    const PairKey& key = table.pairs[t];
    if (key.lo == x)
      out.ranked.items.emplace_back(key.hi, table.scores[t]);
    else if (key.hi == x)
      out.ranked.items.emplace_back(key.lo, table.scores[t]);
  }
  if (out.ranked.items.empty())
    raise(errc::not_found,
          "entity " + std::to_string(x) + " has no scored pairs");
  sort_ranked(out.ranked.items);
  if (out.ranked.items.size() < k)
    out.truncated = true;
  else
    out.ranked.items.resize(k);
  return out;
}

// ============================================================
// labels
// ============================================================

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (start <= line.size()) {
    std::size_t end = line.find('\t', start);
    if (end == std::string::npos) end = line.size();
    fields.emplace_back(line.substr(start, end - start));
    start = end + 1;
  }
  return fields;
}

}  // namespace

LabeledPairSet load_labels(const std::string& path, const EntityTable& table) {
  std::ifstream in(path);
  if (!in) raise(errc::io, "cannot open labels file " + path);

  LabeledPairSet out;
  std::unordered_set<std::uint64_t> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto loc = path + ":" + std::to_string(line_no);
    auto fields = split_tabs(line);
    if (fields.size() != 3)
      raise(errc::io, "expected 3 tab-separated fields at " + loc);
    auto i = table.find(fields[0]);
    auto j = table.find(fields[1]);
    if (!i) raise(errc::invalid_input,
                  "unknown entity '" + fields[0] + "' at " + loc);
    if (!j) raise(errc::invalid_input,
                  "unknown entity '" + fields[1] + "' at " + loc);
    if (*i == *j)
      raise(errc::invalid_input, "label pairs an entity with itself at " + loc);
    if (fields[2] != "0" && fields[2] != "1")
      raise(errc::io, "label must be 0 or 1 at " + loc);
    PairKey key(*i, *j);
    if (!seen.insert(key.packed()).second)
      raise(errc::invalid_input, "duplicate labeled pair at " + loc);
    bool positive = fields[2] == "1";
    out.pairs.push_back({key, positive});
    out.positives += positive;
  }
  if (in.bad()) raise(errc::io, "read failure on " + path);
  std::sort(out.pairs.begin(), out.pairs.end(),
            [](const LabeledPair& a, const LabeledPair& b) {
              return a.key < b.key;
            });
  return out;
}

void save_labels(const LabeledPairSet& labels, const EntityTable& table,
                 const std::string& path) {
  io::atomic_write(path, [&](std::ostream& out) {
    for (const LabeledPair& lp : labels.pairs) {
      out << table.name(lp.key.lo) << '\t' << table.name(lp.key.hi) << '\t'
          << (lp.positive ? '1' : '0') << '\n';
    }
  });
}

LabeledPairSet generate_prefix_labels(const Corpus& corpus,
                                      const AggregatedGraph& graph,
                                      std::size_t prefix_len,
                                      std::size_t n_positive,
                                      std::size_t n_negative,
                                      std::uint64_t seed) {
  if (prefix_len < 1)
    raise(errc::invalid_input, "prefix length must be at least 1");

  auto prefix_of = [&](EntityId id) {
    const std::string& name = corpus.table.name(id);
    return name.substr(0, std::min(prefix_len, name.size()));
  };

  std::vector<PairKey> pos_pool, neg_pool;
  std::size_t v = graph.node_count();
  for (EntityId i = 0; i < v; ++i) {
    for (EntityId j : graph.neighbors(i)) {
      if (j <= i) continue;
      if (prefix_of(i) == prefix_of(j))
        pos_pool.emplace_back(i, j);
      else
        neg_pool.emplace_back(i, j);
    }
  }
  if (pos_pool.size() < n_positive)
    raise(errc::invalid_input,
          "only " + std::to_string(pos_pool.size()) +
              " same-prefix co-occurring pairs available, need " +
              std::to_string(n_positive));
  if (neg_pool.size() < n_negative)
    raise(errc::invalid_input,
          "only " + std::to_string(neg_pool.size()) +
              " cross-prefix co-occurring pairs available, need " +
              std::to_string(n_negative));

  // Fisher-Yates with explicit draws keeps the sequence pinned to the seed.
  std::mt19937_64 rng(seed);
  auto draw = [&rng](std::vector<PairKey>& pool, std::size_t n) {
    for (std::size_t t = 0; t + 1 < pool.size() && t < n; ++t) {
      std::size_t pick = t + std::size_t(rng() % (pool.size() - t));
      std::swap(pool[t], pool[pick]);
    }
    pool.resize(n);
  };
  draw(pos_pool, n_positive);
  draw(neg_pool, n_negative);

  LabeledPairSet out;
  out.positives = n_positive;
  for (const PairKey& key : pos_pool) out.pairs.push_back({key, true});
  for (const PairKey& key : neg_pool) out.pairs.push_back({key, false});
  std::sort(out.pairs.begin(), out.pairs.end(),
            [](const LabeledPair& a, const LabeledPair& b) {
              return a.key < b.key;
            });
  return out;
}

JoinedLabels join_scores(const ScoreTable& table,
                         const LabeledPairSet& labels) {
  JoinedLabels joined;
  joined.scores.reserve(labels.pairs.size());
  for (const LabeledPair& lp : labels.pairs) {
    std::size_t idx = table.find(lp.key);
    if (idx == ScoreTable::npos) {
      ++joined.unscored_labeled;
      joined.scores.push_back(0.0);
    } else {
      joined.scores.push_back(table.scores[idx]);
    }
  }
  return joined;
}

double precision_at_k(const ScoreTable& table, const LabeledPairSet& labels,
                      std::size_t k, std::size_t* unscored) {
  if (k < 1 || k > labels.pairs.size())
    raise(errc::invalid_input,
          "precision@k needs 1 <= k <= number of labeled pairs");
  JoinedLabels joined = join_scores(table, labels);
  if (unscored) *unscored = joined.unscored_labeled;

  std::vector<std::size_t> order(labels.pairs.size());
  for (std::size_t t = 0; t < order.size(); ++t) order[t] = t;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (joined.scores[a] != joined.scores[b])
      return joined.scores[a] > joined.scores[b];
    return labels.pairs[a].key < labels.pairs[b].key;
  });
  std::size_t hits = 0;
  for (std::size_t t = 0; t < k; ++t)
    hits += labels.pairs[order[t]].positive;
  return double(hits) / double(k);
}

namespace {

void split_classes(const ScoreTable& table, const LabeledPairSet& labels,
                   std::vector<double>& pos, std::vector<double>& neg,
                   std::size_t* unscored) {
  JoinedLabels joined = join_scores(table, labels);
  if (unscored) *unscored = joined.unscored_labeled;
  for (std::size_t t = 0; t < labels.pairs.size(); ++t) {
    if (labels.pairs[t].positive)
      pos.push_back(joined.scores[t]);
    else
      neg.push_back(joined.scores[t]);
  }
  if (pos.empty() || neg.empty())
    raise(errc::undefined_value, "AUC needs both a positive and a negative");
}

}  // namespace

AucResult auc_exact(const ScoreTable& table, const LabeledPairSet& labels,
                    std::size_t* unscored) {
  std::vector<double> pos, neg;
  split_classes(table, labels, pos, neg, unscored);
  std::sort(neg.begin(), neg.end());

  AucResult r;
  for (double p : pos) {
    auto lo = std::lower_bound(neg.begin(), neg.end(), p);
    auto hi = std::upper_bound(lo, neg.end(), p);
    r.wins += std::uint64_t(lo - neg.begin());
    r.ties += std::uint64_t(hi - lo);
  }
  r.comparisons = std::uint64_t(pos.size()) * std::uint64_t(neg.size());
  r.value = (double(r.wins) + 0.5 * double(r.ties)) / double(r.comparisons);
  return r;
}

AucResult auc_sampled(const ScoreTable& table, const LabeledPairSet& labels,
                      std::uint64_t n, std::uint64_t seed,
                      std::size_t* unscored) {
  if (n == 0) raise(errc::invalid_input, "sampled AUC needs n >= 1");
  std::vector<double> pos, neg;
  split_classes(table, labels, pos, neg, unscored);

  std::mt19937_64 rng(seed);
  AucResult r;
  r.sampled = true;
  r.comparisons = n;
  for (std::uint64_t t = 0; t < n; ++t) {
    double p = pos[std::size_t(rng() % pos.size())];
    double q = neg[std::size_t(rng() % neg.size())];
    r.wins += p > q;
    r.ties += p == q;
  }
  r.value = (double(r.wins) + 0.5 * double(r.ties)) / double(n);
  return r;
}

// ============================================================
// association shift
// ============================================================

ShiftResult shift_from_counts(std::uint32_t cn_xi, std::uint32_t cn_xj,
                              std::uint32_t ego_xi, std::uint32_t ego_xj) {
  if (cn_xj == 0)
    raise(errc::undefined_value, "shift undefined: |N_x ∩ N_j| is zero");
  if (ego_xj == 0)
    raise(errc::undefined_value, "shift undefined: ego count for (x,j) is zero");
  if (cn_xi == 0)
    raise(errc::undefined_value,
          "shift undefined: |N_x ∩ N_i| is zero, so the ratio divides by zero");
  ShiftResult r;
  r.r1 = double(cn_xi) / double(cn_xj);
  r.r2 = double(ego_xi) / double(ego_xj);
  r.ratio = r.r2 / r.r1;
  r.diff = r.r2 - r.r1;
  return r;
}

ShiftResult association_shift(const AggregatedGraph& graph,
                              const PairStats& stats, EntityId x, EntityId i,
                              EntityId j, EgoMode mode) {
  if (x == i || x == j || i == j)
    raise(errc::invalid_pair, "association shift needs three distinct entities");
  return shift_from_counts(common_neighbors(graph, x, i),
                           common_neighbors(graph, x, j),
                           ego_coneighbors(stats, x, i, mode),
                           ego_coneighbors(stats, x, j, mode));
}

// ============================================================
// histograms
// ============================================================

Histogram Histogram::linear(std::span<const double> values,
                            std::size_t bins) {
  Histogram h;
  if (values.empty() || bins == 0) return h;
  auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  double lo = *lo_it, hi = *hi_it;
  h.total = values.size();
  if (lo == hi) {
    h.bins.push_back({lo, hi, std::uint64_t(values.size())});
    return h;
  }
  h.bins.resize(bins);
  double width = (hi - lo) / double(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    h.bins[b].lo = lo + width * double(b);
    h.bins[b].hi = b + 1 == bins ? hi : lo + width * double(b + 1);
  }
  for (double v : values) {
    auto b = std::size_t((v - lo) / width);
    if (b >= bins) b = bins - 1;
    ++h.bins[b].count;
  }
  return h;
}

Histogram Histogram::log10(std::span<const double> values, std::size_t bins) {
  Histogram h;
  if (values.empty() || bins == 0) return h;
  h.total = values.size();

  std::uint64_t zeros = 0;
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (double v : values) {
    if (v <= 0.0) {
      ++zeros;  // ratios are never negative; zeros get their own bin
      continue;
    }
    if (!any) {
      lo = hi = v;
      any = true;
    } else {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (zeros) h.bins.push_back({0.0, 0.0, zeros});
  if (!any) return h;

  if (lo == hi) {
    h.bins.push_back({lo, hi, h.total - zeros});
    return h;
  }
  double llo = std::log10(lo), lhi = std::log10(hi);
  double width = (lhi - llo) / double(bins);
  std::size_t base = h.bins.size();
  for (std::size_t b = 0; b < bins; ++b) {
    double elo = b == 0 ? lo : std::pow(10.0, llo + width * double(b));
    double ehi = b + 1 == bins ? hi : std::pow(10.0, llo + width * double(b + 1));
    h.bins.push_back({elo, ehi, 0});
  }
  for (double v : values) {
    if (v <= 0.0) continue;
    auto b = std::size_t((std::log10(v) - llo) / width);
    if (b >= bins) b = bins - 1;
    ++h.bins[base + b].count;
  }
  return h;
}

ShiftHistograms shift_histograms(const AggregatedGraph& graph,
                                 const PairStats& stats,
                                 const ShiftSweepOptions& options) {
  ShiftHistograms out;

  // Pair-level ratio: ego co-neighbors vs common neighbors.
  std::vector<double> pair_vals;
  pair_vals.reserve(stats.size());
  for (std::size_t t = 0; t < stats.size(); ++t) {
    auto view = stats.at(t);
    std::uint32_t c = common_neighbors(graph, view.key.lo, view.key.hi);
    if (c == 0) {
      ++out.pairs_skipped;
      continue;
    }
    std::uint32_t num = options.mode == EgoMode::algorithm_literal
                            ? view.third_entities
                            : view.third_entities + 1;
    pair_vals.push_back(double(num) / double(c));
  }

  std::vector<double> ratios, diffs;
  auto eval_triple = [&](EntityId x, EntityId i, EntityId j,
                         std::vector<double>& rs, std::vector<double>& ds,
                         std::uint64_t& skipped) {
    std::uint32_t c_xi = common_neighbors(graph, x, i);
    std::uint32_t c_xj = common_neighbors(graph, x, j);
    std::uint32_t e_xi = ego_coneighbors(stats, x, i, options.mode);
    std::uint32_t e_xj = ego_coneighbors(stats, x, j, options.mode);
    if (c_xj == 0 || e_xj == 0 || c_xi == 0) {
      ++skipped;
      return;
    }
    ShiftResult r = shift_from_counts(c_xi, c_xj, e_xi, e_xj);
    rs.push_back(r.ratio);
    ds.push_back(r.diff);
  };

  std::size_t v = graph.node_count();
  if (options.sample_triples == 0) {
    // Every center with >= 2 co-occurring partners; partner pairs i < j.
    struct Local {
      std::vector<double> ratios, diffs;
      std::uint64_t scanned = 0, skipped = 0;
    };
    unsigned threads = options.threads ? options.threads : 1;
    std::vector<Local> locals(threads);
    detail::run_chunked_indexed(v, threads, [&](unsigned worker,
                                                std::size_t begin,
                                                std::size_t end) {
      Local& local = locals[worker];
      for (EntityId x = EntityId(begin); x < end; ++x) {
        auto row = graph.neighbors(x);
        for (std::size_t a = 0; a < row.size(); ++a) {
          for (std::size_t b = a + 1; b < row.size(); ++b) {
            ++local.scanned;
            eval_triple(x, row[a], row[b], local.ratios, local.diffs,
                        local.skipped);
          }
        }
      }
    });
    for (Local& local : locals) {
      out.triples_scanned += local.scanned;
      out.triples_skipped += local.skipped;
      ratios.insert(ratios.end(), local.ratios.begin(), local.ratios.end());
      diffs.insert(diffs.end(), local.diffs.begin(), local.diffs.end());
    }
  } else {
    std::vector<EntityId> eligible;
    for (EntityId x = 0; x < v; ++x)
      if (graph.degree(x) >= 2) eligible.push_back(x);
    if (!eligible.empty()) {
      std::mt19937_64 rng(options.seed);
      for (std::uint64_t t = 0; t < options.sample_triples; ++t) {
        EntityId x = eligible[std::size_t(rng() % eligible.size())];
        auto row = graph.neighbors(x);
        std::size_t a = std::size_t(rng() % row.size());
        std::size_t b = std::size_t(rng() % (row.size() - 1));
        if (b >= a) ++b;
        EntityId i = std::min(row[a], row[b]);
        EntityId j = std::max(row[a], row[b]);
        ++out.triples_scanned;
        eval_triple(x, i, j, ratios, diffs, out.triples_skipped);
      }
    }
  }

  out.pair_ratio = Histogram::linear(pair_vals, options.bins);
  out.shift_ratio = Histogram::log10(ratios, options.bins);
  out.shift_diff = Histogram::linear(diffs, options.bins);
  return out;
}

}  // namespace egosim
