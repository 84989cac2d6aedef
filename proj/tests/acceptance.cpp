// Acceptance gate: eight release criteria, one [PASS]/[FAIL] line each.
// Exit status is the number of failed criteria. All tolerances live here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "egosim/clustering.hpp"
#include "egosim/commands.hpp"
#include "egosim/corpus.hpp"
#include "egosim/evaluation.hpp"
#include "egosim/graph.hpp"
#include "egosim/similarity.hpp"
#include "egosim/synthetic.hpp"
#include "toy.hpp"

using namespace egosim;
namespace fs = std::filesystem;

namespace {

// pinned tolerances
constexpr double kSigmaOracleTol = 1e-12;  // relative, vs explicit ego network
constexpr double kTableTol = 0.01;         // absolute, on the r2/r1 column
constexpr double kAucSampledTol = 0.01;    // sampled vs exact AUC
constexpr double kEgoBoundSlack = 1e-14;   // rounding headroom on |V|/max(d)

struct Outcome {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;  // keep the first failure reason
    ok = false;
  }
};

// ---------------------------------------------------------------------------
// 1. σ_ego and its co-neighbor counts agree with an explicitly built ego
//    network on 200 random corpora, for every co-occurring pair.
// ---------------------------------------------------------------------------
Outcome oracle_equivalence() {
  Outcome r;
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  std::size_t pairs_checked = 0;

  for (int round = 0; round < 200 && r.ok; ++round) {
    Corpus c = random_corpus(rng);
    AggregatedGraph g = build_graph(c);
    PairStats stats = build_pair_stats(c);
    double v = double(g.node_count());

    std::size_t t = 0;
    while (t < stats.size() && r.ok) {
      EntityId lo = stats.at(t).key.lo;
      AggregatedGraph eg = build_ego_network(c, lo);
      for (; t < stats.size() && stats.at(t).key.lo == lo; ++t) {
        EntityId hi = stats.at(t).key.hi;
        std::uint32_t fast = ego_coneighbors(stats, lo, hi);
        std::uint32_t ref = eg.degree(hi);
        if (fast != ref) {
          r.fail("co-neighbor count diverges from the explicit ego network");
          break;
        }
        double sigma = ego(g, stats, lo, hi);
        double direct =
            double(ref) * v / (double(g.degree(lo)) * double(g.degree(hi)));
        if (std::abs(sigma - direct) >
            kSigmaOracleTol * std::max(1.0, std::abs(direct))) {
          r.fail("sigma_ego diverges from the explicit ego network");
          break;
        }
        ++pairs_checked;
      }
    }
  }

  double secs = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  if (secs >= 10.0) r.fail("runtime budget of 10 s exceeded");
  if (r.ok) {
    std::ostringstream d;
    d << "200 corpora, " << pairs_checked << " pairs, "
      << std::fixed << secs << " s";
    r.detail = d.str();
  }
  return r;
}

// ---------------------------------------------------------------------------
// 2. Boundary cases of the ego co-neighbor count.
// ---------------------------------------------------------------------------
Outcome boundary_cases() {
  Outcome r;

  {
    // co-occurring strictly alone: the count is exactly 1 (the ego itself)
    std::istringstream in("p q\np q\nr s t\n");
    Corpus c = parse_records(in);
    PairStats stats = build_pair_stats(c);
    EntityId p = *c.table.find("p"), q = *c.table.find("q");
    if (ego_coneighbors(stats, p, q) != 1)
      r.fail("pair co-occurring only alone should count exactly 1");

    // never co-occurring: 0 in both modes
    EntityId s = *c.table.find("s");
    if (ego_coneighbors(stats, p, s) != 0 ||
        ego_coneighbors(stats, p, s, EgoMode::algorithm_literal) != 0)
      r.fail("never co-occurring pair should count 0");
  }

  // a companion planted into every sample of a host saturates the count at
  // the host's degree
  std::mt19937_64 rng(77);
  for (int round = 0; round < 50 && r.ok; ++round) {
    Corpus c = random_corpus(rng);
    AggregatedGraph g0 = build_graph(c);
    EntityId host = EntityId(-1);
    for (EntityId i = 0; i < c.table.size(); ++i)
      if (g0.degree(i) > 0 && (host == EntityId(-1) ||
                               g0.degree(i) > g0.degree(host)))
        host = i;
    if (host == EntityId(-1)) continue;

    EntityId planted = c.table.intern("planted-companion");
    std::vector<Sample> samples;
    for (const Sample& s : c.samples) {
      std::vector<EntityId> ids(s.ids().begin(), s.ids().end());
      if (s.contains(host)) ids.push_back(planted);
      samples.emplace_back(std::move(ids));
    }
    c.samples = std::move(samples);

    AggregatedGraph g = build_graph(c);
    PairStats stats = build_pair_stats(c);
    if (ego_coneighbors(stats, host, planted) != g.degree(host))
      r.fail("planted companion should reach the host's whole neighborhood");
  }

  if (r.ok) r.detail = "alone=1, planted=|N_i| on 50 corpora, disjoint=0";
  return r;
}

// ---------------------------------------------------------------------------
// 3. The association-shift arithmetic reproduces the published ratio column.
// ---------------------------------------------------------------------------
Outcome shift_table() {
  Outcome r;
  struct Row {
    std::uint32_t cn_xi, cn_xj, ego_xi, ego_xj;
    double expect;
  };
  const Row rows[] = {
      {679, 2363, 189, 11, 59.79}, {272, 397, 36, 1, 52.54},
      {401, 588, 67, 2, 49.12},    {289, 314, 131, 3, 47.44},
      {834, 898, 132, 3, 47.38},   {660, 737, 208, 7, 33.18},
      {321, 485, 100, 7, 21.58},   {183, 27, 1, 3, 0.0492},
      {45, 74, 2, 67, 0.0491},     {222, 61, 1, 23, 0.0119},
      {179, 19, 1, 9, 0.0118},
  };
  for (const Row& row : rows) {
    ShiftResult s =
        shift_from_counts(row.cn_xi, row.cn_xj, row.ego_xi, row.ego_xj);
    if (std::abs(s.ratio - row.expect) > kTableTol) {
      std::ostringstream d;
      d << "counts (" << row.cn_xi << "," << row.cn_xj << "," << row.ego_xi
        << "," << row.ego_xj << ") gave " << s.ratio << ", expected "
        << row.expect;
      r.fail(d.str());
    }
  }
  if (r.ok) r.detail = "11 rows within 0.01";
  return r;
}

// ---------------------------------------------------------------------------
// 4. AUC counters, sampled agreement, and the class-swap identity.
// ---------------------------------------------------------------------------
Outcome auc_consistency() {
  Outcome r;

  std::mt19937_64 rng(4242);
  std::vector<std::pair<PairKey, double>> rows;
  std::vector<LabeledPair> labels, swapped;
  for (std::uint32_t t = 0; t < 2000; ++t) {
    PairKey key(0, t + 1);
    bool pos = t < 1000;
    // overlapping integer grids, so ties across the classes exist
    double score = double(pos ? 50 + rng() % 100 : rng() % 100);
    rows.push_back({key, score});
    labels.push_back({key, pos});
    swapped.push_back({key, !pos});
  }
  std::sort(rows.begin(), rows.end());
  LabeledPairSet set, swap_set;
  for (std::size_t t = 0; t < labels.size(); ++t) {
    set.pairs.push_back(labels[t]);
    swap_set.pairs.push_back(swapped[t]);
  }
  std::sort(set.pairs.begin(), set.pairs.end(),
            [](auto& a, auto& b) { return a.key < b.key; });
  std::sort(swap_set.pairs.begin(), swap_set.pairs.end(),
            [](auto& a, auto& b) { return a.key < b.key; });
  set.positives = 1000;
  swap_set.positives = 1000;
  ScoreTable table;
  for (auto& [key, score] : rows) {
    table.pairs.push_back(key);
    table.scores.push_back(score);
  }

  AucResult exact = auc_exact(table, set);
  if (exact.comparisons != 1000ull * 1000ull)
    r.fail("comparison count is not |P|*|N|");

  // counters re-derived by the quadratic definition
  JoinedLabels joined = join_scores(table, set);
  std::uint64_t wins = 0, ties = 0;
  for (std::size_t p = 0; p < set.pairs.size(); ++p) {
    if (!set.pairs[p].positive) continue;
    for (std::size_t q = 0; q < set.pairs.size(); ++q) {
      if (set.pairs[q].positive) continue;
      wins += joined.scores[p] > joined.scores[q];
      ties += joined.scores[p] == joined.scores[q];
    }
  }
  if (exact.wins != wins || exact.ties != ties)
    r.fail("win/tie counters disagree with enumeration");
  if (exact.value !=
      (double(wins) + 0.5 * double(ties)) / double(exact.comparisons))
    r.fail("value is not (wins + ties/2) / comparisons");

  AucResult sampled = auc_sampled(table, set, 100000, 7);
  if (std::abs(sampled.value - exact.value) > kAucSampledTol)
    r.fail("sampled AUC strayed more than 0.01 from exact");

  AucResult flipped = auc_exact(table, swap_set);
  if (flipped.wins != exact.comparisons - exact.wins - exact.ties ||
      flipped.ties != exact.ties)
    r.fail("class swap does not complement the counters");
  if (exact.value + flipped.value != 1.0)
    r.fail("class-swap values do not sum to exactly 1");

  if (r.ok) {
    std::ostringstream d;
    d << "auc=" << exact.value << ", sampled off by "
      << std::abs(sampled.value - exact.value) << ", swap sum exact";
    r.detail = d.str();
  }
  return r;
}

// ---------------------------------------------------------------------------
// 5. Index invariants over 10^4 random co-occurring pairs.
// ---------------------------------------------------------------------------
Outcome invariant_suite() {
  Outcome r;
  std::mt19937_64 rng(5151);
  std::size_t checked = 0;

  while (checked < 10000 && r.ok) {
    Corpus c = random_corpus(rng);
    AggregatedGraph g = build_graph(c);
    PairStats stats = build_pair_stats(c);
    double v = double(g.node_count());

    for (std::size_t t = 0; t < stats.size() && checked < 10000; ++t) {
      auto view = stats.at(t);
      EntityId i = view.key.lo, j = view.key.hi;

      double rs = rss(g, i, j), jc = jaccard(g, i, j), sa = salton(g, i, j);
      double hp = hpi(g, i, j), hd = hdi(g, i, j);
      double cnv = cn(g, i, j), eg = ego(g, stats, i, j);
      double cp = coupling(g, stats, i, j), cpr = coupling(g, stats, j, i);

      if (rs != rss(g, j, i) || jc != jaccard(g, j, i) ||
          sa != salton(g, j, i) || hp != hpi(g, j, i) ||
          hd != hdi(g, j, i) || cnv != cn(g, j, i) ||
          eg != ego(g, stats, j, i)) {
        r.fail("a symmetric index changed under argument swap");
        break;
      }

      bool unit = jc >= 0 && jc <= 1 && sa >= 0 && sa <= 1 && hp >= 0 &&
                  hp <= 1 && hd >= 0 && hd <= 1 && rs >= 0 && rs <= 1 &&
                  cp >= 0 && cp <= 1 && cpr >= 0 && cpr <= 1;
      if (!unit) {
        r.fail("a unit-interval bound broke");
        break;
      }
      if (cnv < 0 || std::floor(cnv) != cnv) {
        r.fail("common-neighbor count is not a non-negative integer");
        break;
      }
      double dmax = double(std::max(g.degree(i), g.degree(j)));
      if (eg < 0 || eg > (v / dmax) * (1 + kEgoBoundSlack)) {
        r.fail("sigma_ego left [0, |V|/max degree]");
        break;
      }
      if (hd > sa || sa > hp) {
        r.fail("hdi <= salton <= hpi ordering broke");
        break;
      }
      if (eg != cp * v / double(g.degree(j))) {
        r.fail("sigma_ego does not factor through the coupling");
        break;
      }
      if (view.third_entities > std::uint32_t(cnv)) {
        r.fail("third entities exceeded common neighbors");
        break;
      }
      ++checked;
    }
  }

  if (r.ok) r.detail = std::to_string(checked) + " pairs, all exact";
  return r;
}

// ---------------------------------------------------------------------------
// 6. Rank metrics are invariant under x -> 2x + 1.
// ---------------------------------------------------------------------------
Outcome rank_invariance() {
  Outcome r;
  // seed chosen so that 2x+1 keeps every score distinct in double precision
  // (near-ties one ulp apart can otherwise merge, voiding the premise);
  // the injectivity check below still guards it
  std::mt19937_64 rng(600033);
  Corpus c = random_corpus(rng, {.max_entities = 40, .max_samples = 400});
  AggregatedGraph g = build_graph(c);
  PairStats stats = build_pair_stats(c);

  ScoreTable ego_t = score_all_pairs(IndexId::ego, c, g, stats, nullptr, {});
  ScoreTable cn_t = score_all_pairs(IndexId::cn, c, g, stats, nullptr, {});

  auto warp = [](ScoreTable t) {
    for (double& s : t.scores) s = 2.0 * s + 1.0;
    return t;
  };
  ScoreTable ego_w = warp(ego_t), cn_w = warp(cn_t);

  // 2x+1 is strictly increasing on the reals; confirm rounding kept it
  // injective on these scores, otherwise the premise itself is void
  auto distinct = [](const ScoreTable& t) {
    return std::set<double>(t.scores.begin(), t.scores.end()).size();
  };
  if (distinct(ego_w) != distinct(ego_t) || distinct(cn_w) != distinct(cn_t))
    r.fail("transform collapsed scores; premise violated on this data");

  // labels: a seeded coin flip over scored pairs, so every label has a score
  LabeledPairSet labels;
  std::mt19937_64 coin(99);
  for (PairKey key : ego_t.pairs) {
    bool pos = coin() % 2 == 0;
    labels.pairs.push_back({key, pos});
    if (pos) ++labels.positives;
  }

  for (std::size_t k : {std::size_t(10), std::size_t(50)}) {
    if (k > labels.pairs.size()) continue;
    if (precision_at_k(ego_t, labels, k) != precision_at_k(ego_w, labels, k))
      r.fail("precision@k moved under the transform");
  }

  AucResult a0 = auc_exact(ego_t, labels), a1 = auc_exact(ego_w, labels);
  if (a0.value != a1.value || a0.wins != a1.wins || a0.ties != a1.ties)
    r.fail("AUC moved under the transform");

  RankedPairs re0 = rank_pairs(ego_t), re1 = rank_pairs(ego_w);
  RankedPairs rc0 = rank_pairs(cn_t), rc1 = rank_pairs(cn_w);
  for (std::size_t k : {std::size_t(10), std::size_t(50)}) {
    if (k > re0.items.size() || k > rc0.items.size()) continue;
    if (topk_overlap(re0, rc0, k) != topk_overlap(re1, rc1, k))
      r.fail("top-k overlap moved under the transform");
    for (std::size_t t = 0; t < k; ++t)
      if (re0.items[t].first != re1.items[t].first) {
        r.fail("the ranked order itself moved under the transform");
        break;
      }
  }

  std::vector<EntityId> nodes = select_top_degree(g, 25);
  auto e0 = retain_top_edges(nodes, ego_t, 40);
  auto e1 = retain_top_edges(nodes, ego_w, 40);
  ClusterReport cl0 = cluster(nodes, e0), cl1 = cluster(nodes, e1);
  if (cl0.groups != cl1.groups || cl0.isolated != cl1.isolated)
    r.fail("cluster components moved under the transform");

  if (r.ok) r.detail = "precision, AUC, overlap, clusters all unchanged";
  return r;
}

// ---------------------------------------------------------------------------
// 7. On the planted two-block corpus the ego index separates the blocks
//    better than raw common neighbors, for every seed.
// ---------------------------------------------------------------------------
Outcome block_discrimination() {
  Outcome r;
  double worst_gap = 1e9, ego_min = 1e9, cn_max = -1e9;

  for (std::uint64_t seed = 0; seed < 20 && r.ok; ++seed) {
    TwoBlockData data = two_block_corpus(seed);
    AggregatedGraph g = build_graph(data.corpus);
    PairStats stats = build_pair_stats(data.corpus);

    // the shared-neighbor universe scores every labeled pair: cross-block
    // pairs always reach each other through the hub
    ScoreOptions opts;
    opts.universe = Universe::shared_neighbor;
    ScoreTable ego_t =
        score_all_pairs(IndexId::ego, data.corpus, g, stats, nullptr, opts);
    ScoreTable cn_t =
        score_all_pairs(IndexId::cn, data.corpus, g, stats, nullptr, opts);

    double a_ego = auc_exact(ego_t, data.labels).value;
    double a_cn = auc_exact(cn_t, data.labels).value;
    if (!(a_ego > a_cn)) {
      std::ostringstream d;
      d << "seed " << seed << ": ego AUC " << a_ego << " <= cn AUC " << a_cn;
      r.fail(d.str());
    }
    worst_gap = std::min(worst_gap, a_ego - a_cn);
    ego_min = std::min(ego_min, a_ego);
    cn_max = std::max(cn_max, a_cn);
  }

  if (r.ok) {
    std::ostringstream d;
    d << "20 seeds, ego AUC >= " << ego_min << ", cn AUC <= " << cn_max
      << ", min gap " << worst_gap;
    r.detail = d.str();
  }
  return r;
}

// ---------------------------------------------------------------------------
// 8. The full pipeline is byte-deterministic, whatever the worker count.
// ---------------------------------------------------------------------------
Outcome pipeline_determinism() {
  Outcome r;
  fs::path root = fs::temp_directory_path() / "egosim_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);

  std::string records = (root / "records.txt").string();
  std::ofstream(records) << egosim::test::kToyText;
  std::string labels = (root / "labels.tsv").string();
  std::ofstream(labels) << "a\tb\t1\na\te\t0\n";

  auto run = [&](std::vector<std::string> args) {
    args.insert(args.begin(), "egosim");
    std::ostringstream out, err;
    if (cli::run(args, out, err) != 0)
      r.fail("pipeline step failed: " + err.str());
  };

  auto pipeline = [&](const std::string& tag, const std::string& threads) {
    fs::path base = root / tag;
    run({"build", "--records", records, "--threads", threads, "--out",
         (base / "snap").string()});
    run({"sim", "--snapshots", (base / "snap").string(), "--index", "ego,cn",
         "--threads", threads, "--out", (base / "scores").string()});
    run({"eval", "--snapshots", (base / "snap").string(), "--index", "ego",
         "--labels", labels, "--k", "1,2", "--threads", threads, "--out",
         (base / "eval").string()});
    run({"cluster", "--snapshots", (base / "snap").string(), "--index", "cn",
         "--top-nodes", "5", "--top-edges", "3", "--threads", threads,
         "--out", (base / "cluster").string()});
  };
  pipeline("first", "1");
  pipeline("again", "1");
  pipeline("wide", "4");

  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  const char* files[] = {
      "snap/corpus.bin",    "snap/graph.bin",     "snap/pairstats.bin",
      "scores/ego.tsv",     "scores/cn.tsv",      "eval/precision.tsv",
      "eval/auc.tsv",       "cluster/groups.tsv", "cluster/isolated.tsv",
      "cluster/merges.tsv",
  };
  for (const char* f : files) {
    std::string first = slurp(root / "first" / f);
    if (first.empty()) r.fail(std::string(f) + " missing or empty");
    if (slurp(root / "again" / f) != first)
      r.fail(std::string(f) + " differs between identical runs");
    if (slurp(root / "wide" / f) != first)
      r.fail(std::string(f) + " differs across worker counts");
  }

  fs::remove_all(root);
  if (r.ok) r.detail = "10 artifacts identical across reruns and 1 vs 4 workers";
  return r;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*check)();
  };
  const Criterion criteria[] = {
      {"oracle equivalence (ego counts vs explicit ego networks)",
       oracle_equivalence},
      {"co-neighbor boundary cases", boundary_cases},
      {"association-shift reference rows", shift_table},
      {"AUC counters, sampling and class swap", auc_consistency},
      {"index invariant suite", invariant_suite},
      {"rank-metric invariance under 2x+1", rank_invariance},
      {"two-block discrimination, ego vs common neighbors",
       block_discrimination},
      {"pipeline byte determinism", pipeline_determinism},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    Outcome r;
    try {
      r = c.check();
    } catch (const std::exception& e) {
      r.fail(std::string("exception: ") + e.what());
    }
    std::cout << (r.ok ? "[PASS] " : "[FAIL] ") << c.name;
    if (!r.detail.empty()) std::cout << " -- " << r.detail;
    std::cout << '\n';
    if (!r.ok) ++failures;
  }
  return failures;
}
