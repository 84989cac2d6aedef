#include <doctest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "egosim/error.hpp"
#include "egosim/graph.hpp"
#include "egosim/synthetic.hpp"
#include "toy.hpp"

using namespace egosim;
using namespace egosim::test;

TEST_CASE("aggregated graph carries the sample-pair counts") {
  Corpus c = toy_corpus();
  AggregatedGraph g = build_graph(c);

  CHECK(g.node_count() == 5);
  CHECK(g.edge_count() == 9);

  CHECK(g.edge_weight(A, B) == 2);
  CHECK(g.edge_weight(B, A) == 2);
  CHECK(g.edge_weight(B, C) == 2);
  CHECK(g.edge_weight(A, C) == 1);
  CHECK(g.edge_weight(C, E) == 1);
  CHECK(g.edge_weight(B, E) == 0);  // no shared sample, no edge

  CHECK(g.degree(A) == 4);
  CHECK(g.degree(B) == 3);
  CHECK(g.degree(C) == 4);
  CHECK(g.degree(D) == 4);
  CHECK(g.degree(E) == 3);

  CHECK(g.strength(A) == 5);
  CHECK(g.strength(B) == 5);
  CHECK(g.strength(C) == 5);
  CHECK(g.strength(D) == 4);
  CHECK(g.strength(E) == 3);

  // adjacency rows ascend
  auto nb = g.neighbors(A);
  CHECK(std::is_sorted(nb.begin(), nb.end()));
  CHECK(nb.size() == 4);
}

TEST_CASE("total edge weight equals the per-sample pair count") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 20; ++round) {
    Corpus c = random_corpus(rng);
    AggregatedGraph g = build_graph(c);
    std::uint64_t weight_sum = 0;
    for (EntityId i = 0; i < g.node_count(); ++i)
      for (std::uint32_t w : g.weights(i)) weight_sum += w;
    std::uint64_t pair_sum = 0;
    for (const Sample& s : c.samples)
      pair_sum += s.size() * (s.size() - 1) / 2;
    CHECK(weight_sum == 2 * pair_sum);  // each edge counted from both ends
  }
}

TEST_CASE("pair stats count joint samples and distinct third entities") {
  Corpus c = toy_corpus();
  PairStats stats = build_pair_stats(c);

  CHECK(stats.size() == 9);
  CHECK(stats.triples_processed() == 3);  // one per 3-entity sample

  CHECK(stats.cooccur_count({A, B}) == 2);
  CHECK(stats.third_entity_count({A, B}) == 2);  // c and d
  CHECK(stats.cooccur_count({A, E}) == 1);
  CHECK(stats.third_entity_count({A, E}) == 0);  // {a,e} has no one else
  CHECK(stats.cooccur_count({C, D}) == 1);
  CHECK(stats.third_entity_count({C, D}) == 1);  // e
  CHECK(stats.find({B, E}) == PairStats::npos);

  // canonical iteration order
  for (std::size_t t = 1; t < stats.size(); ++t)
    CHECK(stats.at(t - 1).key < stats.at(t).key);
}

TEST_CASE("ego co-neighbor modes differ by exactly the ego itself") {
  Corpus c = toy_corpus();
  PairStats stats = build_pair_stats(c);

  CHECK(ego_coneighbors(stats, A, B, EgoMode::text_faithful) == 3);
  CHECK(ego_coneighbors(stats, A, B, EgoMode::algorithm_literal) == 2);
  CHECK(ego_coneighbors(stats, A, E, EgoMode::text_faithful) == 1);
  CHECK(ego_coneighbors(stats, A, E, EgoMode::algorithm_literal) == 0);
  CHECK(ego_coneighbors(stats, B, E) == 0);  // never co-occur: 0 in both modes
  CHECK(ego_coneighbors(stats, E, B, EgoMode::algorithm_literal) == 0);

  // symmetric in both modes
  CHECK(ego_coneighbors(stats, B, A) == ego_coneighbors(stats, A, B));
  CHECK(ego_coneighbors(stats, E, A, EgoMode::algorithm_literal) ==
        ego_coneighbors(stats, A, E, EgoMode::algorithm_literal));

  CHECK_THROWS_AS(ego_coneighbors(stats, A, A), Error);
}

TEST_CASE("common neighbors on the toy graph") {
  Corpus c = toy_corpus();
  AggregatedGraph g = build_graph(c);
  CHECK(common_neighbors(g, A, B) == 2);  // c, d
  CHECK(common_neighbors(g, A, C) == 3);  // b, d, e
  CHECK(common_neighbors(g, B, E) == 3);  // N_b = N_e = {a,c,d}
  CHECK(common_neighbors(g, E, B) == 3);
}

TEST_CASE("ego network restricted to the ego's samples") {
  Corpus c = toy_corpus();

  AggregatedGraph ego_a = build_ego_network(c, A);
  // a's samples: {a,b,c} {a,b,d} {a,e}; b meets a, c, d there
  CHECK(ego_a.degree(B) == 3);
  CHECK(ego_a.edge_weight(B, C) == 1);
  CHECK(ego_a.edge_weight(C, D) == 0);  // c and d never share an a-sample

  AggregatedGraph ego_e = build_ego_network(c, E);
  // e's samples: {a,e} {c,d,e}; a and c are not adjacent there
  CHECK(ego_e.edge_weight(A, C) == 0);
  CHECK(ego_e.degree(A) == 1);
}

TEST_CASE("ego co-neighbor counts agree with the explicit ego network") {
  std::mt19937_64 rng(99);
  for (int round = 0; round < 30; ++round) {
    Corpus c = random_corpus(rng);
    PairStats stats = build_pair_stats(c);
    for (std::size_t t = 0; t < stats.size(); ++t) {
      auto view = stats.at(t);
      AggregatedGraph ego_net = build_ego_network(c, view.key.lo);
      CHECK(ego_coneighbors(stats, view.key.lo, view.key.hi) ==
            ego_net.degree(view.key.hi));
    }
  }
}

TEST_CASE("third entities never exceed common neighbors") {
  std::mt19937_64 rng(123);
  for (int round = 0; round < 20; ++round) {
    Corpus c = random_corpus(rng);
    AggregatedGraph g = build_graph(c);
    PairStats stats = build_pair_stats(c);
    for (std::size_t t = 0; t < stats.size(); ++t) {
      auto view = stats.at(t);
      CHECK(view.third_entities <=
            common_neighbors(g, view.key.lo, view.key.hi));
    }
  }
}

TEST_CASE("long samples trip the counter but still contribute") {
  std::ostringstream big;
  for (int t = 0; t < 100; ++t) big << 'x' << t << ' ';
  big << "\nx0 x1\n";
  std::istringstream in(big.str());
  Corpus c = parse_records(in);

  PairStats capped = build_pair_stats(c, /*sample_cap=*/64);
  PairStats uncapped = build_pair_stats(c, /*sample_cap=*/1000);
  CHECK(capped.long_sample_count() == 1);
  CHECK(uncapped.long_sample_count() == 0);
  CHECK(capped.size() == uncapped.size());
  CHECK(capped.size() == 100 * 99 / 2);
  CHECK(capped.cooccur_count({0, 1}) == 2);
}

TEST_CASE("pair stats are identical for any worker count") {
  std::mt19937_64 rng(5);
  Corpus c = random_corpus(rng, {.max_entities = 40, .max_samples = 400});
  PairStats one = build_pair_stats(c, 64, 1);
  PairStats four = build_pair_stats(c, 64, 4);
  REQUIRE(one.size() == four.size());
  for (std::size_t t = 0; t < one.size(); ++t) {
    CHECK(one.at(t).key == four.at(t).key);
    CHECK(one.at(t).cooccur == four.at(t).cooccur);
    CHECK(one.at(t).third_entities == four.at(t).third_entities);
  }
  CHECK(one.triples_processed() == four.triples_processed());
}

TEST_CASE("graph and pair-stat snapshots round-trip") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "egosim_graph_test";
  fs::create_directories(dir);

  Corpus c = toy_corpus();
  AggregatedGraph g = build_graph(c);
  PairStats stats = build_pair_stats(c);

  save_graph(g, (dir / "graph.bin").string());
  AggregatedGraph g2 = load_graph((dir / "graph.bin").string());
  CHECK(g2.node_count() == g.node_count());
  CHECK(g2.edge_count() == g.edge_count());
  for (EntityId i = 0; i < g.node_count(); ++i) {
    CHECK(g2.degree(i) == g.degree(i));
    CHECK(g2.strength(i) == g.strength(i));
  }
  CHECK(g2.edge_weight(A, B) == 2);

  save_pair_stats(stats, (dir / "stats.bin").string());
  PairStats s2 = load_pair_stats((dir / "stats.bin").string());
  REQUIRE(s2.size() == stats.size());
  for (std::size_t t = 0; t < stats.size(); ++t) {
    CHECK(s2.at(t).key == stats.at(t).key);
    CHECK(s2.at(t).cooccur == stats.at(t).cooccur);
    CHECK(s2.at(t).third_entities == stats.at(t).third_entities);
  }
  CHECK(s2.triples_processed() == stats.triples_processed());

  CHECK_THROWS_AS(load_graph((dir / "stats.bin").string()), Error);
  fs::remove_all(dir);
}
