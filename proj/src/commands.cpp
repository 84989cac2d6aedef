#include "egosim/commands.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "egosim/clustering.hpp"
#include "egosim/config.hpp"
#include "egosim/corpus.hpp"
#include "egosim/error.hpp"
#include "egosim/evaluation.hpp"
#include "egosim/graph.hpp"
#include "egosim/io_util.hpp"
#include "egosim/kernels.hpp"
#include "egosim/similarity.hpp"

namespace fs = std::filesystem;

namespace egosim::cli {
namespace {

constexpr int kOk = 0;
constexpr int kUnexpected = 1;
constexpr int kInputError = 2;
constexpr int kComputeError = 3;

int code_for(const Error& e) {
  switch (e.code()) {
    case errc::io:
    case errc::invalid_input:
    case errc::not_found:
      return kInputError;
    case errc::invalid_pair:
    case errc::undefined_value:
      return kComputeError;
  }
  return kUnexpected;
}

// ------------------------------------------------------------
// option plumbing
// ------------------------------------------------------------

// One mutable config per subcommand; flags write straight into it, and when
// --config is present the file supplies every field the command line left
// untouched.
struct ConfigBinding {
  RunConfig cfg;
  std::string config_path;
  std::vector<std::string> index_names;
  bool no_simd = false;

  void add_common(CLI::App* cmd) {
    cmd->add_option("--config", config_path,
                    "key=value file supplying defaults for omitted flags");
    cmd->add_flag("--no-simd", no_simd, "force the scalar kernel variant");
    cmd->add_option("--threads", cfg.threads, "worker threads (default 1)");
    cmd->add_option("--out", cfg.out, "output directory");
    cmd->add_option("--seed", cfg.seed, "seed for randomized steps");
  }

  void finalize(CLI::App* cmd) {
    if (!index_names.empty()) {
      cfg.indices.clear();
      for (const std::string& name : index_names) {
        auto id = index_from_name(name);
        if (!id) raise(errc::invalid_input, "unknown index '" + name + "'");
        cfg.indices.push_back(*id);
      }
    }
    if (!config_path.empty()) {
      // Missing keys inherit the subcommand's defaults (cfg before flags is
      // those defaults; keep() puts flag values back on top afterwards).
      RunConfig file = load_config(config_path, cfg);
      auto keep = [&](const std::string& flag) {
        const CLI::Option* opt = cmd->get_option_no_throw(flag);
        return opt != nullptr && opt->count() > 0;
      };
      RunConfig merged = file;
      if (keep("--records")) merged.records = cfg.records;
      if (keep("--delim")) merged.delimiter = cfg.delimiter;
      if (keep("--min-count")) merged.min_count = cfg.min_count;
      if (keep("--sample-cap")) merged.sample_cap = cfg.sample_cap;
      if (keep("--index")) merged.indices = cfg.indices;
      if (keep("--universe")) merged.universe = cfg.universe;
      if (keep("--ego-mode")) merged.ego_mode = cfg.ego_mode;
      if (keep("--k")) merged.k_values = cfg.k_values;
      if (keep("--labels")) merged.labels = cfg.labels;
      if (keep("--embeddings")) merged.embeddings = cfg.embeddings;
      if (keep("--top-nodes")) merged.cluster_nodes = cfg.cluster_nodes;
      if (keep("--top-edges")) merged.cluster_edges = cfg.cluster_edges;
      if (keep("--seed")) merged.seed = cfg.seed;
      if (keep("--out")) merged.out = cfg.out;
      if (keep("--threads")) merged.threads = cfg.threads;
      cfg = merged;
    }
    if (no_simd) kernels::override_active(&kernels::scalar());
  }
};

std::optional<char> delimiter_of(const RunConfig& cfg) {
  if (cfg.delimiter == "whitespace") return std::nullopt;
  if (cfg.delimiter.size() != 1)
    raise(errc::invalid_input,
          "delimiter must be a single character or 'whitespace'");
  return cfg.delimiter[0];
}

void need_out(const RunConfig& cfg) {
  if (cfg.out.empty()) raise(errc::invalid_input, "missing --out directory");
  fs::create_directories(cfg.out);
}

std::string out_path(const RunConfig& cfg, const std::string& file) {
  return (fs::path(cfg.out) / file).string();
}

// ------------------------------------------------------------
// snapshots and score tables
// ------------------------------------------------------------

struct Snapshots {
  Corpus corpus;
  AggregatedGraph graph;
  PairStats stats;
};

Snapshots load_snapshots(const std::string& dir) {
  if (dir.empty()) raise(errc::invalid_input, "missing --snapshots directory");
  Snapshots snap;
  snap.corpus = load_corpus((fs::path(dir) / "corpus.bin").string());
  snap.graph = load_graph((fs::path(dir) / "graph.bin").string());
  snap.stats = load_pair_stats((fs::path(dir) / "pairstats.bin").string());
  return snap;
}

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

double parse_double(const std::string& text, const std::string& loc) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    raise(errc::io, "bad score '" + text + "' at " + loc);
  return v;
}

ScoreTable read_score_tsv(const std::string& path, const EntityTable& table) {
  std::ifstream in(path);
  if (!in) raise(errc::io, "cannot open score table " + path);
  std::vector<std::pair<PairKey, double>> rows;
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
    if (!i) raise(errc::invalid_input, "unknown entity '" + fields[0] + "' at " + loc);
    if (!j) raise(errc::invalid_input, "unknown entity '" + fields[1] + "' at " + loc);
    if (*i == *j) raise(errc::invalid_input, "self pair at " + loc);
    rows.emplace_back(PairKey(*i, *j), parse_double(fields[2], loc));
  }
  if (in.bad()) raise(errc::io, "read failure on " + path);

  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  ScoreTable out;
  for (std::size_t t = 0; t < rows.size(); ++t) {
    if (t > 0 && rows[t].first == rows[t - 1].first)
      raise(errc::invalid_input, "duplicate pair in " + path);
    out.pairs.push_back(rows[t].first);
    out.scores.push_back(rows[t].second);
  }
  return out;
}

void write_score_tsv(const std::string& path, const ScoreTable& table,
                     const EntityTable& names, bool by_score) {
  io::atomic_write(path, [&](std::ostream& out) {
    auto emit = [&](PairKey key, double score) {
      out << names.name(key.lo) << '\t' << names.name(key.hi) << '\t'
          << io::fmt_double(score) << '\n';
    };
    if (by_score) {
      RankedPairs ranked = rank_pairs(table);
      for (const auto& [key, score] : ranked.items) emit(key, score);
    } else {
      for (std::size_t t = 0; t < table.pairs.size(); ++t)
        emit(table.pairs[t], table.scores[t]);
    }
  });
}

void write_histogram(const std::string& path, const Histogram& h) {
  io::atomic_write(path, [&](std::ostream& out) {
    for (const HistogramBin& bin : h.bins)
      out << io::fmt_double(bin.lo) << '\t' << io::fmt_double(bin.hi) << '\t'
          << bin.count << '\n';
  });
}

ScoreTable compute_index_table(IndexId index, const Snapshots& snap,
                               const RunConfig& cfg) {
  ScoreOptions opts;
  opts.universe = cfg.universe;
  opts.ego_mode = cfg.ego_mode;
  opts.threads = cfg.threads;
  std::optional<EmbeddingTable> embeddings;
  if (index == IndexId::embed_cosine) {
    if (cfg.embeddings.empty())
      raise(errc::invalid_input, "embed-cosine needs --embeddings");
    embeddings = EmbeddingTable::load(cfg.embeddings);
  }
  return score_all_pairs(index, snap.corpus, snap.graph, snap.stats,
                         embeddings ? &*embeddings : nullptr, opts);
}

// ------------------------------------------------------------
// build
// ------------------------------------------------------------

int cmd_build(const RunConfig& cfg, bool force, const std::string& dump_pairs,
              std::ostream& out, std::ostream& err) {
  if (cfg.records.empty()) raise(errc::invalid_input, "missing --records");
  need_out(cfg);

  std::string corpus_path = out_path(cfg, "corpus.bin");
  std::string graph_path = out_path(cfg, "graph.bin");
  std::string stats_path = out_path(cfg, "pairstats.bin");
  for (const std::string& p : {corpus_path, graph_path, stats_path}) {
    if (!force && fs::exists(p))
      raise(errc::invalid_input, p + " exists; pass --force to rebuild");
  }

  Corpus corpus = load_records(cfg.records, delimiter_of(cfg));
  if (cfg.min_count > 1) corpus = filter_min_frequency(corpus, cfg.min_count);
  if (corpus.samples.empty())
    raise(errc::invalid_input, "no usable samples in " + cfg.records);
  AggregatedGraph graph = build_graph(corpus);
  PairStats stats = build_pair_stats(corpus, cfg.sample_cap, cfg.threads);

  if (stats.long_sample_count() > 0)
    err << "warning: " << stats.long_sample_count()
        << " samples exceed the length cap of " << cfg.sample_cap
        << " (processed anyway)\n";

  save_corpus(corpus, corpus_path);
  save_graph(graph, graph_path);
  save_pair_stats(stats, stats_path);

  if (!dump_pairs.empty()) {
    io::atomic_write(dump_pairs, [&](std::ostream& tsv) {
      for (std::size_t t = 0; t < stats.size(); ++t) {
        auto view = stats.at(t);
        tsv << corpus.table.name(view.key.lo) << '\t'
            << corpus.table.name(view.key.hi) << '\t' << view.cooccur << '\t'
            << view.third_entities << '\n';
      }
    });
  }

  out << "entities=" << corpus.table.size() << " samples="
      << corpus.samples.size() << " edges=" << graph.edge_count()
      << " triples=" << stats.triples_processed() << '\n';
  return kOk;
}

// ------------------------------------------------------------
// sim
// ------------------------------------------------------------

int cmd_sim(const RunConfig& cfg, const std::string& snapshots, bool by_score,
            std::ostream& out, std::ostream& err) {
  need_out(cfg);
  Snapshots snap = load_snapshots(snapshots);
  for (IndexId index : cfg.indices) {
    ScoreTable table = compute_index_table(index, snap, cfg);
    if (index == IndexId::embed_cosine && table.omitted > 0)
      err << "warning: embeddings missing for " << table.omitted
          << " pairs (omitted from embed-cosine.tsv)\n";
    std::string file = std::string(index_name(index)) + ".tsv";
    write_score_tsv(out_path(cfg, file), table, snap.corpus.table, by_score);
    out << "index=" << index_name(index) << " universe="
        << universe_name(cfg.universe) << " pairs=" << table.pairs.size()
        << " omitted=" << table.omitted << '\n';
  }
  return kOk;
}

// ------------------------------------------------------------
// compare
// ------------------------------------------------------------

int cmd_compare(const RunConfig& cfg, const std::string& snapshots,
                const std::vector<std::string>& table_files,
                const std::string& entity, std::ostream& out,
                std::ostream& err) {
  if (table_files.size() < 2)
    raise(errc::invalid_input, "compare needs at least two --tables files");
  need_out(cfg);
  Snapshots snap = load_snapshots(snapshots);

  std::vector<ScoreTable> tables;
  std::vector<std::string> names;
  for (const std::string& file : table_files) {
    tables.push_back(read_score_tsv(file, snap.corpus.table));
    names.push_back(fs::path(file).stem().string());
  }

  std::vector<const ScoreTable*> ptrs;
  for (const ScoreTable& t : tables) ptrs.push_back(&t);
  CorrelationMatrix matrix = index_correlation_matrix(ptrs);

  io::atomic_write(out_path(cfg, "correlation_matrix.tsv"), [&](std::ostream& tsv) {
    tsv << "index";
    for (const std::string& n : names) tsv << '\t' << n;
    tsv << '\n';
    for (std::size_t a = 0; a < names.size(); ++a) {
      tsv << names[a];
      for (std::size_t b = 0; b < names.size(); ++b)
        tsv << '\t' << io::fmt_double(matrix.values[a][b]);
      tsv << '\n';
    }
  });

  std::vector<RankedPairs> ranked;
  ranked.reserve(tables.size());
  for (const ScoreTable& t : tables) ranked.push_back(rank_pairs(t));

  io::atomic_write(out_path(cfg, "topk_overlap.tsv"), [&](std::ostream& tsv) {
    for (std::size_t k : cfg.k_values) {
      bool valid = true;
      for (const RankedPairs& r : ranked)
        if (k < 1 || k > r.items.size()) valid = false;
      if (!valid) {
        err << "warning: skipping k=" << k
            << " (exceeds a ranked list's length)\n";
        continue;
      }
      for (std::size_t a = 0; a < ranked.size(); ++a)
        for (std::size_t b = a + 1; b < ranked.size(); ++b)
          tsv << k << '\t' << names[a] << '\t' << names[b] << '\t'
              << io::fmt_double(topk_overlap(ranked[a], ranked[b], k)) << '\n';
    }
  });

  if (!entity.empty()) {
    auto id = snap.corpus.table.find(entity);
    if (!id) raise(errc::not_found, "unknown entity '" + entity + "'");
    std::size_t kmax = 1;
    for (std::size_t k : cfg.k_values) kmax = std::max(kmax, k);

    std::vector<NeighborList> lists;
    for (std::size_t t = 0; t < tables.size(); ++t) {
      NeighborList nl = topk_neighbors(tables[t], *id, kmax);
      if (nl.truncated)
        err << "warning: " << names[t] << " ranks only "
            << nl.ranked.items.size() << " partners of '" << entity << "'\n";
      io::atomic_write(out_path(cfg, "neighbors_" + names[t] + ".tsv"),
                       [&](std::ostream& tsv) {
                         std::size_t rank = 0;
                         for (const auto& [partner, score] : nl.ranked.items)
                           tsv << ++rank << '\t'
                               << snap.corpus.table.name(partner) << '\t'
                               << io::fmt_double(score) << '\n';
                       });
      lists.push_back(std::move(nl));
    }
    io::atomic_write(out_path(cfg, "entity_topk_overlap.tsv"),
                     [&](std::ostream& tsv) {
                       for (std::size_t k : cfg.k_values) {
                         bool valid = k >= 1;
                         for (const NeighborList& nl : lists)
                           if (k > nl.ranked.items.size()) valid = false;
                         if (!valid) continue;
                         for (std::size_t a = 0; a < lists.size(); ++a)
                           for (std::size_t b = a + 1; b < lists.size(); ++b)
                             tsv << k << '\t' << names[a] << '\t' << names[b]
                                 << '\t'
                                 << io::fmt_double(topk_overlap(
                                        lists[a].ranked, lists[b].ranked, k))
                                 << '\n';
                       }
                     });
  }

  out << "tables=" << tables.size() << " common_pairs=" << matrix.common_pairs
      << '\n';
  return kOk;
}

// ------------------------------------------------------------
// eval
// ------------------------------------------------------------

int cmd_eval(const RunConfig& cfg, const std::string& snapshots,
             const std::string& scores_file, std::size_t prefix_labels,
             std::size_t label_pos, std::size_t label_neg,
             const std::string& labels_out, const std::string& auc_mode,
             std::uint64_t auc_samples, std::ostream& out, std::ostream& err) {
  need_out(cfg);
  Snapshots snap = load_snapshots(snapshots);

  ScoreTable table =
      scores_file.empty()
          ? compute_index_table(cfg.indices.front(), snap, cfg)
          : read_score_tsv(scores_file, snap.corpus.table);

  if (!cfg.labels.empty() && prefix_labels > 0)
    raise(errc::invalid_input, "--labels and --prefix-labels are exclusive");
  LabeledPairSet labels;
  if (!cfg.labels.empty()) {
    labels = load_labels(cfg.labels, snap.corpus.table);
  } else if (prefix_labels > 0) {
    labels = generate_prefix_labels(snap.corpus, snap.graph, prefix_labels,
                                    label_pos, label_neg, cfg.seed);
  } else {
    raise(errc::invalid_input, "eval needs --labels or --prefix-labels");
  }
  if (!labels_out.empty()) save_labels(labels, snap.corpus.table, labels_out);

  std::size_t unscored = 0;
  io::atomic_write(out_path(cfg, "precision.tsv"), [&](std::ostream& tsv) {
    for (std::size_t k : cfg.k_values) {
      if (k < 1 || k > labels.pairs.size()) {
        err << "warning: skipping k=" << k << " (only "
            << labels.pairs.size() << " labeled pairs)\n";
        continue;
      }
      tsv << k << '\t'
          << io::fmt_double(precision_at_k(table, labels, k, &unscored))
          << '\n';
    }
  });

  AucResult auc;
  if (auc_mode == "exact") {
    auc = auc_exact(table, labels, &unscored);
  } else if (auc_mode == "sampled") {
    auc = auc_sampled(table, labels, auc_samples, cfg.seed, &unscored);
  } else {
    raise(errc::invalid_input, "--auc must be 'exact' or 'sampled'");
  }
  io::atomic_write(out_path(cfg, "auc.tsv"), [&](std::ostream& tsv) {
    tsv << (auc.sampled ? "sampled" : "exact") << '\t'
        << io::fmt_double(auc.value) << '\t' << auc.comparisons << '\t'
        << auc.wins << '\t' << auc.ties << '\n';
  });

  if (unscored > 0)
    err << "warning: " << unscored
        << " labeled pairs had no score and were ranked at 0\n";
  out << "labeled=" << labels.pairs.size() << " positives="
      << labels.positives << " auc=" << io::fmt_double(auc.value)
      << " unscored_labeled=" << unscored << '\n';
  return kOk;
}

// ------------------------------------------------------------
// shift
// ------------------------------------------------------------

int cmd_shift(const RunConfig& cfg, const std::string& snapshots,
              const std::vector<std::string>& query, std::size_t bins,
              std::uint64_t sample_triples, std::ostream& out,
              std::ostream&) {
  Snapshots snap = load_snapshots(snapshots);
  EgoMode mode = cfg.ego_mode;

  if (!query.empty()) {
    if (query.size() != 3)
      raise(errc::invalid_input, "--query needs exactly three entity names");
    EntityId ids[3];
    for (int t = 0; t < 3; ++t) {
      auto id = snap.corpus.table.find(query[t]);
      if (!id) raise(errc::not_found, "unknown entity '" + query[t] + "'");
      ids[t] = *id;
    }
    ShiftResult r =
        association_shift(snap.graph, snap.stats, ids[0], ids[1], ids[2], mode);
    out << "r1=" << io::fmt_double(r.r1) << " r2=" << io::fmt_double(r.r2)
        << " ratio=" << io::fmt_double(r.ratio)
        << " diff=" << io::fmt_double(r.diff) << '\n';
    return kOk;
  }

  need_out(cfg);
  ShiftSweepOptions opts;
  opts.mode = mode;
  opts.bins = bins;
  opts.sample_triples = sample_triples;
  opts.seed = cfg.seed;
  opts.threads = cfg.threads;
  ShiftHistograms h = shift_histograms(snap.graph, snap.stats, opts);

  write_histogram(out_path(cfg, "pair_ratio_hist.tsv"), h.pair_ratio);
  write_histogram(out_path(cfg, "shift_ratio_hist.tsv"), h.shift_ratio);
  write_histogram(out_path(cfg, "shift_diff_hist.tsv"), h.shift_diff);

  out << "triples_scanned=" << h.triples_scanned << " triples_skipped="
      << h.triples_skipped << " pairs_skipped=" << h.pairs_skipped << '\n';
  return kOk;
}

// ------------------------------------------------------------
// cluster
// ------------------------------------------------------------

int cmd_cluster(const RunConfig& cfg, const std::string& snapshots,
                const std::string& scores_file, std::ostream& out,
                std::ostream&) {
  need_out(cfg);
  Snapshots snap = load_snapshots(snapshots);

  ScoreTable table =
      scores_file.empty()
          ? compute_index_table(cfg.indices.front(), snap, cfg)
          : read_score_tsv(scores_file, snap.corpus.table);

  std::vector<EntityId> nodes =
      select_top_degree(snap.graph, cfg.cluster_nodes);
  std::vector<ScoredEdge> edges =
      retain_top_edges(nodes, table, cfg.cluster_edges);
  ClusterReport report = cluster(nodes, edges);

  io::atomic_write(out_path(cfg, "groups.tsv"), [&](std::ostream& tsv) {
    for (std::size_t g = 0; g < report.groups.size(); ++g)
      for (EntityId id : report.groups[g])
        tsv << (g + 1) << '\t' << snap.corpus.table.name(id) << '\n';
  });
  io::atomic_write(out_path(cfg, "isolated.tsv"), [&](std::ostream& tsv) {
    for (EntityId id : report.isolated)
      tsv << snap.corpus.table.name(id) << '\n';
  });
  io::atomic_write(out_path(cfg, "merges.tsv"), [&](std::ostream& tsv) {
    for (const MergeStep& m : report.merges) {
      tsv << m.rank << '\t' << snap.corpus.table.name(m.edge.lo) << '\t'
          << snap.corpus.table.name(m.edge.hi) << '\t'
          << io::fmt_double(m.score) << '\t'
          << snap.corpus.table.name(m.group_a) << '\t'
          << snap.corpus.table.name(m.group_b) << '\n';
    }
  });

  out << "nodes=" << nodes.size() << " edges_retained=" << edges.size()
      << " groups=" << report.groups.size() << " isolated="
      << report.isolated.size() << " merges=" << report.merges.size() << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run(int(argv.size()), argv.data(), out, err);
}

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"co-occurrence similarity toolkit"};
  app.require_subcommand(1);

  // ---- build ----
  ConfigBinding build_bind;
  bool build_force = false;
  std::string build_dump;
  CLI::App* build = app.add_subcommand(
      "build", "parse records and write corpus/graph/pair-stat snapshots");
  build->add_option("--records", build_bind.cfg.records, "input records file");
  build->add_option("--delim", build_bind.cfg.delimiter,
                    "field delimiter (single char, default whitespace runs)");
  build->add_option("--min-count", build_bind.cfg.min_count,
                    "drop entities seen in fewer samples (default 1 = keep all)");
  build->add_option("--sample-cap", build_bind.cfg.sample_cap,
                    "warn when a sample exceeds this many entities");
  build->add_flag("--force", build_force, "overwrite existing snapshots");
  build->add_option("--dump-pairs", build_dump,
                    "also write pair statistics as TSV to this path");
  build_bind.add_common(build);

  // ---- sim ----
  ConfigBinding sim_bind;
  std::string sim_snapshots;
  std::string sim_sort = "key";
  CLI::App* sim = app.add_subcommand("sim", "score pairs with one or more indices");
  sim->add_option("--snapshots", sim_snapshots, "directory written by build");
  sim->add_option("--index", sim_bind.index_names, "indices to compute")
      ->delimiter(',');
  sim->add_option("--universe", sim_bind.cfg.universe,
                  "pair universe: cooccurring|shared-neighbor|all")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Universe>{
              {"cooccurring", Universe::cooccurring},
              {"shared-neighbor", Universe::shared_neighbor},
              {"all", Universe::all}},
          CLI::ignore_case));
  sim->add_option("--ego-mode", sim_bind.cfg.ego_mode,
                  "text-faithful|algorithm-literal")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, EgoMode>{
              {"text-faithful", EgoMode::text_faithful},
              {"algorithm-literal", EgoMode::algorithm_literal}},
          CLI::ignore_case));
  sim->add_option("--embeddings", sim_bind.cfg.embeddings,
                  "vectors for embed-cosine");
  sim->add_option("--sort", sim_sort, "row order: key|score");
  sim_bind.add_common(sim);

  // ---- compare ----
  ConfigBinding cmp_bind;
  std::string cmp_snapshots;
  std::vector<std::string> cmp_tables;
  std::string cmp_entity;
  CLI::App* compare = app.add_subcommand(
      "compare", "correlations and top-k overlap between score tables");
  compare->add_option("--snapshots", cmp_snapshots, "directory written by build");
  compare->add_option("--tables", cmp_tables, "score table TSVs (two or more)");
  compare->add_option("--entity", cmp_entity,
                      "also rank this entity's partners per table");
  compare->add_option("--k", cmp_bind.cfg.k_values, "overlap depths")
      ->delimiter(',');
  cmp_bind.add_common(compare);

  // ---- eval ----
  ConfigBinding eval_bind;
  std::string eval_snapshots, eval_scores, eval_labels_out;
  std::size_t eval_prefix = 0, eval_pos = 1000, eval_neg = 1000;
  std::string eval_auc = "exact";
  std::uint64_t eval_auc_samples = 100000;
  CLI::App* eval = app.add_subcommand(
      "eval", "precision@k and AUC of a score table against labels");
  eval->add_option("--snapshots", eval_snapshots, "directory written by build");
  eval->add_option("--scores", eval_scores,
                   "score table TSV (default: compute --index)");
  eval->add_option("--index", eval_bind.index_names,
                   "index to compute when --scores is absent")
      ->delimiter(',');
  eval->add_option("--universe", eval_bind.cfg.universe, "pair universe")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Universe>{
              {"cooccurring", Universe::cooccurring},
              {"shared-neighbor", Universe::shared_neighbor},
              {"all", Universe::all}},
          CLI::ignore_case));
  eval->add_option("--ego-mode", eval_bind.cfg.ego_mode,
                   "text-faithful|algorithm-literal")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, EgoMode>{
              {"text-faithful", EgoMode::text_faithful},
              {"algorithm-literal", EgoMode::algorithm_literal}},
          CLI::ignore_case));
  eval->add_option("--labels", eval_bind.cfg.labels, "labeled pairs TSV");
  eval->add_option("--prefix-labels", eval_prefix,
                   "generate labels from name prefixes of this length");
  eval->add_option("--label-pos", eval_pos, "positive labels to generate");
  eval->add_option("--label-neg", eval_neg, "negative labels to generate");
  eval->add_option("--labels-out", eval_labels_out,
                   "write the labels that were used");
  eval->add_option("--embeddings", eval_bind.cfg.embeddings,
                   "vectors for embed-cosine");
  eval->add_option("--k", eval_bind.cfg.k_values, "precision depths")
      ->delimiter(',');
  eval->add_option("--auc", eval_auc, "exact|sampled");
  eval->add_option("--auc-samples", eval_auc_samples,
                   "comparisons to draw in sampled mode");
  eval_bind.add_common(eval);

  // ---- shift ----
  ConfigBinding shift_bind;
  std::string shift_snapshots;
  std::vector<std::string> shift_query;
  std::size_t shift_bins = 50;
  std::uint64_t shift_samples = 0;
  CLI::App* shift = app.add_subcommand(
      "shift", "association-shift ratios over co-occurring triples");
  shift->add_option("--snapshots", shift_snapshots, "directory written by build");
  shift->add_option("--query", shift_query,
                    "three entity names: context, target i, target j")
      ->expected(3);
  shift->add_option("--bins", shift_bins, "histogram bins");
  shift->add_option("--sample-triples", shift_samples,
                    "sample this many triples instead of sweeping all");
  shift->add_option("--ego-mode", shift_bind.cfg.ego_mode,
                    "text-faithful|algorithm-literal (default literal)")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, EgoMode>{
              {"text-faithful", EgoMode::text_faithful},
              {"algorithm-literal", EgoMode::algorithm_literal}},
          CLI::ignore_case));
  shift_bind.cfg.ego_mode = EgoMode::algorithm_literal;
  shift_bind.add_common(shift);

  // ---- cluster ----
  ConfigBinding cl_bind;
  std::string cl_snapshots, cl_scores;
  CLI::App* cl = app.add_subcommand(
      "cluster", "group the densest entities by their best-scoring pairs");
  cl->add_option("--snapshots", cl_snapshots, "directory written by build");
  cl->add_option("--scores", cl_scores,
                 "score table TSV (default: compute --index)");
  cl->add_option("--index", cl_bind.index_names,
                 "index to compute when --scores is absent")
      ->delimiter(',');
  cl->add_option("--universe", cl_bind.cfg.universe, "pair universe")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Universe>{
              {"cooccurring", Universe::cooccurring},
              {"shared-neighbor", Universe::shared_neighbor},
              {"all", Universe::all}},
          CLI::ignore_case));
  cl->add_option("--ego-mode", cl_bind.cfg.ego_mode,
                 "text-faithful|algorithm-literal")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, EgoMode>{
              {"text-faithful", EgoMode::text_faithful},
              {"algorithm-literal", EgoMode::algorithm_literal}},
          CLI::ignore_case));
  cl->add_option("--embeddings", cl_bind.cfg.embeddings,
                 "vectors for embed-cosine");
  cl->add_option("--top-nodes", cl_bind.cfg.cluster_nodes,
                 "keep this many highest-degree nodes");
  cl->add_option("--top-edges", cl_bind.cfg.cluster_edges,
                 "keep this many best-scoring pairs");
  cl_bind.add_common(cl);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (build->parsed()) {
      build_bind.finalize(build);
      return cmd_build(build_bind.cfg, build_force, build_dump, out, err);
    }
    if (sim->parsed()) {
      sim_bind.finalize(sim);
      if (sim_sort != "key" && sim_sort != "score")
        raise(errc::invalid_input, "--sort must be 'key' or 'score'");
      return cmd_sim(sim_bind.cfg, sim_snapshots, sim_sort == "score", out, err);
    }
    if (compare->parsed()) {
      cmp_bind.finalize(compare);
      return cmd_compare(cmp_bind.cfg, cmp_snapshots, cmp_tables, cmp_entity,
                         out, err);
    }
    if (eval->parsed()) {
      eval_bind.finalize(eval);
      if (!eval_scores.empty() && eval->count("--index") > 0)
        raise(errc::invalid_input, "--scores and --index are exclusive");
      return cmd_eval(eval_bind.cfg, eval_snapshots, eval_scores, eval_prefix,
                      eval_pos, eval_neg, eval_labels_out, eval_auc,
                      eval_auc_samples, out, err);
    }
    if (shift->parsed()) {
      shift_bind.finalize(shift);
      return cmd_shift(shift_bind.cfg, shift_snapshots, shift_query,
                       shift_bins, shift_samples, out, err);
    }
    if (cl->parsed()) {
      cl_bind.finalize(cl);
      if (!cl_scores.empty() && cl->count("--index") > 0)
        raise(errc::invalid_input, "--scores and --index are exclusive");
      return cmd_cluster(cl_bind.cfg, cl_snapshots, cl_scores, out, err);
    }
    raise(errc::invalid_input, "no subcommand given");
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return code_for(e);
  } catch (const std::exception& e) {
    err << "unexpected error: " << e.what() << '\n';
    return kUnexpected;
  }
  return kUnexpected;
}

}  // namespace egosim::cli
