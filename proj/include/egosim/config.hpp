#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "egosim/graph.hpp"
#include "egosim/similarity.hpp"

namespace egosim {

// Everything a run needs, shared by the subcommands and serializable to a
// plain key=value file (one pair per line, '#' comments). Unknown keys are
// input errors; omitted keys keep their defaults.
struct RunConfig {
  std::string records;            // records=
  std::string delimiter = "whitespace";  // delimiter= (single char or "whitespace")
  std::uint32_t min_count = 1;    // min_count=
  std::uint32_t sample_cap = 64;  // sample_cap=
  std::vector<IndexId> indices = {IndexId::ego};  // indices=ego,cn,...
  Universe universe = Universe::cooccurring;      // universe=
  EgoMode ego_mode = EgoMode::text_faithful;      // ego_mode=
  std::vector<std::size_t> k_values = {10, 50, 100};  // k=10,50,100
  std::string labels;             // labels=
  std::string embeddings;         // embeddings=
  std::size_t cluster_nodes = 100;  // cluster_nodes=
  std::size_t cluster_edges = 200;  // cluster_edges=
  std::uint64_t seed = 42;        // seed=
  std::string out;                // out=
  unsigned threads = 1;           // threads=

  bool operator==(const RunConfig&) const = default;
};

std::string ego_mode_name(EgoMode mode);
std::optional<EgoMode> ego_mode_from_name(std::string_view name);

void save_config(const RunConfig& config, const std::string& path);
// `base` supplies the value for every key the file does not mention.
RunConfig load_config(const std::string& path, const RunConfig& base = {});

// The key=value text form (used by save_config; parse round-trips exactly).
std::string config_to_text(const RunConfig& config);
RunConfig config_from_text(const std::string& text, const std::string& origin,
                           const RunConfig& base = {});

}  // namespace egosim
