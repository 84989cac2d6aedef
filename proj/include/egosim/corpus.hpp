#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "egosim/types.hpp"

namespace egosim {

// Bidirectional name <-> dense id mapping. Ids are assigned in first-seen
// order and stay stable for the table's lifetime.
class EntityTable {
 public:
  EntityId intern(std::string_view name);
  std::optional<EntityId> find(std::string_view name) const;
  const std::string& name(EntityId id) const;  // not_found on bad id
  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, EntityId> ids_;
};

// One record's distinct entities, ascending by id.
class Sample {
 public:
  Sample() = default;
  explicit Sample(std::vector<EntityId> ids);  // sorts and de-duplicates

  std::span<const EntityId> ids() const { return ids_; }
  std::size_t size() const { return ids_.size(); }
  bool contains(EntityId id) const;

  friend bool operator==(const Sample&, const Sample&) = default;

 private:
  std::vector<EntityId> ids_;
};

struct Corpus {
  EntityTable table;
  std::vector<Sample> samples;
};

// Tokens are split on runs of whitespace by default, or on a single
// delimiter character; empty tokens are skipped either way. Duplicate tokens
// within a line collapse (samples are sets); lines with no tokens are
// skipped. Bytes are treated opaquely, so UTF-8 names pass through.
Corpus parse_records(std::istream& in, std::optional<char> delimiter = {});
Corpus load_records(const std::string& path, std::optional<char> delimiter = {});

// Canonical text form: one sample per line, entities ascending by id,
// joined by the delimiter (space in whitespace mode). Feeding the result
// back through parse_records reproduces the corpus exactly.
void serialize_records(const Corpus& corpus, std::ostream& out,
                       std::optional<char> delimiter = {});

struct CorpusStats {
  std::map<std::size_t, std::size_t> sample_length_hist;   // length -> samples
  std::vector<std::uint32_t> entity_frequency;             // id -> samples
  std::map<std::uint32_t, std::size_t> entity_frequency_hist;
  std::map<std::uint64_t, std::uint32_t> pair_cooccurrence;  // packed -> count
  std::map<std::uint32_t, std::size_t> pair_frequency_hist;

  std::uint32_t pair_count(EntityId a, EntityId b) const;
};

CorpusStats corpus_stats(const Corpus& corpus);

// Drops entities present in fewer than min_count samples, then drops samples
// that became empty and re-interns the survivors densely (first-seen order,
// names preserved). Retained frequencies are unchanged by the pass, so the
// operation is idempotent at the same threshold.
Corpus filter_min_frequency(const Corpus& corpus, std::uint32_t min_count);

// Binary snapshot (little-endian, magic + version header). Byte-stable for a
// given corpus.
void save_corpus(const Corpus& corpus, const std::string& path);
Corpus load_corpus(const std::string& path);

}  // namespace egosim
