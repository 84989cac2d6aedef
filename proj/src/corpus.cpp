#include "egosim/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "egosim/error.hpp"
#include "egosim/io_util.hpp"

namespace egosim {

EntityId EntityTable::intern(std::string_view name) {
  auto it = ids_.find(std::string(name));
  if (it != ids_.end()) return it->second;
  EntityId id = EntityId(names_.size());
  names_.emplace_back(name);
  ids_.emplace(names_.back(), id);
  return id;
}

std::optional<EntityId> EntityTable::find(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

const std::string& EntityTable::name(EntityId id) const {
  if (id >= names_.size())
    raise(errc::not_found, "unknown entity id " + std::to_string(id));
  return names_[id];
}

Sample::Sample(std::vector<EntityId> ids) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

bool Sample::contains(EntityId id) const {
  return std::binary_search(ids_.begin(), ids_.end(), id);
}

namespace {

void tokenize(const std::string& line, std::optional<char> delimiter,
              std::vector<std::string_view>& out) {
  out.clear();
  if (delimiter) {
    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t end = line.find(*delimiter, start);
      if (end == std::string::npos) end = line.size();
      if (end > start) out.emplace_back(line.data() + start, end - start);
      start = end + 1;
    }
  } else {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace((unsigned char)line[i])) ++i;
      std::size_t start = i;
      while (i < line.size() && !std::isspace((unsigned char)line[i])) ++i;
      if (i > start) out.emplace_back(line.data() + start, i - start);
    }
  }
}

}  // namespace

Corpus parse_records(std::istream& in, std::optional<char> delimiter) {
  Corpus corpus;
  std::string line;
  std::vector<std::string_view> tokens;
  std::vector<EntityId> ids;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    tokenize(line, delimiter, tokens);
    if (tokens.empty()) continue;
    ids.clear();
    for (std::string_view tok : tokens) ids.push_back(corpus.table.intern(tok));
    corpus.samples.emplace_back(std::move(ids));
    ids = {};
  }
  if (in.bad())
    raise(errc::io, "read failure at line " + std::to_string(line_no + 1));
  return corpus;
}

Corpus load_records(const std::string& path, std::optional<char> delimiter) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::io, "cannot open records file " + path);
  return parse_records(in, delimiter);
}

void serialize_records(const Corpus& corpus, std::ostream& out,
                       std::optional<char> delimiter) {
  char sep = delimiter.value_or(' ');
  for (const Sample& s : corpus.samples) {
    bool first = true;
    for (EntityId id : s.ids()) {
      if (!first) out.put(sep);
      out << corpus.table.name(id);
      first = false;
    }
    out.put('\n');
  }
}

std::uint32_t CorpusStats::pair_count(EntityId a, EntityId b) const {
  auto it = pair_cooccurrence.find(PairKey(a, b).packed());
  return it == pair_cooccurrence.end() ? 0 : it->second;
}

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats stats;
  stats.entity_frequency.assign(corpus.table.size(), 0);
  for (const Sample& s : corpus.samples) {
    ++stats.sample_length_hist[s.size()];
    auto ids = s.ids();
    for (std::size_t a = 0; a < ids.size(); ++a) {
      ++stats.entity_frequency[ids[a]];
      for (std::size_t b = a + 1; b < ids.size(); ++b)
        ++stats.pair_cooccurrence[PairKey(ids[a], ids[b]).packed()];
    }
  }
  for (std::uint32_t f : stats.entity_frequency)
    ++stats.entity_frequency_hist[f];
  for (const auto& [key, count] : stats.pair_cooccurrence)
    ++stats.pair_frequency_hist[count];
  return stats;
}

Corpus filter_min_frequency(const Corpus& corpus, std::uint32_t min_count) {
  std::vector<std::uint32_t> freq(corpus.table.size(), 0);
  for (const Sample& s : corpus.samples)
    for (EntityId id : s.ids()) ++freq[id];

  Corpus out;
  std::vector<EntityId> kept;
  for (const Sample& s : corpus.samples) {
    kept.clear();
    for (EntityId id : s.ids())
      if (freq[id] >= min_count)
        kept.push_back(out.table.intern(corpus.table.name(id)));
    if (!kept.empty()) out.samples.emplace_back(kept);
  }
  return out;
}

namespace {
constexpr char kCorpusMagic[8] = {'E', 'G', 'O', 'C', 'O', 'R', 'P', '1'};
}

void save_corpus(const Corpus& corpus, const std::string& path) {
  io::atomic_write(path, [&](std::ostream& out) {
    out.write(kCorpusMagic, 8);
    io::put_u64(out, corpus.table.size());
    for (std::size_t id = 0; id < corpus.table.size(); ++id) {
      const std::string& name = corpus.table.name(EntityId(id));
      io::put_u32(out, std::uint32_t(name.size()));
      out.write(name.data(), std::streamsize(name.size()));
    }
    io::put_u64(out, corpus.samples.size());
    for (const Sample& s : corpus.samples) {
      io::put_u32(out, std::uint32_t(s.size()));
      for (EntityId id : s.ids()) io::put_u32(out, id);
    }
  });
}

Corpus load_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::io, "cannot open corpus snapshot " + path);
  char magic[8];
  in.read(magic, 8);
  if (in.gcount() != 8 || !std::equal(magic, magic + 8, kCorpusMagic))
    raise(errc::io, "not a corpus snapshot: " + path);

  Corpus corpus;
  std::uint64_t entities = io::take_u64(in, "entity count");
  std::string name;
  for (std::uint64_t e = 0; e < entities; ++e) {
    std::uint32_t len = io::take_u32(in, "name length");
    name.resize(len);
    in.read(name.data(), len);
    if (std::uint32_t(in.gcount()) != len)
      raise(errc::io, "truncated entity name in " + path);
    EntityId id = corpus.table.intern(name);
    if (id != e) raise(errc::io, "duplicate entity name in " + path);
  }
  std::uint64_t samples = io::take_u64(in, "sample count");
  std::vector<EntityId> ids;
  for (std::uint64_t s = 0; s < samples; ++s) {
    std::uint32_t len = io::take_u32(in, "sample length");
    ids.clear();
    for (std::uint32_t t = 0; t < len; ++t) {
      EntityId id = io::take_u32(in, "sample entity");
      if (id >= entities) raise(errc::io, "entity id out of range in " + path);
      ids.push_back(id);
    }
    corpus.samples.emplace_back(ids);
  }
  return corpus;
}

}  // namespace egosim
