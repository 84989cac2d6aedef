#include "egosim/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "egosim/error.hpp"
#include "egosim/io_util.hpp"

namespace egosim {

std::string ego_mode_name(EgoMode mode) {
  return mode == EgoMode::text_faithful ? "text-faithful" : "algorithm-literal";
}

std::optional<EgoMode> ego_mode_from_name(std::string_view name) {
  if (name == "text-faithful") return EgoMode::text_faithful;
  if (name == "algorithm-literal") return EgoMode::algorithm_literal;
  return std::nullopt;
}

namespace {

template <typename T>
T parse_number(const std::string& value, const std::string& key) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    raise(errc::invalid_input, "bad number '" + value + "' for key " + key);
  return out;
}

std::vector<std::string> split_commas(const std::string& value) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= value.size()) {
    std::size_t end = value.find(',', start);
    if (end == std::string::npos) end = value.size();
    if (end > start) parts.push_back(value.substr(start, end - start));
    start = end + 1;
  }
  return parts;
}

}  // namespace

std::string config_to_text(const RunConfig& c) {
  std::ostringstream out;
  out << "records=" << c.records << '\n';
  out << "delimiter=" << c.delimiter << '\n';
  out << "min_count=" << c.min_count << '\n';
  out << "sample_cap=" << c.sample_cap << '\n';
  out << "indices=";
  for (std::size_t t = 0; t < c.indices.size(); ++t)
    out << (t ? "," : "") << index_name(c.indices[t]);
  out << '\n';
  out << "universe=" << universe_name(c.universe) << '\n';
  out << "ego_mode=" << ego_mode_name(c.ego_mode) << '\n';
  out << "k=";
  for (std::size_t t = 0; t < c.k_values.size(); ++t)
    out << (t ? "," : "") << c.k_values[t];
  out << '\n';
  out << "labels=" << c.labels << '\n';
  out << "embeddings=" << c.embeddings << '\n';
  out << "cluster_nodes=" << c.cluster_nodes << '\n';
  out << "cluster_edges=" << c.cluster_edges << '\n';
  out << "seed=" << c.seed << '\n';
  out << "out=" << c.out << '\n';
  out << "threads=" << c.threads << '\n';
  return out.str();
}

RunConfig config_from_text(const std::string& text, const std::string& origin,
                           const RunConfig& base) {
  RunConfig c = base;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto loc = origin + ":" + std::to_string(line_no);
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      raise(errc::invalid_input, "expected key=value at " + loc);
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);

    if (key == "records") {
      c.records = value;
    } else if (key == "delimiter") {
      if (value != "whitespace" && value.size() != 1)
        raise(errc::invalid_input,
              "delimiter must be one character or 'whitespace' at " + loc);
      c.delimiter = value;
    } else if (key == "min_count") {
      c.min_count = parse_number<std::uint32_t>(value, key);
    } else if (key == "sample_cap") {
      c.sample_cap = parse_number<std::uint32_t>(value, key);
    } else if (key == "indices") {
      c.indices.clear();
      for (const std::string& part : split_commas(value)) {
        auto id = index_from_name(part);
        if (!id) raise(errc::invalid_input, "unknown index '" + part + "' at " + loc);
        c.indices.push_back(*id);
      }
      if (c.indices.empty())
        raise(errc::invalid_input, "indices list is empty at " + loc);
    } else if (key == "universe") {
      auto u = universe_from_name(value);
      if (!u) raise(errc::invalid_input, "unknown universe '" + value + "' at " + loc);
      c.universe = *u;
    } else if (key == "ego_mode") {
      auto m = ego_mode_from_name(value);
      if (!m) raise(errc::invalid_input, "unknown ego mode '" + value + "' at " + loc);
      c.ego_mode = *m;
    } else if (key == "k") {
      c.k_values.clear();
      for (const std::string& part : split_commas(value))
        c.k_values.push_back(parse_number<std::size_t>(part, key));
      if (c.k_values.empty())
        raise(errc::invalid_input, "k list is empty at " + loc);
    } else if (key == "labels") {
      c.labels = value;
    } else if (key == "embeddings") {
      c.embeddings = value;
    } else if (key == "cluster_nodes") {
      c.cluster_nodes = parse_number<std::size_t>(value, key);
    } else if (key == "cluster_edges") {
      c.cluster_edges = parse_number<std::size_t>(value, key);
    } else if (key == "seed") {
      c.seed = parse_number<std::uint64_t>(value, key);
    } else if (key == "out") {
      c.out = value;
    } else if (key == "threads") {
      c.threads = parse_number<unsigned>(value, key);
    } else {
      raise(errc::invalid_input, "unknown config key '" + key + "' at " + loc);
    }
  }
  return c;
}

void save_config(const RunConfig& config, const std::string& path) {
  std::string text = config_to_text(config);
  io::atomic_write(path, [&](std::ostream& out) { out << text; });
}

RunConfig load_config(const std::string& path, const RunConfig& base) {
  std::ifstream in(path);
  if (!in) raise(errc::io, "cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) raise(errc::io, "read failure on " + path);
  return config_from_text(buf.str(), path, base);
}

}  // namespace egosim
