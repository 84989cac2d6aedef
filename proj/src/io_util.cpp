#include "egosim/io_util.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <system_error>

#include "egosim/error.hpp"

namespace egosim::io {

std::string fmt_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) raise(errc::io, "failed to format double");
  return std::string(buf, end);
}

void atomic_write(const std::string& path,
                  const std::function<void(std::ostream&)>& writer) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) raise(errc::io, "cannot open " + tmp + " for writing");
    writer(out);
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      raise(errc::io, "write failed for " + tmp);
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    raise(errc::io, "rename " + tmp + " -> " + path + " failed: " + ec.message());
  }
}

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4] = {
      (unsigned char)(v & 0xff),
      (unsigned char)((v >> 8) & 0xff),
      (unsigned char)((v >> 16) & 0xff),
      (unsigned char)((v >> 24) & 0xff),
  };
  out.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  put_u32(out, std::uint32_t(v & 0xffffffffu));
  put_u32(out, std::uint32_t(v >> 32));
}

std::uint32_t take_u32(std::istream& in, const std::string& what) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (in.gcount() != 4)
    raise(errc::io, "truncated input while reading " + what);
  return std::uint32_t(b[0]) | (std::uint32_t(b[1]) << 8) |
         (std::uint32_t(b[2]) << 16) | (std::uint32_t(b[3]) << 24);
}

std::uint64_t take_u64(std::istream& in, const std::string& what) {
  std::uint64_t lo = take_u32(in, what);
  std::uint64_t hi = take_u32(in, what);
  return lo | (hi << 32);
}

}  // namespace egosim::io
