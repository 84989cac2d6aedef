#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>

namespace egosim::io {

// Shortest decimal form that round-trips the exact double (via to_chars).
std::string fmt_double(double v);

// Writes through "<path>.tmp" and renames into place, so a crashed or failed
// run never leaves a partial file at the target path. The writer receives a
// binary-mode stream. Throws errc::io on any stream or filesystem failure.
void atomic_write(const std::string& path,
                  const std::function<void(std::ostream&)>& writer);

// Little-endian primitives for snapshot files. Readers throw errc::io on
// truncation.
void put_u32(std::ostream& out, std::uint32_t v);
void put_u64(std::ostream& out, std::uint64_t v);
std::uint32_t take_u32(std::istream& in, const std::string& what);
std::uint64_t take_u64(std::istream& in, const std::string& what);

}  // namespace egosim::io
