#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pearl::io {

// Shortest text form that parses back to the identical double ("%.17g").
std::string format_double(double v);
double parse_double(const std::string& s);

// Writes to "<path>.tmp" and renames over the target, so readers never see a
// partially written artifact.
void atomic_write(const std::string& path, const std::string& contents);

std::string read_file(const std::string& path);
std::vector<std::string> read_lines(const std::string& path);

// Provenance stamp carried by every artifact a command writes.
struct RunStamp {
  std::string config_hash = "-";
  std::uint64_t seed = 0;
};

}  // namespace pearl::io
