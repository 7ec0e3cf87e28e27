#pragma once

// Minimal deterministic POSIX ustar codec: regular files only, zeroed
// ownership and timestamps, entries written in the order given.

#include <string>
#include <string_view>
#include <vector>

namespace saphir::tar {

struct Entry {
  std::string path;
  std::string bytes;

  friend bool operator==(const Entry&, const Entry&) = default;
};

/// Throws Error(InvalidArgument) for paths ustar cannot hold.
std::string write(const std::vector<Entry>& entries);

/// Throws Error(ParseError) on malformed archives (bad checksum, truncated
/// data, unsupported entry types).
std::vector<Entry> read(std::string_view archive);

}  // namespace saphir::tar
