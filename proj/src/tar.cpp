#include "saphir/tar.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstring>

#include "saphir/error.hpp"

namespace saphir::tar {

namespace {

constexpr std::size_t kBlock = 512;

struct Field {
  std::size_t offset;
  std::size_t size;
};

constexpr Field kName{0, 100};
constexpr Field kMode{100, 8};
constexpr Field kUid{108, 8};
constexpr Field kGid{116, 8};
constexpr Field kSize{124, 12};
constexpr Field kMtime{136, 12};
constexpr Field kChecksum{148, 8};
constexpr Field kType{156, 1};
constexpr Field kMagic{257, 6};
constexpr Field kVersion{263, 2};
constexpr Field kPrefix{345, 155};

using Header = std::array<char, kBlock>;

void put(Header& h, Field f, std::string_view value) {
  std::memcpy(h.data() + f.offset, value.data(), std::min(value.size(), f.size));
}

// Zero-padded octal, NUL terminated, filling the field.
void put_octal(Header& h, Field f, std::uint64_t value) {
  std::string digits(f.size - 1, '0');
  for (std::size_t i = digits.size(); i-- > 0 && value > 0; value >>= 3) {
    digits[i] = static_cast<char>('0' + (value & 7));
  }
  if (value != 0) throw Error(ErrorCode::InvalidArgument, "tar field overflow");
  put(h, f, digits);
}

unsigned checksum(const Header& h) {
  unsigned sum = 0;
  for (std::size_t i = 0; i < kBlock; ++i) {
    const bool in_field = i >= kChecksum.offset && i < kChecksum.offset + kChecksum.size;
    sum += in_field ? ' ' : static_cast<unsigned char>(h[i]);
  }
  return sum;
}

std::string_view field(const Header& h, Field f) {
  std::string_view raw(h.data() + f.offset, f.size);
  return raw.substr(0, raw.find('\0'));
}

std::uint64_t parse_octal(const Header& h, Field f) {
  std::uint64_t value = 0;
  bool any = false;
  for (char c : field(h, f)) {
    if (c == ' ') {
      if (any) break;
      continue;
    }
    if (c < '0' || c > '7') throw Error(ErrorCode::ParseError, "tar: bad octal field");
    value = value * 8 + static_cast<std::uint64_t>(c - '0');
    any = true;
  }
  return value;
}

// Splits `path` into ustar (prefix, name).
std::pair<std::string, std::string> split_path(const std::string& path) {
  if (path.size() <= kName.size) return {"", path};
  for (std::size_t slash = path.find('/'); slash != std::string::npos;
       slash = path.find('/', slash + 1)) {
    if (slash <= kPrefix.size && path.size() - slash - 1 <= kName.size && slash + 1 < path.size()) {
      return {path.substr(0, slash), path.substr(slash + 1)};
    }
  }
  throw Error(ErrorCode::InvalidArgument, "tar: path too long: " + path);
}

}  // namespace

std::string write(const std::vector<Entry>& entries) {
  std::string out;
  for (const auto& entry : entries) {
    if (entry.path.empty()) throw Error(ErrorCode::InvalidArgument, "tar: empty path");
    auto [prefix, name] = split_path(entry.path);
    Header h{};
    put(h, kName, name);
    put_octal(h, kMode, 0644);
    put_octal(h, kUid, 0);
    put_octal(h, kGid, 0);
    put_octal(h, kSize, entry.bytes.size());
    put_octal(h, kMtime, 0);
    put(h, kType, "0");
    put(h, kMagic, std::string_view("ustar\0", 6));
    put(h, kVersion, "00");
    put(h, kPrefix, prefix);
    // Six octal digits, NUL, space.
    char digits[8];
    std::snprintf(digits, sizeof digits, "%06o", checksum(h));
    std::memcpy(h.data() + kChecksum.offset, digits, 7);
    h[kChecksum.offset + 7] = ' ';

    out.append(h.data(), kBlock);
    out.append(entry.bytes);
    out.append((kBlock - entry.bytes.size() % kBlock) % kBlock, '\0');
  }
  out.append(2 * kBlock, '\0');
  return out;
}

std::vector<Entry> read(std::string_view archive) {
  std::vector<Entry> entries;
  std::size_t pos = 0;
  while (true) {
    if (pos + kBlock > archive.size()) throw Error(ErrorCode::ParseError, "tar: truncated archive");
    Header h;
    std::memcpy(h.data(), archive.data() + pos, kBlock);
    pos += kBlock;
    if (std::all_of(h.begin(), h.end(), [](char c) { return c == '\0'; })) break;

    if (parse_octal(h, kChecksum) != checksum(h)) {
      throw Error(ErrorCode::ParseError, "tar: header checksum mismatch");
    }
    if (field(h, kMagic) != "ustar") throw Error(ErrorCode::ParseError, "tar: not a ustar archive");
    const std::string_view type = field(h, kType);
    if (!type.empty() && type != "0") {
      throw Error(ErrorCode::ParseError, "tar: unsupported entry type '" + std::string(type) + "'");
    }
    const std::uint64_t size = parse_octal(h, kSize);
    if (size > archive.size() - pos) throw Error(ErrorCode::ParseError, "tar: truncated entry");

    Entry entry;
    const std::string_view prefix = field(h, kPrefix);
    entry.path = prefix.empty() ? std::string(field(h, kName))
                                : std::string(prefix) + "/" + std::string(field(h, kName));
    entry.bytes.assign(archive.data() + pos, size);
    pos += size + (kBlock - size % kBlock) % kBlock;
    entries.push_back(std::move(entry));
  }
  return entries;
}

}  // namespace saphir::tar
