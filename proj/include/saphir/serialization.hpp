#pragma once

// Canonical JSON form of the resource model.
//
// Canonical bytes: UTF-8, object keys sorted bytewise, two-space indentation,
// LF line endings and a trailing newline, absent optionals omitted, arrays in
// author order, doubles in shortest round-trip form (0.5 is "0.5").
// Parsing is strict: unknown keys and wrong types are rejected with
// Error(ParseError) naming the offending location.

#include <string>
#include <string_view>

#include <json.hpp>

#include "saphir/model.hpp"

namespace saphir {

using Json = nlohmann::json;

Json to_json(const PictureRef& picture);
Json to_json(const ResourceDocument& document);
Json to_json(const ModuleDescriptor& module);

PictureRef picture_from_json(const Json& json, const std::string& where = "picture");
ResourceDocument document_from_json(ResourceKind kind, const Json& json);
ModuleDescriptor module_from_json(const Json& json);

/// Canonical bytes for any JSON value.
std::string canonical_dump(const Json& json);

std::string canonical_serialize(const ResourceDocument& document);
std::string canonical_serialize(const ModuleDescriptor& module);

/// Parses JSON text; syntax errors become Error(ParseError).
Json parse_json(std::string_view text);

/// Reads JSON objects field by field and rejects keys that were never read.
class ObjectReader {
public:
  ObjectReader(const Json& json, std::string where);
  ObjectReader(Json&&, std::string) = delete;  // keeps a reference

  const Json& required(const char* key);
  const Json* optional(const char* key);

  std::string string(const char* key);
  std::optional<std::string> optional_string(const char* key);
  bool boolean(const char* key);
  double number(const char* key);
  std::int64_t integer(const char* key);
  const Json& array(const char* key);
  std::vector<std::string> string_array(const char* key);

  std::string where(std::string_view key) const;

  /// Throws Error(ParseError) if the object holds keys that were not read.
  void finish() const;

private:
  const Json& json_;
  std::string where_;
  std::vector<std::string> seen_;
};

}  // namespace saphir
