#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>

#include <json.hpp>

#include "fixpave/box.hpp"
#include "fixpave/errors.hpp"

namespace fixpave {

using Json = nlohmann::json;

class JsonSyntaxError : public Error {
 public:
  JsonSyntaxError(const std::string& what, std::size_t offset)
      : Error("malformed JSON at byte " + std::to_string(offset) + ": " + what), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// A document failed validation; path is a JSON pointer to the culprit.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& path, const std::string& what)
      : Error((path.empty() ? std::string("/") : path) + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Parsed JSON together with the literal text of every number, keyed by
/// JSON pointer. The text lets decimal endpoints be rounded outward exactly.
struct JsonDocument {
  Json value;
  std::map<std::string, std::string> raw_numbers;

  const std::string* raw(const std::string& pointer) const;
};

/// Throws JsonSyntaxError carrying the byte offset of the failure.
JsonDocument parse_json_document(std::string_view text);

std::string child_pointer(const std::string& parent, const std::string& key);
std::string child_pointer(const std::string& parent, std::size_t index);

Json to_json(const Interval& x);
Json to_json(const Box& b);

/// Reads [lo, hi]. With a document, decimal literals are re-rounded from their
/// text: lo toward -inf, hi toward +inf.
Interval interval_from_json(const Json& j, const std::string& pointer = "",
                            const JsonDocument* doc = nullptr);
/// Reads [[lo, hi], ...].
Box box_from_json(const Json& j, const std::string& pointer = "",
                  const JsonDocument* doc = nullptr);

/// Convenience: parse text and read a box from its root.
Box box_from_json_text(std::string_view text);

}  // namespace fixpave
