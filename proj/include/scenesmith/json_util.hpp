#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"
#include "scenesmith/enums.hpp"
#include "scenesmith/errors.hpp"

namespace scenesmith {

using Json = nlohmann::json;

namespace json_detail {

inline std::string describe_position(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace json_detail

// Parses a document, rethrowing syntax errors as ParseError with line context.
inline Json parse_json_text(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string(what) + ": malformed document at " +
                     json_detail::describe_position(text, e.byte) + " (" + e.what() + ")");
  }
}

inline const Json& require(const Json& j, std::string_view key, std::string_view ctx) {
  if (!j.is_object()) throw ParseError(std::string(ctx) + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) {
    throw ParseError(std::string(ctx) + ": missing field '" + std::string(key) + "'");
  }
  return *it;
}

inline std::string get_string(const Json& j, std::string_view key, std::string_view ctx) {
  const Json& v = require(j, key, ctx);
  if (!v.is_string()) {
    throw ParseError(std::string(ctx) + ": field '" + std::string(key) + "' must be a string");
  }
  return v.get<std::string>();
}

inline double as_number(const Json& v, std::string_view field, std::string_view ctx) {
  if (!v.is_number()) {
    throw ParseError(std::string(ctx) + ": field '" + std::string(field) + "' must be a number");
  }
  return v.get<double>();
}

inline double get_number(const Json& j, std::string_view key, std::string_view ctx) {
  return as_number(require(j, key, ctx), key, ctx);
}

inline std::int64_t get_int(const Json& j, std::string_view key, std::string_view ctx) {
  const Json& v = require(j, key, ctx);
  if (!v.is_number_integer()) {
    throw ParseError(std::string(ctx) + ": field '" + std::string(key) + "' must be an integer");
  }
  return v.get<std::int64_t>();
}

inline std::uint64_t get_u64(const Json& j, std::string_view key, std::string_view ctx) {
  const Json& v = require(j, key, ctx);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw ParseError(std::string(ctx) + ": field '" + std::string(key) +
                     "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

inline bool get_bool(const Json& j, std::string_view key, std::string_view ctx) {
  const Json& v = require(j, key, ctx);
  if (!v.is_boolean()) {
    throw ParseError(std::string(ctx) + ": field '" + std::string(key) + "' must be a boolean");
  }
  return v.get<bool>();
}

inline const Json& get_array(const Json& j, std::string_view key, std::string_view ctx) {
  const Json& v = require(j, key, ctx);
  if (!v.is_array()) {
    throw ParseError(std::string(ctx) + ": field '" + std::string(key) + "' must be an array");
  }
  return v;
}

template <typename E>
E enum_from_json(const Json& v, std::string_view field, std::string_view ctx) {
  if (!v.is_string()) {
    throw ParseError(std::string(ctx) + ": field '" + std::string(field) + "' must be a string");
  }
  auto e = parse_enum<E>(v.get<std::string>());
  if (!e) {
    throw ParseError(std::string(ctx) + ": unknown " + std::string(field) + " value '" +
                     v.get<std::string>() + "'");
  }
  return *e;
}

template <typename E>
E get_enum(const Json& j, std::string_view key, std::string_view ctx) {
  return enum_from_json<E>(require(j, key, ctx), key, ctx);
}

}  // namespace scenesmith
