#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace pairspec::toml {

// Minimal TOML subset: [section] headers, key = value lines, strings, booleans,
// integers, floats, single-line arrays, and # comments.
struct Value {
  using Array = std::vector<Value>;
  std::variant<bool, std::int64_t, double, std::string, Array> v;

  bool is_bool() const { return std::holds_alternative<bool>(v); }
  bool is_int() const { return std::holds_alternative<std::int64_t>(v); }
  bool is_float() const { return std::holds_alternative<double>(v); }
  bool is_number() const { return is_int() || is_float(); }
  bool is_string() const { return std::holds_alternative<std::string>(v); }
  bool is_array() const { return std::holds_alternative<Array>(v); }

  bool as_bool(const std::string& path) const;
  std::int64_t as_int(const std::string& path) const;
  double as_number(const std::string& path) const;
  const std::string& as_string(const std::string& path) const;
  const Array& as_array(const std::string& path) const;
};

struct Table {
  // section -> key -> value; top-level keys live in section ""
  std::map<std::string, std::map<std::string, Value>> sections;

  const Value* find(const std::string& section, const std::string& key) const;
  bool has_section(const std::string& section) const;

  // typed getters with defaults; throw InputError naming section.key on mismatch
  double number_or(const std::string& sec, const std::string& key, double dflt) const;
  std::int64_t int_or(const std::string& sec, const std::string& key,
                      std::int64_t dflt) const;
  bool bool_or(const std::string& sec, const std::string& key, bool dflt) const;
  std::string string_or(const std::string& sec, const std::string& key,
                        std::string dflt) const;
};

Table parse(const std::string& text);
Table parse_file(const std::string& path);

}  // namespace pairspec::toml
