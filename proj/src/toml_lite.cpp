#include "pairspec/toml_lite.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "pairspec/errors.hpp"

namespace pairspec::toml {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
  std::ostringstream os;
  os << "config parse error at line " << line << ": " << msg;
  throw InputError(os.str());
}

[[noreturn]] void type_fail(const std::string& path, const char* want) {
  throw InputError("config error at " + path + ": expected " + want);
}

struct Cursor {
  const std::string& s;
  std::size_t i = 0;
  int line;

  bool done() const { return i >= s.size(); }
  char peek() const { return s[i]; }
  void skip_ws() {
    while (!done() && (s[i] == ' ' || s[i] == '\t')) ++i;
  }
};

Value parse_value(Cursor& c);

std::string parse_string(Cursor& c) {
  ++c.i;  // opening quote
  std::string out;
  while (!c.done() && c.peek() != '"') {
    char ch = c.s[c.i++];
    if (ch == '\\') {
      if (c.done()) fail(c.line, "dangling escape in string");
      char esc = c.s[c.i++];
      switch (esc) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default: fail(c.line, std::string("unsupported escape \\") + esc);
      }
    } else {
      out += ch;
    }
  }
  if (c.done()) fail(c.line, "unterminated string");
  ++c.i;  // closing quote
  return out;
}

Value parse_scalar(Cursor& c) {
  const std::size_t start = c.i;
  while (!c.done() && c.peek() != ',' && c.peek() != ']' && c.peek() != '#' &&
         c.peek() != ' ' && c.peek() != '\t')
    ++c.i;
  std::string tok = c.s.substr(start, c.i - start);
  if (tok.empty()) fail(c.line, "expected a value");
  if (tok == "true") return Value{true};
  if (tok == "false") return Value{false};
  const bool floaty = tok.find_first_of(".eE") != std::string::npos ||
                      tok == "inf" || tok == "-inf" || tok == "nan";
  char* end = nullptr;
  if (!floaty) {
    const long long iv = std::strtoll(tok.c_str(), &end, 10);
    if (end && *end == '\0') return Value{static_cast<std::int64_t>(iv)};
  }
  const double dv = std::strtod(tok.c_str(), &end);
  if (!end || *end != '\0') fail(c.line, "cannot parse value '" + tok + "'");
  return Value{dv};
}

Value parse_value(Cursor& c) {
  c.skip_ws();
  if (c.done()) fail(c.line, "expected a value");
  if (c.peek() == '"') return Value{parse_string(c)};
  if (c.peek() == '[') {
    ++c.i;
    Value::Array arr;
    c.skip_ws();
    if (!c.done() && c.peek() == ']') {
      ++c.i;
      return Value{arr};
    }
    while (true) {
      arr.push_back(parse_value(c));
      c.skip_ws();
      if (c.done()) fail(c.line, "unterminated array");
      if (c.peek() == ',') {
        ++c.i;
        continue;
      }
      if (c.peek() == ']') {
        ++c.i;
        return Value{arr};
      }
      fail(c.line, "expected ',' or ']' in array");
    }
  }
  return parse_scalar(c);
}

}  // namespace

bool Value::as_bool(const std::string& path) const {
  if (!is_bool()) type_fail(path, "boolean");
  return std::get<bool>(v);
}

std::int64_t Value::as_int(const std::string& path) const {
  if (!is_int()) type_fail(path, "integer");
  return std::get<std::int64_t>(v);
}

double Value::as_number(const std::string& path) const {
  if (is_int()) return static_cast<double>(std::get<std::int64_t>(v));
  if (!is_float()) type_fail(path, "number");
  return std::get<double>(v);
}

const std::string& Value::as_string(const std::string& path) const {
  if (!is_string()) type_fail(path, "string");
  return std::get<std::string>(v);
}

const Value::Array& Value::as_array(const std::string& path) const {
  if (!is_array()) type_fail(path, "array");
  return std::get<Array>(v);
}

const Value* Table::find(const std::string& section, const std::string& key) const {
  auto s = sections.find(section);
  if (s == sections.end()) return nullptr;
  auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

bool Table::has_section(const std::string& section) const {
  return sections.count(section) != 0;
}

double Table::number_or(const std::string& sec, const std::string& key,
                        double dflt) const {
  const Value* v = find(sec, key);
  return v ? v->as_number(sec + "." + key) : dflt;
}

std::int64_t Table::int_or(const std::string& sec, const std::string& key,
                           std::int64_t dflt) const {
  const Value* v = find(sec, key);
  return v ? v->as_int(sec + "." + key) : dflt;
}

bool Table::bool_or(const std::string& sec, const std::string& key,
                    bool dflt) const {
  const Value* v = find(sec, key);
  return v ? v->as_bool(sec + "." + key) : dflt;
}

std::string Table::string_or(const std::string& sec, const std::string& key,
                             std::string dflt) const {
  const Value* v = find(sec, key);
  return v ? v->as_string(sec + "." + key) : dflt;
}

Table parse(const std::string& text) {
  Table t;
  std::string section;
  t.sections[section];
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    Cursor c{raw, 0, line_no};
    c.skip_ws();
    if (c.done() || c.peek() == '#') continue;
    if (c.peek() == '[') {
      const std::size_t close = raw.find(']', c.i);
      if (close == std::string::npos) fail(line_no, "unterminated section header");
      section = raw.substr(c.i + 1, close - c.i - 1);
      if (section.empty()) fail(line_no, "empty section name");
      t.sections[section];
      c.i = close + 1;
      c.skip_ws();
      if (!c.done() && c.peek() != '#')
        fail(line_no, "trailing characters after section header");
      continue;
    }
    const std::size_t eq = raw.find('=', c.i);
    if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
    std::string key = raw.substr(c.i, eq - c.i);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
    if (key.empty()) fail(line_no, "empty key");
    for (char ch : key)
      if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_' && ch != '-')
        fail(line_no, "invalid key '" + key + "'");
    c.i = eq + 1;
    Value val = parse_value(c);
    c.skip_ws();
    if (!c.done() && c.peek() != '#') fail(line_no, "trailing characters after value");
    if (t.sections[section].count(key))
      fail(line_no, "duplicate key '" + section + "." + key + "'");
    t.sections[section].emplace(key, std::move(val));
  }
  return t;
}

Table parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse(os.str());
}

}  // namespace pairspec::toml
