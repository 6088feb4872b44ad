#include "dyson/toml_lite.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "dyson/errors.hpp"

namespace dyson::toml {
namespace {

using nlohmann::json;

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  json run() {
    json root = json::object();
    json* table = &root;
    while (true) {
      skip_ws_comments_newlines();
      if (eof()) break;
      if (peek() == '[') {
        table = header(root);
      } else {
        key_value(*table);
      }
      end_of_line();
    }
    return root;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
  int line_ = 1;

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("toml line " + std::to_string(line_) + ": " + what);
  }
  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return eof() ? '\0' : s_[pos_]; }
  char take() {
    const char c = s_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }
  void skip_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) take();
  }
  void skip_comment() {
    if (peek() == '#') {
      while (!eof() && peek() != '\n') take();
    }
  }
  void skip_ws_comments_newlines() {
    while (!eof()) {
      skip_ws();
      skip_comment();
      if (peek() == '\n' || peek() == '\r') {
        take();
      } else {
        break;
      }
    }
  }
  void end_of_line() {
    skip_ws();
    skip_comment();
    if (eof()) return;
    if (peek() == '\r') take();
    if (peek() != '\n') fail("unexpected trailing characters");
    take();
  }

  std::string bare_or_quoted_key() {
    skip_ws();
    if (peek() == '"') return basic_string();
    if (peek() == '\'') return literal_string();
    std::string out;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-')) {
      out.push_back(take());
    }
    if (out.empty()) fail("expected a key");
    return out;
  }

  std::vector<std::string> dotted_key() {
    std::vector<std::string> parts{bare_or_quoted_key()};
    skip_ws();
    while (peek() == '.') {
      take();
      parts.push_back(bare_or_quoted_key());
      skip_ws();
    }
    return parts;
  }

  // Descends through `parts`, creating tables and entering the last element
  // of arrays of tables.
  json* descend(json* t, const std::vector<std::string>& parts, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
      json& next = (*t)[parts[i]];
      if (next.is_null()) next = json::object();
      if (next.is_array()) {
        if (next.empty() || !next.back().is_object()) fail("key '" + parts[i] + "' is not a table");
        t = &next.back();
      } else if (next.is_object()) {
        t = &next;
      } else {
        fail("key '" + parts[i] + "' is not a table");
      }
    }
    return t;
  }

  json* header(json& root) {
    take();
    const bool array = peek() == '[';
    if (array) take();
    const auto parts = dotted_key();
    if (peek() != ']') fail("expected ']'");
    take();
    if (array) {
      if (peek() != ']') fail("expected ']]'");
      take();
    }
    json* parent = descend(&root, parts, parts.size() - 1);
    json& slot = (*parent)[parts.back()];
    if (array) {
      if (slot.is_null()) slot = json::array();
      if (!slot.is_array()) fail("'" + parts.back() + "' is not an array of tables");
      slot.push_back(json::object());
      return &slot.back();
    }
    if (slot.is_null()) slot = json::object();
    if (!slot.is_object()) fail("'" + parts.back() + "' redefined");
    return &slot;
  }

  void key_value(json& table) {
    const auto parts = dotted_key();
    skip_ws();
    if (peek() != '=') fail("expected '='");
    take();
    skip_ws();
    json* t = descend(&table, parts, parts.size() - 1);
    if (t->contains(parts.back())) fail("duplicate key '" + parts.back() + "'");
    (*t)[parts.back()] = value();
  }

  json value() {
    skip_ws();
    const char c = peek();
    if (c == '"') return basic_string();
    if (c == '\'') return literal_string();
    if (c == '[') return array();
    if (c == '{') return inline_table();
    if (s_.substr(pos_, 4) == "true") {
      pos_ += 4;
      return true;
    }
    if (s_.substr(pos_, 5) == "false") {
      pos_ += 5;
      return false;
    }
    return number();
  }

  std::string basic_string() {
    take();
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      char c = take();
      if (c == '"') break;
      if (c == '\\') {
        if (eof()) fail("bad escape");
        c = take();
        switch (c) {
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          case 'r': out.push_back('\r'); break;
          case '"': out.push_back('"'); break;
          case '\\': out.push_back('\\'); break;
          default: fail(std::string("unsupported escape \\") + c);
        }
        continue;
      }
      out.push_back(c);
    }
    return out;
  }

  std::string literal_string() {
    take();
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      const char c = take();
      if (c == '\'') break;
      out.push_back(c);
    }
    return out;
  }

  json array() {
    take();
    json out = json::array();
    while (true) {
      skip_ws_comments_newlines();
      if (peek() == ']') {
        take();
        return out;
      }
      out.push_back(value());
      skip_ws_comments_newlines();
      if (peek() == ',') {
        take();
      } else if (peek() != ']') {
        fail("expected ',' or ']' in array");
      }
    }
  }

  json inline_table() {
    take();
    json out = json::object();
    skip_ws();
    if (peek() == '}') {
      take();
      return out;
    }
    while (true) {
      key_value(out);
      skip_ws();
      if (peek() == ',') {
        take();
        continue;
      }
      if (peek() == '}') {
        take();
        return out;
      }
      fail("expected ',' or '}' in inline table");
    }
  }

  json number() {
    std::string tok;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '+' || peek() == '-' ||
                      peek() == '.' || peek() == '_')) {
      const char c = take();
      if (c != '_') tok.push_back(c);
    }
    if (tok.empty()) fail("expected a value");
    std::string_view body = tok;
    const bool neg = !body.empty() && body.front() == '-';
    if (!body.empty() && (body.front() == '+' || body.front() == '-')) body.remove_prefix(1);
    if (body == "inf") return neg ? -HUGE_VAL : HUGE_VAL;
    if (body == "nan") return std::nan("");
    const bool is_float = tok.find_first_of(".eE") != std::string::npos;
    if (!is_float) {
      std::int64_t v = 0;
      const char* first = tok.data() + (tok.front() == '+' ? 1 : 0);
      auto [p, ec] = std::from_chars(first, tok.data() + tok.size(), v);
      if (ec != std::errc() || p != tok.data() + tok.size()) fail("bad integer '" + tok + "'");
      return v;
    }
    std::istringstream in(tok);
    in.imbue(std::locale::classic());
    double v = 0.0;
    in >> v;
    if (in.fail() || !in.eof()) fail("bad number '" + tok + "'");
    return v;
  }
};

}  // namespace

nlohmann::json parse(std::string_view text) { return Parser(text).run(); }

nlohmann::json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace dyson::toml
