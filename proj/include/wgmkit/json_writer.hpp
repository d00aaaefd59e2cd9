#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace wgm::io {

// Format a double with 17 significant digits (%.17g); NaN/Inf become "null".
std::string format_double(double v);

// Minimal JSON value for report emission. Object keys are kept sorted and
// floats go through format_double, so identical inputs serialize to identical
// bytes on every platform. Parsing is someone else's job (see config.hpp).
class Json {
 public:
  static Json object();
  static Json array();
  static Json number(double v);
  static Json string(std::string v);
  static Json boolean(bool v);
  static Json null();

  Json& set(const std::string& key, Json v);  // object members
  Json& push(Json v);                         // array elements

  std::string dump(int indent = 2) const;

 private:
  enum class Kind { kNull, kBool, kNumber, kString, kArray, kObject };
  Kind kind_ = Kind::kNull;
  bool bool_ = false;
  double number_ = 0.0;
  std::string string_;
  std::vector<Json> array_;
  std::map<std::string, Json> object_;

  void dump_to(std::string& out, int indent, int depth) const;
};

// Write via a sibling temp file + rename so readers never observe a partial
// file; on error the temp file is removed and the old content survives.
void write_file_atomic(const std::string& path, std::string_view content);

}  // namespace wgm::io
