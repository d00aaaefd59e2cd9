#include "wgmkit/trace_io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "wgmkit/errors.hpp"
#include "wgmkit/json_writer.hpp"

namespace wgm::io {

namespace {

[[noreturn]] void fail(const std::string& path, std::size_t line, const std::string& what) {
  throw ConfigError(path + ":" + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& path, std::size_t line, const std::string& field) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') fail(path, line, "not a number: '" + field + "'");
  return v;
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ' && c != '\t' && c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

lineshape::FrequencyTrace read_trace_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open trace file: " + path);

  lineshape::TraceMeta meta;
  meta.source = std::filesystem::path(path).filename().string();

  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  bool magnitude = false;
  std::vector<double> freq;
  std::vector<double> re, im;

  while (std::getline(f, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;  // free-form comment
      std::string key = line.substr(1, eq - 1);
      std::string value = line.substr(eq + 1);
      const auto strip = [](std::string& s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
      };
      strip(key);
      strip(value);
      if (key == "source_dbm") meta.source_dbm = parse_double(path, lineno, value);
      else if (key == "temperature_mk") meta.temperature_mk = parse_double(path, lineno, value);
      else if (key == "mode") meta.mode_label = value;
      continue;
    }
    const auto fields = split_csv(line);
    if (!have_header) {
      if (fields.size() == 3 && fields[0] == "freq_hz" && fields[1] == "s21_re" &&
          fields[2] == "s21_im") {
        magnitude = false;
      } else if (fields.size() == 2 && fields[0] == "freq_hz" && fields[1] == "s21_mag") {
        magnitude = true;
      } else {
        fail(path, lineno,
             "header must be freq_hz,s21_re,s21_im or freq_hz,s21_mag; got '" + line + "'");
      }
      have_header = true;
      continue;
    }
    const std::size_t expect = magnitude ? 2 : 3;
    if (fields.size() != expect)
      fail(path, lineno, "expected " + std::to_string(expect) + " fields, got " +
                             std::to_string(fields.size()));
    freq.push_back(parse_double(path, lineno, fields[0]));
    re.push_back(parse_double(path, lineno, fields[1]));
    im.push_back(magnitude ? 0.0 : parse_double(path, lineno, fields[2]));
  }
  if (!have_header) throw ConfigError(path + ": missing header line");
  if (freq.empty()) throw ConfigError(path + ": no data rows");

  try {
    if (magnitude) return lineshape::FrequencyTrace::from_magnitude(freq, re, meta);
    std::vector<std::complex<double>> s21(freq.size());
    for (std::size_t i = 0; i < freq.size(); ++i) s21[i] = {re[i], im[i]};
    return lineshape::FrequencyTrace(freq, std::move(s21), meta);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string trace_to_csv(const lineshape::FrequencyTrace& trace) {
  std::string out;
  if (trace.meta.source_dbm)
    out += "# source_dbm=" + format_double(*trace.meta.source_dbm) + "\n";
  if (trace.meta.temperature_mk)
    out += "# temperature_mk=" + format_double(*trace.meta.temperature_mk) + "\n";
  if (!trace.meta.mode_label.empty()) out += "# mode=" + trace.meta.mode_label + "\n";
  if (trace.magnitude_mode) {
    out += "freq_hz,s21_mag\n";
    for (std::size_t i = 0; i < trace.size(); ++i)
      out += format_double(trace.freq_hz[i]) + "," + format_double(trace.s21[i].real()) + "\n";
  } else {
    out += "freq_hz,s21_re,s21_im\n";
    for (std::size_t i = 0; i < trace.size(); ++i)
      out += format_double(trace.freq_hz[i]) + "," + format_double(trace.s21[i].real()) + "," +
             format_double(trace.s21[i].imag()) + "\n";
  }
  return out;
}

void write_trace_csv(const std::string& path, const lineshape::FrequencyTrace& trace) {
  write_file_atomic(path, trace_to_csv(trace));
}

}  // namespace wgm::io
