#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>

#include "wgmkit/config.hpp"
#include "wgmkit/errors.hpp"
#include "wgmkit/json_writer.hpp"
#include "wgmkit/lineshape.hpp"
#include "wgmkit/trace_io.hpp"

using namespace wgm;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "wgmkit_io_tests";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(f), {});
}

void spit(const fs::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary);
  f << content;
}

}  // namespace

TEST_CASE("trace CSV round trip is bit exact") {
  lineshape::FanoParams p;
  p.f0_hz = 13.869e9;
  p.gamma_hz = 46.23;
  p.q_asym = -0.7;
  p.amp = 0.9;
  p.baseline = 0.31;
  lineshape::FrequencyTrace t = lineshape::synth_trace(p, 64, 900.0, 25.0, 99);
  t.meta.source_dbm = -17.25;
  t.meta.temperature_mk = 52.5;
  t.meta.mode_label = "WGH20";

  const fs::path path = scratch_dir() / "roundtrip.csv";
  io::write_trace_csv(path.string(), t);
  const lineshape::FrequencyTrace back = io::read_trace_csv(path.string());

  REQUIRE(back.size() == t.size());
  CHECK(back.magnitude_mode == t.magnitude_mode);
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(back.freq_hz[i] == t.freq_hz[i]);
    CHECK(back.s21[i] == t.s21[i]);
  }
  CHECK(back.meta.source_dbm == t.meta.source_dbm);
  CHECK(back.meta.temperature_mk == t.meta.temperature_mk);
  CHECK(back.meta.mode_label == t.meta.mode_label);
  CHECK(back.meta.source == "roundtrip.csv");

  // Writing the re-read trace reproduces the file byte for byte.
  const fs::path path2 = scratch_dir() / "roundtrip2.csv";
  io::write_trace_csv(path2.string(), back);
  CHECK(slurp(path) == slurp(path2));
}

TEST_CASE("complex trace CSV round trip") {
  std::vector<double> freq;
  std::vector<std::complex<double>> s21;
  for (int i = 0; i < 16; ++i) {
    freq.push_back(10e9 + 13.7 * i);
    s21.emplace_back(std::cos(0.1 * i) * 0.8, std::sin(0.2 * i) * 0.3);
  }
  const lineshape::FrequencyTrace t(freq, s21);
  const fs::path path = scratch_dir() / "complex.csv";
  io::write_trace_csv(path.string(), t);
  const lineshape::FrequencyTrace back = io::read_trace_csv(path.string());
  REQUIRE(back.size() == t.size());
  CHECK_FALSE(back.magnitude_mode);
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(back.s21[i] == t.s21[i]);
}

TEST_CASE("malformed trace files raise ConfigError naming the line") {
  const fs::path dir = scratch_dir();

  SUBCASE("bad header") {
    const fs::path p = dir / "bad_header.csv";
    spit(p, "frequency,mag\n1,2\n");
    CHECK_THROWS_WITH_AS(io::read_trace_csv(p.string()),
                         doctest::Contains("bad_header.csv:1"), ConfigError);
  }
  SUBCASE("bad number") {
    const fs::path p = dir / "bad_number.csv";
    spit(p, "freq_hz,s21_mag\n1e9,0.5\nnot_a_number,0.5\n");
    CHECK_THROWS_WITH_AS(io::read_trace_csv(p.string()),
                         doctest::Contains("bad_number.csv:3"), ConfigError);
  }
  SUBCASE("wrong field count") {
    const fs::path p = dir / "bad_fields.csv";
    spit(p, "freq_hz,s21_re,s21_im\n1e9,0.5\n");
    CHECK_THROWS_WITH_AS(io::read_trace_csv(p.string()),
                         doctest::Contains("bad_fields.csv:2"), ConfigError);
  }
  SUBCASE("non-increasing frequency") {
    const fs::path p = dir / "decreasing.csv";
    std::string body = "freq_hz,s21_mag\n";
    for (int i = 0; i < 10; ++i) body += std::to_string(1e9 - i) + ",0.5\n";
    spit(p, body);
    CHECK_THROWS_AS(io::read_trace_csv(p.string()), ConfigError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_WITH_AS(io::read_trace_csv((dir / "nope.csv").string()),
                         doctest::Contains("nope.csv"), ConfigError);
  }
  SUBCASE("empty data") {
    const fs::path p = dir / "only_header.csv";
    spit(p, "freq_hz,s21_mag\n");
    CHECK_THROWS_AS(io::read_trace_csv(p.string()), ConfigError);
  }
}

TEST_CASE("chain config loading") {
  const fs::path dir = scratch_dir();
  const fs::path good = dir / "chain_good.json";
  spit(good,
       R"({"stages": [{"name": "att", "gain_db": -40}], "beta1": 0.02, "beta2": 0.5})");
  const chain::PowerChain c = io::load_chain_json(good.string());
  CHECK(c.stages.size() == 1);
  CHECK(c.stages[0].name == "att");
  CHECK(c.stages[0].gain_db == -40.0);
  CHECK(c.beta1 == 0.02);
  CHECK(c.beta2 == 0.5);

  const fs::path nobeta2 = dir / "chain_nobeta2.json";
  spit(nobeta2, R"({"stages": [], "beta1": 1.0})");
  CHECK(io::load_chain_json(nobeta2.string()).beta2 == 0.0);

  const fs::path bad1 = dir / "chain_bad1.json";
  spit(bad1, R"({"stages": []})");
  CHECK_THROWS_AS(io::load_chain_json(bad1.string()), ConfigError);

  const fs::path bad2 = dir / "chain_bad2.json";
  spit(bad2, R"({"stages": "oops", "beta1": 0.02})");
  CHECK_THROWS_AS(io::load_chain_json(bad2.string()), ConfigError);

  const fs::path bad3 = dir / "chain_bad3.json";
  spit(bad3, "{ not json");
  CHECK_THROWS_AS(io::load_chain_json(bad3.string()), ConfigError);

  const fs::path bad4 = dir / "chain_bad4.json";
  spit(bad4, R"({"stages": [], "beta1": -0.5})");
  CHECK_THROWS_AS(io::load_chain_json(bad4.string()), ConfigError);
}

TEST_CASE("mode spec config loading") {
  const fs::path dir = scratch_dir();
  const fs::path good = dir / "mode_good.json";
  spit(good, R"({"m": 20, "radius_m": 0.025, "height_m": 0.03,
                 "eps_perp": 9.27, "eps_par": 11.35, "shield_radius_m": null})");
  const modes::ModeSpec s = io::load_mode_spec_json(good.string());
  CHECK(s.azimuthal_m == 20);
  CHECK(s.radius_m == 0.025);
  CHECK(s.height_m == 0.03);
  CHECK_FALSE(s.shield_radius_m.has_value());

  const fs::path defaults = dir / "mode_defaults.json";
  spit(defaults, R"({"m": 19, "radius_m": 0.025, "height_m": 0.03})");
  const modes::ModeSpec d = io::load_mode_spec_json(defaults.string());
  CHECK(d.eps_perp == 9.27);
  CHECK(d.eps_par == 11.35);

  const fs::path shield = dir / "mode_shield.json";
  spit(shield, R"({"m": 20, "radius_m": 0.025, "height_m": 0.03, "shield_radius_m": 0.04})");
  CHECK(io::load_mode_spec_json(shield.string()).shield_radius_m == 0.04);

  const fs::path bad = dir / "mode_bad.json";
  spit(bad, R"({"m": 20, "radius_m": 0.025})");
  CHECK_THROWS_AS(io::load_mode_spec_json(bad.string()), ConfigError);

  const fs::path bad2 = dir / "mode_bad2.json";
  spit(bad2, R"({"m": "twenty", "radius_m": 0.025, "height_m": 0.03})");
  CHECK_THROWS_AS(io::load_mode_spec_json(bad2.string()), ConfigError);
}

TEST_CASE("json writer emits sorted, stable, escaped output") {
  io::Json obj = io::Json::object();
  obj.set("zeta", io::Json::number(0.1));
  obj.set("alpha", io::Json::number(std::numeric_limits<double>::quiet_NaN()));
  obj.set("mid\"key", io::Json::string("line\nbreak"));
  io::Json arr = io::Json::array();
  arr.push(io::Json::boolean(true));
  arr.push(io::Json::null());
  arr.push(io::Json::number(-1.5));
  obj.set("list", std::move(arr));

  const std::string dumped = obj.dump();
  // Keys in sorted order, NaN as null, escapes applied.
  const auto pos_alpha = dumped.find("\"alpha\"");
  const auto pos_list = dumped.find("\"list\"");
  const auto pos_mid = dumped.find("\"mid\\\"key\"");
  const auto pos_zeta = dumped.find("\"zeta\"");
  REQUIRE(pos_alpha != std::string::npos);
  REQUIRE(pos_list != std::string::npos);
  REQUIRE(pos_mid != std::string::npos);
  REQUIRE(pos_zeta != std::string::npos);
  CHECK(pos_alpha < pos_list);
  CHECK(pos_list < pos_mid);
  CHECK(pos_mid < pos_zeta);
  CHECK(dumped.find("null") != std::string::npos);
  CHECK(dumped.find("\\n") != std::string::npos);
  CHECK(dumped.back() == '\n');

  // 17 significant digits round-trip doubles exactly.
  CHECK(io::format_double(0.1) == "0.10000000000000001");
  CHECK(io::format_double(1.0) == "1");
  CHECK(io::format_double(-1e-300) == "-1e-300");
  CHECK(io::format_double(std::numeric_limits<double>::infinity()) == "null");

  // Dumping twice is identical.
  CHECK(obj.dump() == dumped);
}

TEST_CASE("atomic write replaces content and leaves no temp file") {
  const fs::path dir = scratch_dir();
  const fs::path p = dir / "atomic.txt";
  io::write_file_atomic(p.string(), "first\n");
  CHECK(slurp(p) == "first\n");
  io::write_file_atomic(p.string(), "second\n");
  CHECK(slurp(p) == "second\n");
  CHECK_FALSE(fs::exists(p.string() + ".tmp"));

  // Unwritable destination: error, and any existing file is untouched.
  CHECK_THROWS(io::write_file_atomic((dir / "no_dir" / "x.txt").string(), "y"));
}
