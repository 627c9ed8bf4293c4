#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "lpg/error.hpp"
#include "lpg/harness.hpp"

using namespace lpg;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("lpg_unit_" + name);
  fs::remove_all(p);
  return p;
}

std::string minimal(const fs::path& out, const std::string& params = R"("p": [2])") {
  return R"({"experiment": "lp-equivalence", "group": {"kind": "abelian", "weights": [1]},
             "grid": {"half_extent": [32], "counts": [256]}, "params": {)" +
         params + R"(}, "family": {"kind": "standard", "seed": 1}, "output_dir": ")" + out.string() + "\"}";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int count_lines(const fs::path& p) {
  std::ifstream in(p);
  int n = 0;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) ++n;
  return n;
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("config validation") {
    try {
      parse_config(minimal("x", R"("p": [0.5])"));
      FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("p >= 1") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config(R"({"experiment": "partition", "bogus": 1})"), ConfigError);
    CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
    CHECK_THROWS_AS(parse_config(minimal("x", R"("p": [2], "q": [0])")), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"experiment": "lp-equivalence", "grid": {"half_extent": [1], "counts": [8]},
                                     "family": {"kind": "standard"}})"),
                    ConfigError);
  }

  TEST_CASE("canonical json round trip") {
    const auto c = parse_config(minimal("out/x", R"("p": [1.5, "inf"], "L": [1, 4])"));
    CHECK(std::isinf(c.list("p").back()));
    CHECK(parse_config(to_json(c)) == c);
    CHECK(c.tolerance("slope") == 0.1);
  }

  TEST_CASE("registry") {
    std::string all;
    for (const auto& e : list_experiments()) all += e.name + "\n";
    for (const char* name : {"nikolskii", "lp-equivalence", "marcinkiewicz", "translation-limit", "embedding"})
      CHECK(all.find(name) != std::string::npos);
  }

  TEST_CASE("worker pool size") {
    ::setenv("LPG_THREADS", "3", 1);
    CHECK(worker_count() == 3);
    ::setenv("LPG_THREADS", "zero", 1);
    CHECK_THROWS_AS(worker_count(), ConfigError);
    ::unsetenv("LPG_THREADS");
    CHECK(worker_count() >= 1);
    std::vector<int> hits(50, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
  }

  TEST_CASE("minimal run is deterministic") {
    const auto out = scratch("minimal");
    const auto c = parse_config(minimal(out));
    const auto m = run(c);
    CHECK(m.passed());
    REQUIRE(m.outcomes.size() == 1);
    const auto first = slurp(out / m.outputs.front());
    const auto again = run(c);
    CHECK(slurp(out / again.outputs.front()) == first);
    CHECK(again.config_hash == m.config_hash);
    const auto back = read_manifest(out / "manifest.json");
    CHECK(back.experiment == "lp-equivalence");
    CHECK(back.passed());
  }

  TEST_CASE("plot data") {
    const auto out = scratch("plot");
    const auto c = parse_config(R"({"experiment": "nikolskii", "group": {"kind": "abelian", "weights": [1]},
        "grid": {"half_extent": [126.44910430], "counts": [1024]},
        "params": {"p": [2], "q": ["inf"], "L": [1, 2, 4, 8, 16, 32]},
        "family": {"kind": "standard", "seed": 7}, "output_dir": ")" + out.string() + "\"}");
    run(c);
    const auto files = emit_plot_data(out / "manifest.json");
    REQUIRE(files.size() >= 2);
    bool saw_data = false, saw_fit = false;
    for (const auto& f : files) {
      const bool fit = f.filename().string().find("_fit") != std::string::npos;
      CHECK(count_lines(f) == (fit ? 2 : 6));
      (fit ? saw_fit : saw_data) = true;
      std::ifstream in(f);
      for (double x, y; in >> x >> y;) {
        CHECK(std::isfinite(x));
        CHECK(std::isfinite(y));
      }
    }
    CHECK(saw_data);
    CHECK(saw_fit);

    const auto empty = scratch("empty");
    fs::create_directories(empty);
    std::ofstream(empty / "manifest.json") << R"({"config_hash": "0", "version": "0", "timestamp": "",
        "experiment": "partition", "outcomes": [], "outputs": []})";
    CHECK(emit_plot_data(empty / "manifest.json").empty());
  }
}
