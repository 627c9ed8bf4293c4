#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "lpg/csv.hpp"
#include "lpg/error.hpp"
#include "lpg/harness.hpp"

namespace lpg {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) out.push_back(cell);
  return out;
}

struct Series {
  std::vector<double> x, y;
  double slope = 0.0;
};

}  // namespace

std::vector<fs::path> emit_plot_data(const fs::path& manifest_path) {
  const auto manifest = read_manifest(manifest_path);
  const fs::path dir = manifest_path.parent_path();
  std::vector<fs::path> written;
  for (const auto& name : manifest.outputs) {
    const fs::path csv_path = dir / name;
    std::ifstream in(csv_path);
    if (!in) throw Error("missing CSV referenced by the manifest: " + csv_path.string());
    std::string line;
    if (!std::getline(in, line)) continue;
    const auto header = split(line);
    auto col = [&header](const std::string& h) {
      for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == h) return static_cast<int>(i);
      return -1;
    };
    const int c_exp = col("experiment"), c_grp = col("group"), c_p = col("p"), c_q = col("q"), c_r = col("r");
    const int c_x = col("L_or_j"), c_ratio = col("ratio"), c_slope = col("fitted_slope");
    if (c_x < 0 || c_ratio < 0 || c_slope < 0) continue;  // not a slope table

    std::map<std::string, Series> series;
    std::vector<std::string> order;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto cells = split(line);
      const std::string key = cells[c_exp] + "," + cells[c_grp] + "," + cells[c_p] + "," + cells[c_q] + "," + cells[c_r];
      if (!series.count(key)) order.push_back(key);
      auto& s = series[key];
      const double raw = std::stod(cells[c_x]);
      // Level-type abscissae (Nikolskii L) are plotted on a log2 axis, dilation steps as given.
      s.x.push_back(cells[c_exp].rfind("nikolskii", 0) == 0 ? std::log2(raw) : raw);
      s.y.push_back(std::log2(std::stod(cells[c_ratio])));
      s.slope = std::stod(cells[c_slope]);
    }
    const std::string stem = fs::path(name).stem().string();
    for (std::size_t k = 0; k < order.size(); ++k) {
      const auto& s = series[order[k]];
      const fs::path data = dir / (stem + "_" + std::to_string(k) + ".dat");
      const fs::path fit = dir / (stem + "_" + std::to_string(k) + "_fit.dat");
      std::ofstream d(data, std::ios::binary);
      double mx = 0.0, my = 0.0;
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        d << format_number(s.x[i]) << ' ' << format_number(s.y[i]) << '\n';
        mx += s.x[i] / s.x.size();
        my += s.y[i] / s.x.size();
      }
      // The least-squares line passes through the centroid.
      const double b = my - s.slope * mx;
      std::ofstream f(fit, std::ios::binary);
      f << format_number(s.x.front()) << ' ' << format_number(b + s.slope * s.x.front()) << '\n';
      f << format_number(s.x.back()) << ' ' << format_number(b + s.slope * s.x.back()) << '\n';
      written.push_back(data);
      written.push_back(fit);
    }
  }
  return written;
}

}  // namespace lpg
