#include "rectiscan/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "rectiscan/errors.hpp"

namespace rectiscan {
namespace {

using nlohmann::ordered_json;

// JSON has no NaN or infinity; those become null.
ordered_json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

ordered_json vec(const std::vector<double>& v) {
  ordered_json a = ordered_json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_cell(const std::string& cell, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size())
    throw DataError("line " + std::to_string(line) + ": cannot parse number '" + cell + "'");
  if (!std::isfinite(v))
    throw DataError("line " + std::to_string(line) + ": non-finite value '" + cell + "'");
  return v;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw DataError("failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string measure_csv(const DiscreteMeasure& measure) {
  std::string text;
  const int d = measure.ambient_dim();
  for (int k = 0; k < d; ++k) text += "x" + std::to_string(k + 1) + ",";
  text += "w\n";
  for (std::size_t i = 0; i < measure.size(); ++i) {
    for (double c : measure.point(i)) text += format_double(c) + ",";
    text += format_double(measure.weight(i)) + "\n";
  }
  return text;
}

void write_measure_csv(const std::string& path, const DiscreteMeasure& measure) {
  write_text_file(path, measure_csv(measure));
}

DiscreteMeasure read_measure_csv(const std::string& path, int n,
                                 std::optional<double> resolution) {
  std::istringstream in(read_text_file(path));
  std::string line;
  if (!std::getline(in, line)) throw DataError("'" + path + "' is empty");
  const std::vector<std::string> header = split(line);
  int d = 0;
  bool weighted = false;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "x" + std::to_string(c + 1)) {
      ++d;
    } else if (header[c] == "w" && c + 1 == header.size()) {
      weighted = true;
    } else {
      throw DataError("'" + path + "': bad header column '" + header[c] +
                      "' (expected x1,...,xd[,w])");
    }
  }
  if (d == 0) throw DataError("'" + path + "': no coordinate columns");
  std::vector<double> coords, weights;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::vector<std::string> cells = split(line);
    if (cells.size() != header.size())
      throw DataError("'" + path + "' line " + std::to_string(lineno) + ": expected " +
                      std::to_string(header.size()) + " fields");
    for (int k = 0; k < d; ++k) coords.push_back(parse_cell(cells[static_cast<std::size_t>(k)], lineno));
    if (weighted) {
      const double w = parse_cell(cells.back(), lineno);
      if (!(w > 0.0)) throw DataError("'" + path + "' line " + std::to_string(lineno) + ": weight must be positive");
      weights.push_back(w);
    } else {
      weights.push_back(1.0);
    }
  }
  if (weights.empty()) throw DataError("'" + path + "' has no data rows");
  try {
    if (!weighted) {
      DiscreteMeasure probe(coords, weights, d, n);
      const double total = std::pow(probe.unit(), n);
      for (double& w : weights) w = total / static_cast<double>(weights.size());
    }
    return DiscreteMeasure(std::move(coords), std::move(weights), d, n, resolution);
  } catch (const InvalidArgument& e) {
    throw DataError("'" + path + "': " + e.what());
  }
}

std::string field_csv(const CoefficientField& field) {
  std::string text = "center_index,r,value,boundary\n";
  for (std::size_t i = 0; i < field.centers.size(); ++i)
    for (std::size_t j = 0; j < field.scales.size(); ++j) {
      const double v = field.at(i, j);
      text += std::to_string(field.centers[i]) + "," + format_double(field.scales[j]) + "," +
              (std::isnan(v) ? std::string("nan") : format_double(v)) + "," +
              (field.boundary[i * field.scales.size() + j] ? "1" : "0") + "\n";
    }
  return text;
}

void write_field_csv(const std::string& path, const CoefficientField& field) {
  write_text_file(path, field_csv(field));
}

std::string lattice_json(const CubeLattice& lattice, const DiscreteMeasure& measure,
                         const LatticeAudit& audit) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "lattice";
  j["unit"] = num(lattice.unit());
  j["max_generation"] = lattice.max_generation();
  ordered_json cubes = ordered_json::array();
  for (const DavidCube& c : lattice.cubes()) {
    ordered_json row;
    row["id"] = c.id;
    row["generation"] = c.generation;
    row["center_index"] = c.center;
    const auto p = measure.point(c.center);
    row["center"] = vec(std::vector<double>(p.begin(), p.end()));
    row["side"] = num(c.side);
    row["mass"] = num(c.mass);
    row["members"] = c.members.size();
    row["parent"] = c.parent;
    row["children"] = c.children;
    cubes.push_back(std::move(row));
  }
  j["cubes"] = std::move(cubes);
  ordered_json gens = ordered_json::array();
  for (const GenerationAudit& g : audit.generations) {
    ordered_json row;
    row["generation"] = g.generation;
    row["cubes"] = g.cubes;
    row["mass_ratio"] = {num(g.min_mass_ratio), num(g.max_mass_ratio)};
    row["diameter_ratio"] = {num(g.min_diameter_ratio), num(g.max_diameter_ratio)};
    row["flagged"] = g.flagged;
    gens.push_back(std::move(row));
  }
  j["audit"] = {{"band", {num(audit.band_lo), num(audit.band_hi)}}, {"generations", std::move(gens)}};
  return j.dump(2) + "\n";
}

std::string carleson_json(const CarlesonReport& report) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "carleson";
  j["functional"] = report.functional;
  j["r_min"] = num(report.r_min);
  j["scale_ratio"] = num(report.scale_ratio);
  ordered_json balls = ordered_json::array();
  for (const CarlesonBall& b : report.balls) {
    ordered_json row;
    row["center"] = vec(b.center);
    row["radius"] = num(b.radius);
    row["value"] = num(b.value);
    row["centers"] = b.centers;
    row["cells"] = b.cells;
    row["skipped"] = b.skipped;
    balls.push_back(std::move(row));
  }
  j["balls"] = std::move(balls);
  j["summary"] = {{"sup", num(report.sup)},
                  {"slope", num(report.slope)},
                  {"intercept", num(report.intercept)},
                  {"correlation", num(report.correlation)}};
  j["warnings"] = report.warnings;
  return j.dump(2) + "\n";
}

std::string wcd_json(const std::vector<WcdDefect>& defects) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "wcd";
  ordered_json rows = ordered_json::array();
  for (const WcdDefect& w : defects) {
    ordered_json row;
    row["center"] = vec(w.center);
    row["radius"] = num(w.radius);
    row["c1"] = num(w.c1);
    row["defect"] = num(w.defect);
    row["samples"] = w.samples;
    row["scales"] = vec(w.scales);
    rows.push_back(std::move(row));
  }
  j["balls"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::string uniformity_json(const UniformityCheck& check, const std::string& kernel) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "uniformity";
  j["kernel"] = kernel;
  j["constant"] = num(check.constant);
  j["variation"] = num(check.variation);
  j["values"] = vec(check.values);
  j["warnings"] = check.warnings;
  return j.dump(2) + "\n";
}

std::string packing_json(const PackingAudit& audit, const CubeLattice& lattice) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "alpha-packing";
  j["root"] = audit.root;
  j["root_generation"] = lattice.cube(audit.root).generation;
  j["cubes"] = audit.cubes;
  ordered_json rows = ordered_json::array();
  for (std::size_t k = 0; k < audit.depths.size(); ++k)
    rows.push_back({{"depth", audit.depths[k]},
                    {"cumulative_ratio", num(audit.cumulative_ratio[k])},
                    {"mean_alpha", num(audit.mean_alpha[k])}});
  j["depths"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::string wavelet_json(const WaveletSummary& s) {
  auto decay = [](const DecayFit& f) {
    ordered_json row;
    row["levels"] = f.levels;
    row["sides"] = vec(f.sides);
    row["max_coefficient"] = vec(f.max_coefficient);
    row["slope"] = num(f.slope);
    row["expected_slope"] = num(f.expected);
    row["pass"] = std::abs(f.slope - f.expected) <= 0.3;
    return row;
  };
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "wavelet-check";
  j["n"] = s.n;
  j["vanishing"] = {{"cubes", s.vanishing.cubes},
                    {"max_abs", num(s.vanishing.max_abs)},
                    {"pass", s.vanishing.max_abs <= 1e-9}};
  j["decay_large"] = decay(s.large);
  j["decay_small"] = decay(s.small);
  ordered_json rec = ordered_json::array();
  for (std::size_t i = 0; i < s.reconstruction.values.size(); ++i)
    rec.push_back({{"point", vec(s.reconstruction_points[i])},
                   {"value", num(s.reconstruction.values[i])},
                   {"target", num(s.reconstruction.targets[i])}});
  j["reconstruction"] = {{"points", std::move(rec)},
                         {"max_error", num(s.reconstruction.max_error)},
                         {"pass", s.reconstruction.max_error <= 0.02}};
  return j.dump(2) + "\n";
}

}  // namespace rectiscan
