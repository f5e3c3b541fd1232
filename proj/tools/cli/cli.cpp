#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "rectiscan/alpha.hpp"
#include "rectiscan/carleson.hpp"
#include "rectiscan/datasets.hpp"
#include "rectiscan/errors.hpp"
#include "rectiscan/io.hpp"
#include "rectiscan/lattice.hpp"
#include "rectiscan/parallel.hpp"
#include "rectiscan/square_functions.hpp"
#include "rectiscan/uniformity.hpp"
#include "rectiscan/wavelets.hpp"

namespace rectiscan::cli {
namespace {

using nlohmann::ordered_json;

// Files produced by one command, held in memory until the run succeeds.
class Outputs {
 public:
  void add(std::string path, std::string content) {
    if (!path.empty()) files_.emplace_back(std::move(path), std::move(content));
  }

  void commit() {
    std::vector<std::string> written;
    try {
      for (const auto& [path, content] : files_) {
        written.push_back(path);
        write_text_file(path, content);
      }
    } catch (...) {
      std::error_code ec;
      for (const std::string& path : written) std::filesystem::remove(path, ec);
      throw;
    }
  }

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

struct Source {
  std::string input;
  std::string kind;
  std::string profile = "sine";
  double resolution = 0.0;
  GeneratorSpec spec;
};

void add_generator_options(CLI::App* app, Source& s) {
  app->add_option("--kind", s.kind,
                  "Synthetic dataset: plane, segment, circle, lipschitz, cantor, "
                  "perturbed-plane, atoms");
  app->add_option("--points", s.spec.points, "Point budget")->capture_default_str();
  app->add_option("--seed", s.spec.seed, "Random seed")->capture_default_str();
  app->add_option("--d", s.spec.d, "Ambient dimension")->capture_default_str();
  app->add_option("--n", s.spec.n, "Target dimension")->capture_default_str();
  app->add_option("--length", s.spec.length, "Segment length, plane side, graph extent")
      ->capture_default_str();
  app->add_option("--rho", s.spec.rho, "Circle radius")->capture_default_str();
  app->add_option("--amplitude", s.spec.amplitude, "Graph amplitude")->capture_default_str();
  app->add_option("--frequency", s.spec.frequency, "Graph frequency")->capture_default_str();
  app->add_option("--profile", s.profile, "Graph profile: sine or abs-sine")
      ->capture_default_str();
  app->add_option("--K", s.spec.K, "Cantor generation")->capture_default_str();
  app->add_option("--noise", s.spec.noise, "Perturbed-plane noise level")->capture_default_str();
}

void add_source_options(CLI::App* app, Source& s) {
  app->add_option("--input", s.input, "Measure CSV with columns x1,...,xd[,w]");
  add_generator_options(app, s);
  app->add_option("--resolution", s.resolution, "Smallest admissible scale (default 3 x spacing)");
}

GeneratorSpec generator_spec(const Source& s) {
  GeneratorSpec spec = s.spec;
  spec.kind = GeneratorSpec::parse_kind(s.kind);
  if (s.profile == "sine")
    spec.profile = GraphProfile::Sine;
  else if (s.profile == "abs-sine")
    spec.profile = GraphProfile::AbsSine;
  else
    throw_invalid("unknown graph profile '" + s.profile + "' (expected sine or abs-sine)");
  return spec;
}

DiscreteMeasure load(const Source& s) {
  std::optional<double> resolution;
  if (s.resolution > 0.0) resolution = s.resolution;
  if (!s.input.empty()) {
    if (!s.kind.empty()) throw_invalid("give either --input or --kind, not both");
    return read_measure_csv(s.input, s.spec.n, resolution);
  }
  if (s.kind.empty()) throw_invalid("no data: give --input or --kind");
  DiscreteMeasure m = generate(generator_spec(s));
  return resolution ? m.with_resolution(*resolution) : m;
}

// Support point nearest the coordinate mean, or the requested index.
std::size_t pick_center(const DiscreteMeasure& m, const SpatialIndex& index, long requested) {
  if (requested >= 0) {
    if (static_cast<std::size_t>(requested) >= m.size())
      throw_invalid("--center-index " + std::to_string(requested) + " is out of range");
    return static_cast<std::size_t>(requested);
  }
  std::vector<double> mean(static_cast<std::size_t>(m.ambient_dim()), 0.0);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += m.point(i)[k];
  for (double& v : mean) v /= static_cast<double>(m.size());
  return index.nearest(mean, 1).front().second;
}

std::optional<KernelSpec> kernel_option(const std::string& text, int n) {
  if (text.empty()) return std::nullopt;
  return KernelSpec::parse(text, n);
}

std::vector<double> to_vector(std::span<const double> x) { return {x.begin(), x.end()}; }

struct FunctionalArgs {
  std::string name = "delta-density";
  std::string kernel;
  int k = 1;
};

void add_functional_options(CLI::App* app, FunctionalArgs& f) {
  app->add_option("--functional", f.name,
                  "delta-density, delta-smooth, delta-smooth-dt, delta-k, delta-dt-k, beta1, "
                  "beta2, alpha, wcd")
      ->capture_default_str();
  app->add_option("--kernel", f.kernel, "Kernel: gauss:N=1, invpow:a=1.5 or hard");
  app->add_option("--k", f.k, "Order of delta-k / delta-dt-k")->capture_default_str();
}

Functional make_functional(const FunctionalArgs& f, int n) {
  return Functional::parse(f.name, kernel_option(f.kernel, n), f.k);
}

// generate ---------------------------------------------------------------

void setup_generate(CLI::App& app, Outputs& outputs, std::function<void()>& action) {
  auto* cmd = app.add_subcommand("generate", "Write a synthetic dataset as CSV");
  auto src = std::make_shared<Source>();
  auto out = std::make_shared<std::string>();
  add_generator_options(cmd, *src);
  cmd->get_option("--kind")->required();
  cmd->add_option("--out", *out, "Output CSV")->required();
  cmd->callback([&, src, out] {
    action = [&, src, out] { outputs.add(*out, measure_csv(generate(generator_spec(*src)))); };
  });
}

// analyze ----------------------------------------------------------------

void setup_analyze(CLI::App& app, Outputs& outputs, std::function<void()>& action,
                   std::ostream& log) {
  auto* cmd = app.add_subcommand("analyze", "Coefficient field over centers x scales");
  struct Args {
    Source src;
    FunctionalArgs f;
    double r_min = 0.0, r_max = 0.0, ratio = 2.0;
    std::size_t max_centers = 5000;
    std::string out;
  };
  auto a = std::make_shared<Args>();
  add_source_options(cmd, a->src);
  add_functional_options(cmd, a->f);
  cmd->add_option("--r-min", a->r_min, "Smallest scale (default: resolution)");
  cmd->add_option("--r-max", a->r_max, "Largest scale (default: diameter / 2)");
  cmd->add_option("--ratio", a->ratio, "Scale grid ratio")->capture_default_str();
  cmd->add_option("--max-centers", a->max_centers, "Center sample size")->capture_default_str();
  cmd->add_option("--out", a->out, "Field CSV")->required();
  cmd->callback([&, a] {
    action = [&, a] {
      const DiscreteMeasure m = load(a->src);
      const SpatialIndex index(m);
      const Functional functional = make_functional(a->f, m.target_dim());
      const double lo = a->r_min > 0.0 ? a->r_min : m.resolution();
      const double hi = a->r_max > 0.0 ? a->r_max : m.diameter() / 2.0;
      if (lo < m.resolution() * (1.0 - 1e-12) || hi > m.diameter() * (1.0 + 1e-12) || hi < lo)
        throw RangeError("scale range [" + format_double(lo) + ", " + format_double(hi) +
                         "] is not within [resolution, diameter] = [" +
                         format_double(m.resolution()) + ", " + format_double(m.diameter()) + "]");
      const std::vector<double> scales = geometric_grid(lo, hi, a->ratio);
      const CoefficientField field =
          coefficient_field(m, index, functional, sample_centers(m, a->max_centers), scales);
      for (const CellError& e : field.errors)
        log << "warning: cell (" << e.center << ", " << e.scale << "): " << e.message << "\n";
      outputs.add(a->out, field_csv(field));
    };
  });
}

// carleson ---------------------------------------------------------------

void setup_carleson(CLI::App& app, Outputs& outputs, std::function<void()>& action) {
  auto* cmd = app.add_subcommand("carleson", "Carleson sums over nested balls");
  struct Args {
    Source src;
    FunctionalArgs f;
    long center = -1;
    double radius_max = 0.0, ball_ratio = 2.0;
    std::size_t balls = 6;
    CarlesonOptions options;
    std::string out;
  };
  auto a = std::make_shared<Args>();
  add_source_options(cmd, a->src);
  add_functional_options(cmd, a->f);
  cmd->add_option("--center-index", a->center, "Ball center (default: point nearest the mean)");
  cmd->add_option("--radius-max", a->radius_max, "Largest ball radius (default: diameter / 4)");
  cmd->add_option("--balls", a->balls, "Number of balls")->capture_default_str();
  cmd->add_option("--ball-ratio", a->ball_ratio, "Ratio between successive radii")
      ->capture_default_str();
  cmd->add_option("--r-min", a->options.r_min, "Lower end of the scale integral");
  cmd->add_option("--scale-ratio", a->options.scale_ratio, "Scale grid ratio")
      ->capture_default_str();
  cmd->add_option("--max-centers-per-ball", a->options.max_centers_per_ball)
      ->capture_default_str();
  cmd->add_flag("--exclude-boundary", a->options.exclude_boundary,
                "Drop cells within 2r of the data boundary");
  cmd->add_option("--out", a->out, "Report JSON")->required();
  cmd->callback([&, a] {
    action = [&, a] {
      if (a->balls == 0) throw_invalid("--balls must be positive");
      if (!(a->ball_ratio > 1.0)) throw_invalid("--ball-ratio must exceed 1");
      const DiscreteMeasure m = load(a->src);
      const SpatialIndex index(m);
      const Functional functional = make_functional(a->f, m.target_dim());
      const auto center = to_vector(m.point(pick_center(m, index, a->center)));
      double radius = a->radius_max > 0.0 ? a->radius_max : m.diameter() / 4.0;
      std::vector<Ball> balls;
      for (std::size_t i = 0; i < a->balls; ++i, radius /= a->ball_ratio)
        balls.push_back({center, radius});
      outputs.add(a->out, carleson_json(carleson_scan(m, index, functional, balls, a->options)));
    };
  });
}

// alpha-audit ------------------------------------------------------------

void setup_alpha_audit(CLI::App& app, Outputs& outputs, std::function<void()>& action) {
  auto* cmd = app.add_subcommand("alpha-audit", "Packing sums of alpha over a cube tree");
  struct Args {
    Source src;
    long center = -1;
    int root_generation = 0;
    int depth = 4;
    std::string out, lattice_out;
  };
  auto a = std::make_shared<Args>();
  add_source_options(cmd, a->src);
  cmd->add_option("--root-generation", a->root_generation, "Generation of the root cube")
      ->capture_default_str();
  cmd->add_option("--center-index", a->center,
                  "Point inside the root cube (default: point nearest the mean)");
  cmd->add_option("--depth", a->depth, "Generations below the root")->capture_default_str();
  cmd->add_option("--out", a->out, "Audit JSON")->required();
  cmd->add_option("--lattice-out", a->lattice_out, "Optional lattice JSON");
  cmd->callback([&, a] {
    action = [&, a] {
      if (a->root_generation < 0 || a->depth < 0)
        throw_invalid("--root-generation and --depth must be nonnegative");
      const DiscreteMeasure m = load(a->src);
      const SpatialIndex index(m);
      const int deepest = max_lattice_depth(m);
      if (a->root_generation + a->depth > deepest)
        throw RangeError("root generation + depth = " +
                         std::to_string(a->root_generation + a->depth) +
                         " exceeds the finest generation " + std::to_string(deepest) +
                         " allowed by the resolution");
      const CubeLattice lattice = build_lattice(m, index, a->root_generation + a->depth);
      const std::size_t root = lattice.cube_of(pick_center(m, index, a->center), a->root_generation);
      const PackingAudit audit = alpha_packing_audit(m, index, lattice, root, a->depth);
      outputs.add(a->out, packing_json(audit, lattice));
      if (!a->lattice_out.empty())
        outputs.add(a->lattice_out, lattice_json(lattice, m, lattice_audit(lattice, m)));
    };
  });
}

// wcd --------------------------------------------------------------------

void setup_wcd(CLI::App& app, Outputs& outputs, std::function<void()>& action) {
  auto* cmd = app.add_subcommand("wcd", "Constant-density defect on balls");
  struct Args {
    Source src;
    double radius = 0.0;
    std::size_t centers = 8;
    WcdOptions options;
    std::string out;
  };
  auto a = std::make_shared<Args>();
  add_source_options(cmd, a->src);
  cmd->add_option("--radius", a->radius, "Ball radius (default: diameter / 10)");
  cmd->add_option("--centers", a->centers, "Number of ball centers")->capture_default_str();
  cmd->add_option("--samples", a->options.samples, "Support points per ball")
      ->capture_default_str();
  cmd->add_option("--sample-seed", a->options.seed, "Seed for the point draw")
      ->capture_default_str();
  cmd->add_option("--out", a->out, "Defect JSON")->required();
  cmd->callback([&, a] {
    action = [&, a] {
      if (a->centers == 0) throw_invalid("--centers must be positive");
      const DiscreteMeasure m = load(a->src);
      const SpatialIndex index(m);
      const double r = a->radius > 0.0 ? a->radius : m.diameter() / 10.0;
      const CenterSample sample = sample_centers(m, a->centers);
      std::vector<WcdDefect> defects;
      for (std::size_t i : sample.indices)
        defects.push_back(wcd_defect(m, index, m.point(i), r, a->options));
      outputs.add(a->out, wcd_json(defects));
    };
  });
}

// uniformity -------------------------------------------------------------

void setup_uniformity(CLI::App& app, Outputs& outputs, std::function<void()>& action) {
  auto* cmd = app.add_subcommand("uniformity", "Constancy of a smooth kernel integral");
  struct Args {
    Source src;
    std::string kernel = "gauss:N=1";
    std::size_t centers = 50;
    double r_min = 0.0, r_max = 0.0, ratio = 2.0;
    std::string out;
  };
  auto a = std::make_shared<Args>();
  add_source_options(cmd, a->src);
  cmd->add_option("--kernel", a->kernel, "Smooth kernel profile")->capture_default_str();
  cmd->add_option("--centers", a->centers, "Number of centers")->capture_default_str();
  cmd->add_option("--r-min", a->r_min, "Smallest scale (default: 10 x resolution)");
  cmd->add_option("--r-max", a->r_max, "Largest scale (default: diameter / 10)");
  cmd->add_option("--ratio", a->ratio, "Scale grid ratio")->capture_default_str();
  cmd->add_option("--out", a->out, "Check JSON")->required();
  cmd->callback([&, a] {
    action = [&, a] {
      const DiscreteMeasure m = load(a->src);
      const SpatialIndex index(m);
      const KernelSpec spec = KernelSpec::parse(a->kernel, m.target_dim());
      const double lo = a->r_min > 0.0 ? a->r_min : 10.0 * m.resolution();
      const double hi = a->r_max > 0.0 ? a->r_max : m.diameter() / 10.0;
      if (hi < lo) throw RangeError("uniformity: empty scale range");
      const std::vector<double> scales = geometric_grid(lo, hi, a->ratio);
      const CenterSample sample = sample_centers(m, a->centers);
      outputs.add(a->out, uniformity_json(uniformity_identity_check(m, index, spec, sample.indices,
                                                                    scales),
                                          spec.to_string()));
    };
  });
}

// wavelet-check ----------------------------------------------------------

std::string coefficients_csv(const WaveletFamily& family, int n, int level_lo, int level_hi) {
  std::string text = "level,side,offset,orientation,a\n";
  for (int level = level_lo; level <= level_hi; ++level) {
    for (const WaveletCube& cube : cubes_meeting_ball(n, level)) {
      std::string offset;
      for (std::size_t i = 0; i < cube.offset.size(); ++i)
        offset += (i ? ";" : "") + std::to_string(cube.offset[i]);
      text += std::to_string(level) + "," + format_double(cube.side()) + "," + offset + "," +
              std::to_string(cube.orientation) + "," +
              format_double(h_coefficient(family, cube)) + "\n";
    }
  }
  return text;
}

void setup_wavelet(CLI::App& app, Outputs& outputs, std::function<void()>& action) {
  auto* cmd = app.add_subcommand("wavelet-check", "Coefficient checks for the ball indicator");
  struct Args {
    int n = 1;
    int J = 12;
    std::vector<int> large{-6, -2};
    std::vector<int> small{3, 8};
    std::size_t vanishing = 100;
    std::uint64_t seed = 1;
    std::string out, csv;
  };
  auto a = std::make_shared<Args>();
  cmd->add_option("--n", a->n, "Dimension, 1 or 2")->capture_default_str();
  cmd->add_option("--J", a->J, "Cascade depth")->capture_default_str();
  cmd->add_option("--large-levels", a->large, "Level range for large cubes (side 2^-level)")
      ->expected(2)
      ->capture_default_str();
  cmd->add_option("--small-levels", a->small, "Level range for small cubes")
      ->expected(2)
      ->capture_default_str();
  cmd->add_option("--vanishing-count", a->vanishing, "Off-sphere cubes per level")
      ->capture_default_str();
  cmd->add_option("--seed", a->seed, "Seed for the off-sphere cube draw")->capture_default_str();
  cmd->add_option("--out", a->out, "Summary JSON")->required();
  cmd->add_option("--csv", a->csv, "Optional CSV of large-cube coefficients");
  cmd->callback([&, a] {
    action = [&, a] {
      if (a->n != 1 && a->n != 2) throw_invalid("--n must be 1 or 2");
      if (a->J < 4 || a->J > 16) throw_invalid("--J must lie in 4..16");
      const WaveletFamily family(a->J);
      WaveletSummary s;
      s.n = a->n;
      s.large = decay_regression(family, a->n, a->large[0], a->large[1]);
      s.small = decay_regression(family, a->n, a->small[0], a->small[1]);
      const std::vector<int> levels{-2, 0, 2, 4, 6, 8};
      s.vanishing = vanishing_check(family, a->n, levels, a->vanishing, a->seed);
      if (a->n == 1)
        s.reconstruction_points = {{0.0}, {0.5}, {1.5}, {-1.5}, {3.0}, {-2.6}};
      else
        s.reconstruction_points = {{0.0, 0.0}, {0.5, 0.3}, {1.1, 0.9}, {-1.5, 0.2}, {2.4, 1.0}};
      s.reconstruction = reconstruction_check(family, a->n, -4, 10, s.reconstruction_points);
      outputs.add(a->out, wavelet_json(s));
      if (!a->csv.empty())
        outputs.add(a->csv, coefficients_csv(family, a->n, a->large[0], a->large[1]));
    };
  });
}

// report -----------------------------------------------------------------

struct Curve {
  std::string source, series;
  double x, y;
};

std::string fmt(const ordered_json& v) {
  if (v.is_null()) return "n/a";
  if (v.is_number_float()) return format_double(v.get<double>());
  return v.dump();
}

void describe(const std::string& name, const ordered_json& j, std::string& md,
              std::vector<Curve>& curves) {
  const std::string kind = j.value("kind", "");
  md += "## " + name + " (" + kind + ")\n\n";
  if (kind == "carleson") {
    md += "Functional `" + j.at("functional").get<std::string>() + "`, r_min " +
          fmt(j.at("r_min")) + ".\n\n| R | V | centers |\n|---|---|---|\n";
    for (const auto& b : j.at("balls")) {
      md += "| " + fmt(b.at("radius")) + " | " + fmt(b.at("value")) + " | " +
            fmt(b.at("centers")) + " |\n";
      if (!b.at("value").is_null())
        curves.push_back({name, "V", b.at("radius").get<double>(), b.at("value").get<double>()});
    }
    const auto& s = j.at("summary");
    md += "\nsup " + fmt(s.at("sup")) + ", slope " + fmt(s.at("slope")) + ", correlation " +
          fmt(s.at("correlation")) + "\n\n";
  } else if (kind == "alpha-packing") {
    md += "| depth | cumulative ratio | mean alpha |\n|---|---|---|\n";
    for (const auto& r : j.at("depths")) {
      md += "| " + fmt(r.at("depth")) + " | " + fmt(r.at("cumulative_ratio")) + " | " +
            fmt(r.at("mean_alpha")) + " |\n";
      if (!r.at("cumulative_ratio").is_null())
        curves.push_back({name, "cumulative_ratio", r.at("depth").get<double>(),
                          r.at("cumulative_ratio").get<double>()});
    }
    md += "\n";
  } else if (kind == "wcd") {
    md += "| radius | c1 | defect |\n|---|---|---|\n";
    for (const auto& b : j.at("balls"))
      md += "| " + fmt(b.at("radius")) + " | " + fmt(b.at("c1")) + " | " + fmt(b.at("defect")) +
            " |\n";
    md += "\n";
  } else if (kind == "uniformity") {
    md += "Kernel `" + j.at("kernel").get<std::string>() + "`: constant " +
          fmt(j.at("constant")) + ", variation " + fmt(j.at("variation")) + "\n\n";
  } else if (kind == "wavelet-check") {
    md += "| check | value | expected | pass |\n|---|---|---|---|\n";
    for (const char* key : {"decay_large", "decay_small"}) {
      const auto& d = j.at(key);
      md += std::string("| ") + key + " slope | " + fmt(d.at("slope")) + " | " +
            fmt(d.at("expected_slope")) + " | " + fmt(d.at("pass")) + " |\n";
      const auto& sides = d.at("sides");
      const auto& values = d.at("max_coefficient");
      for (std::size_t i = 0; i < sides.size(); ++i)
        if (!values[i].is_null())
          curves.push_back({name, key, sides[i].get<double>(), values[i].get<double>()});
    }
    md += "| vanishing max | " + fmt(j.at("vanishing").at("max_abs")) + " | 0 | " +
          fmt(j.at("vanishing").at("pass")) + " |\n";
    md += "| reconstruction error | " + fmt(j.at("reconstruction").at("max_error")) +
          " | 0 | " + fmt(j.at("reconstruction").at("pass")) + " |\n\n";
  } else if (kind == "lattice") {
    md += "| generation | cubes | mass ratio | diameter ratio | flagged |\n|---|---|---|---|---|\n";
    for (const auto& g : j.at("audit").at("generations"))
      md += "| " + fmt(g.at("generation")) + " | " + fmt(g.at("cubes")) + " | " +
            fmt(g.at("mass_ratio")) + " | " + fmt(g.at("diameter_ratio")) + " | " +
            fmt(g.at("flagged")) + " |\n";
    md += "\n";
  } else {
    throw DataError("'" + name + "': unknown report kind '" + kind + "'");
  }
}

void setup_report(CLI::App& app, Outputs& outputs, std::function<void()>& action) {
  auto* cmd = app.add_subcommand("report", "Merge result JSONs into a markdown summary");
  struct Args {
    std::vector<std::string> inputs;
    std::string out, csv;
  };
  auto a = std::make_shared<Args>();
  cmd->add_option("--inputs", a->inputs, "Result JSON files")->required();
  cmd->add_option("--out", a->out, "Markdown summary")->required();
  cmd->add_option("--csv", a->csv, "Plot-ready CSV (source,series,x,y)");
  cmd->callback([&, a] {
    action = [&, a] {
      std::string md = "# rectiscan report\n\n";
      std::vector<Curve> curves;
      for (const std::string& path : a->inputs) {
        ordered_json j;
        try {
          j = ordered_json::parse(read_text_file(path));
          if (j.value("schema_version", 0) != kSchemaVersion)
            throw DataError("'" + path + "': unsupported schema_version");
          describe(std::filesystem::path(path).filename().string(), j, md, curves);
        } catch (const ordered_json::exception& e) {
          throw DataError("'" + path + "': " + e.what());
        }
      }
      outputs.add(a->out, md);
      if (!a->csv.empty()) {
        std::string text = "source,series,x,y\n";
        for (const Curve& c : curves)
          text += c.source + "," + c.series + "," + format_double(c.x) + "," + format_double(c.y) +
                  "\n";
        outputs.add(a->csv, text);
      }
    };
  });
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multiscale square functions and flatness coefficients of point measures",
               "rectiscan"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (default: RECTISCAN_THREADS or all cores)");

  Outputs outputs;
  std::function<void()> action;
  setup_generate(app, outputs, action);
  setup_analyze(app, outputs, action, err);
  setup_carleson(app, outputs, action);
  setup_alpha_audit(app, outputs, action);
  setup_wcd(app, outputs, action);
  setup_uniformity(app, outputs, action);
  setup_wavelet(app, outputs, action);
  setup_report(app, outputs, action);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    set_thread_count(threads);
    action();
    outputs.commit();
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const Error& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}

}  // namespace rectiscan::cli
