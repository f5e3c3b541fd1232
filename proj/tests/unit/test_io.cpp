#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <json.hpp>

#include "rectiscan/datasets.hpp"
#include "rectiscan/errors.hpp"
#include "rectiscan/io.hpp"

using namespace rectiscan;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("rectiscan_io_" + std::to_string(::getpid()))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

}  // namespace

TEST(Io, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0}) EXPECT_EQ(std::stod(format_double(v)), v);
  EXPECT_EQ(format_double(0.5), "0.5");
}

TEST(Io, MeasureCsvRoundTrip) {
  TempDir dir;
  GeneratorSpec spec;
  spec.kind = GeneratorKind::PerturbedPlane;
  spec.d = 3;
  spec.n = 2;
  spec.points = 100;
  const DiscreteMeasure m = generate(spec);
  write_measure_csv(dir.file("m.csv"), m);
  const DiscreteMeasure back = read_measure_csv(dir.file("m.csv"), 2);
  EXPECT_EQ(back.coords(), m.coords());
  EXPECT_EQ(back.weights(), m.weights());
  EXPECT_EQ(back.target_dim(), 2);
  EXPECT_EQ(measure_csv(back), measure_csv(m));
}

TEST(Io, UnweightedCsvGetsDiameterMass) {
  TempDir dir;
  write_text_file(dir.file("u.csv"), "x1,x2\n0,0\n1,0\n2,0\n");
  const DiscreteMeasure m = read_measure_csv(dir.file("u.csv"), 1);
  EXPECT_NEAR(m.total_mass(), 2.0, 1e-15);
  EXPECT_EQ(read_measure_csv(dir.file("u.csv"), 1, 0.25).resolution(), 0.25);
}

TEST(Io, MalformedCsvIsDataError) {
  TempDir dir;
  const std::vector<std::string> bad{"",
                                     "x1,y\n0,0\n",
                                     "x1,x2,w\n0,0\n",
                                     "x1,x2,w\n0,abc,1\n",
                                     "x1,x2,w\n0,nan,1\n",
                                     "x1,x2,w\n0,0,-1\n",
                                     "x1,x2,w\n",
                                     "x1,x2\n0,0\n"};
  for (std::size_t i = 0; i < bad.size(); ++i) {
    const std::string path = dir.file("bad" + std::to_string(i) + ".csv");
    write_text_file(path, bad[i]);
    EXPECT_THROW(read_measure_csv(path, i + 1 == bad.size() ? 2 : 1), DataError) << bad[i];
  }
  EXPECT_THROW(read_measure_csv(dir.file("missing.csv"), 1), DataError);
}

TEST(Io, FieldCsvLayout) {
  CoefficientField f;
  f.centers = {3, 9};
  f.center_mass = {1.0, 1.0};
  f.scales = {0.5, 1.0};
  f.values = {0.25, NAN, -1.0, 2.0};
  f.boundary = {false, true, false, false};
  EXPECT_EQ(field_csv(f),
            "center_index,r,value,boundary\n3,0.5,0.25,0\n3,1,nan,1\n9,0.5,-1,0\n9,1,2,0\n");
}

TEST(Io, CarlesonJsonIsVersionedAndNullsNonFinite) {
  CarlesonReport report;
  report.functional = "delta-density";
  report.r_min = 0.01;
  report.scale_ratio = 2.0;
  report.balls.push_back({{0.0, 0.0}, 1.0, NAN, 3, 4, false});
  report.warnings.push_back("note");
  const auto j = nlohmann::json::parse(carleson_json(report));
  EXPECT_EQ(j["schema_version"], kSchemaVersion);
  EXPECT_EQ(j["kind"], "carleson");
  EXPECT_TRUE(j["balls"][0]["value"].is_null());
  EXPECT_EQ(j["balls"][0]["cells"], 4);
  EXPECT_EQ(j["warnings"][0], "note");
  EXPECT_EQ(carleson_json(report), carleson_json(report));
}

TEST(Io, LatticeJson) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::Segment;
  spec.points = 65;
  const DiscreteMeasure m = generate(spec);
  const CubeLattice lattice = build_lattice(m, SpatialIndex(m), 3);
  const auto j = nlohmann::json::parse(lattice_json(lattice, m, lattice_audit(lattice, m)));
  EXPECT_EQ(j["kind"], "lattice");
  EXPECT_EQ(j["cubes"].size(), lattice.cubes().size());
  EXPECT_EQ(j["audit"]["generations"].size(), 4u);
}

TEST(Io, WriteFailureIsDataError) {
  EXPECT_THROW(write_text_file("/nonexistent-dir/x.txt", "x"), DataError);
}
