#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rectiscan/alpha.hpp"
#include "rectiscan/carleson.hpp"
#include "rectiscan/lattice.hpp"
#include "rectiscan/measure.hpp"
#include "rectiscan/square_functions.hpp"
#include "rectiscan/uniformity.hpp"
#include "rectiscan/wavelets.hpp"

namespace rectiscan {

inline constexpr int kSchemaVersion = 1;

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

/// CSV with header x1,...,xd,w.
std::string measure_csv(const DiscreteMeasure& measure);
void write_measure_csv(const std::string& path, const DiscreteMeasure& measure);

/// Reads x1,...,xd[,w]. Without a w column the weights are uniform with
/// total mass diameter^n. Throws DataError on unreadable or non-finite data.
DiscreteMeasure read_measure_csv(const std::string& path, int n,
                                 std::optional<double> resolution = std::nullopt);

/// CSV center_index,r,value,boundary.
std::string field_csv(const CoefficientField& field);
void write_field_csv(const std::string& path, const CoefficientField& field);

std::string lattice_json(const CubeLattice& lattice, const DiscreteMeasure& measure,
                         const LatticeAudit& audit);
std::string carleson_json(const CarlesonReport& report);
std::string wcd_json(const std::vector<WcdDefect>& defects);
std::string uniformity_json(const UniformityCheck& check, const std::string& kernel);
std::string packing_json(const PackingAudit& audit, const CubeLattice& lattice);

struct WaveletSummary {
  int n = 1;
  DecayFit large;
  DecayFit small;
  VanishingCheck vanishing;
  ReconstructionCheck reconstruction;
  std::vector<std::vector<double>> reconstruction_points;
};
std::string wavelet_json(const WaveletSummary& summary);

/// Writes the whole file or throws DataError.
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace rectiscan
