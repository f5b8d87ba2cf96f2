#pragma once

// CSV matrix ingestion, JSON result documents and density-sample output.

#include "specdte/bipartite.hpp"
#include "specdte/spectra.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace specdte {

inline constexpr std::string_view kLibraryVersion = "0.1.0";

using Json = nlohmann::ordered_json;

struct CsvOptions {
  bool header = false;
  char delimiter = ',';
  double symmetrize_tol = kSymmetryTolerance;
};

/// Rectangular numeric grid, no shape interpretation.
Matrix read_csv_grid(const std::filesystem::path& path, const CsvOptions& opts = {});

/// Square grids become OutcomeMatrix, rectangular ones BipartiteMatrix.
using LoadedMatrix = std::variant<OutcomeMatrix, BipartiteMatrix>;
LoadedMatrix read_matrix_csv(const std::filesystem::path& path, const CsvOptions& opts = {});

/// Square input only.
OutcomeMatrix read_outcome_csv(const std::filesystem::path& path, int arm,
                               const CsvOptions& opts = {});

/// 17 significant digits, '.' decimal separator.
void write_matrix_csv(const Matrix& m, const std::filesystem::path& path, char delimiter = ',');

struct ResultDocument {
  std::string kind;
  std::string inputs_digest;
  Json parameters = Json::object();
  Json payload = Json::object();
  std::string library_version{kLibraryVersion};
};

Json to_json(const ResultDocument& doc);
ResultDocument result_from_json(const Json& j);

/// Deterministic text; rejects NaN and infinities anywhere in the document.
std::string serialize(const ResultDocument& doc);

void write_result_json(const ResultDocument& doc, const std::filesystem::path& path);
ResultDocument read_result_json(const std::filesystem::path& path);

std::string sha256_hex(std::string_view bytes);

/// SHA-256 over the length-prefixed contents of each file, in order.
std::string digest_files(const std::vector<std::filesystem::path>& paths);

/// Two-column CSV (value, weight) with weights normalized to sum to one.
void write_density_samples(const std::vector<double>& values, const std::vector<double>& weights,
                           const std::filesystem::path& path);

struct DensityGrid {
  std::vector<double> x;
  std::vector<double> density;
};

/// Weighted Gaussian kernel density on `points` equally spaced points from
/// min - 3h to max + 3h.
DensityGrid gaussian_density_grid(const std::vector<double>& values,
                                  const std::vector<double>& weights, double h,
                                  int points = 401);

/// Writes to a temporary sibling and renames it into place.
void atomic_write(const std::filesystem::path& path, std::string_view content);

}  // namespace specdte
