#pragma once

// Experiment drivers behind the `rtf` command line tool. Everything here is
// deterministic for a fixed configuration, independent of the thread count.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rtf/metrics.hpp"
#include "rtf/radix_forest.hpp"
#include "rtf/sampler2d.hpp"

namespace rtf::cli {

enum class Sequence { prng, hammersley };
enum class OutputFormat { csv, json };

/// Test distributions by name. Indices are 0-based:
///   power20        (i+1)^20
///   mod32-power25  (i mod 32 + 1)^25
///   mod64-power35  (i mod 64 + 1)^35
///   four-spikes    0.24 at n/8, 3n/8, 5n/8, 7n/8; the remaining 0.04 spread evenly
///   uniform        1
///   sine-squared   1 - cos(2 pi i / n)
///   geometric      2^-i
Pmf make_family(std::string_view name, std::uint32_t n);
const std::vector<std::string>& family_names();

/// Whitespace-separated weights.
Pmf load_weights(const std::filesystem::path& path);

/// A family name, or else a path to a weight file.
Pmf resolve_distribution(std::string_view spec, std::uint32_t n);

/// Two-dimensional sources: "hdr" (smooth, exactly 1e4 dynamic range),
/// "uniform2d", or a PGM/PFM image path.
bool is_density_spec(std::string_view spec);
Density2D make_density(std::string_view spec, std::uint32_t width, std::uint32_t height);

const std::vector<std::string>& sampler_names();

struct ExperimentConfig {
  std::string distribution = "power20";
  std::uint32_t n = 1024;
  /// Guide-table cells; defaults to n.
  std::optional<std::uint32_t> m;
  std::vector<std::string> samplers{"cutpoint-binary", "radix-forest"};
  std::uint64_t samples = 1u << 20;
  std::uint64_t seed = 1;
  Sequence sequence = Sequence::prng;
  std::uint32_t group_size = 32;
  unsigned threads = 1;
  /// CDF precision in bits, 32 or 64.
  int precision = 64;
  OutputFormat format = OutputFormat::csv;
  // Convergence runs double the sample count from 2^min_log2 to 2^max_log2.
  std::uint32_t min_log2 = 14;
  std::uint32_t max_log2 = 20;
  std::uint32_t width = 64;
  std::uint32_t height = 64;
};

/// Throws InvalidArgument for inconsistent settings.
void check_config(const ExperimentConfig& config);

struct BenchRow {
  std::string method;
  std::string distribution;
  LoadStats stats;
};

/// Load statistics of every requested sampler over the same variates.
std::vector<BenchRow> run_bench(const ExperimentConfig& config);

struct ConvergenceRow {
  std::uint64_t samples = 0;
  double e_alias = 0;
  double e_monotonic = 0;
};

/// Quadratic error of alias and inverse-CDF sampling of the same Hammersley
/// sets. Densities are binned per pixel.
std::vector<ConvergenceRow> run_convergence(const ExperimentConfig& config);

/// Forest over the strictly increasing CDF of the configured distribution,
/// plus the number of zero-width intervals dropped to get there.
struct BuiltForest {
  RadixForest<double> forest;
  std::size_t dropped = 0;
};
BuiltForest build_for_config(const ExperimentConfig& config);

struct ValidationSummary {
  ValidationReport report;
  std::optional<DepthStats> depths;
};
ValidationSummary validate_for_cli(const RadixForest<double>& forest);

std::string format_bench(const std::vector<BenchRow>& rows, OutputFormat format);
std::string format_convergence(const std::vector<ConvergenceRow>& rows, OutputFormat format);
std::string format_validation(const ValidationSummary& summary, OutputFormat format);
std::string format_samples(const std::vector<Sample2D>& samples, OutputFormat format);

/// Shortest-round-trip-safe rendering with 17 significant digits.
std::string format_number(double value);

/// Sub-pixel samples of a density, one per stream point.
std::vector<Sample2D> run_sample2d(const ExperimentConfig& config);

}  // namespace rtf::cli
