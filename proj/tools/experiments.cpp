#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "rtf/baseline.hpp"
#include "rtf/image_io.hpp"
#include "rtf/sequences.hpp"

namespace rtf::cli {

namespace {

long double ipow(long double base, int exponent) {
  long double r = 1;
  for (int k = 0; k < exponent; ++k) r *= base;
  return r;
}

bool has_suffix(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

/// Per-sample driver: fn(sample_index, xi) for every index, fanned out over
/// contiguous index ranges.
void for_each_variate(const ExperimentConfig& config, const std::function<void(std::uint64_t, double)>& fn) {
  const std::uint64_t total = config.samples;
  const unsigned workers = static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(config.threads, total)));
  auto run = [&](std::uint64_t begin, std::uint64_t end) {
    SplitMix64 rng = SplitMix64(config.seed).advanced(begin);
    for (std::uint64_t i = begin; i < end; ++i) {
      const double xi = config.sequence == Sequence::prng ? rng.next_double() : hammersley(i, total).x;
      fn(i, xi);
    }
  };
  if (workers == 1) {
    run(0, total);
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back(run, total * w / workers, total * (w + 1) / workers);
  }
}

/// Index-returning samplers over one distribution, in one precision.
template <std::floating_point Scalar>
class SamplerSet {
 public:
  SamplerSet(const Pmf& pmf, std::uint32_t m)
      : strict_(build_strict_cdf<Scalar>(pmf)),
        guide_(build_guide_table(strict_.cdf, m)),
        alias_(build_alias_table(pmf)),
        forest_(build_forest(strict_.cdf, m, bench_options(false))),
        balanced_(build_forest(strict_.cdf, m, bench_options(true))),
        tree_(build_tree(strict_.cdf, bench_options(false))) {}

  /// Returns a sampler (xi, counter) -> original interval index.
  std::function<std::uint32_t(double, LoadCounter*)> get(std::string_view name) const {
    const auto& cdf = strict_.cdf;
    const auto* remap = &strict_.remap;
    auto wrap = [remap](auto search) {
      return [remap, search](double xi, LoadCounter* counter) { return (*remap)[search(narrow(xi), counter)]; };
    };
    if (name == "linear") return wrap([&cdf](Scalar xi, LoadCounter* c) { return sample_linear(cdf, xi, c); });
    if (name == "binary") return wrap([&cdf](Scalar xi, LoadCounter* c) { return sample_binary(cdf, xi, c); });
    if (name == "cutpoint-linear") {
      return wrap([this](Scalar xi, LoadCounter* c) { return sample_cutpoint_linear(guide_, strict_.cdf, xi, c); });
    }
    if (name == "cutpoint-binary") {
      return wrap([this](Scalar xi, LoadCounter* c) { return sample_cutpoint_binary(guide_, strict_.cdf, xi, c); });
    }
    if (name == "radix-forest") return wrap([this](Scalar xi, LoadCounter* c) { return forest_.sample(xi, c); });
    if (name == "radix-forest-rebalanced") {
      return wrap([this](Scalar xi, LoadCounter* c) { return balanced_.sample(xi, c); });
    }
    if (name == "radix-tree") return wrap([this](Scalar xi, LoadCounter* c) { return tree_.sample(xi, c); });
    if (name == "alias") {
      return [this](double xi, LoadCounter* c) { return sample_alias(alias_, xi, c); };
    }
    throw Error(ErrorCode::InvalidArgument, "unknown sampler '" + std::string(name) + "'");
  }

 private:
  /// Cells covered by one interval resolve from the table alone. Without
  /// rebalancing the trees are the plain radix trees of the measured method.
  static ForestOptions bench_options(bool rebalance) {
    ForestOptions options;
    options.collapse_single_interval_cells = true;
    if (!rebalance) options.rebalance_slack.reset();
    return options;
  }

  static Scalar narrow(double xi) noexcept {
    const auto x = static_cast<Scalar>(xi);
    return x < Scalar(1) ? x : std::nextafter(Scalar(1), Scalar(0));
  }

  CompactedCdf<Scalar> strict_;
  GuideTable guide_;
  AliasTable alias_;
  RadixForest<Scalar> forest_;
  RadixForest<Scalar> balanced_;
  RadixForest<Scalar> tree_;
};

template <std::floating_point Scalar>
std::vector<BenchRow> bench_in(const ExperimentConfig& config, const Pmf& pmf) {
  const SamplerSet<Scalar> set(pmf, config.m.value_or(static_cast<std::uint32_t>(pmf.size())));
  std::vector<BenchRow> rows;
  for (const std::string& name : config.samplers) {
    const auto sampler = set.get(name);
    LoadTrace trace(config.samples);
    for_each_variate(config, [&](std::uint64_t i, double xi) {
      LoadCounter counter;
      sampler(xi, &counter);
      trace[i] = counter.count();
    });
    rows.push_back({name, config.distribution, stats(trace, config.group_size)});
  }
  return rows;
}

Pmf density_pmf(const Density2D& density) { return Pmf(density.values); }

}  // namespace

const std::vector<std::string>& family_names() {
  static const std::vector<std::string> names{"power20", "mod32-power25", "mod64-power35", "four-spikes",
                                              "uniform", "sine-squared",  "geometric"};
  return names;
}

const std::vector<std::string>& sampler_names() {
  static const std::vector<std::string> names{"linear",       "binary",
                                              "cutpoint-linear", "cutpoint-binary",
                                              "alias",        "radix-forest",
                                              "radix-forest-rebalanced", "radix-tree"};
  return names;
}

Pmf make_family(std::string_view name, std::uint32_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "n must be at least 1");
  std::vector<double> w(n);
  if (name == "power20") {
    for (std::uint32_t i = 0; i < n; ++i) w[i] = static_cast<double>(ipow(i + 1.0L, 20));
  } else if (name == "mod32-power25") {
    for (std::uint32_t i = 0; i < n; ++i) w[i] = static_cast<double>(ipow(i % 32 + 1.0L, 25));
  } else if (name == "mod64-power35") {
    for (std::uint32_t i = 0; i < n; ++i) w[i] = static_cast<double>(ipow(i % 64 + 1.0L, 35));
  } else if (name == "four-spikes") {
    if (n < 8) throw Error(ErrorCode::InvalidArgument, "four-spikes needs n >= 8");
    const std::uint32_t spikes[] = {n / 8, 3 * n / 8, 5 * n / 8, 7 * n / 8};
    std::fill(w.begin(), w.end(), 0.04 / (n - 4));
    for (const std::uint32_t s : spikes) w[s] = 0.24;
  } else if (name == "uniform") {
    std::fill(w.begin(), w.end(), 1.0);
  } else if (name == "sine-squared") {
    for (std::uint32_t i = 0; i < n; ++i) w[i] = 1 - std::cos(2 * std::numbers::pi * i / n);
    if (n == 1) w[0] = 1;
  } else if (name == "geometric") {
    for (std::uint32_t i = 0; i < n; ++i) w[i] = std::ldexp(1.0, -static_cast<int>(std::min(i, 2000u)));
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown distribution family '" + std::string(name) + "'");
  }
  return Pmf(std::move(w));
}

Pmf load_weights(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::vector<double> weights;
  std::string token;
  while (file >> token) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) {
      throw Error(ErrorCode::ParseError, "bad weight '" + token + "' in " + path.string());
    }
    weights.push_back(v);
  }
  return Pmf(std::move(weights));
}

Pmf resolve_distribution(std::string_view spec, std::uint32_t n) {
  const auto& names = family_names();
  if (std::find(names.begin(), names.end(), spec) != names.end()) return make_family(spec, n);
  return load_weights(std::filesystem::path(spec));
}

bool is_density_spec(std::string_view spec) {
  return spec == "hdr" || spec == "uniform2d" || has_suffix(spec, ".pgm") || has_suffix(spec, ".pfm");
}

Density2D make_density(std::string_view spec, std::uint32_t width, std::uint32_t height) {
  if (spec == "uniform2d") return Density2D(width, height, std::vector<double>(std::size_t{width} * height, 1.0));
  if (spec == "hdr") {
    std::vector<double> f(std::size_t{width} * height);
    for (std::uint32_t r = 0; r < height; ++r) {
      for (std::uint32_t c = 0; c < width; ++c) {
        const double x = (c + 0.5) / width;
        const double y = (r + 0.5) / height;
        f[std::size_t{r} * width + c] = std::sin(2 * std::numbers::pi * x + 1) * std::cos(3 * std::numbers::pi * y) +
                                        0.5 * std::sin(5 * std::numbers::pi * x * y);
      }
    }
    const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
    const double fmin = *lo;
    const double span = *hi - *lo;
    for (double& v : f) v = span > 0 ? std::pow(10.0, 4 * (v - fmin) / span) : 1.0;
    return Density2D(width, height, std::move(f));
  }
  const auto& families = family_names();
  if (std::find(families.begin(), families.end(), spec) != families.end()) {
    throw Error(ErrorCode::InvalidArgument, "'" + std::string(spec) + "' is a 1D family, not a 2D density");
  }
  return load_image(std::filesystem::path(spec));
}

void check_config(const ExperimentConfig& config) {
  if (config.n == 0) throw Error(ErrorCode::InvalidArgument, "--n must be at least 1");
  if (config.m && *config.m == 0) throw Error(ErrorCode::InvalidArgument, "--m must be at least 1");
  if (config.group_size == 0) throw Error(ErrorCode::InvalidArgument, "--group-size must be at least 1");
  if (config.precision != 32 && config.precision != 64) {
    throw Error(ErrorCode::InvalidArgument, "--precision must be 32 or 64");
  }
  if (config.min_log2 > config.max_log2 || config.max_log2 > 40) {
    throw Error(ErrorCode::InvalidArgument, "convergence range must satisfy min <= max <= 40");
  }
  if (config.threads == 0) throw Error(ErrorCode::InvalidArgument, "--threads must be at least 1");
  const auto& known = sampler_names();
  for (const std::string& s : config.samplers) {
    if (std::find(known.begin(), known.end(), s) == known.end()) {
      throw Error(ErrorCode::InvalidArgument, "unknown sampler '" + s + "'");
    }
  }
}

std::vector<BenchRow> run_bench(const ExperimentConfig& config) {
  check_config(config);
  if (config.samples % config.group_size != 0) {
    throw Error(ErrorCode::InvalidArgument, "--samples must be a multiple of --group-size");
  }
  if (config.samples == 0) throw Error(ErrorCode::EmptyTrace, "sample budget is zero");
  const Pmf pmf = resolve_distribution(config.distribution, config.n);
  return config.precision == 32 ? bench_in<float>(config, pmf) : bench_in<double>(config, pmf);
}

std::vector<ConvergenceRow> run_convergence(const ExperimentConfig& config) {
  check_config(config);
  std::vector<ConvergenceRow> rows;
  if (is_density_spec(config.distribution)) {
    const Density2D density = make_density(config.distribution, config.width, config.height);
    const Pmf pmf = density_pmf(density);
    const Sampler2D monotonic = build_2d(density);
    const AliasSampler2D alias(density);
    for (std::uint32_t k = config.min_log2; k <= config.max_log2; ++k) {
      const std::uint64_t count = std::uint64_t{1} << k;
      Histogram h_alias(pmf.size());
      Histogram h_mono(pmf.size());
      for (std::uint64_t i = 0; i < count; ++i) {
        const Point2 p = hammersley(i, count);
        const Sample2D a = alias.sample(p.x, p.y);
        const Sample2D s = monotonic.sample(p.x, p.y);
        h_alias.add(std::size_t{a.row} * density.width + a.col);
        h_mono.add(std::size_t{s.row} * density.width + s.col);
      }
      rows.push_back({count, quadratic_error(pmf, h_alias), quadratic_error(pmf, h_mono)});
    }
    return rows;
  }

  const Pmf pmf = resolve_distribution(config.distribution, config.n);
  const AliasTable alias = build_alias_table(pmf);
  const CompactedCdf<double> strict = build_strict_cdf<double>(pmf);
  const RadixForest<double> forest = build_forest(strict.cdf, config.m.value_or(static_cast<std::uint32_t>(pmf.size())));
  for (std::uint32_t k = config.min_log2; k <= config.max_log2; ++k) {
    const std::uint64_t count = std::uint64_t{1} << k;
    PointStream a_stream = PointStream::hammersley(count);
    PointStream m_stream = PointStream::hammersley(count);
    const Histogram h_alias = histogram([&](double xi) { return sample_alias(alias, xi); }, a_stream, pmf.size(), 1);
    const Histogram h_mono = histogram([&](double xi) { return strict.remap[forest.sample(xi)]; }, m_stream,
                                       pmf.size(), 1);
    rows.push_back({count, quadratic_error(pmf, h_alias), quadratic_error(pmf, h_mono)});
  }
  return rows;
}

BuiltForest build_for_config(const ExperimentConfig& config) {
  check_config(config);
  const Pmf pmf = resolve_distribution(config.distribution, config.n);
  CompactedCdf<double> strict = build_strict_cdf<double>(pmf);
  const std::size_t dropped = pmf.size() - strict.cdf.intervals();
  ForestOptions options;
  options.threads = config.threads;
  return {build_forest(strict.cdf, config.m.value_or(static_cast<std::uint32_t>(strict.cdf.intervals())), options),
          dropped};
}

ValidationSummary validate_for_cli(const RadixForest<double>& forest) {
  ValidationSummary summary{validate_forest(forest), std::nullopt};
  if (summary.report.ok()) summary.depths = depth_stats(forest);
  return summary;
}

std::vector<Sample2D> run_sample2d(const ExperimentConfig& config) {
  check_config(config);
  const Density2D density = make_density(config.distribution, config.width, config.height);
  const Sampler2D sampler = build_2d(density);
  std::vector<Sample2D> out;
  out.reserve(config.samples);
  PointStream stream = config.sequence == Sequence::prng ? PointStream::prng(config.seed, config.samples)
                                                         : PointStream::hammersley(config.samples);
  while (const auto p = stream.next()) out.push_back(sampler.sample(p->x, p->y));
  return out;
}

std::string format_number(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::string format_bench(const std::vector<BenchRow>& rows, OutputFormat format) {
  if (format == OutputFormat::json) {
    nlohmann::json out = nlohmann::json::array();
    for (const BenchRow& r : rows) {
      out.push_back({{"method", r.method},
                     {"distribution", r.distribution},
                     {"max", r.stats.max},
                     {"avg", r.stats.average},
                     {"avg32", r.stats.average_group}});
    }
    return out.dump(2) + "\n";
  }
  std::string csv = "method,distribution,max,avg,avg32\n";
  for (const BenchRow& r : rows) {
    csv += r.method + "," + r.distribution + "," + std::to_string(r.stats.max) + "," + format_number(r.stats.average) +
           "," + format_number(r.stats.average_group) + "\n";
  }
  return csv;
}

std::string format_convergence(const std::vector<ConvergenceRow>& rows, OutputFormat format) {
  if (format == OutputFormat::json) {
    nlohmann::json out = nlohmann::json::array();
    for (const ConvergenceRow& r : rows) {
      out.push_back({{"N", r.samples}, {"e_alias", r.e_alias}, {"e_monotonic", r.e_monotonic}});
    }
    return out.dump(2) + "\n";
  }
  std::string csv = "N,e_alias,e_monotonic\n";
  for (const ConvergenceRow& r : rows) {
    csv += std::to_string(r.samples) + "," + format_number(r.e_alias) + "," + format_number(r.e_monotonic) + "\n";
  }
  return csv;
}

std::string format_validation(const ValidationSummary& summary, OutputFormat format) {
  const ValidationReport& report = summary.report;
  if (format == OutputFormat::json) {
    nlohmann::json out;
    out["ok"] = report.ok();
    out["issues"] = nlohmann::json::array();
    for (const ValidationIssue& issue : report.issues) {
      out["issues"].push_back({{"check", std::string(to_string(issue.check))}, {"detail", issue.detail}});
    }
    out["suppressed"] = report.suppressed;
    if (summary.depths) {
      out["max_depth"] = summary.depths->max_depth;
      nlohmann::json cells = nlohmann::json::array();
      for (const CellDepth& c : summary.depths->cells) cells.push_back({{"leaves", c.leaves}, {"depth", c.depth}});
      out["cells"] = std::move(cells);
    }
    return out.dump(2) + "\n";
  }
  std::ostringstream out;
  out << (report.ok() ? "ok" : "FAILED") << "\n";
  for (const ValidationIssue& issue : report.issues) out << to_string(issue.check) << ": " << issue.detail << "\n";
  if (report.suppressed) out << "(" << report.suppressed << " more issues)\n";
  if (summary.depths) {
    out << "max_depth " << summary.depths->max_depth << "\n";
    out << "cell,leaves,depth\n";
    for (std::size_t g = 0; g < summary.depths->cells.size(); ++g) {
      out << g << "," << summary.depths->cells[g].leaves << "," << summary.depths->cells[g].depth << "\n";
    }
  }
  return out.str();
}

std::string format_samples(const std::vector<Sample2D>& samples, OutputFormat format) {
  if (format == OutputFormat::json) {
    nlohmann::json out = nlohmann::json::array();
    for (const Sample2D& s : samples) out.push_back({{"row", s.row}, {"col", s.col}, {"u", s.u}, {"v", s.v}});
    return out.dump(2) + "\n";
  }
  std::string csv = "row,col,u,v\n";
  for (const Sample2D& s : samples) {
    csv += std::to_string(s.row) + "," + std::to_string(s.col) + "," + format_number(s.u) + "," + format_number(s.v) +
           "\n";
  }
  return csv;
}

}  // namespace rtf::cli
