#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "experiments.hpp"
#include "rtf/forest_io.hpp"

using namespace rtf;
using namespace rtf::cli;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::IoError;
}

ExperimentConfig small_bench(std::string dist) {
  ExperimentConfig c;
  c.distribution = std::move(dist);
  c.n = 256;
  c.samples = 1u << 14;
  c.samplers = sampler_names();
  return c;
}

}  // namespace

TEST(Families, Weights) {
  const Pmf p = make_family("power20", 4);
  EXPECT_EQ(p.weights()[0], 1.0);
  EXPECT_EQ(p.weights()[3], std::pow(4.0, 20));

  const Pmf mod = make_family("mod32-power25", 64);
  EXPECT_EQ(mod.weights()[32], 1.0);
  EXPECT_EQ(mod.weights()[31], std::pow(32.0, 25));

  const Pmf spikes = make_family("four-spikes", 1024);
  for (std::size_t i : {128u, 384u, 640u, 896u}) EXPECT_NEAR(spikes.probability(i), 0.24, 1e-15);
  EXPECT_NEAR(spikes.probability(0), 0.04 / 1020, 1e-18);

  const Pmf sine = make_family("sine-squared", 64);
  EXPECT_EQ(sine.weights()[0], 0.0);
  EXPECT_NEAR(sine.probability(16), 1.0 / 64, 1e-15);
  EXPECT_NEAR(sine.probability(32), 2.0 / 64, 1e-15);

  EXPECT_EQ(code_of([] { make_family("nope", 8); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { make_family("four-spikes", 4); }), ErrorCode::InvalidArgument);
}

TEST(Families, WeightFile) {
  const auto path = std::filesystem::temp_directory_path() / "rtf_weights.txt";
  std::ofstream(path) << "1 2\n3.5\n";
  EXPECT_EQ(resolve_distribution(path.string(), 0).size(), 3u);
  std::ofstream(path) << "1 x 2";
  EXPECT_EQ(code_of([&] { load_weights(path); }), ErrorCode::ParseError);
  std::filesystem::remove(path);
  EXPECT_EQ(code_of([&] { load_weights(path); }), ErrorCode::IoError);
}

TEST(Densities, HdrRange) {
  const Density2D d = make_density("hdr", 64, 64);
  const auto [lo, hi] = std::minmax_element(d.values.begin(), d.values.end());
  EXPECT_NEAR(*hi / *lo, 1e4, 1e-6);
  EXPECT_EQ(code_of([] { make_density("power20", 4, 4); }), ErrorCode::InvalidArgument);
}

TEST(Config, Errors) {
  ExperimentConfig c;
  c.samples = 33;
  EXPECT_EQ(code_of([&] { run_bench(c); }), ErrorCode::InvalidArgument);
  c.samples = 0;
  EXPECT_EQ(code_of([&] { run_bench(c); }), ErrorCode::EmptyTrace);
  c.samples = 64;
  c.samplers = {"bogus"};
  EXPECT_EQ(code_of([&] { run_bench(c); }), ErrorCode::InvalidArgument);
  c.samplers = {"alias"};
  c.n = 0;
  EXPECT_EQ(code_of([&] { run_bench(c); }), ErrorCode::InvalidArgument);
}

TEST(Bench, OutputIndependentOfThreads) {
  for (const Sequence seq : {Sequence::prng, Sequence::hammersley}) {
    ExperimentConfig c = small_bench("mod64-power35");
    c.sequence = seq;
    const std::string one = format_bench(run_bench(c), OutputFormat::csv);
    for (unsigned threads : {2u, 3u, 8u}) {
      c.threads = threads;
      EXPECT_EQ(format_bench(run_bench(c), OutputFormat::csv), one);
    }
    EXPECT_EQ(one.substr(0, one.find('\n')), "method,distribution,max,avg,avg32");
  }
}

TEST(Bench, UniformCostsOneLoad) {
  ExperimentConfig c = small_bench("uniform");
  c.samplers = {"alias", "radix-forest", "cutpoint-binary"};
  for (const BenchRow& row : run_bench(c)) {
    if (row.method == "cutpoint-binary") {
      // The bracket [first[g], first[g+1]] always holds two candidates here.
      EXPECT_EQ(row.stats.max, 2u);
    } else {
      EXPECT_EQ(row.stats.max, 1u) << row.method;
      EXPECT_EQ(row.stats.average, 1.0) << row.method;
    }
  }
}

TEST(Bench, FloatPrecision) {
  ExperimentConfig c = small_bench("power20");
  c.precision = 32;
  const auto rows = run_bench(c);
  EXPECT_EQ(rows.size(), sampler_names().size());
  c.precision = 16;
  EXPECT_EQ(code_of([&] { run_bench(c); }), ErrorCode::InvalidArgument);
}

TEST(Bench, JsonHasTheSameNumbers) {
  ExperimentConfig c = small_bench("four-spikes");
  c.samplers = {"binary"};
  const auto rows = run_bench(c);
  const std::string json = format_bench(rows, OutputFormat::json);
  EXPECT_NE(json.find("\"method\": \"binary\""), std::string::npos);
  EXPECT_NE(json.find("\"avg32\""), std::string::npos);
}

TEST(Convergence, UniformIsExactAtDyadicN) {
  ExperimentConfig c;
  c.distribution = "uniform2d";
  c.width = 8;
  c.height = 8;
  c.min_log2 = 6;
  c.max_log2 = 10;
  for (const ConvergenceRow& r : run_convergence(c)) {
    EXPECT_EQ(r.e_alias, 0.0) << r.samples;
    EXPECT_EQ(r.e_monotonic, 0.0) << r.samples;
  }
}

TEST(Convergence, HalfSineMonotonicNotWorse) {
  ExperimentConfig c;
  c.distribution = "sine-squared";
  c.n = 64;
  c.min_log2 = 11;
  c.max_log2 = 11;
  const auto rows = run_convergence(c);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_LE(rows[0].e_monotonic, rows[0].e_alias);
}

TEST(Convergence, HdrAtQuarterMillion) {
  ExperimentConfig c;
  c.distribution = "hdr";
  c.min_log2 = 18;
  c.max_log2 = 18;
  const auto rows = run_convergence(c);
  EXPECT_LT(rows[0].e_monotonic, rows[0].e_alias);
  EXPECT_EQ(format_convergence(rows, OutputFormat::csv).substr(0, 22), "N,e_alias,e_monotonic\n");
}

TEST(BuildValidate, RoundTrip) {
  ExperimentConfig c;
  c.distribution = "mod32-power25";
  c.n = 512;
  const BuiltForest built = build_for_config(c);
  EXPECT_GT(built.dropped, 0u);
  const auto summary = validate_for_cli(built.forest);
  EXPECT_TRUE(summary.report.ok());
  ASSERT_TRUE(summary.depths.has_value());
  EXPECT_EQ(format_validation(summary, OutputFormat::csv).substr(0, 3), "ok\n");
}

TEST(Sample2d, CsvRows) {
  ExperimentConfig c;
  c.distribution = "hdr";
  c.width = 16;
  c.height = 8;
  c.samples = 64;
  c.sequence = Sequence::hammersley;
  const auto samples = run_sample2d(c);
  ASSERT_EQ(samples.size(), 64u);
  const std::string csv = format_samples(samples, OutputFormat::csv);
  EXPECT_EQ(csv.substr(0, 12), "row,col,u,v\n");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 65);
  for (const Sample2D& s : samples) {
    EXPECT_LT(s.row, 8u);
    EXPECT_LT(s.col, 16u);
  }
}

TEST(Format, SeventeenDigits) {
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(1.0), "1");
}

TEST(Sample2d, BudgetNeedNotFillAGroup) {
  ExperimentConfig c;
  c.distribution = "uniform2d";
  c.width = 4;
  c.height = 4;
  c.samples = 5;
  EXPECT_EQ(run_sample2d(c).size(), 5u);
}
