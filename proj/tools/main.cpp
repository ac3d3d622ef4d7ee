// rtf: load benchmarks, convergence runs, forest files and 2D samples.
//
// Exit codes: 0 success, 1 validation failure, 2 configuration, parse or I/O
// error.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "experiments.hpp"
#include "rtf/forest_io.hpp"

namespace {

using rtf::cli::ExperimentConfig;
using rtf::cli::OutputFormat;
using rtf::cli::Sequence;

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(out, std::ios::binary);
  if (!(file << text)) throw rtf::Error(rtf::ErrorCode::IoError, "cannot write " + out);
}

void add_common(CLI::App* cmd, ExperimentConfig& config, std::string& out) {
  cmd->add_option("--dist", config.distribution, "Family name, weight file, or 2D source (hdr, uniform2d, .pgm, .pfm)")
      ->capture_default_str();
  cmd->add_option("--n", config.n, "Number of intervals for named families")->capture_default_str();
  cmd->add_option("--out", out, "Output file (default stdout)");
  cmd->add_option("--format", config.format, "Output format")
      ->transform(CLI::CheckedTransformer(std::map<std::string, OutputFormat>{{"csv", OutputFormat::csv},
                                                                               {"json", OutputFormat::json}}));
  cmd->add_option("--threads", config.threads, "Worker threads")->capture_default_str();
}

void add_sampling(CLI::App* cmd, ExperimentConfig& config) {
  cmd->add_option("--samples", config.samples, "Sample budget")->capture_default_str();
  cmd->add_option("--seed", config.seed, "PRNG seed")->capture_default_str();
  cmd->add_option("--sequence", config.sequence, "Variate source")
      ->transform(CLI::CheckedTransformer(std::map<std::string, Sequence>{{"prng", Sequence::prng},
                                                                           {"hammersley", Sequence::hammersley}}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inverse-CDF sampling with a guide table and radix tree forest"};
  app.require_subcommand(1);

  ExperimentConfig config;
  std::string out;
  std::optional<std::uint32_t> m;
  std::string input;

  auto* bench = app.add_subcommand("bench", "Memory-load statistics per sampler");
  add_common(bench, config, out);
  add_sampling(bench, config);
  bench->add_option("--m", m, "Guide-table cells (default n)");
  bench->add_option("--samplers", config.samplers, "Samplers to run")
      ->delimiter(',')
      ->check(CLI::IsMember(rtf::cli::sampler_names()));
  bench->add_option("--group-size", config.group_size, "Group size for avg32")->capture_default_str();
  bench->add_option("--precision", config.precision, "CDF precision in bits (32 or 64)")->capture_default_str();

  auto* convergence = app.add_subcommand("convergence", "Quadratic error of alias vs monotonic sampling");
  add_common(convergence, config, out);
  convergence->add_option("--m", m, "Guide-table cells (default n)");
  convergence->add_option("--min-log2", config.min_log2, "Smallest sample count exponent")->capture_default_str();
  convergence->add_option("--max-log2", config.max_log2, "Largest sample count exponent")->capture_default_str();
  convergence->add_option("--width", config.width, "Width of synthetic 2D densities")->capture_default_str();
  convergence->add_option("--height", config.height, "Height of synthetic 2D densities")->capture_default_str();

  auto* build = app.add_subcommand("build", "Build a forest and write it as an RTF1 file");
  add_common(build, config, out);
  build->add_option("--m", m, "Guide-table cells (default n)");
  build->get_option("--out")->required()->description("Output file");

  auto* validate = app.add_subcommand("validate", "Check an RTF1 file");
  validate->add_option("file", input, "Forest file")->required();
  validate->add_option("--format", config.format, "Output format")
      ->transform(CLI::CheckedTransformer(std::map<std::string, OutputFormat>{{"csv", OutputFormat::csv},
                                                                               {"json", OutputFormat::json}}));

  auto* sample2d = app.add_subcommand("sample2d", "Sub-pixel samples of a 2D density");
  add_common(sample2d, config, out);
  add_sampling(sample2d, config);
  sample2d->add_option("--width", config.width, "Width of synthetic 2D densities")->capture_default_str();
  sample2d->add_option("--height", config.height, "Height of synthetic 2D densities")->capture_default_str();
  sample2d->get_option("--dist")->default_str("hdr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  config.m = m;

  try {
    if (bench->parsed()) {
      emit(rtf::cli::format_bench(rtf::cli::run_bench(config), config.format), out);
    } else if (convergence->parsed()) {
      emit(rtf::cli::format_convergence(rtf::cli::run_convergence(config), config.format), out);
    } else if (build->parsed()) {
      const auto built = rtf::cli::build_for_config(config);
      if (built.dropped) {
        std::cerr << "note: dropped " << built.dropped
                  << " zero-width intervals; leaf indices refer to the remaining ones\n";
      }
      rtf::write_forest(out, built.forest);
    } else if (validate->parsed()) {
      const auto summary = rtf::cli::validate_for_cli(rtf::read_forest(input));
      std::cout << rtf::cli::format_validation(summary, config.format);
      return summary.report.ok() ? 0 : 1;
    } else if (sample2d->parsed()) {
      if (sample2d->count("--dist") == 0) config.distribution = "hdr";
      emit(rtf::cli::format_samples(rtf::cli::run_sample2d(config), config.format), out);
    }
  } catch (const rtf::Error& e) {
    std::cerr << "error: " << rtf::to_string(e.code()) << ": " << e.what() << "\n";
    return 2;
  }
  return 0;
}
