#pragma once

#include "scden/image_io.hpp"
#include "scden/metrics.hpp"
#include "scden/pipeline.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace scden {

class BenchConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BenchRunError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct BenchFilter {
    std::string name;   // display name, unique within a run
    std::string method; // as accepted by parse_method
    DenoiseConfig config;
};

struct BenchRun {
    std::variant<std::filesystem::path, PhantomParams> clean = PhantomParams{};
    NoiseSpec noise;
    std::vector<BenchFilter> filters;
    std::filesystem::path output_dir = "bench_out";
};

// Plain-text config: "[section]" headers and "key = value" lines, '#'
// comments. Sections: [input] clean, [phantom] rows cols grid amplitude
// spot_sigma background, [noise] percent seed, [output] dir, and one
// [filter] per row with method plus optional name basis window damping
// noise_cv rule upper sigma. Relative paths resolve against base_dir.
BenchRun parse_bench_config(std::istream& in, const std::filesystem::path& base_dir);
BenchRun load_bench_config(const std::filesystem::path& path);

struct BenchRow {
    std::string name;
    MetricsReport report;
};

struct BenchResult {
    std::vector<BenchRow> rows;
    std::filesystem::path csv_path;
    std::filesystem::path markdown_path;
};

// Denoises the noisy image with every filter (rows in config order) and
// writes clean.pgm (phantom runs), noisy.pgm, NN_<name>.pgm per filter,
// report.csv and report.md into output_dir. On failure all files written by
// this run are removed and BenchRunError names the filter.
BenchResult run_bench(const BenchRun& run);

std::string render_csv(const std::vector<BenchRow>& rows);
std::string render_markdown(const BenchRun& run, const std::vector<BenchRow>& rows);

} // namespace scden
