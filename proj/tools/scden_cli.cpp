// scden: wavelet-domain denoising by smoothing of detail coefficients,
// baseline filters, and the assessment metrics used to compare them.

#include "scden/bench.hpp"
#include "scden/image_io.hpp"
#include "scden/metrics.hpp"
#include "scden/pipeline.hpp"
#include "scden/wavelet.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DenoiseArgs {
    std::string in, out, method, clean, dump_prefix;
    scden::MethodOptions opts;
    std::string rule;
    std::optional<double> sigma, noise_cv, upper;
};

int run_denoise(const DenoiseArgs& a) {
    scden::MethodOptions opts = a.opts;
    opts.sigma = a.sigma;
    opts.noise_cv = a.noise_cv;
    opts.upper = a.upper;
    if (!a.rule.empty()) {
        if (a.rule == "soft") opts.rule = scden::ThresholdKind::soft;
        else if (a.rule == "hard") opts.rule = scden::ThresholdKind::hard;
        else if (a.rule == "semisoft") opts.rule = scden::ThresholdKind::semisoft;
        else throw UsageError("--rule: expected soft, hard or semisoft, got '" + a.rule + "'");
    }

    scden::DenoiseConfig cfg;
    try {
        cfg = scden::parse_method(a.method, opts);
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--method: ") + e.what());
    }
    if (cfg.needs_clean_reference() && a.clean.empty()) {
        throw UsageError("--method " + a.method + " requires --clean <path>");
    }
    if (!cfg.needs_clean_reference() && !a.clean.empty()) {
        throw UsageError("--clean is only accepted by oracle-* methods");
    }

    const scden::Image img = scden::load_image(a.in);
    std::optional<scden::Image> clean;
    if (!a.clean.empty()) clean = scden::load_image(a.clean);

    if (!a.dump_prefix.empty()) {
        const auto basis = cfg.basis ? *cfg.basis : scden::WaveletBasis::from_name(opts.basis);
        scden::dump_subbands(scden::dwt2(img, basis), a.dump_prefix);
    }

    const scden::Image out = scden::denoise(img, cfg, clean ? &*clean : nullptr);
    scden::save_image(out, a.out);
    std::cout << "denoised " << a.in << " -> " << a.out << " (" << out.cols() << "x" << out.rows()
              << ", " << scden::display_name(cfg) << ")\n";
    return 0;
}

int run_addnoise(const std::string& in, const std::string& out, double percent,
                 std::uint64_t seed) {
    const scden::Image img = scden::load_image(in);
    scden::save_image(scden::add_noise(img, {percent, seed}), out);
    std::cout << "added " << scden::format_metric(percent) << " % Gaussian noise (seed " << seed
              << ") -> " << out << "\n";
    return 0;
}

int run_metrics(const std::string& ref, const std::string& test, bool csv) {
    const scden::Image clean = scden::load_image(ref);
    const scden::Image other = scden::load_image(test);
    if (clean.rows() != other.rows() || clean.cols() != other.cols()) {
        throw UsageError("--ref and --test differ in size");
    }
    const scden::MetricsReport r = scden::full_report(clean, other);
    if (csv) {
        std::cout << scden::csv_header() << "\n"
                  << scden::csv_row(std::filesystem::path(test).stem().string(), r) << "\n";
        return 0;
    }
    const std::pair<const char*, double> lines[] = {
        {"AAD", r.aad}, {"SNR", r.snr},  {"PSNR", r.psnr}, {"IF", r.ify},
        {"CQ", r.cqy},  {"SC", r.sct},   {"FOM", r.fom},
    };
    for (const auto& [name, value] : lines) {
        std::printf("%-10s %s\n", name, scden::format_metric(value).c_str());
    }
    std::printf("%-10s %s\n", "SNR (dB)", scden::format_metric(scden::to_decibels(r.snr)).c_str());
    std::printf("%-10s %s\n", "PSNR (dB)", scden::format_metric(scden::to_decibels(r.psnr)).c_str());
    return 0;
}

int run_bench(const std::string& config, const std::string& out_dir) {
    scden::BenchRun run = scden::load_bench_config(config);
    if (!out_dir.empty()) run.output_dir = out_dir;
    const scden::BenchResult res = scden::run_bench(run);
    std::cout << "bench: " << res.rows.size() << " filters -> " << res.csv_path.string() << "\n";
    return 0;
}

int run_phantom(const std::string& out, const scden::PhantomParams& params) {
    scden::save_image(scden::make_phantom(params), out);
    std::cout << "phantom " << params.rows << "x" << params.cols << " -> " << out << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wavelet-domain image denoising and assessment", "scden"};
    app.require_subcommand(1);

    DenoiseArgs dn;
    auto* denoise = app.add_subcommand("denoise", "Denoise one image");
    denoise->add_option("--in", dn.in, "Input image (PGM/PNG)")->required();
    denoise->add_option("--out", dn.out, "Output image (.png or PGM)")->required();
    denoise->add_option("--method", dn.method, "sc-ds, median, visu-soft, oracle-hard, ...")
        ->required();
    denoise->add_option("--basis", dn.opts.basis, "haar or db4")->capture_default_str();
    denoise->add_option("--window", dn.opts.window, "Odd window size 3..33")->capture_default_str();
    denoise->add_option("--damping", dn.opts.damping, "Frost/enhanced-Lee damping factor")
        ->capture_default_str();
    denoise->add_option("--noise-cv", dn.noise_cv, "Noise coefficient of variation (default: estimated)");
    denoise->add_option("--rule", dn.rule, "soft, hard or semisoft");
    denoise->add_option("--upper", dn.upper, "Semisoft upper threshold (default 2T)");
    denoise->add_option("--sigma", dn.sigma, "Known noise sigma for shrinkage (default: MAD of CDD)");
    denoise->add_option("--clean", dn.clean, "Clean reference (oracle-* methods only)");
    denoise->add_option("--dump-subbands", dn.dump_prefix, "Write the input's subbands as PGMs");

    std::string an_in, an_out;
    double an_percent = 0.0;
    std::uint64_t an_seed = 0;
    auto* addnoise = app.add_subcommand("addnoise", "Add seeded Gaussian noise");
    addnoise->add_option("--in", an_in)->required();
    addnoise->add_option("--out", an_out)->required();
    addnoise->add_option("--percent", an_percent, "Sigma as percent of full range")
        ->required()
        ->check(CLI::Range(0.0, 100.0));
    addnoise->add_option("--seed", an_seed)->required();

    std::string m_ref, m_test;
    bool m_csv = false;
    auto* metrics = app.add_subcommand("metrics", "Compare a test image against a reference");
    metrics->add_option("--ref", m_ref, "Clean reference image")->required();
    metrics->add_option("--test", m_test, "Image under test")->required();
    metrics->add_flag("--csv", m_csv, "Print one CSV header row and one data row");

    std::string b_config, b_out;
    auto* bench = app.add_subcommand("bench", "Run a benchmark config");
    bench->add_option("config,--config", b_config, "Benchmark config file")->required();
    bench->add_option("--out", b_out, "Override the output directory");

    std::string p_out;
    scden::PhantomParams p;
    auto* phantom = app.add_subcommand("phantom", "Write a synthetic microarray image");
    phantom->add_option("--out", p_out)->required();
    phantom->add_option("--rows", p.rows)->capture_default_str();
    phantom->add_option("--cols", p.cols)->capture_default_str();
    phantom->add_option("--grid", p.grid)->capture_default_str();
    phantom->add_option("--amplitude", p.spot_amplitude)->capture_default_str();
    phantom->add_option("--spot-sigma", p.spot_sigma)->capture_default_str();
    phantom->add_option("--background", p.background)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "scden: error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*denoise) return run_denoise(dn);
        if (*addnoise) return run_addnoise(an_in, an_out, an_percent, an_seed);
        if (*metrics) return run_metrics(m_ref, m_test, m_csv);
        if (*bench) return run_bench(b_config, b_out);
        if (*phantom) return run_phantom(p_out, p);
    } catch (const UsageError& e) {
        std::cerr << "scden: error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "scden: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
