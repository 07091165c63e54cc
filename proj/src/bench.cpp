#include "scden/bench.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace scden {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

struct Section {
    std::string name;
    int line = 0;
    std::map<std::string, std::pair<std::string, int>> entries; // key -> (value, line)
};

[[noreturn]] void fail(int line, const std::string& msg) {
    throw BenchConfigError("config line " + std::to_string(line) + ": " + msg);
}

template <typename T>
T parse_number(const std::string& text, int line, const std::string& key) {
    T value{};
    const char* first = text.data();
    const char* last = first + text.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last) {
        fail(line, "invalid value '" + text + "' for '" + key + "'");
    }
    return value;
}

class SectionReader {
public:
    explicit SectionReader(Section& s) : s_(s) {}

    std::optional<std::string> text(const std::string& key) {
        auto it = s_.entries.find(key);
        if (it == s_.entries.end()) return std::nullopt;
        used_.insert(key);
        return it->second.first;
    }

    template <typename T>
    std::optional<T> number(const std::string& key) {
        auto it = s_.entries.find(key);
        if (it == s_.entries.end()) return std::nullopt;
        used_.insert(key);
        return parse_number<T>(it->second.first, it->second.second, key);
    }

    void reject_unknown() const {
        for (const auto& [key, entry] : s_.entries) {
            if (!used_.contains(key)) {
                fail(entry.second, "unknown key '" + key + "' in [" + s_.name + "]");
            }
        }
    }

    int line() const { return s_.line; }

private:
    Section& s_;
    std::set<std::string> used_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

std::string slug(const std::string& name) {
    std::string out;
    for (unsigned char ch : name) {
        if (std::isalnum(ch)) {
            out += static_cast<char>(std::tolower(ch));
        } else if (!out.empty() && out.back() != '_') {
            out += '_';
        }
    }
    while (!out.empty() && out.back() == '_') out.pop_back();
    return out.empty() ? "filter" : out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    os << text;
    if (!os) {
        throw ImageIoError("cannot write '" + path.string() + "'");
    }
}

} // namespace

BenchRun parse_bench_config(std::istream& in, const std::filesystem::path& base_dir) {
    std::vector<Section> sections;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(line_no, "malformed section header");
            sections.push_back({trim(line.substr(1, line.size() - 2)), line_no, {}});
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
        if (sections.empty()) fail(line_no, "key outside of any section");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(line_no, "empty key");
        if (!sections.back().entries.emplace(key, std::make_pair(value, line_no)).second) {
            fail(line_no, "duplicate key '" + key + "'");
        }
    }

    BenchRun run;
    std::optional<PhantomParams> phantom;
    std::optional<std::filesystem::path> clean_path;
    std::set<std::string> singletons;
    std::set<std::string> names;

    for (Section& s : sections) {
        SectionReader rd(s);
        if (s.name != "filter" && !singletons.insert(s.name).second) {
            fail(s.line, "duplicate section [" + s.name + "]");
        }
        if (s.name == "input") {
            if (auto p = rd.text("clean")) clean_path = resolve(base_dir, *p);
        } else if (s.name == "phantom") {
            PhantomParams p;
            p.rows = rd.number<std::size_t>("rows").value_or(p.rows);
            p.cols = rd.number<std::size_t>("cols").value_or(p.cols);
            p.grid = rd.number<std::size_t>("grid").value_or(p.grid);
            p.spot_amplitude = rd.number<double>("amplitude").value_or(p.spot_amplitude);
            p.spot_sigma = rd.number<double>("spot_sigma").value_or(p.spot_sigma);
            p.background = rd.number<double>("background").value_or(p.background);
            phantom = p;
        } else if (s.name == "noise") {
            run.noise.sigma_percent = rd.number<double>("percent").value_or(0.0);
            run.noise.seed = rd.number<std::uint64_t>("seed").value_or(0);
            if (!(run.noise.sigma_percent >= 0.0 && run.noise.sigma_percent <= 100.0)) {
                fail(s.line, "noise percent must lie in [0, 100]");
            }
        } else if (s.name == "output") {
            if (auto d = rd.text("dir")) run.output_dir = resolve(base_dir, *d);
        } else if (s.name == "filter") {
            const auto method = rd.text("method");
            if (!method) fail(s.line, "[filter] requires 'method'");
            MethodOptions opts;
            opts.basis = rd.text("basis").value_or(opts.basis);
            opts.window = rd.number<int>("window").value_or(opts.window);
            opts.damping = rd.number<double>("damping").value_or(opts.damping);
            opts.noise_cv = rd.number<double>("noise_cv");
            opts.upper = rd.number<double>("upper");
            opts.sigma = rd.number<double>("sigma");
            if (auto rule = rd.text("rule")) {
                if (*rule == "soft") opts.rule = ThresholdKind::soft;
                else if (*rule == "hard") opts.rule = ThresholdKind::hard;
                else if (*rule == "semisoft") opts.rule = ThresholdKind::semisoft;
                else fail(s.line, "unknown rule '" + *rule + "'");
            }
            const auto name = rd.text("name");
            BenchFilter f;
            try {
                f.config = parse_method(*method, opts);
                f.config.validate();
            } catch (const std::invalid_argument& e) {
                fail(s.line, e.what());
            }
            f.method = *method;
            f.name = name ? *name : display_name(f.config);
            if (f.name.empty()) fail(s.line, "empty filter name");
            if (!names.insert(f.name).second) {
                fail(s.line, "duplicate filter name '" + f.name + "'");
            }
            run.filters.push_back(std::move(f));
        } else {
            fail(s.line, "unknown section [" + s.name + "]");
        }
        rd.reject_unknown();
    }

    if (clean_path && phantom) {
        throw BenchConfigError("config: [input] clean and [phantom] are mutually exclusive");
    }
    if (clean_path) {
        run.clean = *clean_path;
    } else {
        run.clean = phantom.value_or(PhantomParams{});
    }
    if (run.filters.empty()) {
        throw BenchConfigError("config: at least one [filter] section is required");
    }
    return run;
}

BenchRun load_bench_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw BenchConfigError("cannot read config '" + path.string() + "'");
    }
    return parse_bench_config(in, path.parent_path());
}

std::string render_csv(const std::vector<BenchRow>& rows) {
    std::string out = csv_header() + "\n";
    for (const BenchRow& row : rows) out += csv_row(row.name, row.report) + "\n";
    return out;
}

std::string render_markdown(const BenchRun& run, const std::vector<BenchRow>& rows) {
    std::ostringstream os;
    os << "# Denoising report\n\n";
    if (const auto* path = std::get_if<std::filesystem::path>(&run.clean)) {
        os << "- clean image: `" << path->filename().string() << "`\n";
    } else {
        const auto& p = std::get<PhantomParams>(run.clean);
        os << "- clean image: phantom " << p.rows << "x" << p.cols << ", grid " << p.grid
           << ", amplitude " << format_metric(p.spot_amplitude) << ", spot sigma "
           << format_metric(p.spot_sigma) << ", background " << format_metric(p.background)
           << "\n";
    }
    os << "- noise: additive Gaussian, sigma " << format_metric(run.noise.sigma_percent)
       << " % of full range, seed " << run.noise.seed << "\n\n";
    os << "| Filter | AAD | SNR | PSNR | IF | CQ | SC | FOM | SNR (dB) | PSNR (dB) |\n";
    os << "|---|---|---|---|---|---|---|---|---|---|\n";
    for (const BenchRow& row : rows) {
        const MetricsReport& r = row.report;
        os << "| " << row.name;
        for (double v : {r.aad, r.snr, r.psnr, r.ify, r.cqy, r.sct, r.fom, to_decibels(r.snr),
                         to_decibels(r.psnr)}) {
            os << " | " << format_metric(v);
        }
        os << " |\n";
    }
    return os.str();
}

BenchResult run_bench(const BenchRun& run) {
    namespace fs = std::filesystem;
    const bool created_dir = !fs::exists(run.output_dir);
    fs::create_directories(run.output_dir);
    std::vector<fs::path> written;
    auto save = [&](const Image& img, const fs::path& name) {
        const fs::path p = run.output_dir / name;
        written.push_back(p);
        save_image(img, p);
    };
    auto cleanup = [&] {
        std::error_code ec;
        for (const fs::path& p : written) fs::remove(p, ec);
        if (created_dir) fs::remove(run.output_dir, ec);
    };

    BenchResult result;
    std::string current = "<setup>";
    try {
        Image clean = [&] {
            if (const auto* path = std::get_if<fs::path>(&run.clean)) return load_image(*path);
            return make_phantom(std::get<PhantomParams>(run.clean));
        }();
        if (std::holds_alternative<PhantomParams>(run.clean)) save(clean, "clean.pgm");
        const Image noisy = add_noise(clean, run.noise);
        save(noisy, "noisy.pgm");

        for (std::size_t i = 0; i < run.filters.size(); ++i) {
            const BenchFilter& f = run.filters[i];
            current = f.name;
            // Only oracle shrinkage is handed the clean image.
            const Image* ref = f.config.needs_clean_reference() ? &clean : nullptr;
            const Image out = denoise(noisy, f.config, ref);
            char prefix[16];
            std::snprintf(prefix, sizeof prefix, "%02zu_", i + 1);
            save(out, std::string(prefix) + slug(f.name) + ".pgm");
            result.rows.push_back({f.name, full_report(clean, out)});
        }
        current = "<report>";
        result.csv_path = run.output_dir / "report.csv";
        written.push_back(result.csv_path);
        write_text(result.csv_path, render_csv(result.rows));
        result.markdown_path = run.output_dir / "report.md";
        written.push_back(result.markdown_path);
        write_text(result.markdown_path, render_markdown(run, result.rows));
    } catch (const std::exception& e) {
        cleanup();
        throw BenchRunError("filter '" + current + "' failed: " + e.what());
    }
    return result;
}

} // namespace scden
