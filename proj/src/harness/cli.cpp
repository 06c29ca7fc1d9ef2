#include "reshape/harness/cli.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "reshape/harness/covid.hpp"
#include "reshape/harness/image.hpp"
#include "reshape/harness/parallel.hpp"
#include "reshape/harness/report.hpp"
#include "reshape/harness/sweep.hpp"
#include "reshape/reorganize.hpp"
#include "reshape/tridiag.hpp"

namespace reshape::harness {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Flag combinations CLI11 cannot express; mapped to kExitUsage.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& contents)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << contents;
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

bool has_pgm_extension(const fs::path& p)
{
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".pgm";
}

std::pair<std::size_t, std::size_t> parse_tile(const std::string& spec)
{
    const auto x = spec.find_first_of("xX");
    try {
        std::size_t used = 0;
        const std::size_t p = std::stoul(spec.substr(0, x), &used);
        if (used != spec.substr(0, x).size()) throw std::invalid_argument(spec);
        if (x == std::string::npos) return {p, p};
        const std::string tail = spec.substr(x + 1);
        const std::size_t q = std::stoul(tail, &used);
        if (used != tail.size()) throw std::invalid_argument(spec);
        return {p, q};
    } catch (const std::logic_error&) {
        throw UsageError("--tile expects P or PxQ, got '" + spec + "'");
    }
}

// ---------------------------------------------------------------- approx

struct ApproxOptions {
    std::string input;
    std::string method = "plain";
    std::string tile;
    std::size_t groups = 0;
    std::vector<std::size_t> ranks;
    std::string out_dir;
};

struct Layout {
    DenseMatrix matrix;
    std::function<DenseMatrix(const DenseMatrix&)> restore;
    json description;
};

int run_approx(const ApproxOptions& o, std::ostream& out)
{
    const fs::path input(o.input);
    const bool image = has_pgm_extension(input);

    std::size_t p = 0;
    std::size_t q = 0;
    if (o.method == "tiled") {
        if (o.tile.empty()) throw UsageError("--method tiled requires --tile");
        std::tie(p, q) = parse_tile(o.tile);
        if (p == 0 || q == 0) throw UsageError("--tile sizes must be positive");
    }
    if (o.method == "stacked" && o.groups == 0) throw UsageError("--method stacked requires --groups >= 1");

    json source_info;
    DenseMatrix source = image ? load_gray_image(input).matrix : parse_matrix_csv(read_file(input));
    source_info["rows"] = source.rows();
    source_info["cols"] = source.cols();
    if (image && o.method == "tiled") {
        source = crop_to_tile_multiple(GrayImage{source, 8}, p, q).matrix;
        source_info["cropped_rows"] = source.rows();
        source_info["cropped_cols"] = source.cols();
    }

    Layout layout{source, [](const DenseMatrix& y) { return y; }, json{{"method", "plain"}}};
    if (o.method == "tiled") {
        auto unfolded = tile_to_columns(source, p, q);
        const TileScheme scheme = unfolded.scheme;
        layout = {std::move(unfolded.matrix), [scheme](const DenseMatrix& y) { return columns_to_tiles(y, scheme); },
                  json{{"method", "tiled"}, {"tile_rows", p}, {"tile_cols", q}}};
    } else if (o.method == "stacked") {
        const std::size_t g = o.groups;
        layout = {stack_column_groups(source, g), [g](const DenseMatrix& y) { return unstack_column_groups(y, g); },
                  json{{"method", "stacked"}, {"groups", g}}};
    } else if (o.method == "diagonal") {
        layout = {diag_to_columns(source), [](const DenseMatrix& y) { return columns_to_diag(y); },
                  json{{"method", "diagonal"}}};
    }

    const SvdFactorization f = thin_svd(layout.matrix);
    for (std::size_t k : o.ranks) {
        if (k == 0 || k > f.sigma.size()) {
            throw std::runtime_error("rank " + std::to_string(k) + " outside [1, " + std::to_string(f.sigma.size()) +
                                     "] for a " + std::to_string(layout.matrix.rows()) + "x" +
                                     std::to_string(layout.matrix.cols()) + " matrix");
        }
    }

    const fs::path dir(o.out_dir);
    fs::create_directories(dir);
    json results = json::array();
    for (std::size_t k : o.ranks) {
        const ApproxReport rep = approx_report(layout.matrix, f, k);
        const DenseMatrix y = layout.restore(rank_k_approx(f, k));
        const std::string name =
            input.stem().string() + "." + o.method + ".rank" + std::to_string(k) + (image ? ".pgm" : ".csv");
        if (image) {
            write_gray_image(y, dir / name);
        } else {
            write_file(dir / name, matrix_csv(y));
        }
        json entry = to_json(rep);
        entry["output"] = name;
        results.push_back(std::move(entry));
        out << o.method << " rank " << k << ": rel_error " << format_real(rep.rel_error) << ", parameters "
            << rep.parameters << '\n';
    }

    json report{{"schema_version", kReportSchemaVersion},
                {"kind", "approx"},
                {"input", input.filename().string()},
                {"source", source_info},
                {"layout", layout.description},
                {"matrix_rows", layout.matrix.rows()},
                {"matrix_cols", layout.matrix.cols()},
                {"frobenius_norm", frobenius_norm(layout.matrix)},
                {"singular_values", f.sigma},
                {"results", std::move(results)}};
    write_file(dir / "report.json", report.dump(2) + "\n");
    return kExitOk;
}

// ---------------------------------------------------------------- sweep

struct SweepOptions {
    std::string dir;
    std::vector<std::size_t> tiles = default_tile_sizes();
    std::vector<double> targets = {0.05, 0.10};
    std::string out;
};

int run_sweep(const SweepOptions& o, std::ostream& out)
{
    std::vector<fs::path> files;
    if (!fs::is_directory(o.dir)) throw std::runtime_error("not a directory: " + o.dir);
    for (const auto& entry : fs::directory_iterator(o.dir))
        if (entry.is_regular_file() && has_pgm_extension(entry.path())) files.push_back(entry.path());
    if (files.empty()) throw std::runtime_error("no .pgm images in " + o.dir);
    std::sort(files.begin(), files.end());

    std::vector<NamedImage> images;
    images.reserve(files.size());
    for (const auto& f : files) images.push_back({f.filename().string(), load_gray_image(f)});

    const auto records = tile_sweep(images, o.tiles, o.targets, thread_budget());
    write_file(o.out, sweep_csv(records));
    for (double t : o.targets) {
        out << "target " << t << ": tiled winner on " << tiled_win_fraction(records, t) * 100.0
            << "% of " << images.size() << " images\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------- covid

struct CovidOptions {
    std::string csv;
    std::string start = "2020-05-17";
    std::size_t days = 150;
    std::size_t groups = 3;
    std::size_t rank = 2;
    std::string rate_mode = "cumulative";
    bool no_normalize = false;
    std::string out_json;
    std::string out_series;
};

int run_covid(const CovidOptions& o, std::ostream& out, std::ostream& err)
{
    const Date start = parse_date(o.start);
    const RateMode mode = parse_rate_mode(o.rate_mode);
    std::vector<std::string> warnings;
    const SeriesPanel panel =
        load_positivity_panel(o.csv, start, o.days, mode, !o.no_normalize, fifty_states(), &warnings);
    for (const auto& w : warnings) err << "warning: " << w << '\n';

    const CovidReport report = covid_experiment(panel, o.groups, o.rank);
    const json j = covid_report_json(panel, report, {fs::path(o.csv).filename().string(), mode, !o.no_normalize});
    write_file(o.out_json, j.dump(2) + "\n");
    if (!o.out_series.empty()) write_file(o.out_series, covid_series_csv(panel, report));

    out << "plain   " << report.plain.rows << "x" << report.plain.cols << " rank " << o.rank << ": rel_error "
        << format_real(report.plain.report.rel_error) << '\n'
        << "stacked " << report.stacked.rows << "x" << report.stacked.cols << " rank " << o.rank << ": rel_error "
        << format_real(report.stacked.report.rel_error) << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- verify-theorem

struct TheoremOptions {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 1.0;
    std::vector<std::size_t> ns;
    std::string out;
};

int run_verify(const TheoremOptions& o, std::ostream& out, std::ostream& err)
{
    TheoremRun run;
    run.params = {o.alpha, o.beta, o.gamma, 2};
    try {
        tridiag::validate(run.params);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    std::vector<std::size_t> ns = o.ns;
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    if (ns.empty() || ns.front() < 2) throw UsageError("--n values must be at least 2");

    bool certified = true;
    for (std::size_t n : ns) {
        auto params = run.params;
        params.n = n;
        run.reports.push_back(tridiag::certify_theorem(params));
        for (const auto& v : tridiag::theory_violations(run.reports.back())) {
            certified = false;
            err << "n=" << n << ": violated " << v << '\n';
        }
    }
    const std::string text = theorem_report_json(run).dump(2) + "\n";
    if (o.out.empty()) {
        out << text;
    } else {
        write_file(o.out, text);
    }
    return certified ? kExitOk : kExitCertificationFailed;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Truncated-SVD approximation of reorganized matrices", "reshape"};
    app.require_subcommand(1);

    ApproxOptions ao;
    auto* approx = app.add_subcommand("approx", "Approximate one image or matrix at several ranks");
    approx->add_option("--input", ao.input, "PGM image or numeric CSV matrix")->required();
    approx->add_option("--method", ao.method, "plain | tiled | stacked | diagonal")
        ->check(CLI::IsMember({"plain", "tiled", "stacked", "diagonal"}));
    approx->add_option("--tile", ao.tile, "tile shape P or PxQ (tiled)");
    approx->add_option("--groups", ao.groups, "column groups (stacked)");
    approx->add_option("--ranks", ao.ranks, "comma-separated ranks")->required()->delimiter(',');
    approx->add_option("--out-dir", ao.out_dir, "directory for reconstructions and report.json")->required();

    SweepOptions so;
    auto* sweep = app.add_subcommand("sweep", "Plain versus tiled parameter counts over a directory of PGMs");
    sweep->add_option("--dir", so.dir, "directory of grayscale PGM images")->required();
    sweep->add_option("--tiles", so.tiles, "square tile sizes")->delimiter(',')->capture_default_str();
    sweep->add_option("--targets", so.targets, "relative-error targets in (0,1)")->delimiter(',')->capture_default_str();
    sweep->add_option("--out", so.out, "CSV summary path")->required();

    CovidOptions co;
    auto* covid = app.add_subcommand("covid", "Plain versus block-stacked truncation of a state positivity panel");
    covid->add_option("--csv", co.csv, "CSV with date,state,positive,totalTestResults")->required();
    covid->add_option("--start", co.start, "first panel day (YYYY-MM-DD)")->capture_default_str();
    covid->add_option("--days", co.days, "panel length in days")->capture_default_str();
    covid->add_option("--groups", co.groups, "number of consecutive day groups")->capture_default_str();
    covid->add_option("--rank", co.rank, "truncation rank")->capture_default_str();
    covid->add_option("--rate-mode", co.rate_mode, "cumulative | daily")
        ->check(CLI::IsMember({"cumulative", "daily"}))
        ->capture_default_str();
    covid->add_flag("--no-normalize", co.no_normalize, "skip per-state max normalization");
    covid->add_option("--out-json", co.out_json, "JSON report path")->required();
    covid->add_option("--out-series", co.out_series, "per-state series CSV path");

    TheoremOptions to;
    auto* verify = app.add_subcommand("verify-theorem", "Certify the tridiagonal-inverse inequalities");
    verify->add_option("--alpha", to.alpha)->required();
    verify->add_option("--beta", to.beta)->required();
    verify->add_option("--gamma", to.gamma)->required();
    verify->add_option("--n", to.ns, "matrix sizes, comma-separated")->required()->delimiter(',');
    verify->add_option("--out", to.out, "JSON report path (default: stdout)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (approx->parsed()) return run_approx(ao, out);
        if (sweep->parsed()) return run_sweep(so, out);
        if (covid->parsed()) return run_covid(co, out, err);
        if (verify->parsed()) return run_verify(to, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitDataError;
    }
    return kExitUsage;
}

}  // namespace reshape::harness
