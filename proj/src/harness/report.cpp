#include "reshape/harness/report.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>
#include <cstdio>
#include <sstream>

namespace reshape::harness {

using nlohmann::json;

std::string format_real(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json to_json(const ApproxReport& r)
{
    return json{{"rank", r.rank},
                {"parameters", r.parameters},
                {"abs_error_sq", r.abs_error_sq},
                {"rel_error", r.rel_error}};
}

json to_json(const tridiag::TheoryReport& r)
{
    json violations = json::array();
    for (const auto& v : tridiag::theory_violations(r)) violations.push_back(v);
    return json{{"n", r.n},
                {"sigma1_x", r.sigma1_x},
                {"spectral_bound", r.spectral_bound},
                {"x_rank1_err_sq", r.x_rank1_err_sq},
                {"b_rank1_err_sq", r.b_rank1_err_sq},
                {"frob_sq", r.frob_sq},
                {"tn_over_gamma_sq", r.tn_over_gamma_sq},
                {"delta", r.delta},
                {"omega1", r.omega1},
                {"omega2_n", r.omega2_n},
                {"violations", std::move(violations)}};
}

json theorem_report_json(const TheoremRun& run)
{
    json reports = json::array();
    bool certified = true;
    for (const auto& r : run.reports) {
        json entry = to_json(r);
        certified = certified && entry["violations"].empty();
        reports.push_back(std::move(entry));
    }
    const auto analysis = tridiag::analyze_sweep(run.reports);
    json ratios = json::array();
    for (double x : analysis.omega2_increment_ratios) ratios.push_back(x);
    const double max_ratio = analysis.omega2_increment_ratios.empty()
                                 ? 0.0
                                 : *std::max_element(analysis.omega2_increment_ratios.begin(),
                                                     analysis.omega2_increment_ratios.end());
    return json{{"schema_version", kReportSchemaVersion},
                {"kind", "verify-theorem"},
                {"alpha", run.params.alpha},
                {"beta", run.params.beta},
                {"gamma", run.params.gamma},
                {"certified", certified},
                {"reports", std::move(reports)},
                {"analysis",
                 {{"crossing_n", analysis.crossing_n ? json(*analysis.crossing_n) : json(nullptr)},
                  {"gap_increasing_past_crossing", analysis.gap_increasing},
                  {"omega2_increment_ratios", std::move(ratios)},
                  {"max_omega2_increment_ratio", max_ratio}}}};
}

std::string sweep_csv(std::span<const SweepRecord> records)
{
    std::ostringstream out;
    out << "image,method,tile_rows,tile_cols,matrix_rows,matrix_cols,target,rank,parameters,rel_error,winner\n";
    for (const auto& r : records) {
        out << r.image << ',' << to_string(r.method) << ',' << r.tile_rows << ',' << r.tile_cols << ','
            << r.matrix_rows << ',' << r.matrix_cols << ',' << format_real(r.target_rel_error) << ','
            << r.achieved_rank << ',' << r.parameters << ',' << format_real(r.achieved_rel_error) << ','
            << (r.winner ? 1 : 0) << '\n';
    }
    return out.str();
}

DenseMatrix parse_matrix_csv(std::string_view text)
{
    std::vector<double> values;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const std::size_t eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

        std::size_t count = 0;
        while (true) {
            const std::size_t comma = line.find(',');
            std::string_view field = line.substr(0, comma);
            while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
            while (!field.empty() && (field.back() == ' ' || field.back() == '\t')) field.remove_suffix(1);
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
            if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
                throw std::runtime_error("matrix CSV line " + std::to_string(line_no) + ": invalid number '" +
                                         std::string(field) + "'");
            }
            values.push_back(v);
            ++count;
            if (comma == std::string_view::npos) break;
            line.remove_prefix(comma + 1);
        }
        if (rows == 0) cols = count;
        if (count != cols) {
            throw std::runtime_error("matrix CSV line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(cols) + " values, found " + std::to_string(count));
        }
        ++rows;
    }
    if (rows == 0) throw std::runtime_error("matrix CSV is empty");
    return DenseMatrix(rows, cols, std::move(values));
}

std::string matrix_csv(const DenseMatrix& m)
{
    std::string out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j > 0) out += ',';
            out += format_real(m(i, j));
        }
        out += '\n';
    }
    return out;
}

namespace {

json truncation_json(const TruncationSummary& t)
{
    json j = to_json(t.report);
    j["rows"] = t.rows;
    j["cols"] = t.cols;
    return j;
}

}  // namespace

json covid_report_json(const SeriesPanel& panel, const CovidReport& report, const CovidRunInfo& info)
{
    json entities = json::array();
    for (const auto& e : panel.entities) entities.push_back(e);
    return json{{"schema_version", kReportSchemaVersion},
                {"kind", "covid"},
                {"source", info.source},
                {"start", format_date(panel.start)},
                {"days", panel.days},
                {"entities", std::move(entities)},
                {"rate_mode", to_string(info.rate_mode)},
                {"normalized", info.normalized},
                {"groups", report.groups},
                {"rank", report.rank},
                {"plain", truncation_json(report.plain)},
                {"stacked", truncation_json(report.stacked)}};
}

std::string covid_series_csv(const SeriesPanel& panel, const CovidReport& report)
{
    std::ostringstream out;
    out << "entity,day,date,observed,plain,reorganized\n";
    for (std::size_t e = 0; e < panel.entities.size(); ++e) {
        for (std::size_t t = 0; t < panel.days; ++t) {
            out << panel.entities[e] << ',' << t << ',' << format_date(panel.start + std::chrono::days(t)) << ','
                << format_real(panel.matrix(e, t)) << ',' << format_real(report.plain_reconstruction(e, t)) << ','
                << format_real(report.stacked_reconstruction(e, t)) << '\n';
        }
    }
    return out.str();
}

}  // namespace reshape::harness
