#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "reshape/harness/covid.hpp"
#include "reshape/harness/sweep.hpp"
#include "reshape/matrix.hpp"
#include "reshape/tridiag.hpp"

namespace reshape::harness {

inline constexpr int kReportSchemaVersion = 1;

/// %.17g, the CSV spelling of every real.
std::string format_real(double v);

/// Plain numeric CSV, one matrix row per line, no header.
DenseMatrix parse_matrix_csv(std::string_view text);
std::string matrix_csv(const DenseMatrix& m);

nlohmann::json to_json(const ApproxReport& r);
nlohmann::json to_json(const tridiag::TheoryReport& r);

struct TheoremRun {
    tridiag::TridiagParams params;  // n unused; see reports
    std::vector<tridiag::TheoryReport> reports;
};

nlohmann::json theorem_report_json(const TheoremRun& run);

/// Header: image,method,tile_rows,tile_cols,matrix_rows,matrix_cols,target,
/// rank,parameters,rel_error,winner
std::string sweep_csv(std::span<const SweepRecord> records);

struct CovidRunInfo {
    std::string source;
    RateMode rate_mode = RateMode::cumulative;
    bool normalized = true;
};

nlohmann::json covid_report_json(const SeriesPanel& panel, const CovidReport& report, const CovidRunInfo& info);

/// Header: entity,day,date,observed,plain,reorganized
std::string covid_series_csv(const SeriesPanel& panel, const CovidReport& report);

}  // namespace reshape::harness
