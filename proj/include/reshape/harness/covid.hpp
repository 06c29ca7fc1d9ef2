#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reshape/matrix.hpp"

namespace reshape::harness {

using Date = std::chrono::sys_days;

/// Accepts 2020-05-17 or 20200517.
Date parse_date(std::string_view text);
std::string format_date(Date d);

/// Two-letter codes of the 50 US states, alphabetical.
const std::vector<std::string>& fifty_states();

/// Cumulative counts per entity and day, as reported.
struct RawCountsPanel {
    std::vector<std::string> entities;
    Date first_day{};
    std::size_t days = 0;
    DenseMatrix positive{1, 1};  // entities x days
    DenseMatrix tests{1, 1};     // entities x days
    std::vector<std::string> warnings;
};

/// Positivity-rate panel, entities x days.
struct SeriesPanel {
    std::vector<std::string> entities;
    Date start{};
    std::size_t days = 0;
    DenseMatrix matrix{1, 1};
};

/// cumulative: positive_t / tests_t. daily: day-over-day increments of both.
enum class RateMode { cumulative, daily };

RateMode parse_rate_mode(std::string_view text);
const char* to_string(RateMode m) noexcept;

inline constexpr std::size_t kMovingAverageWindow = 7;

/// Days of history needed before the first output day: the moving-average
/// window minus one, plus one more in daily mode for the first increment.
std::size_t required_lookback(RateMode mode) noexcept;

/// Reads `date,state,positive,totalTestResults` (header required, other
/// columns ignored, any row order). The panel covers `days` consecutive days
/// starting at first_day for exactly `entities`, in that order. Codes outside
/// `entities` are skipped with a warning; any missing cell throws
/// std::runtime_error listing the gaps.
RawCountsPanel parse_state_timeseries(std::istream& csv, Date first_day, std::size_t days,
                                      std::span<const std::string> entities);
RawCountsPanel load_state_timeseries(const std::filesystem::path& csv_path, Date first_day, std::size_t days,
                                     std::span<const std::string> entities);

/// Trailing moving average; output[t] averages input[t - window + 1 .. t], so
/// the output is window - 1 entries shorter than the input.
std::vector<double> trailing_moving_average(std::span<const double> series, std::size_t window);

/// Rates, then a trailing 7-day moving average, then (optionally) division of
/// each entity's series by its maximum. The output starts
/// required_lookback(mode) days after raw.first_day. Throws naming the entity
/// and date when a needed test count is zero.
SeriesPanel positivity_and_smooth(const RawCountsPanel& raw, RateMode mode, bool normalize);

/// Convenience: ingest the window needed for `days` output days from `start`.
SeriesPanel load_positivity_panel(const std::filesystem::path& csv_path, Date start, std::size_t days, RateMode mode,
                                  bool normalize, std::span<const std::string> entities,
                                  std::vector<std::string>* warnings = nullptr);

struct TruncationSummary {
    std::size_t rows = 0;  // shape of the matrix that was truncated
    std::size_t cols = 0;
    ApproxReport report;
};

struct CovidReport {
    std::size_t groups = 0;
    std::size_t rank = 0;
    TruncationSummary plain;
    TruncationSummary stacked;
    DenseMatrix plain_reconstruction{1, 1};    // entities x days
    DenseMatrix stacked_reconstruction{1, 1};  // unstacked back to entities x days
};

/// Rank-k truncation of the entities x days panel versus the same truncation
/// of its g-group column stacking.
CovidReport covid_experiment(const SeriesPanel& panel, std::size_t groups, std::size_t rank);

}  // namespace reshape::harness
