#include "reshape/harness/covid.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "reshape/reorganize.hpp"

namespace reshape::harness {

namespace {

using namespace std::chrono;

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

// Splits one CSV record, honouring double-quoted fields.
std::vector<std::string> split_csv_line(std::string_view line)
{
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back().push_back('"');
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back().push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else if (c != '\r') {
            fields.back().push_back(c);
        }
    }
    return fields;
}

int parse_int(std::string_view digits)
{
    int v = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) {
        throw std::invalid_argument("invalid date '" + std::string(digits) + "'");
    }
    return v;
}

bool parse_count(std::string_view text, double& out)
{
    text = trim(text);
    if (text.empty()) return false;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw std::runtime_error("invalid count '" + std::string(text) + "'");
    }
    return true;
}

std::size_t column_index(const std::vector<std::string>& header, std::string_view name)
{
    for (std::size_t i = 0; i < header.size(); ++i)
        if (trim(header[i]) == name) return i;
    throw std::runtime_error("CSV header lacks required column '" + std::string(name) + "'");
}

}  // namespace

Date parse_date(std::string_view text)
{
    text = trim(text);
    int y = 0;
    int m = 0;
    int d = 0;
    if (text.size() == 10 && text[4] == '-' && text[7] == '-') {
        y = parse_int(text.substr(0, 4));
        m = parse_int(text.substr(5, 2));
        d = parse_int(text.substr(8, 2));
    } else if (text.size() == 8) {
        y = parse_int(text.substr(0, 4));
        m = parse_int(text.substr(4, 2));
        d = parse_int(text.substr(6, 2));
    } else {
        throw std::invalid_argument("invalid date '" + std::string(text) + "' (want YYYY-MM-DD or YYYYMMDD)");
    }
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) throw std::invalid_argument("invalid calendar date '" + std::string(text) + "'");
    return sys_days{ymd};
}

std::string format_date(Date d)
{
    const year_month_day ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()));
    return buf;
}

const std::vector<std::string>& fifty_states()
{
    static const std::vector<std::string> states = {
        "AK", "AL", "AR", "AZ", "CA", "CO", "CT", "DE", "FL", "GA", "HI", "IA", "ID", "IL", "IN", "KS", "KY",
        "LA", "MA", "MD", "ME", "MI", "MN", "MO", "MS", "MT", "NC", "ND", "NE", "NH", "NJ", "NM", "NV", "NY",
        "OH", "OK", "OR", "PA", "RI", "SC", "SD", "TN", "TX", "UT", "VA", "VT", "WA", "WI", "WV", "WY"};
    return states;
}

RateMode parse_rate_mode(std::string_view text)
{
    if (text == "cumulative") return RateMode::cumulative;
    if (text == "daily") return RateMode::daily;
    throw std::invalid_argument("unknown rate mode '" + std::string(text) + "' (cumulative|daily)");
}

const char* to_string(RateMode m) noexcept
{
    return m == RateMode::cumulative ? "cumulative" : "daily";
}

std::size_t required_lookback(RateMode mode) noexcept
{
    return kMovingAverageWindow - 1 + (mode == RateMode::daily ? 1 : 0);
}

RawCountsPanel parse_state_timeseries(std::istream& csv, Date first_day, std::size_t days,
                                      std::span<const std::string> entities)
{
    if (days == 0) throw std::invalid_argument("parse_state_timeseries: days must be positive");
    if (entities.empty()) throw std::invalid_argument("parse_state_timeseries: no entities requested");

    std::map<std::string, std::size_t, std::less<>> row_of;
    for (std::size_t i = 0; i < entities.size(); ++i) row_of.emplace(entities[i], i);

    std::string line;
    if (!std::getline(csv, line)) throw std::runtime_error("CSV is empty (header row required)");
    if (line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    const auto header = split_csv_line(line);
    const std::size_t c_date = column_index(header, "date");
    const std::size_t c_state = column_index(header, "state");
    const std::size_t c_pos = column_index(header, "positive");
    const std::size_t c_tests = column_index(header, "totalTestResults");
    const std::size_t needed = std::max({c_date, c_state, c_pos, c_tests}) + 1;

    RawCountsPanel raw;
    raw.entities.assign(entities.begin(), entities.end());
    raw.first_day = first_day;
    raw.days = days;
    raw.positive = DenseMatrix(entities.size(), days);
    raw.tests = DenseMatrix(entities.size(), days);
    std::vector<char> filled(entities.size() * days, 0);
    std::set<std::string> unknown;

    std::size_t line_no = 1;
    while (std::getline(csv, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() < needed) {
            throw std::runtime_error("CSV line " + std::to_string(line_no) + ": expected at least " +
                                     std::to_string(needed) + " fields");
        }
        const Date date = parse_date(fields[c_date]);
        if (date < first_day || date >= first_day + std::chrono::days(days)) continue;
        const std::string state(trim(fields[c_state]));
        const auto it = row_of.find(state);
        if (it == row_of.end()) {
            unknown.insert(state);
            continue;
        }
        const auto col = static_cast<std::size_t>((date - first_day).count());
        const std::size_t row = it->second;
        double pos = 0.0;
        double tests = 0.0;
        const bool has_pos = parse_count(fields[c_pos], pos);
        const bool has_tests = parse_count(fields[c_tests], tests);
        if (!has_pos || !has_tests) continue;  // reported as a gap below
        if (pos < 0.0 || tests < 0.0) {
            throw std::runtime_error("CSV line " + std::to_string(line_no) + ": negative count for " + state);
        }
        if (filled[row * days + col]) {
            throw std::runtime_error("CSV line " + std::to_string(line_no) + ": duplicate row for " + state + " on " +
                                     format_date(date));
        }
        filled[row * days + col] = 1;
        raw.positive(row, col) = pos;
        raw.tests(row, col) = tests;
    }

    std::vector<std::string> gaps;
    for (std::size_t r = 0; r < entities.size(); ++r)
        for (std::size_t c = 0; c < days; ++c)
            if (!filled[r * days + c]) gaps.push_back(entities[r] + "@" + format_date(first_day + std::chrono::days(c)));
    if (!gaps.empty()) {
        std::string msg = "time series has " + std::to_string(gaps.size()) + " missing cells:";
        for (std::size_t i = 0; i < gaps.size() && i < 20; ++i) msg += " " + gaps[i];
        if (gaps.size() > 20) msg += " ...";
        throw std::runtime_error(msg);
    }
    for (const auto& code : unknown) raw.warnings.push_back("ignored rows for unrequested entity '" + code + "'");
    return raw;
}

RawCountsPanel load_state_timeseries(const std::filesystem::path& csv_path, Date first_day, std::size_t days,
                                     std::span<const std::string> entities)
{
    std::ifstream in(csv_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + csv_path.string());
    return parse_state_timeseries(in, first_day, days, entities);
}

std::vector<double> trailing_moving_average(std::span<const double> series, std::size_t window)
{
    if (window == 0 || series.size() < window) {
        throw std::invalid_argument("trailing_moving_average: series shorter than the window");
    }
    std::vector<double> out(series.size() - window + 1);
    for (std::size_t t = 0; t < out.size(); ++t) {
        double s = 0.0;
        for (std::size_t j = 0; j < window; ++j) s += series[t + j];
        out[t] = s / static_cast<double>(window);
    }
    return out;
}

SeriesPanel positivity_and_smooth(const RawCountsPanel& raw, RateMode mode, bool normalize)
{
    const std::size_t lookback = required_lookback(mode);
    if (raw.days <= lookback) {
        throw std::invalid_argument("positivity_and_smooth: need more than " + std::to_string(lookback) +
                                    " days of counts");
    }
    const std::size_t out_days = raw.days - lookback;
    const std::size_t first_rate_day = mode == RateMode::daily ? 1 : 0;

    SeriesPanel panel;
    panel.entities = raw.entities;
    panel.start = raw.first_day + std::chrono::days(lookback);
    panel.days = out_days;
    panel.matrix = DenseMatrix(raw.entities.size(), out_days);

    std::vector<double> rates(raw.days - first_rate_day);
    for (std::size_t e = 0; e < raw.entities.size(); ++e) {
        for (std::size_t t = first_rate_day; t < raw.days; ++t) {
            double pos = raw.positive(e, t);
            double tests = raw.tests(e, t);
            if (mode == RateMode::daily) {
                pos -= raw.positive(e, t - 1);
                tests -= raw.tests(e, t - 1);
            }
            const std::string where = raw.entities[e] + " on " + format_date(raw.first_day + std::chrono::days(t));
            if (!(tests > 0.0)) throw std::runtime_error("no tests reported for " + where);
            if (pos < 0.0) throw std::runtime_error("negative positive count for " + where);
            rates[t - first_rate_day] = pos / tests;
        }
        const auto smooth = trailing_moving_average(rates, kMovingAverageWindow);
        double peak = 0.0;
        for (double v : smooth) peak = std::max(peak, v);
        for (std::size_t t = 0; t < out_days; ++t)
            panel.matrix(e, t) = normalize && peak > 0.0 ? smooth[t] / peak : smooth[t];
    }
    return panel;
}

SeriesPanel load_positivity_panel(const std::filesystem::path& csv_path, Date start, std::size_t days, RateMode mode,
                                  bool normalize, std::span<const std::string> entities,
                                  std::vector<std::string>* warnings)
{
    const std::size_t lookback = required_lookback(mode);
    const RawCountsPanel raw =
        load_state_timeseries(csv_path, start - std::chrono::days(lookback), days + lookback, entities);
    if (warnings != nullptr) warnings->insert(warnings->end(), raw.warnings.begin(), raw.warnings.end());
    return positivity_and_smooth(raw, mode, normalize);
}

CovidReport covid_experiment(const SeriesPanel& panel, std::size_t groups, std::size_t rank)
{
    if (rank == 0) throw std::invalid_argument("covid_experiment: rank must be positive");
    const DenseMatrix& x1 = panel.matrix;
    const DenseMatrix x2 = stack_column_groups(x1, groups);

    const SvdFactorization f1 = thin_svd(x1);
    const SvdFactorization f2 = thin_svd(x2);

    CovidReport r;
    r.groups = groups;
    r.rank = rank;
    r.plain = {x1.rows(), x1.cols(), approx_report(x1, f1, rank)};
    r.stacked = {x2.rows(), x2.cols(), approx_report(x2, f2, rank)};
    r.plain_reconstruction = rank_k_approx(f1, rank);
    r.stacked_reconstruction = unstack_column_groups(rank_k_approx(f2, rank), groups);
    return r;
}

}  // namespace reshape::harness
