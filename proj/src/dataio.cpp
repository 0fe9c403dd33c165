#include "fxcast/dataio.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "fxcast/errors.hpp"
#include "fxcast/rng.hpp"

#ifndef FXCAST_NO_TLS
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

namespace fxcast {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

// `null` and empty cells are missing values, resolved later by forward_fill.
std::optional<double> parse_cell(const std::string& raw, int line_no) {
    std::string s = trim(raw);
    if (s.empty() || s == "null" || s == "NULL" || s == "NaN" || s == "nan") {
        return std::nullopt;
    }
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) {
        throw FormatError("line " + std::to_string(line_no) + ": bad numeric cell '" + s + "'");
    }
    if (!std::isfinite(v)) return std::nullopt;
    return v;
}

}  // namespace

const char* orientation_name(Orientation o) {
    return o == Orientation::UsdPerBdt ? "USD_PER_BDT" : "BDT_PER_USD";
}

std::vector<OhlcBar> parse_ohlc_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) {
        throw FormatError("empty input: no header row");
    }
    auto header = split_csv_line(line);
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) col[trim(header[i])] = i;
    for (const char* required : {"Date", "Open", "High", "Low", "Close"}) {
        if (!col.count(required)) {
            throw FormatError(std::string("missing header column '") + required + "'");
        }
    }
    const bool has_adj = col.count("Adj Close") > 0;
    const bool has_vol = col.count("Volume") > 0;

    std::vector<OhlcBar> bars;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split_csv_line(line);
        auto cell = [&](const char* name) -> std::string {
            std::size_t i = col.at(name);
            return i < fields.size() ? fields[i] : "";
        };
        OhlcBar bar;
        try {
            bar.date = Date::parse(trim(cell("Date")));
        } catch (const FormatError& e) {
            throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
        }
        bar.open = parse_cell(cell("Open"), line_no);
        bar.high = parse_cell(cell("High"), line_no);
        bar.low = parse_cell(cell("Low"), line_no);
        bar.close = parse_cell(cell("Close"), line_no);
        if (has_adj) {
            auto adj = parse_cell(cell("Adj Close"), line_no);
            if (adj) bar.close = adj;
        }
        if (has_vol) bar.volume = parse_cell(cell("Volume"), line_no);
        bars.push_back(bar);
    }
    if (bars.empty()) {
        throw FormatError("no data rows after header");
    }
    return bars;
}

std::vector<OhlcBar> forward_fill(std::vector<OhlcBar> bars, ValidationReport* report) {
    if (bars.empty()) throw InsufficientDataError("no bars to fill");

    std::stable_sort(bars.begin(), bars.end(),
                     [](const OhlcBar& a, const OhlcBar& b) { return a.date < b.date; });

    // Duplicate dates: last occurrence wins.
    std::vector<OhlcBar> dedup;
    for (const auto& bar : bars) {
        if (!dedup.empty() && dedup.back().date == bar.date) {
            if (report) report->duplicate_dates.push_back(bar.date.to_string());
            dedup.back() = bar;
        } else {
            dedup.push_back(bar);
        }
    }

    bool any_close = std::any_of(dedup.begin(), dedup.end(),
                                 [](const OhlcBar& b) { return b.close.has_value(); });
    if (!any_close) throw DataError("all close values missing, nothing to forward-fill");

    std::vector<OhlcBar> out;
    std::optional<double> last_open, last_high, last_low, last_close, last_vol;
    for (const auto& bar : dedup) {
        OhlcBar filled = bar;
        if (!filled.close && !last_close) {
            // Leading row with no prior close: drop and report.
            if (report) report->dropped_rows.push_back(bar.date.to_string());
            continue;
        }
        if (!filled.open) filled.open = last_open ? last_open : filled.close;
        if (!filled.high) filled.high = last_high ? last_high : filled.close;
        if (!filled.low) filled.low = last_low ? last_low : filled.close;
        if (!filled.close) filled.close = last_close;
        if (!filled.volume) filled.volume = last_vol;
        last_open = filled.open;
        last_high = filled.high;
        last_low = filled.low;
        last_close = filled.close;
        last_vol = filled.volume;
        out.push_back(filled);
    }
    if (report) {
        report->rows_parsed = bars.size();
        report->rows_kept = out.size();
        for (const auto& b : out) {
            if (b.low && b.high && b.open && b.close) {
                double lo = std::min(*b.open, *b.close);
                double hi = std::max(*b.open, *b.close);
                if (*b.low > lo || *b.high < hi) {
                    report->ohlc_violations.push_back(b.date.to_string());
                }
            }
        }
    }
    return out;
}

RateSeries to_rate_series(const std::vector<OhlcBar>& bars, Orientation orientation,
                          ValidationReport*) {
    RateSeries series;
    series.orientation = orientation;
    for (const auto& bar : bars) {
        if (!bar.close) continue;
        double v = *bar.close;
        if (!std::isfinite(v) || v <= 0.0) {
            throw DomainError("non-positive close on " + bar.date.to_string());
        }
        series.dates.push_back(bar.date);
        series.values.push_back(v);
    }
    if (series.values.size() < 2) {
        throw InsufficientDataError("rate series needs at least 2 points");
    }
    return series;
}

RateSeries invert_rates(const RateSeries& series) {
    RateSeries out;
    out.dates = series.dates;
    out.orientation = series.orientation == Orientation::UsdPerBdt ? Orientation::BdtPerUsd
                                                                   : Orientation::UsdPerBdt;
    out.values.reserve(series.values.size());
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        double v = series.values[i];
        if (!std::isfinite(v) || v <= 0.0) {
            throw DomainError("cannot invert non-positive rate on " + series.dates[i].to_string());
        }
        out.values.push_back(1.0 / v);
    }
    return out;
}

std::string fetch_remote(const std::string& url, const std::string& cache_dir, bool* stale) {
    namespace fs = std::filesystem;
    if (stale) *stale = false;

    char key[32];
    std::snprintf(key, sizeof(key), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(url)));
    fs::create_directories(cache_dir);
    fs::path cache_file = fs::path(cache_dir) / (std::string(key) + ".csv");

    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw FetchError("malformed url: " + url);
    auto path_start = url.find('/', scheme_end + 3);
    std::string host = url.substr(0, path_start == std::string::npos ? url.size() : path_start);
    std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

    std::string body;
    bool fetched = false;
    {
        httplib::Client client(host);
        client.set_connection_timeout(10);
        client.set_read_timeout(30);
        client.set_follow_location(true);
        if (auto res = client.Get(path); res && res->status == 200) {
            body = res->body;
            fetched = true;
        }
    }

    if (fetched) {
        // Write-then-rename so concurrent readers never see a partial file.
        fs::path tmp = cache_file;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary);
            out.write(body.data(), static_cast<std::streamsize>(body.size()));
        }
        fs::rename(tmp, cache_file);
        return body;
    }

    if (fs::exists(cache_file)) {
        std::ifstream in(cache_file, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        if (stale) *stale = true;
        return buf.str();
    }
    throw FetchError("fetch failed for " + url + " and no cached copy exists");
}

std::string rate_series_to_csv(const RateSeries& series) {
    std::ostringstream out;
    out << "date,value,orientation\n";
    char buf[64];
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", series.values[i]);
        out << series.dates[i].to_string() << ',' << buf << ','
            << orientation_name(series.orientation) << '\n';
    }
    return out.str();
}

RateSeries rate_series_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || trim(line) != "date,value,orientation") {
        throw FormatError("bad series CSV header");
    }
    RateSeries series;
    bool orientation_set = false;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 3) {
            throw FormatError("line " + std::to_string(line_no) + ": expected 3 fields");
        }
        series.dates.push_back(Date::parse(trim(fields[0])));
        auto v = parse_cell(fields[1], line_no);
        if (!v) throw FormatError("line " + std::to_string(line_no) + ": missing value");
        series.values.push_back(*v);
        std::string o = trim(fields[2]);
        series.orientation =
            o == "USD_PER_BDT" ? Orientation::UsdPerBdt : Orientation::BdtPerUsd;
        orientation_set = true;
    }
    if (!orientation_set || series.values.size() < 2) {
        throw InsufficientDataError("series CSV has fewer than 2 rows");
    }
    return series;
}

}  // namespace fxcast
