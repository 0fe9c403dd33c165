#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fxcast/date.hpp"

namespace fxcast {

// One daily quote bar. Fields stay optional until forward_fill resolves
// the feed's null/empty cells.
struct OhlcBar {
    Date date;
    std::optional<double> open;
    std::optional<double> high;
    std::optional<double> low;
    std::optional<double> close;
    std::optional<double> volume;
};

enum class Orientation { UsdPerBdt, BdtPerUsd };

const char* orientation_name(Orientation o);

// Cleaned close-rate series. Dates strictly increasing, values positive
// and finite, orientation tracked so inversion is bookkept.
struct RateSeries {
    std::vector<Date> dates;
    std::vector<double> values;
    Orientation orientation = Orientation::BdtPerUsd;
};

// Issues found while cleaning; nothing here is fatal.
struct ValidationReport {
    std::vector<std::string> dropped_rows;     // leading-missing rows removed
    std::vector<std::string> ohlc_violations;  // low/high envelope breaches
    std::vector<std::string> duplicate_dates;  // earlier occurrences replaced
    std::size_t rows_parsed = 0;
    std::size_t rows_kept = 0;
};

// Parses the Yahoo-Finance-export layout:
//   Date,Open,High,Low,Close,Adj Close,Volume
// `null` / empty numeric cells become unset optionals. Adj Close is taken
// as the close when present, falling back to Close.
std::vector<OhlcBar> parse_ohlc_csv(const std::string& text);

// Sorts by date, drops duplicate dates (last occurrence wins), then
// replaces each missing field with the most recent prior value of the
// same field. Rows whose close has no prior value are dropped.
std::vector<OhlcBar> forward_fill(std::vector<OhlcBar> bars, ValidationReport* report = nullptr);

// Extracts the close series from filled bars.
RateSeries to_rate_series(const std::vector<OhlcBar>& bars, Orientation orientation,
                          ValidationReport* report = nullptr);

// X -> 1/X element-wise; flips the orientation flag.
RateSeries invert_rates(const RateSeries& series);

// Downloads `url`, caching the body under cache_dir keyed by url hash.
// Offline with a warm cache returns the cached copy and sets *stale.
std::string fetch_remote(const std::string& url, const std::string& cache_dir,
                         bool* stale = nullptr);

// CSV round trip for cleaned series (columns: date,value,orientation).
std::string rate_series_to_csv(const RateSeries& series);
RateSeries rate_series_from_csv(const std::string& text);

}  // namespace fxcast
