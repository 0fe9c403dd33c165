#pragma once

#include <chrono>
#include <compare>
#include <string>

namespace fxcast {

// Calendar date at day precision, ISO 8601 text form.
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;

    // Serial day number (days since 1970-01-01), for gap arithmetic.
    long serial() const {
        using namespace std::chrono;
        return sys_days{std::chrono::year{year} / month / day}.time_since_epoch().count();
    }

    std::string to_string() const;

    // Parses YYYY-MM-DD. Throws FormatError on malformed input.
    static Date parse(const std::string& text);
};

}  // namespace fxcast
