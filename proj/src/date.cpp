#include "fxcast/date.hpp"

#include <cstdio>

#include "fxcast/errors.hpp"

namespace fxcast {

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
}

Date Date::parse(const std::string& text) {
    int y = 0, m = 0, d = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%d-%d-%d%c", &y, &m, &d, &tail) != 3) {
        throw FormatError("unparseable date: '" + text + "'");
    }
    if (m < 1 || m > 12 || d < 1 || d > 31) {
        throw FormatError("date out of range: '" + text + "'");
    }
    return Date{y, m, d};
}

}  // namespace fxcast
