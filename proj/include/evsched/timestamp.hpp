#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>

#include "evsched/errors.hpp"

namespace evsched {

namespace detail {

// Civil-date conversions on the proleptic Gregorian calendar.
inline int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<int64_t>(doe) - 719468;
}

inline void civil_from_days(int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int64_t yy = static_cast<int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

}  // namespace detail

// Wall-clock timestamp at minute resolution, no timezone (naive local time).
struct Timestamp {
    int64_t minutes = 0;  // minutes since 1970-01-01T00:00

    static Timestamp from_civil(int y, int mo, int d, int h, int mi) {
        return {detail::days_from_civil(y, mo, d) * 1440 + h * 60 + mi};
    }

    // Accepts "YYYY-MM-DDTHH:MM" (or a space separator); seconds are ignored.
    static std::optional<Timestamp> try_parse(const std::string& s) {
        int y, mo, d, h, mi;
        char sep;
        if (std::sscanf(s.c_str(), "%4d-%2d-%2d%c%2d:%2d", &y, &mo, &d, &sep, &h, &mi) != 6)
            return std::nullopt;
        if ((sep != 'T' && sep != 't' && sep != ' ') || mo < 1 || mo > 12 || d < 1 || d > 31 ||
            h < 0 || h > 23 || mi < 0 || mi > 59)
            return std::nullopt;
        return from_civil(y, mo, d, h, mi);
    }

    static Timestamp parse(const std::string& s) {
        auto t = try_parse(s);
        if (!t) throw Error("cannot parse timestamp '" + s + "' (expected YYYY-MM-DDTHH:MM)");
        return *t;
    }

    std::string to_string() const {
        int y, mo, d;
        int64_t days = minutes >= 0 ? minutes / 1440 : (minutes - 1439) / 1440;
        int rem = static_cast<int>(minutes - days * 1440);
        detail::civil_from_days(days, y, mo, d);
        char buf[48];
        std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d", y, mo, d, rem / 60, rem % 60);
        return buf;
    }

    Timestamp add_minutes(int64_t m) const { return {minutes + m}; }
    Timestamp add_hours(double h) const {
        return {minutes + static_cast<int64_t>(std::llround(h * 60.0))};
    }
    Timestamp add_days(int d) const { return {minutes + static_cast<int64_t>(d) * 1440}; }

    // Same civil day at hh:mm.
    Timestamp at_time(int hour, int minute) const {
        int64_t days = minutes >= 0 ? minutes / 1440 : (minutes - 1439) / 1440;
        return {days * 1440 + hour * 60 + minute};
    }

    int hour_of_day() const {
        int64_t days = minutes >= 0 ? minutes / 1440 : (minutes - 1439) / 1440;
        return static_cast<int>((minutes - days * 1440) / 60);
    }

    auto operator<=>(const Timestamp&) const = default;
};

inline double hours_between(Timestamp from, Timestamp to) {
    return static_cast<double>(to.minutes - from.minutes) / 60.0;
}

}  // namespace evsched
