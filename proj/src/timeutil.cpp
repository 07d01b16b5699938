#include "driftwatch/timeutil.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>

namespace driftwatch {

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

}  // namespace

std::optional<Timestamp> parse_iso8601(const std::string& text) {
    int year = 0, month = 0, day = 0, hour = 0, minute = 0;
    double second = 0.0;
    int consumed = 0;
    int n = std::sscanf(text.c_str(), "%4d-%2d-%2dT%2d:%2d:%lf%n", &year, &month, &day,
                        &hour, &minute, &second, &consumed);
    if (n != 6) return std::nullopt;

    std::string rest = text.substr(static_cast<std::size_t>(consumed));
    long offset_seconds = 0;
    if (rest == "Z" || rest == "z") {
        offset_seconds = 0;
    } else if (rest.size() == 6 && (rest[0] == '+' || rest[0] == '-') && rest[3] == ':') {
        int oh = 0, om = 0;
        if (std::sscanf(rest.c_str() + 1, "%2d:%2d", &oh, &om) != 2) return std::nullopt;
        offset_seconds = (oh * 3600L + om * 60L) * (rest[0] == '-' ? -1 : 1);
    } else {
        return std::nullopt;
    }

    if (month < 1 || month > 12 || day < 1 || day > 31) return std::nullopt;
    if (hour > 23 || minute > 59 || second < 0.0 || second >= 61.0) return std::nullopt;

    using namespace std::chrono;
    year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                       std::chrono::day{static_cast<unsigned>(day)}};
    if (!ymd.ok()) return std::nullopt;

    sys_seconds t = sys_days{ymd} + hours{hour} + minutes{minute} +
                    seconds{static_cast<std::int64_t>(second)};
    return t - seconds{offset_seconds};
}

std::string format_iso8601(Timestamp t) {
    using namespace std::chrono;
    sys_days dp = floor<days>(t);
    year_month_day ymd{dp};
    hh_mm_ss hms{t - dp};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02ldZ", int(ymd.year()),
                  unsigned(ymd.month()), unsigned(ymd.day()),
                  static_cast<long>(hms.hours().count()),
                  static_cast<long>(hms.minutes().count()),
                  static_cast<long>(hms.seconds().count()));
    return buf;
}

std::optional<Duration> parse_duration(const std::string& text) {
    if (text.empty()) return std::nullopt;
    std::string digits = text;
    std::int64_t multiplier = 1;
    char suffix = text.back();
    if (!std::isdigit(static_cast<unsigned char>(suffix))) {
        switch (suffix) {
            case 's': multiplier = 1; break;
            case 'm': multiplier = 60; break;
            case 'h': multiplier = 3600; break;
            case 'd': multiplier = 86400; break;
            case 'w': multiplier = 7 * 86400; break;
            default: return std::nullopt;
        }
        digits = text.substr(0, text.size() - 1);
    }
    if (!all_digits(digits)) return std::nullopt;
    std::int64_t value = std::strtoll(digits.c_str(), nullptr, 10);
    if (value <= 0) return std::nullopt;
    return Duration{value * multiplier};
}

}  // namespace driftwatch
