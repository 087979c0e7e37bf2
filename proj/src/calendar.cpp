#include "rdtfg/calendar.hpp"

#include <charconv>
#include <cstdio>

#include "rdtfg/error.hpp"

namespace rdtfg {

namespace {

std::optional<int> parse_fixed(std::string_view text, std::size_t pos, std::size_t width) {
    if (pos + width > text.size()) {
        return std::nullopt;
    }
    int value = 0;
    for (std::size_t i = pos; i < pos + width; ++i) {
        if (text[i] < '0' || text[i] > '9') {
            return std::nullopt;
        }
        value = value * 10 + (text[i] - '0');
    }
    return value;
}

} // namespace

Month::Month(int year, unsigned month) : ym_(std::chrono::year{year}, std::chrono::month{month}) {
    require(ym_.ok(), ErrorKind::InvalidArgument, "Month: invalid year/month");
}

std::optional<Month> Month::parse(std::string_view text) {
    if (text.size() != 7 || text[4] != '-') {
        return std::nullopt;
    }
    const auto y = parse_fixed(text, 0, 4);
    const auto m = parse_fixed(text, 5, 2);
    if (!y || !m || *m < 1 || *m > 12) {
        return std::nullopt;
    }
    return Month(*y, static_cast<unsigned>(*m));
}

Month Month::next() const { return plus(1); }

Month Month::plus(int months) const {
    Month out;
    out.ym_ = ym_ + std::chrono::months{months};
    return out;
}

std::string Month::last_day() const {
    const std::chrono::year_month_day_last last{ym_.year(), std::chrono::month_day_last{ym_.month()}};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year(), month(), static_cast<unsigned>(last.day()));
    return buf;
}

std::int64_t Month::start_epoch() const {
    const std::chrono::sys_days days{ym_ / std::chrono::day{1}};
    return static_cast<std::int64_t>(days.time_since_epoch().count()) * 86400;
}

std::string Month::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u", year(), month());
    return buf;
}

std::string to_rfc3339(std::int64_t epoch_seconds) {
    const std::chrono::sys_seconds tp{std::chrono::seconds{epoch_seconds}};
    const auto days = std::chrono::floor<std::chrono::days>(tp);
    const std::chrono::year_month_day ymd{days};
    const std::chrono::hh_mm_ss hms{tp - days};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

std::optional<std::int64_t> parse_rfc3339(std::string_view text) {
    // Only the canonical UTC form this engine writes.
    if (text.size() != 20 || text[4] != '-' || text[7] != '-' || text[10] != 'T' || text[13] != ':' ||
        text[16] != ':' || text[19] != 'Z') {
        return std::nullopt;
    }
    const auto y = parse_fixed(text, 0, 4);
    const auto mo = parse_fixed(text, 5, 2);
    const auto d = parse_fixed(text, 8, 2);
    const auto h = parse_fixed(text, 11, 2);
    const auto mi = parse_fixed(text, 14, 2);
    const auto s = parse_fixed(text, 17, 2);
    if (!y || !mo || !d || !h || !mi || !s || *h > 23 || *mi > 59 || *s > 59) {
        return std::nullopt;
    }
    const std::chrono::year_month_day ymd{std::chrono::year{*y}, std::chrono::month{static_cast<unsigned>(*mo)},
                                          std::chrono::day{static_cast<unsigned>(*d)}};
    if (!ymd.ok()) {
        return std::nullopt;
    }
    const auto days = std::chrono::sys_days{ymd}.time_since_epoch().count();
    return static_cast<std::int64_t>(days) * 86400 + *h * 3600 + *mi * 60 + *s;
}

} // namespace rdtfg
