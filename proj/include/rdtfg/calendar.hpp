#ifndef RDTFG_CALENDAR_HPP
#define RDTFG_CALENDAR_HPP

#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace rdtfg {

/// A calendar month, "YYYY-MM".
class Month {
public:
    Month() = default;
    Month(int year, unsigned month);

    static std::optional<Month> parse(std::string_view text);

    int year() const { return static_cast<int>(ym_.year()); }
    unsigned month() const { return static_cast<unsigned>(ym_.month()); }

    Month next() const;
    Month plus(int months) const;
    /// "YYYY-MM-DD" of the last calendar day.
    std::string last_day() const;
    /// Epoch seconds of 00:00:00 UTC on the first day.
    std::int64_t start_epoch() const;
    std::string to_string() const;

    auto operator<=>(const Month& other) const {
        return std::pair(year(), month()) <=> std::pair(other.year(), other.month());
    }
    bool operator==(const Month& other) const { return ym_ == other.ym_; }

private:
    std::chrono::year_month ym_{std::chrono::year{1970}, std::chrono::month{1}};
};

/// "2026-10-15T21:16:00Z"
std::string to_rfc3339(std::int64_t epoch_seconds);
std::optional<std::int64_t> parse_rfc3339(std::string_view text);

} // namespace rdtfg

#endif
