#ifndef RDTFG_MONEY_HPP
#define RDTFG_MONEY_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace rdtfg {

/// Fixed two-place decimal currency amount, stored as integer cents.
class Money {
public:
    constexpr Money() = default;

    static constexpr Money from_cents(std::int64_t cents) { return Money(cents); }
    static constexpr Money from_dollars(std::int64_t dollars) { return Money(dollars * 100); }

    /// Parses "842", "842.5", "842.50", "-3.10". More than two fractional
    /// digits, exponents and stray characters are rejected.
    static std::optional<Money> parse(std::string_view text);

    constexpr std::int64_t cents() const { return cents_; }

    /// "842.00", "-3.10"
    std::string to_string() const;
    /// "$842", "$842.50", "$510,384.00" style with thousands separators;
    /// whole-dollar amounts drop the cents when `drop_zero_cents` is set.
    std::string to_display(bool drop_zero_cents = false) const;

    double to_double() const { return static_cast<double>(cents_) / 100.0; }

    constexpr Money operator+(Money other) const { return Money(cents_ + other.cents_); }
    constexpr Money operator-(Money other) const { return Money(cents_ - other.cents_); }
    constexpr Money operator-() const { return Money(-cents_); }
    constexpr Money operator*(std::int64_t count) const { return Money(cents_ * count); }
    Money& operator+=(Money other) {
        cents_ += other.cents_;
        return *this;
    }

    constexpr auto operator<=>(const Money&) const = default;

private:
    constexpr explicit Money(std::int64_t cents) : cents_(cents) {}
    std::int64_t cents_ = 0;
};

/// Ratio a/b rounded half-up to one decimal place, computed exactly on cents.
/// Returns tenths (e.g. 52 for 5.2). `b` must be positive and `a` non-negative.
std::int64_t ratio_tenths(Money a, Money b);

} // namespace rdtfg

#endif
