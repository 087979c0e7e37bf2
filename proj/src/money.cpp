#include "rdtfg/money.hpp"

#include <cstdlib>
#include <stdexcept>

namespace rdtfg {

std::optional<Money> Money::parse(std::string_view text) {
    if (text.empty()) {
        return std::nullopt;
    }
    bool negative = false;
    std::size_t pos = 0;
    if (text[0] == '-' || text[0] == '+') {
        negative = text[0] == '-';
        pos = 1;
    }
    std::int64_t whole = 0;
    std::size_t whole_digits = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
        if (whole > 900'000'000'000'000LL) {
            return std::nullopt;
        }
        whole = whole * 10 + (text[pos] - '0');
        ++pos;
        ++whole_digits;
    }
    std::int64_t frac = 0;
    std::size_t frac_digits = 0;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
            if (frac_digits == 2) {
                return std::nullopt;
            }
            frac = frac * 10 + (text[pos] - '0');
            ++frac_digits;
            ++pos;
        }
        if (frac_digits == 0) {
            return std::nullopt;
        }
    }
    if (pos != text.size() || whole_digits == 0) {
        return std::nullopt;
    }
    if (frac_digits == 1) {
        frac *= 10;
    }
    const std::int64_t cents = whole * 100 + frac;
    return Money(negative ? -cents : cents);
}

std::string Money::to_string() const {
    const std::int64_t magnitude = cents_ < 0 ? -cents_ : cents_;
    std::string out = cents_ < 0 ? "-" : "";
    out += std::to_string(magnitude / 100);
    out += '.';
    const auto frac = magnitude % 100;
    out += static_cast<char>('0' + frac / 10);
    out += static_cast<char>('0' + frac % 10);
    return out;
}

std::string Money::to_display(bool drop_zero_cents) const {
    const std::int64_t magnitude = cents_ < 0 ? -cents_ : cents_;
    const std::string digits = std::to_string(magnitude / 100);
    std::string grouped;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (i > 0 && (digits.size() - i) % 3 == 0) {
            grouped += ',';
        }
        grouped += digits[i];
    }
    std::string out = cents_ < 0 ? "-$" : "$";
    out += grouped;
    const auto frac = magnitude % 100;
    if (!(drop_zero_cents && frac == 0)) {
        out += '.';
        out += static_cast<char>('0' + frac / 10);
        out += static_cast<char>('0' + frac % 10);
    }
    return out;
}

std::int64_t ratio_tenths(Money a, Money b) {
    if (b.cents() <= 0 || a.cents() < 0) {
        throw std::invalid_argument("ratio_tenths: need a >= 0 and b > 0");
    }
    // round(10a/b) half-up == floor((20a + b) / 2b)
    return (20 * a.cents() + b.cents()) / (2 * b.cents());
}

} // namespace rdtfg
