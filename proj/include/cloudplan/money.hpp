#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace cloudplan {

/// Currency amount held as integer micro-dollars.
///
/// All plan arithmetic happens at this granularity so that sums, comparisons
/// and oracle cross-checks are exact. Conversions from floating-point prices
/// round to the nearest micro-dollar, ties away from zero.
class Money {
public:
    static constexpr std::int64_t kMicrosPerDollar = 1'000'000;

    constexpr Money() = default;

    static constexpr Money from_micros(std::int64_t micros) {
        Money m;
        m.micros_ = micros;
        return m;
    }

    /// Rounds a dollar amount to the nearest micro-dollar.
    static Money from_dollars(long double dollars);

    /// Parses a plain decimal dollar string such as "25.84", "-3" or "0.000001".
    /// More than six fractional digits is an error, not a silent truncation.
    static Money parse(std::string_view text);

    constexpr std::int64_t micros() const { return micros_; }
    constexpr long double dollars() const {
        return static_cast<long double>(micros_) / kMicrosPerDollar;
    }

    /// Decimal dollars with exactly six fractional digits.
    std::string to_string() const;

    constexpr Money operator-() const { return from_micros(-micros_); }
    constexpr Money& operator+=(Money o) {
        micros_ += o.micros_;
        return *this;
    }
    constexpr Money& operator-=(Money o) {
        micros_ -= o.micros_;
        return *this;
    }
    friend constexpr Money operator+(Money a, Money b) { return a += b; }
    friend constexpr Money operator-(Money a, Money b) { return a -= b; }

    friend constexpr auto operator<=>(Money, Money) = default;

private:
    std::int64_t micros_ = 0;
};

inline constexpr Money kZeroMoney{};

}  // namespace cloudplan
