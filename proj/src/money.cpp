#include "cloudplan/money.hpp"

#include "cloudplan/errors.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace cloudplan {

Money Money::from_dollars(long double dollars) {
    const long double micros = dollars * kMicrosPerDollar;
    if (!std::isfinite(micros) ||
        std::fabs(micros) > static_cast<long double>(std::numeric_limits<std::int64_t>::max() / 2)) {
        throw InputError("currency amount out of range");
    }
    return from_micros(std::llroundl(micros));
}

Money Money::parse(std::string_view text) {
    const std::string_view original = text;
    auto fail = [&]() -> Money {
        throw InputError("invalid decimal amount '" + std::string(original) + "'");
    };
    if (text.empty()) return fail();

    bool negative = false;
    if (text.front() == '-' || text.front() == '+') {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    if (!text.empty() && text.front() == '$') text.remove_prefix(1);
    if (text.empty()) return fail();

    std::int64_t whole = 0;
    std::int64_t frac = 0;
    int frac_digits = 0;
    bool seen_dot = false;
    bool seen_digit = false;
    for (char c : text) {
        if (c == '.') {
            if (seen_dot) return fail();
            seen_dot = true;
            continue;
        }
        if (c < '0' || c > '9') return fail();
        seen_digit = true;
        const int d = c - '0';
        if (seen_dot) {
            if (++frac_digits > 6) return fail();
            frac = frac * 10 + d;
        } else {
            if (whole > (std::numeric_limits<std::int64_t>::max() / kMicrosPerDollar) / 10) return fail();
            whole = whole * 10 + d;
        }
    }
    if (!seen_digit) return fail();
    for (int i = frac_digits; i < 6; ++i) frac *= 10;
    const std::int64_t micros = whole * kMicrosPerDollar + frac;
    return from_micros(negative ? -micros : micros);
}

std::string Money::to_string() const {
    const bool negative = micros_ < 0;
    // Two's-complement safe magnitude.
    const auto magnitude = negative ? static_cast<std::uint64_t>(-(micros_ + 1)) + 1
                                    : static_cast<std::uint64_t>(micros_);
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s%llu.%06llu", negative ? "-" : "",
                  static_cast<unsigned long long>(magnitude / kMicrosPerDollar),
                  static_cast<unsigned long long>(magnitude % kMicrosPerDollar));
    return buf;
}

}  // namespace cloudplan
