#pragma once

#include <cstdint>
#include <compare>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace secalloc {

/// Exact arithmetic for utilizations, interference bounds and tightness.
/// All schedulability verdicts are computed on these, never on doubles.
using Rational = mpq_class;

/// Time as an integer count of microseconds. Task parameters are exact
/// integer quantities; the simulator and all analysis run on this grid.
struct TimeValue {
    std::int64_t us = 0;

    constexpr TimeValue() = default;
    constexpr explicit TimeValue(std::int64_t microseconds) : us(microseconds) {}

    static constexpr TimeValue from_ms(std::int64_t ms) { return TimeValue{ms * 1000}; }
    static constexpr TimeValue from_s(std::int64_t s) { return TimeValue{s * 1000000}; }

    constexpr auto operator<=>(const TimeValue&) const = default;

    constexpr TimeValue operator+(TimeValue o) const { return TimeValue{us + o.us}; }
    constexpr TimeValue operator-(TimeValue o) const { return TimeValue{us - o.us}; }
    constexpr TimeValue& operator+=(TimeValue o) { us += o.us; return *this; }
};

inline Rational to_rational(TimeValue t) { return Rational(static_cast<long>(t.us)); }

/// p/q as a ratio of microsecond quantities.
inline Rational ratio(TimeValue num, TimeValue den) {
    Rational q(static_cast<long>(num.us), static_cast<long>(den.us));
    q.canonicalize();
    return q;
}

/// Smallest integer >= q.
inline std::int64_t ceil_to_int64(const Rational& q) {
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    if (!r.fits_slong_p())
        throw std::overflow_error("rational ceiling does not fit in 64 bits");
    return r.get_si();
}

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
    return a / b + (a % b != 0 ? 1 : 0);
}

/// lcm clamped to `cap`; sets `truncated` instead of overflowing.
std::int64_t lcm_capped(std::int64_t a, std::int64_t b, std::int64_t cap, bool& truncated);

/// Render with enough digits to reconstruct the verdict-relevant value
/// (>= 12 significant digits); exact form is available via to_fraction_string.
std::string to_decimal_string(const Rational& q);
std::string to_fraction_string(const Rational& q);

/// Parses "p/q", integers, and plain decimals ("0.25") exactly.
Rational rational_from_string(const std::string& text);

} // namespace secalloc
