#include "secalloc/types.hpp"

#include <numeric>
#include <sstream>

namespace secalloc {

std::int64_t lcm_capped(std::int64_t a, std::int64_t b, std::int64_t cap, bool& truncated) {
    if (a <= 0 || b <= 0)
        throw std::invalid_argument("lcm_capped requires positive operands");
    std::int64_t g = std::gcd(a, b);
    std::int64_t a_red = a / g;
    if (a_red > cap / b) {
        truncated = true;
        return cap;
    }
    std::int64_t l = a_red * b;
    if (l > cap) {
        truncated = true;
        return cap;
    }
    return l;
}

std::string to_decimal_string(const Rational& q) {
    if (q == 0)
        return "0";
    mpf_class f(q, 128);
    mp_exp_t exp;
    std::string digits = f.get_str(exp, 10, 15);
    bool neg = !digits.empty() && digits[0] == '-';
    if (neg)
        digits = digits.substr(1);
    std::ostringstream out;
    if (neg)
        out << '-';
    if (exp <= 0) {
        out << "0.";
        for (mp_exp_t i = 0; i < -exp; ++i)
            out << '0';
        out << digits;
    } else if (static_cast<std::size_t>(exp) >= digits.size()) {
        out << digits;
        for (std::size_t i = digits.size(); i < static_cast<std::size_t>(exp); ++i)
            out << '0';
    } else {
        out << digits.substr(0, exp) << '.' << digits.substr(exp);
    }
    return out.str();
}

std::string to_fraction_string(const Rational& q) {
    return q.get_str();
}

Rational rational_from_string(const std::string& text) {
    if (text.empty())
        throw std::invalid_argument("empty rational literal");
    if (text.find('/') != std::string::npos) {
        Rational q(text);
        q.canonicalize();
        if (q.get_den() == 0)
            throw std::invalid_argument("zero denominator in rational literal: " + text);
        return q;
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) {
        return Rational(mpz_class(text));
    }
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    std::size_t frac_len = text.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+")
        throw std::invalid_argument("malformed decimal literal: " + text);
    mpz_class num(digits);
    mpz_class den(1);
    for (std::size_t i = 0; i < frac_len; ++i)
        den *= 10;
    Rational q(num, den);
    q.canonicalize();
    return q;
}

} // namespace secalloc
