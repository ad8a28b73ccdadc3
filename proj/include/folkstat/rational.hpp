#pragma once
// Exact rational thresholds.
//
// Similarity ratios are quotients of small integers (|intersection| over
// |union| or |library|).  Comparing them against a threshold in floating
// point is flaky exactly at the interesting boundaries (1/3, 1/2, ...),
// so thresholds are carried as int64 fractions and every graph edge test
// is an integer cross-multiplication.

#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>

#include "folkstat/errors.hpp"

namespace folkstat {

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1; // > 0, gcd(num, den) == 1

    static Rational of(std::int64_t num, std::int64_t den) {
        if (den <= 0)
            throw domain_error("rational denominator must be positive");
        if (num < 0)
            throw domain_error("negative rationals are not used here");
        const std::int64_t g = std::gcd(num, den);
        return Rational{g ? num / g : num, g ? den / g : den};
    }

    // Accepts plain decimal strings: "0", "0.25", ".5", "1". At most 18
    // fractional digits so the denominator fits in an int64.
    static Rational parse_decimal(std::string_view text) {
        if (text.empty())
            throw domain_error("empty threshold string");
        std::size_t pos = 0;
        std::int64_t int_part = 0;
        bool any_digit = false;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
            int_part = int_part * 10 + (text[pos] - '0');
            ++pos;
            any_digit = true;
        }
        std::int64_t frac_num = 0;
        std::int64_t frac_den = 1;
        if (pos < text.size() && text[pos] == '.') {
            ++pos;
            std::size_t digits = 0;
            while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
                if (++digits > 18)
                    throw domain_error("too many decimal digits: " + std::string(text));
                frac_num = frac_num * 10 + (text[pos] - '0');
                frac_den *= 10;
                ++pos;
                any_digit = true;
            }
        }
        if (!any_digit || pos != text.size())
            throw domain_error("not a decimal number: " + std::string(text));
        return of(int_part * frac_den + frac_num, frac_den);
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    // Decimal expansion when it terminates ("0.05"), "num/den" otherwise.
    std::string str() const {
        std::string out = std::to_string(num / den);
        std::int64_t rem = num % den;
        if (rem == 0)
            return out;
        std::string frac;
        for (int i = 0; i < 18 && rem != 0; ++i) {
            rem *= 10;
            frac.push_back(static_cast<char>('0' + rem / den));
            rem %= den;
        }
        if (rem != 0)
            return std::to_string(num) + "/" + std::to_string(den);
        while (frac.size() > 1 && frac.back() == '0')
            frac.pop_back();
        return out + "." + frac;
    }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }

    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return of(a.num * b.den + b.num * a.den, a.den * b.den);
    }
};

// True iff count_num / count_den > t, evaluated exactly.
inline bool ratio_exceeds(std::uint64_t count_num, std::uint64_t count_den, const Rational& t) {
    // count_den > 0 is the caller's job (non-empty library/union).
    return static_cast<unsigned __int128>(count_num) * static_cast<unsigned __int128>(t.den) >
           static_cast<unsigned __int128>(t.num) * static_cast<unsigned __int128>(count_den);
}

inline void require_threshold_in_range(const Rational& t) {
    if (t.num < 0 || !(t < Rational{1, 1}))
        throw domain_error("threshold must lie in [0,1), got " + t.str());
}

} // namespace folkstat
