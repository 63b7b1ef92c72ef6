#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "datl/errors.hpp"

namespace datl {

// Exact nonnegative rational. Mixing fractions are kept exact so that
// k = round(f * N) is reproducible across platforms.
struct Fraction {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Fraction() = default;
    Fraction(std::int64_t n, std::int64_t d) : num(n), den(d) {
        if (den <= 0) throw DomainError("fraction denominator must be positive");
        if (num < 0) throw DomainError("fraction must be nonnegative");
        std::int64_t g = std::gcd(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    // round(num/den * n), half away from zero, in exact integer arithmetic.
    std::int64_t rounded_times(std::int64_t n) const {
        return (2 * num * n + den) / (2 * den);
    }

    bool operator==(const Fraction& o) const { return num == o.num && den == o.den; }
    bool operator!=(const Fraction& o) const { return !(*this == o); }

    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }

    // Accepts "p" or "p/q" with nonnegative integers.
    static Fraction parse(const std::string& text) {
        auto parse_int = [&](const std::string& s) -> std::int64_t {
            if (s.empty() || s.size() > 18) throw ConfigError("bad fraction: '" + text + "'");
            std::int64_t v = 0;
            for (char c : s) {
                if (c < '0' || c > '9') throw ConfigError("bad fraction: '" + text + "'");
                v = v * 10 + (c - '0');
            }
            return v;
        };
        auto slash = text.find('/');
        if (slash == std::string::npos) return Fraction(parse_int(text), 1);
        std::int64_t p = parse_int(text.substr(0, slash));
        std::int64_t q = parse_int(text.substr(slash + 1));
        if (q == 0) throw ConfigError("bad fraction: '" + text + "'");
        return Fraction(p, q);
    }
};

} // namespace datl
