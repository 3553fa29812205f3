#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>

#include <gmpxx.h>

namespace approval {

// Exact rational number, always in lowest terms with a positive denominator.
//
// Values whose reduced numerator and denominator both fit in int64 are kept
// inline; anything larger is promoted to a shared, immutable GMP rational.
// The representation is canonical, so equal values compare equal regardless
// of the path that produced them.
class Rational {
public:
    Rational() = default;
    Rational(std::int64_t value) : num_(value) {} // NOLINT(google-explicit-constructor)
    Rational(std::int64_t num, std::int64_t den);
    explicit Rational(const mpq_class& value);

    // num/den from 128-bit integers; den must be nonzero.
    static Rational fraction(__int128 num, __int128 den);
    // Parses "a", "-a" or "a/b".
    static Rational parse(const std::string& text);

    bool is_small() const noexcept { return !big_; }
    bool is_integer() const;
    int sign() const;

    mpq_class to_mpq() const;
    double to_double() const;
    // "n" for integers, otherwise "n/d".
    std::string str() const;

    Rational operator-() const;
    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b);
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

private:
    static Rational normalize(mpq_class value);

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
    std::shared_ptr<const mpq_class> big_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

} // namespace approval
