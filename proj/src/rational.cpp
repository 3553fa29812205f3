#include "approval/rational.hpp"

#include <limits>
#include <numeric>
#include <ostream>

#include "approval/errors.hpp"

namespace approval {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

constexpr std::int64_t small_max = std::numeric_limits<std::int64_t>::max();

u128 abs128(i128 v) { return v < 0 ? u128(0) - u128(v) : u128(v); }

u128 gcd128(u128 a, u128 b) {
    while (b != 0) {
        u128 r = a % b;
        a = b;
        b = r;
    }
    return a;
}

bool fits_small(i128 v) { return v >= -i128(small_max) && v <= i128(small_max); }

mpz_class mpz_from(i128 v) {
    const bool negative = v < 0;
    u128 mag = abs128(v);
    mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(mag >> 64)));
    mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(mag)));
    mpz_class out = (hi << 64) + lo;
    return negative ? mpz_class(-out) : out;
}

std::int64_t abs64(std::int64_t v) { return v < 0 ? -v : v; }

} // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) {
        throw DomainError("rational with zero denominator");
    }
    *this = fraction(num, den);
}

Rational::Rational(const mpq_class& value) { *this = normalize(value); }

Rational Rational::parse(const std::string& text) {
    try {
        mpq_class q(text, 10);
        if (q.get_den() == 0) {
            throw DomainError("rational with zero denominator: " + text);
        }
        q.canonicalize();
        return Rational(q);
    } catch (const std::invalid_argument&) {
        throw DomainError("not a rational number: " + text);
    }
}

Rational Rational::fraction(i128 num, i128 den) {
    if (den == 0) {
        throw DomainError("rational with zero denominator");
    }
    if (den < 0) {
        num = -num;
        den = -den;
    }
    u128 g = gcd128(abs128(num), u128(den));
    if (g > 1) {
        num /= i128(g);
        den /= i128(g);
    }
    Rational r;
    if (fits_small(num) && fits_small(den)) {
        r.num_ = static_cast<std::int64_t>(num);
        r.den_ = static_cast<std::int64_t>(den);
        return r;
    }
    mpq_class q(mpz_from(num), mpz_from(den));
    r.big_ = std::make_shared<const mpq_class>(std::move(q));
    return r;
}

Rational Rational::normalize(mpq_class value) {
    value.canonicalize();
    const mpz_class& n = value.get_num();
    const mpz_class& d = value.get_den();
    Rational r;
    if (mpz_fits_slong_p(n.get_mpz_t()) && mpz_fits_slong_p(d.get_mpz_t())) {
        long ln = n.get_si();
        if (ln != std::numeric_limits<long>::min()) {
            r.num_ = ln;
            r.den_ = d.get_si();
            return r;
        }
    }
    r.big_ = std::make_shared<const mpq_class>(std::move(value));
    return r;
}

bool Rational::is_integer() const { return big_ ? big_->get_den() == 1 : den_ == 1; }

int Rational::sign() const {
    if (big_) {
        return sgn(*big_);
    }
    return (num_ > 0) - (num_ < 0);
}

mpq_class Rational::to_mpq() const {
    if (big_) {
        return *big_;
    }
    return mpq_class(mpz_class(static_cast<long>(num_)), mpz_class(static_cast<long>(den_)));
}

double Rational::to_double() const {
    if (big_) {
        return big_->get_d();
    }
    return static_cast<double>(num_) / static_cast<double>(den_);
}

std::string Rational::str() const {
    if (big_) {
        return big_->get_str();
    }
    if (den_ == 1) {
        return std::to_string(num_);
    }
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator-() const {
    if (big_) {
        return normalize(mpq_class(-*big_));
    }
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

Rational operator+(const Rational& a, const Rational& b) {
    if (a.is_small() && b.is_small()) {
        const std::int64_t g = std::gcd(a.den_, b.den_);
        const i128 num = i128(a.num_) * (b.den_ / g) + i128(b.num_) * (a.den_ / g);
        const i128 den = i128(a.den_ / g) * b.den_;
        return Rational::fraction(num, den);
    }
    return Rational::normalize(mpq_class(a.to_mpq() + b.to_mpq()));
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
    if (a.is_small() && b.is_small()) {
        if (a.num_ == 0 || b.num_ == 0) {
            return Rational();
        }
        const std::int64_t g1 = std::gcd(abs64(a.num_), b.den_);
        const std::int64_t g2 = std::gcd(abs64(b.num_), a.den_);
        const i128 num = i128(a.num_ / g1) * (b.num_ / g2);
        const i128 den = i128(a.den_ / g2) * (b.den_ / g1);
        return Rational::fraction(num, den);
    }
    return Rational::normalize(mpq_class(a.to_mpq() * b.to_mpq()));
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.sign() == 0) {
        throw DomainError("rational division by zero");
    }
    if (a.is_small() && b.is_small()) {
        Rational inv;
        inv.num_ = b.num_ < 0 ? -b.den_ : b.den_;
        inv.den_ = abs64(b.num_);
        return a * inv;
    }
    return Rational::normalize(mpq_class(a.to_mpq() / b.to_mpq()));
}

bool operator==(const Rational& a, const Rational& b) {
    if (a.is_small() != b.is_small()) {
        return false; // canonical representation
    }
    if (a.is_small()) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    return *a.big_ == *b.big_;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (a.is_small() && b.is_small()) {
        const i128 lhs = i128(a.num_) * b.den_;
        const i128 rhs = i128(b.num_) * a.den_;
        return lhs <=> rhs;
    }
    const int c = cmp(a.to_mpq(), b.to_mpq());
    return c <=> 0;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

} // namespace approval
