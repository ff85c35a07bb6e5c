#include "padic/core.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace padic {

bool is_prime(unsigned long n) noexcept {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (unsigned long d = 3; d <= n / d; d += 2)
        if (n % d == 0) return false;
    return true;
}

Prime::Prime(unsigned long value) : value_(value) {
    if (!is_prime(value))
        throw std::invalid_argument("not a prime: " + std::to_string(value));
}

mpz_class Prime::pow(unsigned long e) const {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), value_, e);
    return r;
}

double Prime::real_pow(double e) const { return std::pow(static_cast<double>(value_), e); }

void require_same_prime(Prime a, Prime b) {
    if (!(a == b))
        throw std::invalid_argument("prime mismatch: " + std::to_string(a.value()) + " vs " +
                                    std::to_string(b.value()));
}

long Valuation::value() const {
    if (!value_) throw std::domain_error("valuation of zero is +infinity");
    return *value_;
}

std::strong_ordering operator<=>(const Valuation& a, const Valuation& b) noexcept {
    if (a.is_infinite() || b.is_infinite())
        return static_cast<int>(a.is_infinite()) <=> static_cast<int>(b.is_infinite());
    return *a.value_ <=> *b.value_;
}

// ---------------------------------------------------------------------------
// PAdicRational

PAdicRational::PAdicRational(Prime p, mpz_class numerator, long scale)
    : prime_(p), numerator_(std::move(numerator)), scale_(scale) {
    if (scale_ < 0) {
        numerator_ *= prime_.pow(static_cast<unsigned long>(-scale_));
        scale_ = 0;
    }
    canonicalize();
}

void PAdicRational::canonicalize() {
    if (numerator_ == 0) {
        scale_ = 0;
        return;
    }
    if (scale_ == 0) return;
    long removable = 0;
    while (removable < scale_ && mpz_divisible_ui_p(numerator_.get_mpz_t(), prime_.value())) {
        mpz_divexact_ui(numerator_.get_mpz_t(), numerator_.get_mpz_t(), prime_.value());
        ++removable;
    }
    scale_ -= removable;
}

PAdicRational PAdicRational::from_fraction(Prime p, const mpz_class& num, const mpz_class& den) {
    if (den <= 0) throw std::invalid_argument("denominator must be a positive power of p");
    mpz_class d = den;
    long k = 0;
    while (d != 1) {
        if (!mpz_divisible_ui_p(d.get_mpz_t(), p.value()))
            throw std::invalid_argument("denominator " + den.get_str() + " is not a power of " +
                                        std::to_string(p.value()));
        mpz_divexact_ui(d.get_mpz_t(), d.get_mpz_t(), p.value());
        ++k;
    }
    return PAdicRational(p, num, k);
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

mpz_class parse_integer(std::string_view s) {
    s = trim(s);
    std::string digits(s);
    if (!digits.empty() && digits.front() == '+') digits.erase(0, 1);
    mpz_class v;
    if (digits.empty() || v.set_str(digits, 10) != 0)
        throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
    return v;
}

}  // namespace

PAdicRational PAdicRational::parse(Prime p, std::string_view text) {
    text = trim(text);
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return PAdicRational(p, parse_integer(text));
    mpz_class num = parse_integer(text.substr(0, slash));
    std::string_view den = trim(text.substr(slash + 1));
    auto caret = den.find('^');
    if (caret == std::string_view::npos) return from_fraction(p, num, parse_integer(den));
    mpz_class base = parse_integer(den.substr(0, caret));
    mpz_class exponent = parse_integer(den.substr(caret + 1));
    if (base != p.value())
        throw std::invalid_argument("denominator base must be " + std::to_string(p.value()));
    if (exponent < 0 || !exponent.fits_slong_p())
        throw std::invalid_argument("bad denominator exponent in '" + std::string(text) + "'");
    return PAdicRational(p, num, exponent.get_si());
}

PAdicRational PAdicRational::scaled(long e) const { return PAdicRational(prime_, numerator_, scale_ - e); }

PAdicRational PAdicRational::operator-() const { return PAdicRational(prime_, -numerator_, scale_); }

PAdicRational PAdicRational::operator+(const PAdicRational& rhs) const {
    require_same_prime(prime_, rhs.prime_);
    long k = std::max(scale_, rhs.scale_);
    mpz_class a = numerator_ * prime_.pow(static_cast<unsigned long>(k - scale_));
    mpz_class b = rhs.numerator_ * prime_.pow(static_cast<unsigned long>(k - rhs.scale_));
    return PAdicRational(prime_, a + b, k);
}

PAdicRational PAdicRational::operator-(const PAdicRational& rhs) const { return *this + (-rhs); }

PAdicRational PAdicRational::operator*(const PAdicRational& rhs) const {
    require_same_prime(prime_, rhs.prime_);
    return PAdicRational(prime_, numerator_ * rhs.numerator_, scale_ + rhs.scale_);
}

double PAdicRational::to_double() const {
    mpq_class q(numerator_, prime_.pow(static_cast<unsigned long>(scale_)));
    return q.get_d();
}

std::string PAdicRational::to_string() const {
    if (scale_ == 0) return numerator_.get_str();
    return numerator_.get_str() + "/" + prime_.pow(static_cast<unsigned long>(scale_)).get_str();
}

// ---------------------------------------------------------------------------
// FractionalIndex

FractionalIndex FractionalIndex::make(Prime p, const mpz_class& m, long k) {
    if (k < 0) throw std::invalid_argument("fraction depth must be non-negative");
    if (k == 0) return zero(p);
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), m.get_mpz_t(), p.pow(static_cast<unsigned long>(k)).get_mpz_t());
    PAdicRational q(p, r, k);
    return FractionalIndex(p, q.numerator(), q.scale());
}

FractionalIndex FractionalIndex::shifted(long e) const { return frac(to_rational().scaled(e)); }

FractionalIndex FractionalIndex::divided_by_p() const {
    if (is_zero()) return *this;
    return FractionalIndex(prime_, numerator_, depth_ + 1);
}

// ---------------------------------------------------------------------------
// Characters

std::complex<double> RootOfUnity::to_complex() const {
    const long k = phase_.depth();
    if (k == 0) return {1.0, 0.0};
    const mpz_class order = phase_.prime().pow(static_cast<unsigned long>(k));
    const mpz_class& m = phase_.numerator();
    // quarter turns are returned exactly
    if (mpz_divisible_p(mpz_class(4 * m).get_mpz_t(), order.get_mpz_t())) {
        mpz_class q = 4 * m / order;
        switch (q.get_si()) {
            case 1: return {0.0, 1.0};
            case 2: return {-1.0, 0.0};
            case 3: return {0.0, -1.0};
            default: break;
        }
    }
    // reduce the turn into [-1/2, 1/2) before converting
    mpz_class centred = (2 * m >= order) ? mpz_class(m - order) : m;
    const double turns = mpq_class(centred, order).get_d();
    const double angle = 2.0 * std::numbers::pi * turns;
    return {std::cos(angle), std::sin(angle)};
}

RootOfUnity RootOfUnity::operator*(const RootOfUnity& rhs) const {
    return RootOfUnity(frac(phase_.to_rational() + rhs.phase_.to_rational()));
}

RootOfUnity RootOfUnity::conj() const { return RootOfUnity(frac(-phase_.to_rational())); }

// ---------------------------------------------------------------------------
// Free functions

Valuation valuation(const PAdicRational& x) {
    if (x.is_zero()) return Valuation::infinity();
    if (x.scale() > 0) return Valuation(-x.scale());
    mpz_class m = x.numerator();
    long v = 0;
    while (mpz_divisible_ui_p(m.get_mpz_t(), x.prime().value())) {
        mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), x.prime().value());
        ++v;
    }
    return Valuation(v);
}

double norm(const PAdicRational& x) {
    Valuation v = valuation(x);
    if (v.is_infinite()) return 0.0;
    return x.prime().real_pow(static_cast<double>(-v.value()));
}

FractionalIndex frac(const PAdicRational& x) { return FractionalIndex::make(x.prime(), x.numerator(), x.scale()); }

RootOfUnity character_phase(const PAdicRational& x) { return RootOfUnity(frac(x)); }

std::complex<double> character(const PAdicRational& x) { return character_phase(x).to_complex(); }

bool in_ball(const PAdicRational& x, long gamma, const FractionalIndex& n) {
    require_same_prime(x.prime(), n.prime());
    return frac(x.scaled(gamma)) == n;
}

SeparationScale separation_scale(const PAdicRational& x, const PAdicRational& y) {
    require_same_prime(x.prime(), y.prime());
    Valuation v = valuation(x - y);
    if (v.is_infinite()) throw std::invalid_argument("separation_scale: points coincide");
    const long gamma = -v.value();
    return {gamma, frac(x.scaled(gamma))};
}

}  // namespace padic
