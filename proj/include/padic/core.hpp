#pragma once

// Exact arithmetic on Z[1/p]: rationals whose denominator is a power of a
// prime p. Every ball centre, wavelet argument and grid point used by the
// library lives in this ring, so norms, fractional parts and ball membership
// are decided exactly.

#include <gmpxx.h>

#include <complex>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace padic {

/// A prime number, checked at construction.
class Prime {
public:
    explicit Prime(unsigned long value);

    unsigned long value() const noexcept { return value_; }

    /// p^e for e >= 0, exact.
    mpz_class pow(unsigned long e) const;
    /// p^e as a double, e of any sign.
    double real_pow(double e) const;

    friend bool operator==(Prime, Prime) = default;

private:
    unsigned long value_;
};

bool is_prime(unsigned long n) noexcept;

/// The p-adic valuation: an integer, or +infinity for zero. The infinite
/// marker carries no integer and refuses arithmetic.
class Valuation {
public:
    static Valuation infinity() noexcept { return Valuation(); }
    explicit Valuation(long v) noexcept : value_(v) {}

    bool is_infinite() const noexcept { return !value_.has_value(); }
    /// Throws std::domain_error when infinite.
    long value() const;

    friend bool operator==(const Valuation&, const Valuation&) = default;
    /// +infinity compares greater than every finite valuation.
    friend std::strong_ordering operator<=>(const Valuation& a, const Valuation& b) noexcept;

private:
    Valuation() = default;
    std::optional<long> value_;
};

class FractionalIndex;

/// Exact element m / p^k of Z[1/p], kept canonical: k == 0 or p does not
/// divide m. Zero is 0 / p^0.
class PAdicRational {
public:
    PAdicRational(Prime p, mpz_class numerator, long scale = 0);

    static PAdicRational zero(Prime p) { return PAdicRational(p, 0); }
    /// num / den with den a positive power of p (den = 1 allowed).
    static PAdicRational from_fraction(Prime p, const mpz_class& num, const mpz_class& den);
    /// Parses "m", "m/d" (d a power of p) or "m/p^k" such as "3/2^4".
    static PAdicRational parse(Prime p, std::string_view text);

    Prime prime() const noexcept { return prime_; }
    const mpz_class& numerator() const noexcept { return numerator_; }
    long scale() const noexcept { return scale_; }
    bool is_zero() const noexcept { return numerator_ == 0; }

    /// p^e * x.
    PAdicRational scaled(long e) const;

    PAdicRational operator-() const;
    PAdicRational operator+(const PAdicRational& rhs) const;
    PAdicRational operator-(const PAdicRational& rhs) const;
    PAdicRational operator*(const PAdicRational& rhs) const;

    friend bool operator==(const PAdicRational& a, const PAdicRational& b) {
        return a.prime_ == b.prime_ && a.scale_ == b.scale_ && a.numerator_ == b.numerator_;
    }

    double to_double() const;
    /// "m" or "m/p^k" with p^k written out, e.g. "3/4".
    std::string to_string() const;

private:
    void canonicalize();

    Prime prime_;
    mpz_class numerator_;
    long scale_ = 0;
};

/// Canonical element of Q_p/Z_p, the fraction m / p^k with 0 <= m < p^k and
/// either (m, k) = (0, 0) or p not dividing m. Indexes ball translations.
class FractionalIndex {
public:
    static FractionalIndex zero(Prime p) { return FractionalIndex(p, 0, 0); }
    /// Reduces m modulo p^k and canonicalizes.
    static FractionalIndex make(Prime p, const mpz_class& m, long k);

    Prime prime() const noexcept { return prime_; }
    const mpz_class& numerator() const noexcept { return numerator_; }
    long depth() const noexcept { return depth_; }
    bool is_zero() const noexcept { return depth_ == 0; }

    /// The representative m / p^k in [0, 1).
    PAdicRational to_rational() const { return PAdicRational(prime_, numerator_, depth_); }
    /// frac(p^e * n).
    FractionalIndex shifted(long e) const;
    /// The representative divided by p: m / p^(k+1).
    FractionalIndex divided_by_p() const;

    friend bool operator==(const FractionalIndex& a, const FractionalIndex& b) {
        return a.prime_ == b.prime_ && a.depth_ == b.depth_ && a.numerator_ == b.numerator_;
    }
    friend bool operator<(const FractionalIndex& a, const FractionalIndex& b) {
        if (a.depth_ != b.depth_) return a.depth_ < b.depth_;
        return a.numerator_ < b.numerator_;
    }

    std::string to_string() const { return to_rational().to_string(); }

private:
    FractionalIndex(Prime p, mpz_class m, long k) : prime_(p), numerator_(std::move(m)), depth_(k) {}

    Prime prime_;
    mpz_class numerator_;
    long depth_;
};

/// A ball {x : |p^gamma x - n|_p <= 1}: centre p^-gamma n, radius p^gamma.
struct BallIndex {
    long gamma;
    FractionalIndex n;

    friend bool operator==(const BallIndex&, const BallIndex&) = default;
    friend bool operator<(const BallIndex& a, const BallIndex& b) {
        if (a.gamma != b.gamma) return a.gamma < b.gamma;
        return a.n < b.n;
    }
};

/// exp(2 pi i r) held exactly as r in Q_p/Z_p.
class RootOfUnity {
public:
    explicit RootOfUnity(FractionalIndex phase) : phase_(std::move(phase)) {}

    const FractionalIndex& phase() const noexcept { return phase_; }
    std::complex<double> to_complex() const;

    RootOfUnity operator*(const RootOfUnity& rhs) const;
    RootOfUnity conj() const;

    friend bool operator==(const RootOfUnity&, const RootOfUnity&) = default;

private:
    FractionalIndex phase_;
};

Valuation valuation(const PAdicRational& x);
/// |x|_p as a real number (0 for x = 0).
double norm(const PAdicRational& x);
/// The unique n in Q_p/Z_p with |x - n|_p <= 1.
FractionalIndex frac(const PAdicRational& x);
RootOfUnity character_phase(const PAdicRational& x);
std::complex<double> character(const PAdicRational& x);
/// |p^gamma x - n|_p <= 1.
bool in_ball(const PAdicRational& x, long gamma, const FractionalIndex& n);

struct SeparationScale {
    long gamma;          // |x - y|_p = p^gamma
    FractionalIndex n;   // ball of radius p^gamma holding both points
};

/// The smallest ball containing x and y. Throws std::invalid_argument if x == y.
SeparationScale separation_scale(const PAdicRational& x, const PAdicRational& y);

void require_same_prime(Prime a, Prime b);

}  // namespace padic
