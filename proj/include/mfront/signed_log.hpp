#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mfront {

// Scalar stored as (sign, log|value|) so that quantities like exp(-c/eps)
// survive far below the smallest normal double.  Zero is sign == 0 with
// log_abs = -inf.  Only the operations needed by the interface-speed
// pipeline are provided: products/quotients (exact in log space) and
// sums/differences via log1p/expm1, which keep full relative precision
// even when the two magnitudes are close.
struct SignedLog {
    int sign = 0;
    double log_abs = -std::numeric_limits<double>::infinity();

    SignedLog() = default;
    SignedLog(int s, double la) : sign(s), log_abs(la) {
        if (s == 0) log_abs = -std::numeric_limits<double>::infinity();
    }

    static SignedLog from_value(double v) {
        if (v == 0.0) return SignedLog();
        if (!std::isfinite(v)) throw std::domain_error("SignedLog: non-finite value");
        return SignedLog(v > 0.0 ? 1 : -1, std::log(std::fabs(v)));
    }

    // May underflow to 0.0 or overflow to +/-inf; callers needing the exact
    // magnitude should read log_abs instead.
    double value() const {
        if (sign == 0) return 0.0;
        return sign * std::exp(log_abs);
    }

    bool is_zero() const { return sign == 0; }

    SignedLog operator-() const { return SignedLog(-sign, log_abs); }

    SignedLog operator*(const SignedLog& o) const {
        if (sign == 0 || o.sign == 0) return SignedLog();
        return SignedLog(sign * o.sign, log_abs + o.log_abs);
    }

    SignedLog operator/(const SignedLog& o) const {
        if (o.sign == 0) throw std::domain_error("SignedLog: division by zero");
        if (sign == 0) return SignedLog();
        return SignedLog(sign * o.sign, log_abs - o.log_abs);
    }

    SignedLog operator*(double v) const { return *this * from_value_or_zero(v); }
    SignedLog operator/(double v) const { return *this / from_value_or_zero(v); }

    SignedLog operator+(const SignedLog& o) const {
        if (sign == 0) return o;
        if (o.sign == 0) return *this;
        const SignedLog& big = (log_abs >= o.log_abs) ? *this : o;
        const SignedLog& small = (log_abs >= o.log_abs) ? o : *this;
        const double d = small.log_abs - big.log_abs;  // <= 0
        if (sign == o.sign)
            return SignedLog(big.sign, big.log_abs + std::log1p(std::exp(d)));
        const double m = -std::expm1(d);  // 1 - e^d in (0, 1]
        if (m == 0.0) return SignedLog();
        return SignedLog(big.sign, big.log_abs + std::log(m));
    }

    SignedLog operator-(const SignedLog& o) const { return *this + (-o); }

    // Ordering by actual signed value.
    bool operator<(const SignedLog& o) const {
        if (sign != o.sign) return sign < o.sign;
        if (sign == 0) return false;
        return sign > 0 ? log_abs < o.log_abs : log_abs > o.log_abs;
    }

  private:
    static SignedLog from_value_or_zero(double v) {
        return v == 0.0 ? SignedLog() : from_value(v);
    }
};

inline SignedLog abs(const SignedLog& s) {
    return s.sign == 0 ? s : SignedLog(1, s.log_abs);
}

}  // namespace mfront
