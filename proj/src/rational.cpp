#include "pcnap/rational.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace pcnap {

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

Rational parse_integer(std::string_view s) {
    bool neg = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        neg = s[0] == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s)) fail(ErrorKind::validation, "malformed number");
    mpz_class z(std::string(s), 10);
    return Rational(neg ? mpz_class(-z) : z);
}

Rational pow10(long e) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
    return e < 0 ? Rational(mpz_class(1), p) : Rational(p);
}

}  // namespace

Rational parse_rational(std::string_view text) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (text.empty()) fail(ErrorKind::validation, "empty number");

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        Rational num = parse_integer(text.substr(0, slash));
        Rational den = parse_integer(text.substr(slash + 1));
        if (den == 0) fail(ErrorKind::validation, "zero denominator");
        Rational q = num / den;
        q.canonicalize();
        return q;
    }

    long exponent = 0;
    if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view exp_text = text.substr(e + 1);
        if (!exp_text.empty() && exp_text[0] == '+') exp_text.remove_prefix(1);
        auto [ptr, ec] = std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), exponent);
        if (ec != std::errc() || ptr != exp_text.data() + exp_text.size())
            fail(ErrorKind::validation, "malformed exponent");
        text = text.substr(0, e);
    }

    bool neg = false;
    if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
        neg = text[0] == '-';
        text.remove_prefix(1);
    }
    std::string digits;
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view whole = text.substr(0, dot);
        std::string_view frac = text.substr(dot + 1);
        if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
            (whole.empty() && frac.empty()))
            fail(ErrorKind::validation, "malformed decimal");
        digits = std::string(whole) + std::string(frac);
        exponent -= static_cast<long>(frac.size());
    } else {
        if (!all_digits(text)) fail(ErrorKind::validation, "malformed number");
        digits = std::string(text);
    }
    Rational q(mpz_class(digits, 10));
    q *= pow10(exponent);
    if (neg) q = -q;
    q.canonicalize();
    return q;
}

Rational rational_from_double(double value) {
    if (!std::isfinite(value)) fail(ErrorKind::validation, "non-finite number");
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return parse_rational(std::string_view(buf, static_cast<size_t>(ptr - buf)));
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational approximate(double value, long max_den) {
    // Continued fraction convergents, stopping before the denominator bound.
    bool neg = value < 0;
    double x = std::fabs(value);
    long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double r = x;
    for (int iter = 0; iter < 64; ++iter) {
        double a_d = std::floor(r);
        if (a_d > 1e15) break;
        long a = static_cast<long>(a_d);
        long h2 = a * h1 + h0;
        long k2 = a * k1 + k0;
        if (k2 > max_den) break;
        h0 = h1; h1 = h2;
        k0 = k1; k1 = k2;
        double frac = r - a_d;
        if (frac < 1e-15) break;
        r = 1.0 / frac;
    }
    if (k1 == 0) return Rational(0);
    Rational q(h1, k1);
    q.canonicalize();
    return neg ? Rational(-q) : q;
}

Extended Extended::infinity() {
    Extended e;
    e.infinite_ = true;
    return e;
}

const Rational& Extended::value() const {
    if (infinite_) fail(ErrorKind::invariant, "value of infinite quantity");
    return value_;
}

Extended& Extended::operator+=(const Extended& other) {
    if (other.infinite_) infinite_ = true;
    if (!infinite_) value_ += other.value_;
    return *this;
}

bool operator==(const Extended& a, const Extended& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
}

bool operator<(const Extended& a, const Extended& b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
}

std::string to_string(const Extended& e) { return e.is_infinite() ? "inf" : to_string(e.value()); }

}  // namespace pcnap
