#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace pcnap {

using Rational = mpq_class;

enum class ErrorKind { validation, infeasible, cap_exceeded, precondition, invariant };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

// Accepts "7", "-3/4", "0.125", "1e-2".
Rational parse_rational(std::string_view text);
// Shortest decimal representation of the double, then read exactly.
Rational rational_from_double(double value);
std::string to_string(const Rational& q);

// Best rational approximation with denominator at most max_den.
Rational approximate(double value, long max_den);

// Non-negative value that may be +infinity; sums absorb infinity.
class Extended {
public:
    Extended() = default;
    Extended(Rational v) : value_(std::move(v)) {}
    static Extended infinity();

    bool is_infinite() const { return infinite_; }
    const Rational& value() const;

    Extended& operator+=(const Extended& other);
    friend Extended operator+(Extended a, const Extended& b) { return a += b; }
    friend bool operator==(const Extended& a, const Extended& b);
    friend bool operator<(const Extended& a, const Extended& b);
    friend bool operator<=(const Extended& a, const Extended& b) { return !(b < a); }

private:
    bool infinite_ = false;
    Rational value_ = 0;
};

std::string to_string(const Extended& e);

}  // namespace pcnap
