#include "rabi/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace rabi {

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

} // namespace

Rational rational_from_string(const std::string& text) {
    std::string s = text;
    bool negative = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        negative = s[0] == '-';
        s.erase(0, 1);
    }
    if (s.empty()) throw std::invalid_argument("empty rational literal");

    Rational value;
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::string num = s.substr(0, slash);
        std::string den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) {
            throw std::invalid_argument("malformed fraction: " + text);
        }
        value = Rational(mpz_class(num, 10), mpz_class(den, 10));
        if (value.get_den() == 0) throw std::invalid_argument("zero denominator: " + text);
        value.canonicalize();
    } else {
        auto dot = s.find('.');
        std::string digits = s;
        size_t frac_len = 0;
        if (dot != std::string::npos) {
            frac_len = s.size() - dot - 1;
            digits = s.substr(0, dot) + s.substr(dot + 1);
        }
        if (digits.empty()) digits = "0";
        if (!all_digits(digits)) {
            throw std::invalid_argument("malformed decimal: " + text);
        }
        mpz_class den = 1;
        for (size_t i = 0; i < frac_len; ++i) den *= 10;
        value = Rational(mpz_class(digits, 10), den);
        value.canonicalize();
    }
    if (negative) value = -value;
    return value;
}

Rational rational_from_double(double x) {
    Rational q(x);
    q.canonicalize();
    return q;
}

double to_double(const Rational& q) { return q.get_d(); }

int sign(const Rational& q) { return sgn(q); }

std::string to_string(const Rational& q) { return q.get_str(); }

} // namespace rabi
