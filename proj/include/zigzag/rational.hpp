#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <string>

namespace zz {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// decimal integer; cpp_int alone would read a leading 0 as octal
inline Integer parse_integer(std::string s)
{
    bool neg = !s.empty() && (s[0] == '-' || s[0] == '+');
    std::string sign = neg ? s.substr(0, 1) : "";
    if (neg)
        s = s.substr(1);
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
        throw std::invalid_argument("bad integer '" + sign + s + "'");
    size_t nz = s.find_first_not_of('0');
    s = nz == std::string::npos ? "0" : s.substr(nz);
    Integer v(s);
    return sign == "-" ? Integer(-v) : v;
}

inline Rational parse_rational(const std::string& s)
{
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos)
            return Rational(parse_integer(s));
        Integer num = parse_integer(s.substr(0, slash));
        Integer den = parse_integer(s.substr(slash + 1));
        if (den == 0)
            throw std::invalid_argument("zero denominator in '" + s + "'");
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        throw std::invalid_argument("bad rational '" + s + "'");
    }
}

// decimal literal like 0.125 -> 1/8 (exact)
inline Rational parse_decimal(const std::string& s)
{
    auto dot = s.find('.');
    if (dot == std::string::npos)
        return parse_rational(s);
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    Integer den = 1;
    for (size_t i = dot + 1; i < s.size(); ++i)
        den *= 10;
    if (digits.empty())
        throw std::invalid_argument("bad decimal '" + s + "'");
    return Rational(parse_integer(digits), den);
}

inline std::string to_string(const Rational& q)
{
    auto num = boost::multiprecision::numerator(q);
    auto den = boost::multiprecision::denominator(q);
    if (den == 1)
        return num.str();
    return num.str() + "/" + den.str();
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline int sign_of(int parity) { return (parity & 1) ? -1 : 1; }

} // namespace zz
