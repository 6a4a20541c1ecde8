#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cctype>
#include <limits>
#include <string>
#include <type_traits>

namespace biruin {

// Binary floating point with a compile-time mantissa width in bits and
// plain value semantics (no expression templates).
template <unsigned Bits>
using BinFloat = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<Bits, boost::multiprecision::digit_base_2>,
    boost::multiprecision::et_off>;

using Real128 = BinFloat<128>;
using Real256 = BinFloat<256>;
using Real512 = BinFloat<512>;

template <class Real>
constexpr int mantissa_bits() {
    return std::numeric_limits<Real>::digits;
}

template <class Real>
Real machine_epsilon() {
    return std::numeric_limits<Real>::epsilon();
}

template <class Real>
double to_double(const Real& x) {
    return static_cast<double>(x);
}

// Correctly rounded conversion of decimal text to the working type.
// Model parameters travel as decimal strings so that a given config
// means the same number at every precision.
template <class Real>
Real real_from_string(const std::string& text) {
    if constexpr (std::is_same_v<Real, double>) {
        std::size_t pos = 0;
        double v = std::stod(text, &pos);
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos != text.size()) throw std::invalid_argument("trailing characters in number: " + text);
        return v;
    } else {
        return Real(text);
    }
}

}  // namespace biruin
