/*
   Copyright 2026 The bethe-xxx Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef BETHE_SCALAR_HPP
#define BETHE_SCALAR_HPP

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace bethe {

/// Exact rational scalar (GMP).
using Rational = mpq_class;
/// Floating scalar used for root solving.
using Complex = std::complex<double>;

/// Default comparison tolerance of the floating mode.
inline constexpr double kDefaultEps = 1e-10;

enum class Mode { exact, floating };

inline const char* to_string(Mode m) { return m == Mode::exact ? "exact" : "float"; }

inline Mode parse_mode(const std::string& s) {
    if (s == "exact") return Mode::exact;
    if (s == "float") return Mode::floating;
    throw std::invalid_argument("unknown arithmetic mode '" + s + "'");
}

/// Per-scalar behaviour shared by every template in the library. Exact mode
/// compares with ==, floating mode with an absolute tolerance.
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static constexpr bool exact = true;
    static constexpr Mode mode = Mode::exact;

    static Rational from_int(std::int64_t v) { return Rational(static_cast<long>(v)); }
    static Rational from_rational(const Rational& r) { return r; }
    static bool is_zero(const Rational& x, double = 0.0) { return sgn(x) == 0; }
    static double abs(const Rational& x) { return std::fabs(x.get_d()); }
    static Complex to_complex(const Rational& x) { return {x.get_d(), 0.0}; }
    static std::string to_string(const Rational& x) { return x.get_str(); }
};

template <>
struct ScalarTraits<Complex> {
    static constexpr bool exact = false;
    static constexpr Mode mode = Mode::floating;

    static Complex from_int(std::int64_t v) { return {static_cast<double>(v), 0.0}; }
    static Complex from_rational(const Rational& r) { return {r.get_d(), 0.0}; }
    static bool is_zero(const Complex& x, double eps = kDefaultEps) { return std::abs(x) <= eps; }
    static double abs(const Complex& x) { return std::abs(x); }
    static Complex to_complex(const Complex& x) { return x; }
    static std::string to_string(const Complex& x) {
        std::ostringstream os;
        os.precision(17);
        os << '[' << x.real() << ", " << x.imag() << ']';
        return os.str();
    }
};

template <class S>
inline S scalar(std::int64_t v) {
    return ScalarTraits<S>::from_int(v);
}

template <class S>
inline bool is_zero(const S& x, double eps = kDefaultEps) {
    return ScalarTraits<S>::is_zero(x, eps);
}

template <class S>
inline double magnitude(const S& x) {
    return ScalarTraits<S>::abs(x);
}

template <class S>
inline Complex to_complex(const S& x) {
    return ScalarTraits<S>::to_complex(x);
}

// Unevaluated gmpxx expressions are materialized as Rational first.
template <class T, class U>
inline bool is_zero(const __gmp_expr<T, U>& x, double eps = kDefaultEps) {
    return ScalarTraits<Rational>::is_zero(Rational(x), eps);
}
template <class T, class U>
inline double magnitude(const __gmp_expr<T, U>& x) {
    return ScalarTraits<Rational>::abs(Rational(x));
}

/// Parses "p/q", "p" or a decimal literal ("0.25") into an exact rational.
inline Rational parse_rational(const std::string& text) {
    auto dot = text.find('.');
    if (dot == std::string::npos) {
        Rational r;
        if (r.set_str(text, 10) != 0) throw std::invalid_argument("bad rational '" + text + "'");
        if (r.get_den() == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
        r.canonicalize();
        return r;
    }
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    std::string den = "1" + std::string(text.size() - dot - 1, '0');
    Rational r;
    if (r.set_str(digits + "/" + den, 10) != 0) throw std::invalid_argument("bad decimal '" + text + "'");
    r.canonicalize();
    return r;
}

/// Converts between scalar types; Rational -> Complex is the only lossy direction.
template <class T, class S>
inline T lift(const S& v) {
    if constexpr (std::is_same_v<T, S>)
        return v;
    else if constexpr (std::is_same_v<T, Complex> && std::is_same_v<S, Rational>)
        return Complex(v.get_d(), 0.0);
    else
        return T(v);
}

/// Underlying scalar of a coefficient type (identity for scalars; matrices
/// specialize it).
template <class T>
struct scalar_of {
    using type = T;
};
template <class T>
using scalar_of_t = typename scalar_of<T>::type;

inline std::int64_t binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace bethe

#endif  // BETHE_SCALAR_HPP
