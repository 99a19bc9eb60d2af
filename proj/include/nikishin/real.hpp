#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace nikishin {

using real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>, boost::multiprecision::et_off>;

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct validation_error : error {
    using error::error;
};
struct pole_proximity_error : error {
    using error::error;
};
struct normality_error : error {
    int n;
    normality_error(int n_, const std::string& what) : error(what), n(n_) {}
};
struct structural_error : error {
    using error::error;
};
struct convergence_error : error {
    using error::error;
};
struct config_error : error {
    using error::error;
};

inline unsigned digits10_for_bits(unsigned bits) {
    return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120));
}

inline void set_precision_bits(unsigned bits) {
    real::default_precision(digits10_for_bits(bits));
}

inline unsigned precision_bits() {
    return static_cast<unsigned>(std::ceil(real::default_precision() / 0.30102999566398120));
}

// Sets the working precision for the lifetime of the object.
class precision_scope {
public:
    explicit precision_scope(unsigned bits) : saved_(real::default_precision()) {
        set_precision_bits(bits);
    }
    ~precision_scope() { real::default_precision(saved_); }
    precision_scope(const precision_scope&) = delete;
    precision_scope& operator=(const precision_scope&) = delete;

private:
    unsigned saved_;
};

inline real pi_value() { return boost::multiprecision::acos(real(-1)); }

inline real epsilon_value() {
    return boost::multiprecision::pow(real(2), -static_cast<int>(precision_bits()));
}

inline real parse_real(const std::string& s) {
    try {
        return real(s);
    } catch (const std::exception&) {
        throw config_error("not a number: '" + s + "'");
    }
}

inline std::string to_string(const real& x, int digits = 40) {
    std::ostringstream os;
    os << std::setprecision(digits) << std::scientific << x;
    return os.str();
}

inline int sign_of(const real& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

// Complex arithmetic over an arbitrary real field.
template <class T>
struct basic_complex {
    T re{0}, im{0};

    basic_complex() = default;
    basic_complex(const T& r) : re(r), im(0) {}
    basic_complex(const T& r, const T& i) : re(r), im(i) {}
    basic_complex(int r) : re(r), im(0) {}
    basic_complex(double r) : re(r), im(0) {}

    basic_complex& operator+=(const basic_complex& o) { re += o.re; im += o.im; return *this; }
    basic_complex& operator-=(const basic_complex& o) { re -= o.re; im -= o.im; return *this; }
    basic_complex& operator*=(const basic_complex& o) {
        T r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = r;
        return *this;
    }
    basic_complex& operator/=(const basic_complex& o) {
        T den = o.re * o.re + o.im * o.im;
        T r = (re * o.re + im * o.im) / den;
        im = (im * o.re - re * o.im) / den;
        re = r;
        return *this;
    }
    basic_complex& operator*=(const T& s) { re *= s; im *= s; return *this; }
    basic_complex& operator/=(const T& s) { re /= s; im /= s; return *this; }
};

template <class T> basic_complex<T> operator+(basic_complex<T> a, const basic_complex<T>& b) { return a += b; }
template <class T> basic_complex<T> operator-(basic_complex<T> a, const basic_complex<T>& b) { return a -= b; }
template <class T> basic_complex<T> operator*(basic_complex<T> a, const basic_complex<T>& b) { return a *= b; }
template <class T> basic_complex<T> operator/(basic_complex<T> a, const basic_complex<T>& b) { return a /= b; }
template <class T> basic_complex<T> operator*(basic_complex<T> a, const T& s) { return a *= s; }
template <class T> basic_complex<T> operator*(const T& s, basic_complex<T> a) { return a *= s; }
template <class T> basic_complex<T> operator/(basic_complex<T> a, const T& s) { return a /= s; }
template <class T> basic_complex<T> operator-(const basic_complex<T>& a) { return {-a.re, -a.im}; }

template <class T> T norm2(const basic_complex<T>& a) { return a.re * a.re + a.im * a.im; }
template <class T> T abs(const basic_complex<T>& a) {
    using std::sqrt;
    using boost::multiprecision::sqrt;
    return sqrt(norm2(a));
}
template <class T> T arg(const basic_complex<T>& a) {
    using std::atan2;
    using boost::multiprecision::atan2;
    return atan2(a.im, a.re);
}
template <class T> basic_complex<T> conj(const basic_complex<T>& a) { return {a.re, -a.im}; }

template <class T> basic_complex<T> polar(const T& r, const T& theta) {
    using std::cos;
    using std::sin;
    using boost::multiprecision::cos;
    using boost::multiprecision::sin;
    return {r * cos(theta), r * sin(theta)};
}

template <class T> basic_complex<T> pow_int(basic_complex<T> z, long e) {
    if (e < 0) return basic_complex<T>(T(1)) / pow_int(z, -e);
    basic_complex<T> r(T(1));
    while (e) {
        if (e & 1) r *= z;
        z *= z;
        e >>= 1;
    }
    return r;
}

// Principal logarithm.
template <class T> basic_complex<T> log(const basic_complex<T>& z) {
    using std::log;
    using boost::multiprecision::log;
    return {log(abs(z)), arg(z)};
}

using complex = basic_complex<real>;

inline std::complex<double> to_std(const complex& z) {
    return {z.re.convert_to<double>(), z.im.convert_to<double>()};
}
inline complex from_std(std::complex<double> z) { return {real(z.real()), real(z.imag())}; }

// log|z| without overflow concerns (mpfr exponent range is huge).
inline real log_abs(const complex& z) { return boost::multiprecision::log(abs(z)); }

// exp(2 pi i m / q)
inline complex root_of_unity(int m, int q) {
    real th = 2 * pi_value() * m / q;
    return polar(real(1), th);
}

}  // namespace nikishin
