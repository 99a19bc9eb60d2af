#pragma once

#include "nikishin/real.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <functional>
#include <vector>

namespace nikishin {

// Polynomial with real coefficients, ascending powers: c[0] + c[1] x + ...
struct Poly {
    std::vector<real> c;

    Poly() = default;
    explicit Poly(std::vector<real> coeffs) : c(std::move(coeffs)) {}

    static Poly monomial(int deg) {
        Poly q;
        q.c.assign(deg + 1, real(0));
        q.c[deg] = 1;
        return q;
    }
    static Poly from_roots(const std::vector<real>& roots) {
        Poly q;
        q.c = {real(1)};
        for (const real& r : roots) {
            std::vector<real> nc(q.c.size() + 1, real(0));
            for (size_t i = 0; i < q.c.size(); ++i) {
                nc[i + 1] += q.c[i];
                nc[i] -= r * q.c[i];
            }
            q.c = std::move(nc);
        }
        return q;
    }

    int degree() const { return static_cast<int>(c.size()) - 1; }
    const real& lead() const { return c.back(); }
    bool is_monic() const { return !c.empty() && c.back() == 1; }

    real operator()(const real& x) const {
        real s = 0;
        for (size_t i = c.size(); i-- > 0;) s = s * x + c[i];
        return s;
    }
    complex operator()(const complex& z) const {
        complex s(real(0));
        for (size_t i = c.size(); i-- > 0;) {
            s *= z;
            s.re += c[i];
        }
        return s;
    }

    // z * this
    Poly shift_up() const {
        Poly q;
        q.c.assign(c.size() + 1, real(0));
        for (size_t i = 0; i < c.size(); ++i) q.c[i + 1] = c[i];
        return q;
    }
};

inline Poly operator-(const Poly& a, const Poly& b) {
    Poly r;
    r.c.assign(std::max(a.c.size(), b.c.size()), real(0));
    for (size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r.c[i] -= b.c[i];
    return r;
}
inline Poly operator+(const Poly& a, const Poly& b) {
    Poly r;
    r.c.assign(std::max(a.c.size(), b.c.size()), real(0));
    for (size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
    return r;
}
inline Poly operator*(const real& s, const Poly& a) {
    Poly r = a;
    for (auto& x : r.c) x *= s;
    return r;
}

// Evaluate prod (x - r_i).
inline real eval_from_roots(const std::vector<real>& roots, const real& x) {
    real s = 1;
    for (const real& r : roots) s *= (x - r);
    return s;
}
inline complex eval_from_roots(const std::vector<real>& roots, const complex& z) {
    complex s(real(1));
    for (const real& r : roots) s *= complex(z.re - r, z.im);
    return s;
}

// Chebyshev series on [a,b]: sum c_i T_i(x), x = (2t - a - b)/(b - a).
struct ChebSeries {
    real a, b;
    std::vector<real> c;

    real to_x(const real& t) const { return (2 * t - a - b) / (b - a); }

    real operator()(const real& t) const {
        real x = to_x(t);
        real b1 = 0, b2 = 0;
        for (size_t i = c.size(); i-- > 1;) {
            real b0 = 2 * x * b1 - b2 + c[i];
            b2 = b1;
            b1 = b0;
        }
        return x * b1 - b2 + c[0];
    }

    complex operator()(const complex& t) const {
        complex x = complex(2 * t.re - a - b, 2 * t.im) / (b - a);
        complex b1(real(0)), b2(real(0));
        for (size_t i = c.size(); i-- > 1;) {
            complex b0 = complex(real(2)) * x * b1 - b2 + complex(c[i]);
            b2 = b1;
            b1 = b0;
        }
        return x * b1 - b2 + complex(c[0]);
    }

    // value and derivative with respect to t
    std::pair<real, real> value_and_derivative(const real& t) const {
        real x = to_x(t);
        real T0 = 1, T1 = x, D0 = 0, D1 = 1;
        real val = c[0], der = 0;
        if (c.size() > 1) {
            val += c[1] * T1;
            der += c[1] * D1;
        }
        for (size_t i = 2; i < c.size(); ++i) {
            real T2 = 2 * x * T1 - T0;
            real D2 = 2 * T1 + 2 * x * D1 - D0;
            val += c[i] * T2;
            der += c[i] * D2;
            T0 = T1; T1 = T2; D0 = D1; D1 = D2;
        }
        return {val, der * 2 / (b - a)};
    }

    // Monomial coefficients in t.
    Poly to_monomial() const {
        // x = s1 t + s0
        real s1 = real(2) / (b - a), s0 = -(a + b) / (b - a);
        std::vector<real> tm1{real(1)}, t0{s0, s1};
        Poly out;
        out.c.assign(c.size(), real(0));
        out.c[0] += c[0];
        if (c.size() > 1)
            for (size_t j = 0; j < 2; ++j) out.c[j] += c[1] * t0[j];
        for (size_t i = 2; i < c.size(); ++i) {
            std::vector<real> t1(i + 1, real(0));
            for (size_t j = 0; j < t0.size(); ++j) {
                t1[j] += 2 * s0 * t0[j];
                t1[j + 1] += 2 * s1 * t0[j];
            }
            for (size_t j = 0; j < tm1.size(); ++j) t1[j] -= tm1[j];
            for (size_t j = 0; j <= i; ++j) out.c[j] += c[i] * t1[j];
            tm1 = std::move(t0);
            t0 = std::move(t1);
        }
        return out;
    }
};

// Illinois-modified regula falsi on a sign-changing bracket.
inline real refine_bracket(const std::function<real(const real&)>& f, real lo, real hi, real flo, real fhi) {
    real tol = epsilon_value() * 16 * (abs(lo) + abs(hi) + abs(hi - lo));
    int side = 0;
    for (int it = 0; it < 2000; ++it) {
        if (hi - lo <= tol) break;
        real m = (lo * fhi - hi * flo) / (fhi - flo);
        if (!(m > lo && m < hi)) m = (lo + hi) / 2;
        real fm = f(m);
        if (fm == 0) return m;
        if (sign_of(fm) == sign_of(flo)) {
            lo = m;
            flo = fm;
            if (side == -1) fhi /= 2;
            side = -1;
        } else {
            hi = m;
            fhi = fm;
            if (side == 1) flo /= 2;
            side = 1;
        }
    }
    return abs(flo) < abs(fhi) ? lo : hi;
}

// Sign changes of f on a Chebyshev-spaced grid of `points` nodes in (a,b), each refined.
inline std::vector<real> scan_roots(const std::function<real(const real&)>& f, const real& a, const real& b,
                                    int points) {
    std::vector<real> xs(points), fs(points);
    real pi = pi_value();
    for (int i = 0; i < points; ++i) {
        xs[i] = (a + b) / 2 - (b - a) / 2 * boost::multiprecision::cos(pi * (i + real(0.5)) / points);
        fs[i] = f(xs[i]);
    }
    std::vector<real> roots;
    for (int i = 0; i + 1 < points; ++i) {
        if (fs[i] == 0) {
            roots.push_back(xs[i]);
            continue;
        }
        if (sign_of(fs[i]) * sign_of(fs[i + 1]) < 0) roots.push_back(refine_bracket(f, xs[i], xs[i + 1], fs[i], fs[i + 1]));
    }
    if (points > 0 && fs[points - 1] == 0) roots.push_back(xs[points - 1]);
    return roots;
}

// Real roots of a Chebyshev series expected to have all its zeros simple inside (a,b).
// Colleague-matrix eigenvalues in double, Newton polish at working precision, then a
// sign-alternation certificate; falls back to a bracketing scan if the certificate fails.
inline std::vector<real> cheb_real_roots(const ChebSeries& s) {
    int d = static_cast<int>(s.c.size()) - 1;
    if (d <= 0) return {};
    auto f = [&](const real& t) { return s(t); };
    std::vector<real> roots;
    if (d == 1) {
        real x = -s.c[0] / s.c[1];
        roots.push_back((s.a + s.b) / 2 + (s.b - s.a) / 2 * x);
    } else {
        Eigen::MatrixXd C = Eigen::MatrixXd::Zero(d, d);
        C(0, 1) = 1;
        for (int i = 1; i < d - 1; ++i) {
            C(i, i - 1) = 0.5;
            C(i, i + 1) = 0.5;
        }
        C(d - 1, d - 2) = 0.5;
        double cd = s.c[d].convert_to<double>();
        for (int j = 0; j < d; ++j) C(d - 1, j) -= s.c[j].convert_to<double>() / (2 * cd);
        Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
        for (int i = 0; i < d; ++i) {
            double x = es.eigenvalues()[i].real();
            x = std::clamp(x, -1.0, 1.0);
            real t = (s.a + s.b) / 2 + (s.b - s.a) / 2 * real(x);
            for (int it = 0; it < 100; ++it) {
                auto [v, dv] = s.value_and_derivative(t);
                if (dv == 0) break;
                real step = v / dv;
                t -= step;
                if (abs(step) <= epsilon_value() * 4 * (abs(t) + abs(s.b - s.a))) break;
            }
            roots.push_back(t);
        }
        std::sort(roots.begin(), roots.end());
    }
    bool ok = static_cast<int>(roots.size()) == d;
    for (int i = 0; ok && i < d; ++i)
        if (!(roots[i] > s.a && roots[i] < s.b)) ok = false;
    if (ok) {
        std::vector<real> probe{s.a};
        for (int i = 0; i + 1 < d; ++i) probe.push_back((roots[i] + roots[i + 1]) / 2);
        probe.push_back(s.b);
        for (size_t i = 0; ok && i + 1 < probe.size(); ++i)
            if (sign_of(f(probe[i])) * sign_of(f(probe[i + 1])) >= 0) ok = false;
    }
    if (ok) return roots;
    for (int pts = 16 * d + 16; pts <= 1024 * (d + 1); pts *= 4) {
        roots = scan_roots(f, s.a, s.b, pts);
        if (static_cast<int>(roots.size()) == d) return roots;
    }
    return roots;
}

}  // namespace nikishin
