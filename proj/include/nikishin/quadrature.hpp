#pragma once

#include "nikishin/real.hpp"

#include <Eigen/Dense>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <string>
#include <vector>

namespace nikishin {

enum class DensityKind { power, jacobi, tabulated };

// Density of a generating measure in the segment variable tau.
//   power:     |tau|^gamma
//   jacobi:    (tau - a)^alpha (b - tau)^beta
//   tabulated: piecewise linear through (x_i, y_i)
struct DensitySpec {
    DensityKind kind = DensityKind::power;
    real gamma = 0;
    real alpha = 0, beta = 0;
    std::vector<real> x, y;

    static DensitySpec lebesgue() { return power(real(0)); }
    static DensitySpec power(const real& g) {
        DensitySpec d;
        d.kind = DensityKind::power;
        d.gamma = g;
        return d;
    }
    // |t|^g |dt| on the star pushed forward by t -> t^(p+1).
    static DensitySpec star_power(const real& g, int p) { return power((g - p) / (p + 1)); }
    static DensitySpec jacobi(const real& al, const real& be) {
        DensitySpec d;
        d.kind = DensityKind::jacobi;
        d.alpha = al;
        d.beta = be;
        return d;
    }
    static DensitySpec tabulated(std::vector<real> xs, std::vector<real> ys) {
        DensitySpec d;
        d.kind = DensityKind::tabulated;
        d.x = std::move(xs);
        d.y = std::move(ys);
        return d;
    }

    std::string kind_name() const {
        switch (kind) {
            case DensityKind::power: return "power";
            case DensityKind::jacobi: return "jacobi";
            default: return "tabulated";
        }
    }

    real operator()(const real& t, const real& a, const real& b) const {
        using boost::multiprecision::pow;
        switch (kind) {
            case DensityKind::power: return gamma == 0 ? real(1) : pow(abs(t), gamma);
            case DensityKind::jacobi: return pow(t - a, alpha) * pow(b - t, beta);
            default: {
                if (t <= x.front()) return y.front();
                if (t >= x.back()) return y.back();
                size_t i = std::upper_bound(x.begin(), x.end(), t) - x.begin() - 1;
                real s = (t - x[i]) / (x[i + 1] - x[i]);
                return y[i] * (1 - s) + y[i + 1] * s;
            }
        }
    }
};

struct DiscreteMeasure {
    real a = 0, b = 1;
    std::vector<real> nodes, weights;
    int declared_sign = 1;  // +1, -1, or 0 for mixed

    size_t size() const { return nodes.size(); }
    real mass() const {
        real s = 0;
        for (const auto& w : weights) s += w;
        return s;
    }
    real moment(int i) const {
        real s = 0;
        for (size_t q = 0; q < nodes.size(); ++q) s += weights[q] * boost::multiprecision::pow(nodes[q], i);
        return s;
    }
    int observed_sign() const {
        int s = 0;
        for (const auto& w : weights) {
            int t = sign_of(w);
            if (t == 0) continue;
            if (s == 0) s = t;
            else if (s != t) return 0;
        }
        return s;
    }
};

// Distance below which a point counts as sitting on a node.
inline real pole_guard(const DiscreteMeasure& m) { return real("1e-8") * (m.b - m.a); }

inline void check_pole(const DiscreteMeasure& m, const complex& z) {
    if (m.nodes.empty()) return;
    real g = pole_guard(m);
    // nodes are sorted; only the nearest ones matter
    auto it = std::lower_bound(m.nodes.begin(), m.nodes.end(), z.re);
    for (auto jt : {it, it == m.nodes.begin() ? it : it - 1}) {
        if (jt == m.nodes.end()) continue;
        if (abs(complex(z.re - *jt, z.im)) < g)
            throw pole_proximity_error("evaluation point within the pole guard of a quadrature node");
    }
}

inline complex cauchy_transform(const DiscreteMeasure& m, const complex& z) {
    check_pole(m, z);
    complex s(real(0));
    for (size_t i = 0; i < m.nodes.size(); ++i) s += complex(m.weights[i]) / complex(z.re - m.nodes[i], z.im);
    return s;
}

inline real cauchy_transform(const DiscreteMeasure& m, const real& x) {
    check_pole(m, complex(x));
    real s = 0;
    for (size_t i = 0; i < m.nodes.size(); ++i) s += m.weights[i] / (x - m.nodes[i]);
    return s;
}

// Three-term recurrence of a measure: monic p_{k+1} = (x - alpha_k) p_k - beta_k p_{k-1}, beta_0 = mass.
struct RecurrenceCoeffs {
    std::vector<real> alpha, beta;
};

// Weight (1 - x)^a (1 + x)^b on [-1, 1].
inline RecurrenceCoeffs jacobi_recurrence(int N, const real& a, const real& b) {
    using boost::multiprecision::pow;
    RecurrenceCoeffs r;
    r.alpha.resize(N);
    r.beta.resize(N);
    real ab = a + b;
    r.beta[0] = pow(real(2), ab + 1) * boost::math::tgamma(a + 1) * boost::math::tgamma(b + 1) /
                boost::math::tgamma(ab + 2);
    if (N > 0) r.alpha[0] = (b - a) / (ab + 2);
    for (int k = 1; k < N; ++k) {
        real t = 2 * k + ab;
        r.alpha[k] = (b * b - a * a) / (t * (t + 2));
        if (k == 1)
            r.beta[k] = 4 * (1 + a) * (1 + b) / ((2 + ab) * (2 + ab) * (3 + ab));
        else
            r.beta[k] = 4 * k * (k + a) * (k + b) * (k + ab) / (t * t * (t + 1) * (t - 1));
    }
    return r;
}

struct GaussRule {
    std::vector<real> nodes, weights;
};

// Gauss rule from recurrence coefficients: double-precision tridiagonal eigenvalues as
// starting points, Newton on the monic recurrence at working precision, Christoffel weights.
inline GaussRule gauss_from_recurrence(const RecurrenceCoeffs& rc, int N) {
    Eigen::VectorXd diag(N), off(std::max(N - 1, 0));
    for (int k = 0; k < N; ++k) diag[k] = rc.alpha[k].convert_to<double>();
    for (int k = 1; k < N; ++k) off[k - 1] = std::sqrt(rc.beta[k].convert_to<double>());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
    std::vector<real> sb(N);
    for (int k = 1; k < N; ++k) sb[k] = boost::multiprecision::sqrt(rc.beta[k]);
    GaussRule g;
    real span = 0;
    for (int k = 0; k < N; ++k) span = std::max(span, real(abs(rc.alpha[k]) + 2 * (k ? sb[k] : real(0))));
    for (int i = 0; i < N; ++i) {
        real x = es.eigenvalues()[i];
        for (int it = 0; it < 100; ++it) {
            real p0 = 0, p1 = 1, d0 = 0, d1 = 0;
            for (int k = 0; k < N; ++k) {
                real p2 = (x - rc.alpha[k]) * p1 - (k ? rc.beta[k] : real(0)) * p0;
                real d2 = p1 + (x - rc.alpha[k]) * d1 - (k ? rc.beta[k] : real(0)) * d0;
                p0 = p1; p1 = p2; d0 = d1; d1 = d2;
            }
            real step = p1 / d1;
            x -= step;
            if (abs(step) <= epsilon_value() * 4 * (abs(x) + span)) break;
        }
        // orthonormal sum for the weight
        real q0 = 0, q1 = 1, sum = 1;
        for (int k = 0; k + 1 < N; ++k) {
            real q2 = ((x - rc.alpha[k]) * q1 - (k ? sb[k] : real(0)) * q0) / sb[k + 1];
            sum += q2 * q2;
            q0 = q1;
            q1 = q2;
        }
        g.nodes.push_back(x);
        g.weights.push_back(rc.beta[0] / sum);
    }
    // keep nodes sorted
    std::vector<size_t> idx(N);
    for (int i = 0; i < N; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](size_t u, size_t v) { return g.nodes[u] < g.nodes[v]; });
    GaussRule s;
    for (auto i : idx) {
        s.nodes.push_back(g.nodes[i]);
        s.weights.push_back(g.weights[i]);
    }
    return s;
}

// Stieltjes procedure on a positive discrete measure.
inline RecurrenceCoeffs stieltjes(const std::vector<real>& x, const std::vector<real>& w, int N) {
    size_t M = x.size();
    RecurrenceCoeffs r;
    r.alpha.resize(N);
    r.beta.resize(N);
    std::vector<real> pm1(M, real(0)), p0(M, real(1)), p1(M);
    real norm_prev = 0;
    for (int k = 0; k < N; ++k) {
        real nrm = 0, xn = 0;
        for (size_t i = 0; i < M; ++i) {
            real t = w[i] * p0[i] * p0[i];
            nrm += t;
            xn += t * x[i];
        }
        r.alpha[k] = xn / nrm;
        r.beta[k] = k == 0 ? nrm : nrm / norm_prev;
        for (size_t i = 0; i < M; ++i)
            p1[i] = (x[i] - r.alpha[k]) * p0[i] - (k ? r.beta[k] : real(0)) * pm1[i];
        // rescale to avoid drift of magnitudes; ratios are what matter
        pm1.swap(p0);
        p0.swap(p1);
        norm_prev = nrm;
    }
    return r;
}

inline GaussRule gauss_legendre(int N, const real& a, const real& b) {
    GaussRule g = gauss_from_recurrence(jacobi_recurrence(N, real(0), real(0)), N);
    real half = (b - a) / 2, mid = (a + b) / 2;
    for (int i = 0; i < N; ++i) {
        g.nodes[i] = mid + half * g.nodes[i];
        g.weights[i] *= half;
    }
    return g;
}

// Gauss-type discretization of density on [a,b] with `order` nodes.
inline DiscreteMeasure segment_quadrature(const DensitySpec& dens, const real& a, const real& b, int order) {
    if (order < 1) throw validation_error("quadrature order must be >= 1");
    if (!(a < b)) throw validation_error("quadrature interval must have a < b");
    DiscreteMeasure m;
    m.a = a;
    m.b = b;
    m.declared_sign = 1;
    real half = (b - a) / 2, mid = (a + b) / 2;
    auto from_x_rule = [&](const RecurrenceCoeffs& rc_x, const real& ea, const real& eb, const real& scale) {
        GaussRule g = gauss_from_recurrence(rc_x, order);
        real fac = scale * boost::multiprecision::pow(half, ea + eb + 1);
        for (int i = 0; i < order; ++i) {
            m.nodes.push_back(mid + half * g.nodes[i]);
            m.weights.push_back(g.weights[i] * fac);
        }
    };
    switch (dens.kind) {
        case DensityKind::jacobi:
            // (tau - a)^alpha (b - tau)^beta = half^(alpha+beta) (1+x)^alpha (1-x)^beta
            from_x_rule(jacobi_recurrence(order, dens.beta, dens.alpha), dens.alpha, dens.beta, real(1));
            return m;
        case DensityKind::power:
            if (dens.gamma == 0) {
                from_x_rule(jacobi_recurrence(order, real(0), real(0)), real(0), real(0), real(1));
                return m;
            }
            if (a == 0) {
                from_x_rule(jacobi_recurrence(order, real(0), dens.gamma), dens.gamma, real(0), real(1));
                return m;
            }
            if (b == 0) {
                from_x_rule(jacobi_recurrence(order, dens.gamma, real(0)), real(0), dens.gamma, real(1));
                return m;
            }
            {
                // smooth on [a,b]: discretized Stieltjes over a fine Gauss-Legendre rule
                int Nb = 2 * order + 80;
                GaussRule base = gauss_legendre(Nb, a, b);
                for (int i = 0; i < Nb; ++i) base.weights[i] *= dens(base.nodes[i], a, b);
                GaussRule g = gauss_from_recurrence(stieltjes(base.nodes, base.weights, order), order);
                m.nodes = g.nodes;
                m.weights = g.weights;
                return m;
            }
        case DensityKind::tabulated: {
            const auto& xs = dens.x;
            if (xs.size() < 2 || xs.size() != dens.y.size())
                throw validation_error("tabulated density needs at least two (x, y) samples of equal length");
            int cells = static_cast<int>(xs.size()) - 1;
            int per = std::max(4, (order + cells - 1) / cells);
            for (int c = 0; c < cells; ++c) {
                real lo = std::max(xs[c], a), hi = std::min(xs[c + 1], b);
                if (!(lo < hi)) continue;
                GaussRule g = gauss_legendre(per, lo, hi);
                for (int i = 0; i < per; ++i) {
                    real w = g.weights[i] * dens(g.nodes[i], a, b);
                    if (w == 0) continue;
                    m.nodes.push_back(g.nodes[i]);
                    m.weights.push_back(w);
                }
            }
            if (m.nodes.empty()) throw validation_error("tabulated density vanishes on its interval");
            return m;
        }
    }
    throw validation_error("unsupported density kind");
}

}  // namespace nikishin
