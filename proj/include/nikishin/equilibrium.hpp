#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nikishin {

struct GridMeasure {
    double lo = 0, hi = 1;
    std::vector<double> edges;    // M + 1
    std::vector<double> weights;  // M cell masses
    double mass = 1;

    size_t cells() const { return weights.size(); }
    double width(size_t i) const { return edges[i + 1] - edges[i]; }
    double mid(size_t i) const { return 0.5 * (edges[i] + edges[i + 1]); }
    double density(size_t i) const { return weights[i] / width(i); }
    double total() const {
        double s = 0;
        for (double w : weights) s += w;
        return s;
    }
    // mass of (-inf, x]
    double cdf(double x) const {
        if (x <= edges.front()) return 0;
        double s = 0;
        for (size_t i = 0; i < cells(); ++i) {
            if (x >= edges[i + 1]) {
                s += weights[i];
                continue;
            }
            if (x > edges[i]) s += weights[i] * (x - edges[i]) / width(i);
            break;
        }
        return s;
    }
};

// M cells on [lo, hi], denser toward the endpoints.
inline std::vector<double> chebyshev_edges(double lo, double hi, int M) {
    std::vector<double> e(M + 1);
    for (int i = 0; i <= M; ++i) e[i] = 0.5 * (lo + hi) - 0.5 * (hi - lo) * std::cos(M_PI * i / M);
    e[0] = lo;
    e[M] = hi;
    return e;
}

namespace detail {

inline long double G2(long double u) {
    if (u == 0) return 0;
    return u * u / 2 * std::log(std::fabs(u)) - 0.75L * u * u;
}

// average of log(1/|x - y|) over x in [c1,d1], y in [c2,d2]
inline double log_kernel_average(double c1, double d1, double c2, double d2) {
    double h1 = d1 - c1, h2 = d2 - c2;
    double gap = std::max(c2 - d1, c1 - d2);
    if (gap > 3 * std::max(h1, h2)) {
        static const double gx[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526};
        static const double gw[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538};
        double s = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                double x = 0.5 * (c1 + d1) + 0.5 * h1 * gx[i];
                double y = 0.5 * (c2 + d2) + 0.5 * h2 * gx[j];
                s += gw[i] * gw[j] * std::log(std::fabs(x - y));
            }
        return -s / 4;
    }
    long double v = G2((long double)d1 - c2) - G2((long double)c1 - c2) - G2((long double)d1 - d2) +
                    G2((long double)c1 - d2);
    return -static_cast<double>(v / ((long double)h1 * h2));
}

// int_c^d log|z - t| dt
inline double log_segment_integral(std::complex<double> z, double c, double d) {
    using C = std::complex<long double>;
    C zz(z.real(), z.imag());
    auto H = [](C u) -> C {
        if (std::abs(u) == 0) return C(0);
        return u * std::log(u) - u;
    };
    return static_cast<double>(std::real(H(zz - C(c)) - H(zz - C(d))));
}

inline Eigen::MatrixXd kernel_block(const GridMeasure& A, const GridMeasure& B) {
    Eigen::MatrixXd K(A.cells(), B.cells());
    for (size_t i = 0; i < A.cells(); ++i)
        for (size_t j = 0; j < B.cells(); ++j)
            K(i, j) = log_kernel_average(A.edges[i], A.edges[i + 1], B.edges[j], B.edges[j + 1]);
    return K;
}

inline Eigen::MatrixXd self_kernel(const GridMeasure& A) {
    size_t M = A.cells();
    Eigen::MatrixXd K(M, M);
    for (size_t i = 0; i < M; ++i)
        for (size_t j = i; j < M; ++j) {
            double v = log_kernel_average(A.edges[i], A.edges[i + 1], A.edges[j], A.edges[j + 1]);
            K(i, j) = v;
            K(j, i) = v;
        }
    return K;
}

// Euclidean projection onto {x >= 0, sum x = mass}.
inline void project_simplex(Eigen::Ref<Eigen::VectorXd> v, double mass) {
    std::vector<double> u(v.data(), v.data() + v.size());
    std::sort(u.begin(), u.end(), std::greater<double>());
    double css = 0, theta = 0;
    for (size_t i = 0; i < u.size(); ++i) {
        css += u[i];
        double t = (css - mass) / (i + 1);
        if (i + 1 == u.size() || u[i + 1] <= t) {
            theta = t;
            if (u[i] > t) break;
        }
    }
    // recompute robustly
    css = 0;
    size_t rho = 0;
    for (size_t i = 0; i < u.size(); ++i) {
        css += u[i];
        if (u[i] - (css - mass) / (i + 1) > 0) rho = i;
    }
    css = 0;
    for (size_t i = 0; i <= rho; ++i) css += u[i];
    theta = (css - mass) / (rho + 1);
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = std::max(v[i] - theta, 0.0);
}

}  // namespace detail

// U^nu(z) = int log(1/|z - t|) dnu(t)
inline double potential(const GridMeasure& m, std::complex<double> z) {
    double s = 0;
    for (size_t i = 0; i < m.cells(); ++i) {
        if (m.weights[i] == 0) continue;
        s -= m.weights[i] / m.width(i) * detail::log_segment_integral(z, m.edges[i], m.edges[i + 1]);
    }
    return s;
}

// Sum I(nu_k) - Sum I(nu_k, nu_{k+1})
inline double energy(const std::vector<GridMeasure>& v) {
    double J = 0;
    for (size_t k = 0; k < v.size(); ++k) {
        Eigen::Map<const Eigen::VectorXd> w(v[k].weights.data(), v[k].cells());
        J += w.dot(detail::self_kernel(v[k]) * w);
        if (k + 1 < v.size()) {
            if (std::max(v[k].lo, v[k + 1].lo) < std::min(v[k].hi, v[k + 1].hi))
                throw std::invalid_argument("energy: consecutive supports overlap");
            Eigen::Map<const Eigen::VectorXd> w1(v[k + 1].weights.data(), v[k + 1].cells());
            J -= w.dot(detail::kernel_block(v[k], v[k + 1]) * w1);
        }
    }
    return J;
}

struct EquilibriumOptions {
    int max_iterations = 100000;
    double rel_tol = 1e-12;  // relative energy decrease over `window` iterations
    int window = 50;
    bool polish = true;      // active-set linear solve after the descent
};

struct EquilibriumResult {
    std::vector<GridMeasure> measures;
    std::vector<double> constants;  // w_k
    std::vector<double> spreads;    // max - min of W_k on the numerical support
    std::vector<std::vector<double>> residual_profiles;  // W_k - w_k per cell
    double energy = 0;
    int iterations = 0;
    bool converged = false;
};

namespace detail {

struct QuadraticProblem {
    std::vector<GridMeasure> grids;
    std::vector<Eigen::MatrixXd> self, cross;  // cross[k] couples k and k+1
    std::vector<Eigen::VectorXd> field;        // linear term per component (cell averages), may be empty
    std::vector<double> masses;

    // gradient of x^T B x + 2 f^T x, with B the block tridiagonal form
    std::vector<Eigen::VectorXd> gradient(const std::vector<Eigen::VectorXd>& x) const {
        size_t p = x.size();
        std::vector<Eigen::VectorXd> g(p);
        for (size_t k = 0; k < p; ++k) {
            g[k] = 2 * (self[k] * x[k]);
            if (k + 1 < p) g[k] -= cross[k] * x[k + 1];
            if (k > 0) g[k] -= cross[k - 1].transpose() * x[k - 1];
            if (!field.empty()) g[k] += 2 * field[k];
        }
        return g;
    }
    double value(const std::vector<Eigen::VectorXd>& x, const std::vector<Eigen::VectorXd>& g) const {
        // for f = 0, J = x.g/2; with a linear term, J = x.(g/2) + f.x
        double J = 0;
        for (size_t k = 0; k < x.size(); ++k) {
            J += 0.5 * x[k].dot(g[k]);
            if (!field.empty()) J += field[k].dot(x[k]);
        }
        return J;
    }
};

inline double dot(const std::vector<Eigen::VectorXd>& a, const std::vector<Eigen::VectorXd>& b) {
    double s = 0;
    for (size_t k = 0; k < a.size(); ++k) s += a[k].dot(b[k]);
    return s;
}

// Solves B_SS x_S + f_S = lambda_k / 2 on the support with fixed masses; drops cells that go negative.
inline bool polish_active_set(const QuadraticProblem& P, std::vector<Eigen::VectorXd>& x) {
    size_t p = x.size();
    std::vector<std::vector<int>> S(p);
    for (size_t k = 0; k < p; ++k)
        for (Eigen::Index i = 0; i < x[k].size(); ++i)
            if (x[k][i] > 1e-14 * P.masses[k]) S[k].push_back(static_cast<int>(i));
    for (int round = 0; round < 20; ++round) {
        std::vector<int> off(p + 1, 0);
        for (size_t k = 0; k < p; ++k) off[k + 1] = off[k] + static_cast<int>(S[k].size());
        int n = off[p];
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + p, n + p);
        Eigen::VectorXd b = Eigen::VectorXd::Zero(n + p);
        for (size_t k = 0; k < p; ++k) {
            for (size_t a = 0; a < S[k].size(); ++a) {
                int r = off[k] + static_cast<int>(a);
                for (size_t c = 0; c < S[k].size(); ++c) A(r, off[k] + c) = 2 * P.self[k](S[k][a], S[k][c]);
                if (k + 1 < p)
                    for (size_t c = 0; c < S[k + 1].size(); ++c) A(r, off[k + 1] + c) = -P.cross[k](S[k][a], S[k + 1][c]);
                if (k > 0)
                    for (size_t c = 0; c < S[k - 1].size(); ++c) A(r, off[k - 1] + c) = -P.cross[k - 1](S[k - 1][c], S[k][a]);
                A(r, n + k) = -1;
                b[r] = P.field.empty() ? 0.0 : -2 * P.field[k][S[k][a]];
                A(n + k, r) = 1;
            }
            b[n + k] = P.masses[k];
        }
        Eigen::VectorXd sol = A.partialPivLu().solve(b);
        if (!sol.allFinite()) return false;
        bool changed = false;
        std::vector<Eigen::VectorXd> y(p);
        for (size_t k = 0; k < p; ++k) {
            y[k] = Eigen::VectorXd::Zero(x[k].size());
            std::vector<int> keep;
            for (size_t a = 0; a < S[k].size(); ++a) {
                double v = sol[off[k] + a];
                if (v < 0) {
                    changed = true;
                } else {
                    keep.push_back(S[k][a]);
                    y[k][S[k][a]] = v;
                }
            }
            S[k] = keep;
        }
        if (!changed) {
            // accept only if no cell outside the support wants mass (W >= w there)
            auto g = P.gradient(y);
            bool kkt = true;
            for (size_t k = 0; k < p && kkt; ++k) {
                double lam = sol[n + k];
                for (Eigen::Index i = 0; i < y[k].size(); ++i)
                    if (y[k][i] == 0 && g[k][i] < lam - 1e-9 * std::max(1.0, std::fabs(lam))) {
                        kkt = false;
                        break;
                    }
            }
            if (!kkt) return false;
            x = y;
            return true;
        }
    }
    return false;
}

inline EquilibriumResult minimize(QuadraticProblem& P, const EquilibriumOptions& opt) {
    size_t p = P.grids.size();
    std::vector<Eigen::VectorXd> x(p);
    for (size_t k = 0; k < p; ++k) x[k] = Eigen::VectorXd::Constant(P.grids[k].cells(), P.masses[k] / P.grids[k].cells());
    auto g = P.gradient(x);
    double J = P.value(x, g);
    std::vector<double> history{J};
    double t = 1.0;
    EquilibriumResult res;
    int it = 0;
    for (; it < opt.max_iterations; ++it) {
        std::vector<Eigen::VectorXd> d(p);
        for (size_t k = 0; k < p; ++k) {
            Eigen::VectorXd z = x[k] - t * g[k];
            project_simplex(z, P.masses[k]);
            d[k] = z - x[k];
        }
        double gd = dot(g, d);
        if (gd >= 0) {
            res.converged = true;
            break;
        }
        double Jref = *std::max_element(history.end() - std::min<size_t>(history.size(), 10), history.end());
        double lam = 1;
        std::vector<Eigen::VectorXd> xn(p), gn;
        double Jn = 0;
        for (int ls = 0; ls < 60; ++ls) {
            for (size_t k = 0; k < p; ++k) xn[k] = x[k] + lam * d[k];
            gn = P.gradient(xn);
            Jn = P.value(xn, gn);
            if (Jn <= Jref + 1e-4 * lam * gd) break;
            lam *= 0.5;
        }
        std::vector<Eigen::VectorXd> s(p), y(p);
        for (size_t k = 0; k < p; ++k) {
            s[k] = xn[k] - x[k];
            y[k] = gn[k] - g[k];
        }
        double sy = dot(s, y), ss = dot(s, s);
        t = sy > 0 ? std::clamp(ss / sy, 1e-12, 1e12) : 1e12;
        x = std::move(xn);
        g = std::move(gn);
        J = Jn;
        history.push_back(J);
        if (static_cast<int>(history.size()) > opt.window) {
            double old = history[history.size() - 1 - opt.window];
            if (std::fabs(old - J) <= opt.rel_tol * std::max(1.0, std::fabs(J))) {
                res.converged = true;
                break;
            }
        }
    }
    res.iterations = it;
    if (opt.polish) polish_active_set(P, x);
    g = P.gradient(x);
    res.energy = P.value(x, g);
    for (size_t k = 0; k < p; ++k) {
        GridMeasure m = P.grids[k];
        m.weights.assign(x[k].data(), x[k].data() + x[k].size());
        // W_k cell averages (plus field): half the gradient
        Eigen::VectorXd W = 0.5 * g[k];
        double num = 0, den = 0, lo = 1e300, hi = -1e300;
        for (size_t i = 0; i < m.cells(); ++i)
            if (m.weights[i] > m.mass / (2.0 * m.cells())) {
                num += m.weights[i] * W[i];
                den += m.weights[i];
                lo = std::min(lo, W[i]);
                hi = std::max(hi, W[i]);
            }
        double w = den > 0 ? num / den : 0;
        res.constants.push_back(w);
        res.spreads.push_back(den > 0 ? hi - lo : 0);
        std::vector<double> prof(m.cells());
        for (size_t i = 0; i < m.cells(); ++i) prof[i] = W[i] - w;
        res.residual_profiles.push_back(prof);
        res.measures.push_back(std::move(m));
    }
    if (!res.converged && it >= opt.max_iterations) res.converged = false;
    return res;
}

}  // namespace detail

struct RealInterval {
    double lo, hi;
};

inline EquilibriumResult solve_vector_equilibrium(const std::vector<RealInterval>& E, int M,
                                                  const EquilibriumOptions& opt = {}) {
    size_t p = E.size();
    if (p == 0) throw std::invalid_argument("solve_vector_equilibrium: no components");
    for (size_t k = 0; k + 1 < p; ++k)
        if (std::max(E[k].lo, E[k + 1].lo) < std::min(E[k].hi, E[k + 1].hi))
            throw std::invalid_argument("solve_vector_equilibrium: consecutive sets overlap");
    detail::QuadraticProblem P;
    for (size_t k = 0; k < p; ++k) {
        GridMeasure g;
        g.lo = E[k].lo;
        g.hi = E[k].hi;
        g.edges = chebyshev_edges(g.lo, g.hi, M);
        g.mass = 1.0 - static_cast<double>(k) / p;
        g.weights.assign(M, g.mass / M);
        P.grids.push_back(g);
        P.masses.push_back(g.mass);
    }
    for (size_t k = 0; k < p; ++k) P.self.push_back(detail::self_kernel(P.grids[k]));
    for (size_t k = 0; k + 1 < p; ++k) P.cross.push_back(detail::kernel_block(P.grids[k], P.grids[k + 1]));
    EquilibriumResult r = detail::minimize(P, opt);
    if (!r.converged) throw std::runtime_error("equilibrium solver did not converge within the iteration budget");
    return r;
}

// U^{mu_k} - U^{mu_{k-1}}/2 - U^{mu_{k+1}}/2, with the missing neighbours taken as zero.
inline double combined_potential(const EquilibriumResult& r, int k, std::complex<double> z) {
    int p = static_cast<int>(r.measures.size());
    double v = potential(r.measures[k], z);
    if (k > 0) v -= 0.5 * potential(r.measures[k - 1], z);
    if (k + 1 < p) v -= 0.5 * potential(r.measures[k + 1], z);
    return v;
}

// 2U^{mu_k} - U^{mu_{k-1}} - U^{mu_{k+1}} - 2 w_k; negative off the support.
inline double exterior_gap(const EquilibriumResult& r, int k, std::complex<double> z) {
    return 2 * (combined_potential(r, k, z) - r.constants[k]);
}

struct ScalarEquilibrium {
    GridMeasure measure;
    double constant = 0;
    double spread = 0;
    int iterations = 0;
};

// Probability (or given mass) minimizer of I(mu) + 2 int phi dmu, so that U^mu + phi = w on the support.
inline ScalarEquilibrium scalar_equilibrium_with_field(const RealInterval& E, const std::function<double(double)>& phi,
                                                       int M, double mass = 1.0, const EquilibriumOptions& opt = {}) {
    detail::QuadraticProblem P;
    GridMeasure g;
    g.lo = E.lo;
    g.hi = E.hi;
    g.edges = chebyshev_edges(E.lo, E.hi, M);
    g.mass = mass;
    g.weights.assign(M, mass / M);
    P.grids.push_back(g);
    P.masses.push_back(mass);
    P.self.push_back(detail::self_kernel(g));
    Eigen::VectorXd f(M);
    static const double gx[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
    static const double gw[3] = {5.0 / 9, 8.0 / 9, 5.0 / 9};
    for (int i = 0; i < M; ++i) {
        double s = 0;
        for (int q = 0; q < 3; ++q) s += gw[q] * phi(g.mid(i) + 0.5 * g.width(i) * gx[q]);
        f[i] = s / 2;
    }
    P.field.push_back(f);
    EquilibriumResult r = detail::minimize(P, opt);
    if (!r.converged) throw std::runtime_error("scalar equilibrium solver did not converge");
    ScalarEquilibrium out;
    out.measure = r.measures[0];
    out.constant = r.constants[0];
    out.spread = r.spreads[0];
    out.iterations = r.iterations;
    return out;
}

// Cholesky test of the energy Hessian restricted to zero-mass perturbations.
inline bool convexity_certificate(const std::vector<RealInterval>& E, int M) {
    size_t p = E.size();
    std::vector<GridMeasure> g(p);
    for (size_t k = 0; k < p; ++k) {
        g[k].lo = E[k].lo;
        g[k].hi = E[k].hi;
        g[k].edges = chebyshev_edges(E[k].lo, E[k].hi, M);
        g[k].weights.assign(M, 0.0);
    }
    int n = static_cast<int>(p) * (M - 1);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(p * M, p * M);
    for (size_t k = 0; k < p; ++k) {
        B.block(k * M, k * M, M, M) = detail::self_kernel(g[k]);
        if (k + 1 < p) {
            Eigen::MatrixXd C = detail::kernel_block(g[k], g[k + 1]);
            B.block(k * M, (k + 1) * M, M, M) = -0.5 * C;
            B.block((k + 1) * M, k * M, M, M) = -0.5 * C.transpose();
        }
    }
    Eigen::MatrixXd Pm = Eigen::MatrixXd::Zero(p * M, n);
    for (size_t k = 0; k < p; ++k)
        for (int i = 0; i < M - 1; ++i) {
            Pm(k * M + i, k * (M - 1) + i) = 1;
            Pm(k * M + M - 1, k * (M - 1) + i) = -1;
        }
    Eigen::MatrixXd R = Pm.transpose() * B * Pm;
    Eigen::LLT<Eigen::MatrixXd> llt(R);
    return llt.info() == Eigen::Success;
}

// Tridiagonal interaction matrix (1 on the diagonal, -1/2 beside it) is positive definite.
inline bool interaction_matrix_positive(int p) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(p, p);
    for (int k = 0; k + 1 < p; ++k) A(k, k + 1) = A(k + 1, k) = -0.5;
    return Eigen::LLT<Eigen::MatrixXd>(A).info() == Eigen::Success;
}

}  // namespace nikishin
