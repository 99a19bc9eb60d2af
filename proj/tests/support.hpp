#pragma once
// Shared fixtures and reference computations for the test programs. The reference
// routines use their own quadrature and dense solves, not the library's cached paths.

#include "nikishin/nikishin.hpp"

#include <functional>
#include <vector>

namespace testsupport {

using namespace nikishin;

// p = 2, |t|^2 on both star sets, segments [0,1] and [-2,-1]
inline StarSystem two_star_system() {
    StarSystem s;
    s.p = 2;
    s.intervals = {{real(0), real(1)}, {real(-2), real(-1)}};
    s.densities = {DensitySpec::star_power(real(2), 2), DensitySpec::star_power(real(2), 2)};
    return s;
}

// p = 1 with tau^(-1/2) on [0,1]: the star measure is dt on [-1,1]
inline StarSystem legendre_system() {
    StarSystem s;
    s.p = 1;
    s.intervals = {{real(0), real(1)}};
    s.densities = {DensitySpec::jacobi(real("-0.5"), real(0))};
    return s;
}

// p = 3 with polynomial weights, for the nested-quadrature comparison
inline StarSystem three_level_system() {
    StarSystem s;
    s.p = 3;
    s.intervals = {{real(0), real(1)}, {real(-2), real(-1)}, {real("1.5"), real(3)}};
    s.densities = {DensitySpec::lebesgue(), DensitySpec::jacobi(real(1), real(0)), DensitySpec::jacobi(real(0), real(2))};
    return s;
}

struct Rule {
    std::vector<real> x, w;
};

// Gauss-Legendre on [a,b] by Newton iteration on P_N.
inline Rule legendre_rule(int N, const real& a, const real& b) {
    Rule r;
    real pi = boost::math::constants::pi<real>();
    real tol = epsilon_value() * 4;
    for (int i = 0; i < N; ++i) {
        real x = cos(pi * (real(i) + real("0.75")) / (real(N) + real("0.5")));
        real dp = 0;
        for (int it = 0; it < 200; ++it) {
            real p0 = 1, p1 = x;
            for (int k = 2; k <= N; ++k) {
                real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = N * (x * p1 - p0) / (x * x - 1);
            real dx = p1 / dp;
            x -= dx;
            if (abs(dx) < tol) break;
        }
        r.x.push_back((a + b) / 2 + (b - a) / 2 * x);
        r.w.push_back((b - a) / ((1 - x * x) * dp * dp));
    }
    return r;
}

// Density of sigma*_k evaluated directly for the smooth test systems above.
inline real density_at(const DensitySpec& d, const real& t, const real& a, const real& b) {
    switch (d.kind) {
        case DensityKind::power:
            return d.gamma == 0 ? real(1) : real(pow(abs(t), d.gamma));
        case DensityKind::jacobi:
            return pow(t - a, d.alpha) * pow(b - t, d.beta);
        default:
            throw std::logic_error("density_at: unsupported kind");
    }
}

// muhat_{k,j}(z) by nested Gauss-Legendre: dmu_{k,j} = tau muhat_{k+1,j}(tau) dsigma*_k,
// folded from level j up to level k on N-point rules.
inline complex nested_cauchy(const StarSystem& s, int k, int j, const complex& z, int N) {
    std::vector<Rule> rules(j + 1);
    for (int l = k; l <= j; ++l) {
        const auto& I = s.intervals[l];
        rules[l] = legendre_rule(N, I.a, I.b);
        for (size_t i = 0; i < rules[l].x.size(); ++i) rules[l].w[i] *= density_at(s.densities[l], rules[l].x[i], I.a, I.b);
    }
    // w holds the weights of mu_{l,j} on the level-l rule
    std::vector<real> w = rules[j].w;
    for (int l = j - 1; l >= k; --l) {
        std::vector<real> next(rules[l].x.size());
        for (size_t i = 0; i < next.size(); ++i) {
            real inner = 0;
            for (size_t q = 0; q < w.size(); ++q) inner += w[q] / (rules[l].x[i] - rules[l + 1].x[q]);
            next[i] = rules[l].w[i] * rules[l].x[i] * inner;
        }
        w = std::move(next);
    }
    complex sum(real(0));
    for (size_t i = 0; i < w.size(); ++i) sum += complex(w[i]) / (z - complex(rules[k].x[i]));
    return sum;
}

// Q_n from the unreduced conditions int Q_n t^v ds_j = 0, v < n_j, solved densely
// in the monomial basis. Returns ascending coefficients, leading one included.
inline std::vector<real> full_system_Qn(const MuHierarchy& H, int n) {
    int p = H.p();
    auto nj = hp_multiindex(n, p);
    Matrix A;
    std::vector<real> rhs;
    for (int j = 0; j < p; ++j)
        for (long v = 0; v < nj[j]; ++v) {
            std::vector<real> row(n);
            for (int i = 0; i < n; ++i) row[i] = H.star_moment(j, static_cast<int>(i + v));
            A.push_back(row);
            rhs.push_back(-H.star_moment(j, static_cast<int>(n + v)));
        }
    // columns whose moments all vanish are fixed at zero by the rank structure; drop them
    std::vector<int> live;
    for (int i = 0; i < n; ++i) {
        bool any = false;
        for (const auto& row : A)
            if (row[i] != 0) any = true;
        if (any) live.push_back(i);
    }
    std::vector<int> rows;
    for (size_t r = 0; r < A.size(); ++r) {
        bool any = rhs[r] != 0;
        for (int i : live)
            if (A[r][i] != 0) any = true;
        if (any) rows.push_back(static_cast<int>(r));
    }
    if (rows.size() != live.size()) throw std::runtime_error("full system: rank structure mismatch");
    Matrix B;
    std::vector<real> c;
    for (int r : rows) {
        std::vector<real> row;
        for (int i : live) row.push_back(A[r][i]);
        B.push_back(row);
        c.push_back(rhs[r]);
    }
    std::vector<real> out(n + 1, real(0));
    out[n] = 1;
    if (!B.empty()) {
        auto sol = solve_linear(B, c);
        for (size_t i = 0; i < live.size(); ++i) out[live[i]] = sol.x[i];
    }
    return out;
}

}  // namespace testsupport
