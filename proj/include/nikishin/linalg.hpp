#pragma once

#include "nikishin/real.hpp"

#include <vector>

namespace nikishin {

using Matrix = std::vector<std::vector<real>>;

struct SolveResult {
    std::vector<real> x;
    real pivot_ratio;  // min |pivot| / max |pivot| after row equilibration
};

// Gaussian elimination with row equilibration and partial pivoting.
inline SolveResult solve_linear(Matrix A, std::vector<real> b) {
    size_t n = A.size();
    SolveResult out;
    out.pivot_ratio = 1;
    if (n == 0) return out;
    for (size_t i = 0; i < n; ++i) {
        real m = 0;
        for (const auto& v : A[i]) m = std::max(m, real(abs(v)));
        if (m == 0) {
            out.pivot_ratio = 0;
            out.x.assign(n, real(0));
            return out;
        }
        for (auto& v : A[i]) v /= m;
        b[i] /= m;
    }
    real pmin = -1, pmax = 0;
    for (size_t k = 0; k < n; ++k) {
        size_t piv = k;
        for (size_t i = k + 1; i < n; ++i)
            if (abs(A[i][k]) > abs(A[piv][k])) piv = i;
        std::swap(A[k], A[piv]);
        std::swap(b[k], b[piv]);
        real a = abs(A[k][k]);
        pmax = std::max(pmax, a);
        pmin = pmin < 0 ? a : std::min(pmin, a);
        if (a == 0) {
            out.pivot_ratio = 0;
            out.x.assign(n, real(0));
            return out;
        }
        for (size_t i = k + 1; i < n; ++i) {
            real f = A[i][k] / A[k][k];
            if (f == 0) continue;
            for (size_t j = k; j < n; ++j) A[i][j] -= f * A[k][j];
            b[i] -= f * b[k];
        }
    }
    out.x.assign(n, real(0));
    for (size_t k = n; k-- > 0;) {
        real s = b[k];
        for (size_t j = k + 1; j < n; ++j) s -= A[k][j] * out.x[j];
        out.x[k] = s / A[k][k];
    }
    out.pivot_ratio = pmin / pmax;
    return out;
}

}  // namespace nikishin
