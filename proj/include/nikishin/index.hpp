#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace nikishin {

// Floor and ceiling division for any sign of the numerator.
inline long floor_div(long a, long b) {
    long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}
inline long ceil_div(long a, long b) { return -floor_div(-a, b); }
inline long mod_pos(long a, long b) { return a - b * floor_div(a, b); }

struct IndexData {
    long n = 0, p = 1;
    long ell = 0;     // n mod (p+1)
    long r = 0;       // n mod p
    long d = 0;       // (n - ell)/(p+1)
    long alpha = 0;   // floor((n + p ell - 1)/(p(p+1)))
    long beta = 0;    // remainder of the same division
    long v = 0;       // floor(beta/(p+1))
    long lambda = 0;  // floor(n/(p(p+1)))
    long q = 0;       // floor(n/(p+1))
};

inline IndexData index_data(long n, long p) {
    if (p < 1 || n < 0) throw std::invalid_argument("index_data: need p >= 1, n >= 0");
    IndexData x;
    x.n = n;
    x.p = p;
    x.ell = n % (p + 1);
    x.r = n % p;
    x.d = (n - x.ell) / (p + 1);
    long num = n + p * x.ell - 1;
    x.alpha = floor_div(num, p * (p + 1));
    x.beta = num - x.alpha * p * (p + 1);
    x.v = x.beta / (p + 1);
    x.lambda = n / (p * (p + 1));
    x.q = n / (p + 1);
    return x;
}

// Range [lo, hi] of exponents s in the reduced conditions attached to measure j.
struct SRange {
    long lo, hi;
    long count() const { return hi >= lo ? hi - lo + 1 : 0; }
};

inline SRange condition_range(long n, long j, long p) {
    long ell = n % (p + 1);
    return {ceil_div(ell - j, p + 1), floor_div(n + p * ell - 1 - j * (p + 1), p * (p + 1))};
}

inline long z_bruteforce(long n, long k, long p) {
    if (k < 0 || k > p) throw std::invalid_argument("z_bruteforce: k out of range");
    if (k == p) return 0;
    long total = 0;
    for (long j = k; j <= p - 1; ++j) {
        SRange s = condition_range(n, j, p);
        for (long t = s.lo; t <= s.hi; ++t) ++total;
    }
    return total;
}

inline long z_closed_alpha(long n, long k, long p) {
    if (k < 0 || k > p) throw std::invalid_argument("z_closed_alpha: k out of range");
    if (k == p) return 0;
    IndexData x = index_data(n, p);
    long D = ceil_div(n - x.ell, p + 1);
    long l = x.ell, v = x.v, a = x.alpha;
    if (k <= l && k <= v) return D - k * a;
    if (l < k && v < k) return D - k * a + l - v - 1;
    if (l < k && k <= v) return D - k * (a + 1) + l;
    return D - k * (a - 1) - v - 1;  // v < k <= l
}

inline long z_closed_lambda(long n, long k, long p) {
    if (k < 0 || k > p) throw std::invalid_argument("z_closed_lambda: k out of range");
    if (k == p) return 0;
    IndexData x = index_data(n, p);
    long F = x.q, lam = x.lambda, l = x.ell, r = x.r;
    if (k < l && l <= r) return F - k * lam;
    if (l <= k && k < r) return F - k * (lam + 1) + l;
    if (l <= r && r <= k) return F - k * lam + l - r;
    if (k < r && r < l) return F - k * (lam + 1);
    if (r <= k && k < l) return F - k * lam - r;
    return F - k * (lam + 1) + l - r;  // r < l <= k
}

// Z(n,k) with Z(n,-1) = 0 and Z(n,p) = 0.
inline long z_count(long n, long k, long p) {
    if (k < 0 || k >= p) return 0;
    return z_closed_alpha(n, k, p);
}

// Case selection for Z(n,j) - Z(n,j+1) in terms of lambda.
inline long z_step_predicted(long n, long j, long p) {
    IndexData x = index_data(n, p);
    long l = x.ell, r = x.r;
    bool plus = (l <= j && j < r) || (j < r && r < l) || (r < l && l <= j);
    return x.lambda + (plus ? 1 : 0);
}

inline long decay_order(long n, long k, long p) {
    if (k < 1 || k > p) throw std::invalid_argument("decay_order: need 1 <= k <= p");
    long ell = n % (p + 1);
    return z_count(n, k - 1, p) - z_count(n, k, p) + (k <= ell ? 1 : 0);
}

inline std::vector<long> hp_multiindex(long n, long p) {
    std::vector<long> out(p);
    for (long j = 0; j < p; ++j) out[j] = floor_div(n - j - 1, p) + 1;
    return out;
}

}  // namespace nikishin
