#pragma once

#include "nikishin/quadrature.hpp"

#include <string>
#include <vector>

namespace nikishin {

struct Interval {
    real a, b;
};

struct StarSystem {
    int p = 1;
    std::vector<Interval> intervals;
    std::vector<DensitySpec> densities;

    complex omega() const { return root_of_unity(1, p + 1); }
};

inline bool contains_zero(const Interval& I) { return I.a <= 0 && 0 <= I.b; }

// Returns the system unchanged if every structural constraint holds, otherwise throws
// validation_error naming the first violation.
inline StarSystem validate_system(const StarSystem& s) {
    if (s.p < 1) throw validation_error("p must be a positive integer");
    if (static_cast<int>(s.intervals.size()) != s.p)
        throw validation_error("expected " + std::to_string(s.p) + " intervals, got " + std::to_string(s.intervals.size()));
    if (static_cast<int>(s.densities.size()) != s.p)
        throw validation_error("expected " + std::to_string(s.p) + " densities, got " + std::to_string(s.densities.size()));
    for (int k = 0; k < s.p; ++k) {
        const auto& I = s.intervals[k];
        std::string tag = "interval " + std::to_string(k);
        if (!(I.a < I.b)) throw validation_error(tag + ": need a < b");
        if (k % 2 == 0 && I.a < 0) throw validation_error(tag + ": even index requires 0 <= a");
        if (k % 2 == 1 && I.b > 0) throw validation_error(tag + ": odd index requires b <= 0");
        const auto& d = s.densities[k];
        switch (d.kind) {
            case DensityKind::power:
                if (!(d.gamma > -1)) throw validation_error(tag + ": power exponent must exceed -1");
                break;
            case DensityKind::jacobi:
                if (!(d.alpha > -1) || !(d.beta > -1)) throw validation_error(tag + ": jacobi exponents must exceed -1");
                break;
            case DensityKind::tabulated: {
                if (d.x.size() < 2 || d.x.size() != d.y.size())
                    throw validation_error(tag + ": tabulated density needs matching x/y samples (>= 2)");
                bool positive = false;
                for (size_t i = 0; i < d.y.size(); ++i) {
                    if (d.y[i] < 0) throw validation_error(tag + ": tabulated density must be nonnegative");
                    if (d.y[i] > 0) positive = true;
                    if (i && !(d.x[i] > d.x[i - 1])) throw validation_error(tag + ": tabulated abscissae must increase");
                }
                if (!positive) throw validation_error(tag + ": tabulated density is identically zero");
                if (d.x.front() > I.a || d.x.back() < I.b)
                    throw validation_error(tag + ": tabulated samples must cover the interval");
                break;
            }
        }
    }
    for (int k = 0; k + 1 < s.p; ++k)
        if (contains_zero(s.intervals[k]) && contains_zero(s.intervals[k + 1]))
            throw validation_error("intervals " + std::to_string(k) + " and " + std::to_string(k + 1) +
                                   " both contain the origin");
    return s;
}

}  // namespace nikishin
