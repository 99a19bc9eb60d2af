#pragma once

#include "nikishin/real.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace nikishin {

// Winding number of f along the closed polyline through `vertices`, with adaptive
// subdivision so each step changes the argument by less than pi/4.
inline double winding_number(const std::function<complex(const complex&)>& f, const std::vector<complex>& vertices,
                             int per_edge = 64) {
    double total = 0;
    std::function<double(const complex&, const complex&, const std::complex<double>&, const std::complex<double>&, int)>
        step = [&](const complex& z0, const complex& z1, const std::complex<double>& f0, const std::complex<double>& f1,
                   int depth) -> double {
        double d = std::arg(f1 / f0);
        if (std::abs(d) < 0.785 || depth > 16) return d;
        complex zm = (z0 + z1) / real(2);
        complex vm = f(zm);
        std::complex<double> fm(vm.re.convert_to<double>(), vm.im.convert_to<double>());
        if (std::abs(fm) == 0 || !std::isfinite(std::abs(fm))) {
            vm = vm / real(abs(vm));
            fm = {vm.re.convert_to<double>(), vm.im.convert_to<double>()};
        }
        return step(z0, zm, f0, fm, depth + 1) + step(zm, z1, fm, f1, depth + 1);
    };
    auto unit = [&](const complex& z) {
        complex v = f(z);
        real m = abs(v);
        if (m == 0) throw structural_error("contour passes through a zero");
        v = v / m;
        return std::complex<double>(v.re.convert_to<double>(), v.im.convert_to<double>());
    };
    size_t nv = vertices.size();
    for (size_t e = 0; e < nv; ++e) {
        const complex& A = vertices[e];
        const complex& B = vertices[(e + 1) % nv];
        complex prev = A;
        std::complex<double> fprev = unit(A);
        for (int i = 1; i <= per_edge; ++i) {
            complex z = A + (B - A) * real(real(i) / per_edge);
            std::complex<double> fz = unit(z);
            total += step(prev, z, fprev, fz, 0);
            prev = z;
            fprev = fz;
        }
    }
    return total / (2 * M_PI);
}

inline std::vector<complex> rectangle(const real& x0, const real& x1, const real& y0, const real& y1) {
    return {complex(x0, y0), complex(x1, y0), complex(x1, y1), complex(x0, y1)};
}

inline std::vector<complex> circle(const real& R, int points) {
    std::vector<complex> out;
    real pi = pi_value();
    for (int i = 0; i < points; ++i) out.push_back(polar(R, real(2 * pi * i / points)));
    return out;
}

}  // namespace nikishin
