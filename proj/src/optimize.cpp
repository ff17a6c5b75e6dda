#include "magsteer/optimize.hpp"

#include <cmath>
#include <stdexcept>

namespace magsteer {

std::pair<double, double> golden_section_max(const std::function<double(double)>& f,
                                             double lo, double hi, double x_tol) {
    if (!(hi > lo) || !(x_tol > 0.0)) {
        throw std::invalid_argument("golden_section_max: bad interval or tolerance");
    }
    constexpr double phi = 0.6180339887498949;  // (sqrt(5) - 1) / 2
    double a = lo, b = hi;
    double c = b - phi * (b - a);
    double d = a + phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > x_tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    const double x = (a + b) / 2.0;
    return {x, f(x)};
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double x_tol) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (std::signbit(flo) == std::signbit(fhi)) {
        throw std::invalid_argument("bisect_root: bracket does not straddle zero");
    }
    while (hi - lo > x_tol) {
        const double mid = (lo + hi) / 2.0;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (std::signbit(fm) == std::signbit(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return (lo + hi) / 2.0;
}

}  // namespace magsteer
