#include "convapprox/spline.hpp"

#include <cmath>

#include "convapprox/errors.hpp"
#include "convapprox/sequences.hpp"

namespace convapprox {

KnotGrid knots(int n) {
    if (n < 1) throw ParameterError("knots: N must be >= 1");
    KnotGrid grid;
    grid.n = n;
    grid.t.resize(static_cast<size_t>(2 * n + 3));
    for (int j = 1; j <= 2 * n + 3; ++j)
        grid.t[static_cast<size_t>(j - 1)] = -1.0 + static_cast<double>(j - 2) / n;
    return grid;
}

double hat(int i, const KnotGrid& grid, double u) {
    if (i < 2 || i > 2 * grid.n + 2) throw ParameterError("hat: index out of range");
    const double n = grid.n;
    return n * (relu(u - grid.at(i - 1)) - 2.0 * relu(u - grid.at(i)) + relu(u - grid.at(i + 1)));
}

std::vector<double> lcal_n(const std::vector<double>& zeta) {
    const int len = static_cast<int>(zeta.size());
    if (len < 3 || len % 2 == 0) throw ParameterError("lcal_n: input length must be odd and >= 3");
    const int n = (len - 1) / 2;
    // zeta is stored 0-based but indexed zeta_2..zeta_{2N+2} below.
    auto z = [&](int j) { return zeta[static_cast<size_t>(j - 2)]; };

    std::vector<double> out(static_cast<size_t>(2 * n + 3));
    out[0] = z(2);
    out[1] = z(3) - 2.0 * z(2);
    for (int i = 3; i <= 2 * n + 1; ++i)
        out[static_cast<size_t>(i - 1)] = z(i - 1) - 2.0 * z(i) + z(i + 1);
    out[static_cast<size_t>(2 * n + 1)] = z(2 * n + 1) - 2.0 * z(2 * n + 2);
    out[static_cast<size_t>(2 * n + 2)] = z(2 * n + 2);
    return out;
}

double QuasiInterpolant::operator()(double u) const {
    double acc = 0.0;
    for (int j = 1; j <= grid.size(); ++j)
        acc += coeffs[static_cast<size_t>(j - 1)] * relu(u - grid.at(j));
    return grid.n * acc;
}

QuasiInterpolant quasi_interpolate(const std::function<double(double)>& g, int n) {
    const KnotGrid grid = knots(n);
    std::vector<double> samples(static_cast<size_t>(2 * n + 1));
    for (int k = 2; k <= 2 * n + 2; ++k) samples[static_cast<size_t>(k - 2)] = g(grid.at(k));
    return QuasiInterpolant{grid, lcal_n(samples)};
}

std::vector<double> v_ell(int ell, int n) {
    if (ell < 1) throw ParameterError("v_ell: exponent must be >= 1");
    const KnotGrid grid = knots(n);
    std::vector<double> samples(static_cast<size_t>(2 * n + 1));
    for (int k = 2; k <= 2 * n + 2; ++k)
        samples[static_cast<size_t>(k - 2)] = std::pow(grid.at(k), ell);
    return lcal_n(samples);
}

}  // namespace convapprox
