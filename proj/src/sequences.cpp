#include "convapprox/sequences.hpp"

#include <algorithm>
#include <cmath>

#include "convapprox/errors.hpp"

namespace convapprox {

namespace {
constexpr double kTrimTol = 1e-14;
}

double Filter::l1_norm() const {
    double s = 0.0;
    for (double c : coeffs) s += std::abs(c);
    return s;
}

double Filter::linf_norm() const {
    double m = 0.0;
    for (double c : coeffs) m = std::max(m, std::abs(c));
    return m;
}

Filter Filter::trimmed() const {
    const double tol = kTrimTol * linf_norm();
    int lo = 0;
    int hi = support_len() - 1;
    while (hi > lo && std::abs(coeffs[static_cast<size_t>(hi)]) <= tol) --hi;
    while (lo < hi && std::abs(coeffs[static_cast<size_t>(lo)]) <= tol) ++lo;
    if (hi < lo || (hi == lo && std::abs(coeffs[static_cast<size_t>(lo)]) <= tol))
        return Filter({0.0});
    return Filter(std::vector<double>(coeffs.begin() + lo, coeffs.begin() + hi + 1));
}

Filter convolve(const Filter& a, const Filter& b) {
    const int la = a.support_len();
    const int lb = b.support_len();
    std::vector<double> out(static_cast<size_t>(la + lb - 1), 0.0);
    for (int i = 0; i < la; ++i)
        for (int j = 0; j < lb; ++j)
            out[static_cast<size_t>(i + j)] += a.coeffs[static_cast<size_t>(i)] * b.coeffs[static_cast<size_t>(j)];
    return Filter(std::move(out));
}

Filter convolve_all(const std::vector<Filter>& filters) {
    Filter acc = Filter::delta();
    for (const Filter& f : filters) acc = convolve(acc, f);
    return acc;
}

Eigen::MatrixXd toeplitz_matrix(const Filter& w, int input_width) {
    if (input_width < 1) throw ParameterError("toeplitz_matrix: input width must be >= 1");
    const int rows = input_width + w.support_len() - 1;
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(rows, input_width);
    for (int i = 0; i < rows; ++i)
        for (int k = std::max(0, i - w.degree()); k <= std::min(input_width - 1, i); ++k)
            t(i, k) = w.coeffs[static_cast<size_t>(i - k)];
    return t;
}

std::vector<double> downsample(const std::vector<double>& v, int d) {
    if (d < 1) throw ParameterError("downsample: factor must be >= 1");
    if (static_cast<int>(v.size()) < d) throw DimensionError("downsample: vector shorter than factor");
    const int n = static_cast<int>(v.size()) / d;
    std::vector<double> out(static_cast<size_t>(n));
    for (int i = 1; i <= n; ++i) out[static_cast<size_t>(i - 1)] = v[static_cast<size_t>(i * d - 1)];
    return out;
}

bool has_equal_middle_bias(const ConvLayerSpec& layer, int input_width) {
    const int s = layer.output_width() - input_width;
    if (s < 0) return false;
    // positions s+1 .. input_width, 1-based
    for (int i = s + 2; i <= input_width; ++i)
        if (layer.bias[static_cast<size_t>(i - 1)] != layer.bias[static_cast<size_t>(s)]) return false;
    return true;
}

std::vector<double> apply_layer(const ConvLayerSpec& layer, const std::vector<double>& h) {
    const int width_in = static_cast<int>(h.size());
    const int width_out = layer.output_width();
    const int s = width_out - width_in;
    if (s < 0 || layer.filter.degree() > s)
        throw DimensionError("apply_layer: layer shape inconsistent with input width");

    const int deg = layer.filter.degree();
    std::vector<double> out(static_cast<size_t>(width_out));
    for (int i = 1; i <= width_out; ++i) {
        double acc = 0.0;
        // (w * h)_i with h supported on {1..width_in}; iterate over the filter
        // so the summation order per output entry depends only on the overlap.
        const int m_lo = std::max(0, i - width_in);
        const int m_hi = std::min(deg, i - 1);
        for (int m = m_hi; m >= m_lo; --m)
            acc += layer.filter.coeffs[static_cast<size_t>(m)] * h[static_cast<size_t>(i - m - 1)];
        out[static_cast<size_t>(i - 1)] = relu(acc - layer.bias[static_cast<size_t>(i - 1)]);
    }
    if (layer.downsample > 1) return downsample(out, layer.downsample);
    return out;
}

}  // namespace convapprox
