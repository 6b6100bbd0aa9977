#include "convapprox/netbuild.hpp"

#include <algorithm>
#include <cmath>

#include "convapprox/bounds.hpp"
#include "convapprox/errors.hpp"
#include "convapprox/polyfactor.hpp"
#include "convapprox/spline.hpp"

namespace convapprox {

namespace {

int ceil_div(long long num, long long den) {
    return static_cast<int>((num + den - 1) / den);
}

// T^(w) 1 with the same per-row summation order as apply_layer, so that the
// middle entries of the built biases are equal as doubles, not just to
// rounding.
std::vector<double> conv_ones(const Filter& w, int width_in, int width_out) {
    const int deg = w.degree();
    std::vector<double> out(static_cast<size_t>(width_out));
    for (int i = 1; i <= width_out; ++i) {
        double acc = 0.0;
        const int m_lo = std::max(0, i - width_in);
        const int m_hi = std::min(deg, i - 1);
        for (int m = m_hi; m >= m_lo; --m) acc += w.coeffs[static_cast<size_t>(m)];
        out[static_cast<size_t>(i - 1)] = acc;
    }
    return out;
}

// Max row l1-norm of the Toeplitz matrix of `seq` with the given input width:
// the largest l1-norm of a width-wide window of |seq|. This is the exact
// operator norm of the partial layer product on (R^width, ||.||_inf), the
// tight version of the product of filter norms; the product formula
// overflows double precision at the depths the experiments need.
double max_window_l1(const Filter& seq, int width) {
    const int len = seq.support_len();
    double best = 0.0;
    double acc = 0.0;
    for (int i = 0; i < len; ++i) {
        acc += std::abs(seq.coeffs[static_cast<size_t>(i)]);
        if (i >= width) acc -= std::abs(seq.coeffs[static_cast<size_t>(i - width)]);
        best = std::max(best, acc);
    }
    return best;
}

std::vector<Filter> pad_with_delta(std::vector<Filter> factors, int count) {
    while (static_cast<int>(factors.size()) < count) factors.push_back(Filter::delta());
    return factors;
}

}  // namespace

TargetFunction target_identity(double lo, double hi) {
    TargetFunction t;
    t.f = [](double u) { return u; };
    t.alpha = 1.0;
    t.seminorm = 1.0;
    t.sup_norm = std::max(std::abs(lo), std::abs(hi));
    t.lo = lo;
    t.hi = hi;
    return t;
}

TargetFunction target_constant(double value, double lo, double hi) {
    TargetFunction t;
    t.f = [value](double) { return value; };
    t.alpha = 1.0;
    t.seminorm = 0.0;
    t.sup_norm = std::abs(value);
    t.lo = lo;
    t.hi = hi;
    return t;
}

TargetFunction target_abs(double center, double lo, double hi) {
    TargetFunction t;
    t.f = [center](double u) { return std::abs(u - center); };
    t.alpha = 1.0;
    t.seminorm = 1.0;
    t.sup_norm = std::max(std::abs(lo - center), std::abs(hi - center));
    t.lo = lo;
    t.hi = hi;
    return t;
}

TargetFunction target_sqrt() {
    TargetFunction t;
    t.f = [](double u) { return std::sqrt(std::max(u, 0.0)); };
    t.alpha = 0.5;
    t.seminorm = 1.0;
    t.sup_norm = 1.0;
    t.lo = 0.0;
    t.hi = 1.0;
    return t;
}

TargetFunction target_sin(double freq, double lo, double hi) {
    TargetFunction t;
    t.f = [freq](double u) { return std::sin(freq * u); };
    t.alpha = 1.0;
    t.seminorm = std::abs(freq);
    // exact sup: 1 if a peak of |sin| falls inside, else the larger endpoint
    const double a = std::min(freq * lo, freq * hi);
    const double b = std::max(freq * lo, freq * hi);
    const double half_pi = std::asin(1.0);
    const bool peak_inside = std::floor((b - half_pi) / (2.0 * half_pi)) >=
                             std::ceil((a - half_pi) / (2.0 * half_pi));
    t.sup_norm = peak_inside ? 1.0
                             : std::max(std::abs(std::sin(freq * lo)), std::abs(std::sin(freq * hi)));
    t.lo = lo;
    t.hi = hi;
    return t;
}

TargetFunction target_from_callable(std::function<double(double)> f, double alpha, double lo,
                                    double hi) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw ParameterError("target_from_callable: alpha must be in (0, 1]");
    if (!(hi > lo)) throw ParameterError("target_from_callable: empty domain");
    TargetFunction t;
    t.f = std::move(f);
    t.alpha = alpha;
    t.lo = lo;
    t.hi = hi;
    t.estimated = true;
    // sampled divided differences on a uniform grid
    const int grid = 2048;
    double sup = 0.0;
    double seminorm = 0.0;
    double prev_u = lo;
    double prev_v = t.f(lo);
    sup = std::abs(prev_v);
    for (int i = 1; i <= grid; ++i) {
        const double u = lo + (hi - lo) * i / grid;
        const double v = t.f(u);
        sup = std::max(sup, std::abs(v));
        seminorm = std::max(seminorm, std::abs(v - prev_v) / std::pow(u - prev_u, alpha));
        prev_u = u;
        prev_v = v;
    }
    t.sup_norm = sup;
    t.seminorm = seminorm;
    return t;
}

Group1Layers build_group1(const RidgeBasis& basis, int s) {
    const int d = basis.d;
    const int n_q = basis.n_q;
    if (s < 2 || s > d) throw ParameterError("build_group1: need 2 <= s <= d");

    // Stack the reversed ridge vectors into one long sequence.
    std::vector<double> stacked(static_cast<size_t>(n_q * d), 0.0);
    for (int k = 0; k < n_q; ++k)
        for (int j = 0; j < d; ++j)
            stacked[static_cast<size_t>(k * d + j)] = basis.xi(k, d - 1 - j);
    const Filter w(stacked);

    const int j1 = ceil_div(static_cast<long long>(n_q) * d - 1, s - 1);
    Factorization fac = factorize_filter(w, s);
    std::vector<Filter> filters = pad_with_delta(std::move(fac.factors), j1);

    Group1Layers out;
    out.j1 = j1;
    out.d_down = (d + j1 * s) / d;
    out.layers.reserve(static_cast<size_t>(j1));

    Filter prefix = Filter::delta();
    double b_prev = 0.0;  // the input carries no offset
    int width = d;
    for (int j = 1; j <= j1; ++j) {
        const Filter& wj = filters[static_cast<size_t>(j - 1)];
        prefix = convolve(prefix, wj);
        const double b_cur = max_window_l1(prefix, d);

        ConvLayerSpec layer;
        layer.filter = wj;
        layer.bias = conv_ones(wj, width, width + s);
        for (double& v : layer.bias) v *= b_prev;
        for (double& v : layer.bias) v -= b_cur;
        if (j == j1) layer.downsample = d;
        out.layers.push_back(std::move(layer));

        b_prev = b_cur;
        width += s;
    }
    out.b = b_prev;

    // The features realized at the downsampled slots: xi_k for k <= n_q and
    // zero vectors beyond (the stacked sequence has run out by then).
    out.extended_xi.resize(static_cast<size_t>(out.d_down));
    for (int k = 1; k <= out.d_down; ++k) {
        std::vector<double> row(static_cast<size_t>(d), 0.0);
        for (int m = 1; m <= d; ++m) {
            const int idx = k * d - m;
            if (idx >= 0 && idx < n_q * d) row[static_cast<size_t>(m - 1)] = stacked[static_cast<size_t>(idx)];
        }
        out.extended_xi[static_cast<size_t>(k - 1)] = std::move(row);
    }
    return out;
}

std::vector<ConvLayerSpec> build_group2(int width, int n_active, int n, int s, double b,
                                        double incoming_offset) {
    if (s < 2) throw ParameterError("build_group2: s must be >= 2");
    if (n < 1) throw ParameterError("build_group2: N must be >= 1");
    if (n_active > width) throw DimensionError("build_group2: more active slots than width");

    const int count = ceil_div(static_cast<long long>(2 * n + 3) * width, s - 1);
    Factorization fac = factorize_w1(n, width, s);
    std::vector<Filter> filters = pad_with_delta(std::move(fac.factors), count);

    const KnotGrid grid = knots(n);
    std::vector<ConvLayerSpec> layers;
    layers.reserve(static_cast<size_t>(count));

    Filter prefix = Filter::delta();
    double b_prev = incoming_offset;
    int width_in = width;
    for (int j = 1; j <= count; ++j) {
        const Filter& wj = filters[static_cast<size_t>(j - 1)];
        prefix = convolve(prefix, wj);
        const int width_out = width_in + s;

        ConvLayerSpec layer;
        layer.filter = wj;
        layer.bias = conv_ones(wj, width_in, width_out);
        for (double& v : layer.bias) v *= b_prev;

        if (j < count) {
            const double b_cur = b * max_window_l1(prefix, width);
            for (double& v : layer.bias) v -= b_cur;
            b_prev = b_cur;
        } else {
            // Final layer: subtract the knots on the active slots of the
            // first 2N+3 blocks and the offset constant everywhere else.
            for (int i = 1; i <= width_out; ++i) {
                const int block = (i - 1) / width + 1;
                const int slot = (i - 1) % width + 1;
                double shift = b;
                if (block <= 2 * n + 3 && slot <= n_active) shift = grid.at(block);
                layer.bias[static_cast<size_t>(i - 1)] += shift;
            }
        }
        layers.push_back(std::move(layer));
        width_in = width_out;
    }
    return layers;
}

FcLayer build_fc_layer(const Eigen::MatrixXd& beta, int n, double q0, double b_hat,
                       int width_down, int n_active, int width_out) {
    const int q = static_cast<int>(beta.cols());
    std::vector<std::vector<double>> v(static_cast<size_t>(q));
    for (int l = 1; l <= q; ++l) v[static_cast<size_t>(l - 1)] = v_ell(l, n);

    FcLayer fc;
    fc.row.assign(static_cast<size_t>(width_out), 0.0);
    for (int block = 1; block <= 2 * n + 3; ++block) {
        for (int k = 1; k <= n_active; ++k) {
            double acc = 0.0;
            for (int l = 1; l <= q; ++l)
                acc += beta(k - 1, l - 1) * v[static_cast<size_t>(l - 1)][static_cast<size_t>(block - 1)];
            fc.row[static_cast<size_t>((block - 1) * width_down + k - 1)] = n * acc;
        }
    }

    const KnotGrid grid = knots(n);
    fc.bias.resize(static_cast<size_t>(2 * n + 3));
    for (int j = 1; j <= 2 * n + 3; ++j)
        fc.bias[static_cast<size_t>(j - 1)] = -q0 + b_hat * grid.at(j);
    return fc;
}

std::vector<double> output_coefficients(const TargetFunction& f, int n, double b_hat) {
    const KnotGrid grid = knots(n);
    std::vector<double> samples(static_cast<size_t>(2 * n + 1));
    for (int k = 2; k <= 2 * n + 2; ++k)
        samples[static_cast<size_t>(k - 2)] = f.eval_extended(b_hat * grid.at(k));
    std::vector<double> c = lcal_n(samples);
    for (double& v : c) v *= n / b_hat;
    return c;
}

NetworkSpec build_composite_network(const TargetFunction& f, const FeaturePolynomial& poly,
                                    int d, int s, int n, std::uint64_t seed) {
    if (s < 2 || s > d) throw ParameterError("build_composite_network: need 2 <= s <= d");
    if (n < 1) throw ParameterError("build_composite_network: N must be >= 1");
    if (poly.dim != d) throw DimensionError("build_composite_network: polynomial dimension mismatch");
    const int q = std::max(poly.degree, 1);

    const RidgeBasis basis = generate_ridge_basis(d, q, seed);
    const BetaCoeffs beta = solve_beta(poly, basis);
    // Qhat vanishes identically for a constant Q; any positive cap works then.
    double b_hat = bhat(poly.b_q, q, beta.l1_norm);
    if (b_hat <= 0.0) b_hat = 1.0;

    NetworkSpec spec;
    spec.kind = NetworkKind::composite;
    spec.d = d;
    spec.s = s;
    spec.n = n;
    spec.q = q;

    Group1Layers g1 = build_group1(basis, s);
    spec.j1 = g1.j1;
    spec.j2 = g1.j1 + ceil_div(static_cast<long long>(2 * n + 3) * g1.d_down, s - 1);
    spec.layers = std::move(g1.layers);

    std::vector<ConvLayerSpec> g2 = build_group2(g1.d_down, basis.n_q, n, s, g1.b, g1.b);
    spec.layers.insert(spec.layers.end(), std::make_move_iterator(g2.begin()),
                       std::make_move_iterator(g2.end()));

    const int width_j2 = g1.d_down + (spec.j2 - spec.j1) * s;
    FcLayer fc = build_fc_layer(beta.beta, n, poly.q0, b_hat, g1.d_down, basis.n_q, width_j2);
    spec.fc_row = std::move(fc.row);
    spec.fc_bias = std::move(fc.bias);
    spec.c = output_coefficients(f, n, b_hat);

    spec.meta.b = g1.b;
    spec.meta.b_hat = b_hat;
    spec.meta.b_q = poly.b_q;
    spec.meta.q0 = poly.q0;
    spec.meta.beta_l1 = beta.l1_norm;
    spec.meta.n_q = basis.n_q;
    spec.meta.d_down = g1.d_down;
    spec.meta.basis = basis;
    spec.meta.beta = beta.beta;
    spec.meta.f_alpha = f.alpha;
    spec.meta.f_seminorm = f.seminorm;
    spec.meta.f_sup = f.sup_norm;

    spec.meta.widths.push_back(d);
    int width = d;
    for (int j = 1; j <= spec.j2; ++j) {
        width = (j == spec.j1) ? g1.d_down : width + s;
        spec.meta.widths.push_back(width);
    }
    return spec;
}

NetworkSpec build_radial_network(const TargetFunction& f, int d, int s, int n) {
    if (s < 2 || s > d) throw ParameterError("build_radial_network: need 2 <= s <= d");
    if (n < 1) throw ParameterError("build_radial_network: N must be >= 1");

    NetworkSpec spec;
    spec.kind = NetworkKind::radial;
    spec.d = d;
    spec.s = s;
    spec.n = n;
    spec.q = 2;
    spec.j1 = 0;
    spec.j2 = ceil_div(static_cast<long long>(2 * n + 3) * d, s - 1);

    spec.layers = build_group2(d, d, n, s, 1.0, 0.0);

    const double b_hat = 1.0 + 4.0 * d;
    const int width_j = d + spec.j2 * s;
    // beta = 1_d on the degree-2 block only: |x|^2 = sum_k x_k^2.
    Eigen::MatrixXd beta = Eigen::MatrixXd::Zero(d, 2);
    beta.col(1).setOnes();
    FcLayer fc = build_fc_layer(beta, n, 0.0, b_hat, d, d, width_j);
    spec.fc_row = std::move(fc.row);
    spec.fc_bias = std::move(fc.bias);
    spec.c = output_coefficients(f, n, b_hat);

    spec.meta.b = 1.0;
    spec.meta.b_hat = b_hat;
    spec.meta.b_q = 1.0;
    spec.meta.q0 = 0.0;
    spec.meta.beta_l1 = static_cast<double>(d);
    spec.meta.n_q = d;
    spec.meta.d_down = d;
    spec.meta.f_alpha = f.alpha;
    spec.meta.f_seminorm = f.seminorm;
    spec.meta.f_sup = f.sup_norm;

    spec.meta.widths.push_back(d);
    for (int j = 1; j <= spec.j2; ++j) spec.meta.widths.push_back(d + j * s);
    return spec;
}

long long count_free_parameters(const NetworkSpec& spec) {
    const long long s = spec.s;
    const long long n = spec.n;
    const long long width_j2 = spec.meta.widths.back();
    if (spec.kind == NetworkKind::radial) {
        // biases of the conv group (the filters are universal) plus the
        // univariate samples in the output coefficients
        return spec.d + (3 * s + 1) * spec.j2 - (2 * s + 1) + 2 * n + 1;
    }
    const long long group1 = (3 * s + 2) * spec.j1;
    const long long group2 = (2 * s + 1) * (spec.j2 - spec.j1 - 1) + width_j2;
    const long long group3 = 2 * n + static_cast<long long>(spec.q) * spec.meta.n_q + 3;
    return group1 + group2 + group3;
}

int choose_n_for_accuracy(NetworkKind kind, const TargetFunction& f, double b_hat_or_d, double eps) {
    if (!(eps > 0.0) || eps > 1.0) throw ParameterError("choose_n_for_accuracy: need 0 < eps <= 1");
    if (!(f.alpha > 0.0) || f.alpha > 1.0)
        throw ParameterError("choose_n_for_accuracy: alpha must be in (0, 1]");
    const double inv_alpha = 1.0 / f.alpha;
    double value = 0.0;
    if (kind == NetworkKind::composite) {
        // N = ceil( C^{1/alpha} |f|^{1/alpha} eps^{-1/alpha} ), C = 4 Bhat^alpha
        value = std::pow(4.0, inv_alpha) * b_hat_or_d * std::pow(f.seminorm / eps, inv_alpha);
    } else {
        value = (1.0 + 4.0 * b_hat_or_d) * std::pow(3.0 * f.seminorm, inv_alpha) * std::pow(eps, -inv_alpha);
    }
    return std::max(1, static_cast<int>(std::ceil(value)));
}

}  // namespace convapprox
