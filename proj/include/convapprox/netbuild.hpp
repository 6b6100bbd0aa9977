#ifndef CONVAPPROX_NETBUILD_HPP
#define CONVAPPROX_NETBUILD_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "convapprox/ridge.hpp"
#include "convapprox/sequences.hpp"

namespace convapprox {

/// Univariate target f together with the smoothness data the bounds need.
/// eval_extended clamps the argument to the native domain [lo, hi], the
/// constant extension that keeps the Lipschitz seminorm.
struct TargetFunction {
    std::function<double(double)> f;
    double alpha = 1.0;     // Lipschitz exponent in (0, 1]
    double seminorm = 0.0;  // |f|_{C^{0,alpha}} on [lo, hi]
    double sup_norm = 0.0;  // ||f||_inf on [lo, hi]
    double lo = -1.0;
    double hi = 1.0;
    bool estimated = false;  // smoothness data sampled rather than supplied

    double eval_extended(double u) const {
        if (u < lo) u = lo;
        if (u > hi) u = hi;
        return f(u);
    }
};

TargetFunction target_identity(double lo, double hi);
TargetFunction target_constant(double value, double lo, double hi);
TargetFunction target_abs(double center, double lo, double hi);
TargetFunction target_sqrt();  // sqrt on [0, 1], alpha = 1/2
TargetFunction target_sin(double freq, double lo, double hi);

/// Wraps an arbitrary callable, estimating the seminorm and sup-norm by
/// sampled divided differences; the result carries the `estimated` flag.
TargetFunction target_from_callable(std::function<double(double)> f, double alpha, double lo,
                                    double hi);

enum class NetworkKind { composite, radial };

/// Everything needed to evaluate and audit a built network: the convolutional
/// layers, the single repeated row of the fully connected matrix, its bias,
/// the output coefficients, and the construction metadata.
struct NetworkSpec {
    NetworkKind kind = NetworkKind::composite;
    int d = 0;
    int s = 0;
    int n = 0;  // the structural parameter N
    int q = 0;
    int j1 = 0;
    int j2 = 0;

    std::vector<ConvLayerSpec> layers;
    std::vector<double> fc_row;   // the repeated row of the (2N+3) x d_{J2} matrix
    std::vector<double> fc_bias;  // length 2N+3
    std::vector<double> c;        // output coefficients, length 2N+3

    struct Meta {
        double b = 0.0;      // offset constant carried through the conv layers
        double b_hat = 0.0;  // clipping constant of the fully connected layer
        double b_q = 0.0;
        double q0 = 0.0;
        double beta_l1 = 0.0;
        int n_q = 0;
        int d_down = 0;  // width entering the second group
        std::vector<int> widths;  // d_0 .. d_{J2}
        RidgeBasis basis;         // empty for radial networks
        Eigen::MatrixXd beta;     // empty for radial networks
        double f_alpha = 1.0;
        double f_seminorm = 0.0;
        double f_sup = 0.0;
    } meta;

    int fc_width() const { return 2 * n + 3; }
};

struct Group1Layers {
    std::vector<ConvLayerSpec> layers;
    double b = 0.0;  // the offset constant added to every linear feature
    std::vector<std::vector<double>> extended_xi;  // features realized per slot
    int j1 = 0;
    int d_down = 0;
};

/// First group: J1 layers whose downsampled output is [xi_k . x]_k + B * 1.
Group1Layers build_group1(const RidgeBasis& basis, int s);

/// Second group: layers turning an input of linear features into the ridge
/// array sigma(xi_k . x - t_j) at position (j-1)*width + k, zero elsewhere.
/// `b` caps |feature| and is the shift that silences inactive slots;
/// `incoming_offset` is the constant already added to every input component
/// (the first group's B, or zero when the features are the raw input).
std::vector<ConvLayerSpec> build_group2(int width, int n_active, int n, int s, double b,
                                        double incoming_offset);

struct FcLayer {
    std::vector<double> row;
    std::vector<double> bias;
};

/// Fully connected layer collapsing the ridge array into sigma(Qhat - Bhat t_j).
FcLayer build_fc_layer(const Eigen::MatrixXd& beta, int n, double q0, double b_hat,
                       int width_down, int n_active, int width_out);

/// Output coefficients c = (N / Bhat) * lcal_n({f(Bhat t_k)}).
std::vector<double> output_coefficients(const TargetFunction& f, int n, double b_hat);

NetworkSpec build_composite_network(const TargetFunction& f, const FeaturePolynomial& poly,
                                    int d, int s, int n, std::uint64_t seed);

NetworkSpec build_radial_network(const TargetFunction& f, int d, int s, int n);

/// Exact number of free parameters of the construction that produced spec.
long long count_free_parameters(const NetworkSpec& spec);

/// Smallest structural parameter achieving accuracy eps per the rate bounds.
/// For the composite regime pass b_hat, for radial pass the dimension d.
int choose_n_for_accuracy(NetworkKind kind, const TargetFunction& f, double b_hat_or_d, double eps);

}  // namespace convapprox

#endif
