#ifndef CONVAPPROX_SEQUENCES_HPP
#define CONVAPPROX_SEQUENCES_HPP

#include <vector>

#include <Eigen/Dense>

namespace convapprox {

inline double relu(double u) { return u > 0.0 ? u : 0.0; }

/// A finitely supported real sequence stored on {0, 1, ..., support_len()-1}.
/// This is the atom of all convolutional structure: filters of the layers,
/// the stacked feature sequence W, and the sparse sequence W1 are all Filters.
struct Filter {
    std::vector<double> coeffs;

    Filter() = default;
    explicit Filter(std::vector<double> c) : coeffs(std::move(c)) {}

    static Filter delta() { return Filter({1.0}); }

    int support_len() const { return static_cast<int>(coeffs.size()); }
    int degree() const { return support_len() - 1; }

    double operator[](int i) const {
        return (i >= 0 && i < support_len()) ? coeffs[static_cast<size_t>(i)] : 0.0;
    }

    double l1_norm() const;
    double linf_norm() const;

    /// Drops near-zero entries at both ends (threshold 1e-14 relative to the
    /// largest coefficient). A filter that vanishes entirely collapses to [0].
    Filter trimmed() const;

    bool is_delta() const { return support_len() == 1 && coeffs[0] == 1.0; }
};

/// (a*b)_i = sum_k a_{i-k} b_k. Result has support a.len + b.len - 1; no trim.
Filter convolve(const Filter& a, const Filter& b);

/// Convolve a list of filters left to right; empty list gives delta.
Filter convolve_all(const std::vector<Filter>& filters);

/// The banded Toeplitz matrix T^w of shape (D + support_len - 1) x D with
/// entry (i, k) = w_{i-k} (1-based). Matrix-vector product against x equals
/// the nonzero window of convolve(w, x).
Eigen::MatrixXd toeplitz_matrix(const Filter& w, int input_width);

/// Keep every d-th component: out_i = v_{i*d}, 1-based, i = 1..floor(len/d).
std::vector<double> downsample(const std::vector<double>& v, int d);

/// One convolutional layer. The layer output width equals bias.size(), so a
/// layer's structural filter budget is bias.size() - input_width even when the
/// stored filter is shorter (delta padding). Bias entries at positions
/// s+1..input_width must be equal for every layer except the last one of a
/// network (the restriction on bias vectors of the architecture).
struct ConvLayerSpec {
    Filter filter;
    std::vector<double> bias;
    // 0 means no downsampling; otherwise the factor of the downsampling
    // operator applied after the activation.
    int downsample = 0;

    int output_width() const { return static_cast<int>(bias.size()); }
};

/// True iff bias entries at positions s+1..input_width are all equal, where
/// s = bias.size() - input_width. Vacuously true when that range is empty.
bool has_equal_middle_bias(const ConvLayerSpec& layer, int input_width);

/// sigma(T^w h - b), optionally downsampled. Widths must be consistent:
/// bias.size() >= h.size() and filter support <= bias.size() - h.size() + 1.
std::vector<double> apply_layer(const ConvLayerSpec& layer, const std::vector<double>& h);

}  // namespace convapprox

#endif
