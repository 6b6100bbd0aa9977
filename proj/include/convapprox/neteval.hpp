#ifndef CONVAPPROX_NETEVAL_HPP
#define CONVAPPROX_NETEVAL_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "convapprox/netbuild.hpp"

namespace convapprox {

struct EvalTrace {
    std::vector<std::vector<double>> activations;  // per conv layer, when captured
    std::vector<double> fc_activation;             // h^(J2+1), when captured
    double output = 0.0;
    bool outside_domain = false;  // |x| > 1; guarantees do not apply there
};

/// Full forward pass: conv layers, the identical-row fully connected layer,
/// and the inner product with c.
EvalTrace forward(const NetworkSpec& spec, const std::vector<double>& x, bool capture = false);

double forward_value(const NetworkSpec& spec, const std::vector<double>& x);

/// The fully connected activations h^(J2+1)(x) only; the feature map of the
/// convex outer-coefficient fit.
std::vector<double> fc_features(const NetworkSpec& spec, const std::vector<double>& x);

/// Clamp to [-M, M].
double truncate(double y, double m);

/// One line of a membership audit against the bounded hypothesis space.
struct MembershipConstraint {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double limit = 0.0;
    bool log_domain = false;
};

struct MembershipReport {
    std::vector<MembershipConstraint> constraints;
    bool pass = false;
};

/// Audits filters, biases (log domain), output coefficients, the fully
/// connected row, identical rows, and middle-bias equality against the caps
/// parameterized by R and N.
MembershipReport check_membership(const NetworkSpec& spec, double r);

/// Variant taking an explicit fully connected matrix, for auditing networks
/// whose rows may not be identical.
MembershipReport check_membership(const NetworkSpec& spec, const Eigen::MatrixXd& fc_matrix,
                                  double r);

}  // namespace convapprox

#endif
