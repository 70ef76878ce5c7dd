#pragma once

#include "imlab/bounds.hpp"
#include "imlab/mdp.hpp"

#include <vector>

namespace imlab {

/// Three-state chain: from s0, a1 leads to s1 and a2 to s2; s1 and s2 are
/// absorbing. r(s0, .) = 0, r(s1, .) = +1, r(s2, .) = -1, d0 = s0.
/// pi_E(.|s0) = (0.9, 0.1) and pi_I(.|s0) = (0.85, 0.15); both act uniformly
/// in the absorbing states, where actions do not matter.
struct HardInstance {
    TabularMdp mdp;
    Policy pi_e;
    Policy pi_i;
    double gamma;
};

HardInstance hard_instance(double gamma);

/// kappa = KL([0.9, 0.1], [0.85, 0.15]).
double hard_kl_constant();

struct ClosedForms {
    double v_e;     ///< 4 gamma / (5 (1 - gamma))
    double v_i;     ///< 7 gamma / (10 (1 - gamma))
    double gap;     ///< gamma / (10 (1 - gamma))
    double epsilon; ///< (1 - gamma) kappa
};

ClosedForms closed_forms(double gamma);

/// gap (1-gamma)^2 / epsilon from engine-computed values; analytically
/// gamma / (10 kappa). Throws DomainError at gamma = 0, where it is 0/0.
double tightness_ratio(double gamma);

struct SweepRow {
    double gamma;
    double v_e;
    double v_i;
    double gap;
    double epsilon;
    double thm1_rhs;
    double ratio; ///< NaN at gamma = 0
};

/// Engine values on the hard instance for each gamma.
std::vector<SweepRow> worstcase_sweep(const std::vector<double>& gammas);

} // namespace imlab
