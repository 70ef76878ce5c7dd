#include "imlab/worstcase.hpp"

#include <cmath>
#include <limits>

namespace imlab {

namespace {

void check_gamma(double gamma) {
    if (!(gamma >= 0.0 && gamma < 1.0)) throw DomainError("hard instance: gamma must lie in [0, 1)");
}

} // namespace

HardInstance hard_instance(double gamma) {
    check_gamma(gamma);
    Matrix transition = Matrix::Zero(6, 3);
    transition(0, 1) = 1.0; // s0, a1 -> s1
    transition(1, 2) = 1.0; // s0, a2 -> s2
    transition(2, 1) = transition(3, 1) = 1.0;
    transition(4, 2) = transition(5, 2) = 1.0;
    Matrix reward(3, 2);
    reward << 0.0, 0.0, 1.0, 1.0, -1.0, -1.0;
    Vector d0 = Vector::Zero(3);
    d0[0] = 1.0;
    Matrix pe(3, 2);
    pe << 0.9, 0.1, 0.5, 0.5, 0.5, 0.5;
    Matrix pi(3, 2);
    pi << 0.85, 0.15, 0.5, 0.5, 0.5, 0.5;
    return {TabularMdp(3, 2, std::move(transition), std::move(reward), 1.0, gamma, std::move(d0)), Policy(pe),
            Policy(pi), gamma};
}

double hard_kl_constant() { return 0.9 * std::log(0.9 / 0.85) + 0.1 * std::log(0.1 / 0.15); }

ClosedForms closed_forms(double gamma) {
    check_gamma(gamma);
    const double h = 1.0 - gamma;
    return {4.0 * gamma / (5.0 * h), 7.0 * gamma / (10.0 * h), gamma / (10.0 * h), h * hard_kl_constant()};
}

double tightness_ratio(double gamma) {
    check_gamma(gamma);
    if (gamma == 0.0) throw DomainError("tightness_ratio: undefined at gamma = 0");
    const HardInstance inst = hard_instance(gamma);
    const double gap = policy_value(inst.mdp, inst.pi_e) - policy_value(inst.mdp, inst.pi_i);
    const double eps = expected_policy_divergence(FDivKind::KL, inst.mdp, inst.pi_e, inst.pi_i, inst.pi_e);
    const double h = 1.0 - gamma;
    return gap * h * h / eps;
}

std::vector<SweepRow> worstcase_sweep(const std::vector<double>& gammas) {
    std::vector<SweepRow> rows;
    rows.reserve(gammas.size());
    for (double g : gammas) {
        const HardInstance inst = hard_instance(g);
        const BoundReport thm1 = check_thm1(inst.mdp, inst.pi_e, inst.pi_i);
        SweepRow row{};
        row.gamma = g;
        row.v_e = policy_value(inst.mdp, inst.pi_e);
        row.v_i = policy_value(inst.mdp, inst.pi_i);
        row.gap = thm1.lhs;
        row.epsilon = thm1.inputs.at("epsilon");
        row.thm1_rhs = thm1.rhs;
        row.ratio = g > 0.0 ? tightness_ratio(g) : std::numeric_limits<double>::quiet_NaN();
        rows.push_back(row);
    }
    return rows;
}

} // namespace imlab
