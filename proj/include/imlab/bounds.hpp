#pragma once

#include "imlab/divergences.hpp"
#include "imlab/env_learning.hpp"
#include "imlab/mdp.hpp"

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace imlab {

enum class BoundId {
    THM1,
    COR1,
    LEM_A_STATE,
    LEM_A_SA,
    LEM_A_VALUE,
    LEM1_JS,
    LEM1_KL,
    LEM1_RKL,
    LEM1_CHI2,
    LEM1_HELLINGER,
    LEM2,
    THM2,
    LEM_C1,
    LEM3,
    THM3,
    PINSKER,
    JS_TV,
};

std::string_view to_string(BoundId id);
BoundId bound_id_from_string(std::string_view name);

/// Absolute slack tolerance of every verdict.
inline constexpr double kVerdictTol = 1e-9;

struct BoundReport {
    BoundId id = BoundId::THM1;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    bool holds = true;
    /// Quantities entering the formula (epsilon, gamma, r_max, m, delta, ...).
    std::map<std::string, double> inputs;
    /// Non-verdict remarks, e.g. a failed LEM2 hypothesis.
    std::vector<std::string> flags;
};

/// Fills slack and holds from lhs and rhs.
BoundReport make_report(BoundId id, double lhs, double rhs, std::map<std::string, double> inputs = {});

// Right-hand sides as plain formulas. All accept +inf divergences.
double thm1_rhs(double epsilon, double r_max, double gamma);
double lemma1_constant(FDivKind kind);
double lemma1_rhs(FDivKind kind, double divergence, double r_max, double gamma);
double lemma_c1_rhs(double eps_m, double r_max, double gamma);
double lemma3_rhs(double eps_m, double eps_pi, double r_max, double gamma);
double thm3_rhs(double eps_m_js, double eps_pi, double r_max, double gamma);
double thm2_rhs(double compat_norm, double appr, double estm, double eps_hat, double gamma);

/// (2 R / (1-gamma)^2) ((log |Pi| + log(1/delta)) / m).
double check_cor1(std::size_t pi_class_size, std::size_t m, double delta, double r_max, double gamma);

/// COR1 report on a concrete pair: lhs = V_E - V_I against check_cor1.
BoundReport check_cor1_instance(const TabularMdp& mdp, const Policy& pi_e, const Policy& pi_i,
                                std::size_t pi_class_size, std::size_t m, double delta);

/// lhs = V_E - V_I, epsilon = E_{d_E}[KL(pi_E, pi_I)].
BoundReport check_thm1(const TabularMdp& mdp, const Policy& pi_e, const Policy& pi_i);

/// State, state-action and value error propagation, in that order.
std::array<BoundReport, 3> check_lemma_a_chain(const TabularMdp& mdp, const Policy& pi_e, const Policy& pi);

BoundId lemma1_id(FDivKind kind);

/// lhs = V_E - V_I against the constant for `kind` times
/// R / (1-gamma) sqrt(D(rho_I, rho_E)). TV is not an LEM1 kind.
BoundReport check_lemma1(const TabularMdp& mdp, const Policy& pi_e, const Policy& pi_i, FDivKind kind);

/// Histogram of sample points over a space of n points.
Vector empirical_distribution(const std::vector<int>& points, int n);

/// lhs = d_D(rho_E, rho_I) on the population; rhs = appr + Estm + eps_hat.
/// The hypothesis d_D(rho_E_hat, rho_I_hat) - appr <= eps_hat is checked and
/// flagged, never counted as a violation.
BoundReport check_lemma2(const DiscriminatorClass& dclass, const std::vector<int>& points_e,
                         const std::vector<int>& points_i, const Vector& rho_e, const Vector& rho_i, double appr,
                         double eps_hat, double delta, const RademacherMode& mode);

/// lhs = V_E - V_I; rhs = ||r||_D / (1-gamma) (appr + Estm + eps_hat). Throws
/// SpanError when r is outside the span of the class.
BoundReport check_thm2(const TabularMdp& mdp, const DiscriminatorClass& dclass, const Policy& pi_e,
                       const Policy& pi_i, const std::vector<int>& points_e, const std::vector<int>& points_i,
                       double appr, double eps_hat, double delta, const RademacherMode& mode);

/// One resampling trial of the LEM2 / THM2 pipeline: draw m expert
/// pairs, fit the imitator by gail_fit_lp on the empirical target (its optimum
/// is Appr), draw m imitator pairs, set eps_hat = max(0, d_D(rho_E_hat,
/// rho_I_hat) - Appr), and check both bounds.
struct GeneralizationTrial {
    BoundReport lemma2;
    BoundReport thm2;
    double appr = 0.0;
    double eps_hat = 0.0;
};

GeneralizationTrial run_generalization_trial(const TabularMdp& mdp, const DiscriminatorClass& dclass,
                                             const Policy& pi_e, std::size_t m, double delta,
                                             const RademacherMode& mode, Seed seed);

/// lhs = |V^{M_theta}_{pi_D} - V^{M*}_{pi_D}|, eps_m = model_kl_error.
BoundReport check_lemma_c1(const TabularMdp& true_mdp, const LearnedModel& model, const Policy& pi_d);

/// lhs = |V^{M*}_pi - V^{M_theta}_pi|, eps_m = model KL, eps_pi = max_s KL(pi, pi_D).
BoundReport check_lemma3(const TabularMdp& true_mdp, const LearnedModel& model, const Policy& pi_d,
                         const Policy& pi);

/// As check_lemma3 with eps_m = JS(mu^{M_theta}, mu^{M*}).
BoundReport check_thm3(const TabularMdp& true_mdp, const LearnedModel& model, const Policy& pi_d,
                       const Policy& pi);

/// TV(mu, nu) <= sqrt(2 KL(mu, nu)).
BoundReport check_pinsker(const Vector& mu, const Vector& nu);

/// TV(mu, nu)^2 / 2 <= JS(mu, nu).
BoundReport check_js_tv(const Vector& mu, const Vector& nu);

} // namespace imlab
