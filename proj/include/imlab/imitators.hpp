#pragma once

#include "imlab/divergences.hpp"
#include "imlab/mdp.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace imlab {

struct ImitationResult {
    explicit ImitationResult(Policy p) : policy(std::move(p)) {}

    Policy policy;
    double train_metric = 0.0;
    long iterations = 0;
    bool converged = false;
    std::string algorithm;
    Seed seed = 0;
    /// Named scalars (initial/final/best objective values, residuals, ...).
    /// Ordered so serialization is deterministic.
    std::map<std::string, double> diagnostics;
    std::vector<std::string> notes;
    std::optional<Matrix> gradient;
};

/// What bc_fit does on states with no samples.
struct BcFallback {
    enum class Kind { Uniform, GlobalArgmax };
    Kind kind = Kind::Uniform;
    /// GlobalArgmax only: weight of the uniform component mixed into the
    /// one-hot row of the most frequent action over all samples.
    double alpha = 0.0;

    static BcFallback uniform() { return {}; }
    static BcFallback argmax_smoothed(double alpha) { return {Kind::GlobalArgmax, alpha}; }
};

struct BcOptions {
    BcFallback fallback;
    /// Laplace pseudo-count added to every action of a visited state.
    double laplace = 0.0;
    /// When given, diagnostics["reference_kl"] holds the sample-weighted KL
    /// from the reference to the fit.
    std::optional<Policy> reference;
};

/// Tabular maximum likelihood: pi(a|s) = count(s, a) / count(s).
/// train_metric is sum_s p(s) KL(empirical(.|s), fit(.|s)) over visited states.
ImitationResult bc_fit(const Demonstrations& demos, int n_states, int n_actions, const BcOptions& options = {});

/// Average negative log-likelihood -(1/m) sum log pi(a_i|s_i); the BC
/// objective up to an additive constant. +inf when a sample has probability 0.
double bc_empirical_objective(const Demonstrations& demos, const Policy& pi);

struct DaggerOptions {
    int rounds = 5;
    std::size_t per_round = 100;
    /// Probability of following the expert in round k (1-based).
    std::function<double(int)> beta = [](int k) { return k == 1 ? 1.0 : 0.0; };
    Seed seed = 0;
    BcOptions bc;
};

/// Each round draws per_round states from the occupancy of the beta-mixed
/// policy, labels them with actions drawn from the expert and refits BC on the
/// aggregate. The first round's learner is uniform.
ImitationResult dagger_fit(const TabularMdp& mdp, const Policy& expert, const DaggerOptions& options);

/// min t over the Bellman-flow polytope subject to
/// <D_i, target> - <D_i, rho> <= t for every member.
ImitationResult gail_fit_lp(const TabularMdp& mdp, const DiscriminatorClass& dclass, const Matrix& target_rho);

/// Policy with pi(a|s) = rho(s, a) / sum_a rho(s, a); uniform on zero-mass rows.
Policy policy_from_occupancy(const Matrix& rho);

struct JsObjective {
    double value;
    Matrix gradient; ///< d JS / d logits, S x A
};

/// JS(target, rho_pi) with pi = row-softmax(logits), and its exact gradient.
JsObjective gail_js_objective(const TabularMdp& mdp, const Matrix& target_rho, const Matrix& logits);

Policy softmax_policy(const Matrix& logits);

struct GailJsOptions {
    int steps = 1000;
    double step_size = 1.0;
    Seed seed = 0;
    /// Initial logits drawn uniform in [-init_scale, init_scale]; 0 gives the
    /// uniform policy.
    double init_scale = 0.0;
    std::optional<Matrix> init_logits;
    double tolerance = 1e-14;
};

/// Gradient descent on logits. A step that would increase JS is halved until
/// it does not, so the objective never increases; a step that succeeds grows
/// the working step by 1.5x, capped at 1e4 step_size.
ImitationResult gail_fit_js(const TabularMdp& mdp, const Matrix& target_rho, const GailJsOptions& options);

/// pi <- pi * exp(eta (Q - V)) row-normalized, with Q, V for `reward`.
Policy soft_policy_update(const TabularMdp& mdp, const Policy& pi, const Matrix& reward, double eta);

struct WgailOptions {
    int outer = 200;
    int policy_iters = 1;
    int disc_iters = 1;
    double step_size = 1.0;
    /// Samples drawn from the learner per outer step to estimate rho_pi for
    /// the discriminator; 0 uses the exact occupancy.
    std::size_t rollout_samples = 0;
    Seed seed = 0;
};

/// Alternating loop: exact best-response discriminator on
/// <D, rho_pi - rho_E_hat>, then soft policy iteration on reward -D with the
/// rewards centered and divided by their range. step_size decays as
/// 1/sqrt(k). Returns the iterate with the smallest d_D(rho_E_hat, rho_pi).
ImitationResult wgail_fit_iterative(const TabularMdp& mdp, const DiscriminatorClass& dclass,
                                    const Demonstrations& demos, const WgailOptions& options);

} // namespace imlab
