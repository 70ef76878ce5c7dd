#pragma once

#include "imlab/divergences.hpp"
#include "imlab/imitators.hpp"
#include "imlab/mdp.hpp"

#include <map>
#include <optional>
#include <string>
#include <variant>

namespace imlab {

/// Learned transition model M_theta, (S*A) x S, row s*A + a.
class LearnedModel {
public:
    LearnedModel(int n_states, int n_actions, Matrix transition);

    int n_states() const noexcept { return n_states_; }
    int n_actions() const noexcept { return n_actions_; }
    const Matrix& transition() const noexcept { return transition_; }

private:
    int n_states_;
    int n_actions_;
    Matrix transition_;
};

/// mu(s, a, s') flattened as (s*A + a)*S + s'.
struct JointDistribution {
    int n_states;
    int n_actions;
    Vector table;
};

/// mu(s, a, s') = model(s'|s, a) rho(s, a), with rho computed inside `model`
/// from reward_mdp's gamma and d0.
JointDistribution joint_distribution(const Matrix& model, const TabularMdp& reward_mdp, const Policy& pi_d);

/// Tabular MLE M(s'|s, a) = count(s, a, s') / count(s, a); unvisited pairs get
/// uniform rows. `laplace` adds a pseudo-count to every next state of a
/// visited pair.
LearnedModel bc_env_fit(const Demonstrations& triples, int n_states, int n_actions, double laplace = 0.0);

struct DirectJs {
    int steps = 1000;
    double step_size = 1.0;
    Seed seed = 0;
    /// Starting model, (S*A) x S; uniform rows when absent.
    std::optional<Matrix> init;
};

struct Algorithm1 {
    int outer = 100;
    int model_iters = 1;
    int disc_iters = 1;
    std::size_t batch = 500; ///< triples drawn from each of M* and M_theta per round
    double step_size = 1.0;
    double reward_clip = 30.0;
    Seed seed = 0;
    std::optional<Matrix> init;
};

using EnvFitMode = std::variant<DirectJs, Algorithm1>;

struct EnvFitResult {
    explicit EnvFitResult(LearnedModel m) : model(std::move(m)) {}

    LearnedModel model;
    double js = 0.0; ///< JS(mu^{M_theta}, mu^{M*}) of the returned model
    long iterations = 0;
    std::string algorithm;
    std::map<std::string, double> diagnostics;
    std::optional<Matrix> gradient;
};

/// JS(mu^{softmax(logits)}, mu^{M*}) and its gradient w.r.t. the
/// (S*A) x S logits.
JsObjective env_js_objective(const TabularMdp& true_mdp, const Policy& pi_d, const Matrix& logits);

/// Adversarial model learning. DirectJs descends the joint JS by exact
/// gradients (same step rule as gail_fit_js). Algorithm1 runs the sampled
/// discriminator/model loop on the dual MDP; there the class members are
/// logits, D = sigmoid(member) scores model-generated triples, and the model
/// is rewarded with -log D clipped to +-reward_clip. Both return the iterate
/// with the smallest exact JS, initialization included.
EnvFitResult gail_env_fit(const TabularMdp& true_mdp, const Policy& pi_d, const DiscriminatorClass& dclass,
                          const EnvFitMode& mode);

/// Policy value with the model's transitions and reward_mdp's r, gamma, d0.
double eval_in_model(const LearnedModel& model, const TabularMdp& reward_mdp, const Policy& pi);

/// E_{(s,a) ~ rho^{M*}_{pi_d}}[KL(M*(.|s,a), M_theta(.|s,a))].
double model_kl_error(const TabularMdp& true_mdp, const LearnedModel& model, const Policy& pi_d);

/// JS(mu^{M_theta}, mu^{M*}) under pi_d.
double model_js_error(const TabularMdp& true_mdp, const LearnedModel& model, const Policy& pi_d);

} // namespace imlab
