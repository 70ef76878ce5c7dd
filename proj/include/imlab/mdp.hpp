#pragma once

#include "imlab/types.hpp"

#include <optional>
#include <vector>

namespace imlab {

/// Tolerance applied when validating probability rows at construction.
inline constexpr double kConstructionTol = 1e-12;

/// Checks a row-stochastic table and returns it with tiny negative entries
/// clamped and rows renormalized. Throws ValidationError when a row is off by
/// more than `tol`.
Matrix validate_stochastic_rows(Matrix table, double tol, const char* what);

/// Finite discounted MDP. The transition table has one row per (s, a) pair,
/// row index s*A + a, and one column per next state.
class TabularMdp {
public:
    TabularMdp(int n_states, int n_actions, Matrix transition, Matrix reward, double r_max,
               double gamma, Vector init_dist);

    int n_states() const noexcept { return n_states_; }
    int n_actions() const noexcept { return n_actions_; }
    int n_pairs() const noexcept { return n_states_ * n_actions_; }
    double gamma() const noexcept { return gamma_; }
    double r_max() const noexcept { return r_max_; }

    const Matrix& transition() const noexcept { return transition_; }
    const Matrix& reward() const noexcept { return reward_; }
    const Vector& init_dist() const noexcept { return init_dist_; }

    double transition(int s, int a, int next) const { return transition_(s * n_actions_ + a, next); }
    double reward(int s, int a) const { return reward_(s, a); }

    /// Same MDP with a different transition model (e.g. a learned one).
    TabularMdp with_transition(Matrix transition) const;
    /// Same dynamics with a different reward table and bound.
    TabularMdp with_reward(Matrix reward, double r_max) const;
    TabularMdp with_gamma(double gamma) const;

private:
    int n_states_;
    int n_actions_;
    Matrix transition_;
    Matrix reward_;
    double r_max_;
    double gamma_;
    Vector init_dist_;
};

/// Row-stochastic S x A table, entry (s, a) = pi(a|s).
class Policy {
public:
    explicit Policy(Matrix table);

    static Policy uniform(int n_states, int n_actions);
    static Policy deterministic(const std::vector<int>& actions, int n_actions);

    int n_states() const noexcept { return static_cast<int>(table_.rows()); }
    int n_actions() const noexcept { return static_cast<int>(table_.cols()); }
    const Matrix& table() const noexcept { return table_; }
    double operator()(int s, int a) const { return table_(s, a); }

    bool is_deterministic() const;
    /// Most probable action in each state, lowest index on ties.
    std::vector<int> greedy_actions() const;

private:
    Matrix table_;
};

/// Discounted stationary distributions d_pi and rho_pi.
struct OccupancyMeasure {
    Vector d;
    Matrix rho;
    double gamma = 0.0;
};

struct StateAction {
    int state;
    int action;
    friend bool operator==(const StateAction&, const StateAction&) = default;
};

struct Triple {
    int state;
    int action;
    int next_state;
    friend bool operator==(const Triple&, const Triple&) = default;
};

/// Samples of (s, a), optionally with the next state recorded.
struct Demonstrations {
    std::vector<StateAction> pairs;
    std::vector<Triple> triples;

    std::size_t size() const noexcept { return pairs.size(); }
    bool empty() const noexcept { return pairs.empty(); }
    bool has_triples() const noexcept { return !triples.empty(); }

    /// Throws ValidationError when an index is out of range or the triple
    /// list does not match the pair list.
    void validate(int n_states, int n_actions) const;

    /// Points in the flattened state-action space, s*A + a.
    std::vector<int> pair_indices(int n_actions) const;
    /// Points in the flattened triple space, (s*A + a)*S + s'.
    std::vector<int> triple_indices(int n_states, int n_actions) const;

    /// Empirical state-action distribution as an S x A table.
    Matrix empirical_rho(int n_states, int n_actions) const;
    /// Empirical (s, a, s') distribution, flattened.
    Vector empirical_joint(int n_states, int n_actions) const;
};

/// P_pi(s'|s) = sum_a M(s'|s,a) pi(a|s); row s is the source state.
Matrix policy_transition_matrix(const TabularMdp& mdp, const Policy& pi);

/// d_pi = (1 - gamma)(I - gamma P_pi^T)^{-1} d0 by dense LU.
Vector state_occupancy(const TabularMdp& mdp, const Policy& pi);

OccupancyMeasure state_action_occupancy(const TabularMdp& mdp, const Policy& pi);

/// V = <d0, v> with v = r_pi + gamma P_pi v.
double bellman_value(const TabularMdp& mdp, const Policy& pi);

/// V = E_{rho_pi}[r] / (1 - gamma), cross-checked against bellman_value.
double policy_value(const TabularMdp& mdp, const Policy& pi);

/// Q^pi(s, a) for the MDP's reward.
Matrix action_values(const TabularMdp& mdp, const Policy& pi);

/// Max over states of |sum_a rho(s,a) - (1-gamma) d0(s) - gamma sum M(s|.,.) rho(.,.)|.
double bellman_flow_residual(const TabularMdp& mdp, const Matrix& rho);

/// Draws m i.i.d. samples from rho_pi exactly: horizon t ~ Geometric(1 - gamma),
/// roll out t steps from d0, emit (s_t, a_t) and, when requested, s_{t+1}.
Demonstrations sample_occupancy(const TabularMdp& mdp, const Policy& pi, std::size_t m, Seed seed,
                                bool with_triples = false);

/// MDP whose states are the (s, a) pairs of `mdp` (index s*A + a) and whose
/// actions are next states s'. Dual action s' from (s, a) moves to dual state
/// (s', a') with probability pi_d(a'|s'). Reward is zero.
TabularMdp dual_mdp(const TabularMdp& mdp, const Policy& pi_d);

/// Reads a dual-MDP policy table ((S*A) x S) back as a transition model.
Matrix dual_policy_to_transition(const Policy& dual_policy);

} // namespace imlab
