#include "imlab/mdp.hpp"

#include "imlab/rng.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace imlab {

namespace {

Vector validate_distribution(Vector v, double tol, const char* what) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i]) || v[i] < -tol)
            throw ValidationError(std::string(what) + ": negative or non-finite entry");
        if (v[i] < 0.0) v[i] = 0.0;
    }
    const double total = v.sum();
    if (std::abs(total - 1.0) > tol)
        throw ValidationError(std::string(what) + ": entries sum to " + std::to_string(total));
    // leave rows that already sum to 1 up to rounding untouched so tables
    // survive serialization round trips bit for bit
    if (std::abs(total - 1.0) > 4.0 * std::numeric_limits<double>::epsilon()) v /= total;
    return v;
}

} // namespace

Matrix validate_stochastic_rows(Matrix table, double tol, const char* what) {
    for (Eigen::Index r = 0; r < table.rows(); ++r) {
        Vector row = table.row(r).transpose();
        try {
            table.row(r) = validate_distribution(std::move(row), tol, what).transpose();
        } catch (const ValidationError& e) {
            throw ValidationError(std::string(e.what()) + " (row " + std::to_string(r) + ")");
        }
    }
    return table;
}

TabularMdp::TabularMdp(int n_states, int n_actions, Matrix transition, Matrix reward, double r_max,
                       double gamma, Vector init_dist)
    : n_states_(n_states), n_actions_(n_actions), r_max_(r_max), gamma_(gamma) {
    if (n_states <= 0 || n_actions <= 0) throw ShapeError("TabularMdp: non-positive dimensions");
    if (transition.rows() != n_states * n_actions || transition.cols() != n_states)
        throw ShapeError("TabularMdp: transition must be (S*A) x S");
    if (reward.rows() != n_states || reward.cols() != n_actions)
        throw ShapeError("TabularMdp: reward must be S x A");
    if (init_dist.size() != n_states) throw ShapeError("TabularMdp: init_dist must have S entries");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw ValidationError("TabularMdp: gamma must lie in [0, 1)");
    if (!(r_max >= 0.0) || !std::isfinite(r_max)) throw ValidationError("TabularMdp: r_max must be >= 0");
    if (!reward.allFinite() || reward.cwiseAbs().maxCoeff() > r_max + kConstructionTol)
        throw ValidationError("TabularMdp: |r(s,a)| exceeds r_max");
    transition_ = validate_stochastic_rows(std::move(transition), kConstructionTol, "TabularMdp transition");
    reward_ = std::move(reward);
    init_dist_ = validate_distribution(std::move(init_dist), kConstructionTol, "TabularMdp init_dist");
}

TabularMdp TabularMdp::with_transition(Matrix transition) const {
    return {n_states_, n_actions_, std::move(transition), reward_, r_max_, gamma_, init_dist_};
}

TabularMdp TabularMdp::with_reward(Matrix reward, double r_max) const {
    return {n_states_, n_actions_, transition_, std::move(reward), r_max, gamma_, init_dist_};
}

TabularMdp TabularMdp::with_gamma(double gamma) const {
    return {n_states_, n_actions_, transition_, reward_, r_max_, gamma, init_dist_};
}

Policy::Policy(Matrix table) {
    if (table.rows() <= 0 || table.cols() <= 0) throw ShapeError("Policy: empty table");
    table_ = validate_stochastic_rows(std::move(table), kConstructionTol, "Policy");
}

Policy Policy::uniform(int n_states, int n_actions) {
    return Policy(Matrix::Constant(n_states, n_actions, 1.0 / n_actions));
}

Policy Policy::deterministic(const std::vector<int>& actions, int n_actions) {
    Matrix table = Matrix::Zero(static_cast<Eigen::Index>(actions.size()), n_actions);
    for (std::size_t s = 0; s < actions.size(); ++s) {
        if (actions[s] < 0 || actions[s] >= n_actions) throw ShapeError("Policy: action out of range");
        table(static_cast<Eigen::Index>(s), actions[s]) = 1.0;
    }
    return Policy(std::move(table));
}

bool Policy::is_deterministic() const {
    for (Eigen::Index s = 0; s < table_.rows(); ++s)
        if (table_.row(s).maxCoeff() != 1.0) return false;
    return true;
}

std::vector<int> Policy::greedy_actions() const {
    std::vector<int> out(static_cast<std::size_t>(table_.rows()));
    for (Eigen::Index s = 0; s < table_.rows(); ++s) {
        Eigen::Index best = 0;
        table_.row(s).maxCoeff(&best);
        out[static_cast<std::size_t>(s)] = static_cast<int>(best);
    }
    return out;
}

void Demonstrations::validate(int n_states, int n_actions) const {
    for (const auto& p : pairs)
        if (p.state < 0 || p.state >= n_states || p.action < 0 || p.action >= n_actions)
            throw ValidationError("Demonstrations: pair index out of range");
    if (!triples.empty()) {
        if (triples.size() != pairs.size())
            throw ValidationError("Demonstrations: triple count differs from pair count");
        for (std::size_t i = 0; i < triples.size(); ++i) {
            const auto& t = triples[i];
            if (t.state != pairs[i].state || t.action != pairs[i].action || t.next_state < 0 ||
                t.next_state >= n_states)
                throw ValidationError("Demonstrations: inconsistent triple");
        }
    }
}

std::vector<int> Demonstrations::pair_indices(int n_actions) const {
    std::vector<int> out;
    out.reserve(pairs.size());
    for (const auto& p : pairs) out.push_back(p.state * n_actions + p.action);
    return out;
}

std::vector<int> Demonstrations::triple_indices(int n_states, int n_actions) const {
    std::vector<int> out;
    out.reserve(triples.size());
    for (const auto& t : triples) out.push_back((t.state * n_actions + t.action) * n_states + t.next_state);
    return out;
}

Matrix Demonstrations::empirical_rho(int n_states, int n_actions) const {
    if (pairs.empty()) throw ValidationError("Demonstrations: empty sample");
    Matrix rho = Matrix::Zero(n_states, n_actions);
    for (const auto& p : pairs) rho(p.state, p.action) += 1.0;
    return rho / static_cast<double>(pairs.size());
}

Vector Demonstrations::empirical_joint(int n_states, int n_actions) const {
    if (triples.empty()) throw ValidationError("Demonstrations: no triples recorded");
    Vector mu = Vector::Zero(static_cast<Eigen::Index>(n_states) * n_actions * n_states);
    for (int z : triple_indices(n_states, n_actions)) mu[z] += 1.0;
    return mu / static_cast<double>(triples.size());
}

namespace {

void check_shapes(const TabularMdp& mdp, const Policy& pi) {
    if (pi.n_states() != mdp.n_states() || pi.n_actions() != mdp.n_actions())
        throw ShapeError("policy shape does not match MDP");
}

} // namespace

Matrix policy_transition_matrix(const TabularMdp& mdp, const Policy& pi) {
    check_shapes(mdp, pi);
    const int S = mdp.n_states();
    const int A = mdp.n_actions();
    Matrix P = Matrix::Zero(S, S);
    for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a) P.row(s) += pi(s, a) * mdp.transition().row(s * A + a);
    return P;
}

Vector state_occupancy(const TabularMdp& mdp, const Policy& pi) {
    const Matrix P = policy_transition_matrix(mdp, pi);
    const int S = mdp.n_states();
    const double g = mdp.gamma();
    const Eigen::MatrixXd system = Eigen::MatrixXd::Identity(S, S) - g * P.transpose();
    Vector d = system.partialPivLu().solve((1.0 - g) * mdp.init_dist());
    if (!d.allFinite()) throw std::logic_error("state_occupancy: singular Bellman-flow system");
    return d.cwiseMax(0.0);
}

OccupancyMeasure state_action_occupancy(const TabularMdp& mdp, const Policy& pi) {
    OccupancyMeasure occ;
    occ.d = state_occupancy(mdp, pi);
    occ.rho = occ.d.asDiagonal() * pi.table();
    occ.gamma = mdp.gamma();
    return occ;
}

Matrix action_values(const TabularMdp& mdp, const Policy& pi) {
    check_shapes(mdp, pi);
    const int S = mdp.n_states();
    const int A = mdp.n_actions();
    const Matrix P = policy_transition_matrix(mdp, pi);
    const Vector r_pi = pi.table().cwiseProduct(mdp.reward()).rowwise().sum();
    const Eigen::MatrixXd system = Eigen::MatrixXd::Identity(S, S) - mdp.gamma() * P;
    const Vector v = system.partialPivLu().solve(r_pi);
    const Vector next = mdp.transition() * v; // one entry per (s, a)
    return mdp.reward() + mdp.gamma() * unflatten(next, S, A);
}

double bellman_value(const TabularMdp& mdp, const Policy& pi) {
    check_shapes(mdp, pi);
    const int S = mdp.n_states();
    const Matrix P = policy_transition_matrix(mdp, pi);
    const Vector r_pi = pi.table().cwiseProduct(mdp.reward()).rowwise().sum();
    const Eigen::MatrixXd system = Eigen::MatrixXd::Identity(S, S) - mdp.gamma() * P;
    const Vector v = system.partialPivLu().solve(r_pi);
    return mdp.init_dist().dot(v);
}

double policy_value(const TabularMdp& mdp, const Policy& pi) {
    const OccupancyMeasure occ = state_action_occupancy(mdp, pi);
    const double value = (occ.rho.cwiseProduct(mdp.reward())).sum() / (1.0 - mdp.gamma());
    const double check = bellman_value(mdp, pi);
    if (std::abs(value - check) > 1e-8 * std::max(1.0, std::abs(value)))
        throw std::logic_error("policy_value: occupancy and Bellman routes disagree");
    return value;
}

double bellman_flow_residual(const TabularMdp& mdp, const Matrix& rho) {
    if (rho.rows() != mdp.n_states() || rho.cols() != mdp.n_actions())
        throw ShapeError("bellman_flow_residual: rho shape mismatch");
    const Vector inflow = mdp.transition().transpose() * flatten(rho);
    const Vector lhs = rho.rowwise().sum();
    const Vector rhs = (1.0 - mdp.gamma()) * mdp.init_dist() + mdp.gamma() * inflow;
    return (lhs - rhs).cwiseAbs().maxCoeff();
}

Demonstrations sample_occupancy(const TabularMdp& mdp, const Policy& pi, std::size_t m, Seed seed,
                                bool with_triples) {
    check_shapes(mdp, pi);
    if (m == 0) throw ValidationError("sample_occupancy: m must be >= 1");
    const int A = mdp.n_actions();
    Rng rng(seed);
    Demonstrations out;
    out.pairs.reserve(m);
    if (with_triples) out.triples.reserve(m);
    const Matrix& T = mdp.transition();
    const Matrix& table = pi.table();
    for (std::size_t i = 0; i < m; ++i) {
        int s = sample_index(mdp.init_dist(), rng);
        int a = sample_index(table.row(s), rng);
        // continue the rollout with probability gamma, stop with 1 - gamma
        while (uniform01(rng) < mdp.gamma()) {
            s = sample_index(T.row(s * A + a), rng);
            a = sample_index(table.row(s), rng);
        }
        out.pairs.push_back({s, a});
        if (with_triples) out.triples.push_back({s, a, sample_index(T.row(s * A + a), rng)});
    }
    return out;
}

TabularMdp dual_mdp(const TabularMdp& mdp, const Policy& pi_d) {
    check_shapes(mdp, pi_d);
    const int S = mdp.n_states();
    const int A = mdp.n_actions();
    const int dual_states = S * A;
    const int dual_actions = S;
    Matrix transition = Matrix::Zero(dual_states * dual_actions, dual_states);
    for (int z = 0; z < dual_states; ++z)
        for (int next = 0; next < S; ++next)
            for (int a = 0; a < A; ++a) transition(z * dual_actions + next, next * A + a) = pi_d(next, a);
    Vector init(dual_states);
    for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a) init[s * A + a] = mdp.init_dist()[s] * pi_d(s, a);
    return {dual_states, dual_actions, std::move(transition), Matrix::Zero(dual_states, dual_actions), 0.0,
            mdp.gamma(), std::move(init)};
}

Matrix dual_policy_to_transition(const Policy& dual_policy) { return dual_policy.table(); }

} // namespace imlab
