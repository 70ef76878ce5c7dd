#include "imlab/env_learning.hpp"

#include "imlab/rng.hpp"

#include <algorithm>
#include <cmath>

namespace imlab {

LearnedModel::LearnedModel(int n_states, int n_actions, Matrix transition)
    : n_states_(n_states), n_actions_(n_actions) {
    if (n_states <= 0 || n_actions <= 0) throw ValidationError("LearnedModel: dimensions must be positive");
    if (transition.rows() != static_cast<Eigen::Index>(n_states) * n_actions || transition.cols() != n_states)
        throw ShapeError("LearnedModel: transition must be (S*A) x S");
    transition_ = validate_stochastic_rows(std::move(transition), kConstructionTol, "LearnedModel transition");
}

JointDistribution joint_distribution(const Matrix& model, const TabularMdp& reward_mdp, const Policy& pi_d) {
    const int S = reward_mdp.n_states();
    const int A = reward_mdp.n_actions();
    const Matrix rho = state_action_occupancy(reward_mdp.with_transition(model), pi_d).rho;
    JointDistribution out{S, A, Vector(static_cast<Eigen::Index>(S) * A * S)};
    for (int z = 0; z < S * A; ++z)
        out.table.segment(static_cast<Eigen::Index>(z) * S, S) = flatten(rho)[z] * model.row(z).transpose();
    return out;
}

LearnedModel bc_env_fit(const Demonstrations& triples, int n_states, int n_actions, double laplace) {
    if (!triples.has_triples()) throw ValidationError("bc_env_fit: no triples");
    if (laplace < 0.0) throw ValidationError("bc_env_fit: laplace must be >= 0");
    triples.validate(n_states, n_actions);
    Matrix counts = Matrix::Zero(n_states * n_actions, n_states);
    for (const auto& t : triples.triples) counts(t.state * n_actions + t.action, t.next_state) += 1.0;
    Matrix model(counts.rows(), n_states);
    for (Eigen::Index z = 0; z < counts.rows(); ++z) {
        const double n = counts.row(z).sum();
        if (n > 0.0)
            model.row(z) = (counts.row(z).array() + laplace) / (n + n_states * laplace);
        else
            model.row(z).setConstant(1.0 / n_states);
    }
    return {n_states, n_actions, std::move(model)};
}

namespace {

Matrix row_softmax(const Matrix& logits) {
    Matrix out(logits.rows(), logits.cols());
    for (Eigen::Index r = 0; r < logits.rows(); ++r) {
        const Eigen::RowVectorXd e = (logits.row(r).array() - logits.row(r).maxCoeff()).exp();
        out.row(r) = e / e.sum();
    }
    return out;
}

// log(sigmoid(x)) and log(1 - sigmoid(x)) without cancellation.
double log_sigmoid(double x) { return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x)); }
double log_one_minus_sigmoid(double x) { return log_sigmoid(-x); }

Matrix initial_model(const Matrix& init, int S, int A) {
    return LearnedModel(S, A, init).transition();
}

EnvFitResult fit_direct_js(const TabularMdp& true_mdp, const Policy& pi_d, const DirectJs& opt) {
    if (opt.steps < 1) throw ValidationError("gail_env_fit: steps must be >= 1");
    if (!(opt.step_size > 0.0)) throw ValidationError("gail_env_fit: step_size must be > 0");
    const int S = true_mdp.n_states();
    const int A = true_mdp.n_actions();
    Matrix logits = Matrix::Zero(S * A, S);
    if (opt.init) logits = initial_model(*opt.init, S, A).array().log().matrix();
    JsObjective current = env_js_objective(true_mdp, pi_d, logits);
    const double initial = current.value;
    double step = opt.step_size;
    const double max_step = 1e4 * opt.step_size;
    long iterations = 0;
    for (int k = 0; k < opt.steps; ++k) {
        if (!current.gradient.allFinite()) throw SolverError("gail_env_fit: non-finite gradient", iterations);
        if (current.value <= 1e-14 || current.gradient.cwiseAbs().maxCoeff() < 1e-15) break;
        JsObjective next = env_js_objective(true_mdp, pi_d, logits - step * current.gradient);
        int halvings = 0;
        while (!(next.value <= current.value) && halvings < 60) {
            step *= 0.5;
            ++halvings;
            next = env_js_objective(true_mdp, pi_d, logits - step * current.gradient);
        }
        if (!(next.value <= current.value)) break;
        logits -= step * current.gradient;
        current = std::move(next);
        step = std::min(step * 1.5, max_step);
        ++iterations;
    }
    EnvFitResult out{LearnedModel(S, A, row_softmax(logits))};
    out.js = current.value;
    out.iterations = iterations;
    out.algorithm = "gail_env_js";
    out.diagnostics["initial_js"] = initial;
    out.diagnostics["final_js"] = current.value;
    out.diagnostics["gradient_max_abs"] = current.gradient.cwiseAbs().maxCoeff();
    out.gradient = current.gradient;
    return out;
}

EnvFitResult fit_algorithm1(const TabularMdp& true_mdp, const Policy& pi_d, const DiscriminatorClass& dclass,
                            const Algorithm1& opt) {
    if (opt.outer < 1 || opt.model_iters < 1 || opt.disc_iters < 1 || opt.batch < 1)
        throw ValidationError("gail_env_fit: algorithm1 counts must be >= 1");
    const int S = true_mdp.n_states();
    const int A = true_mdp.n_actions();
    if (dclass.space_size() != S * A * S) throw ShapeError("gail_env_fit: class is not over triples");
    const TabularMdp dual = dual_mdp(true_mdp, pi_d);
    const Demonstrations real = sample_occupancy(true_mdp, pi_d, opt.batch, derive_seed(opt.seed, 0), true);
    const std::vector<int> real_points = real.triple_indices(S, A);

    Policy model_policy = opt.init ? Policy(initial_model(*opt.init, S, A)) : Policy::uniform(S * A, S);
    LearnedModel best(S, A, model_policy.table());
    double best_js = model_js_error(true_mdp, best, pi_d);
    const double initial = best_js;
    int best_iter = 0;
    long clipped = 0;
    for (int k = 1; k <= opt.outer; ++k) {
        const TabularMdp model_mdp = true_mdp.with_transition(dual_policy_to_transition(model_policy));
        const Demonstrations fake =
            sample_occupancy(model_mdp, pi_d, opt.batch, derive_seed(opt.seed, static_cast<Seed>(k)), true);
        const std::vector<int> fake_points = fake.triple_indices(S, A);

        // logistic best response: D high on model triples, low on real ones
        std::size_t chosen = 0;
        double best_objective = -kInf;
        for (std::size_t i = 0; i < dclass.size(); ++i) {
            const Vector& d = dclass.members()[i];
            double objective = 0.0;
            for (int z : fake_points) objective += log_sigmoid(d[z]);
            for (int z : real_points) objective += log_one_minus_sigmoid(d[z]);
            if (objective > best_objective) {
                best_objective = objective;
                chosen = i;
            }
        }
        const Vector& d = dclass.members()[chosen];
        Matrix reward(S * A, S);
        for (int z = 0; z < S * A * S; ++z) {
            const double raw = -log_sigmoid(d[z]);
            const double r = std::clamp(raw, -opt.reward_clip, opt.reward_clip);
            if (r != raw) ++clipped;
            reward.data()[z] = r;
        }
        for (int j = 0; j < opt.model_iters; ++j)
            model_policy = soft_policy_update(dual, model_policy, reward, opt.step_size);

        const LearnedModel candidate(S, A, dual_policy_to_transition(model_policy));
        const double js = model_js_error(true_mdp, candidate, pi_d);
        if (js < best_js) {
            best_js = js;
            best = candidate;
            best_iter = k;
        }
    }
    EnvFitResult out{best};
    out.js = best_js;
    out.iterations = opt.outer;
    out.algorithm = "gail_env_alg1";
    out.diagnostics["initial_js"] = initial;
    out.diagnostics["best_iteration"] = best_iter;
    out.diagnostics["reward_clip"] = opt.reward_clip;
    out.diagnostics["clipped_rewards"] = static_cast<double>(clipped);
    return out;
}

} // namespace

JsObjective env_js_objective(const TabularMdp& true_mdp, const Policy& pi_d, const Matrix& logits) {
    const int S = true_mdp.n_states();
    const int A = true_mdp.n_actions();
    const int Z = S * A;
    if (logits.rows() != Z || logits.cols() != S) throw ShapeError("env_js_objective: logits must be (S*A) x S");
    const Matrix model = row_softmax(logits);
    const Vector rho = flatten(state_action_occupancy(true_mdp.with_transition(model), pi_d).rho);
    const Vector rho_true = flatten(state_action_occupancy(true_mdp, pi_d).rho);

    Matrix mu(Z, S);
    Matrix mu_true(Z, S);
    for (int z = 0; z < Z; ++z) {
        mu.row(z) = rho[z] * model.row(z);
        mu_true.row(z) = rho_true[z] * true_mdp.transition().row(z);
    }
    JsObjective out;
    out.value = f_divergence(FDivKind::JS, flatten(mu), flatten(mu_true));

    // The model is a policy of the dual MDP; dJS/dmu acts as its reward.
    Matrix g = Matrix::Zero(Z, S);
    for (int z = 0; z < Z; ++z)
        for (int n = 0; n < S; ++n)
            if (mu(z, n) > 0.0) g(z, n) = 0.5 * std::log(2.0 * mu(z, n) / (mu(z, n) + mu_true(z, n)));
    const Vector h = model.cwiseProduct(g).rowwise().sum();
    Eigen::MatrixXd P(Z, Z);
    for (int z = 0; z < Z; ++z)
        for (int n = 0; n < S; ++n)
            for (int a = 0; a < A; ++a) P(z, n * A + a) = model(z, n) * pi_d(n, a);
    const Vector u = (Eigen::MatrixXd::Identity(Z, Z) - true_mdp.gamma() * P).partialPivLu().solve(h);
    Vector w(S);
    for (int n = 0; n < S; ++n) w[n] = pi_d.table().row(n).dot(u.segment(n * A, A));
    out.gradient.resize(Z, S);
    for (int z = 0; z < Z; ++z)
        for (int n = 0; n < S; ++n)
            out.gradient(z, n) = rho[z] * model(z, n) * (g(z, n) + true_mdp.gamma() * w[n] - u[z]);
    return out;
}

EnvFitResult gail_env_fit(const TabularMdp& true_mdp, const Policy& pi_d, const DiscriminatorClass& dclass,
                          const EnvFitMode& mode) {
    if (pi_d.n_states() != true_mdp.n_states() || pi_d.n_actions() != true_mdp.n_actions())
        throw ShapeError("gail_env_fit: policy shape mismatch");
    if (const auto* direct = std::get_if<DirectJs>(&mode)) return fit_direct_js(true_mdp, pi_d, *direct);
    return fit_algorithm1(true_mdp, pi_d, dclass, std::get<Algorithm1>(mode));
}

double eval_in_model(const LearnedModel& model, const TabularMdp& reward_mdp, const Policy& pi) {
    if (model.n_states() != reward_mdp.n_states() || model.n_actions() != reward_mdp.n_actions())
        throw ShapeError("eval_in_model: model shape mismatch");
    return policy_value(reward_mdp.with_transition(model.transition()), pi);
}

double model_kl_error(const TabularMdp& true_mdp, const LearnedModel& model, const Policy& pi_d) {
    if (model.n_states() != true_mdp.n_states() || model.n_actions() != true_mdp.n_actions())
        throw ShapeError("model_kl_error: model shape mismatch");
    const Vector rho = flatten(state_action_occupancy(true_mdp, pi_d).rho);
    double total = 0.0;
    for (int z = 0; z < true_mdp.n_pairs(); ++z) {
        if (rho[z] <= 0.0) continue;
        const double kl =
            f_divergence(FDivKind::KL, true_mdp.transition().row(z).transpose(), model.transition().row(z).transpose());
        if (std::isinf(kl)) return kInf;
        total += rho[z] * kl;
    }
    return total;
}

double model_js_error(const TabularMdp& true_mdp, const LearnedModel& model, const Policy& pi_d) {
    if (model.n_states() != true_mdp.n_states() || model.n_actions() != true_mdp.n_actions())
        throw ShapeError("model_js_error: model shape mismatch");
    const JointDistribution learned = joint_distribution(model.transition(), true_mdp, pi_d);
    const JointDistribution truth = joint_distribution(true_mdp.transition(), true_mdp, pi_d);
    return f_divergence(FDivKind::JS, learned.table, truth.table);
}

} // namespace imlab
