#include "imlab/imitators.hpp"

#include "imlab/rng.hpp"
#include "imlab/simplex.hpp"

#include <algorithm>
#include <cmath>

namespace imlab {

namespace {

Matrix count_pairs(const Demonstrations& demos, int n_states, int n_actions) {
    Matrix counts = Matrix::Zero(n_states, n_actions);
    for (const auto& p : demos.pairs) counts(p.state, p.action) += 1.0;
    return counts;
}

double weighted_row_kl(const Matrix& counts, const Matrix& ref, const Matrix& fit, bool ref_is_counts) {
    const double total = counts.sum();
    double out = 0.0;
    for (Eigen::Index s = 0; s < counts.rows(); ++s) {
        const double n = counts.row(s).sum();
        if (n <= 0.0) continue;
        const Vector p = ref_is_counts ? Vector(counts.row(s).transpose() / n) : Vector(ref.row(s).transpose());
        const double kl = f_divergence(FDivKind::KL, p, fit.row(s).transpose());
        if (std::isinf(kl)) return kInf;
        out += n / total * kl;
    }
    return out;
}

} // namespace

ImitationResult bc_fit(const Demonstrations& demos, int n_states, int n_actions, const BcOptions& options) {
    if (demos.empty()) throw ValidationError("bc_fit: empty demonstrations");
    if (n_states <= 0 || n_actions <= 0) throw ValidationError("bc_fit: dimensions must be positive");
    if (options.laplace < 0.0) throw ValidationError("bc_fit: laplace must be >= 0");
    if (options.fallback.alpha < 0.0 || options.fallback.alpha > 1.0)
        throw ValidationError("bc_fit: fallback alpha must lie in [0, 1]");
    demos.validate(n_states, n_actions);

    const Matrix counts = count_pairs(demos, n_states, n_actions);
    Vector fallback_row = Vector::Constant(n_actions, 1.0 / n_actions);
    if (options.fallback.kind == BcFallback::Kind::GlobalArgmax) {
        Eigen::Index best = 0;
        counts.colwise().sum().maxCoeff(&best);
        fallback_row *= options.fallback.alpha;
        fallback_row[best] += 1.0 - options.fallback.alpha;
    }

    Matrix table(n_states, n_actions);
    int unvisited = 0;
    for (int s = 0; s < n_states; ++s) {
        const double n = counts.row(s).sum();
        if (n > 0.0) {
            table.row(s) = (counts.row(s).array() + options.laplace) / (n + n_actions * options.laplace);
        } else {
            table.row(s) = fallback_row.transpose();
            ++unvisited;
        }
    }

    ImitationResult out{Policy(table)};
    out.algorithm = "bc";
    out.iterations = 1;
    out.converged = true;
    out.train_metric = weighted_row_kl(counts, counts, out.policy.table(), true);
    out.diagnostics["unvisited_states"] = unvisited;
    out.diagnostics["samples"] = static_cast<double>(demos.size());
    if (options.reference) {
        if (options.reference->n_states() != n_states || options.reference->n_actions() != n_actions)
            throw ShapeError("bc_fit: reference policy shape mismatch");
        out.diagnostics["reference_kl"] = weighted_row_kl(counts, options.reference->table(), out.policy.table(), false);
    }
    return out;
}

double bc_empirical_objective(const Demonstrations& demos, const Policy& pi) {
    if (demos.empty()) throw ValidationError("bc_empirical_objective: empty demonstrations");
    double total = 0.0;
    for (const auto& p : demos.pairs) {
        const double q = pi(p.state, p.action);
        if (q <= 0.0) return kInf;
        total -= std::log(q);
    }
    return total / static_cast<double>(demos.size());
}

ImitationResult dagger_fit(const TabularMdp& mdp, const Policy& expert, const DaggerOptions& options) {
    if (options.rounds < 1 || options.per_round < 1) throw ValidationError("dagger_fit: rounds and per_round must be >= 1");
    const int S = mdp.n_states();
    const int A = mdp.n_actions();
    Demonstrations aggregate;
    Policy learner = Policy::uniform(S, A);
    Rng label_rng(derive_seed(options.seed, 0));
    for (int k = 1; k <= options.rounds; ++k) {
        const double beta = options.beta(k);
        if (!(beta >= 0.0 && beta <= 1.0)) throw ValidationError("dagger_fit: beta must lie in [0, 1]");
        const Policy mixed(beta * expert.table() + (1.0 - beta) * learner.table());
        const Demonstrations visits =
            sample_occupancy(mdp, mixed, options.per_round, derive_seed(options.seed, static_cast<Seed>(k)));
        for (const auto& p : visits.pairs)
            aggregate.pairs.push_back({p.state, sample_index(expert.table().row(p.state), label_rng)});
        learner = bc_fit(aggregate, S, A, options.bc).policy;
    }
    ImitationResult out = bc_fit(aggregate, S, A, options.bc);
    out.algorithm = "dagger";
    out.iterations = options.rounds;
    out.seed = options.seed;
    return out;
}

Policy policy_from_occupancy(const Matrix& rho) {
    Matrix table(rho.rows(), rho.cols());
    for (Eigen::Index s = 0; s < rho.rows(); ++s) {
        const Eigen::RowVectorXd row = rho.row(s).cwiseMax(0.0);
        const double mass = row.sum();
        if (mass > 1e-15)
            table.row(s) = row / mass;
        else
            table.row(s).setConstant(1.0 / static_cast<double>(rho.cols()));
    }
    return Policy(table);
}

ImitationResult gail_fit_lp(const TabularMdp& mdp, const DiscriminatorClass& dclass, const Matrix& target_rho) {
    const int S = mdp.n_states();
    const int A = mdp.n_actions();
    const int n = S * A;
    if (target_rho.rows() != S || target_rho.cols() != A) throw ShapeError("gail_fit_lp: target shape mismatch");
    if (dclass.space_size() != n) throw ShapeError("gail_fit_lp: class is not over state-action pairs");
    if (std::abs(target_rho.sum() - 1.0) > 1e-9 || target_rho.minCoeff() < 0.0)
        throw ValidationError("gail_fit_lp: target must be a distribution");

    // variables: rho (n), t+, t-
    const Vector target = flatten(target_rho);
    lp::LinearProgram program;
    program.objective = Vector::Zero(n + 2);
    program.objective[n] = 1.0;
    program.objective[n + 1] = -1.0;
    for (const auto& member : dclass.members()) {
        Vector row(n + 2);
        row.head(n) = -member;
        row[n] = -1.0;
        row[n + 1] = 1.0;
        program.add(std::move(row), lp::Sense::LessEqual, -member.dot(target));
    }
    for (int s = 0; s < S; ++s) {
        Vector row = Vector::Zero(n + 2);
        row.segment(s * A, A).setOnes();
        row.head(n) -= mdp.gamma() * mdp.transition().col(s);
        program.add(std::move(row), lp::Sense::Equal, (1.0 - mdp.gamma()) * mdp.init_dist()[s]);
    }
    const lp::Solution sol = lp::solve(program);
    if (sol.status != lp::Status::Optimal)
        throw SolverError(std::string("gail_fit_lp: ") + lp::to_string(sol.status), sol.iterations);

    const Matrix rho = unflatten(sol.x.head(n), S, A);
    ImitationResult out{policy_from_occupancy(rho)};
    out.algorithm = "gail_lp";
    out.train_metric = sol.x[n] - sol.x[n + 1];
    out.iterations = sol.iterations;
    out.converged = true;
    out.diagnostics["flow_residual"] = bellman_flow_residual(mdp, rho);
    const Matrix achieved = state_action_occupancy(mdp, out.policy).rho;
    out.diagnostics["recovered_distance"] = nn_distance(dclass, target, flatten(achieved)).value;
    out.diagnostics["recovery_error"] = (achieved - rho).cwiseAbs().maxCoeff();
    return out;
}

Policy softmax_policy(const Matrix& logits) {
    Matrix table(logits.rows(), logits.cols());
    for (Eigen::Index s = 0; s < logits.rows(); ++s) {
        const Eigen::RowVectorXd e = (logits.row(s).array() - logits.row(s).maxCoeff()).exp();
        table.row(s) = e / e.sum();
    }
    return Policy(table);
}

JsObjective gail_js_objective(const TabularMdp& mdp, const Matrix& target_rho, const Matrix& logits) {
    const int S = mdp.n_states();
    const int A = mdp.n_actions();
    if (target_rho.rows() != S || target_rho.cols() != A || logits.rows() != S || logits.cols() != A)
        throw ShapeError("gail_js_objective: shape mismatch");
    const Policy pi = softmax_policy(logits);
    const OccupancyMeasure occ = state_action_occupancy(mdp, pi);
    JsObjective out;
    out.value = f_divergence(FDivKind::JS, flatten(target_rho), flatten(occ.rho));

    // dJS/drho = log(2 rho / (rho + target)) / 2; treat as a reward and use
    // the policy-gradient identity d<g, rho>/dtheta(s,a) = d(s) pi(a|s) A_g(s,a).
    Matrix g = Matrix::Zero(S, A);
    for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a) {
            const double r = occ.rho(s, a);
            if (r > 0.0) g(s, a) = 0.5 * std::log(2.0 * r / (r + target_rho(s, a)));
        }
    const Matrix P = policy_transition_matrix(mdp, pi);
    const Vector g_pi = pi.table().cwiseProduct(g).rowwise().sum();
    const Eigen::MatrixXd system = Eigen::MatrixXd::Identity(S, S) - mdp.gamma() * P;
    const Vector u = system.partialPivLu().solve(g_pi);
    const Matrix q = g + mdp.gamma() * unflatten(mdp.transition() * u, S, A);
    out.gradient.resize(S, A);
    for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a) out.gradient(s, a) = occ.d[s] * pi(s, a) * (q(s, a) - u[s]);
    return out;
}

ImitationResult gail_fit_js(const TabularMdp& mdp, const Matrix& target_rho, const GailJsOptions& options) {
    if (options.steps < 1) throw ValidationError("gail_fit_js: steps must be >= 1");
    if (!(options.step_size > 0.0)) throw ValidationError("gail_fit_js: step_size must be > 0");
    const int S = mdp.n_states();
    const int A = mdp.n_actions();
    Matrix logits = Matrix::Zero(S, A);
    if (options.init_logits) {
        logits = *options.init_logits;
    } else if (options.init_scale > 0.0) {
        Rng rng(options.seed);
        for (int s = 0; s < S; ++s)
            for (int a = 0; a < A; ++a) logits(s, a) = options.init_scale * (2.0 * uniform01(rng) - 1.0);
    }

    JsObjective current = gail_js_objective(mdp, target_rho, logits);
    const double initial = current.value;
    double step = options.step_size;
    const double max_step = 1e4 * options.step_size;
    long iterations = 0;
    bool converged = false;
    for (int k = 0; k < options.steps; ++k) {
        if (!current.gradient.allFinite()) throw SolverError("gail_fit_js: non-finite gradient", iterations);
        if (current.value <= options.tolerance || current.gradient.cwiseAbs().maxCoeff() < 1e-15) {
            converged = true;
            break;
        }
        JsObjective next = gail_js_objective(mdp, target_rho, logits - step * current.gradient);
        int halvings = 0;
        while (!(next.value <= current.value) && halvings < 60) {
            step *= 0.5;
            ++halvings;
            next = gail_js_objective(mdp, target_rho, logits - step * current.gradient);
        }
        if (!(next.value <= current.value)) {
            converged = true; // no descent available at machine precision
            break;
        }
        logits -= step * current.gradient;
        current = std::move(next);
        step = std::min(step * 1.5, max_step);
        ++iterations;
    }

    ImitationResult out{softmax_policy(logits)};
    out.algorithm = "gail_js";
    out.train_metric = current.value;
    out.iterations = iterations;
    out.converged = converged;
    out.seed = options.seed;
    out.diagnostics["initial_js"] = initial;
    out.diagnostics["final_js"] = current.value;
    out.diagnostics["best_js"] = current.value; // the descent is monotone
    out.diagnostics["gradient_max_abs"] = current.gradient.cwiseAbs().maxCoeff();
    out.gradient = current.gradient;
    return out;
}

Policy soft_policy_update(const TabularMdp& mdp, const Policy& pi, const Matrix& reward, double eta) {
    const double bound = reward.cwiseAbs().maxCoeff();
    const Matrix q = action_values(mdp.with_reward(reward, bound), pi);
    Matrix logits(pi.n_states(), pi.n_actions());
    for (int s = 0; s < pi.n_states(); ++s) {
        const double v = pi.table().row(s).dot(q.row(s));
        for (int a = 0; a < pi.n_actions(); ++a)
            logits(s, a) = pi(s, a) > 0.0 ? std::log(pi(s, a)) + eta * (q(s, a) - v) : -kInf;
    }
    Matrix table(pi.n_states(), pi.n_actions());
    for (int s = 0; s < pi.n_states(); ++s) {
        const Eigen::RowVectorXd e = (logits.row(s).array() - logits.row(s).maxCoeff()).exp();
        table.row(s) = e / e.sum();
    }
    return Policy(table);
}

ImitationResult wgail_fit_iterative(const TabularMdp& mdp, const DiscriminatorClass& dclass,
                                    const Demonstrations& demos, const WgailOptions& options) {
    if (options.outer < 1 || options.policy_iters < 1 || options.disc_iters < 1)
        throw ValidationError("wgail_fit_iterative: iteration counts must be >= 1");
    if (demos.empty()) throw ValidationError("wgail_fit_iterative: empty demonstrations");
    const int S = mdp.n_states();
    const int A = mdp.n_actions();
    if (dclass.space_size() != S * A) throw ShapeError("wgail_fit_iterative: class is not over state-action pairs");
    demos.validate(S, A);
    const Vector expert = flatten(demos.empirical_rho(S, A));

    Policy pi = Policy::uniform(S, A);
    Policy best = pi;
    double best_distance = nn_distance(dclass, expert, flatten(state_action_occupancy(mdp, pi).rho)).value;
    int best_iter = 0;
    int unscaled_steps = 0;
    for (int k = 1; k <= options.outer; ++k) {
        Vector learner;
        if (options.rollout_samples == 0) {
            learner = flatten(state_action_occupancy(mdp, pi).rho);
        } else {
            // average disc_iters independent rollout batches
            learner = Vector::Zero(S * A);
            for (int j = 0; j < options.disc_iters; ++j) {
                const Seed seed = derive_seed(options.seed, static_cast<Seed>(k) * 1024 + static_cast<Seed>(j));
                learner += flatten(sample_occupancy(mdp, pi, options.rollout_samples, seed).empirical_rho(S, A));
            }
            learner /= options.disc_iters;
        }
        const std::size_t member = nn_distance(dclass, learner, expert).argmax;
        Matrix reward = -unflatten(dclass.members()[member], S, A);
        reward.array() -= reward.mean();
        const double range = reward.maxCoeff() - reward.minCoeff();
        if (range > 1e-15)
            reward /= range;
        else
            ++unscaled_steps;
        const double eta = options.step_size / std::sqrt(static_cast<double>(k));
        for (int j = 0; j < options.policy_iters; ++j) pi = soft_policy_update(mdp, pi, reward, eta);

        const double distance = nn_distance(dclass, expert, flatten(state_action_occupancy(mdp, pi).rho)).value;
        if (distance < best_distance) {
            best_distance = distance;
            best = pi;
            best_iter = k;
        }
    }

    ImitationResult out{best};
    out.algorithm = "wgail";
    out.train_metric = best_distance;
    out.iterations = options.outer;
    out.converged = true;
    out.seed = options.seed;
    out.diagnostics["best_iteration"] = best_iter;
    out.diagnostics["final_distance"] =
        nn_distance(dclass, expert, flatten(state_action_occupancy(mdp, pi).rho)).value;
    out.diagnostics["unscaled_steps"] = unscaled_steps;
    if (unscaled_steps > 0) out.notes.push_back("zero reward range: scaling skipped on some steps");
    return out;
}

} // namespace imlab
