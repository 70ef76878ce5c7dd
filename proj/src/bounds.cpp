#include "imlab/bounds.hpp"

#include "imlab/imitators.hpp"
#include "imlab/rng.hpp"

#include <cmath>
#include <string>

namespace imlab {

namespace {

constexpr std::array<std::pair<BoundId, std::string_view>, 17> kBoundNames{{
    {BoundId::THM1, "THM1"},
    {BoundId::COR1, "COR1"},
    {BoundId::LEM_A_STATE, "LEM_A_STATE"},
    {BoundId::LEM_A_SA, "LEM_A_SA"},
    {BoundId::LEM_A_VALUE, "LEM_A_VALUE"},
    {BoundId::LEM1_JS, "LEM1_JS"},
    {BoundId::LEM1_KL, "LEM1_KL"},
    {BoundId::LEM1_RKL, "LEM1_RKL"},
    {BoundId::LEM1_CHI2, "LEM1_CHI2"},
    {BoundId::LEM1_HELLINGER, "LEM1_HELLINGER"},
    {BoundId::LEM2, "LEM2"},
    {BoundId::THM2, "THM2"},
    {BoundId::LEM_C1, "LEM_C1"},
    {BoundId::LEM3, "LEM3"},
    {BoundId::THM3, "THM3"},
    {BoundId::PINSKER, "PINSKER"},
    {BoundId::JS_TV, "JS_TV"},
}};

void check_horizon(double r_max, double gamma) {
    if (!(gamma >= 0.0 && gamma < 1.0)) throw DomainError("bound: gamma must lie in [0, 1)");
    if (!(r_max >= 0.0)) throw DomainError("bound: r_max must be >= 0");
}

// c * sqrt(x) with c >= 0 and sqrt(+inf) = +inf even when c = 0.
double scaled_sqrt(double c, double x) {
    if (std::isinf(x)) return kInf;
    return c * std::sqrt(std::max(0.0, x));
}

double tv(const Vector& mu, const Vector& nu) { return f_divergence(FDivKind::TV, mu, nu); }

} // namespace

std::string_view to_string(BoundId id) {
    for (const auto& [key, name] : kBoundNames)
        if (key == id) return name;
    return "?";
}

BoundId bound_id_from_string(std::string_view name) {
    for (const auto& [key, label] : kBoundNames)
        if (label == name) return key;
    throw ValidationError("unknown bound id: " + std::string(name));
}

BoundReport make_report(BoundId id, double lhs, double rhs, std::map<std::string, double> inputs) {
    BoundReport r;
    r.id = id;
    r.lhs = lhs;
    r.rhs = rhs;
    r.slack = rhs - lhs;
    r.holds = std::isinf(rhs) && rhs > 0.0 ? true : lhs <= rhs + kVerdictTol;
    r.inputs = std::move(inputs);
    return r;
}

double thm1_rhs(double epsilon, double r_max, double gamma) {
    check_horizon(r_max, gamma);
    const double h = 1.0 - gamma;
    return scaled_sqrt(2.0 * std::sqrt(2.0) * r_max / (h * h), epsilon);
}

double lemma1_constant(FDivKind kind) {
    switch (kind) {
    case FDivKind::JS: return 2.0 * std::sqrt(2.0);
    case FDivKind::KL:
    case FDivKind::ReverseKL: return std::sqrt(2.0);
    case FDivKind::PearsonChi2: return 1.0;
    case FDivKind::SquaredHellinger: return 2.0;
    case FDivKind::TV: break;
    }
    throw ValidationError("lemma1: TV is not an LEM1 divergence");
}

double lemma1_rhs(FDivKind kind, double divergence, double r_max, double gamma) {
    check_horizon(r_max, gamma);
    return scaled_sqrt(lemma1_constant(kind) * r_max / (1.0 - gamma), divergence);
}

double lemma_c1_rhs(double eps_m, double r_max, double gamma) {
    check_horizon(r_max, gamma);
    const double h = 1.0 - gamma;
    return scaled_sqrt(std::sqrt(2.0) * r_max * gamma / (h * h), eps_m);
}

double lemma3_rhs(double eps_m, double eps_pi, double r_max, double gamma) {
    check_horizon(r_max, gamma);
    const double h = 1.0 - gamma;
    return lemma_c1_rhs(eps_m, r_max, gamma) + scaled_sqrt(2.0 * std::sqrt(2.0) * r_max / (h * h), eps_pi);
}

double thm3_rhs(double eps_m_js, double eps_pi, double r_max, double gamma) {
    check_horizon(r_max, gamma);
    const double h = 1.0 - gamma;
    return scaled_sqrt(2.0 * std::sqrt(2.0) * r_max / h, eps_m_js) +
           scaled_sqrt(2.0 * std::sqrt(2.0) * r_max / (h * h), eps_pi);
}

double thm2_rhs(double compat_norm, double appr, double estm, double eps_hat, double gamma) {
    check_horizon(0.0, gamma);
    return compat_norm / (1.0 - gamma) * (appr + estm + eps_hat);
}

double check_cor1(std::size_t pi_class_size, std::size_t m, double delta, double r_max, double gamma) {
    check_horizon(r_max, gamma);
    if (pi_class_size < 1) throw DomainError("cor1: policy class must be nonempty");
    if (m < 1) throw DomainError("cor1: m must be >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("cor1: delta must lie in (0, 1)");
    const double h = 1.0 - gamma;
    const double md = static_cast<double>(m);
    return 2.0 * r_max / (h * h) * (std::log(static_cast<double>(pi_class_size)) / md + std::log(1.0 / delta) / md);
}

BoundReport check_cor1_instance(const TabularMdp& mdp, const Policy& pi_e, const Policy& pi_i,
                                std::size_t pi_class_size, std::size_t m, double delta) {
    const double rhs = check_cor1(pi_class_size, m, delta, mdp.r_max(), mdp.gamma());
    const double lhs = policy_value(mdp, pi_e) - policy_value(mdp, pi_i);
    return make_report(BoundId::COR1, lhs, rhs,
                       {{"gamma", mdp.gamma()},
                        {"r_max", mdp.r_max()},
                        {"m", static_cast<double>(m)},
                        {"delta", delta},
                        {"pi_class_size", static_cast<double>(pi_class_size)}});
}

BoundReport check_thm1(const TabularMdp& mdp, const Policy& pi_e, const Policy& pi_i) {
    const double eps = expected_policy_divergence(FDivKind::KL, mdp, pi_e, pi_i, pi_e);
    const double lhs = policy_value(mdp, pi_e) - policy_value(mdp, pi_i);
    return make_report(BoundId::THM1, lhs, thm1_rhs(eps, mdp.r_max(), mdp.gamma()),
                       {{"epsilon", eps}, {"gamma", mdp.gamma()}, {"r_max", mdp.r_max()}});
}

std::array<BoundReport, 3> check_lemma_a_chain(const TabularMdp& mdp, const Policy& pi_e, const Policy& pi) {
    const OccupancyMeasure occ_e = state_action_occupancy(mdp, pi_e);
    const OccupancyMeasure occ = state_action_occupancy(mdp, pi);
    const double g = mdp.gamma();
    const double mean_tv = expected_policy_divergence(FDivKind::TV, mdp, pi, pi_e, pi_e);
    const double tv_rho = tv(flatten(occ.rho), flatten(occ_e.rho));
    const std::map<std::string, double> base{{"gamma", g}, {"r_max", mdp.r_max()}, {"mean_policy_tv", mean_tv}};

    auto with = [&](const char* key, double value) {
        auto inputs = base;
        inputs[key] = value;
        return inputs;
    };
    return {
        make_report(BoundId::LEM_A_STATE, tv(occ.d, occ_e.d), g / (1.0 - g) * mean_tv, base),
        make_report(BoundId::LEM_A_SA, tv_rho, mean_tv / (1.0 - g), base),
        make_report(BoundId::LEM_A_VALUE, std::abs(policy_value(mdp, pi) - policy_value(mdp, pi_e)),
                    2.0 * mdp.r_max() / (1.0 - g) * tv_rho, with("rho_tv", tv_rho)),
    };
}

BoundId lemma1_id(FDivKind kind) {
    switch (kind) {
    case FDivKind::JS: return BoundId::LEM1_JS;
    case FDivKind::KL: return BoundId::LEM1_KL;
    case FDivKind::ReverseKL: return BoundId::LEM1_RKL;
    case FDivKind::PearsonChi2: return BoundId::LEM1_CHI2;
    case FDivKind::SquaredHellinger: return BoundId::LEM1_HELLINGER;
    case FDivKind::TV: break;
    }
    throw ValidationError("lemma1: TV is not an LEM1 divergence");
}

BoundReport check_lemma1(const TabularMdp& mdp, const Policy& pi_e, const Policy& pi_i, FDivKind kind) {
    const BoundId id = lemma1_id(kind);
    const Matrix rho_e = state_action_occupancy(mdp, pi_e).rho;
    const Matrix rho_i = state_action_occupancy(mdp, pi_i).rho;
    const double div = f_divergence(kind, flatten(rho_i), flatten(rho_e));
    const double lhs = policy_value(mdp, pi_e) - policy_value(mdp, pi_i);
    return make_report(id, lhs, lemma1_rhs(kind, div, mdp.r_max(), mdp.gamma()),
                       {{"divergence", div}, {"gamma", mdp.gamma()}, {"r_max", mdp.r_max()}});
}

Vector empirical_distribution(const std::vector<int>& points, int n) {
    if (points.empty()) throw ValidationError("empirical_distribution: empty sample");
    Vector out = Vector::Zero(n);
    for (int z : points) {
        if (z < 0 || z >= n) throw ShapeError("empirical_distribution: point out of range");
        out[z] += 1.0;
    }
    return out / static_cast<double>(points.size());
}

namespace {

struct SampleTerms {
    EstimationTerm estm;
    double empirical_distance;
};

SampleTerms sample_terms(const DiscriminatorClass& dclass, const std::vector<int>& points_e,
                         const std::vector<int>& points_i, double delta, const RademacherMode& mode) {
    const int n = dclass.space_size();
    const EstimationTerm estm = estm_term(dclass, points_e, points_i, delta, mode);
    const double empirical =
        nn_distance(dclass, empirical_distribution(points_e, n), empirical_distribution(points_i, n)).value;
    return {estm, empirical};
}

void snapshot(BoundReport& report, const DiscriminatorClass& dclass, const SampleTerms& terms, std::size_t m,
              double delta, double appr, double eps_hat) {
    report.inputs["m"] = static_cast<double>(m);
    report.inputs["delta"] = delta;
    report.inputs["class_delta"] = dclass.delta();
    report.inputs["appr"] = appr;
    report.inputs["estm"] = terms.estm.total;
    report.inputs["rademacher_e"] = terms.estm.rademacher_e;
    report.inputs["rademacher_i"] = terms.estm.rademacher_i;
    report.inputs["eps_hat"] = eps_hat;
    report.inputs["empirical_distance"] = terms.empirical_distance;
    if (terms.empirical_distance - appr > eps_hat + kVerdictTol) report.flags.push_back("hypothesis_failed");
}

} // namespace

BoundReport check_lemma2(const DiscriminatorClass& dclass, const std::vector<int>& points_e,
                         const std::vector<int>& points_i, const Vector& rho_e, const Vector& rho_i, double appr,
                         double eps_hat, double delta, const RademacherMode& mode) {
    const SampleTerms terms = sample_terms(dclass, points_e, points_i, delta, mode);
    const double lhs = nn_distance(dclass, rho_e, rho_i).value;
    BoundReport report = make_report(BoundId::LEM2, lhs, appr + terms.estm.total + eps_hat);
    snapshot(report, dclass, terms, points_e.size(), delta, appr, eps_hat);
    return report;
}

BoundReport check_thm2(const TabularMdp& mdp, const DiscriminatorClass& dclass, const Policy& pi_e,
                       const Policy& pi_i, const std::vector<int>& points_e, const std::vector<int>& points_i,
                       double appr, double eps_hat, double delta, const RademacherMode& mode) {
    const CompatibleCoefficient coef = compatible_coefficient(dclass, flatten(mdp.reward()));
    const SampleTerms terms = sample_terms(dclass, points_e, points_i, delta, mode);
    const double lhs = policy_value(mdp, pi_e) - policy_value(mdp, pi_i);
    BoundReport report =
        make_report(BoundId::THM2, lhs, thm2_rhs(coef.norm, appr, terms.estm.total, eps_hat, mdp.gamma()));
    snapshot(report, dclass, terms, points_e.size(), delta, appr, eps_hat);
    report.inputs["compat_norm"] = coef.norm;
    report.inputs["gamma"] = mdp.gamma();
    if (!dclass.is_symmetric()) report.flags.push_back("class_not_symmetric");
    return report;
}

GeneralizationTrial run_generalization_trial(const TabularMdp& mdp, const DiscriminatorClass& dclass,
                                             const Policy& pi_e, std::size_t m, double delta,
                                             const RademacherMode& mode, Seed seed) {
    const int S = mdp.n_states();
    const int A = mdp.n_actions();
    const Demonstrations expert = sample_occupancy(mdp, pi_e, m, derive_seed(seed, 1));
    const ImitationResult fit = gail_fit_lp(mdp, dclass, expert.empirical_rho(S, A));
    const Demonstrations imitator = sample_occupancy(mdp, fit.policy, m, derive_seed(seed, 2));
    const std::vector<int> points_e = expert.pair_indices(A);
    const std::vector<int> points_i = imitator.pair_indices(A);

    GeneralizationTrial trial;
    trial.appr = fit.train_metric;
    const double empirical = nn_distance(dclass, empirical_distribution(points_e, S * A),
                                         empirical_distribution(points_i, S * A))
                                 .value;
    trial.eps_hat = std::max(0.0, empirical - trial.appr);
    const Vector rho_e = flatten(state_action_occupancy(mdp, pi_e).rho);
    const Vector rho_i = flatten(state_action_occupancy(mdp, fit.policy).rho);
    trial.lemma2 = check_lemma2(dclass, points_e, points_i, rho_e, rho_i, trial.appr, trial.eps_hat, delta, mode);
    trial.thm2 = check_thm2(mdp, dclass, pi_e, fit.policy, points_e, points_i, trial.appr, trial.eps_hat, delta, mode);
    return trial;
}

BoundReport check_lemma_c1(const TabularMdp& true_mdp, const LearnedModel& model, const Policy& pi_d) {
    const double eps_m = model_kl_error(true_mdp, model, pi_d);
    const double lhs = std::abs(eval_in_model(model, true_mdp, pi_d) - policy_value(true_mdp, pi_d));
    return make_report(BoundId::LEM_C1, lhs, lemma_c1_rhs(eps_m, true_mdp.r_max(), true_mdp.gamma()),
                       {{"eps_m", eps_m}, {"gamma", true_mdp.gamma()}, {"r_max", true_mdp.r_max()}});
}

BoundReport check_lemma3(const TabularMdp& true_mdp, const LearnedModel& model, const Policy& pi_d,
                         const Policy& pi) {
    const double eps_m = model_kl_error(true_mdp, model, pi_d);
    const double eps_pi = max_policy_divergence(FDivKind::KL, pi, pi_d);
    const double lhs = std::abs(policy_value(true_mdp, pi) - eval_in_model(model, true_mdp, pi));
    return make_report(BoundId::LEM3, lhs, lemma3_rhs(eps_m, eps_pi, true_mdp.r_max(), true_mdp.gamma()),
                       {{"eps_m", eps_m}, {"eps_pi", eps_pi}, {"gamma", true_mdp.gamma()}, {"r_max", true_mdp.r_max()}});
}

BoundReport check_thm3(const TabularMdp& true_mdp, const LearnedModel& model, const Policy& pi_d,
                       const Policy& pi) {
    const double eps_m = model_js_error(true_mdp, model, pi_d);
    const double eps_pi = max_policy_divergence(FDivKind::KL, pi, pi_d);
    const double lhs = std::abs(policy_value(true_mdp, pi) - eval_in_model(model, true_mdp, pi));
    return make_report(BoundId::THM3, lhs, thm3_rhs(eps_m, eps_pi, true_mdp.r_max(), true_mdp.gamma()),
                       {{"eps_m", eps_m}, {"eps_pi", eps_pi}, {"gamma", true_mdp.gamma()}, {"r_max", true_mdp.r_max()}});
}

BoundReport check_pinsker(const Vector& mu, const Vector& nu) {
    const double kl = f_divergence(FDivKind::KL, mu, nu);
    return make_report(BoundId::PINSKER, tv(mu, nu), scaled_sqrt(std::sqrt(2.0), kl), {{"kl", kl}});
}

BoundReport check_js_tv(const Vector& mu, const Vector& nu) {
    const double t = tv(mu, nu);
    const double js = f_divergence(FDivKind::JS, mu, nu);
    return make_report(BoundId::JS_TV, 0.5 * t * t, js, {{"tv", t}});
}

} // namespace imlab
