// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include "support.hpp"

#include "imlab/bounds.hpp"
#include "imlab/discriminators.hpp"
#include "imlab/env_learning.hpp"
#include "imlab/imitators.hpp"
#include "imlab/lab.hpp"
#include "imlab/worstcase.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <string>

using namespace imlab;
using imlab::testing::fuzz_mdp;
using imlab::testing::fuzz_policy;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
    return buf;
}

Outcome criterion1() {
    const auto start = Clock::now();
    double worst = 0.0;
    for (double g : {0.0, 0.5, 0.9, 0.99, 0.999}) {
        const HardInstance h = hard_instance(g);
        const double ve = 4.0 * g / (5.0 * (1.0 - g));
        const double vi = 7.0 * g / (10.0 * (1.0 - g));
        const Vector d = state_occupancy(h.mdp, h.pi_e);
        worst = std::max({worst, std::abs(policy_value(h.mdp, h.pi_e) - ve), std::abs(policy_value(h.mdp, h.pi_i) - vi),
                          std::abs(d[0] - (1.0 - g)), std::abs(d[1] - 0.9 * g), std::abs(d[2] - 0.1 * g)});
    }
    const double t = seconds_since(start);
    return {worst <= 1e-10 && t < 1.0, fmt("max error %.3g, %.3f s", worst, t)};
}

Outcome criterion2() {
    const double kappa = 0.9 * std::log(0.9 / 0.85) + 0.1 * std::log(0.1 / 0.15);
    double worst = 0.0;
    for (double g : {0.5, 0.9, 0.99, 0.999}) {
        const HardInstance h = hard_instance(g);
        const double gap = policy_value(h.mdp, h.pi_e) - policy_value(h.mdp, h.pi_i);
        const double eps = expected_policy_divergence(FDivKind::KL, h.mdp, h.pi_e, h.pi_i, h.pi_e);
        const double ratio = gap * (1.0 - g) * (1.0 - g) / eps;
        worst = std::max({worst, std::abs(ratio - g / (10.0 * kappa)), std::abs(tightness_ratio(g) - ratio)});
    }
    const double off = std::abs(kappa - 0.011);
    return {worst <= 1e-9 && off < 2e-4, fmt("max ratio error %.3g, |kappa - 0.011| = %.3g", worst, off)};
}

Outcome criterion3() {
    lab::ExperimentConfig c;
    c.seed = 2024;
    c.campaign = lab::Campaign::BoundsAll;
    c.trials = 1000;
    c.n_states_min = 2;
    c.n_states_max = 8;
    c.n_actions_min = 2;
    c.n_actions_max = 4;
    c.gammas = {0.5, 0.8, 0.9, 0.99};
    c.sample_sizes = {50, 200};
    const auto start = Clock::now();
    const lab::CampaignReport r = lab::run_campaign(c);
    const double t = seconds_since(start);

    const std::set<std::string> required{"THM1",    "LEM_A_STATE", "LEM_A_SA",  "LEM_A_VALUE",    "LEM1_JS",
                                         "LEM1_KL", "LEM1_RKL",    "LEM1_CHI2", "LEM1_HELLINGER", "LEM_C1",
                                         "LEM3",    "THM3"};
    std::set<std::string> seen;
    std::size_t checked = 0;
    std::size_t failed = 0;
    for (const auto& row : r.rows) {
        const std::string id(to_string(row.report.id));
        if (!required.count(id)) continue;
        seen.insert(id);
        if (!std::isfinite(row.report.rhs)) continue;
        ++checked;
        if (!row.report.holds) ++failed;
    }
    const bool pass = failed == 0 && r.aggregate.violations == 0 && seen == required && t < 600.0;
    return {pass, fmt("%.0f finite-rhs reports over 1000 instances, %.0f violations, %.1f s", static_cast<double>(checked),
                      static_cast<double>(failed), t)};
}

Outcome criterion4() {
    // matched divergence: feed the same epsilon to both formulas, taken from
    // the JS level of a fuzzed GAIL fit
    double lo = kInf;
    double hi = -kInf;
    for (Seed seed = 0; seed < 10; ++seed) {
        const TabularMdp mdp = fuzz_mdp(derive_seed(400, seed), 4, 2, 0.9);
        const Policy e = fuzz_policy(derive_seed(401, seed), 4, 2);
        const Matrix target = sample_occupancy(mdp, e, 100, derive_seed(402, seed)).empirical_rho(4, 2);
        const Policy pi = gail_fit_lp(mdp, discriminators::indicator_class(8), target).policy;
        const double eps = f_divergence(FDivKind::JS, flatten(state_action_occupancy(mdp, pi).rho),
                                        flatten(state_action_occupancy(mdp, e).rho));
        if (!(eps > 0.0)) continue;
        for (double g : {0.5, 0.9, 0.99}) {
            const double c = thm1_rhs(eps, mdp.r_max(), g) / lemma1_rhs(FDivKind::JS, eps, mdp.r_max(), g) * (1.0 - g);
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
    }
    const double spread = (hi - lo) / lo;
    return {spread <= 0.01, fmt("c in [%.6f, %.6f], relative spread %.3g", lo, hi, spread)};
}

Outcome criterion5() {
    lab::ExperimentConfig c;
    c.seed = 77;
    c.campaign = lab::Campaign::PacCor1;
    c.trials = 1500;
    c.n_states_min = c.n_states_max = 4;
    c.n_actions_min = c.n_actions_max = 2;
    c.gammas = {0.5};
    c.sample_sizes = {20, 50, 100};
    c.delta = 0.1;
    const auto start = Clock::now();
    const lab::CampaignReport r = lab::run_campaign(c);
    const double t = seconds_since(start);
    std::map<std::size_t, std::pair<int, int>> tally; // m -> (exceedances, total)
    bool sized = true;
    for (const auto& row : r.rows) {
        if (row.report.id != BoundId::COR1 || !row.m) continue;
        sized = sized && row.report.inputs.at("pi_class_size") == 16.0;
        auto& [bad, total] = tally[*row.m];
        ++total;
        if (!row.report.holds) ++bad;
    }
    double worst = 0.0;
    bool counts = tally.size() == 3;
    for (const auto& [m, bt] : tally) {
        counts = counts && bt.second == 500;
        worst = std::max(worst, static_cast<double>(bt.first) / bt.second);
    }
    return {counts && sized && worst <= 0.14 && t < 300.0,
            fmt("max exceedance frequency %.3f over m in {20, 50, 100}, %.1f s", worst, t)};
}

Outcome criterion6() {
    const TabularMdp mdp = fuzz_mdp(606, 4, 2, 0.9);
    const Policy e = fuzz_policy(607, 4, 2);
    const Vector r = flatten(mdp.reward()) / mdp.r_max();
    const DiscriminatorClass dclass = discriminators::random_symmetric_class(8, 7, 1.0, 608, false, {r});
    bool ok = dclass.size() == 16 && dclass.delta() == 1.0;
    double worst_freq = 0.0;
    double worst_term = 0.0;
    for (std::size_t m : {std::size_t{50}, std::size_t{200}}) {
        int lem2_bad = 0;
        int thm2_bad = 0;
        for (Seed k = 0; k < 200; ++k) {
            const GeneralizationTrial t = run_generalization_trial(
                mdp, dclass, e, m, 0.1, RademacherMonteCarlo{2000, derive_seed(609, k)}, derive_seed(610 + m, k));
            if (!t.lemma2.holds) ++lem2_bad;
            if (!t.thm2.holds) ++thm2_bad;
            const double third = t.lemma2.inputs.at("estm") - 2.0 * t.lemma2.inputs.at("rademacher_e") -
                                 2.0 * t.lemma2.inputs.at("rademacher_i");
            const double scalar = 12.0 * 1.0 * std::sqrt(std::log(2.0 / 0.1) / static_cast<double>(m));
            worst_term = std::max(worst_term, std::abs(third - scalar));
        }
        worst_freq = std::max({worst_freq, lem2_bad / 200.0, thm2_bad / 200.0});
    }
    worst_term = std::max(worst_term, std::abs(estm_confidence_term(1.0, 50, 0.1) - 12.0 * std::sqrt(std::log(20.0) / 50.0)));
    ok = ok && worst_freq <= 0.15 && worst_term <= 1e-6;
    return {ok, fmt("max violation frequency %.3f, third-term error %.3g", worst_freq, worst_term)};
}

Outcome criterion7() {
    int bad = 0;
    double occ = 0.0, rad_z = 0.0, lp = 0.0, g_js = 0.0, g_env = 0.0;
    for (Seed s = 0; s < 50; ++s) {
        const int S = 2 + static_cast<int>(s % 7);
        const int A = 1 + static_cast<int>(s % 4);
        const TabularMdp mdp = fuzz_mdp(derive_seed(700, s), S, A, 0.99);
        const Policy pi = fuzz_policy(derive_seed(701, s), S, A);
        occ = std::max(occ, (state_occupancy(mdp, pi) - testing::geometric_series_occupancy(mdp, pi)).cwiseAbs().maxCoeff());

        const int n = 3 + static_cast<int>(s % 5);
        const DiscriminatorClass dclass = discriminators::random_symmetric_class(n, 4, 1.0, derive_seed(702, s), s % 2 == 0);
        Rng rng(derive_seed(703, s));
        std::vector<int> pts;
        for (int i = 0; i < 10; ++i) pts.push_back(static_cast<int>(rng() % static_cast<Seed>(n)));
        const double exact = empirical_rademacher(dclass, pts, RademacherExact{}).value;
        const double brute = testing::brute_force_rademacher(dclass.members(), pts);
        const RademacherEstimate mc = empirical_rademacher(dclass, pts, RademacherMonteCarlo{20000, derive_seed(704, s)});
        if (std::abs(exact - brute) > 1e-12) ++bad;
        rad_z = std::max(rad_z, std::abs(mc.value - exact) / mc.std_error);

        std::vector<double> pos;
        for (int i = 0; i < n; ++i) pos.push_back(5.0 * uniform01(rng));
        const MetricTable metric = MetricTable::line(pos);
        const Vector mu = testing::fuzz_distribution(derive_seed(705, s), n);
        const Vector nu = testing::fuzz_distribution(derive_seed(706, s), n);
        lp = std::max(lp, std::abs(wasserstein_1(metric, mu, nu).cost - testing::min_cost_flow_transport(metric.distances(), mu, nu)));

        const TabularMdp small = fuzz_mdp(derive_seed(707, s), 3, 2, 0.9);
        const Policy pd = fuzz_policy(derive_seed(708, s), 3, 2);
        const Matrix target = state_action_occupancy(small, fuzz_policy(derive_seed(709, s), 3, 2)).rho;
        Matrix logits(3, 2);
        Matrix env_logits(6, 3);
        for (Eigen::Index i = 0; i < logits.size(); ++i) logits.data()[i] = 2.0 * uniform01(rng) - 1.0;
        for (Eigen::Index i = 0; i < env_logits.size(); ++i) env_logits.data()[i] = 2.0 * uniform01(rng) - 1.0;
        const Matrix fd = testing::finite_difference(
            [&](const Matrix& x) { return gail_js_objective(small, target, x).value; }, logits);
        g_js = std::max(g_js, (gail_js_objective(small, target, logits).gradient - fd).cwiseAbs().maxCoeff());
        const Matrix fd_env = testing::finite_difference(
            [&](const Matrix& x) { return env_js_objective(small, pd, x).value; }, env_logits);
        g_env = std::max(g_env, (env_js_objective(small, pd, env_logits).gradient - fd_env).cwiseAbs().maxCoeff());
    }
    const bool pass = bad == 0 && occ <= 1e-8 && rad_z <= 4.0 && lp <= 1e-6 && g_js <= 1e-5 && g_env <= 1e-5;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "50 instances each: occupancy %.2g, rademacher max |z| %.2f, transport %.2g, gail grad %.2g, env grad %.2g",
                  occ, rad_z, lp, g_js, g_env);
    return {pass, buf};
}

Outcome criterion8() {
    int invalid = 0;
    double thm3_lo = kInf, thm3_hi = -kInf, lem3_lo = kInf, lem3_hi = -kInf;
    for (Seed s = 0; s < 20; ++s) {
        for (double g : {0.9, 0.99}) {
            const TabularMdp mdp = fuzz_mdp(derive_seed(800, s), 6, 2, g);
            const Policy pd = fuzz_policy(derive_seed(801, s), 6, 2);
            DirectJs mode;
            mode.steps = 30;
            const EnvFitResult fit = gail_env_fit(mdp, pd, discriminators::zero_class(1), mode);
            const BoundReport t3 = check_thm3(mdp, fit.model, pd, pd);
            const BoundReport l3 = check_lemma3(mdp, fit.model, pd, pd);
            const double lhs = std::abs(eval_in_model(fit.model, mdp, pd) - policy_value(mdp, pd));
            if (!t3.holds || !l3.holds || t3.inputs.at("eps_pi") != 0.0 || std::abs(t3.lhs - lhs) > 1e-12) ++invalid;
            const double em_js = t3.inputs.at("eps_m");
            const double em_kl = l3.inputs.at("eps_m");
            const double c_thm3 = t3.rhs / std::sqrt(em_js) * (1.0 - g);
            const double c_lem3 = l3.rhs / std::sqrt(em_kl) * (1.0 - g) * (1.0 - g) / g;
            thm3_lo = std::min(thm3_lo, c_thm3);
            thm3_hi = std::max(thm3_hi, c_thm3);
            lem3_lo = std::min(lem3_lo, c_lem3);
            lem3_hi = std::max(lem3_hi, c_lem3);
        }
    }
    const double s3 = (thm3_hi - thm3_lo) / thm3_lo;
    const double sl = (lem3_hi - lem3_lo) / lem3_lo;
    return {invalid == 0 && s3 <= 0.01 && sl <= 0.01,
            fmt("%.0f invalid, THM3 coefficient spread %.3g, LEM3 coefficient spread %.3g", invalid, s3, sl)};
}

std::string campaign_csv(lab::ExperimentConfig c, const char* threads) {
    setenv("LAB_THREADS", threads, 1);
    const std::string csv = lab::to_csv(lab::run_campaign(c));
    unsetenv("LAB_THREADS");
    return csv;
}

Outcome criterion9() {
    int mismatches = 0;
    for (lab::Campaign k : {lab::Campaign::BcPolicy, lab::Campaign::GailPolicy, lab::Campaign::EnvBc,
                            lab::Campaign::EnvGail, lab::Campaign::BoundsAll, lab::Campaign::Worstcase,
                            lab::Campaign::PacCor1}) {
        lab::ExperimentConfig c;
        c.seed = 99;
        c.campaign = k;
        c.trials = 24;
        c.sample_sizes = {30, 80};
        const std::string a = campaign_csv(c, "1");
        const std::string b = campaign_csv(c, "1");
        const std::string p = campaign_csv(c, "4");
        if (a != b || a != p) ++mismatches;
    }
    return {mismatches == 0, fmt("%.0f of 7 campaigns differ across reruns or thread counts", mismatches)};
}

} // namespace

int main() {
    const std::function<Outcome()> criteria[] = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                                 criterion6, criterion7, criterion8, criterion9};
    int failures = 0;
    for (int i = 0; i < 9; ++i) {
        Outcome o;
        try {
            o = criteria[i]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::printf("%s criterion %d: %s\n", o.pass ? "PASS" : "FAIL", i + 1, o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
