#include "imlab/lab.hpp"

#include "imlab/discriminators.hpp"
#include "imlab/env_learning.hpp"
#include "imlab/imitators.hpp"
#include "imlab/worstcase.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <random>
#include <sstream>
#include <thread>

namespace imlab::lab {

Vector random_distribution(int n, double alpha, Rng& rng) {
    std::gamma_distribution<double> draw(alpha, 1.0);
    Vector v(n);
    for (int attempt = 0; attempt < 100; ++attempt) {
        for (int i = 0; i < n; ++i) v[i] = draw(rng);
        const double total = v.sum();
        if (total > 0.0 && std::isfinite(total)) return v / total;
    }
    // every draw underflowed; only reachable for absurdly small alpha
    Vector point = Vector::Zero(n);
    point[static_cast<int>(rng() % static_cast<unsigned>(n))] = 1.0;
    return point;
}

Policy random_policy(int n_states, int n_actions, double alpha, Rng& rng) {
    Matrix table(n_states, n_actions);
    for (int s = 0; s < n_states; ++s) table.row(s) = random_distribution(n_actions, alpha, rng).transpose();
    return Policy(table);
}

TabularMdp random_mdp(const MdpFamily& family, Seed seed) {
    if (family.n_states < 1 || family.n_actions < 1) throw ValidationError("random_mdp: sizes must be positive");
    if (!(family.dirichlet_alpha > 0.0)) throw ValidationError("random_mdp: dirichlet_alpha must be > 0");
    if (!(family.reward_scale >= 0.0)) throw ValidationError("random_mdp: reward_scale must be >= 0");
    const int S = family.n_states;
    const int A = family.n_actions;
    Rng rng(seed);
    Matrix transition(S * A, S);
    for (int z = 0; z < S * A; ++z) transition.row(z) = random_distribution(S, family.dirichlet_alpha, rng).transpose();
    Matrix reward(S, A);
    for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a) reward(s, a) = family.reward_scale * (2.0 * uniform01(rng) - 1.0);
    Vector d0 = random_distribution(S, family.dirichlet_alpha, rng);
    return {S, A, std::move(transition), std::move(reward), family.reward_scale, family.gamma, std::move(d0)};
}

namespace {

constexpr std::array<std::pair<Campaign, std::string_view>, 7> kCampaigns{{
    {Campaign::BcPolicy, "bc_policy"},
    {Campaign::GailPolicy, "gail_policy"},
    {Campaign::EnvBc, "env_bc"},
    {Campaign::EnvGail, "env_gail"},
    {Campaign::BoundsAll, "bounds_all"},
    {Campaign::Worstcase, "worstcase"},
    {Campaign::PacCor1, "pac_cor1"},
}};

} // namespace

std::string_view to_string(Campaign c) {
    for (const auto& [key, name] : kCampaigns)
        if (key == c) return name;
    return "?";
}

Campaign campaign_from_string(std::string_view name) {
    for (const auto& [key, label] : kCampaigns)
        if (label == name) return key;
    throw ValidationError("unknown campaign: " + std::string(name));
}

namespace {

using io::Json;

void size_range(const Json& j, const char* key, int& lo, int& hi) {
    if (!j.contains(key)) return;
    const Json& v = j.at(key);
    if (v.is_number_integer()) {
        lo = hi = v.get<int>();
    } else if (v.is_array() && v.size() == 2 && v[0].is_number_integer() && v[1].is_number_integer()) {
        lo = v[0].get<int>();
        hi = v[1].get<int>();
    } else {
        throw ValidationError(std::string("mdp_family.") + key + ": expected an integer or [min, max]");
    }
    if (lo < 1 || hi < lo) throw ValidationError(std::string("mdp_family.") + key + ": invalid range");
}

double real_field(const Json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw ValidationError(std::string(key) + ": expected a number");
    return j.at(key).get<double>();
}

long int_field(const Json& j, const char* key, long fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number_integer()) throw ValidationError(std::string(key) + ": expected an integer");
    return j.at(key).get<long>();
}

} // namespace

ExperimentConfig config_from_json(const Json& j) {
    if (!j.is_object()) throw ValidationError("config: expected an object");
    ExperimentConfig c;
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_integer() || j.at("seed").get<long long>() < 0)
            throw ValidationError("seed: expected a nonnegative integer");
        c.seed = j.at("seed").get<Seed>();
    }
    if (!j.contains("campaign") || !j.at("campaign").is_string()) throw ValidationError("campaign: required string");
    c.campaign = campaign_from_string(j.at("campaign").get<std::string>());
    const long trials = int_field(j, "trials", 1);
    if (trials < 1) throw ValidationError("trials must be >= 1");
    c.trials = static_cast<std::size_t>(trials);

    if (j.contains("mdp_family")) {
        const Json& f = j.at("mdp_family");
        if (!f.is_object()) throw ValidationError("mdp_family: expected an object");
        size_range(f, "n_states", c.n_states_min, c.n_states_max);
        size_range(f, "n_actions", c.n_actions_min, c.n_actions_max);
        if (f.contains("gamma")) {
            const Json& g = f.at("gamma");
            c.gammas.clear();
            if (g.is_number()) {
                c.gammas.push_back(g.get<double>());
            } else if (g.is_array() && !g.empty()) {
                for (const auto& x : g) {
                    if (!x.is_number()) throw ValidationError("mdp_family.gamma: expected numbers");
                    c.gammas.push_back(x.get<double>());
                }
            } else {
                throw ValidationError("mdp_family.gamma: expected a number or a nonempty list");
            }
        }
        c.dirichlet_alpha = real_field(f, "dirichlet_alpha", c.dirichlet_alpha);
        c.reward_scale = real_field(f, "reward_scale", c.reward_scale);
    }
    for (double g : c.gammas)
        if (!(g >= 0.0 && g < 1.0)) throw ValidationError("gamma entries must lie in [0, 1)");
    if (!(c.dirichlet_alpha > 0.0)) throw ValidationError("dirichlet_alpha must be > 0");
    if (!(c.reward_scale >= 0.0)) throw ValidationError("reward_scale must be >= 0");

    if (j.contains("sample_sizes")) {
        const Json& m = j.at("sample_sizes");
        if (!m.is_array() || m.empty()) throw ValidationError("sample_sizes: expected a nonempty list");
        c.sample_sizes.clear();
        for (const auto& x : m) {
            if (!x.is_number_integer() || x.get<long>() < 1) throw ValidationError("sample_sizes: entries must be >= 1");
            c.sample_sizes.push_back(x.get<std::size_t>());
        }
    }
    c.delta = real_field(j, "delta", c.delta);
    if (!(c.delta > 0.0 && c.delta < 1.0)) throw ValidationError("delta must lie in (0, 1)");

    if (j.contains("output")) {
        const Json& o = j.at("output");
        if (o.is_string()) {
            c.output = o.get<std::string>();
        } else if (o.is_object()) {
            if (o.contains("path")) c.output = o.at("path").get<std::string>();
            if (o.contains("format")) {
                const std::string f = o.at("format").get<std::string>();
                if (f == "csv")
                    c.format = OutputFormat::Csv;
                else if (f == "json")
                    c.format = OutputFormat::Json;
                else
                    throw ValidationError("output.format must be csv or json");
            }
        } else {
            throw ValidationError("output: expected a path or {path, format}");
        }
    }

    if (j.contains("options")) {
        const Json& o = j.at("options");
        c.js_steps = static_cast<int>(int_field(o, "js_steps", c.js_steps));
        c.js_step_size = real_field(o, "js_step_size", c.js_step_size);
        c.env_steps = static_cast<int>(int_field(o, "env_steps", c.env_steps));
        c.bc_laplace = real_field(o, "bc_laplace", c.bc_laplace);
        c.env_laplace = real_field(o, "env_laplace", c.env_laplace);
        c.rademacher_draws = static_cast<std::size_t>(int_field(o, "rademacher_draws", static_cast<long>(c.rademacher_draws)));
        c.class_pairs = static_cast<std::size_t>(int_field(o, "class_pairs", static_cast<long>(c.class_pairs)));
    }
    if (c.js_steps < 1 || c.env_steps < 1 || !(c.js_step_size > 0.0)) throw ValidationError("options: invalid step settings");
    if (c.bc_laplace < 0.0 || c.env_laplace < 0.0) throw ValidationError("options: laplace must be >= 0");
    if (c.rademacher_draws < 1) throw ValidationError("options.rademacher_draws must be >= 1");
    return c;
}

Json to_json(const ExperimentConfig& c) {
    Json out{{"seed", c.seed},
             {"campaign", std::string(to_string(c.campaign))},
             {"trials", c.trials},
             {"mdp_family",
              {{"n_states", {c.n_states_min, c.n_states_max}},
               {"n_actions", {c.n_actions_min, c.n_actions_max}},
               {"gamma", c.gammas},
               {"dirichlet_alpha", c.dirichlet_alpha},
               {"reward_scale", c.reward_scale}}},
             {"sample_sizes", c.sample_sizes},
             {"delta", c.delta},
             {"options",
              {{"js_steps", c.js_steps},
               {"js_step_size", c.js_step_size},
               {"env_steps", c.env_steps},
               {"bc_laplace", c.bc_laplace},
               {"env_laplace", c.env_laplace},
               {"rademacher_draws", c.rademacher_draws},
               {"class_pairs", c.class_pairs}}}};
    if (c.output)
        out["output"] = {{"path", c.output->string()}, {"format", c.format == OutputFormat::Csv ? "csv" : "json"}};
    return out;
}

bool is_probabilistic(BoundId id) { return id == BoundId::LEM2 || id == BoundId::THM2 || id == BoundId::COR1; }

namespace {

constexpr std::array<FDivKind, 5> kLemma1Kinds{FDivKind::JS, FDivKind::KL, FDivKind::ReverseKL,
                                               FDivKind::PearsonChi2, FDivKind::SquaredHellinger};

class TrialRunner {
public:
    TrialRunner(const ExperimentConfig& config, std::size_t trial)
        : config_(config), trial_(trial), seed_(derive_seed(config.seed, trial)), rng_(seed_) {
        const std::size_t G = config.gammas.size();
        gamma_ = config.gammas[trial % G];
        m_ = config.sample_sizes[(trial / G) % config.sample_sizes.size()];
    }

    std::vector<CampaignRow> run() {
        switch (config_.campaign) {
        case Campaign::BcPolicy: {
            const TabularMdp mdp = make_mdp();
            bc_block(mdp, expert_for(mdp));
            break;
        }
        case Campaign::GailPolicy: {
            const TabularMdp mdp = make_mdp();
            const Policy pi_e = expert_for(mdp);
            gail_block(mdp, pi_e);
            generalization_block(mdp, pi_e);
            break;
        }
        case Campaign::EnvBc: {
            const TabularMdp mdp = make_mdp();
            env_bc_block(mdp, expert_for(mdp), probe_for(mdp));
            break;
        }
        case Campaign::EnvGail: {
            const TabularMdp mdp = make_mdp();
            env_gail_block(mdp, expert_for(mdp), probe_for(mdp));
            break;
        }
        case Campaign::BoundsAll: {
            const TabularMdp mdp = make_mdp();
            const Policy pi_e = expert_for(mdp);
            const Policy probe = probe_for(mdp);
            bc_block(mdp, pi_e);
            gail_block(mdp, pi_e);
            generalization_block(mdp, pi_e);
            env_bc_block(mdp, pi_e, probe);
            env_gail_block(mdp, pi_e, probe);
            divergence_block(mdp.n_pairs());
            break;
        }
        case Campaign::Worstcase: worstcase_block(); break;
        case Campaign::PacCor1: pac_block(); break;
        }
        return std::move(rows_);
    }

private:
    int draw_size(int lo, int hi) { return lo + static_cast<int>(rng_() % static_cast<Seed>(hi - lo + 1)); }

    TabularMdp make_mdp() {
        MdpFamily family;
        family.n_states = draw_size(config_.n_states_min, config_.n_states_max);
        family.n_actions = draw_size(config_.n_actions_min, config_.n_actions_max);
        family.gamma = gamma_;
        family.dirichlet_alpha = config_.dirichlet_alpha;
        family.reward_scale = config_.reward_scale;
        return random_mdp(family, derive_seed(seed_, 1));
    }

    Policy expert_for(const TabularMdp& mdp) { return random_policy(mdp.n_states(), mdp.n_actions(), 1.0, rng_); }

    /// Noise mixed into pi_D to form the evaluation policy of the model-bias bounds.
    Policy probe_for(const TabularMdp& mdp) {
        return random_policy(mdp.n_states(), mdp.n_actions(), 1.0, rng_);
    }

    void add(const BoundReport& report, const std::string& algorithm, std::optional<double> train_metric,
             bool sampled = true) {
        CampaignRow row;
        row.campaign = std::string(to_string(config_.campaign));
        row.trial = trial_;
        row.seed = seed_;
        row.gamma = gamma_;
        row.report = report;
        if (sampled) {
            row.m = m_;
            row.delta = config_.delta;
        }
        row.algorithm = algorithm;
        row.train_metric = train_metric;
        rows_.push_back(std::move(row));
    }

    void bc_block(const TabularMdp& mdp, const Policy& pi_e) {
        const Demonstrations demos = sample_occupancy(mdp, pi_e, m_, derive_seed(seed_, 2));
        BcOptions options;
        options.laplace = config_.bc_laplace;
        const ImitationResult fit = bc_fit(demos, mdp.n_states(), mdp.n_actions(), options);
        add(check_thm1(mdp, pi_e, fit.policy), "bc", fit.train_metric);
        for (const auto& r : check_lemma_a_chain(mdp, pi_e, fit.policy)) add(r, "bc", fit.train_metric);
    }

    void gail_block(const TabularMdp& mdp, const Policy& pi_e) {
        const Demonstrations demos = sample_occupancy(mdp, pi_e, m_, derive_seed(seed_, 3));
        const Matrix target = demos.empirical_rho(mdp.n_states(), mdp.n_actions());
        const ImitationResult lp = gail_fit_lp(mdp, discriminators::indicator_class(mdp.n_pairs()), target);
        for (FDivKind kind : kLemma1Kinds) add(check_lemma1(mdp, pi_e, lp.policy, kind), "gail_lp", lp.train_metric);
        GailJsOptions js;
        js.steps = config_.js_steps;
        js.step_size = config_.js_step_size;
        js.seed = derive_seed(seed_, 4);
        const ImitationResult fit = gail_fit_js(mdp, target, js);
        for (FDivKind kind : kLemma1Kinds) add(check_lemma1(mdp, pi_e, fit.policy, kind), "gail_js", fit.train_metric);
    }

    void generalization_block(const TabularMdp& mdp, const Policy& pi_e) {
        const Vector r = flatten(mdp.reward());
        const double scale = mdp.r_max() > 0.0 ? mdp.r_max() : 1.0;
        const DiscriminatorClass dclass = discriminators::random_symmetric_class(
            mdp.n_pairs(), config_.class_pairs, 1.0, derive_seed(seed_, 5), false, {r / scale});
        RademacherMode mode = RademacherMonteCarlo{config_.rademacher_draws, derive_seed(seed_, 6)};
        if (m_ <= kMaxExactRademacher) mode = RademacherExact{};
        const GeneralizationTrial t =
            run_generalization_trial(mdp, dclass, pi_e, m_, config_.delta, mode, derive_seed(seed_, 7));
        add(t.lemma2, "gail_lp", t.appr);
        add(t.thm2, "gail_lp", t.appr);
    }

    Policy mixed_probe(const Policy& pi_d, const Policy& noise) {
        return Policy(0.7 * pi_d.table() + 0.3 * noise.table());
    }

    void env_bc_block(const TabularMdp& mdp, const Policy& pi_d, const Policy& noise) {
        const Demonstrations triples = sample_occupancy(mdp, pi_d, m_, derive_seed(seed_, 8), true);
        const LearnedModel model = bc_env_fit(triples, mdp.n_states(), mdp.n_actions(), config_.env_laplace);
        const double kl = model_kl_error(mdp, model, pi_d);
        add(check_lemma_c1(mdp, model, pi_d), "bc_env", kl);
        add(check_lemma3(mdp, model, pi_d, mixed_probe(pi_d, noise)), "bc_env", kl);
    }

    void env_gail_block(const TabularMdp& mdp, const Policy& pi_d, const Policy& noise) {
        DirectJs mode;
        mode.steps = config_.env_steps;
        mode.step_size = config_.js_step_size;
        mode.seed = derive_seed(seed_, 9);
        // Direct mode does not consult the class.
        const EnvFitResult fit = gail_env_fit(mdp, pi_d, discriminators::zero_class(mdp.n_pairs() * mdp.n_states()), mode);
        const Policy probe = mixed_probe(pi_d, noise);
        add(check_thm3(mdp, fit.model, pi_d, probe), "gail_env_js", fit.js, false);
        add(check_lemma_c1(mdp, fit.model, pi_d), "gail_env_js", fit.js, false);
        add(check_lemma3(mdp, fit.model, pi_d, probe), "gail_env_js", fit.js, false);
    }

    void divergence_block(int n) {
        const Vector mu = random_distribution(n, 1.0, rng_);
        const Vector nu = random_distribution(n, 1.0, rng_);
        add(check_pinsker(mu, nu), "none", std::nullopt, false);
        add(check_js_tv(mu, nu), "none", std::nullopt, false);
    }

    void worstcase_block() {
        const HardInstance inst = hard_instance(gamma_);
        add(check_thm1(inst.mdp, inst.pi_e, inst.pi_i), "hard_instance", std::nullopt, false);
        for (const auto& r : check_lemma_a_chain(inst.mdp, inst.pi_e, inst.pi_i))
            add(r, "hard_instance", std::nullopt, false);
        for (FDivKind kind : kLemma1Kinds)
            add(check_lemma1(inst.mdp, inst.pi_e, inst.pi_i, kind), "hard_instance", std::nullopt, false);
    }

    void pac_block() {
        const TabularMdp mdp = make_mdp();
        const int S = mdp.n_states();
        const int A = mdp.n_actions();
        std::vector<int> actions(static_cast<std::size_t>(S));
        for (auto& a : actions) a = static_cast<int>(rng_() % static_cast<Seed>(A));
        const Policy pi_e = Policy::deterministic(actions, A);
        const Demonstrations demos = sample_occupancy(mdp, pi_e, m_, derive_seed(seed_, 10));
        BcOptions options;
        options.fallback = BcFallback::argmax_smoothed(0.0);
        const ImitationResult fit = bc_fit(demos, S, A, options);
        const double class_size = std::pow(static_cast<double>(A), S);
        add(check_cor1_instance(mdp, pi_e, fit.policy, static_cast<std::size_t>(class_size), m_, config_.delta), "bc",
            fit.train_metric);
    }

    const ExperimentConfig& config_;
    std::size_t trial_;
    Seed seed_;
    Rng rng_;
    double gamma_ = 0.0;
    std::size_t m_ = 1;
    std::vector<CampaignRow> rows_;
};

} // namespace

Aggregate aggregate_rows(const std::vector<CampaignRow>& rows) {
    Aggregate agg;
    for (const auto& row : rows) {
        ++agg.reports;
        const bool violated = !row.report.holds && std::isfinite(row.report.rhs);
        if (is_probabilistic(row.report.id)) {
            ++agg.probabilistic_reports;
            if (violated) ++agg.probabilistic_violations;
        } else if (violated) {
            ++agg.violations;
            agg.max_violation = std::max(agg.max_violation, std::abs(row.report.slack));
        }
    }
    return agg;
}

unsigned worker_threads() {
    if (const char* env = std::getenv("LAB_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

CampaignReport run_campaign(const ExperimentConfig& config) {
    if (config.trials < 1) throw ValidationError("trials must be >= 1");
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::vector<CampaignRow>> per_trial(config.trials);
    std::vector<std::exception_ptr> errors(config.trials);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next++; t < config.trials; t = next++) {
            try {
                per_trial[t] = TrialRunner(config, t).run();
            } catch (...) {
                errors[t] = std::current_exception();
            }
        }
    };
    const unsigned n_workers = static_cast<unsigned>(std::min<std::size_t>(worker_threads(), config.trials));
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < n_workers; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    CampaignReport report;
    report.config = to_json(config);
    for (auto& rows : per_trial)
        for (auto& row : rows) report.rows.push_back(std::move(row));
    report.aggregate = aggregate_rows(report.rows);
    report.aggregate.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (config.output) emit_report(report, config.format, *config.output);
    return report;
}

std::string to_csv(const CampaignReport& report) {
    std::ostringstream out;
    out << "campaign,trial,seed,gamma,bound_id,lhs,rhs,slack,holds,m,delta,algorithm,train_metric\n";
    for (const auto& row : report.rows) {
        out << row.campaign << ',' << row.trial << ',' << row.seed << ',' << io::format_double(row.gamma) << ','
            << to_string(row.report.id) << ',' << io::format_double(row.report.lhs) << ','
            << io::format_double(row.report.rhs) << ',' << io::format_double(row.report.slack) << ','
            << (row.report.holds ? "true" : "false") << ',';
        if (row.m) out << *row.m;
        out << ',';
        if (row.delta) out << io::format_double(*row.delta);
        out << ',' << row.algorithm << ',';
        if (row.train_metric) out << io::format_double(*row.train_metric);
        out << '\n';
    }
    return out.str();
}

Json to_json(const CampaignReport& report) {
    Json rows = Json::array();
    for (const auto& row : report.rows) {
        Json r{{"campaign", row.campaign},
               {"trial", row.trial},
               {"seed", row.seed},
               {"gamma", row.gamma},
               {"algorithm", row.algorithm},
               {"report", io::to_json(row.report)}};
        if (row.m) r["m"] = *row.m;
        if (row.delta) r["delta"] = *row.delta;
        if (row.train_metric) r["train_metric"] = io::number_to_json(*row.train_metric);
        rows.push_back(std::move(r));
    }
    const Aggregate& a = report.aggregate;
    return {{"config", report.config},
            {"rows", std::move(rows)},
            {"aggregate",
             {{"reports", a.reports},
              {"violations", a.violations},
              {"max_violation", a.max_violation},
              {"probabilistic_reports", a.probabilistic_reports},
              {"probabilistic_violations", a.probabilistic_violations},
              {"runtime_seconds", a.runtime_seconds}}}};
}

CampaignReport campaign_report_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("rows")) throw ValidationError("campaign report: expected {config, rows}");
    CampaignReport report;
    report.config = j.value("config", Json::object());
    for (const auto& r : j.at("rows")) {
        CampaignRow row;
        row.campaign = r.at("campaign").get<std::string>();
        row.trial = r.at("trial").get<std::size_t>();
        row.seed = r.at("seed").get<Seed>();
        row.gamma = io::number_from_json(r.at("gamma"));
        row.algorithm = r.value("algorithm", std::string());
        row.report = io::report_from_json(r.at("report"));
        if (r.contains("m")) row.m = r.at("m").get<std::size_t>();
        if (r.contains("delta")) row.delta = io::number_from_json(r.at("delta"));
        if (r.contains("train_metric")) row.train_metric = io::number_from_json(r.at("train_metric"));
        report.rows.push_back(std::move(row));
    }
    report.aggregate = aggregate_rows(report.rows);
    if (j.contains("aggregate") && j.at("aggregate").contains("runtime_seconds"))
        report.aggregate.runtime_seconds = j.at("aggregate").at("runtime_seconds").get<double>();
    return report;
}

void emit_report(const CampaignReport& report, OutputFormat format, const std::filesystem::path& path) {
    if (format == OutputFormat::Csv)
        io::write_text_file(path, to_csv(report));
    else
        io::write_text_file(path, to_json(report).dump(2) + "\n");
}

} // namespace imlab::lab
