#pragma once

#include "imlab/bounds.hpp"
#include "imlab/mdp.hpp"
#include "imlab/rng.hpp"
#include "imlab/serialization.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace imlab::lab {

/// Parameters of one random MDP.
struct MdpFamily {
    int n_states = 4;
    int n_actions = 2;
    double gamma = 0.9;
    double dirichlet_alpha = 1.0;
    double reward_scale = 1.0;
};

/// Transition rows and d0 drawn i.i.d. Dirichlet(alpha), rewards uniform in
/// [-reward_scale, reward_scale], r_max = reward_scale.
TabularMdp random_mdp(const MdpFamily& family, Seed seed);

/// Rows i.i.d. Dirichlet(alpha).
Policy random_policy(int n_states, int n_actions, double alpha, Rng& rng);

Vector random_distribution(int n, double alpha, Rng& rng);

enum class Campaign { BcPolicy, GailPolicy, EnvBc, EnvGail, BoundsAll, Worstcase, PacCor1 };

std::string_view to_string(Campaign c);
Campaign campaign_from_string(std::string_view name);

enum class OutputFormat { Csv, Json };

struct ExperimentConfig {
    Seed seed = 0;
    Campaign campaign = Campaign::BoundsAll;
    std::size_t trials = 1;
    /// Sizes are drawn per trial uniformly from [min, max].
    int n_states_min = 2;
    int n_states_max = 8;
    int n_actions_min = 2;
    int n_actions_max = 4;
    std::vector<double> gammas{0.5, 0.8, 0.9, 0.99};
    double dirichlet_alpha = 1.0;
    double reward_scale = 1.0;
    std::vector<std::size_t> sample_sizes{100};
    double delta = 0.1;
    std::optional<std::filesystem::path> output;
    OutputFormat format = OutputFormat::Csv;

    int js_steps = 200;
    double js_step_size = 1.0;
    int env_steps = 200;
    double bc_laplace = 0.5;
    double env_laplace = 0.5;
    std::size_t rademacher_draws = 2000;
    std::size_t class_pairs = 7; ///< random +-pairs added next to +-r/r_max in LEM2/THM2
};

/// Parses and validates; throws ValidationError on any bad field.
ExperimentConfig config_from_json(const io::Json& j);
io::Json to_json(const ExperimentConfig& config);

struct CampaignRow {
    std::string campaign;
    std::size_t trial = 0;
    Seed seed = 0;
    double gamma = 0.0;
    BoundReport report;
    std::optional<std::size_t> m;
    std::optional<double> delta;
    std::string algorithm;
    std::optional<double> train_metric;
};

/// LEM2, THM2 and COR1 hold with probability 1 - delta; they are tallied
/// separately and never counted as violations.
bool is_probabilistic(BoundId id);

struct Aggregate {
    std::size_t reports = 0;
    std::size_t violations = 0;       ///< deterministic bounds, holds = false, finite rhs
    double max_violation = 0.0;       ///< max |slack| over those
    std::size_t probabilistic_reports = 0;
    std::size_t probabilistic_violations = 0;
    double runtime_seconds = 0.0;
};

struct CampaignReport {
    io::Json config;
    std::vector<CampaignRow> rows;
    Aggregate aggregate;
};

Aggregate aggregate_rows(const std::vector<CampaignRow>& rows);

/// Number of worker threads: LAB_THREADS when set and positive, else the
/// hardware concurrency.
unsigned worker_threads();

/// Runs every trial (in parallel, with counter-derived seeds) and writes the
/// report to config.output when set.
CampaignReport run_campaign(const ExperimentConfig& config);

std::string to_csv(const CampaignReport& report);
io::Json to_json(const CampaignReport& report);
CampaignReport campaign_report_from_json(const io::Json& j);

void emit_report(const CampaignReport& report, OutputFormat format, const std::filesystem::path& path);

} // namespace imlab::lab
