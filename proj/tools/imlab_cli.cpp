// imlab command-line front end.
//
//   imlab run <config.json>
//   imlab verify <mdp.json> <policy_e.json> <policy_i.json> --bound <id>
//   imlab worstcase --gammas 0,0.5,0.9
//   imlab report <raw.json> --format csv
//
// Exit codes: 0 no violations, 1 at least one violation, 2 bad input.

#include "imlab/bounds.hpp"
#include "imlab/lab.hpp"
#include "imlab/serialization.hpp"
#include "imlab/worstcase.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

namespace {

using namespace imlab;

int run_command(const std::string& config_path, const std::string& output_override) {
    lab::ExperimentConfig config = lab::config_from_json(io::read_json_file(config_path));
    if (!output_override.empty()) config.output = output_override;
    const lab::CampaignReport report = lab::run_campaign(config);
    if (!config.output) std::cout << lab::to_csv(report);
    const auto& a = report.aggregate;
    std::cerr << lab::to_string(config.campaign) << ": " << a.reports << " reports, " << a.violations
              << " violations, " << a.probabilistic_violations << "/" << a.probabilistic_reports
              << " probabilistic exceedances, " << a.runtime_seconds << " s\n";
    return a.violations == 0 ? 0 : 1;
}

int verify_command(const std::string& mdp_path, const std::string& pe_path, const std::string& pi_path,
                   const std::string& bound, std::size_t m, double delta) {
    const TabularMdp mdp = io::mdp_from_json(io::read_json_file(mdp_path));
    const Policy pi_e = io::policy_from_json(io::read_json_file(pe_path));
    const Policy pi_i = io::policy_from_json(io::read_json_file(pi_path));

    std::vector<BoundReport> reports;
    const BoundId id = bound_id_from_string(bound);
    switch (id) {
    case BoundId::THM1: reports.push_back(check_thm1(mdp, pi_e, pi_i)); break;
    case BoundId::LEM_A_STATE:
    case BoundId::LEM_A_SA:
    case BoundId::LEM_A_VALUE:
        for (const auto& r : check_lemma_a_chain(mdp, pi_e, pi_i))
            if (r.id == id) reports.push_back(r);
        break;
    case BoundId::LEM1_JS: reports.push_back(check_lemma1(mdp, pi_e, pi_i, FDivKind::JS)); break;
    case BoundId::LEM1_KL: reports.push_back(check_lemma1(mdp, pi_e, pi_i, FDivKind::KL)); break;
    case BoundId::LEM1_RKL: reports.push_back(check_lemma1(mdp, pi_e, pi_i, FDivKind::ReverseKL)); break;
    case BoundId::LEM1_CHI2: reports.push_back(check_lemma1(mdp, pi_e, pi_i, FDivKind::PearsonChi2)); break;
    case BoundId::LEM1_HELLINGER:
        reports.push_back(check_lemma1(mdp, pi_e, pi_i, FDivKind::SquaredHellinger));
        break;
    case BoundId::COR1: {
        const double size = std::pow(static_cast<double>(mdp.n_actions()), mdp.n_states());
        reports.push_back(check_cor1_instance(mdp, pi_e, pi_i, static_cast<std::size_t>(size), m, delta));
        break;
    }
    default:
        throw ValidationError("verify: " + bound +
                              " needs samples or a learned model; use a campaign config instead");
    }
    bool ok = true;
    for (const auto& r : reports) {
        std::cout << io::to_json(r).dump(2) << '\n';
        ok = ok && (r.holds || !std::isfinite(r.rhs));
    }
    return ok ? 0 : 1;
}

std::vector<double> parse_gammas(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(io::parse_double(item));
    }
    if (out.empty()) throw ValidationError("worstcase: empty gamma list");
    return out;
}

int worstcase_command(const std::string& gammas) {
    std::cout << "gamma,v_e,v_i,gap,epsilon,thm1_rhs,ratio\n";
    for (const auto& row : worstcase_sweep(parse_gammas(gammas)))
        std::cout << io::format_double(row.gamma) << ',' << io::format_double(row.v_e) << ','
                  << io::format_double(row.v_i) << ',' << io::format_double(row.gap) << ','
                  << io::format_double(row.epsilon) << ',' << io::format_double(row.thm1_rhs) << ','
                  << io::format_double(row.ratio) << '\n';
    return 0;
}

int report_command(const std::string& raw_path, const std::string& format, const std::string& output) {
    const lab::CampaignReport report = lab::campaign_report_from_json(io::read_json_file(raw_path));
    std::string text;
    if (format == "csv")
        text = lab::to_csv(report);
    else if (format == "json")
        text = lab::to_json(report).dump(2) + "\n";
    else
        throw ValidationError("report: unknown format " + format);
    if (output.empty())
        std::cout << text;
    else
        io::write_text_file(output, text);
    return report.aggregate.violations == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tabular imitation-learning bound laboratory"};
    app.require_subcommand(1);

    std::string config_path, run_output;
    auto* run = app.add_subcommand("run", "Run a campaign from a JSON config");
    run->add_option("config", config_path, "Experiment config")->required()->check(CLI::ExistingFile);
    run->add_option("-o,--output", run_output, "Override the config's output path");

    std::string mdp_path, pe_path, pi_path, bound;
    std::size_t m = 100;
    double delta = 0.1;
    auto* verify = app.add_subcommand("verify", "Check one bound on an MDP and two policies");
    verify->add_option("mdp", mdp_path)->required()->check(CLI::ExistingFile);
    verify->add_option("policy_e", pe_path)->required()->check(CLI::ExistingFile);
    verify->add_option("policy_i", pi_path)->required()->check(CLI::ExistingFile);
    verify->add_option("--bound", bound, "Bound id, e.g. THM1 or LEM1_JS")->required();
    verify->add_option("--m", m, "Sample size (COR1)");
    verify->add_option("--delta", delta, "Confidence (COR1)");

    std::string gammas;
    auto* worst = app.add_subcommand("worstcase", "Discount sweep on the hard instance");
    worst->add_option("--gammas", gammas, "Comma-separated discounts")->required();

    std::string raw_path, format = "csv", report_output;
    auto* report = app.add_subcommand("report", "Convert a JSON campaign report");
    report->add_option("raw", raw_path)->required()->check(CLI::ExistingFile);
    report->add_option("--format", format, "csv or json");
    report->add_option("-o,--output", report_output);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*run) return run_command(config_path, run_output);
        if (*verify) return verify_command(mdp_path, pe_path, pi_path, bound, m, delta);
        if (*worst) return worstcase_command(gammas);
        if (*report) return report_command(raw_path, format, report_output);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
