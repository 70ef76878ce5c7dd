#pragma once

#include "imlab/bounds.hpp"
#include "imlab/divergences.hpp"
#include "imlab/env_learning.hpp"
#include "imlab/imitators.hpp"
#include "imlab/mdp.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>

namespace imlab::io {

using Json = nlohmann::json;

/// Shortest decimal text that parses back to the same double; "+inf",
/// "-inf" and "nan" for non-finite values.
std::string format_double(double value);
double parse_double(const std::string& text);

/// Number for finite values, the format_double string otherwise.
Json number_to_json(double value);
/// Accepts numbers and the strings produced by number_to_json.
double number_from_json(const Json& j);

Json to_json(const TabularMdp& mdp);
TabularMdp mdp_from_json(const Json& j);

Json to_json(const Policy& pi);
/// Accepts a bare S x A array or an object with a "policy" or "table" key.
Policy policy_from_json(const Json& j);

Json to_json(const DiscriminatorClass& dclass);
DiscriminatorClass class_from_json(const Json& j);

Json to_json(const MetricTable& metric);
MetricTable metric_from_json(const Json& j);

Json to_json(const BoundReport& report);
BoundReport report_from_json(const Json& j);

Json to_json(const ImitationResult& result);

/// Row-major (s, a, s') tensor.
Json to_json(const LearnedModel& model);
LearnedModel model_from_json(const Json& j);

Json read_json_file(const std::filesystem::path& path);
/// Throws std::runtime_error when the file cannot be written.
void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace imlab::io
