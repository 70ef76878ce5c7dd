#include "imlab/serialization.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace imlab::io {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "+inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return {buf, res.ptr};
}

double parse_double(const std::string& text) {
    if (text == "+inf" || text == "inf" || text == "Infinity") return kInf;
    if (text == "-inf" || text == "-Infinity") return -kInf;
    if (text == "nan" || text == "NaN") return std::numeric_limits<double>::quiet_NaN();
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw ValidationError("not a number: " + text);
    return value;
}

Json number_to_json(double value) {
    if (std::isfinite(value)) return value;
    return format_double(value);
}

double number_from_json(const Json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return parse_double(j.get<std::string>());
    throw ValidationError("expected a number, got " + j.dump());
}

namespace {

Json vector_json(const Vector& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number_to_json(v[i]));
    return out;
}

Vector vector_from(const Json& j, const char* what) {
    if (!j.is_array()) throw ValidationError(std::string(what) + ": expected an array");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = number_from_json(j[i]);
    return v;
}

Json matrix_json(const Matrix& m) {
    Json out = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vector_json(m.row(r).transpose()));
    return out;
}

Matrix matrix_from(const Json& j, const char* what) {
    if (!j.is_array() || j.empty()) throw ValidationError(std::string(what) + ": expected a nonempty 2D array");
    const std::size_t cols = j[0].size();
    Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (!j[r].is_array() || j[r].size() != cols) throw ShapeError(std::string(what) + ": ragged rows");
        m.row(static_cast<Eigen::Index>(r)) = vector_from(j[r], what).transpose();
    }
    return m;
}

// (S*A) x S transition table <-> S x A x S nested array.
Json tensor_json(const Matrix& transition, int n_states, int n_actions) {
    Json out = Json::array();
    for (int s = 0; s < n_states; ++s) {
        Json per_action = Json::array();
        for (int a = 0; a < n_actions; ++a) per_action.push_back(vector_json(transition.row(s * n_actions + a).transpose()));
        out.push_back(std::move(per_action));
    }
    return out;
}

Matrix tensor_from(const Json& j, int n_states, int n_actions, const char* what) {
    if (!j.is_array() || j.size() != static_cast<std::size_t>(n_states))
        throw ShapeError(std::string(what) + ": expected n_states blocks");
    Matrix out(n_states * n_actions, n_states);
    for (int s = 0; s < n_states; ++s) {
        const Json& block = j[static_cast<std::size_t>(s)];
        if (!block.is_array() || block.size() != static_cast<std::size_t>(n_actions))
            throw ShapeError(std::string(what) + ": expected n_actions rows per state");
        for (int a = 0; a < n_actions; ++a) {
            const Vector row = vector_from(block[static_cast<std::size_t>(a)], what);
            if (row.size() != n_states) throw ShapeError(std::string(what) + ": next-state row length");
            out.row(s * n_actions + a) = row.transpose();
        }
    }
    return out;
}

int positive_int(const Json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number_integer() || j.at(key).get<long>() <= 0)
        throw ValidationError(std::string("missing or invalid ") + key);
    return j.at(key).get<int>();
}

} // namespace

Json to_json(const TabularMdp& mdp) {
    return {{"n_states", mdp.n_states()},
            {"n_actions", mdp.n_actions()},
            {"gamma", mdp.gamma()},
            {"r_max", mdp.r_max()},
            {"init_dist", vector_json(mdp.init_dist())},
            {"reward", matrix_json(mdp.reward())},
            {"transition", tensor_json(mdp.transition(), mdp.n_states(), mdp.n_actions())}};
}

TabularMdp mdp_from_json(const Json& j) {
    if (!j.is_object()) throw ValidationError("mdp: expected an object");
    const int S = positive_int(j, "n_states");
    const int A = positive_int(j, "n_actions");
    for (const char* key : {"gamma", "r_max", "init_dist", "reward", "transition"})
        if (!j.contains(key)) throw ValidationError(std::string("mdp: missing ") + key);
    return TabularMdp(S, A, tensor_from(j.at("transition"), S, A, "mdp transition"),
                      matrix_from(j.at("reward"), "mdp reward"), number_from_json(j.at("r_max")),
                      number_from_json(j.at("gamma")), vector_from(j.at("init_dist"), "mdp init_dist"));
}

Json to_json(const Policy& pi) { return matrix_json(pi.table()); }

Policy policy_from_json(const Json& j) {
    if (j.is_array()) return Policy(matrix_from(j, "policy"));
    if (j.is_object()) {
        for (const char* key : {"policy", "table"})
            if (j.contains(key)) return Policy(matrix_from(j.at(key), "policy"));
    }
    throw ValidationError("policy: expected a 2D array or an object with a policy/table key");
}

Json to_json(const DiscriminatorClass& dclass) {
    Json members = Json::array();
    for (const auto& m : dclass.members()) members.push_back(vector_json(m));
    return {{"delta", dclass.delta()}, {"includes_zero", dclass.includes_zero()}, {"members", std::move(members)}};
}

DiscriminatorClass class_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("delta") || !j.contains("members"))
        throw ValidationError("discriminator class: expected {delta, members}");
    std::vector<Vector> members;
    for (const auto& m : j.at("members")) members.push_back(vector_from(m, "discriminator member"));
    DiscriminatorClass out(std::move(members), number_from_json(j.at("delta")));
    if (j.contains("includes_zero") && j.at("includes_zero").get<bool>() && !out.includes_zero())
        throw ValidationError("discriminator class: includes_zero set but no zero member");
    return out;
}

Json to_json(const MetricTable& metric) { return matrix_json(metric.distances()); }

MetricTable metric_from_json(const Json& j) { return MetricTable(matrix_from(j, "metric")); }

Json to_json(const BoundReport& report) {
    Json inputs = Json::object();
    for (const auto& [k, v] : report.inputs) inputs[k] = number_to_json(v);
    Json out{{"bound_id", std::string(to_string(report.id))},
             {"lhs", number_to_json(report.lhs)},
             {"rhs", number_to_json(report.rhs)},
             {"slack", number_to_json(report.slack)},
             {"holds", report.holds},
             {"inputs", std::move(inputs)}};
    if (!report.flags.empty()) out["flags"] = report.flags;
    return out;
}

BoundReport report_from_json(const Json& j) {
    BoundReport r;
    r.id = bound_id_from_string(j.at("bound_id").get<std::string>());
    r.lhs = number_from_json(j.at("lhs"));
    r.rhs = number_from_json(j.at("rhs"));
    r.slack = number_from_json(j.at("slack"));
    r.holds = j.at("holds").get<bool>();
    if (j.contains("inputs"))
        for (const auto& [k, v] : j.at("inputs").items()) r.inputs[k] = number_from_json(v);
    if (j.contains("flags")) r.flags = j.at("flags").get<std::vector<std::string>>();
    return r;
}

Json to_json(const ImitationResult& result) {
    Json diagnostics = Json::object();
    for (const auto& [k, v] : result.diagnostics) diagnostics[k] = number_to_json(v);
    Json out{{"policy", to_json(result.policy)},
             {"train_metric", number_to_json(result.train_metric)},
             {"iterations", result.iterations},
             {"converged", result.converged},
             {"algorithm", result.algorithm},
             {"seed", result.seed},
             {"diagnostics", std::move(diagnostics)}};
    if (!result.notes.empty()) out["notes"] = result.notes;
    return out;
}

Json to_json(const LearnedModel& model) {
    return tensor_json(model.transition(), model.n_states(), model.n_actions());
}

LearnedModel model_from_json(const Json& j) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) throw ValidationError("model: expected an S x A x S tensor");
    const int S = static_cast<int>(j.size());
    const int A = static_cast<int>(j[0].size());
    return {S, A, tensor_from(j, S, A, "model")};
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

} // namespace imlab::io
