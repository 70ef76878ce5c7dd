#include "imlab/divergences.hpp"

#include "imlab/rng.hpp"
#include "imlab/simplex.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace imlab {

std::string_view to_string(FDivKind kind) {
    switch (kind) {
    case FDivKind::KL: return "KL";
    case FDivKind::ReverseKL: return "RKL";
    case FDivKind::PearsonChi2: return "CHI2";
    case FDivKind::JS: return "JS";
    case FDivKind::SquaredHellinger: return "HELLINGER";
    case FDivKind::TV: return "TV";
    }
    return "?";
}

FDivKind fdiv_kind_from_string(std::string_view name) {
    for (FDivKind k : {FDivKind::KL, FDivKind::ReverseKL, FDivKind::PearsonChi2, FDivKind::JS,
                       FDivKind::SquaredHellinger, FDivKind::TV})
        if (name == to_string(k)) return k;
    throw ValidationError("unknown divergence kind: " + std::string(name));
}

namespace {

double kl(const Vector& mu, const Vector& nu) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
        if (mu[i] <= 0.0) continue;
        if (nu[i] <= 0.0) return kInf;
        total += mu[i] * std::log(mu[i] / nu[i]);
    }
    return std::max(total, 0.0);
}

} // namespace

double f_divergence(FDivKind kind, const Vector& mu, const Vector& nu) {
    if (mu.size() != nu.size()) throw ShapeError("f_divergence: distributions differ in size");
    switch (kind) {
    case FDivKind::KL: return kl(mu, nu);
    case FDivKind::ReverseKL: return kl(nu, mu);
    case FDivKind::PearsonChi2: {
        double total = 0.0;
        for (Eigen::Index i = 0; i < mu.size(); ++i) {
            const double diff = mu[i] - nu[i];
            if (diff == 0.0) continue;
            if (mu[i] <= 0.0) return kInf;
            total += diff * diff / mu[i];
        }
        return total;
    }
    case FDivKind::JS: {
        const Vector mid = 0.5 * (mu + nu);
        return std::max(0.0, 0.5 * (kl(mu, mid) + kl(nu, mid)));
    }
    case FDivKind::SquaredHellinger:
        return (mu.cwiseMax(0.0).cwiseSqrt() - nu.cwiseMax(0.0).cwiseSqrt()).squaredNorm();
    case FDivKind::TV: return 0.5 * (mu - nu).cwiseAbs().sum();
    }
    return 0.0;
}

double expected_policy_divergence(FDivKind kind, const TabularMdp& mdp, const Policy& pi_ref,
                                  const Policy& pi, const Policy& weighting) {
    if (pi_ref.n_states() != pi.n_states() || pi_ref.n_actions() != pi.n_actions())
        throw ShapeError("expected_policy_divergence: policy shapes differ");
    const Vector d = state_occupancy(mdp, weighting);
    double total = 0.0;
    for (int s = 0; s < mdp.n_states(); ++s) {
        if (d[s] <= 0.0) continue;
        const double div =
            f_divergence(kind, pi_ref.table().row(s).transpose(), pi.table().row(s).transpose());
        if (std::isinf(div)) return kInf;
        total += d[s] * div;
    }
    return total;
}

double max_policy_divergence(FDivKind kind, const Policy& pi, const Policy& pi_ref) {
    if (pi_ref.n_states() != pi.n_states() || pi_ref.n_actions() != pi.n_actions())
        throw ShapeError("max_policy_divergence: policy shapes differ");
    double best = 0.0;
    for (int s = 0; s < pi.n_states(); ++s)
        best = std::max(best, f_divergence(kind, pi.table().row(s).transpose(), pi_ref.table().row(s).transpose()));
    return best;
}

DiscriminatorClass::DiscriminatorClass(std::vector<Vector> members, double delta)
    : members_(std::move(members)), delta_(delta), space_size_(0), includes_zero_(false) {
    if (members_.empty()) throw ValidationError("DiscriminatorClass: empty class");
    if (!(delta >= 0.0) || !std::isfinite(delta)) throw ValidationError("DiscriminatorClass: delta must be >= 0");
    space_size_ = static_cast<int>(members_.front().size());
    for (const auto& m : members_) {
        if (m.size() != space_size_) throw ShapeError("DiscriminatorClass: member sizes differ");
        if (!m.allFinite() || m.cwiseAbs().maxCoeff() > delta + 1e-12)
            throw ValidationError("DiscriminatorClass: member exceeds delta bound");
        if (m.cwiseAbs().maxCoeff() == 0.0) includes_zero_ = true;
    }
}

bool DiscriminatorClass::is_symmetric() const {
    for (const auto& m : members_) {
        const bool found = std::any_of(members_.begin(), members_.end(), [&](const Vector& other) {
            return (other + m).cwiseAbs().maxCoeff() <= 1e-12;
        });
        if (!found) return false;
    }
    return true;
}

Matrix DiscriminatorClass::member_matrix() const {
    Matrix out(static_cast<Eigen::Index>(members_.size()), space_size_);
    for (std::size_t k = 0; k < members_.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = members_[k].transpose();
    return out;
}

DiscriminatorClass DiscriminatorClass::scaled(double factor) const {
    std::vector<Vector> next;
    next.reserve(members_.size());
    for (const auto& m : members_) next.push_back(factor * m);
    return {std::move(next), std::abs(factor) * delta_};
}

IpmValue nn_distance(const DiscriminatorClass& dclass, const Vector& mu, const Vector& nu) {
    if (mu.size() != dclass.space_size() || nu.size() != dclass.space_size())
        throw ShapeError("nn_distance: distribution size does not match class");
    const Vector diff = mu - nu;
    IpmValue best{-kInf, 0};
    for (std::size_t k = 0; k < dclass.size(); ++k) {
        const double v = dclass.members()[k].dot(diff);
        if (v > best.value) best = {v, k};
    }
    return best;
}

MetricTable::MetricTable(Matrix distances) : distances_(std::move(distances)) {
    const Eigen::Index n = distances_.rows();
    if (n == 0 || distances_.cols() != n) throw ShapeError("MetricTable: matrix must be square");
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(distances_(i, i)) > 1e-12) throw ValidationError("MetricTable: nonzero diagonal");
        for (Eigen::Index j = 0; j < n; ++j) {
            if (distances_(i, j) < 0.0 || std::abs(distances_(i, j) - distances_(j, i)) > 1e-12)
                throw ValidationError("MetricTable: not symmetric and nonnegative");
            for (Eigen::Index k = 0; k < n; ++k)
                if (distances_(i, k) > distances_(i, j) + distances_(j, k) + 1e-9)
                    throw ValidationError("MetricTable: triangle inequality violated");
        }
    }
}

MetricTable MetricTable::discrete(int n) {
    Matrix m = Matrix::Ones(n, n);
    m.diagonal().setZero();
    return MetricTable(std::move(m));
}

MetricTable MetricTable::line(const std::vector<double>& positions) {
    const auto n = static_cast<Eigen::Index>(positions.size());
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            m(i, j) = std::abs(positions[static_cast<std::size_t>(i)] - positions[static_cast<std::size_t>(j)]);
    return MetricTable(std::move(m));
}

TransportResult wasserstein_1(const MetricTable& metric, const Vector& mu, const Vector& nu) {
    const int n = metric.size();
    if (mu.size() != n || nu.size() != n) throw ShapeError("wasserstein_1: distribution size does not match metric");

    // primal: min sum c_ij pi_ij, row sums mu, column sums nu
    lp::LinearProgram primal;
    primal.objective = flatten(metric.distances());
    for (int i = 0; i < n; ++i) {
        Vector row = Vector::Zero(n * n);
        row.segment(i * n, n).setOnes();
        primal.add(std::move(row), lp::Sense::Equal, mu[i]);
    }
    for (int j = 0; j < n; ++j) {
        Vector col = Vector::Zero(n * n);
        for (int i = 0; i < n; ++i) col[i * n + j] = 1.0;
        primal.add(std::move(col), lp::Sense::Equal, nu[j]);
    }
    const lp::Solution ps = lp::solve(primal);
    if (ps.status != lp::Status::Optimal)
        throw SolverError(std::string("wasserstein_1 primal: ") + lp::to_string(ps.status), ps.iterations);

    // dual: max sum f_i (mu_i - nu_i), f_i - f_j <= c_ij, f = f+ - f-
    lp::LinearProgram dual;
    dual.objective = Vector(2 * n);
    dual.objective.head(n) = -(mu - nu);
    dual.objective.tail(n) = mu - nu;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            Vector row = Vector::Zero(2 * n);
            row[i] += 1.0;
            row[j] -= 1.0;
            row[n + i] -= 1.0;
            row[n + j] += 1.0;
            dual.add(std::move(row), lp::Sense::LessEqual, metric(i, j));
        }
    const lp::Solution ds = lp::solve(dual);
    if (ds.status != lp::Status::Optimal)
        throw SolverError(std::string("wasserstein_1 dual: ") + lp::to_string(ds.status), ds.iterations);

    TransportResult out;
    out.cost = std::max(0.0, ps.objective);
    out.dual = -ds.objective;
    out.duality_gap = std::abs(out.cost - out.dual);
    out.plan = unflatten(ps.x, n, n);
    out.potential = ds.x.head(n) - ds.x.tail(n);
    return out;
}

namespace {

void check_points(const DiscriminatorClass& dclass, const std::vector<int>& points) {
    if (points.empty()) throw ValidationError("empirical_rademacher: empty sample");
    for (int z : points)
        if (z < 0 || z >= dclass.space_size()) throw ShapeError("empirical_rademacher: point outside sample space");
}

} // namespace

RademacherEstimate empirical_rademacher(const DiscriminatorClass& dclass, const std::vector<int>& points,
                                        const RademacherMode& mode) {
    check_points(dclass, points);
    const std::size_t m = points.size();
    const std::size_t K = dclass.size();
    // values(k, i) = D_k(z_i)
    Matrix values(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(m));
    for (std::size_t k = 0; k < K; ++k)
        for (std::size_t i = 0; i < m; ++i)
            values(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = dclass.members()[k][points[i]];

    if (std::holds_alternative<RademacherExact>(mode)) {
        if (m > kMaxExactRademacher)
            throw CapacityError("empirical_rademacher: exact mode supports m <= 20, got " + std::to_string(m));
        // Gray-code walk over all sign patterns, starting from sigma = +1.
        Vector sums = values.rowwise().sum();
        std::vector<int> sigma(m, 1);
        const std::uint64_t patterns = std::uint64_t{1} << m;
        double acc = sums.maxCoeff();
        for (std::uint64_t g = 1; g < patterns; ++g) {
            const int flip = std::countr_zero(g);
            sigma[static_cast<std::size_t>(flip)] = -sigma[static_cast<std::size_t>(flip)];
            sums += (2.0 * sigma[static_cast<std::size_t>(flip)]) * values.col(flip);
            acc += sums.maxCoeff();
        }
        return {acc / (static_cast<double>(patterns) * static_cast<double>(m)), 0.0, patterns};
    }

    const auto& mc = std::get<RademacherMonteCarlo>(mode);
    if (mc.draws == 0) throw ValidationError("empirical_rademacher: monte_carlo needs draws >= 1");
    Rng rng(mc.seed);
    double mean = 0.0;
    double m2 = 0.0;
    Vector signs(static_cast<Eigen::Index>(m));
    for (std::size_t t = 0; t < mc.draws; ++t) {
        for (std::size_t i = 0; i < m; ++i) signs[static_cast<Eigen::Index>(i)] = (rng() >> 63) ? 1.0 : -1.0;
        const double sup = (values * signs).maxCoeff() / static_cast<double>(m);
        const double delta = sup - mean;
        mean += delta / static_cast<double>(t + 1);
        m2 += delta * (sup - mean);
    }
    const double var = mc.draws > 1 ? m2 / static_cast<double>(mc.draws - 1) : 0.0;
    return {mean, std::sqrt(var / static_cast<double>(mc.draws)), mc.draws};
}

CompatibleCoefficient compatible_coefficient(const DiscriminatorClass& dclass, const Vector& reward) {
    const int n = dclass.space_size();
    if (reward.size() != n) throw ShapeError("compatible_coefficient: reward size does not match class");
    const int K = static_cast<int>(dclass.size());
    // variables: c+ (K), c- (K), c0+, c0-
    lp::LinearProgram program;
    program.objective = Vector::Zero(2 * K + 2);
    program.objective.head(2 * K).setOnes();
    for (int z = 0; z < n; ++z) {
        Vector row(2 * K + 2);
        for (int k = 0; k < K; ++k) {
            row[k] = dclass.members()[static_cast<std::size_t>(k)][z];
            row[K + k] = -row[k];
        }
        row[2 * K] = 1.0;
        row[2 * K + 1] = -1.0;
        program.add(std::move(row), lp::Sense::Equal, reward[z]);
    }
    const lp::Solution sol = lp::solve(program);
    if (sol.status == lp::Status::Infeasible)
        throw SpanError("compatible_coefficient: reward is not in the linear span of the discriminator class");
    if (sol.status != lp::Status::Optimal)
        throw SolverError(std::string("compatible_coefficient: ") + lp::to_string(sol.status), sol.iterations);

    CompatibleCoefficient out;
    out.coefficients = sol.x.head(K) - sol.x.segment(K, K);
    out.offset = sol.x[2 * K] - sol.x[2 * K + 1];
    out.norm = out.coefficients.cwiseAbs().sum();
    Vector recon = Vector::Constant(n, out.offset);
    for (int k = 0; k < K; ++k) recon += out.coefficients[k] * dclass.members()[static_cast<std::size_t>(k)];
    out.residual = (recon - reward).cwiseAbs().maxCoeff();
    if (out.residual > 1e-7)
        throw SpanError("compatible_coefficient: reconstruction residual " + std::to_string(out.residual));
    return out;
}

double estm_confidence_term(double class_delta, std::size_t m, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("estm_term: delta must lie in (0, 1)");
    if (m == 0) throw DomainError("estm_term: m must be >= 1");
    return 12.0 * class_delta * std::sqrt(std::log(2.0 / delta) / static_cast<double>(m));
}

EstimationTerm estm_term(const DiscriminatorClass& dclass, const std::vector<int>& points_e,
                         const std::vector<int>& points_i, double delta, const RademacherMode& mode) {
    if (points_e.size() != points_i.size()) throw ValidationError("estm_term: samples must have equal size");
    EstimationTerm out;
    out.confidence = estm_confidence_term(dclass.delta(), points_e.size(), delta);
    RademacherMode mode_i = mode;
    if (auto* mc = std::get_if<RademacherMonteCarlo>(&mode_i)) mc->seed = mix_seed(mc->seed);
    out.rademacher_e = empirical_rademacher(dclass, points_e, mode).value;
    out.rademacher_i = empirical_rademacher(dclass, points_i, mode_i).value;
    out.total = 2.0 * out.rademacher_e + 2.0 * out.rademacher_i + out.confidence;
    return out;
}

} // namespace imlab
