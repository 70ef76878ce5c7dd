#pragma once

#include "imlab/mdp.hpp"
#include "imlab/types.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace imlab {

enum class FDivKind { KL, ReverseKL, PearsonChi2, JS, SquaredHellinger, TV };

std::string_view to_string(FDivKind kind);
FDivKind fdiv_kind_from_string(std::string_view name);

/// Discrepancy between two distributions on the same finite space.
///
///   KL(mu, nu)          = sum mu log(mu / nu)
///   ReverseKL(mu, nu)   = sum nu log(nu / mu)
///   PearsonChi2(mu, nu) = sum (mu - nu)^2 / mu
///   JS(mu, nu)          = (KL(mu, m) + KL(nu, m)) / 2,  m = (mu + nu) / 2
///   SquaredHellinger    = sum (sqrt(mu) - sqrt(nu))^2
///   TV(mu, nu)          = sum |mu - nu| / 2
///
/// Natural logarithms throughout, 0 log 0 = 0. Support violations yield +inf
/// for KL, ReverseKL and PearsonChi2.
double f_divergence(FDivKind kind, const Vector& mu, const Vector& nu);

/// E_{s ~ d_weighting}[D(pi_ref(.|s), pi(.|s))]. States with zero weight
/// contribute nothing even when their divergence is infinite.
double expected_policy_divergence(FDivKind kind, const TabularMdp& mdp, const Policy& pi_ref,
                                  const Policy& pi, const Policy& weighting);

/// max_s D(pi(.|s), pi_ref(.|s)).
double max_policy_divergence(FDivKind kind, const Policy& pi, const Policy& pi_ref);

/// Finite family of bounded tables over a finite sample space (state-action
/// pairs or state-action-next-state triples, flattened row-major).
class DiscriminatorClass {
public:
    DiscriminatorClass(std::vector<Vector> members, double delta);

    const std::vector<Vector>& members() const noexcept { return members_; }
    std::size_t size() const noexcept { return members_.size(); }
    int space_size() const noexcept { return space_size_; }
    double delta() const noexcept { return delta_; }
    bool includes_zero() const noexcept { return includes_zero_; }
    /// True when -D is a member for every member D.
    bool is_symmetric() const;

    /// Values of every member at one point; row k is member k.
    Matrix member_matrix() const;

    DiscriminatorClass scaled(double factor) const;

private:
    std::vector<Vector> members_;
    double delta_;
    int space_size_;
    bool includes_zero_;
};

struct IpmValue {
    double value;
    std::size_t argmax;
};

/// sup over members of <D, mu> - <D, nu>.
IpmValue nn_distance(const DiscriminatorClass& dclass, const Vector& mu, const Vector& nu);

/// Symmetric pairwise ground metric.
class MetricTable {
public:
    explicit MetricTable(Matrix distances);
    static MetricTable discrete(int n);
    static MetricTable line(const std::vector<double>& positions);

    int size() const noexcept { return static_cast<int>(distances_.rows()); }
    double operator()(int i, int j) const { return distances_(i, j); }
    const Matrix& distances() const noexcept { return distances_; }
    double diameter() const { return distances_.maxCoeff(); }

private:
    Matrix distances_;
};

struct TransportResult {
    double cost;      ///< primal optimum (Kantorovich transport cost)
    double dual;      ///< sup over 1-Lipschitz potentials
    double duality_gap;
    Matrix plan;      ///< optimal coupling, rows mu, columns nu
    Vector potential; ///< optimal 1-Lipschitz potential
};

/// Wasserstein-1 distance by the Kantorovich transport LP and its dual.
TransportResult wasserstein_1(const MetricTable& metric, const Vector& mu, const Vector& nu);

struct RademacherExact {};
struct RademacherMonteCarlo {
    std::size_t draws = 1000;
    Seed seed = 0;
};
using RademacherMode = std::variant<RademacherExact, RademacherMonteCarlo>;

inline constexpr std::size_t kMaxExactRademacher = 20;

struct RademacherEstimate {
    double value;
    double std_error; ///< zero in exact mode
    std::size_t patterns;
};

/// E_sigma[sup_D (1/m) sum_i sigma_i D(z_i)] over sample points z_i.
RademacherEstimate empirical_rademacher(const DiscriminatorClass& dclass, const std::vector<int>& points,
                                        const RademacherMode& mode);

struct CompatibleCoefficient {
    double norm;           ///< ||r||_D = sum |c_i|
    Vector coefficients;   ///< c_i, one per member
    double offset;         ///< c_0
    double residual;       ///< max |sum c_i D_i + c_0 - r|
};

/// min sum |c_i| subject to sum c_i D_i + c_0 = r. Throws SpanError when r is
/// outside span(D) + constants.
CompatibleCoefficient compatible_coefficient(const DiscriminatorClass& dclass, const Vector& reward);

struct EstimationTerm {
    double total;
    double rademacher_e;
    double rademacher_i;
    double confidence; ///< 12 Delta sqrt(log(2/delta) / m)
};

/// 2 R_E + 2 R_I + 12 Delta sqrt(log(2/delta)/m).
EstimationTerm estm_term(const DiscriminatorClass& dclass, const std::vector<int>& points_e,
                         const std::vector<int>& points_i, double delta, const RademacherMode& mode);

/// Closed-form confidence part of the estimation term.
double estm_confidence_term(double class_delta, std::size_t m, double delta);

} // namespace imlab
