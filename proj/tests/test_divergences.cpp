#include "doctest.h"
#include "support.hpp"

#include "imlab/discriminators.hpp"
#include "imlab/divergences.hpp"
#include "imlab/worstcase.hpp"

#include <cmath>

using namespace imlab;
using imlab::testing::fuzz_distribution;
using imlab::testing::fuzz_policy;

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

constexpr FDivKind kAllKinds[] = {FDivKind::KL, FDivKind::ReverseKL, FDivKind::PearsonChi2,
                                  FDivKind::JS, FDivKind::SquaredHellinger, FDivKind::TV};

} // namespace

TEST_CASE("f_divergence values") {
    const Vector p = vec({0.2, 0.5, 0.3});
    for (FDivKind k : kAllKinds) CHECK(f_divergence(k, p, p) == 0.0);

    const double kl = 0.9 * std::log(18.0 / 17.0) + 0.1 * std::log(2.0 / 3.0);
    CHECK(f_divergence(FDivKind::KL, vec({0.9, 0.1}), vec({0.85, 0.15})) == doctest::Approx(kl).epsilon(1e-14));
    CHECK(std::abs(kl - 0.0108961) < 1e-6);

    const Vector a = vec({1.0, 0.0});
    const Vector b = vec({0.0, 1.0});
    CHECK(f_divergence(FDivKind::JS, a, b) == doctest::Approx(std::log(2.0)));
    CHECK(f_divergence(FDivKind::TV, a, b) == doctest::Approx(1.0));
    CHECK(f_divergence(FDivKind::SquaredHellinger, a, b) == doctest::Approx(2.0));
    CHECK(std::isinf(f_divergence(FDivKind::KL, a, b)));
    CHECK(std::isinf(f_divergence(FDivKind::ReverseKL, a, b)));
    CHECK(f_divergence(FDivKind::PearsonChi2, vec({0.5, 0.5}), b) == doctest::Approx(1.0));
    CHECK(std::isinf(f_divergence(FDivKind::PearsonChi2, b, vec({0.5, 0.5}))));

    // reverse KL swaps the arguments; zero mass on mu beside zero mass on nu is fine
    const Vector q = vec({0.6, 0.3, 0.1});
    CHECK(f_divergence(FDivKind::ReverseKL, p, q) == doctest::Approx(f_divergence(FDivKind::KL, q, p)));
    CHECK(f_divergence(FDivKind::KL, vec({0.5, 0.5, 0.0}), vec({0.5, 0.5, 0.0})) == 0.0);
    CHECK_THROWS_AS(f_divergence(FDivKind::KL, p, vec({0.5, 0.5})), ShapeError);
}

TEST_CASE("f_divergence direct-sum oracle and nonnegativity on fuzzed pairs") {
    for (Seed seed = 0; seed < 500; ++seed) {
        const int n = 2 + static_cast<int>(seed % 6);
        const Vector mu = fuzz_distribution(derive_seed(seed, 1), n, 0.5);
        const Vector nu = fuzz_distribution(derive_seed(seed, 2), n, 0.5);
        double kl = 0, chi = 0, hel = 0, tv = 0, js = 0;
        for (int i = 0; i < n; ++i) {
            const double m = 0.5 * (mu[i] + nu[i]);
            if (mu[i] > 0) kl += mu[i] * std::log(mu[i] / nu[i]);
            chi += (mu[i] - nu[i]) * (mu[i] - nu[i]) / mu[i];
            hel += std::pow(std::sqrt(mu[i]) - std::sqrt(nu[i]), 2);
            tv += 0.5 * std::abs(mu[i] - nu[i]);
            if (mu[i] > 0) js += 0.5 * mu[i] * std::log(mu[i] / m);
            if (nu[i] > 0) js += 0.5 * nu[i] * std::log(nu[i] / m);
        }
        CHECK(f_divergence(FDivKind::KL, mu, nu) == doctest::Approx(kl).epsilon(1e-10));
        CHECK(f_divergence(FDivKind::PearsonChi2, mu, nu) == doctest::Approx(chi).epsilon(1e-10));
        CHECK(f_divergence(FDivKind::SquaredHellinger, mu, nu) == doctest::Approx(hel).epsilon(1e-10));
        CHECK(f_divergence(FDivKind::TV, mu, nu) == doctest::Approx(tv).epsilon(1e-12));
        CHECK(f_divergence(FDivKind::JS, mu, nu) == doctest::Approx(js).epsilon(1e-10));
        for (FDivKind k : kAllKinds) CHECK(f_divergence(k, mu, nu) >= 0.0);
        CHECK(f_divergence(FDivKind::JS, mu, nu) <= std::log(2.0) + 1e-12);
    }
}

TEST_CASE("Pinsker forms hold on 10^4 fuzzed pairs") {
    int failures = 0;
    for (Seed seed = 0; seed < 10000; ++seed) {
        const int n = 2 + static_cast<int>(seed % 7);
        const Vector mu = fuzz_distribution(derive_seed(seed, 11), n);
        const Vector nu = fuzz_distribution(derive_seed(seed, 12), n);
        const double tv = f_divergence(FDivKind::TV, mu, nu);
        if (tv > std::sqrt(2.0 * f_divergence(FDivKind::KL, mu, nu)) + 1e-12) ++failures;
        if (0.5 * tv * tv > f_divergence(FDivKind::JS, mu, nu) + 1e-12) ++failures;
    }
    CHECK(failures == 0);
}

TEST_CASE("kind names round-trip") {
    for (FDivKind k : kAllKinds) CHECK(fdiv_kind_from_string(to_string(k)) == k);
    CHECK_THROWS_AS(fdiv_kind_from_string("bogus"), ValidationError);
}

TEST_CASE("expected and max policy divergences") {
    const HardInstance h = hard_instance(0.9);
    CHECK(expected_policy_divergence(FDivKind::KL, h.mdp, h.pi_e, h.pi_e, h.pi_e) == 0.0);
    CHECK(expected_policy_divergence(FDivKind::KL, h.mdp, h.pi_e, h.pi_i, h.pi_e) ==
          doctest::Approx(0.00108961).epsilon(1e-4));
    CHECK(std::abs(expected_policy_divergence(FDivKind::KL, h.mdp, h.pi_e, h.pi_i, h.pi_e) - 0.00108961) < 1e-8);

    SUBCASE("TV of deterministic policies is the disagreement mass") {
        const TabularMdp mdp = testing::fuzz_mdp(3, 5, 3, 0.8);
        const Policy a = Policy::deterministic({0, 1, 2, 0, 1}, 3);
        const Policy b = Policy::deterministic({0, 2, 2, 1, 1}, 3);
        const Vector d = state_occupancy(mdp, a);
        CHECK(expected_policy_divergence(FDivKind::TV, mdp, a, b, a) == doctest::Approx(d[1] + d[3]).epsilon(1e-12));
    }
    SUBCASE("max dominates the mean") {
        for (Seed seed = 0; seed < 100; ++seed) {
            const TabularMdp mdp = testing::fuzz_mdp(seed, 4, 3, 0.9);
            const Policy p = fuzz_policy(derive_seed(seed, 1), 4, 3);
            const Policy q = fuzz_policy(derive_seed(seed, 2), 4, 3);
            const Policy w = fuzz_policy(derive_seed(seed, 3), 4, 3);
            for (FDivKind k : kAllKinds)
                CHECK(max_policy_divergence(k, p, q) >= expected_policy_divergence(k, mdp, p, q, w) - 1e-12);
        }
    }
    SUBCASE("one-state policies") {
        const Vector p = vec({0.3, 0.7});
        const Vector q = vec({0.6, 0.4});
        const Policy pp(Matrix(p.transpose()));
        const Policy qq(Matrix(q.transpose()));
        CHECK(max_policy_divergence(FDivKind::KL, pp, qq) == doctest::Approx(f_divergence(FDivKind::KL, p, q)));
        CHECK(max_policy_divergence(FDivKind::KL, pp, pp) == 0.0);
    }
    SUBCASE("zero-weight states do not contribute infinities") {
        Matrix t = Matrix::Zero(4, 2);
        t(0, 0) = t(1, 0) = t(2, 1) = t(3, 1) = 1.0; // state 1 unreachable from 0
        Vector d0 = vec({1.0, 0.0});
        const TabularMdp mdp(2, 2, t, Matrix::Zero(2, 2), 0.0, 0.9, d0);
        Matrix ref(2, 2), pi(2, 2);
        ref << 0.5, 0.5, 1.0, 0.0;
        pi << 0.5, 0.5, 0.0, 1.0;
        CHECK(expected_policy_divergence(FDivKind::KL, mdp, Policy(ref), Policy(pi), Policy(ref)) == 0.0);
        CHECK(std::isinf(max_policy_divergence(FDivKind::KL, Policy(ref), Policy(pi))));
    }
}

TEST_CASE("DiscriminatorClass") {
    CHECK_THROWS_AS(DiscriminatorClass({}, 1.0), ValidationError);
    CHECK_THROWS_AS(DiscriminatorClass({vec({2.0, 0.0})}, 1.0), ValidationError);
    CHECK_THROWS_AS(DiscriminatorClass({vec({1.0, 0.0}), vec({1.0})}, 1.0), ShapeError);
    const DiscriminatorClass c({vec({1.0, -1.0}), vec({-1.0, 1.0}), vec({0.0, 0.0})}, 1.0);
    CHECK(c.includes_zero());
    CHECK(c.is_symmetric());
    CHECK(c.scaled(0.5).members()[0][0] == 0.5);
    CHECK(c.scaled(0.5).delta() == 0.5);
    CHECK_FALSE(DiscriminatorClass({vec({1.0, 0.0})}, 1.0).is_symmetric());
    CHECK(c.member_matrix().rows() == 3);
}

TEST_CASE("nn_distance") {
    const Vector mu = vec({0.7, 0.3});
    const Vector nu = vec({0.2, 0.8});
    CHECK(nn_distance(discriminators::zero_class(2), mu, nu).value == 0.0);
    CHECK(nn_distance(discriminators::indicator_class(2), mu, mu).value == 0.0);

    // enumeration oracle over the four sign tables
    double best = -kInf;
    for (double s0 : {-1.0, 1.0})
        for (double s1 : {-1.0, 1.0}) best = std::max(best, s0 * (mu[0] - nu[0]) + s1 * (mu[1] - nu[1]));
    const IpmValue v = nn_distance(discriminators::sign_class(2), mu, nu);
    CHECK(v.value == doctest::Approx(best));
    CHECK(v.value == doctest::Approx((mu - nu).cwiseAbs().sum()));

    for (Seed seed = 0; seed < 200; ++seed) {
        const int n = 2 + static_cast<int>(seed % 8);
        const Vector p = fuzz_distribution(derive_seed(seed, 1), n);
        const Vector q = fuzz_distribution(derive_seed(seed, 2), n);
        const double delta = 0.5 + static_cast<double>(seed % 3);
        CHECK(std::abs(nn_distance(discriminators::sign_class(n, delta), p, q).value -
                       2.0 * delta * f_divergence(FDivKind::TV, p, q)) <= 1e-9);
        CHECK(nn_distance(discriminators::indicator_class(n), p, q).value >= 0.0);
        CHECK(nn_distance(discriminators::indicator_class(n), p, q).value ==
              doctest::Approx((p - q).cwiseAbs().maxCoeff()));
    }
    CHECK_THROWS_AS(nn_distance(discriminators::zero_class(3), mu, nu), ShapeError);
}

TEST_CASE("MetricTable") {
    Matrix bad(2, 2);
    bad << 0, 1, 2, 0;
    CHECK_THROWS_AS(MetricTable{bad}, ValidationError);
    Matrix tri(3, 3);
    tri << 0, 1, 5, 1, 0, 1, 5, 1, 0;
    CHECK_THROWS_AS(MetricTable{tri}, ValidationError);
    const MetricTable line = MetricTable::line({0.0, 1.0, 3.0});
    CHECK(line(0, 2) == 3.0);
    CHECK(line.diameter() == 3.0);
    CHECK(MetricTable::discrete(3)(0, 1) == 1.0);
}

TEST_CASE("wasserstein_1") {
    const MetricTable line = MetricTable::line({0.0, 1.0, 2.5});
    const Vector p = vec({1.0, 0.0, 0.0});
    const Vector q = vec({0.0, 0.0, 1.0});
    CHECK(wasserstein_1(line, p, p).cost == doctest::Approx(0.0));
    CHECK(wasserstein_1(line, p, q).cost == doctest::Approx(2.5));

    for (Seed seed = 0; seed < 50; ++seed) {
        const int n = 2 + static_cast<int>(seed % 5);
        Rng rng(seed);
        std::vector<double> pos;
        for (int i = 0; i < n; ++i) pos.push_back(uniform01(rng) * 4.0);
        const MetricTable metric = MetricTable::line(pos);
        const Vector mu = fuzz_distribution(derive_seed(seed, 1), n);
        const Vector nu = fuzz_distribution(derive_seed(seed, 2), n);
        const TransportResult w = wasserstein_1(metric, mu, nu);
        CHECK(std::abs(w.cost - testing::min_cost_flow_transport(metric.distances(), mu, nu)) <= 1e-6);
        CHECK(w.duality_gap <= 1e-7);
        CHECK(w.cost <= metric.diameter() * 2.0 * f_divergence(FDivKind::TV, mu, nu) + 1e-12);
        CHECK((w.plan.rowwise().sum() - mu).cwiseAbs().maxCoeff() <= 1e-9);
        CHECK((w.plan.colwise().sum().transpose() - nu).cwiseAbs().maxCoeff() <= 1e-9);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                CHECK(std::abs(w.potential[i] - w.potential[j]) <= metric(i, j) + 1e-9);
    }
}

TEST_CASE("empirical_rademacher") {
    const std::vector<int> pts{0, 1, 1, 2};
    CHECK(empirical_rademacher(discriminators::zero_class(3), pts, RademacherExact{}).value == 0.0);
    CHECK(empirical_rademacher(discriminators::zero_class(3), pts, RademacherMonteCarlo{100, 1}).value == 0.0);

    const Vector d = vec({0.4, -0.7, 0.2});
    const DiscriminatorClass pm({d, Vector(-d)}, 1.0);
    CHECK(empirical_rademacher(pm, {1}, RademacherExact{}).value == doctest::Approx(0.7));

    SUBCASE("Gray-code walk equals brute force") {
        for (Seed seed = 0; seed < 20; ++seed) {
            const DiscriminatorClass c = discriminators::random_symmetric_class(5, 3, 1.0, seed, true);
            Rng rng(derive_seed(seed, 9));
            std::vector<int> p;
            for (int i = 0; i < 8; ++i) p.push_back(static_cast<int>(rng() % 5));
            CHECK(std::abs(empirical_rademacher(c, p, RademacherExact{}).value -
                           testing::brute_force_rademacher(c.members(), p)) <= 1e-12);
        }
    }
    SUBCASE("Monte Carlo within 4 standard errors of exact") {
        const DiscriminatorClass c = discriminators::random_symmetric_class(6, 4, 1.0, 3, false);
        std::vector<int> p{0, 1, 2, 3, 4, 5, 0, 2, 4, 1};
        const RademacherEstimate exact = empirical_rademacher(c, p, RademacherExact{});
        const RademacherEstimate mc = empirical_rademacher(c, p, RademacherMonteCarlo{100000, 5});
        CHECK(exact.patterns == 1024);
        CHECK(mc.std_error > 0.0);
        CHECK(std::abs(mc.value - exact.value) <= 4.0 * mc.std_error);
    }
    CHECK_THROWS_AS(empirical_rademacher(pm, std::vector<int>(21, 0), RademacherExact{}), CapacityError);
    CHECK_THROWS_AS(empirical_rademacher(pm, {0}, RademacherMonteCarlo{0, 1}), ValidationError);
}

TEST_CASE("compatible_coefficient") {
    const DiscriminatorClass c = discriminators::indicator_class(3);
    CHECK(compatible_coefficient(c, vec({2.0, 2.0, 2.0})).norm == doctest::Approx(0.0));
    const Vector r = vec({0.3, -0.4, 1.0});
    CHECK(compatible_coefficient(DiscriminatorClass({r}, 1.0), r).norm == doctest::Approx(1.0));

    SUBCASE("two-member grid oracle") {
        const Vector half = 0.5 * r;
        const Vector shifted = (0.5 * r).array() + 0.25;
        const DiscriminatorClass two({half, shifted}, 1.0);
        const double lp = compatible_coefficient(two, r).norm;
        // c1 * half + c2 * shifted + c0 = r  forces c1 + c2 = 2 (non-constant part), c0 = -0.25 c2
        double best = kInf;
        for (int i = -4000; i <= 4000; ++i) {
            const double c1 = i * 1e-3;
            best = std::min(best, std::abs(c1) + std::abs(2.0 - c1));
        }
        CHECK(lp <= 2.0 + 1e-9);
        CHECK(lp == doctest::Approx(best).epsilon(1e-9));
    }
    SUBCASE("certificate and scaling") {
        for (Seed seed = 0; seed < 20; ++seed) {
            const DiscriminatorClass k = discriminators::random_symmetric_class(4, 6, 1.0, seed, true);
            Vector rw(4);
            Rng rng(seed);
            for (int i = 0; i < 4; ++i) rw[i] = uniform01(rng) - 0.5;
            const CompatibleCoefficient cc = compatible_coefficient(k, rw);
            CHECK(cc.residual <= 1e-7);
            Vector rebuilt = Vector::Constant(4, cc.offset);
            for (std::size_t i = 0; i < k.size(); ++i) rebuilt += cc.coefficients[static_cast<Eigen::Index>(i)] * k.members()[i];
            CHECK((rebuilt - rw).cwiseAbs().maxCoeff() <= 1e-7);
            CHECK(compatible_coefficient(k.scaled(2.0), rw).norm == doctest::Approx(cc.norm / 2.0).epsilon(1e-7));
        }
    }
    CHECK_THROWS_AS(compatible_coefficient(DiscriminatorClass({vec({1.0, 0.0, 0.0})}, 1.0), r), SpanError);
}

TEST_CASE("estimation term") {
    CHECK(estm_confidence_term(1.0, 100, 0.1) == doctest::Approx(12.0 * std::sqrt(std::log(20.0) / 100.0)));
    CHECK(std::abs(estm_confidence_term(1.0, 100, 0.1) - 2.076983) < 1e-6);
    CHECK(estm_confidence_term(1.0, 50, 0.1) / estm_confidence_term(1.0, 100, 0.1) == doctest::Approx(std::sqrt(2.0)));
    const std::vector<int> pts{0, 1, 2, 1};
    const EstimationTerm t = estm_term(discriminators::zero_class(3), pts, pts, 0.1, RademacherExact{});
    CHECK(t.total == doctest::Approx(estm_confidence_term(0.0, 4, 0.1)));
    const EstimationTerm u = estm_term(discriminators::indicator_class(3, 0.5), pts, pts, 0.1, RademacherExact{});
    CHECK(u.confidence == doctest::Approx(6.0 * std::sqrt(std::log(20.0) / 4.0)));
    CHECK(u.total == doctest::Approx(2.0 * u.rademacher_e + 2.0 * u.rademacher_i + u.confidence));
    CHECK_THROWS_AS(estm_term(discriminators::zero_class(3), pts, pts, 1.0, RademacherExact{}), DomainError);
    CHECK_THROWS_AS(estm_term(discriminators::zero_class(3), pts, {0}, 0.1, RademacherExact{}), ValidationError);
}

TEST_CASE("discriminator families") {
    const DiscriminatorClass ind = discriminators::indicator_class(4, 0.5);
    CHECK(ind.size() == 9);
    CHECK(ind.includes_zero());
    CHECK(ind.is_symmetric());
    CHECK(discriminators::sign_class(3).size() == 8);
    CHECK_THROWS_AS(discriminators::sign_class(21), CapacityError);
    const Vector extra = vec({1.0, 0.0, -1.0});
    const DiscriminatorClass rs = discriminators::random_symmetric_class(3, 2, 1.0, 4, false, {extra});
    CHECK(rs.size() == 6);
    CHECK(rs.members()[0] == extra);
    CHECK(rs.is_symmetric());
    CHECK_FALSE(rs.includes_zero());
    CHECK(rs.members() == discriminators::random_symmetric_class(3, 2, 1.0, 4, false, {extra}).members());

    const MetricTable metric = MetricTable::line({0.0, 0.5, 2.0, 3.0});
    const DiscriminatorClass lip = discriminators::lipschitz_class(metric);
    CHECK(lip.includes_zero());
    for (const auto& m : lip.members())
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) CHECK(std::abs(m[i] - m[j]) <= metric(i, j) + 1e-12);
    // IPM over a subset of the Lipschitz ball never exceeds W1
    for (Seed seed = 0; seed < 20; ++seed) {
        const Vector mu = fuzz_distribution(derive_seed(seed, 1), 4);
        const Vector nu = fuzz_distribution(derive_seed(seed, 2), 4);
        CHECK(nn_distance(lip, mu, nu).value <= wasserstein_1(metric, mu, nu).cost + 1e-9);
    }
}
