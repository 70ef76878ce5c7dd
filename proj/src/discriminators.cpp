#include "imlab/discriminators.hpp"

#include "imlab/rng.hpp"

namespace imlab::discriminators {

DiscriminatorClass zero_class(int n) {
    if (n <= 0) throw ValidationError("zero_class: n must be positive");
    return {{Vector::Zero(n)}, 0.0};
}

DiscriminatorClass indicator_class(int n, double delta) {
    if (n <= 0) throw ValidationError("indicator_class: n must be positive");
    std::vector<Vector> members{Vector::Zero(n)};
    for (int k = 0; k < n; ++k) {
        Vector e = Vector::Zero(n);
        e[k] = delta;
        members.push_back(e);
        members.push_back(-e);
    }
    return {std::move(members), delta};
}

DiscriminatorClass sign_class(int n, double delta) {
    if (n <= 0 || n > 20) throw CapacityError("sign_class: n must lie in [1, 20]");
    std::vector<Vector> members;
    const std::uint32_t count = std::uint32_t{1} << n;
    members.reserve(count);
    for (std::uint32_t bits = 0; bits < count; ++bits) {
        Vector v(n);
        for (int k = 0; k < n; ++k) v[k] = (bits >> k) & 1U ? delta : -delta;
        members.push_back(std::move(v));
    }
    return {std::move(members), delta};
}

DiscriminatorClass random_symmetric_class(int n, std::size_t pairs, double delta, Seed seed,
                                          bool include_zero, const std::vector<Vector>& extra) {
    if (n <= 0) throw ValidationError("random_symmetric_class: n must be positive");
    std::vector<Vector> members;
    if (include_zero) members.push_back(Vector::Zero(n));
    for (const auto& e : extra) {
        members.push_back(e);
        members.push_back(-e);
    }
    Rng rng(seed);
    for (std::size_t p = 0; p < pairs; ++p) {
        Vector v(n);
        for (int k = 0; k < n; ++k) v[k] = delta * (2.0 * uniform01(rng) - 1.0);
        members.push_back(v);
        members.push_back(-v);
    }
    return {std::move(members), delta};
}

DiscriminatorClass lipschitz_class(const MetricTable& metric) {
    const int n = metric.size();
    std::vector<Vector> members{Vector::Zero(n)};
    double delta = 0.0;
    for (int k = 0; k < n; ++k) {
        Vector v = metric.distances().col(k);
        const double mid = 0.5 * v.maxCoeff();
        v.array() -= mid;
        delta = std::max(delta, mid);
        members.push_back(v);
        members.push_back(-v);
    }
    return {std::move(members), delta};
}

} // namespace imlab::discriminators
