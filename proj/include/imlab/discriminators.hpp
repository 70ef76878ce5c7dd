#pragma once

#include "imlab/divergences.hpp"

namespace imlab::discriminators {

/// {0} on a space of n points.
DiscriminatorClass zero_class(int n);

/// {0} together with +-delta * 1{z = k} for every point k. The induced IPM is
/// delta times the sup-norm distance.
DiscriminatorClass indicator_class(int n, double delta = 1.0);

/// Every table with entries in {-delta, +delta} (2^n members, n <= 20). The
/// induced IPM equals 2 delta TV.
DiscriminatorClass sign_class(int n, double delta = 1.0);

/// `pairs` random tables uniform in [-delta, delta] and their negations, plus
/// zero when requested. Extra tables can be prepended before the random ones
/// (e.g. a scaled reward to make the compatible coefficient finite).
DiscriminatorClass random_symmetric_class(int n, std::size_t pairs, double delta, Seed seed,
                                          bool include_zero, const std::vector<Vector>& extra = {});

/// Finite subset of the 1-Lipschitz ball of `metric`: zero and +-(d(., k) -
/// d_mid(k)) where d_mid centers each distance function so its range is
/// symmetric. Every member is 1-Lipschitz.
DiscriminatorClass lipschitz_class(const MetricTable& metric);

} // namespace imlab::discriminators
