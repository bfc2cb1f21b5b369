#pragma once

// Integer-partition multiplicity vectors and Faa di Bruno weights.
//
// A multiplicity vector (q_1,...,q_n) with sum_r r*q_r = n indexes one term
// of the n-th derivative of exp(H) at 0; the full derivative is
//   n! * sum over vectors of prod_r (1/q_r!) * (H^(r)(0)/r!)^{q_r}.

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "risim/errors.hpp"

namespace risim {

inline constexpr int kDefaultPartitionCap = 24;

struct PartitionMultiset {
    int order = 0;                   // n
    std::vector<int> multiplicities; // q_1..q_n
};

namespace detail {

// Recursive descent by largest part; parts chosen non-increasing so each
// multiset is visited exactly once.
template <class Visitor>
void visit_partitions(int remaining, int max_part, std::vector<int>& mult, const Visitor& visit) {
    if (remaining == 0) {
        visit(mult);
        return;
    }
    for (int part = std::min(remaining, max_part); part >= 1; --part) {
        ++mult[part - 1];
        visit_partitions(remaining - part, part, mult, visit);
        --mult[part - 1];
    }
}

} // namespace detail

/// Streams every multiplicity vector of order n to `visit` in a fixed
/// (largest-part-descending) order. Throws capacity_error when n > cap.
template <class Visitor>
void for_each_partition(int n, const Visitor& visit, int cap = kDefaultPartitionCap) {
    if (n < 1) throw std::invalid_argument("for_each_partition: n must be >= 1");
    if (n > cap) throw capacity_error("for_each_partition: order exceeds cap");
    std::vector<int> mult(static_cast<std::size_t>(n), 0);
    detail::visit_partitions(n, n, mult, visit);
}

/// Materialized enumeration; count equals the partition number p(n).
inline std::vector<PartitionMultiset> enumerate_partitions(int n, int cap = kDefaultPartitionCap) {
    std::vector<PartitionMultiset> out;
    for_each_partition(n, [&](const std::vector<int>& mult) {
        out.push_back({n, mult});
    }, cap);
    return out;
}

/// prod_r (1/q_r!) * h_values[r-1]^{q_r} for one multiplicity vector, where
/// h_values[r-1] = H^(r)(0)/r!. Caller multiplies by n! and sums over the
/// enumeration to obtain the n-th derivative of exp(H) at 0.
template <class Scalar>
Scalar faa_di_bruno_weight(const PartitionMultiset& p, const std::vector<Scalar>& h_values) {
    if (h_values.size() < p.multiplicities.size())
        throw std::invalid_argument("faa_di_bruno_weight: h_values shorter than partition order");
    Scalar w{1};
    for (std::size_t r = 0; r < p.multiplicities.size(); ++r) {
        const int q = p.multiplicities[r];
        for (int j = 0; j < q; ++j) w *= h_values[r] / static_cast<double>(j + 1);
    }
    return w;
}

/// n-th derivative of exp(H) at 0 given h_values[r-1] = H^(r)(0)/r!,
/// assembled from the full partition enumeration.
template <class Scalar>
Scalar exp_derivative(int n, const std::vector<Scalar>& h_values, int cap = kDefaultPartitionCap) {
    if (static_cast<int>(h_values.size()) < n)
        throw std::invalid_argument("exp_derivative: need h_values up to order n");
    Scalar sum{0};
    for_each_partition(n, [&](const std::vector<int>& mult) {
        Scalar w{1};
        for (int r = 1; r <= n; ++r) {
            const int q = mult[static_cast<std::size_t>(r - 1)];
            for (int j = 0; j < q; ++j) w *= h_values[static_cast<std::size_t>(r - 1)] / static_cast<double>(j + 1);
        }
        sum += w;
    }, cap);
    double fact = 1.0;
    for (int i = 2; i <= n; ++i) fact *= i;
    return sum * fact;
}

} // namespace risim
