#pragma once

#include "varitool/report.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

namespace varitool {

/// Randomized checks of the lemmas on seeded admissible instances. Each
/// report has lhs = worst observed ratio (conclusion over bound) and rhs = 1,
/// except the calculus suite, which compares refinements used to refinements
/// allowed.
VerificationReport iteration_suite(int instances, std::uint64_t seed);
VerificationReport calculus_suite(int instances, std::uint64_t seed, int refinements = 2);
/// Random exponents when `pq` is empty, otherwise the fixed pair (p, q);
/// DomainError unless 1 <= q < p < inf.
VerificationReport weak_lp_suite(int instances, std::uint64_t seed,
                                 std::optional<std::pair<double, double>> pq = std::nullopt);
VerificationReport superlevel_suite(int instances, std::uint64_t seed);

/// f(x) = x^(-1/p) on (0, 1]: both sides of the weak embedding equal
/// (1 - q/p)^(-1/q).
VerificationReport weak_lp_equality(double p, double q);
/// Hat function 1 - |x| on [-1, 1] with `atoms` midpoint atoms and p = 2;
/// lhs and rhs approach sqrt(2/3) and 2 sqrt(2)/3. The report compares the
/// larger relative error to `tolerance`.
VerificationReport superlevel_hat(int atoms, double tolerance = 0.01);

}  // namespace varitool
