#ifndef HEATCALC_IBP_REDUCE_HPP
#define HEATCALC_IBP_REDUCE_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "heatcalc/term_algebra.hpp"

namespace heatcalc
{

/// Raised when a rewrite chain does not reach canonical form within the
/// configured step bound. Indicates a gap in the rewrite rules.
class ReductionDepthError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Canonical iff the highest derivative order appears at least squared
/// (this covers the pure powers f1^K/f^{K-1}, K >= 2). The density f itself
/// counts as canonical.
bool is_canonical(const DerivMonomial &m);

struct ReductionStep
{
    DerivMonomial monomial;
    std::string rule;
    /// Integral-equivalent replacement for one unit of `monomial`.
    Combination replacement;
};

struct ReductionTrace
{
    std::vector<ReductionStep> steps;
    Combination final;
};

struct ReduceOptions
{
    /// Rewrites allowed per input term before ReductionDepthError.
    int max_steps_per_term = 10000;
};

/// Integration-by-parts rewrite of one non-canonical monomial. With m* the
/// top order and e the exponent of f_{m*-1}, f_{m*-1}^e f_{m*} is the
/// derivative of f_{m*-1}^{e+1}/(e+1); the boundary term is dropped.
Combination ibp_rewrite(const DerivMonomial &m);

/// Rewrites every non-canonical monomial until only canonical monomials
/// remain. The result has the same integral over y as the input.
Combination reduce(const Combination &c, const ReduceOptions &opts = {});
Combination reduce(const Combination &c, ReductionTrace &trace, const ReduceOptions &opts = {});

/// Replays a trace from `input`; equals trace.final for a genuine trace.
Combination replay(const Combination &input, const ReductionTrace &trace);

/// Canonical integrand C_n with  integral C_n dy = 2 d^n/dt^n h(X + sqrt(t) Z).
Combination entropy_derivative(int n, const ReduceOptions &opts = {});

struct IdentityCheck
{
    std::string label;
    Combination lhs;
    Combination expected;
    Combination residual;
    bool passed = false;
};

/// The thirteen weight-6 and weight-8 integration-by-parts identities used to
/// build the third- and fourth-order canonical forms, each checked exactly.
std::vector<IdentityCheck> verify_ibp_identities();

} // namespace heatcalc

#endif
