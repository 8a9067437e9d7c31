#ifndef QBSC_BOUNDS_HPP
#define QBSC_BOUNDS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qbsc/bigint.hpp"

namespace qbsc {

/// Binary entropy H2(x), with H2(0) = H2(1) = 0.
double binary_entropy(double x);

/// F_alpha(N) = sum_{i=0}^{alpha-1} C(N,i) (D-1)^i, exact.
BigUint f_alpha(std::size_t N, std::size_t D, std::size_t alpha);

/// Entropy upper estimate (D-1)^alpha * 2^{N H2(alpha/N)}; requires
/// N - alpha + 1 > N/D. Strictly dominates f_alpha for 1 <= alpha <= N-1;
/// at alpha = N (reachable only when N < D) the estimate can dip below the
/// exact count, so callers stay inside the protocol range alpha < d <= N.
double f_alpha_bound(std::size_t N, std::size_t D, std::size_t alpha);
/// Same quantity in log2, for parameter ranges where the value overflows.
double f_alpha_bound_log2(std::size_t N, std::size_t D, std::size_t alpha);

struct EpsilonPair {
    double eps1 = 0.0;
    double eps2 = 0.0;
};

/// eps1 factor beta^{d-alpha} (without the shift count) and eps2 = (1-1/l)^alpha.
EpsilonPair epsilons(double beta, std::size_t d, std::size_t alpha, std::size_t l);
/// eps1 = beta^{d-alpha} * F_alpha(N) and eps2 = (1-1/l)^alpha.
EpsilonPair epsilons_full(double beta, std::size_t d, std::size_t alpha, std::size_t l,
                          std::size_t N, std::size_t D);

/// A bound that may be out of its validity region; never an exception.
struct BoundResult {
    bool applicable = false;
    double value = 0.0;
    std::string reason; // why not applicable, empty otherwise
};

/// 1 + 4 r eps2 + 4 r^2 eps1, valid for r*eps1 <= 1/2.
BoundResult binding_bound_simple(std::uint64_t r, double eps1, double eps2);

/// The sharper closed form r eps2 + (sqrt(c1^2 + c3 c2^2) + c1) / (2 c3) with
///   c1 = 1 + r^2 eps1 - r eps2 (1 - r eps1),
///   c2 = 2 r eps2 (1 + r eps1),
///   c3 = 1 - r eps1;
/// valid for c3 > 0 and c1 > 0.
BoundResult binding_bound_exact(std::uint64_t r, double eps1, double eps2);

/// Subspace radius needed for the hedging term: the smallest integer at or
/// above log_{1-1/l}(2^-6 eps / r). Throws for l = 1 (degenerate base).
long long alpha_for_target(std::size_t l, std::uint64_t r, double eps_target);

struct ThirdTermResult {
    bool holds = false;
    double lhs = 0.0; // N H2(alpha/N) + d log2 beta
    double rhs = 0.0; // log2( eps beta^alpha / (8 r^2 (D-1)^alpha) )
};

/// Code-existence inequality deciding whether the eps1 term can be beaten
/// at these parameters.
ThirdTermResult thirdterm_holds(std::size_t N, std::size_t d, std::size_t alpha, double beta,
                                std::uint64_t r, double eps_target, std::size_t D);

struct ConcealingResult {
    double m_bound_bits = 0.0;     // N log2 D
    double n_bits_real = 0.0;      // k log2 q
    std::uint64_t n_bits_ceil = 0; // ceil(k log2 q)
    double ratio = 0.0;            // m_bound / n_real
    double ratio_ceil = 0.0;       // m_bound / n_ceil
    bool concealing = false;       // ratio < 1
};

ConcealingResult concealing_bound(std::size_t N, std::size_t D, std::size_t k, unsigned q);

/// Everything the planner decides about one (code, alpha) candidate.
struct SecurityPlan {
    std::uint64_t r = 0;
    double eps_target = 0.0;
    long long alpha = 0;
    std::size_t l = 0, D = 0;
    unsigned q = 0;
    std::string family;
    std::size_t N = 0, k = 0, d = 0;
    double beta = 0.0, beta_bar = 0.0;
    double eps1 = 0.0, eps2 = 0.0;
    BoundResult bound_simple, bound_exact;
    double concealing_m_bound = 0.0;
    double ratio_m_over_n = 0.0;
    bool feasible = false;
    std::string reason;
};

struct SchemeConstants {
    unsigned q = 0;
    std::size_t D = 0, l = 0;
    double beta = 0.0, beta_bar = 0.0;
};

struct CodeCandidate {
    std::string family; // used for tie-breaking, lexicographic
    unsigned q = 0;
    std::size_t N = 0, k = 0, d = 0;
};

/// Candidate guaranteed to exist by gv_rate at relative distance delta.
CodeCandidate gv_candidate(unsigned q, std::size_t N, double delta);

struct PlanResult {
    SecurityPlan best;                  // feasible=false when nothing works
    std::vector<SecurityPlan> evaluated; // one entry per candidate
};

/// Evaluates every candidate and picks the feasible one with the smallest N
/// (ties: smaller alpha, then family name). When eps_target >= r the binding
/// demand is weaker than the trivial cap and any candidate with d >= 2 works
/// at alpha = 1.
PlanResult plan(std::uint64_t r, double eps_target, const SchemeConstants& scheme,
                const std::vector<CodeCandidate>& candidates);

/// CSV rendering: header + one row per evaluated candidate.
std::string plan_csv(const PlanResult& result);

} // namespace qbsc

#endif
