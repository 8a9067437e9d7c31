#include "qbsc/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "qbsc/codes.hpp"
#include "qbsc/report.hpp"

namespace qbsc {

double binary_entropy(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

BigUint f_alpha(std::size_t N, std::size_t D, std::size_t alpha) {
    if (D < 1) throw validation_error("f_alpha: D must be positive");
    if (alpha > N + 1) throw validation_error("f_alpha: alpha must be <= N + 1");
    BigUint sum(0);
    BigUint term(1); // C(N,0) (D-1)^0
    for (std::size_t i = 0; i < alpha; ++i) {
        if (i > 0) {
            // term_i = term_{i-1} * (N-i+1)/i * (D-1)
            term.mul_small(N - i + 1);
            term.div_small_exact(std::uint32_t(i));
            term.mul_small(D - 1);
        }
        sum += term;
    }
    return sum;
}

double f_alpha_bound_log2(std::size_t N, std::size_t D, std::size_t alpha) {
    if (!(double(N) - double(alpha) + 1.0 > double(N) / double(D)))
        throw validation_error("f_alpha_bound: requires N - alpha + 1 > N/D");
    if (alpha > N) throw validation_error("f_alpha_bound: alpha must be <= N");
    return double(alpha) * std::log2(double(D - 1)) +
           double(N) * binary_entropy(double(alpha) / double(N));
}

double f_alpha_bound(std::size_t N, std::size_t D, std::size_t alpha) {
    return std::exp2(f_alpha_bound_log2(N, D, alpha));
}

EpsilonPair epsilons(double beta, std::size_t d, std::size_t alpha, std::size_t l) {
    if (alpha >= d) throw validation_error("epsilons: requires alpha < d");
    if (alpha == 0) throw validation_error("epsilons: requires alpha > 0");
    if (beta < 0.0 || beta >= 1.0) throw validation_error("epsilons: beta must be in [0,1)");
    if (l < 1) throw validation_error("epsilons: l must be positive");
    EpsilonPair out;
    out.eps1 = std::pow(beta, double(d - alpha));
    out.eps2 = std::pow(1.0 - 1.0 / double(l), double(alpha));
    return out;
}

EpsilonPair epsilons_full(double beta, std::size_t d, std::size_t alpha, std::size_t l,
                          std::size_t N, std::size_t D) {
    EpsilonPair out = epsilons(beta, d, alpha, l);
    // Exact shift count, converted to floating point only here.
    out.eps1 *= f_alpha(N, D, alpha).to_double();
    return out;
}

BoundResult binding_bound_simple(std::uint64_t r, double eps1, double eps2) {
    BoundResult out;
    const double rd = double(r);
    if (!(rd * eps1 <= 0.5)) {
        out.reason = "requires r*eps1 <= 1/2 (got " + format_real(rd * eps1) + ")";
        return out;
    }
    out.applicable = true;
    out.value = 1.0 + 4.0 * rd * eps2 + 4.0 * rd * rd * eps1;
    return out;
}

BoundResult binding_bound_exact(std::uint64_t r, double eps1, double eps2) {
    BoundResult out;
    const double rd = double(r);
    const double c3 = 1.0 - rd * eps1;
    if (!(c3 > 0.0)) {
        out.reason = "requires r*eps1 < 1";
        return out;
    }
    const double c1 = 1.0 + rd * rd * eps1 - rd * eps2 * (1.0 - rd * eps1);
    if (!(c1 > 0.0)) {
        out.reason = "requires c1 > 0 (got " + format_real(c1) + ")";
        return out;
    }
    const double c2 = 2.0 * rd * eps2 * (1.0 + rd * eps1);
    out.applicable = true;
    out.value = rd * eps2 + (std::sqrt(c1 * c1 + c3 * c2 * c2) + c1) / (2.0 * c3);
    return out;
}

long long alpha_for_target(std::size_t l, std::uint64_t r, double eps_target) {
    if (l < 2)
        throw validation_error("alpha_for_target: degenerate for l = 1 (log base 0)");
    if (!(eps_target > 0.0) || r == 0)
        throw validation_error("alpha_for_target: eps and r must be positive");
    const double base = 1.0 - 1.0 / double(l);
    const double arg = std::exp2(-6.0) * eps_target / double(r);
    const double x = std::log2(arg) / std::log2(base);
    // guard against 26.000000000000004-style drift before taking the ceiling
    return (long long)std::ceil(x - 1e-9);
}

ThirdTermResult thirdterm_holds(std::size_t N, std::size_t d, std::size_t alpha, double beta,
                                std::uint64_t r, double eps_target, std::size_t D) {
    if (!(beta > 0.0) || !(beta < 1.0))
        throw validation_error("thirdterm: beta must be in (0,1)");
    ThirdTermResult out;
    out.lhs = double(N) * binary_entropy(double(alpha) / double(N)) +
              double(d) * std::log2(beta);
    out.rhs = std::log2(eps_target) + double(alpha) * std::log2(beta) - 3.0 -
              2.0 * std::log2(double(r)) - double(alpha) * std::log2(double(D - 1));
    out.holds = out.lhs <= out.rhs;
    return out;
}

ConcealingResult concealing_bound(std::size_t N, std::size_t D, std::size_t k, unsigned q) {
    if (N == 0 || D < 2 || k == 0 || q < 2)
        throw validation_error("concealing_bound: arguments must be positive (D, q >= 2)");
    ConcealingResult out;
    out.m_bound_bits = double(N) * std::log2(double(D));
    out.n_bits_real = double(k) * std::log2(double(q));
    out.n_bits_ceil = std::uint64_t(std::ceil(out.n_bits_real));
    out.ratio = out.m_bound_bits / out.n_bits_real;
    out.ratio_ceil = out.m_bound_bits / double(out.n_bits_ceil);
    out.concealing = out.ratio < 1.0;
    return out;
}

CodeCandidate gv_candidate(unsigned q, std::size_t N, double delta) {
    CodeCandidate c;
    c.family = "gv";
    c.q = q;
    c.N = N;
    c.d = std::size_t(std::ceil(delta * double(N)));
    if (c.d < 1) c.d = 1;
    const double rate = gv_rate(q, double(c.d) / double(N));
    c.k = std::size_t(std::floor(rate * double(N)));
    if (c.k < 1) c.k = 1;
    return c;
}

namespace {

SecurityPlan evaluate_candidate(std::uint64_t r, double eps_target,
                                const SchemeConstants& scheme, const CodeCandidate& cand,
                                long long alpha, bool vacuous) {
    SecurityPlan p;
    p.r = r;
    p.eps_target = eps_target;
    p.l = scheme.l;
    p.D = scheme.D;
    p.q = scheme.q;
    p.beta = scheme.beta;
    p.beta_bar = scheme.beta_bar;
    p.family = cand.family;
    p.N = cand.N;
    p.k = cand.k;
    p.d = cand.d;
    p.alpha = alpha;

    const ConcealingResult conc = concealing_bound(cand.N, scheme.D, cand.k, scheme.q);
    p.concealing_m_bound = conc.m_bound_bits;
    p.ratio_m_over_n = conc.ratio;

    std::string notes;
    if (!conc.concealing) notes = "not-concealing(m/n>=1)";

    if (alpha < 1) {
        p.feasible = false;
        p.reason = "alpha below 1";
        return p;
    }
    if (std::size_t(alpha) >= cand.d) {
        p.feasible = false;
        p.reason = "alpha >= d";
        return p;
    }

    // Epsilons in log2 first so huge N cannot overflow on the way.
    const double log2_eps1 = double(cand.d - std::size_t(alpha)) * std::log2(scheme.beta) +
                             f_alpha(cand.N, scheme.D, std::size_t(alpha)).log2();
    p.eps1 = std::exp2(log2_eps1);
    p.eps2 = std::pow(1.0 - 1.0 / double(scheme.l), double(alpha));
    p.bound_simple = binding_bound_simple(r, p.eps1, p.eps2);
    p.bound_exact = binding_bound_exact(r, p.eps1, p.eps2);

    if (vacuous) {
        p.feasible = true;
        p.reason = "binding vacuous: eps_target >= r";
        if (!notes.empty()) p.reason += "; " + notes;
        return p;
    }

    bool ok = true;
    std::string why;
    try {
        const ThirdTermResult tt =
            thirdterm_holds(cand.N, cand.d, std::size_t(alpha), scheme.beta, r, eps_target,
                            scheme.D);
        if (!tt.holds) {
            ok = false;
            why = "code-existence inequality fails (lhs " + format_real(tt.lhs) + " > rhs " +
                  format_real(tt.rhs) + ")";
        }
    } catch (const validation_error& err) {
        ok = false;
        why = err.what();
    }
    p.feasible = ok;
    p.reason = ok ? "ok" : why;
    if (!notes.empty()) p.reason += "; " + notes;
    return p;
}

} // namespace

PlanResult plan(std::uint64_t r, double eps_target, const SchemeConstants& scheme,
                const std::vector<CodeCandidate>& candidates) {
    if (candidates.empty()) throw validation_error("plan: empty search space");
    if (r < 1 || !(eps_target > 0.0))
        throw validation_error("plan: r and eps_target must be positive");

    const bool vacuous = eps_target >= double(r);
    long long alpha = 1;
    std::string alpha_note;
    if (!vacuous) {
        if (scheme.l < 2) {
            // No second basis: eps2 never decays and the hedging term cannot
            // be beaten. Report every candidate as infeasible rather than throw.
            PlanResult out;
            out.evaluated.reserve(candidates.size());
            for (const auto& cand : candidates) {
                SecurityPlan p = evaluate_candidate(r, eps_target, scheme, cand, 0, false);
                p.feasible = false;
                p.reason = "degenerate l=1: basis-mismatch term never decays";
                out.evaluated.push_back(std::move(p));
            }
            out.best = out.evaluated.front();
            return out;
        }
        alpha = alpha_for_target(scheme.l, r, eps_target);
        if (alpha < 1) alpha = 1;
    }

    PlanResult out;
    out.evaluated.reserve(candidates.size());
    for (const auto& cand : candidates)
        out.evaluated.push_back(evaluate_candidate(r, eps_target, scheme, cand, alpha, vacuous));

    const SecurityPlan* best = nullptr;
    for (const auto& p : out.evaluated) {
        if (!p.feasible) continue;
        if (!best || p.N < best->N || (p.N == best->N && p.alpha < best->alpha) ||
            (p.N == best->N && p.alpha == best->alpha && p.family < best->family))
            best = &p;
    }
    if (best) {
        out.best = *best;
    } else {
        // name the binding constraint using the most favorable candidate
        const SecurityPlan* widest = &out.evaluated.front();
        for (const auto& p : out.evaluated)
            if (p.N > widest->N) widest = &p;
        out.best = *widest;
        out.best.feasible = false;
    }
    return out;
}

std::string plan_csv(const PlanResult& result) {
    CsvWriter csv({"q", "D", "l", "r", "eps_target", "alpha", "N", "k", "d", "beta", "eps1",
                   "eps2", "bound_simple", "bound_exact", "m_bound", "ratio", "feasible",
                   "reason"});
    for (const auto& p : result.evaluated) {
        csv.begin_row();
        csv.field(p.q);
        csv.field(p.D);
        csv.field(p.l);
        csv.field(p.r);
        csv.field(format_real(p.eps_target));
        csv.field(p.alpha);
        csv.field(p.N);
        csv.field(p.k);
        csv.field(p.d);
        csv.field(format_real(p.beta));
        csv.field(format_real(p.eps1));
        csv.field(format_real(p.eps2));
        csv.field(p.bound_simple.applicable ? format_real(p.bound_simple.value) : "");
        csv.field(p.bound_exact.applicable ? format_real(p.bound_exact.value) : "");
        csv.field(format_real(p.concealing_m_bound));
        csv.field(format_real(p.ratio_m_over_n));
        csv.field(p.feasible ? "true" : "false");
        csv.field(p.reason);
    }
    return csv.str();
}

} // namespace qbsc
