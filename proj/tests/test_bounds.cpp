#include <doctest.h>

#include <cmath>

#include "qbsc/bounds.hpp"
#include "qbsc/random.hpp"

using namespace qbsc;

TEST_CASE("f_alpha") {
    SUBCASE("alpha = 1 counts only the zero shift") {
        CHECK(f_alpha(10, 2, 1) == BigUint(1));
        CHECK(f_alpha(100000, 7, 1) == BigUint(1));
    }
    SUBCASE("small closed forms") {
        CHECK(f_alpha(10, 2, 2) == BigUint(11));
        CHECK(f_alpha(5, 2, 3) == BigUint(16));
        CHECK(f_alpha(5, 3, 3) == BigUint(1 + 5 * 2 + 10 * 4));
    }
    SUBCASE("alpha = 0 is the empty sum") { CHECK(f_alpha(7, 2, 0) == BigUint(0)); }
    SUBCASE("huge arguments stay exact") {
        const BigUint v = f_alpha(100000, 2, 26);
        CHECK(v.log2() == doctest::Approx(331.55553061526393).epsilon(1e-9));
        CHECK(v.to_string().size() == 100); // ~6.43e99
    }
}

TEST_CASE("f_alpha_bound") {
    SUBCASE("dominates the exact count at a benign point") {
        CHECK(f_alpha(100, 2, 5).to_double() < f_alpha_bound(100, 2, 5));
    }
    SUBCASE("alpha = 1 exceeds 1 once N is nontrivial") {
        for (std::size_t N : {2, 10, 50}) CHECK(f_alpha_bound(N, 2, 1) > 1.0);
    }
    SUBCASE("the worked-example scale stays finite") {
        const double b = f_alpha_bound(100000, 2, 26);
        CHECK(std::isfinite(b));
        CHECK(b > f_alpha(100000, 2, 26).to_double());
    }
    SUBCASE("precondition violations throw") {
        CHECK_THROWS_AS(f_alpha_bound(10, 2, 7), validation_error); // N-a+1 <= N/D
    }
    SUBCASE("dominance grid over protocol-valid radii (property)") {
        // 1 <= alpha <= N-1; at alpha = N (only reachable when N < D) the
        // entropy factor collapses and the estimate genuinely fails.
        for (std::size_t D : {2, 3, 4}) {
            for (std::size_t N = 2; N <= 200; N += (N < 20 ? 1 : 7)) {
                for (std::size_t alpha = 1; alpha + 1 <= N; ++alpha) {
                    if (!(double(N) - double(alpha) + 1.0 > double(N) / double(D))) continue;
                    const double lhs = f_alpha(N, D, alpha).log2();
                    const double rhs = f_alpha_bound_log2(N, D, alpha);
                    CHECK(lhs < rhs);
                }
            }
        }
    }
}

TEST_CASE("epsilons") {
    SUBCASE("worked example") {
        const EpsilonPair e = epsilons_full(0.75, 3, 1, 2, 3, 2);
        CHECK(e.eps1 == doctest::Approx(0.5625).epsilon(1e-12));
        CHECK(e.eps2 == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("factor-only variant") {
        const EpsilonPair e = epsilons(0.75, 3, 1, 2);
        CHECK(e.eps1 == doctest::Approx(0.5625).epsilon(1e-12));
    }
    SUBCASE("single-basis scheme has no second chance") {
        const EpsilonPair e = epsilons(0.5, 4, 2, 1);
        CHECK(e.eps2 == 0.0);
    }
    SUBCASE("eps1 vanishes with beta") {
        // beta^(d-alpha) * F_9(10) = 1e-8 * 1013
        const EpsilonPair e = epsilons_full(1e-8, 10, 9, 2, 10, 2);
        CHECK(e.eps1 == doctest::Approx(1.013e-5).epsilon(1e-12));
        CHECK(epsilons_full(1e-12, 10, 9, 2, 10, 2).eps1 < e.eps1);
    }
    SUBCASE("alpha >= d is a domain error") {
        CHECK_THROWS_AS(epsilons(0.75, 3, 3, 2), validation_error);
    }
}

TEST_CASE("binding_bound_simple") {
    SUBCASE("perfect case collapses to 1") {
        const BoundResult b = binding_bound_simple(5, 0.0, 0.0);
        CHECK(b.applicable);
        CHECK(b.value == 1.0);
    }
    SUBCASE("direct substitution") {
        const double e = std::exp2(-10);
        const BoundResult b = binding_bound_simple(2, e, e);
        CHECK(b.applicable);
        CHECK(b.value == doctest::Approx(1.0 + 24.0 * e).epsilon(1e-12));
    }
    SUBCASE("threshold rule at r*eps1 = 1/2") {
        CHECK(binding_bound_simple(2, 0.25, 0.0).applicable);
        CHECK(!binding_bound_simple(2, 0.3, 0.0).applicable);
    }
}

TEST_CASE("binding_bound_exact") {
    SUBCASE("perfect case is exactly 1") {
        for (std::uint64_t r : {1ull, 2ull, 1024ull}) {
            const BoundResult b = binding_bound_exact(r, 0.0, 0.0);
            CHECK(b.applicable);
            CHECK(b.value == 1.0);
        }
    }
    SUBCASE("frozen small-epsilon value") {
        const BoundResult b = binding_bound_exact(2, 1e-6, 1e-6);
        CHECK(b.applicable);
        CHECK(b.value == doctest::Approx(1.000006000016).epsilon(1e-12));
    }
    SUBCASE("closed form tops a grid search over the free parameter (oracle)") {
        RandomSource rng(37);
        for (int trial = 0; trial < 25; ++trial) {
            const std::uint64_t r = 1 + rng.next_below(64);
            const double eps1 = rng.next_double() * 0.4 / double(r);
            const double eps2 = rng.next_double() * 0.5;
            const BoundResult b = binding_bound_exact(r, eps1, eps2);
            if (!b.applicable) continue;
            const double c1 = 1.0 + double(r) * double(r) * eps1 -
                              double(r) * eps2 * (1.0 - double(r) * eps1);
            const double c2 = 2.0 * double(r) * eps2 * (1.0 + double(r) * eps1);
            const double c3 = 1.0 - double(r) * eps1;
            double grid_best = 0.0;
            for (int i = 0; i <= 40000; ++i) {
                const double S = double(i) * 0.001;
                grid_best = std::max(grid_best,
                                     double(r) * eps2 + (c1 + c2 * S) / (c3 + S * S));
            }
            CHECK(b.value >= grid_best - 1e-9);
            CHECK(b.value <= grid_best + 1e-3); // optimum lies on the grid up to step size
        }
    }
    SUBCASE("monotone in eps1") {
        double prev = binding_bound_exact(4, 0.0, 0.01).value;
        for (double e1 : {0.01, 0.05, 0.1, 0.2}) {
            const BoundResult b = binding_bound_exact(4, e1, 0.01);
            REQUIRE(b.applicable);
            CHECK(b.value >= prev);
            prev = b.value;
        }
    }
    SUBCASE("inapplicable regions are reported, not thrown") {
        CHECK(!binding_bound_exact(2, 0.5, 0.0).applicable); // c3 = 0
        CHECK(!binding_bound_exact(2, 0.0, 1.0).applicable); // c1 < 0
    }
    SUBCASE("never exceeds the rough estimate when both apply (property)") {
        RandomSource rng(41);
        int both = 0;
        while (both < 1000) {
            const std::uint64_t r = 2 + rng.next_below(4095);
            const double eps1 = rng.next_double() * 0.5 / double(r);
            const double eps2 = rng.next_double();
            const BoundResult simple = binding_bound_simple(r, eps1, eps2);
            const BoundResult exact = binding_bound_exact(r, eps1, eps2);
            if (!simple.applicable || !exact.applicable) continue;
            ++both;
            CHECK(exact.value <= simple.value + 1e-9);
        }
    }
}

TEST_CASE("alpha_for_target") {
    SUBCASE("worked example") { CHECK(alpha_for_target(2, 1 << 10, std::exp2(-10)) == 26); }
    SUBCASE("exact power of two") { CHECK(alpha_for_target(2, 1, std::exp2(-6)) == 12); }
    SUBCASE("larger l needs larger alpha") {
        const long long a2 = alpha_for_target(2, 64, 0.001);
        const long long a4 = alpha_for_target(4, 64, 0.001);
        const long long a8 = alpha_for_target(8, 64, 0.001);
        CHECK(a4 > a2);
        CHECK(a8 > a4);
    }
    SUBCASE("l = 1 is degenerate") {
        CHECK_THROWS_AS(alpha_for_target(1, 4, 0.1), validation_error);
    }
    SUBCASE("result meets the half-target goal (property)") {
        RandomSource rng(43);
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t l = 2 + rng.next_below(6);
            const std::uint64_t r = 1 + rng.next_below(1 << 12);
            const double eps = std::exp2(-double(1 + rng.next_below(20)));
            const long long alpha = alpha_for_target(l, r, eps);
            if (alpha < 0) continue;
            const double eps2 = std::pow(1.0 - 1.0 / double(l), double(alpha));
            CHECK(4.0 * double(r) * eps2 <= eps / 2.0 + 1e-12);
        }
    }
}

TEST_CASE("thirdterm_holds") {
    SUBCASE("the worked parameter set holds with frozen sides") {
        const ThirdTermResult t =
            thirdterm_holds(100000, 1000, 26, 0.75, 1 << 10, std::exp2(-10), 2);
        CHECK(t.holds);
        CHECK(t.lhs == doctest::Approx(-67.89308528394326).epsilon(1e-9));
        CHECK(t.rhs == doctest::Approx(-43.79097498124994).epsilon(1e-9));
    }
    SUBCASE("no distance, no feasibility") {
        const ThirdTermResult t = thirdterm_holds(1000, 0, 26, 0.75, 4, 0.01, 2);
        CHECK(!t.holds);
    }
    SUBCASE("monotone in d (property)") {
        double prev_margin = -1e300;
        for (std::size_t d : {100, 400, 800, 1200}) {
            const ThirdTermResult t = thirdterm_holds(10000, d, 26, 0.75, 16, 0.01, 2);
            const double margin = t.rhs - t.lhs;
            CHECK(margin >= prev_margin);
            prev_margin = margin;
        }
    }
}

TEST_CASE("concealing_bound") {
    SUBCASE("worked ratio") {
        const ConcealingResult c = concealing_bound(100000, 2, 95000, 4);
        CHECK(c.m_bound_bits == doctest::Approx(100000.0).epsilon(1e-15));
        CHECK(c.ratio == doctest::Approx(0.5263157894736842).epsilon(1e-12));
        CHECK(c.ratio < 0.53);
        CHECK(c.concealing);
    }
    SUBCASE("rate-1 quaternary code gives one half") {
        const ConcealingResult c = concealing_bound(1000, 2, 1000, 4);
        CHECK(c.ratio == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("too many qubits per bit is flagged") {
        const ConcealingResult c = concealing_bound(100, 2, 40, 4);
        CHECK(c.ratio >= 1.0);
        CHECK(!c.concealing);
    }
    SUBCASE("ceiling variant is also reported") {
        const ConcealingResult c = concealing_bound(10, 2, 3, 5);
        CHECK(c.n_bits_ceil == 7); // ceil(3 log2 5) = ceil(6.97)
        CHECK(c.ratio_ceil == doctest::Approx(10.0 / 7.0).epsilon(1e-12));
    }
}

TEST_CASE("plan") {
    SchemeConstants bb84;
    bb84.q = 4;
    bb84.D = 2;
    bb84.l = 2;
    bb84.beta = 0.75;
    bb84.beta_bar = std::sqrt(0.5);

    SUBCASE("worked sweep settles on the large block length") {
        std::vector<CodeCandidate> cands;
        for (std::size_t N : {1000, 10000, 100000}) cands.push_back(gv_candidate(4, N, 0.01));
        const PlanResult r = plan(1 << 10, std::exp2(-10), bb84, cands);
        REQUIRE(r.best.feasible);
        CHECK(r.best.N == 100000);
        CHECK(r.best.alpha == 26);
        CHECK(r.best.k == 95167);
        CHECK(r.best.d == 1000);
        CHECK(r.best.ratio_m_over_n < 0.53);
        CHECK(double(r.best.k) / double(r.best.N) >= 0.95);
        CHECK(r.evaluated.size() == 3);
    }
    SUBCASE("small repetition space is infeasible and names the constraint") {
        std::vector<CodeCandidate> cands;
        for (std::size_t N = 9; N <= 64; ++N) {
            CodeCandidate c;
            c.family = "rep";
            c.q = 4;
            c.N = N;
            c.k = 1;
            c.d = N;
            cands.push_back(c);
        }
        const PlanResult r = plan(2, 0.5, bb84, cands);
        CHECK(!r.best.feasible);
        CHECK(r.best.reason.find("code-existence") != std::string::npos);
    }
    SUBCASE("vacuous binding target accepts the smallest candidate at alpha 1") {
        std::vector<CodeCandidate> cands;
        for (std::size_t N : {3, 5}) {
            CodeCandidate c;
            c.family = "rep";
            c.q = 4;
            c.N = N;
            c.k = 1;
            c.d = N;
            cands.push_back(c);
        }
        const PlanResult r = plan(2, 2.0, bb84, cands);
        REQUIRE(r.best.feasible);
        CHECK(r.best.alpha == 1);
        CHECK(r.best.N == 3);
        CHECK(r.best.reason.find("vacuous") != std::string::npos);
    }
    SUBCASE("empty search space is an error") {
        CHECK_THROWS_AS(plan(2, 0.5, bb84, {}), validation_error);
    }
    SUBCASE("csv has the documented header and one row per candidate") {
        std::vector<CodeCandidate> cands{gv_candidate(4, 1000, 0.01)};
        const PlanResult r = plan(4, 0.125, bb84, cands);
        const std::string csv = plan_csv(r);
        CHECK(csv.rfind("q,D,l,r,eps_target,alpha,N,k,d,beta,eps1,eps2,bound_simple,"
                        "bound_exact,m_bound,ratio,feasible,reason\n",
                        0) == 0);
        std::size_t lines = 0;
        for (char ch : csv) lines += (ch == '\n');
        CHECK(lines == 2);
    }
}

TEST_CASE("gv_candidate construction") {
    const CodeCandidate c = gv_candidate(4, 100000, 0.01);
    CHECK(c.N == 100000);
    CHECK(c.d == 1000);
    CHECK(c.k == 95167); // floor(N * gv_rate(4, 0.01))
}
