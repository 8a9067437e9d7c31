#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "qbsc/codes.hpp"
#include "qbsc/random.hpp"

using namespace qbsc;

namespace {

// Independent oracle: enumerate all codewords and take the minimum pairwise
// Hamming distance. Only for q^k <= 4096.
std::size_t oracle_pairwise_distance(const QaryCode& code) {
    std::vector<std::vector<Symbol>> words;
    std::vector<Symbol> msg(code.k, 0);
    for (;;) {
        words.push_back(encode(code, msg).symbols);
        std::size_t pos = 0;
        while (pos < code.k) {
            if (Symbol(msg[pos] + 1) < code.q) {
                ++msg[pos];
                break;
            }
            msg[pos] = 0;
            ++pos;
        }
        if (pos == code.k) break;
    }
    std::size_t best = code.N + 1;
    for (std::size_t i = 0; i < words.size(); ++i)
        for (std::size_t j = i + 1; j < words.size(); ++j) {
            std::size_t dist = 0;
            for (std::size_t p = 0; p < code.N; ++p) dist += (words[i][p] != words[j][p]);
            if (dist < best) best = dist;
        }
    return best;
}

} // namespace

TEST_CASE("field_make") {
    SUBCASE("prime field arithmetic is mod q") {
        const FieldTables f = field_make(5);
        CHECK(f.mul(3, 4) == 2);
        CHECK(f.add(3, 4) == 2);
        for (Symbol a = 0; a < 5; ++a) CHECK(f.add(a, 0) == a);
    }
    SUBCASE("GF(4) uses x^2+x+1 with base-2 digit labels") {
        const FieldTables f = field_make(4);
        CHECK(f.mul(2, 2) == 3); // x*x = x+1
        CHECK(f.mul(2, 3) == 1); // x(x+1) = x^2+x = 1
        CHECK(f.add(2, 3) == 1);
        CHECK(f.irreducible_poly_description() == "x^2 + x + 1");
    }
    SUBCASE("all prime powers up to 16 verify exhaustively") {
        for (unsigned q : {2u, 3u, 4u, 5u, 7u, 8u, 9u, 11u, 13u, 16u}) {
            const FieldTables f = field_make(q);
            CHECK(f.q() == q);
        }
    }
    SUBCASE("larger fields pass sampled axioms") {
        const FieldTables f = field_make(256);
        CHECK(f.characteristic() == 2);
        CHECK(f.degree() == 8);
        const FieldTables f25 = field_make(25);
        CHECK(f25.characteristic() == 5);
    }
    SUBCASE("rejects non prime powers and oversize q") {
        CHECK_THROWS_AS(field_make(6), validation_error);
        CHECK_THROWS_AS(field_make(12), validation_error);
        CHECK_THROWS_AS(field_make(1), validation_error);
        CHECK_THROWS_AS(field_make(257), validation_error);
    }
}

TEST_CASE("encode") {
    SUBCASE("repetition") {
        const QaryCode code = repetition(4, 3);
        const std::vector<Symbol> msg{2};
        CHECK(encode(code, msg).symbols == std::vector<Symbol>{2, 2, 2});
        CHECK(code.d == 3);
        CHECK(code.d_status == DistanceStatus::Exact);
    }
    SUBCASE("Reed-Solomon evaluates polynomials at 0..N-1") {
        const QaryCode code = reed_solomon(5, 4, 2);
        CHECK(encode(code, std::vector<Symbol>{1, 0}).symbols ==
              std::vector<Symbol>{1, 1, 1, 1});
        CHECK(encode(code, std::vector<Symbol>{0, 1}).symbols ==
              std::vector<Symbol>{0, 1, 2, 3});
        CHECK(code.d == 3);
        CHECK(code.d_status == DistanceStatus::Exact);
    }
    SUBCASE("rejects wrong message length and bad symbols") {
        const QaryCode code = repetition(4, 3);
        CHECK_THROWS_AS(encode(code, std::vector<Symbol>{1, 2}), validation_error);
        CHECK_THROWS_AS(encode(code, std::vector<Symbol>{4}), validation_error);
    }
    SUBCASE("linearity (property)") {
        RandomSource rng(31);
        for (const QaryCode& code :
             {reed_solomon(5, 5, 3), random_linear(4, 8, 3, 77), repetition(9, 6)}) {
            const FieldTables& f = *code.field;
            for (int trial = 0; trial < 1000; ++trial) {
                std::vector<Symbol> a(code.k), b(code.k), sum(code.k);
                for (std::size_t i = 0; i < code.k; ++i) {
                    a[i] = Symbol(rng.next_below(code.q));
                    b[i] = Symbol(rng.next_below(code.q));
                    sum[i] = f.add(a[i], b[i]);
                }
                const Codeword ea = encode(code, a), eb = encode(code, b),
                               es = encode(code, sum);
                for (std::size_t j = 0; j < code.N; ++j)
                    CHECK(es.symbols[j] == f.add(ea.symbols[j], eb.symbols[j]));
            }
        }
    }
}

TEST_CASE("code constructors") {
    SUBCASE("random_linear is deterministic per seed") {
        const QaryCode a = random_linear(4, 8, 3, 1);
        const QaryCode b = random_linear(4, 8, 3, 1);
        const QaryCode c = random_linear(4, 8, 3, 2);
        CHECK(a.generator == b.generator);
        CHECK(a.generator != c.generator);
        CHECK(a.d >= 1);
    }
    SUBCASE("constructor preconditions") {
        CHECK_THROWS_AS(repetition(4, 0), validation_error);
        CHECK_THROWS_AS(reed_solomon(5, 6, 2), validation_error); // N > q
        CHECK_THROWS_AS(reed_solomon(5, 4, 5), validation_error); // k > N
        CHECK_THROWS_AS(random_linear(4, 4, 0, 1), validation_error); // zero code
    }
    SUBCASE("Singleton bound holds for every constructed code (property)") {
        for (const QaryCode& code :
             {repetition(4, 5), reed_solomon(7, 7, 3), reed_solomon(5, 4, 2),
              random_linear(4, 8, 3, 9), random_linear(3, 10, 4, 5)}) {
            CHECK(code.d <= code.N - code.k + 1);
        }
    }
}

TEST_CASE("min_distance") {
    SUBCASE("repetition is exact") {
        const MinDistanceResult r = min_distance(repetition(4, 5));
        CHECK(r.d == 5);
        CHECK(r.status == DistanceStatus::Exact);
    }
    SUBCASE("rs(7,6,3) enumerates to the MDS value") {
        const MinDistanceResult r = min_distance(reed_solomon(7, 6, 3));
        CHECK(r.d == 4);
        CHECK(r.status == DistanceStatus::Exact);
    }
    SUBCASE("agrees with the pairwise oracle (property)") {
        for (const QaryCode& code :
             {reed_solomon(5, 4, 2), reed_solomon(7, 6, 3), random_linear(4, 6, 3, 3),
              random_linear(3, 7, 4, 11), repetition(3, 4)}) {
            const MinDistanceResult r = min_distance(code);
            REQUIRE(r.status == DistanceStatus::Exact);
            CHECK(r.d == oracle_pairwise_distance(code));
        }
    }
    SUBCASE("over-budget enumeration degrades honestly") {
        const QaryCode code = random_linear(4, 12, 4, 13);
        const MinDistanceResult r = min_distance(code, 64); // 4^4 = 256 > 64
        CHECK(r.status == DistanceStatus::DeclaredOnly);
        CHECK(r.d >= min_distance(code).d); // sample can only overestimate
    }
}

TEST_CASE("gv_rate") {
    SUBCASE("frozen quaternary value near one percent distance") {
        CHECK(gv_rate(4, 0.01) == doctest::Approx(0.9516786195484386).epsilon(1e-12));
        CHECK(gv_rate(4, 0.01) >= 0.95);
    }
    SUBCASE("binary rate vanishes at half distance") {
        CHECK(gv_rate(2, 0.5) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("small delta approaches rate 1") {
        CHECK(gv_rate(4, 1e-9) > 0.9999999);
    }
    SUBCASE("monotone decreasing in delta (property)") {
        for (unsigned q : {2u, 4u, 16u}) {
            const double upper = 1.0 - 1.0 / double(q);
            double prev = 1.0;
            for (int i = 1; i <= 40; ++i) {
                const double delta = upper * double(i) / 41.0;
                const double rate = gv_rate(q, delta);
                CHECK(rate < prev);
                prev = rate;
            }
        }
    }
    SUBCASE("domain errors") {
        CHECK_THROWS_AS(gv_rate(4, 0.0), validation_error);
        CHECK_THROWS_AS(gv_rate(4, 0.76), validation_error);
        CHECK_THROWS_AS(gv_rate(1, 0.1), validation_error);
    }
}

TEST_CASE("code file round trip") {
    const QaryCode code = reed_solomon(5, 4, 2);
    std::ostringstream out;
    write_code_file(code, out);

    std::istringstream in(out.str());
    const QaryCode back = parse_code_file(in);
    CHECK(back.kind == code.kind);
    CHECK(back.q == code.q);
    CHECK(back.N == code.N);
    CHECK(back.k == code.k);
    CHECK(back.d == code.d);
    CHECK(back.d_status == code.d_status);
    CHECK(back.generator == code.generator);

    SUBCASE("parse rejects bad headers and rows") {
        std::istringstream bad1("bogus\n");
        CHECK_THROWS_AS(parse_code_file(bad1), parse_error);
        std::istringstream bad2("code kind=rs q=5 N=4 k=2 d=3 d_status=exact\n0 1 2\n");
        CHECK_THROWS_AS(parse_code_file(bad2), parse_error);
        std::istringstream bad3("code kind=rs q=5 N=4 k=2 d=3 d_status=maybe\n");
        CHECK_THROWS_AS(parse_code_file(bad3), parse_error);
    }
}

TEST_CASE("code_from_spec") {
    const QaryCode rep = code_from_spec("rep:q=4,N=3");
    CHECK(rep.kind == "repetition");
    CHECK(rep.N == 3);
    const QaryCode rs = code_from_spec("rs:q=5,N=4,k=2");
    CHECK(rs.kind == "rs");
    const QaryCode rnd = code_from_spec("rand:q=4,N=8,k=3,seed=1");
    CHECK(rnd.kind == "random-linear");
    CHECK(rnd.generator == random_linear(4, 8, 3, 1).generator);
    CHECK_THROWS_AS(code_from_spec("nope:q=4"), validation_error);
    CHECK_THROWS_AS(code_from_spec("rand:q=4,N=8,k=3"), validation_error);
}

TEST_CASE("code file parser survives random mutations") {
    std::ostringstream os;
    write_code_file(reed_solomon(5, 4, 2), os);
    const std::string golden = os.str();
    RandomSource rng(101);
    for (int trial = 0; trial < 300; ++trial) {
        std::string text = golden;
        const std::size_t pos = rng.next_below(text.size());
        text[pos] = char('!' + rng.next_below(90));
        std::istringstream in(text);
        try {
            parse_code_file(in);
        } catch (const parse_error&) {
        }
    }
    CHECK(true); // reaching here means no crash and no foreign exception
}

TEST_CASE("extension-field moduli match the published table") {
    CHECK(field_make(8).irreducible_poly_description() == "x^3 + x + 1");
    CHECK(field_make(9).irreducible_poly_description() == "x^2 + 1");
    CHECK(field_make(16).irreducible_poly_description() == "x^4 + x + 1");
    CHECK(field_make(25).irreducible_poly_description() == "x^2 + 2");
    CHECK(field_make(27).irreducible_poly_description() == "x^3 + 2x + 1");
    CHECK(field_make(256).irreducible_poly_description() == "x^8 + x^4 + x^3 + x + 1");
}
