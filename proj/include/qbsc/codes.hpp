#ifndef QBSC_CODES_HPP
#define QBSC_CODES_HPP

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qbsc/scheme.hpp" // Symbol, Codeword

namespace qbsc {

/// GF(q) arithmetic for prime powers q <= 256, via full add/mul tables.
/// Prime fields are integers mod q; extension fields use the lexicographically
/// smallest monic irreducible polynomial over GF(p), with element labels read
/// as base-p digit strings of the polynomial coefficients. The table in
/// irreducible_poly_description() documents the polynomial per q.
class FieldTables {
public:
    unsigned q() const { return q_; }
    unsigned characteristic() const { return p_; }
    unsigned degree() const { return m_; }

    Symbol add(Symbol a, Symbol b) const { return add_[a * q_ + b]; }
    Symbol sub(Symbol a, Symbol b) const { return add(a, neg_[b]); }
    Symbol mul(Symbol a, Symbol b) const { return mul_[a * q_ + b]; }
    Symbol neg(Symbol a) const { return neg_[a]; }
    Symbol inv(Symbol a) const;
    Symbol pow(Symbol a, std::uint64_t e) const;

    std::string irreducible_poly_description() const;

private:
    friend FieldTables field_make(unsigned q);
    unsigned q_ = 0, p_ = 0, m_ = 0;
    std::vector<Symbol> poly_; // monic irreducible, coefficients low to high
    std::vector<Symbol> add_, mul_, neg_;
};

/// Builds GF(q); throws validation_error unless q is a prime power <= 256.
/// Field axioms are verified exhaustively for q <= 16 and on 1000 sampled
/// triples above that.
FieldTables field_make(unsigned q);

enum class DistanceStatus { Exact, CertifiedLowerBound, DeclaredOnly };
std::string to_string(DistanceStatus s);
DistanceStatus distance_status_from_string(const std::string& s);

/// A q-ary (N, k, d) linear code given by a k x N generator matrix.
struct QaryCode {
    std::string kind; // repetition | rs | random-linear | external
    unsigned q = 0;
    std::size_t N = 0;
    std::size_t k = 0;
    std::vector<Symbol> generator; // k*N row major
    std::size_t d = 0;
    DistanceStatus d_status = DistanceStatus::DeclaredOnly;
    std::shared_ptr<const FieldTables> field;

    Symbol gen_at(std::size_t row, std::size_t col) const { return generator[row * N + col]; }
};

/// Linear encoding: codeword_j = sum_i message_i * G[i][j] over GF(q).
Codeword encode(const QaryCode& code, std::span<const Symbol> message);

QaryCode repetition(unsigned q, std::size_t N);
/// Reed-Solomon over evaluation points {0,...,N-1}; message symbols are
/// polynomial coefficients, lowest degree first. Requires N <= q, k <= N.
QaryCode reed_solomon(unsigned q, std::size_t N, std::size_t k);
/// Deterministic random full-rank generator for the given seed.
QaryCode random_linear(unsigned q, std::size_t N, std::size_t k, std::uint64_t seed);

struct MinDistanceResult {
    std::size_t d = 0;
    DistanceStatus status = DistanceStatus::DeclaredOnly;
};

/// Minimum nonzero codeword weight. Full enumeration when q^k <= budget
/// (exact); otherwise the best weight over a seeded random sample, reported
/// as declared-only rather than pretending to a certificate.
MinDistanceResult min_distance(const QaryCode& code, std::uint64_t budget = 1ULL << 20);

/// Gilbert-Varshamov guaranteed rate 1 - H_q(delta) for 0 < delta <= 1 - 1/q.
double gv_rate(unsigned q, double delta);

/// Code definition file: header
///   `code kind=<kind> q=<q> N=<N> k=<k> d=<d> d_status=<status>`
/// followed by k generator rows of N space-separated symbols.
void write_code_file(const QaryCode& code, std::ostream& out);
QaryCode parse_code_file(std::istream& in);

/// Parses compact specs like `rep:q=4,N=3`, `rs:q=5,N=4,k=2`,
/// `rand:q=4,N=8,k=3,seed=1`; used by the CLI and by config files.
QaryCode code_from_spec(const std::string& spec);

} // namespace qbsc

#endif
