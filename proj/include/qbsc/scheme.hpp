#ifndef QBSC_SCHEME_HPP
#define QBSC_SCHEME_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qbsc/linalg.hpp"

namespace qbsc {

using Symbol = std::uint16_t;

/// Position of a particle state inside the basis family: state e lives in
/// basis M(i) at slot j, with e = i*D + j.
struct BasisIndex {
    std::size_t basis;
    std::size_t slot;
};

/// A length-N word of q-ary symbols.
struct Codeword {
    std::vector<Symbol> symbols;

    Codeword() = default;
    explicit Codeword(std::vector<Symbol> s) : symbols(std::move(s)) {}
    std::size_t length() const { return symbols.size(); }
    bool operator==(const Codeword&) const = default;
};

/// The q particle states in a D-dimensional space, grouped into l orthonormal
/// bases, together with the overlap constants used throughout the security
/// analysis:
///   beta_bar = max |<e|e'>| over distinct pairs,
///   beta     = max |<e|pi(e'')|e'>| over triples that are not all equal.
struct EncodingScheme {
    std::size_t q = 0;
    std::size_t D = 0;
    std::size_t l = 0;
    std::vector<StateVector> particle_states; // index e -> |e>, dim D each
    double beta_bar = 0.0;
    double beta = 0.0;
    std::vector<DenseOperator> group_generators; // optional, may be empty

    BasisIndex basis_of(Symbol e) const { return {e / D, e % D}; }
    const StateVector& state(Symbol e) const { return particle_states[e]; }
    /// <e|e'> from the cached Gram matrix.
    complex_t overlap(Symbol e, Symbol e_prime) const { return gram[e * q + e_prime]; }

    std::vector<complex_t> gram; // q*q letter overlaps, filled by build_scheme
};

/// Validates the basis-family invariants, computes beta_bar and beta by
/// exhaustive enumeration (q <= 64 enforced), and caches the Gram matrix.
EncodingScheme build_scheme(std::vector<StateVector> states, std::size_t l,
                            std::vector<DenseOperator> generators = {});

/// The standard 4-state qubit preset: q=4, D=2, l=2, beta=3/4.
EncodingScheme bb84_scheme();

/// Per-particle acceptance operator (1 - 1/l) I + (1/l)|e><e|.
DenseOperator pi_operator(const EncodingScheme& scheme, Symbol e);

/// |e_1> x ... x |e_N> for a codeword.
StateVector commitment_state(const EncodingScheme& scheme, const Codeword& cw,
                             std::size_t cap = kDimCap);

/// pi(e_1) x ... x pi(e_N); Hermitian PSD with the commitment state as its
/// eigenvalue-1 eigenvector.
DenseOperator acceptance_operator(const EncodingScheme& scheme, const Codeword& cw,
                                  std::size_t cap = kDimCap);

/// Eigenvector of the acceptance operator reached by shifting each letter
/// within its own basis by delta[i] (mod D); eigenvalue (1-1/l)^{HW(delta)}.
StateVector shifted_state(const EncodingScheme& scheme, const Codeword& cw,
                          std::span<const std::uint16_t> delta, std::size_t cap = kDimCap);

struct GeneratorAction {
    std::size_t generator;               // index into group_generators
    std::vector<std::size_t> basis_map;  // basis i is carried onto basis_map[i]
};

struct GroupSymmetryReport {
    bool symmetric = false;
    std::vector<GeneratorAction> actions; // one per generator when symmetric
    std::string violation;                // first failure, empty when symmetric
};

/// Checks that every generator permutes the basis family, comparing vectors
/// up to a complex phase (|<u|v>| = 1 within 1e-9).
GroupSymmetryReport check_group_symmetry(const EncodingScheme& scheme);

/// Scheme definition file: header `scheme q=<q> D=<D> l=<l>`, then one line
/// per state `e: re,im re,im ...` with D complex entries.
void write_scheme_file(const EncodingScheme& scheme, std::ostream& out);
EncodingScheme parse_scheme_file(std::istream& in);

} // namespace qbsc

#endif
