#include "qbsc/scheme.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace qbsc {

namespace {

std::string fmt_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

EncodingScheme build_scheme(std::vector<StateVector> states, std::size_t l,
                            std::vector<DenseOperator> generators) {
    const std::size_t q = states.size();
    if (q < 2) throw validation_error("scheme: need at least two particle states");
    if (q > 64) throw validation_error("scheme: q > 64 not supported (exhaustive overlap scan)");
    if (l < 1 || q % l != 0)
        throw validation_error("scheme: q must equal l*D for integer D");
    const std::size_t D = q / l;
    if (D < 2) throw validation_error("scheme: particle dimension D must be at least 2");

    for (std::size_t e = 0; e < q; ++e) {
        if (states[e].dim() != D)
            throw validation_error("scheme: state " + std::to_string(e) + " has dim " +
                                   std::to_string(states[e].dim()) + ", expected " +
                                   std::to_string(D));
        if (!states[e].is_normalized(1e-12))
            throw validation_error("scheme: state " + std::to_string(e) + " is not unit norm");
    }

    EncodingScheme scheme;
    scheme.q = q;
    scheme.D = D;
    scheme.l = l;
    scheme.particle_states = std::move(states);
    scheme.group_generators = std::move(generators);

    scheme.gram.resize(q * q);
    for (std::size_t e = 0; e < q; ++e)
        for (std::size_t f = 0; f < q; ++f)
            scheme.gram[e * q + f] =
                inner_product(scheme.particle_states[e], scheme.particle_states[f]);
    // The diagonal is exactly 1 by the unit-norm invariant just validated;
    // pinning it keeps the overlap constants free of rounding residue.
    for (std::size_t e = 0; e < q; ++e) scheme.gram[e * q + e] = complex_t{1.0, 0.0};

    // Each group of D consecutive states must form an orthonormal basis.
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t a = 0; a < D; ++a)
            for (std::size_t b = a + 1; b < D; ++b) {
                const std::size_t e = i * D + a, f = i * D + b;
                if (std::abs(scheme.gram[e * q + f]) > 1e-12)
                    throw validation_error("scheme: basis " + std::to_string(i) +
                                           " is not orthogonal (states " + std::to_string(e) +
                                           ", " + std::to_string(f) + ")");
            }

    double beta_bar = 0.0;
    for (std::size_t e = 0; e < q; ++e)
        for (std::size_t f = 0; f < q; ++f)
            if (e != f) beta_bar = std::max(beta_bar, std::abs(scheme.gram[e * q + f]));
    scheme.beta_bar = beta_bar;
    if (!(beta_bar < 1.0))
        throw validation_error("scheme: two distinct states coincide (beta_bar >= 1)");

    // beta = max |<e|pi(e'')|e'>| over triples not all equal;
    // <e|pi(e'')|e'> = (1-1/l)<e|e'> + (1/l)<e|e''><e''|e'>.
    const double a0 = 1.0 - 1.0 / double(l);
    const double a1 = 1.0 / double(l);
    double beta = 0.0;
    for (std::size_t e = 0; e < q; ++e)
        for (std::size_t f = 0; f < q; ++f)
            for (std::size_t g = 0; g < q; ++g) {
                if (e == f && f == g) continue;
                const complex_t val =
                    a0 * scheme.gram[e * q + f] +
                    a1 * scheme.gram[e * q + g] * scheme.gram[g * q + f];
                beta = std::max(beta, std::abs(val));
            }
    scheme.beta = beta;
    if (!(beta < 1.0))
        throw validation_error("scheme: overlap constant beta is not below 1");

    for (std::size_t gi = 0; gi < scheme.group_generators.size(); ++gi) {
        const DenseOperator& g = scheme.group_generators[gi];
        if (g.dim != D)
            throw validation_error("scheme: generator " + std::to_string(gi) +
                                   " has wrong dimension");
    }
    return scheme;
}

EncodingScheme bb84_scheme() {
    const double s = std::sqrt(0.5);
    std::vector<StateVector> states;
    states.push_back(StateVector({{1.0, 0.0}, {0.0, 0.0}}));
    states.push_back(StateVector({{0.0, 0.0}, {1.0, 0.0}}));
    states.push_back(StateVector({{s, 0.0}, {s, 0.0}}));
    states.push_back(StateVector({{-s, 0.0}, {s, 0.0}}));
    return build_scheme(std::move(states), 2);
}

DenseOperator pi_operator(const EncodingScheme& scheme, Symbol e) {
    if (e >= scheme.q) throw validation_error("pi: symbol out of range");
    const double a0 = 1.0 - 1.0 / double(scheme.l);
    const double a1 = 1.0 / double(scheme.l);
    DenseOperator op(scheme.D, true);
    const StateVector& v = scheme.state(e);
    for (std::size_t r = 0; r < scheme.D; ++r)
        for (std::size_t c = 0; c < scheme.D; ++c) {
            complex_t x = a1 * (v.amps[r] * std::conj(v.amps[c]));
            if (r == c) x += a0;
            op.at(r, c) = x;
        }
    return op;
}

namespace {

void check_symbols(const EncodingScheme& scheme, const Codeword& cw) {
    if (cw.length() == 0) throw validation_error("codeword is empty");
    for (Symbol e : cw.symbols)
        if (e >= scheme.q)
            throw validation_error("codeword symbol " + std::to_string(e) + " out of range");
}

} // namespace

StateVector commitment_state(const EncodingScheme& scheme, const Codeword& cw, std::size_t cap) {
    check_symbols(scheme, cw);
    std::vector<StateVector> parts;
    parts.reserve(cw.length());
    for (Symbol e : cw.symbols) parts.push_back(scheme.state(e));
    return tensor_state(parts, cap);
}

DenseOperator acceptance_operator(const EncodingScheme& scheme, const Codeword& cw,
                                  std::size_t cap) {
    check_symbols(scheme, cw);
    std::vector<DenseOperator> parts;
    parts.reserve(cw.length());
    for (Symbol e : cw.symbols) parts.push_back(pi_operator(scheme, e));
    return tensor_operator(parts, cap);
}

StateVector shifted_state(const EncodingScheme& scheme, const Codeword& cw,
                          std::span<const std::uint16_t> delta, std::size_t cap) {
    check_symbols(scheme, cw);
    if (delta.size() != cw.length())
        throw validation_error("shifted_state: delta length does not match codeword");
    std::vector<StateVector> parts;
    parts.reserve(cw.length());
    for (std::size_t i = 0; i < cw.length(); ++i) {
        if (delta[i] >= scheme.D)
            throw validation_error("shifted_state: delta entry out of range");
        const BasisIndex bi = scheme.basis_of(cw.symbols[i]);
        const std::size_t shifted = bi.basis * scheme.D + (bi.slot + delta[i]) % scheme.D;
        parts.push_back(scheme.state(Symbol(shifted)));
    }
    return tensor_state(parts, cap);
}

GroupSymmetryReport check_group_symmetry(const EncodingScheme& scheme) {
    GroupSymmetryReport report;
    if (scheme.group_generators.empty())
        throw validation_error("check_group_symmetry: scheme has no generators");

    for (std::size_t gi = 0; gi < scheme.group_generators.size(); ++gi) {
        const DenseOperator& g = scheme.group_generators[gi];
        if (g.unitarity_defect() > 1e-10)
            throw validation_error("generator " + std::to_string(gi) + " is not unitary");

        GeneratorAction action;
        action.generator = gi;
        action.basis_map.assign(scheme.l, scheme.l);

        for (std::size_t i = 0; i < scheme.l; ++i) {
            std::vector<StateVector> images;
            for (std::size_t j = 0; j < scheme.D; ++j)
                images.push_back(apply(g, scheme.state(Symbol(i * scheme.D + j))));

            // Find a basis whose states match the images up to phases,
            // one-to-one.
            bool found = false;
            for (std::size_t ip = 0; ip < scheme.l && !found; ++ip) {
                std::vector<bool> used(scheme.D, false);
                bool all_matched = true;
                for (const StateVector& u : images) {
                    bool matched = false;
                    for (std::size_t j = 0; j < scheme.D; ++j) {
                        if (used[j]) continue;
                        const complex_t ov =
                            inner_product(scheme.state(Symbol(ip * scheme.D + j)), u);
                        if (std::abs(std::abs(ov) - 1.0) <= 1e-9) {
                            used[j] = true;
                            matched = true;
                            break;
                        }
                    }
                    if (!matched) {
                        all_matched = false;
                        break;
                    }
                }
                if (all_matched) {
                    action.basis_map[i] = ip;
                    found = true;
                }
            }
            if (!found) {
                report.symmetric = false;
                report.violation = "generator " + std::to_string(gi) + ": image of basis " +
                                   std::to_string(i) + " matches no basis of the family";
                return report;
            }
        }
        report.actions.push_back(std::move(action));
    }
    report.symmetric = true;
    return report;
}

void write_scheme_file(const EncodingScheme& scheme, std::ostream& out) {
    out << "scheme q=" << scheme.q << " D=" << scheme.D << " l=" << scheme.l << "\n";
    for (std::size_t e = 0; e < scheme.q; ++e) {
        out << e << ":";
        for (const complex_t& a : scheme.particle_states[e].amps)
            out << " " << fmt_real(a.real()) << "," << fmt_real(a.imag());
        out << "\n";
    }
}

EncodingScheme parse_scheme_file(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;

    if (!std::getline(in, line)) throw parse_error(1, "empty scheme file");
    ++lineno;
    std::size_t q = 0, D = 0, l = 0;
    if (std::sscanf(line.c_str(), "scheme q=%zu D=%zu l=%zu", &q, &D, &l) != 3)
        throw parse_error(lineno, "expected header `scheme q=<int> D=<int> l=<int>`");
    if (q == 0 || D == 0 || l == 0 || q != l * D)
        throw parse_error(lineno, "header must satisfy q = l*D with positive values");

    std::vector<StateVector> states(q);
    std::vector<bool> seen(q, false);
    for (std::size_t n = 0; n < q; ++n) {
        if (!std::getline(in, line))
            throw parse_error(lineno + 1, "expected " + std::to_string(q) + " state lines");
        ++lineno;
        std::istringstream ls(line);
        std::string label;
        if (!(ls >> label) || label.empty() || label.back() != ':')
            throw parse_error(lineno, "expected `e:` state label");
        std::size_t e = 0;
        try {
            e = std::stoul(label.substr(0, label.size() - 1));
        } catch (...) {
            throw parse_error(lineno, "bad state index `" + label + "`");
        }
        if (e >= q) throw parse_error(lineno, "state index out of range");
        if (seen[e]) throw parse_error(lineno, "duplicate state " + std::to_string(e));
        seen[e] = true;

        StateVector v;
        std::string tok;
        while (ls >> tok) {
            double re = 0, im = 0;
            if (std::sscanf(tok.c_str(), "%lf,%lf", &re, &im) != 2)
                throw parse_error(lineno, "bad amplitude `" + tok + "` (want re,im)");
            if (!std::isfinite(re) || !std::isfinite(im))
                throw parse_error(lineno, "non-finite amplitude `" + tok + "`");
            v.amps.push_back(complex_t{re, im});
        }
        if (v.dim() != D)
            throw parse_error(lineno, "state " + std::to_string(e) + " has " +
                                          std::to_string(v.dim()) + " amplitudes, expected " +
                                          std::to_string(D));
        states[e] = std::move(v);
    }
    try {
        return build_scheme(std::move(states), l);
    } catch (const validation_error& err) {
        throw parse_error(lineno, err.what());
    }
}

} // namespace qbsc
