#include "qbsc/engine.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "qbsc/report.hpp"

namespace qbsc {

std::vector<std::uint16_t> choose_bases(std::size_t N, std::size_t l, RandomSource& rng) {
    if (N == 0 || l == 0) throw validation_error("choose_bases: N and l must be positive");
    std::vector<std::uint16_t> S(N);
    for (auto& s : S) s = std::uint16_t(rng.next_below(l));
    return S;
}

std::vector<double> born_probabilities(const EncodingScheme& scheme, const StateVector& sent,
                                       std::size_t basis) {
    if (sent.dim() != scheme.D) throw validation_error("measure: state dimension != D");
    if (basis >= scheme.l) throw validation_error("measure: basis index out of range");
    std::vector<double> p(scheme.D);
    for (std::size_t j = 0; j < scheme.D; ++j) {
        const complex_t c =
            inner_product(scheme.state(Symbol(basis * scheme.D + j)), sent);
        p[j] = std::norm(c);
    }
    return p;
}

namespace {

void check_channel(const ChannelModel& channel) {
    if (!(channel.p_loss >= 0.0 && channel.p_loss <= 1.0))
        throw validation_error("channel: p_loss must lie in [0,1]");
    if (!(channel.p_depol >= 0.0 && channel.p_depol <= 1.0))
        throw validation_error("channel: p_depol must lie in [0,1]");
}

/// One draw per purpose per particle, consumed unconditionally.
struct ParticleDraws {
    double loss_u, born_u, depol_u;
    std::uint64_t depol_j;
};

ParticleDraws draw_particle(SessionRngs& rngs, std::size_t D) {
    ParticleDraws d;
    d.loss_u = rngs.loss.next_double();
    d.born_u = rngs.born.next_double();
    d.depol_u = rngs.depol.next_double();
    d.depol_j = rngs.depol.next_below(D);
    return d;
}

std::size_t sample_index(const std::vector<double>& probs, double u) {
    double total = 0.0;
    for (double p : probs) total += p;
    if (total <= 0.0) throw validation_error("measure: degenerate outcome distribution");
    double acc = 0.0;
    std::size_t last_nonzero = 0;
    for (std::size_t j = 0; j < probs.size(); ++j) {
        if (probs[j] <= 0.0) continue;
        last_nonzero = j;
        acc += probs[j] / total;
        if (u < acc) return j;
    }
    return last_nonzero; // u landed in the rounding slack at the top
}

Outcome apply_channel(const ParticleDraws& draws, std::size_t born_j,
                      const ChannelModel& channel) {
    if (draws.loss_u < channel.p_loss) return std::nullopt;
    std::size_t j = born_j;
    if (draws.depol_u < channel.p_depol) j = std::size_t(draws.depol_j);
    return Symbol(j);
}

} // namespace

Outcome measure_particle(const EncodingScheme& scheme, const StateVector& sent,
                         std::size_t basis, const ChannelModel& channel, SessionRngs& rngs) {
    check_channel(channel);
    if (!sent.is_normalized(1e-9))
        throw validation_error("measure: particle state is not normalized");
    const std::vector<double> probs = born_probabilities(scheme, sent, basis);
    const ParticleDraws draws = draw_particle(rngs, scheme.D);
    const std::size_t born_j = sample_index(probs, draws.born_u);
    return apply_channel(draws, born_j, channel);
}

CommitRecord run_commit_product(const EncodingScheme& scheme, const Codeword& letters,
                                const ChannelModel& channel, SessionRngs& rngs) {
    CommitRecord rec;
    rec.S = choose_bases(letters.length(), scheme.l, rngs.bases);
    rec.outcomes.reserve(letters.length());
    for (std::size_t i = 0; i < letters.length(); ++i)
        rec.outcomes.push_back(
            measure_particle(scheme, scheme.state(letters.symbols[i]), rec.S[i], channel, rngs));
    return rec;
}

CommitRecord run_commit_joint(const EncodingScheme& scheme, std::size_t N,
                              const StateVector& joint, const ChannelModel& channel,
                              SessionRngs& rngs) {
    check_channel(channel);
    std::size_t expect = 1;
    for (std::size_t i = 0; i < N; ++i) {
        if (expect > kDimCap / scheme.D)
            throw size_error("joint state dimension exceeds cap");
        expect *= scheme.D;
    }
    if (joint.dim() != expect)
        throw validation_error("joint state has dim " + std::to_string(joint.dim()) +
                               ", expected D^N = " + std::to_string(expect));
    if (!joint.is_normalized(1e-9))
        throw validation_error("joint state is not normalized");

    CommitRecord rec;
    rec.S = choose_bases(N, scheme.l, rngs.bases);
    rec.outcomes.reserve(N);

    std::vector<complex_t> psi = joint.amps;
    const std::size_t D = scheme.D;

    std::size_t stride = expect / D; // stride of particle 0
    for (std::size_t i = 0; i < N; ++i) {
        const std::size_t basis = rec.S[i];
        const std::size_t blocks = joint.dim() / (stride * D);

        // c_j(rest) = <i_basis;j | psi_slice(rest)>; p_j = sum |c_j|^2.
        std::vector<std::vector<complex_t>> coef(D);
        std::vector<double> p(D, 0.0);
        for (std::size_t j = 0; j < D; ++j) {
            const StateVector& bvec = scheme.state(Symbol(basis * D + j));
            coef[j].assign(blocks * stride, complex_t{0.0, 0.0});
            for (std::size_t hi = 0; hi < blocks; ++hi)
                for (std::size_t lo = 0; lo < stride; ++lo) {
                    complex_t c{0.0, 0.0};
                    for (std::size_t x = 0; x < D; ++x)
                        c += std::conj(bvec.amps[x]) * psi[(hi * D + x) * stride + lo];
                    coef[j][hi * stride + lo] = c;
                    p[j] += std::norm(c);
                }
        }

        const ParticleDraws draws = draw_particle(rngs, D);
        const std::size_t born_j = sample_index(p, draws.born_u);
        rec.outcomes.push_back(apply_channel(draws, born_j, channel));

        // Collapse onto |basis; born_j> at slot i. A lost particle is still
        // collapsed: projecting and forgetting the result equals tracing out.
        const StateVector& bvec = scheme.state(Symbol(basis * D + born_j));
        const double inv_norm = 1.0 / std::sqrt(p[born_j]);
        for (std::size_t hi = 0; hi < blocks; ++hi)
            for (std::size_t lo = 0; lo < stride; ++lo) {
                const complex_t c = coef[born_j][hi * stride + lo] * inv_norm;
                for (std::size_t x = 0; x < D; ++x)
                    psi[(hi * D + x) * stride + lo] = c * bvec.amps[x];
            }

        stride /= D;
    }
    return rec;
}

VerifyResult verify_open(const EncodingScheme& scheme, const QaryCode& code,
                         std::span<const Symbol> A, std::span<const std::uint16_t> S,
                         std::span<const Outcome> outcomes, std::size_t t) {
    const Codeword E = encode(code, A);
    if (S.size() != E.length() || outcomes.size() != E.length())
        throw validation_error("verify_open: S/outcomes length does not match N");
    VerifyResult out;
    for (std::size_t i = 0; i < E.length(); ++i) {
        const BasisIndex bi = scheme.basis_of(E.symbols[i]);
        if (bi.basis != S[i]) continue;       // wrong basis: nothing to check
        if (!outcomes[i].has_value()) continue; // lost: passes by the decided rule
        if (*outcomes[i] != bi.slot) ++out.y;
    }
    out.accept = out.y <= t;
    return out;
}

namespace {

SessionTranscript make_transcript(const EncodingScheme& scheme, const QaryCode& code,
                                  std::span<const Symbol> A, const CommitRecord& rec,
                                  std::size_t t, std::uint64_t seed, const std::string& mode) {
    SessionTranscript tr;
    tr.q = scheme.q;
    tr.D = scheme.D;
    tr.l = scheme.l;
    tr.beta = scheme.beta;
    tr.code_kind = code.kind;
    tr.N = code.N;
    tr.k = code.k;
    tr.d = code.d;
    tr.seed = seed;
    tr.t = t;
    tr.mode = mode;
    tr.A.assign(A.begin(), A.end());
    tr.E = encode(code, A).symbols;
    tr.S = rec.S;
    tr.outcomes = rec.outcomes;
    const VerifyResult v = verify_open(scheme, code, A, rec.S, rec.outcomes, t);
    tr.y = v.y;
    tr.accept = v.accept;
    return tr;
}

} // namespace

SessionTranscript run_session(const EncodingScheme& scheme, const QaryCode& code,
                              std::span<const Symbol> A, const ChannelModel& channel,
                              std::size_t t, std::uint64_t seed) {
    SessionRngs rngs = SessionRngs::make(seed, 0);
    const Codeword E = encode(code, A);
    const CommitRecord rec = run_commit_product(scheme, E, channel, rngs);
    return make_transcript(scheme, code, A, rec, t, seed, "honest");
}

SessionTranscript run_session_with_state(const EncodingScheme& scheme, const QaryCode& code,
                                         const StateVector& joint, std::span<const Symbol> A,
                                         const ChannelModel& channel, std::size_t t,
                                         std::uint64_t seed, const std::string& mode) {
    SessionRngs rngs = SessionRngs::make(seed, 0);
    const CommitRecord rec = run_commit_joint(scheme, code.N, joint, channel, rngs);
    return make_transcript(scheme, code, A, rec, t, seed, mode);
}

std::size_t suggest_threshold(std::size_t N, std::size_t l, std::size_t D, double p_depol) {
    const double p = (1.0 / double(l)) * p_depol * double(D - 1) / double(D);
    const double mean = double(N) * p;
    const double sigma = std::sqrt(double(N) * p * (1.0 - p));
    return std::size_t(std::ceil(mean + 3.0 * sigma));
}

std::string write_transcript(const SessionTranscript& tr) {
    std::ostringstream out;
    out << "QBSC/1\n";
    out << "scheme q=" << tr.q << " D=" << tr.D << " l=" << tr.l
        << " beta=" << format_real_exact(tr.beta) << "\n";
    out << "code kind=" << tr.code_kind << " N=" << tr.N << " k=" << tr.k << " d=" << tr.d
        << "\n";
    out << "session seed=" << tr.seed << " t=" << tr.t << " mode=" << tr.mode << "\n";
    out << "A";
    for (Symbol a : tr.A) out << " " << a;
    out << "\nE";
    for (Symbol e : tr.E) out << " " << e;
    out << "\nS";
    for (std::uint16_t s : tr.S) out << " " << s;
    out << "\nOUT";
    for (const Outcome& o : tr.outcomes) {
        if (o.has_value())
            out << " " << *o;
        else
            out << " L";
    }
    out << "\ny=" << tr.y << "\n";
    out << "accept=" << (tr.accept ? "true" : "false") << "\n";
    return out.str();
}

namespace {

std::vector<std::string> tokens_after_tag(const std::string& line, const std::string& tag,
                                          std::size_t lineno) {
    std::istringstream ls(line);
    std::string head;
    ls >> head;
    if (head != tag) throw parse_error(lineno, "expected `" + tag + "` line");
    std::vector<std::string> toks;
    std::string t;
    while (ls >> t) toks.push_back(t);
    return toks;
}

} // namespace

SessionTranscript parse_transcript(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    auto next_line = [&]() {
        if (!std::getline(in, line)) throw parse_error(lineno + 1, "unexpected end of transcript");
        ++lineno;
    };

    SessionTranscript tr;
    next_line();
    if (line != "QBSC/1") throw parse_error(lineno, "bad magic, expected `QBSC/1`");

    next_line();
    {
        double beta = 0.0;
        if (std::sscanf(line.c_str(), "scheme q=%zu D=%zu l=%zu beta=%lf", &tr.q, &tr.D, &tr.l,
                        &beta) != 4)
            throw parse_error(lineno, "bad scheme line");
        tr.beta = beta;
        if (tr.q == 0 || tr.D == 0 || tr.l == 0 || tr.q != tr.l * tr.D)
            throw parse_error(lineno, "scheme line must satisfy q = l*D");
    }

    next_line();
    {
        char kind[64] = {0};
        if (std::sscanf(line.c_str(), "code kind=%63s N=%zu k=%zu d=%zu", kind, &tr.N, &tr.k,
                        &tr.d) != 4)
            throw parse_error(lineno, "bad code line");
        tr.code_kind = kind;
    }

    next_line();
    {
        char mode[128] = {0};
        unsigned long long seed = 0;
        if (std::sscanf(line.c_str(), "session seed=%llu t=%zu mode=%127s", &seed, &tr.t,
                        mode) != 3)
            throw parse_error(lineno, "bad session line");
        tr.seed = seed;
        tr.mode = mode;
        if (tr.mode != "honest" && tr.mode.rfind("cheat:", 0) != 0)
            throw parse_error(lineno, "mode must be `honest` or `cheat:<id>`");
    }

    auto parse_symbols = [&](const std::string& tag, std::size_t count,
                             std::size_t limit) -> std::vector<Symbol> {
        next_line();
        const auto toks = tokens_after_tag(line, tag, lineno);
        if (toks.size() != count)
            throw parse_error(lineno, tag + " line has " + std::to_string(toks.size()) +
                                          " symbols, expected " + std::to_string(count));
        std::vector<Symbol> out;
        out.reserve(count);
        for (const auto& t : toks) {
            unsigned long v = 0;
            try {
                v = std::stoul(t);
            } catch (...) {
                throw parse_error(lineno, "bad symbol `" + t + "` on " + tag + " line");
            }
            if (v >= limit)
                throw parse_error(lineno, tag + " symbol " + t + " out of range");
            out.push_back(Symbol(v));
        }
        return out;
    };

    tr.A = parse_symbols("A", tr.k, tr.q);
    tr.E = parse_symbols("E", tr.N, tr.q);
    const std::vector<Symbol> s_raw = parse_symbols("S", tr.N, tr.l);
    tr.S.assign(s_raw.begin(), s_raw.end());

    next_line();
    {
        const auto toks = tokens_after_tag(line, "OUT", lineno);
        if (toks.size() != tr.N)
            throw parse_error(lineno, "OUT line has wrong arity");
        for (const auto& t : toks) {
            if (t == "L") {
                tr.outcomes.push_back(std::nullopt);
                continue;
            }
            unsigned long v = 0;
            try {
                v = std::stoul(t);
            } catch (...) {
                throw parse_error(lineno, "bad outcome `" + t + "`");
            }
            if (v >= tr.D) throw parse_error(lineno, "outcome out of range");
            tr.outcomes.push_back(Symbol(v));
        }
    }

    next_line();
    if (std::sscanf(line.c_str(), "y=%zu", &tr.y) != 1)
        throw parse_error(lineno, "bad y line");

    next_line();
    if (line == "accept=true")
        tr.accept = true;
    else if (line == "accept=false")
        tr.accept = false;
    else
        throw parse_error(lineno, "bad accept line");

    // Cross-check y and accept against the recorded outcomes; the mapping
    // e -> (e/D, e%D) needs only D.
    std::size_t y = 0;
    for (std::size_t i = 0; i < tr.N; ++i) {
        const std::size_t basis = tr.E[i] / tr.D, slot = tr.E[i] % tr.D;
        if (basis != tr.S[i] || !tr.outcomes[i].has_value()) continue;
        if (*tr.outcomes[i] != slot) ++y;
    }
    if (y != tr.y)
        throw parse_error(lineno, "y=" + std::to_string(tr.y) +
                                      " is inconsistent with outcomes (recount " +
                                      std::to_string(y) + ")");
    if (tr.accept != (tr.y <= tr.t))
        throw parse_error(lineno, "accept flag is inconsistent with y and t");
    return tr;
}

} // namespace qbsc
