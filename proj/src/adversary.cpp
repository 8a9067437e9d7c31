#include "qbsc/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "qbsc/report.hpp"

namespace qbsc {

namespace {

std::string message_label(const Message& m) {
    std::string out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (i) out += ".";
        out += std::to_string(m[i]);
    }
    return out;
}

Symbol shift_letter(const EncodingScheme& scheme, Symbol e, std::uint16_t delta) {
    const BasisIndex bi = scheme.basis_of(e);
    return Symbol(bi.basis * scheme.D + (bi.slot + delta) % scheme.D);
}

/// Tr rho P for product sent letters against an opened codeword:
/// product over positions of <e|pi(e')|e> = (1-1/l) + (1/l)|<e|e'>|^2.
double product_acceptance(const EncodingScheme& scheme, const Codeword& sent,
                          const Codeword& opened) {
    if (sent.length() != opened.length())
        throw validation_error("acceptance: codeword lengths differ");
    const double a0 = 1.0 - 1.0 / double(scheme.l);
    const double a1 = 1.0 / double(scheme.l);
    double acc = 1.0;
    for (std::size_t i = 0; i < sent.length(); ++i)
        acc *= a0 + a1 * std::norm(scheme.overlap(sent.symbols[i], opened.symbols[i]));
    return acc;
}

/// P_E |psi> without materializing P_E: applies pi(e_i) on each slot.
StateVector apply_acceptance_factored(const EncodingScheme& scheme, const Codeword& cw,
                                      const StateVector& psi) {
    const std::size_t D = scheme.D;
    std::size_t dim = 1;
    for (std::size_t i = 0; i < cw.length(); ++i) dim *= D;
    if (psi.dim() != dim) throw validation_error("apply_acceptance: dimension mismatch");

    StateVector cur = psi;
    StateVector next;
    next.amps.resize(dim);
    std::size_t stride = dim / D;
    for (std::size_t i = 0; i < cw.length(); ++i) {
        const DenseOperator op = pi_operator(scheme, cw.symbols[i]);
        const std::size_t blocks = dim / (stride * D);
        for (std::size_t hi = 0; hi < blocks; ++hi)
            for (std::size_t lo = 0; lo < stride; ++lo)
                for (std::size_t r = 0; r < D; ++r) {
                    complex_t s{0.0, 0.0};
                    for (std::size_t c = 0; c < D; ++c)
                        s += op.at(r, c) * cur.amps[(hi * D + c) * stride + lo];
                    next.amps[(hi * D + r) * stride + lo] = s;
                }
        std::swap(cur, next);
        stride /= D;
    }
    return cur;
}

} // namespace

std::string CheatStrategy::id() const {
    std::string base;
    switch (kind) {
        case Kind::SendWrongCommitment: base = "wrong"; break;
        case Kind::Superposition: base = "superposition"; break;
        case Kind::Mixture: base = "mixture"; break;
        case Kind::CustomState: base = "custom"; break;
    }
    return base + (open_best_of ? "-best" : "-fixed" + std::to_string(open_fixed));
}

void validate_strategy(const CheatStrategy& strategy, const QaryCode& code) {
    if (strategy.strings.empty()) throw validation_error("strategy: no candidate strings");
    std::set<Message> seen;
    for (const Message& m : strategy.strings) {
        if (m.size() != code.k)
            throw validation_error("strategy: string has length " + std::to_string(m.size()) +
                                   ", expected k = " + std::to_string(code.k));
        for (Symbol s : m)
            if (s >= code.q) throw validation_error("strategy: symbol out of range");
        if (!seen.insert(m).second)
            throw validation_error("strategy: duplicate string " + message_label(m));
    }
    switch (strategy.kind) {
        case CheatStrategy::Kind::Superposition: {
            if (strategy.amplitudes.size() != strategy.strings.size())
                throw validation_error("strategy: need one amplitude per string");
            double norm = 0.0;
            for (const complex_t& a : strategy.amplitudes) norm += std::norm(a);
            if (std::abs(norm - 1.0) > 1e-9)
                throw validation_error("strategy: amplitudes are not unit-normalized");
            break;
        }
        case CheatStrategy::Kind::Mixture: {
            if (strategy.weights.size() != strategy.strings.size())
                throw validation_error("strategy: need one weight per string");
            double sum = 0.0;
            for (double w : strategy.weights) {
                if (w < 0.0) throw validation_error("strategy: negative weight");
                sum += w;
            }
            if (std::abs(sum - 1.0) > 1e-9)
                throw validation_error("strategy: weights do not sum to 1");
            break;
        }
        case CheatStrategy::Kind::CustomState:
            if (!strategy.custom_state.has_value())
                throw validation_error("strategy: custom-state kind without a state");
            break;
        case CheatStrategy::Kind::SendWrongCommitment: break;
    }
    if (!strategy.open_best_of && strategy.open_fixed >= strategy.strings.size())
        throw validation_error("strategy: fixed open index out of range");
}

DenseOperator build_Q(const EncodingScheme& scheme, const QaryCode& code,
                      const std::vector<Message>& strings, std::size_t cap) {
    if (strings.empty()) throw validation_error("build_Q: no strings");
    std::set<Message> seen;
    for (const Message& m : strings)
        if (!seen.insert(m).second)
            throw validation_error("build_Q: duplicate string " + message_label(m));

    DenseOperator Q;
    bool first = true;
    for (const Message& m : strings) {
        const Codeword cw = encode(code, m);
        DenseOperator P = acceptance_operator(scheme, cw, cap);
        if (first) {
            Q = std::move(P);
            first = false;
        } else {
            Q += P;
        }
    }
    Q.hermitian = true;
    return Q;
}

LambdaMaxResult optimal_cheat_value(const DenseOperator& Q) { return lambda_max(Q); }

double exact_acceptance(const StateVector& sent, const EncodingScheme& scheme,
                        const QaryCode& code, const Message& opened) {
    const Codeword cw = encode(code, opened);
    const StateVector image = apply_acceptance_factored(scheme, cw, sent);
    const complex_t v = inner_product(sent, image);
    if (std::abs(v.imag()) > 1e-10)
        throw validation_error("exact_acceptance: imaginary residue");
    return v.real();
}

double exact_acceptance_mixture(const std::vector<std::pair<double, StateVector>>& mixture,
                                const EncodingScheme& scheme, const QaryCode& code,
                                const Message& opened) {
    double acc = 0.0;
    for (const auto& [w, state] : mixture) acc += w * exact_acceptance(state, scheme, code, opened);
    return acc;
}

namespace {

/// Enumerates shift vectors with HW(dJ) < alpha, invoking f for each.
void for_each_small_shift(std::size_t N, std::size_t D, std::size_t alpha,
                          std::vector<std::uint16_t>& dj, std::size_t pos, std::size_t weight,
                          const std::function<void(const std::vector<std::uint16_t>&)>& f) {
    if (pos == N) {
        f(dj);
        return;
    }
    dj[pos] = 0;
    for_each_small_shift(N, D, alpha, dj, pos + 1, weight, f);
    if (weight + 1 < alpha) {
        for (std::uint16_t v = 1; v < D; ++v) {
            dj[pos] = v;
            for_each_small_shift(N, D, alpha, dj, pos + 1, weight + 1, f);
        }
        dj[pos] = 0;
    }
}

std::vector<std::uint16_t> random_shift(RandomSource& rng, std::size_t N, std::size_t D,
                                        std::size_t min_w, std::size_t max_w) {
    std::vector<std::uint16_t> dj(N, 0);
    const std::size_t w = min_w + std::size_t(rng.next_below(max_w - min_w + 1));
    // choose w distinct positions
    std::vector<std::size_t> order(N);
    for (std::size_t i = 0; i < N; ++i) order[i] = i;
    for (std::size_t i = 0; i < w; ++i) {
        const std::size_t j = i + std::size_t(rng.next_below(N - i));
        std::swap(order[i], order[j]);
        dj[order[i]] = std::uint16_t(1 + rng.next_below(D - 1));
    }
    return dj;
}

double shifted_pair_overlap(const EncodingScheme& scheme, const Codeword& a,
                            const std::vector<std::uint16_t>& da, const Codeword& b,
                            const std::vector<std::uint16_t>& db) {
    complex_t prod{1.0, 0.0};
    for (std::size_t i = 0; i < a.length(); ++i) {
        const Symbol ea = shift_letter(scheme, a.symbols[i], da[i]);
        const Symbol eb = shift_letter(scheme, b.symbols[i], db[i]);
        prod *= scheme.overlap(ea, eb);
        if (prod == complex_t{0.0, 0.0}) return 0.0;
    }
    return std::abs(prod);
}

} // namespace

OrthogonalityAudit orthogonality_audit(const EncodingScheme& scheme, const QaryCode& code,
                                       const std::vector<Message>& strings, std::size_t alpha,
                                       std::uint64_t budget, std::uint64_t seed) {
    if (alpha < 1 || alpha >= code.d)
        throw validation_error("orthogonality_audit: requires 1 <= alpha < d");
    if (strings.size() < 2)
        throw validation_error("orthogonality_audit: need at least two strings");

    OrthogonalityAudit audit;
    audit.pair_bound = std::pow(scheme.beta_bar, double(code.d));
    audit.shift_bound = std::pow(scheme.beta_bar, double(code.d - alpha));

    std::vector<Codeword> codewords;
    codewords.reserve(strings.size());
    for (const Message& m : strings) codewords.push_back(encode(code, m));

    const std::vector<std::uint16_t> zero(code.N, 0);
    for (std::size_t i = 0; i < codewords.size(); ++i)
        for (std::size_t j = i + 1; j < codewords.size(); ++j) {
            const double ov =
                shifted_pair_overlap(scheme, codewords[i], zero, codewords[j], zero);
            audit.max_pair_overlap = std::max(audit.max_pair_overlap, ov);
            ++audit.pairs_checked;
        }
    audit.pairs_ok = audit.max_pair_overlap <= audit.pair_bound + 1e-10;

    // Cross-string shifted pairs with HW < alpha on both sides.
    const double shift_count = f_alpha(code.N, scheme.D, alpha).to_double();
    const double pair_total = double(strings.size()) * double(strings.size() - 1) / 2.0 *
                              shift_count * shift_count;
    audit.exhaustive = pair_total <= double(budget);

    if (audit.exhaustive) {
        for (std::size_t i = 0; i < codewords.size(); ++i)
            for (std::size_t j = i + 1; j < codewords.size(); ++j) {
                std::vector<std::uint16_t> da(code.N, 0), db(code.N, 0);
                for_each_small_shift(
                    code.N, scheme.D, alpha, da, 0, 0,
                    [&](const std::vector<std::uint16_t>& da_fixed) {
                        std::vector<std::uint16_t> inner(code.N, 0);
                        for_each_small_shift(
                            code.N, scheme.D, alpha, inner, 0, 0,
                            [&](const std::vector<std::uint16_t>& db_fixed) {
                                const double ov = shifted_pair_overlap(
                                    scheme, codewords[i], da_fixed, codewords[j], db_fixed);
                                audit.max_shift_overlap =
                                    std::max(audit.max_shift_overlap, ov);
                                ++audit.shifts_checked;
                            });
                    });
            }
    } else {
        RandomSource rng(seed);
        const std::uint64_t samples = std::max<std::uint64_t>(budget / 2, 1000);
        const std::size_t max_w = std::min(alpha - 1, code.N);
        for (std::uint64_t s = 0; s < samples; ++s) {
            const std::size_t i = std::size_t(rng.next_below(strings.size()));
            std::size_t j = std::size_t(rng.next_below(strings.size() - 1));
            if (j >= i) ++j;
            const auto da = random_shift(rng, code.N, scheme.D, 0, max_w);
            const auto db = random_shift(rng, code.N, scheme.D, 0, max_w);
            const double ov = shifted_pair_overlap(scheme, codewords[i], da, codewords[j], db);
            audit.max_shift_overlap = std::max(audit.max_shift_overlap, ov);
            ++audit.shifts_checked;
        }
    }
    audit.shifts_ok = audit.max_shift_overlap <= audit.shift_bound + 1e-10;
    return audit;
}

EigenstructureAudit eigenstructure_audit(const EncodingScheme& scheme, const QaryCode& code,
                                         const Message& message, std::uint64_t min_samples,
                                         std::uint64_t seed) {
    const Codeword cw = encode(code, message);
    const double decay = 1.0 - 1.0 / double(scheme.l);

    double dim = 1.0;
    for (std::size_t i = 0; i < code.N; ++i) dim *= double(scheme.D);

    EigenstructureAudit audit;
    audit.exhaustive = dim <= 4096.0;

    auto check = [&](const std::vector<std::uint16_t>& dj) {
        std::size_t hw = 0;
        for (std::uint16_t v : dj) hw += (v != 0);
        const StateVector s = shifted_state(scheme, cw, dj);
        const StateVector image = apply_acceptance_factored(scheme, cw, s);
        const double eig = std::pow(decay, double(hw));
        double rsq = 0.0;
        for (std::size_t x = 0; x < s.dim(); ++x)
            rsq += std::norm(image.amps[x] - eig * s.amps[x]);
        audit.max_residual = std::max(audit.max_residual, std::sqrt(rsq));
        ++audit.checked;
    };

    if (audit.exhaustive) {
        std::vector<std::uint16_t> dj(code.N, 0);
        // odometer over all D^N shifts
        for (;;) {
            check(dj);
            std::size_t pos = 0;
            while (pos < code.N) {
                if (++dj[pos] < scheme.D) break;
                dj[pos] = 0;
                ++pos;
            }
            if (pos == code.N) break;
        }
    } else {
        RandomSource rng(seed);
        for (std::uint64_t s = 0; s < min_samples; ++s) {
            std::vector<std::uint16_t> dj(code.N);
            for (auto& v : dj) v = std::uint16_t(rng.next_below(scheme.D));
            check(dj);
        }
    }
    return audit;
}

ContractionAudit contraction_audit(const EncodingScheme& scheme, const QaryCode& code,
                         const Message& message, std::size_t alpha, std::uint64_t trials,
                         std::uint64_t seed) {
    if (alpha > code.N) throw validation_error("contraction_audit: alpha > N");
    const Codeword cw = encode(code, message);
    ContractionAudit audit;
    audit.bound = std::pow(1.0 - 1.0 / double(scheme.l), double(alpha));
    audit.trials = trials;

    RandomSource rng(seed);
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        // random superposition of a few far shifts (HW >= alpha)
        const std::size_t terms = 1 + std::size_t(rng.next_below(8));
        StateVector phi;
        for (std::size_t m = 0; m < terms; ++m) {
            const auto dj = random_shift(rng, code.N, scheme.D, alpha, code.N);
            StateVector s = shifted_state(scheme, cw, dj);
            const complex_t coeff{rng.next_double() - 0.5, rng.next_double() - 0.5};
            if (phi.dim() == 0) phi.amps.assign(s.dim(), complex_t{0.0, 0.0});
            for (std::size_t x = 0; x < s.dim(); ++x) phi.amps[x] += coeff * s.amps[x];
        }
        const double n = phi.norm();
        if (n == 0.0) continue;
        const StateVector image = apply_acceptance_factored(scheme, cw, phi);
        audit.max_ratio = std::max(audit.max_ratio, image.norm() / n);
    }
    audit.ok = audit.max_ratio <= audit.bound + 1e-10;
    return audit;
}

CheatCampaignReport run_cheat(const CheatStrategy& strategy, const EncodingScheme& scheme,
                              const QaryCode& code, const ChannelModel& channel, std::size_t t,
                              std::uint64_t trials, std::uint64_t seed, std::size_t alpha) {
    validate_strategy(strategy, code);
    if (trials < 1) throw validation_error("run_cheat: need at least one trial");

    CheatCampaignReport report;
    report.strategy_id = strategy.id();
    report.trials = trials;
    report.alpha = alpha;

    std::vector<Codeword> codewords;
    for (const Message& m : strategy.strings) codewords.push_back(encode(code, m));

    // Exact acceptance per string for the sent state.
    std::vector<double> exact(strategy.strings.size(), 0.0);
    StateVector joint; // for superposition/custom paths
    switch (strategy.kind) {
        case CheatStrategy::Kind::SendWrongCommitment:
            for (std::size_t i = 0; i < strategy.strings.size(); ++i)
                exact[i] = product_acceptance(scheme, codewords[0], codewords[i]);
            break;
        case CheatStrategy::Kind::Mixture:
            for (std::size_t i = 0; i < strategy.strings.size(); ++i)
                for (std::size_t s = 0; s < strategy.strings.size(); ++s)
                    exact[i] += strategy.weights[s] *
                                product_acceptance(scheme, codewords[s], codewords[i]);
            break;
        case CheatStrategy::Kind::Superposition: {
            std::vector<StateVector> parts;
            for (const Codeword& cw : codewords) parts.push_back(commitment_state(scheme, cw));
            joint.amps.assign(parts[0].dim(), complex_t{0.0, 0.0});
            for (std::size_t s = 0; s < parts.size(); ++s)
                for (std::size_t x = 0; x < joint.dim(); ++x)
                    joint.amps[x] += strategy.amplitudes[s] * parts[s].amps[x];
            // components are generally not orthogonal, so renormalize
            joint.normalize();
            for (std::size_t i = 0; i < strategy.strings.size(); ++i)
                exact[i] = exact_acceptance(joint, scheme, code, strategy.strings[i]);
            break;
        }
        case CheatStrategy::Kind::CustomState: {
            joint = *strategy.custom_state;
            if (!joint.is_normalized(1e-9))
                throw validation_error("run_cheat: custom state is not normalized");
            for (std::size_t i = 0; i < strategy.strings.size(); ++i)
                exact[i] = exact_acceptance(joint, scheme, code, strategy.strings[i]);
            break;
        }
    }

    std::vector<std::uint64_t> accepted(strategy.strings.size(), 0);

    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        SessionRngs rngs = SessionRngs::make(seed, trial);
        CommitRecord rec;
        switch (strategy.kind) {
            case CheatStrategy::Kind::SendWrongCommitment:
                rec = run_commit_product(scheme, codewords[0], channel, rngs);
                break;
            case CheatStrategy::Kind::Mixture: {
                const double u = rngs.strategy.next_double();
                double acc = 0.0;
                std::size_t pick = strategy.weights.size() - 1;
                for (std::size_t s = 0; s < strategy.weights.size(); ++s) {
                    acc += strategy.weights[s];
                    if (u < acc) {
                        pick = s;
                        break;
                    }
                }
                rec = run_commit_product(scheme, codewords[pick], channel, rngs);
                break;
            }
            case CheatStrategy::Kind::Superposition:
            case CheatStrategy::Kind::CustomState:
                rec = run_commit_joint(scheme, code.N, joint, channel, rngs);
                break;
        }

        // Opening is classical: score every candidate on the same record.
        std::size_t first_acceptor = strategy.strings.size();
        for (std::size_t i = 0; i < strategy.strings.size(); ++i) {
            const VerifyResult v =
                verify_open(scheme, code, strategy.strings[i], rec.S, rec.outcomes, t);
            if (v.accept) {
                ++accepted[i];
                if (first_acceptor == strategy.strings.size()) first_acceptor = i;
            }
        }

        if (trial == 0) {
            std::size_t open_idx = strategy.open_best_of
                                       ? (first_acceptor < strategy.strings.size()
                                              ? first_acceptor
                                              : 0)
                                       : strategy.open_fixed;
            SessionTranscript tr;
            const VerifyResult v = verify_open(scheme, code, strategy.strings[open_idx], rec.S,
                                               rec.outcomes, t);
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
            tr.mode = "cheat:" + strategy.id();
            tr.A = strategy.strings[open_idx];
            tr.E = codewords[open_idx].symbols;
            tr.S = rec.S;
            tr.outcomes = rec.outcomes;
            tr.y = v.y;
            tr.accept = v.accept;
            report.sample = std::move(tr);
        }
    }

    for (std::size_t i = 0; i < strategy.strings.size(); ++i) {
        StringStats st;
        st.opened = strategy.strings[i];
        st.exact_acc = exact[i];
        st.accepted = accepted[i];
        st.empirical_acc = double(accepted[i]) / double(trials);
        report.sum_exact += st.exact_acc;
        report.sum_empirical += st.empirical_acc;
        report.per_string.push_back(std::move(st));
    }

    report.lambda_max = optimal_cheat_value(build_Q(scheme, code, strategy.strings)).value;

    if (alpha > 0 && alpha < code.d) {
        const EpsilonPair eps =
            epsilons_full(scheme.beta, code.d, alpha, scheme.l, code.N, scheme.D);
        report.bound_simple = binding_bound_simple(strategy.strings.size(), eps.eps1, eps.eps2);
        report.bound_exact = binding_bound_exact(strategy.strings.size(), eps.eps1, eps.eps2);
    } else {
        const std::string why = alpha == 0 ? "no alpha requested" : "alpha >= d";
        report.bound_simple.reason = why;
        report.bound_exact.reason = why;
    }
    return report;
}

std::string campaign_csv(const CheatCampaignReport& report) {
    CsvWriter csv({"strategy", "string", "exact_acc", "empirical_acc", "trials", "sum_exact",
                   "sum_empirical", "lambda_max", "bound_simple", "bound_exact",
                   "bound_applicable"});
    for (const StringStats& st : report.per_string) {
        csv.begin_row();
        csv.field(report.strategy_id);
        csv.field(message_label(st.opened));
        csv.field(format_real(st.exact_acc));
        csv.field(format_real(st.empirical_acc));
        csv.field(report.trials);
        csv.field(format_real(report.sum_exact));
        csv.field(format_real(report.sum_empirical));
        csv.field(format_real(report.lambda_max));
        csv.field(report.bound_simple.applicable ? format_real(report.bound_simple.value) : "");
        csv.field(report.bound_exact.applicable ? format_real(report.bound_exact.value) : "");
        csv.field((report.bound_simple.applicable || report.bound_exact.applicable) ? "true"
                                                                                    : "false");
    }
    return csv.str();
}

BindingAudit binding_audit(const EncodingScheme& scheme, const QaryCode& code,
                           const std::vector<Message>& strings, std::size_t alpha,
                           std::size_t cap) {
    if (alpha < 1 || alpha >= code.d)
        throw validation_error("binding_audit: requires 1 <= alpha < d");

    BindingAudit audit;
    audit.strings = strings;
    audit.alpha = alpha;

    const DenseOperator Q = build_Q(scheme, code, strings, cap);
    const LambdaMaxResult lm = optimal_cheat_value(Q);
    audit.lambda_max = lm.value;
    audit.witness = lm.witness;

    for (const Message& m : strings)
        audit.witness_acceptances.push_back(exact_acceptance(lm.witness, scheme, code, m));

    const EpsilonPair eps = epsilons_full(scheme.beta, code.d, alpha, scheme.l, code.N, scheme.D);
    audit.eps1 = eps.eps1;
    audit.eps2 = eps.eps2;
    audit.bound_simple = binding_bound_simple(strings.size(), eps.eps1, eps.eps2);
    audit.bound_exact = binding_bound_exact(strings.size(), eps.eps1, eps.eps2);
    const double r = double(strings.size());
    audit.bound_vacuous =
        (audit.bound_simple.applicable && audit.bound_simple.value > r) &&
        (!audit.bound_exact.applicable || audit.bound_exact.value > r);

    if (strings.size() >= 2)
        audit.orthogonality = orthogonality_audit(scheme, code, strings, alpha);
    audit.eigenstructure = eigenstructure_audit(scheme, code, strings[0]);
    return audit;
}

} // namespace qbsc
