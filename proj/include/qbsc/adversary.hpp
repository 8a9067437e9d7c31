#ifndef QBSC_ADVERSARY_HPP
#define QBSC_ADVERSARY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qbsc/bounds.hpp"
#include "qbsc/engine.hpp"

namespace qbsc {

using Message = std::vector<Symbol>;

/// How a dishonest sender hedges across r strings. SendWrongCommitment
/// transmits the commitment of strings[0]; the other kinds build their state
/// from all candidates. The open rule is either a fixed string or best-of:
/// open whichever candidate the realized transcript accepts (ties to the
/// lowest index; strings[0] when none accepts).
struct CheatStrategy {
    enum class Kind { SendWrongCommitment, Superposition, Mixture, CustomState };

    Kind kind = Kind::SendWrongCommitment;
    std::vector<Message> strings;          // candidate messages, length k each
    std::vector<complex_t> amplitudes;     // superposition, one per string
    std::vector<double> weights;           // mixture, one per string
    std::optional<StateVector> custom_state;

    bool open_best_of = false;
    std::size_t open_fixed = 0; // index into strings when !open_best_of

    std::string id() const;
};

/// Checks the strategy invariants against a code: strings distinct, length k,
/// amplitudes unit-normalized, weights summing to 1.
void validate_strategy(const CheatStrategy& strategy, const QaryCode& code);

/// Q = sum_i P_{E(A_i)} over distinct messages; Hermitian PSD.
DenseOperator build_Q(const EncodingScheme& scheme, const QaryCode& code,
                      const std::vector<Message>& strings, std::size_t cap = kDimCap);

/// Largest eigenvalue of Q, i.e. the sender's optimal hedging value over all
/// states, with the optimizing state as witness.
LambdaMaxResult optimal_cheat_value(const DenseOperator& Q);

/// Tr rho P_{E(opened)} for a pure sent state.
double exact_acceptance(const StateVector& sent, const EncodingScheme& scheme,
                        const QaryCode& code, const Message& opened);
/// Same for a classical mixture of pure states.
double exact_acceptance_mixture(const std::vector<std::pair<double, StateVector>>& mixture,
                                const EncodingScheme& scheme, const QaryCode& code,
                                const Message& opened);

struct OrthogonalityAudit {
    double pair_bound = 0.0;        // beta_bar^d
    double max_pair_overlap = 0.0;  // over commitment-state pairs
    bool pairs_ok = false;
    double shift_bound = 0.0;       // beta_bar^{d-alpha}
    double max_shift_overlap = 0.0; // over cross-string shifted pairs, HW < alpha
    bool shifts_ok = false;
    std::uint64_t pairs_checked = 0;
    std::uint64_t shifts_checked = 0;
    bool exhaustive = false;
};

/// Overlap audit; product structure lets every overlap come from the letter
/// Gram matrix, so no big vectors are built. Exhaustive when the shifted-pair
/// count fits the budget, sampled otherwise.
OrthogonalityAudit orthogonality_audit(const EncodingScheme& scheme, const QaryCode& code,
                                       const std::vector<Message>& strings, std::size_t alpha,
                                       std::uint64_t budget = 2'000'000,
                                       std::uint64_t seed = 0x0a0d17);

struct EigenstructureAudit {
    double max_residual = 0.0;
    std::uint64_t checked = 0;
    bool exhaustive = false;
};

/// || P_E |Psi_E;dJ> - (1-1/l)^{HW(dJ)} |Psi_E;dJ> || for sampled or all
/// shifts; exhaustive when D^N <= 4096.
EigenstructureAudit eigenstructure_audit(const EncodingScheme& scheme, const QaryCode& code,
                                         const Message& message,
                                         std::uint64_t min_samples = 1000,
                                         std::uint64_t seed = 0xe16e2);

struct ContractionAudit {
    double bound = 0.0;    // (1-1/l)^alpha
    double max_ratio = 0.0; // ||P_E phi|| / ||phi|| over sampled far states
    bool ok = false;
    std::uint64_t trials = 0;
};

/// Random states supported on shifts with HW >= alpha are contracted by P_E
/// to at most (1-1/l)^alpha of their norm.
ContractionAudit contraction_audit(const EncodingScheme& scheme, const QaryCode& code,
                         const Message& message, std::size_t alpha, std::uint64_t trials,
                         std::uint64_t seed);

struct StringStats {
    Message opened;
    double exact_acc = 0.0;
    double empirical_acc = 0.0;
    std::uint64_t accepted = 0;
};

struct CheatCampaignReport {
    std::string strategy_id;
    std::uint64_t trials = 0;
    std::vector<StringStats> per_string;
    double sum_exact = 0.0;
    double sum_empirical = 0.0;
    double lambda_max = 0.0;
    std::size_t alpha = 0; // 0 = no bound context requested
    BoundResult bound_simple, bound_exact;
    SessionTranscript sample; // transcript of trial 0, per the open rule
};

/// Monte Carlo campaign through the engine. Every candidate string is scored
/// on every trial (opening is classical, so one transcript answers all of
/// them); the Definition-style sum is the total of per-string rates. With
/// alpha > 0 the closed-form bounds are attached for context.
CheatCampaignReport run_cheat(const CheatStrategy& strategy, const EncodingScheme& scheme,
                              const QaryCode& code, const ChannelModel& channel, std::size_t t,
                              std::uint64_t trials, std::uint64_t seed, std::size_t alpha = 0);

/// CSV per the audit-report layout: one row per string.
std::string campaign_csv(const CheatCampaignReport& report);

struct BindingAudit {
    std::vector<Message> strings;
    std::size_t alpha = 0;
    double lambda_max = 0.0;
    StateVector witness;
    std::vector<double> witness_acceptances; // expectation of witness per string
    BoundResult bound_simple, bound_exact;
    bool bound_vacuous = false; // applicable but above the trivial cap r
    OrthogonalityAudit orthogonality;
    EigenstructureAudit eigenstructure; // for strings[0]
    double eps1 = 0.0, eps2 = 0.0;
};

/// Brute-force verification bundle: lambda_max(Q) against the closed-form
/// bounds, plus the overlap and eigenstructure checks behind them.
BindingAudit binding_audit(const EncodingScheme& scheme, const QaryCode& code,
                           const std::vector<Message>& strings, std::size_t alpha,
                           std::size_t cap = kDimCap);

} // namespace qbsc

#endif
