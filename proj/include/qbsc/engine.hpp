#ifndef QBSC_ENGINE_HPP
#define QBSC_ENGINE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qbsc/codes.hpp"
#include "qbsc/random.hpp"
#include "qbsc/scheme.hpp"

namespace qbsc {

/// Channel imperfections. p_loss drops a particle before detection; p_depol
/// replaces a detected outcome by a uniform draw over the measured basis.
struct ChannelModel {
    double p_loss = 0.0;
    double p_depol = 0.0;
};

/// A detected basis slot, or nothing for a lost particle.
using Outcome = std::optional<Symbol>;

/// Per-purpose random streams for one protocol session. Every purpose draws
/// once per particle whether or not the draw ends up used, so changing one
/// channel parameter never shifts the other streams.
struct SessionRngs {
    RandomSource bases, born, loss, depol, strategy;

    static SessionRngs make(std::uint64_t master_seed, std::uint64_t session_index) {
        RandomSource root(master_seed);
        return {root.derive(1, session_index), root.derive(2, session_index),
                root.derive(3, session_index), root.derive(4, session_index),
                root.derive(5, session_index)};
    }
};

/// Complete record of one commit/open session, replayable byte for byte.
struct SessionTranscript {
    std::size_t q = 0, D = 0, l = 0;
    double beta = 0.0;
    std::string code_kind;
    std::size_t N = 0, k = 0, d = 0;
    std::uint64_t seed = 0;
    std::size_t t = 0;
    std::string mode; // "honest" or "cheat:<strategy id>"
    std::vector<Symbol> A;              // opened message, k symbols
    std::vector<Symbol> E;              // encode(A), N symbols
    std::vector<std::uint16_t> S;       // Bob's basis choices
    std::vector<Outcome> outcomes;      // one per particle
    std::size_t y = 0;
    bool accept = false;

    bool operator==(const SessionTranscript&) const = default;
};

/// Uniform l-ary basis choices for N particles.
std::vector<std::uint16_t> choose_bases(std::size_t N, std::size_t l, RandomSource& rng);

/// Projective measurement of one D-dimensional particle in basis M(i) over
/// the channel. The state must be unit norm within 1e-9.
Outcome measure_particle(const EncodingScheme& scheme, const StateVector& sent,
                         std::size_t basis, const ChannelModel& channel, SessionRngs& rngs);

/// Born probabilities |<i;j|psi>|^2 for j = 0..D-1, before normalization.
std::vector<double> born_probabilities(const EncodingScheme& scheme, const StateVector& sent,
                                       std::size_t basis);

struct CommitRecord {
    std::vector<std::uint16_t> S;
    std::vector<Outcome> outcomes;
};

/// Commit phase with honest product-state transmission of the given letters.
CommitRecord run_commit_product(const EncodingScheme& scheme, const Codeword& letters,
                                const ChannelModel& channel, SessionRngs& rngs);

/// Commit phase for an arbitrary (possibly entangled) N-particle state of
/// dimension D^N. Lost particles are still projected and the outcome is
/// discarded, which reproduces the partial-trace statistics exactly.
CommitRecord run_commit_joint(const EncodingScheme& scheme, std::size_t N,
                              const StateVector& joint, const ChannelModel& channel,
                              SessionRngs& rngs);

struct VerifyResult {
    bool accept = false;
    std::size_t y = 0;
};

/// Open-phase check: particle i fails iff Bob's basis matches the letter's
/// basis and the detected slot differs. Lost particles never fail (Bob cannot
/// check what he did not see); reports flag this rule whenever p_loss > 0.
VerifyResult verify_open(const EncodingScheme& scheme, const QaryCode& code,
                         std::span<const Symbol> A, std::span<const std::uint16_t> S,
                         std::span<const Outcome> outcomes, std::size_t t);

/// Full honest session: encode, transmit, measure, reveal, verify.
SessionTranscript run_session(const EncodingScheme& scheme, const QaryCode& code,
                              std::span<const Symbol> A, const ChannelModel& channel,
                              std::size_t t, std::uint64_t seed);

/// Full session where the sender transmits `joint` (dim D^N) but opens `A`.
SessionTranscript run_session_with_state(const EncodingScheme& scheme, const QaryCode& code,
                                         const StateVector& joint, std::span<const Symbol> A,
                                         const ChannelModel& channel, std::size_t t,
                                         std::uint64_t seed, const std::string& mode);

/// Suggested threshold for a noisy channel: mean correct-basis mismatch count
/// plus three standard deviations.
std::size_t suggest_threshold(std::size_t N, std::size_t l, std::size_t D, double p_depol);

/// Ten-line transcript format; write/parse round-trip exactly.
std::string write_transcript(const SessionTranscript& transcript);
SessionTranscript parse_transcript(const std::string& text);

} // namespace qbsc

#endif
