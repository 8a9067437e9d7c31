#include "qbsc/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qbsc/report.hpp"

namespace qbsc {

double parse_real(const std::string& text) {
    const auto caret = text.find('^');
    if (caret != std::string::npos) {
        std::size_t used = 0;
        const double base = std::stod(text.substr(0, caret), &used);
        if (used != caret) throw validation_error("bad real literal `" + text + "`");
        const std::string exp_part = text.substr(caret + 1);
        const long expo = std::stol(exp_part, &used);
        if (used != exp_part.size()) throw validation_error("bad real literal `" + text + "`");
        return std::pow(base, double(expo));
    }
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw validation_error("bad real literal `" + text + "`");
    return v;
}

EncodingScheme scheme_from_source(const std::string& source) {
    if (source == "bb84") return bb84_scheme();
    if (source.rfind("file:", 0) == 0) {
        const std::string path = source.substr(5);
        std::ifstream in(path);
        if (!in) throw validation_error("cannot open scheme file `" + path + "`");
        return parse_scheme_file(in);
    }
    throw validation_error("unknown scheme source `" + source + "` (want bb84 or file:<path>)");
}

QaryCode code_from_source(const std::string& source) {
    if (source.rfind("file:", 0) == 0) {
        const std::string path = source.substr(5);
        std::ifstream in(path);
        if (!in) throw validation_error("cannot open code file `" + path + "`");
        return parse_code_file(in);
    }
    return code_from_spec(source);
}

std::vector<Message> parse_messages(const std::string& text) {
    std::vector<Message> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        Message m;
        std::stringstream ps(part);
        std::string sym;
        while (std::getline(ps, sym, '.')) {
            if (sym.empty()) throw validation_error("empty symbol in message list");
            m.push_back(Symbol(std::stoul(sym)));
        }
        if (m.empty()) throw validation_error("empty message in message list");
        out.push_back(std::move(m));
    }
    if (out.empty()) throw validation_error("no messages given");
    return out;
}

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw validation_error("cannot write `" + path + "`");
    out << content;
}

std::string message_label(const Message& m) {
    std::string out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (i) out += ".";
        out += std::to_string(m[i]);
    }
    return out;
}

void note_loss_rule(const ChannelModel& channel, std::ostream& os) {
    if (channel.p_loss > 0.0)
        os << "note: lost particles pass verification; with p_loss > 0 this run's "
              "acceptance rule is weaker than the noiseless one\n";
}

// codeword symbols index the scheme's particle states, so the alphabets
// must agree
void check_compat(const EncodingScheme& scheme, const QaryCode& code) {
    if (code.q != scheme.q)
        throw validation_error("code alphabet q=" + std::to_string(code.q) +
                               " does not match scheme q=" + std::to_string(scheme.q));
}

// ---------------------------------------------------------------- bounds --

struct BoundsArgs {
    std::string eps_s, beta_s, delta_s;
    std::uint64_t r = 0;
    std::size_t l = 0, d = 0, N = 0, D = 0, k = 0;
    long long alpha = -1;
    unsigned q = 0;
    std::string csv_path;
};

int cmd_bounds(const BoundsArgs& a) {
    std::vector<std::pair<std::string, std::string>> results;
    auto put = [&](const std::string& name, const std::string& value) {
        results.emplace_back(name, value);
        std::cout << name << " = " << value << "\n";
    };

    const double eps = a.eps_s.empty() ? 0.0 : parse_real(a.eps_s);
    const double beta = a.beta_s.empty() ? 0.0 : parse_real(a.beta_s);
    long long alpha = a.alpha;

    if (a.l >= 2 && a.r > 0 && eps > 0.0) {
        const long long got = alpha_for_target(a.l, a.r, eps);
        put("alpha_for_target", std::to_string(got));
        if (alpha < 0) alpha = got;
    }
    if (a.q >= 2 && !a.delta_s.empty())
        put("gv_rate", format_real(gv_rate(a.q, parse_real(a.delta_s))));
    if (a.N > 0 && a.D > 1 && alpha >= 0) {
        const BigUint fa = f_alpha(a.N, a.D, std::size_t(alpha));
        put("f_alpha", fa.to_string());
        put("f_alpha_log2", format_real(fa.log2()));
        try {
            put("f_alpha_bound", format_real(f_alpha_bound(a.N, a.D, std::size_t(alpha))));
        } catch (const validation_error& e) {
            put("f_alpha_bound", std::string("n/a (") + e.what() + ")");
        }
    }

    double eps1 = -1.0, eps2 = -1.0;
    if (beta > 0.0 && a.d > 0 && alpha > 0 && std::size_t(alpha) < a.d && a.l >= 1) {
        if (a.N > 0 && a.D > 1) {
            const EpsilonPair ep = epsilons_full(beta, a.d, std::size_t(alpha), a.l, a.N, a.D);
            eps1 = ep.eps1;
            eps2 = ep.eps2;
            put("eps1", format_real(eps1));
            put("eps2", format_real(eps2));
        } else {
            const EpsilonPair ep = epsilons(beta, a.d, std::size_t(alpha), a.l);
            eps1 = ep.eps1;
            eps2 = ep.eps2;
            put("eps1_factor", format_real(eps1));
            put("eps2", format_real(eps2));
        }
    }
    if (a.r > 0 && eps1 >= 0.0) {
        const BoundResult bs = binding_bound_simple(a.r, eps1, eps2);
        put("bound_simple", bs.applicable ? format_real(bs.value) : "n/a (" + bs.reason + ")");
        const BoundResult be = binding_bound_exact(a.r, eps1, eps2);
        put("bound_exact", be.applicable ? format_real(be.value) : "n/a (" + be.reason + ")");
    }
    if (a.N > 0 && a.d > 0 && alpha > 0 && beta > 0.0 && a.r > 0 && eps > 0.0 && a.D > 1) {
        const ThirdTermResult tt =
            thirdterm_holds(a.N, a.d, std::size_t(alpha), beta, a.r, eps, a.D);
        put("code_existence_holds", tt.holds ? "true" : "false");
        put("code_existence_lhs", format_real(tt.lhs));
        put("code_existence_rhs", format_real(tt.rhs));
    }
    if (a.N > 0 && a.D > 1 && a.k > 0 && a.q >= 2) {
        const ConcealingResult c = concealing_bound(a.N, a.D, a.k, a.q);
        put("m_bound_bits", format_real(c.m_bound_bits));
        put("n_bits", format_real(c.n_bits_real));
        put("n_bits_ceil", std::to_string(c.n_bits_ceil));
        put("ratio_m_over_n", format_real(c.ratio));
        put("ratio_m_over_n_ceil", format_real(c.ratio_ceil));
        put("concealing", c.concealing ? "true" : "false");
    }

    if (results.empty()) {
        std::cerr << "bounds: not enough parameters; see --help\n";
        return 2;
    }
    if (!a.csv_path.empty()) {
        CsvWriter csv({"quantity", "value"});
        for (const auto& [name, value] : results) {
            csv.begin_row();
            csv.field(name);
            csv.field(value);
        }
        write_file(a.csv_path, csv.str());
    }
    return 0;
}

// ------------------------------------------------------------------ plan --

struct PlanArgs {
    std::string scheme_source = "bb84";
    std::uint64_t r = 0;
    std::string eps_s;
    std::vector<std::string> families;
    std::string delta_s;
    std::string n_list = "1000,10000,100000";
    std::string csv_path;
};

int cmd_plan(const PlanArgs& a) {
    const EncodingScheme scheme = scheme_from_source(a.scheme_source);
    SchemeConstants sc;
    sc.q = unsigned(scheme.q);
    sc.D = scheme.D;
    sc.l = scheme.l;
    sc.beta = scheme.beta;
    sc.beta_bar = scheme.beta_bar;
    const double eps = parse_real(a.eps_s);

    std::vector<std::size_t> Ns;
    {
        std::stringstream ss(a.n_list);
        std::string item;
        while (std::getline(ss, item, ',')) Ns.push_back(std::size_t(std::stoull(item)));
    }
    if (Ns.empty()) throw validation_error("plan: empty N list");

    std::vector<CodeCandidate> candidates;
    for (const std::string& fam : a.families) {
        if (fam == "gv") {
            if (a.delta_s.empty()) throw validation_error("plan: gv family needs --delta");
            const double delta = parse_real(a.delta_s);
            for (std::size_t N : Ns) candidates.push_back(gv_candidate(sc.q, N, delta));
        } else if (fam == "rep") {
            for (std::size_t N : Ns) {
                CodeCandidate c;
                c.family = "rep";
                c.q = sc.q;
                c.N = N;
                c.k = 1;
                c.d = N;
                candidates.push_back(c);
            }
        } else if (fam.rfind("rs:k=", 0) == 0) {
            const std::size_t k = std::stoull(fam.substr(5));
            for (std::size_t N : Ns) {
                if (N > sc.q || k > N) continue;
                CodeCandidate c;
                c.family = "rs";
                c.q = sc.q;
                c.N = N;
                c.k = k;
                c.d = N - k + 1;
                candidates.push_back(c);
            }
        } else {
            throw validation_error("plan: unknown family `" + fam + "` (gv|rep|rs:k=<k>)");
        }
    }
    if (candidates.empty()) throw validation_error("plan: no candidates in search space");

    const PlanResult result = plan(a.r, eps, sc, candidates);

    // rows sorted: feasible first, then ascending N
    std::vector<const SecurityPlan*> rows;
    for (const auto& p : result.evaluated) rows.push_back(&p);
    std::stable_sort(rows.begin(), rows.end(), [](const SecurityPlan* x, const SecurityPlan* y) {
        if (x->feasible != y->feasible) return x->feasible;
        return x->N < y->N;
    });

    TextTable table({"family", "N", "k", "d", "alpha", "eps1", "eps2", "ratio", "feasible",
                     "reason"});
    for (const SecurityPlan* p : rows)
        table.add_row({p->family, std::to_string(p->N), std::to_string(p->k),
                       std::to_string(p->d), std::to_string(p->alpha), format_real(p->eps1),
                       format_real(p->eps2), format_real(p->ratio_m_over_n),
                       p->feasible ? "true" : "false", p->reason});
    std::cout << table.str();

    if (result.best.feasible)
        std::cout << "best: family=" << result.best.family << " N=" << result.best.N
                  << " k=" << result.best.k << " d=" << result.best.d
                  << " alpha=" << result.best.alpha
                  << " ratio=" << format_real(result.best.ratio_m_over_n) << "\n";
    else
        std::cout << "infeasible: " << result.best.reason << "\n";

    if (!a.csv_path.empty()) {
        PlanResult sorted = result;
        sorted.evaluated.clear();
        for (const SecurityPlan* p : rows) sorted.evaluated.push_back(*p);
        write_file(a.csv_path, plan_csv(sorted));
    }
    return 0;
}

// ------------------------------------------------------------------- run --

struct RunArgs {
    std::string scheme_source = "bb84";
    std::string code_source;
    std::string A_s;
    std::uint64_t seed = 0;
    std::size_t t = 0;
    std::string p_loss_s = "0", p_depol_s = "0";
    std::string out_path;
};

int cmd_run(const RunArgs& a) {
    const EncodingScheme scheme = scheme_from_source(a.scheme_source);
    const QaryCode code = code_from_source(a.code_source);
    check_compat(scheme, code);
    const std::vector<Message> msgs = parse_messages(a.A_s);
    if (msgs.size() != 1) throw validation_error("run: --A takes exactly one message");
    ChannelModel channel{parse_real(a.p_loss_s), parse_real(a.p_depol_s)};

    const SessionTranscript tr = run_session(scheme, code, msgs[0], channel, a.t, a.seed);
    const std::string text = write_transcript(tr);
    if (a.out_path.empty())
        std::cout << text;
    else
        write_file(a.out_path, text);

    std::cout << "session: accept=" << (tr.accept ? "true" : "false") << " y=" << tr.y
              << " t=" << tr.t << "\n";
    if (channel.p_depol > 0.0)
        std::cout << "suggested t for this channel: "
                  << suggest_threshold(code.N, scheme.l, scheme.D, channel.p_depol) << "\n";
    note_loss_rule(channel, std::cout);
    return 0;
}

// ---------------------------------------------------------------- attack --

struct AttackArgs {
    std::string scheme_source = "bb84";
    std::string code_source;
    std::string strategy = "wrong";
    std::string strings_s;
    std::string amps_s, weights_s, state_file;
    std::string open_rule = "fixed:0";
    std::uint64_t trials = 10000;
    std::uint64_t seed = 0;
    std::size_t t = 0;
    std::size_t alpha = 0;
    std::string p_loss_s = "0", p_depol_s = "0";
    std::string csv_path, transcript_path;
};

CheatStrategy build_strategy(const AttackArgs& a, const QaryCode& code) {
    CheatStrategy s;
    s.strings = parse_messages(a.strings_s);
    if (a.strategy == "wrong")
        s.kind = CheatStrategy::Kind::SendWrongCommitment;
    else if (a.strategy == "superposition")
        s.kind = CheatStrategy::Kind::Superposition;
    else if (a.strategy == "mixture")
        s.kind = CheatStrategy::Kind::Mixture;
    else if (a.strategy == "custom")
        s.kind = CheatStrategy::Kind::CustomState;
    else
        throw validation_error("attack: unknown strategy `" + a.strategy + "`");

    const std::size_t n = s.strings.size();
    if (s.kind == CheatStrategy::Kind::Superposition) {
        if (a.amps_s.empty()) {
            s.amplitudes.assign(n, complex_t{1.0 / std::sqrt(double(n)), 0.0});
        } else {
            std::stringstream ss(a.amps_s);
            std::string item;
            while (std::getline(ss, item, ';')) {
                double re = 0, im = 0;
                if (std::sscanf(item.c_str(), "%lf,%lf", &re, &im) != 2)
                    throw validation_error("attack: bad amplitude `" + item + "` (want re,im)");
                s.amplitudes.push_back(complex_t{re, im});
            }
        }
    }
    if (s.kind == CheatStrategy::Kind::Mixture) {
        if (a.weights_s.empty()) {
            s.weights.assign(n, 1.0 / double(n));
        } else {
            std::stringstream ss(a.weights_s);
            std::string item;
            while (std::getline(ss, item, ';')) s.weights.push_back(parse_real(item));
        }
    }
    if (s.kind == CheatStrategy::Kind::CustomState) {
        if (a.state_file.empty()) throw validation_error("attack: custom needs --state-file");
        std::ifstream in(a.state_file);
        if (!in) throw validation_error("attack: cannot open `" + a.state_file + "`");
        StateVector v;
        double re, im;
        while (in >> re >> im) {
            if (!std::isfinite(re) || !std::isfinite(im))
                throw validation_error("attack: non-finite amplitude in state file");
            v.amps.push_back(complex_t{re, im});
        }
        s.custom_state = std::move(v);
    }

    if (a.open_rule == "best") {
        s.open_best_of = true;
    } else if (a.open_rule.rfind("fixed:", 0) == 0) {
        s.open_best_of = false;
        s.open_fixed = std::stoull(a.open_rule.substr(6));
    } else {
        throw validation_error("attack: --open must be best or fixed:<index>");
    }
    (void)code;
    return s;
}

int cmd_attack(const AttackArgs& a) {
    const EncodingScheme scheme = scheme_from_source(a.scheme_source);
    const QaryCode code = code_from_source(a.code_source);
    check_compat(scheme, code);
    const CheatStrategy strategy = build_strategy(a, code);
    ChannelModel channel{parse_real(a.p_loss_s), parse_real(a.p_depol_s)};

    const CheatCampaignReport report =
        run_cheat(strategy, scheme, code, channel, a.t, a.trials, a.seed, a.alpha);

    TextTable table({"string", "exact_acc", "empirical_acc", "accepted"});
    for (const StringStats& st : report.per_string)
        table.add_row({message_label(st.opened), format_real(st.exact_acc),
                       format_real(st.empirical_acc), std::to_string(st.accepted)});
    std::cout << table.str();
    std::cout << "sum_exact=" << format_real(report.sum_exact)
              << " sum_empirical=" << format_real(report.sum_empirical)
              << " lambda_max=" << format_real(report.lambda_max) << "\n";
    if (report.bound_simple.applicable)
        std::cout << "bound_simple=" << format_real(report.bound_simple.value) << "\n";
    if (report.bound_exact.applicable)
        std::cout << "bound_exact=" << format_real(report.bound_exact.value) << "\n";
    note_loss_rule(channel, std::cout);

    if (!a.csv_path.empty()) write_file(a.csv_path, campaign_csv(report));
    if (!a.transcript_path.empty())
        write_file(a.transcript_path, write_transcript(report.sample));
    return 0;
}

// ---------------------------------------------------------------- verify --

struct VerifyArgs {
    std::string scheme_source = "bb84";
    std::string code_source;
    std::string strings_s;
    std::size_t alpha = 1;
    std::string csv_path;
};

int cmd_verify(const VerifyArgs& a) {
    const EncodingScheme scheme = scheme_from_source(a.scheme_source);
    const QaryCode code = code_from_source(a.code_source);
    check_compat(scheme, code);
    const std::vector<Message> strings = parse_messages(a.strings_s);

    const BindingAudit audit = binding_audit(scheme, code, strings, a.alpha);

    std::cout << "lambda_max = " << format_real(audit.lambda_max) << "\n";
    double wit_sum = 0.0;
    for (std::size_t i = 0; i < strings.size(); ++i) {
        std::cout << "witness acceptance [" << message_label(strings[i])
                  << "] = " << format_real(audit.witness_acceptances[i]) << "\n";
        wit_sum += audit.witness_acceptances[i];
    }
    std::cout << "witness sum = " << format_real(wit_sum) << "\n";
    std::cout << "eps1 = " << format_real(audit.eps1) << " eps2 = " << format_real(audit.eps2)
              << "\n";
    auto show_bound = [&](const char* name, const BoundResult& b) {
        std::cout << name << " = "
                  << (b.applicable ? format_real(b.value) : "n/a (" + b.reason + ")");
        if (b.applicable && audit.bound_vacuous) std::cout << " (vacuous: above trivial cap r)";
        std::cout << "\n";
    };
    show_bound("bound_simple", audit.bound_simple);
    show_bound("bound_exact", audit.bound_exact);
    if (strings.size() >= 2) {
        std::cout << "pair overlap max = " << format_real(audit.orthogonality.max_pair_overlap)
                  << " (bound " << format_real(audit.orthogonality.pair_bound) << ")\n";
        std::cout << "shift overlap max = "
                  << format_real(audit.orthogonality.max_shift_overlap) << " (bound "
                  << format_real(audit.orthogonality.shift_bound) << ")\n";
    }
    std::cout << "eigen residual max = " << format_real(audit.eigenstructure.max_residual)
              << " over " << audit.eigenstructure.checked << " shifts\n";

    bool violated = false;
    if (strings.size() >= 2 &&
        (!audit.orthogonality.pairs_ok || !audit.orthogonality.shifts_ok))
        violated = true;
    if (audit.eigenstructure.max_residual > 1e-10) violated = true;
    const double r = double(strings.size());
    auto check_bound = [&](const BoundResult& b) {
        if (!b.applicable || b.value > r) return; // vacuous bounds claim nothing
        if (audit.lambda_max > b.value + 1e-9) violated = true;
    };
    check_bound(audit.bound_simple);
    check_bound(audit.bound_exact);

    if (!a.csv_path.empty()) {
        CsvWriter csv({"strategy", "string", "exact_acc", "empirical_acc", "trials", "sum_exact",
                       "sum_empirical", "lambda_max", "bound_simple", "bound_exact",
                       "bound_applicable"});
        for (std::size_t i = 0; i < strings.size(); ++i) {
            csv.begin_row();
            csv.field("optimal");
            csv.field(message_label(strings[i]));
            csv.field(format_real(audit.witness_acceptances[i]));
            csv.field("");
            csv.field(std::uint64_t{0});
            csv.field(format_real(wit_sum));
            csv.field("");
            csv.field(format_real(audit.lambda_max));
            csv.field(audit.bound_simple.applicable ? format_real(audit.bound_simple.value)
                                                    : "");
            csv.field(audit.bound_exact.applicable ? format_real(audit.bound_exact.value) : "");
            csv.field((audit.bound_simple.applicable || audit.bound_exact.applicable)
                          ? "true"
                          : "false");
        }
        write_file(a.csv_path, csv.str());
    }

    if (violated) {
        std::cout << "verdict: VIOLATION\n";
        return 3;
    }
    std::cout << "verdict: ok\n";
    return 0;
}

// ----------------------------------------------------------------- audit --

struct AuditArgs {
    std::string scheme_source = "bb84";
    std::string code_source;
    std::string strings_s;
    std::string message_s;
    std::size_t alpha = 1;
    std::uint64_t trials = 200;
    std::uint64_t seed = 7;
};

int cmd_audit(const AuditArgs& a) {
    const EncodingScheme scheme = scheme_from_source(a.scheme_source);
    const QaryCode code = code_from_source(a.code_source);
    check_compat(scheme, code);

    bool violated = false;

    if (!a.strings_s.empty()) {
        const std::vector<Message> strings = parse_messages(a.strings_s);
        if (strings.size() >= 2) {
            const OrthogonalityAudit oa =
                orthogonality_audit(scheme, code, strings, a.alpha);
            std::cout << "orthogonality: pairs max " << format_real(oa.max_pair_overlap)
                      << " vs bound " << format_real(oa.pair_bound) << " -> "
                      << (oa.pairs_ok ? "ok" : "VIOLATION") << "\n";
            std::cout << "orthogonality: shifts max " << format_real(oa.max_shift_overlap)
                      << " vs bound " << format_real(oa.shift_bound) << " ("
                      << oa.shifts_checked << (oa.exhaustive ? " exhaustive" : " sampled")
                      << ") -> " << (oa.shifts_ok ? "ok" : "VIOLATION") << "\n";
            violated = violated || !oa.pairs_ok || !oa.shifts_ok;
        }
    }

    Message msg;
    if (!a.message_s.empty())
        msg = parse_messages(a.message_s)[0];
    else if (!a.strings_s.empty())
        msg = parse_messages(a.strings_s)[0];
    else
        msg.assign(code.k, Symbol(0));

    const EigenstructureAudit ea = eigenstructure_audit(scheme, code, msg);
    std::cout << "eigenstructure: max residual " << format_real(ea.max_residual) << " over "
              << ea.checked << (ea.exhaustive ? " shifts (exhaustive)" : " shifts (sampled)")
              << " -> " << (ea.max_residual <= 1e-10 ? "ok" : "VIOLATION") << "\n";
    violated = violated || ea.max_residual > 1e-10;

    if (a.alpha >= 1 && a.alpha <= code.N) {
        const ContractionAudit la = contraction_audit(scheme, code, msg, a.alpha, a.trials, a.seed);
        std::cout << "far-subspace contraction: max ratio " << format_real(la.max_ratio)
                  << " vs bound " << format_real(la.bound) << " -> "
                  << (la.ok ? "ok" : "VIOLATION") << "\n";
        violated = violated || !la.ok;
    }

    if (violated) {
        std::cout << "verdict: VIOLATION\n";
        return 3;
    }
    std::cout << "verdict: ok\n";
    return 0;
}

// ----------------------------------------------------------------- codes --

struct CodesArgs {
    std::string code_source;
    std::uint64_t budget = 1ULL << 20;
    bool recompute = false;
    std::string out_path, csv_path;
};

int cmd_codes(const CodesArgs& a) {
    QaryCode code = code_from_source(a.code_source);
    if (a.recompute) {
        const MinDistanceResult md = min_distance(code, a.budget);
        code.d = md.d;
        code.d_status = md.status;
    }
    std::cout << "code kind=" << code.kind << " q=" << code.q << " N=" << code.N
              << " k=" << code.k << " d=" << code.d << " d_status=" << to_string(code.d_status)
              << "\n";
    std::cout << "field: " << code.field->irreducible_poly_description() << "\n";
    const ConcealingResult c = concealing_bound(code.N, 2, code.k, code.q);
    std::cout << "bits committed (ceil): " << c.n_bits_ceil << "\n";

    if (!a.out_path.empty()) {
        std::ostringstream os;
        write_code_file(code, os);
        write_file(a.out_path, os.str());
    }
    if (!a.csv_path.empty()) {
        CsvWriter csv({"kind", "q", "N", "k", "d", "d_status"});
        csv.begin_row();
        csv.field(code.kind);
        csv.field(unsigned(code.q));
        csv.field(code.N);
        csv.field(code.k);
        csv.field(code.d);
        csv.field(to_string(code.d_status));
        write_file(a.csv_path, csv.str());
    }
    return 0;
}

} // namespace

int dispatch(const std::vector<std::string>& args) {
    CLI::App app{"desk-scale laboratory for a measure-on-receipt quantum bit-string "
                 "commitment protocol"};
    app.require_subcommand(0, 1);
    app.option_defaults()->always_capture_default();
    app.set_config("--config", "", "key=value config file; flags override file values");
    bool dump_config = false;
    app.add_flag("--dump-config", dump_config, "print the effective configuration and exit")
        ->configurable(false);

    BoundsArgs bounds_args;
    CLI::App* bounds_cmd = app.add_subcommand("bounds", "closed-form security calculators");
    bounds_cmd->add_option("--l", bounds_args.l, "number of bases");
    bounds_cmd->add_option("--r", bounds_args.r, "hedged string count");
    bounds_cmd->add_option("--eps", bounds_args.eps_s, "binding target (accepts 2^-10)");
    bounds_cmd->add_option("--beta", bounds_args.beta_s, "overlap constant beta");
    bounds_cmd->add_option("--d", bounds_args.d, "code minimum distance");
    bounds_cmd->add_option("--alpha", bounds_args.alpha, "subspace radius");
    bounds_cmd->add_option("--N", bounds_args.N, "code block length");
    bounds_cmd->add_option("--D", bounds_args.D, "particle dimension");
    bounds_cmd->add_option("--q", bounds_args.q, "alphabet size");
    bounds_cmd->add_option("--k", bounds_args.k, "code dimension");
    bounds_cmd->add_option("--delta", bounds_args.delta_s, "relative distance for gv_rate");
    bounds_cmd->add_option("--csv", bounds_args.csv_path, "write quantity,value CSV");

    PlanArgs plan_args;
    CLI::App* plan_cmd = app.add_subcommand("plan", "feasibility sweep over code candidates");
    plan_cmd->add_option("--preset", plan_args.scheme_source, "scheme preset or file:<path>");
    plan_cmd->add_option("--r", plan_args.r, "hedged string count")->required();
    plan_cmd->add_option("--eps", plan_args.eps_s, "binding target")->required();
    plan_cmd->add_option("--family", plan_args.families, "gv | rep | rs:k=<k> (repeatable)")
        ->required();
    plan_cmd->add_option("--delta", plan_args.delta_s, "relative distance for the gv family");
    plan_cmd->add_option("--N-list", plan_args.n_list, "comma-separated block lengths");
    plan_cmd->add_option("--csv", plan_args.csv_path, "write the sweep CSV");

    RunArgs run_args;
    CLI::App* run_cmd = app.add_subcommand("run", "run one honest commit/open session");
    run_cmd->add_option("--preset", run_args.scheme_source, "scheme preset or file:<path>");
    run_cmd->add_option("--code", run_args.code_source, "code spec or file:<path>")->required();
    run_cmd->add_option("--A", run_args.A_s, "message symbols, dot-separated")->required();
    run_cmd->add_option("--seed", run_args.seed, "session seed")->envname("QBSC_SEED");
    run_cmd->add_option("--t", run_args.t, "mismatch threshold");
    run_cmd->add_option("--p-loss", run_args.p_loss_s, "loss probability");
    run_cmd->add_option("--p-depol", run_args.p_depol_s, "outcome depolarization probability");
    run_cmd->add_option("--out", run_args.out_path, "transcript file (default: stdout)");

    AttackArgs attack_args;
    CLI::App* attack_cmd = app.add_subcommand("attack", "Monte Carlo cheating campaign");
    attack_cmd->add_option("--preset", attack_args.scheme_source, "scheme preset or file:<path>");
    attack_cmd->add_option("--code", attack_args.code_source, "code spec or file:<path>")
        ->required();
    attack_cmd->add_option("--strategy", attack_args.strategy,
                           "wrong | superposition | mixture | custom");
    attack_cmd->add_option("--strings", attack_args.strings_s,
                           "candidate messages, e.g. 0,2 or 0.1,2.3")
        ->required();
    attack_cmd->add_option("--amps", attack_args.amps_s, "re,im;re,im... per string");
    attack_cmd->add_option("--weights", attack_args.weights_s, "w;w;... per string");
    attack_cmd->add_option("--state-file", attack_args.state_file,
                           "custom state amplitudes, `re im` per line");
    attack_cmd->add_option("--open", attack_args.open_rule, "best or fixed:<index>");
    attack_cmd->add_option("--trials", attack_args.trials, "Monte Carlo trials");
    attack_cmd->add_option("--seed", attack_args.seed, "campaign seed")->envname("QBSC_SEED");
    attack_cmd->add_option("--t", attack_args.t, "mismatch threshold");
    attack_cmd->add_option("--alpha", attack_args.alpha, "attach closed-form bounds at this alpha");
    attack_cmd->add_option("--p-loss", attack_args.p_loss_s, "loss probability");
    attack_cmd->add_option("--p-depol", attack_args.p_depol_s, "depolarization probability");
    attack_cmd->add_option("--csv", attack_args.csv_path, "write the campaign CSV");
    attack_cmd->add_option("--transcript-out", attack_args.transcript_path,
                           "write the first trial's transcript");

    VerifyArgs verify_args;
    CLI::App* verify_cmd =
        app.add_subcommand("verify", "brute-force binding audit (lambda_max vs bounds)");
    verify_cmd->add_option("--preset", verify_args.scheme_source, "scheme preset or file:<path>");
    verify_cmd->add_option("--code", verify_args.code_source, "code spec or file:<path>")
        ->required();
    verify_cmd->add_option("--strings", verify_args.strings_s, "candidate messages")
        ->required();
    verify_cmd->add_option("--alpha", verify_args.alpha, "subspace radius")->required();
    verify_cmd->add_option("--csv", verify_args.csv_path, "write the audit CSV");

    AuditArgs audit_args;
    CLI::App* audit_cmd =
        app.add_subcommand("audit", "orthogonality / eigenstructure / contraction checks");
    audit_cmd->add_option("--preset", audit_args.scheme_source, "scheme preset or file:<path>");
    audit_cmd->add_option("--code", audit_args.code_source, "code spec or file:<path>")
        ->required();
    audit_cmd->add_option("--strings", audit_args.strings_s, "messages for overlap checks");
    audit_cmd->add_option("--message", audit_args.message_s, "message for eigenstructure");
    audit_cmd->add_option("--alpha", audit_args.alpha, "subspace radius");
    audit_cmd->add_option("--trials", audit_args.trials, "contraction audit trials");
    audit_cmd->add_option("--seed", audit_args.seed, "audit seed")->envname("QBSC_SEED");

    CodesArgs codes_args;
    CLI::App* codes_cmd = app.add_subcommand("codes", "construct and inspect codes");
    codes_cmd->add_option("--code", codes_args.code_source, "code spec or file:<path>")
        ->required();
    codes_cmd->add_option("--budget", codes_args.budget, "enumeration budget");
    codes_cmd->add_flag("--recompute", codes_args.recompute, "re-measure the distance");
    codes_cmd->add_option("--out", codes_args.out_path, "write the code definition file");
    codes_cmd->add_option("--csv", codes_args.csv_path, "write a one-row summary CSV");

    std::vector<char*> argv;
    std::vector<std::string> storage;
    storage.reserve(args.size() + 1);
    storage.push_back("qbsc");
    for (const std::string& a : args) storage.push_back(a);
    for (std::string& s : storage) argv.push_back(s.data());

    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e); // prints help, exit 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (dump_config) {
        std::cout << app.config_to_str(true, false);
        return 0;
    }

    try {
        if (bounds_cmd->parsed()) return cmd_bounds(bounds_args);
        if (plan_cmd->parsed()) return cmd_plan(plan_args);
        if (run_cmd->parsed()) return cmd_run(run_args);
        if (attack_cmd->parsed()) return cmd_attack(attack_args);
        if (verify_cmd->parsed()) return cmd_verify(verify_args);
        if (audit_cmd->parsed()) return cmd_audit(audit_args);
        if (codes_cmd->parsed()) return cmd_codes(codes_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    std::cerr << app.help();
    return 2;
}

} // namespace qbsc
