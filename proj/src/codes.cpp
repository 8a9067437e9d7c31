#include "qbsc/codes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "qbsc/random.hpp"

namespace qbsc {

namespace {

bool factor_prime_power(unsigned q, unsigned& p, unsigned& m) {
    if (q < 2) return false;
    for (unsigned cand = 2; cand <= q; ++cand) {
        if (q % cand != 0) continue;
        p = cand;
        unsigned rest = q;
        m = 0;
        while (rest % p == 0) {
            rest /= p;
            ++m;
        }
        return rest == 1;
    }
    return false;
}

// Polynomials over GF(p) packed as base-p digit vectors, low degree first.
using Poly = std::vector<unsigned>;

Poly poly_mod(Poly a, const Poly& mod, unsigned p) {
    const std::size_t md = mod.size() - 1; // mod is monic of degree md
    while (a.size() > md) {
        const unsigned lead = a.back();
        if (lead != 0) {
            const std::size_t shift = a.size() - 1 - md;
            for (std::size_t i = 0; i <= md; ++i) {
                unsigned sub = (lead * mod[i]) % p;
                a[shift + i] = (a[shift + i] + p - sub) % p;
            }
        }
        a.pop_back();
    }
    while (a.size() > 1 && a.back() == 0) a.pop_back();
    return a;
}

Poly poly_mul(const Poly& a, const Poly& b, const Poly& mod, unsigned p) {
    Poly prod(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
    return poly_mod(std::move(prod), mod, p);
}

unsigned poly_to_label(const Poly& a, unsigned p) {
    unsigned label = 0, scale = 1;
    for (unsigned digit : a) {
        label += digit * scale;
        scale *= p;
    }
    return label;
}

Poly label_to_poly(unsigned label, unsigned p) {
    Poly a;
    do {
        a.push_back(label % p);
        label /= p;
    } while (label != 0);
    return a;
}

bool poly_is_zero(const Poly& a) {
    for (unsigned d : a)
        if (d != 0) return false;
    return true;
}

// Trial division by every monic polynomial of degree 1..deg/2.
bool is_irreducible(const Poly& f, unsigned p) {
    const std::size_t deg = f.size() - 1;
    for (std::size_t dd = 1; dd + dd <= deg; ++dd) {
        unsigned count = 1;
        for (std::size_t i = 0; i < dd; ++i) count *= p;
        for (unsigned idx = 0; idx < count; ++idx) {
            Poly g = label_to_poly(idx, p);
            g.resize(dd + 1, 0);
            g[dd] = 1; // monic
            Poly r = poly_mod(f, g, p);
            if (poly_is_zero(r)) return false;
        }
    }
    return true;
}

Poly smallest_irreducible(unsigned p, unsigned m) {
    unsigned count = 1;
    for (unsigned i = 0; i < m; ++i) count *= p;
    for (unsigned idx = 0; idx < count; ++idx) {
        Poly f = label_to_poly(idx, p);
        f.resize(m + 1, 0);
        f[m] = 1;
        if (is_irreducible(f, p)) return f;
    }
    throw validation_error("no irreducible polynomial found"); // unreachable
}

void verify_field_axioms(const FieldTables& f) {
    const unsigned q = f.q();
    auto check_triple = [&](Symbol a, Symbol b, Symbol c) {
        if (f.add(f.add(a, b), c) != f.add(a, f.add(b, c)))
            throw validation_error("field: addition not associative");
        if (f.mul(f.mul(a, b), c) != f.mul(a, f.mul(b, c)))
            throw validation_error("field: multiplication not associative");
        if (f.mul(a, f.add(b, c)) != f.add(f.mul(a, b), f.mul(a, c)))
            throw validation_error("field: distributivity fails");
    };
    auto check_unary = [&](Symbol a) {
        if (f.add(a, 0) != a) throw validation_error("field: additive identity fails");
        if (f.mul(a, 1) != a) throw validation_error("field: multiplicative identity fails");
        if (f.add(a, f.neg(a)) != 0) throw validation_error("field: additive inverse fails");
        if (a != 0 && f.mul(a, f.inv(a)) != 1)
            throw validation_error("field: multiplicative inverse fails");
    };
    if (q <= 16) {
        for (unsigned a = 0; a < q; ++a) {
            check_unary(Symbol(a));
            for (unsigned b = 0; b < q; ++b)
                for (unsigned c = 0; c < q; ++c) check_triple(Symbol(a), Symbol(b), Symbol(c));
        }
    } else {
        RandomSource rng(0xf1e1dULL + q);
        for (unsigned a = 0; a < q; ++a) check_unary(Symbol(a));
        for (int i = 0; i < 1000; ++i)
            check_triple(Symbol(rng.next_below(q)), Symbol(rng.next_below(q)),
                         Symbol(rng.next_below(q)));
    }
}

} // namespace

Symbol FieldTables::inv(Symbol a) const {
    if (a == 0) throw validation_error("field: zero has no inverse");
    for (unsigned b = 1; b < q_; ++b)
        if (mul(a, Symbol(b)) == 1) return Symbol(b);
    throw validation_error("field: inverse not found"); // unreachable in a field
}

Symbol FieldTables::pow(Symbol a, std::uint64_t e) const {
    Symbol acc = 1;
    while (e != 0) {
        if (e & 1) acc = mul(acc, a);
        a = mul(a, a);
        e >>= 1;
    }
    return acc;
}

std::string FieldTables::irreducible_poly_description() const {
    if (m_ == 1) return "prime field, arithmetic mod " + std::to_string(p_);
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = poly_.size(); i-- > 0;) {
        if (poly_[i] == 0) continue;
        if (!first) os << " + ";
        first = false;
        if (i == 0 || poly_[i] != 1) os << poly_[i];
        if (i >= 1) {
            os << "x";
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

FieldTables field_make(unsigned q) {
    unsigned p = 0, m = 0;
    if (q > 256 || !factor_prime_power(q, p, m))
        throw validation_error("field: q = " + std::to_string(q) +
                               " is not a prime power <= 256");

    FieldTables f;
    f.q_ = q;
    f.p_ = p;
    f.m_ = m;

    f.add_.resize(std::size_t(q) * q);
    f.mul_.resize(std::size_t(q) * q);
    f.neg_.resize(q);

    if (m == 1) {
        for (unsigned a = 0; a < q; ++a) {
            f.neg_[a] = Symbol((q - a) % q);
            for (unsigned b = 0; b < q; ++b) {
                f.add_[a * q + b] = Symbol((a + b) % q);
                f.mul_[a * q + b] = Symbol((a * b) % q);
            }
        }
    } else {
        Poly mod = smallest_irreducible(p, m);
        f.poly_.assign(mod.begin(), mod.end());
        for (unsigned a = 0; a < q; ++a) {
            const Poly pa = label_to_poly(a, p);
            Poly na(pa.size());
            for (std::size_t i = 0; i < pa.size(); ++i) na[i] = (p - pa[i]) % p;
            f.neg_[a] = Symbol(poly_to_label(na, p));
            for (unsigned b = 0; b < q; ++b) {
                const Poly pb = label_to_poly(b, p);
                Poly sum(std::max(pa.size(), pb.size()), 0);
                for (std::size_t i = 0; i < sum.size(); ++i) {
                    unsigned x = i < pa.size() ? pa[i] : 0;
                    unsigned y = i < pb.size() ? pb[i] : 0;
                    sum[i] = (x + y) % p;
                }
                f.add_[a * q + b] = Symbol(poly_to_label(sum, p));
                f.mul_[a * q + b] = Symbol(poly_to_label(poly_mul(pa, pb, mod, p), p));
            }
        }
    }

    verify_field_axioms(f);
    return f;
}

std::string to_string(DistanceStatus s) {
    switch (s) {
        case DistanceStatus::Exact: return "exact";
        case DistanceStatus::CertifiedLowerBound: return "certified-lower-bound";
        case DistanceStatus::DeclaredOnly: return "declared-only";
    }
    return "declared-only";
}

DistanceStatus distance_status_from_string(const std::string& s) {
    if (s == "exact") return DistanceStatus::Exact;
    if (s == "certified-lower-bound") return DistanceStatus::CertifiedLowerBound;
    if (s == "declared-only") return DistanceStatus::DeclaredOnly;
    throw validation_error("unknown d_status `" + s + "`");
}

Codeword encode(const QaryCode& code, std::span<const Symbol> message) {
    if (message.size() != code.k)
        throw validation_error("encode: message length " + std::to_string(message.size()) +
                               ", expected " + std::to_string(code.k));
    for (Symbol s : message)
        if (s >= code.q) throw validation_error("encode: symbol out of range");
    const FieldTables& f = *code.field;
    std::vector<Symbol> out(code.N, 0);
    for (std::size_t i = 0; i < code.k; ++i) {
        const Symbol mi = message[i];
        if (mi == 0) continue;
        for (std::size_t j = 0; j < code.N; ++j)
            out[j] = f.add(out[j], f.mul(mi, code.gen_at(i, j)));
    }
    return Codeword(std::move(out));
}

namespace {

std::size_t code_rank(const QaryCode& code) {
    const FieldTables& f = *code.field;
    std::vector<Symbol> mat = code.generator;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < code.N && rank < code.k; ++col) {
        std::size_t pivot = rank;
        while (pivot < code.k && mat[pivot * code.N + col] == 0) ++pivot;
        if (pivot == code.k) continue;
        std::swap_ranges(mat.begin() + pivot * code.N, mat.begin() + (pivot + 1) * code.N,
                         mat.begin() + rank * code.N);
        const Symbol pinv = f.inv(mat[rank * code.N + col]);
        for (std::size_t j = col; j < code.N; ++j)
            mat[rank * code.N + j] = f.mul(pinv, mat[rank * code.N + j]);
        for (std::size_t r = 0; r < code.k; ++r) {
            if (r == rank) continue;
            const Symbol factor = mat[r * code.N + col];
            if (factor == 0) continue;
            for (std::size_t j = col; j < code.N; ++j)
                mat[r * code.N + j] =
                    f.sub(mat[r * code.N + j], f.mul(factor, mat[rank * code.N + j]));
        }
        ++rank;
    }
    return rank;
}

void check_code_params(unsigned q, std::size_t N, std::size_t k) {
    if (N == 0) throw validation_error("code: block length must be positive");
    if (k == 0) throw validation_error("code: dimension must be positive");
    if (k > N) throw validation_error("code: k > N");
    (void)q;
}

std::size_t weight(const Codeword& cw) {
    std::size_t w = 0;
    for (Symbol s : cw.symbols) w += (s != 0);
    return w;
}

} // namespace

QaryCode repetition(unsigned q, std::size_t N) {
    check_code_params(q, N, 1);
    QaryCode code;
    code.kind = "repetition";
    code.q = q;
    code.N = N;
    code.k = 1;
    code.field = std::make_shared<FieldTables>(field_make(q));
    code.generator.assign(N, Symbol(1));
    code.d = N;
    code.d_status = DistanceStatus::Exact;
    return code;
}

QaryCode reed_solomon(unsigned q, std::size_t N, std::size_t k) {
    check_code_params(q, N, k);
    if (N > q) throw validation_error("rs: needs N <= q distinct evaluation points");
    QaryCode code;
    code.kind = "rs";
    code.q = q;
    code.N = N;
    code.k = k;
    code.field = std::make_shared<FieldTables>(field_make(q));
    code.generator.resize(k * N);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < N; ++j)
            code.generator[i * N + j] = code.field->pow(Symbol(j), i);
    // MDS distance; confirmed by enumeration at desk sizes.
    code.d = N - k + 1;
    code.d_status = DistanceStatus::Exact;
    double total = std::pow(double(q), double(k));
    if (total <= double(1ULL << 20)) {
        MinDistanceResult found = min_distance(code);
        if (found.d != code.d)
            throw validation_error("rs: enumerated distance disagrees with N-k+1");
    }
    return code;
}

QaryCode random_linear(unsigned q, std::size_t N, std::size_t k, std::uint64_t seed) {
    check_code_params(q, N, k);
    QaryCode code;
    code.kind = "random-linear";
    code.q = q;
    code.N = N;
    code.k = k;
    code.field = std::make_shared<FieldTables>(field_make(q));
    RandomSource rng(seed);
    // Redraw until the generator has full rank, so distinct messages always
    // map to distinct codewords; still deterministic per seed.
    for (int attempt = 0; attempt < 1000; ++attempt) {
        code.generator.resize(k * N);
        for (auto& s : code.generator) s = Symbol(rng.next_below(q));
        if (code_rank(code) == k) break;
        if (attempt == 999) throw validation_error("random_linear: no full-rank draw found");
    }
    MinDistanceResult md = min_distance(code);
    code.d = md.d;
    code.d_status = md.status;
    return code;
}

MinDistanceResult min_distance(const QaryCode& code, std::uint64_t budget) {
    const FieldTables& f = *code.field;
    const double total_msgs = std::pow(double(code.q), double(code.k));

    auto row_scaled = [&](std::size_t row, Symbol s) {
        std::vector<Symbol> out(code.N);
        for (std::size_t j = 0; j < code.N; ++j) out[j] = f.mul(s, code.gen_at(row, j));
        return out;
    };

    if (total_msgs <= double(budget)) {
        // Depth-first over message digits, keeping the running sum of scaled
        // generator rows so each codeword costs O(N).
        std::size_t best = code.N + 1;
        std::vector<Symbol> current(code.N, 0);
        auto rec = [&](auto&& self, std::size_t row, bool nonzero) -> void {
            if (best == 1) return;
            if (row == code.k) {
                if (nonzero) {
                    std::size_t w = 0;
                    for (Symbol s : current) w += (s != 0);
                    best = std::min(best, w);
                }
                return;
            }
            self(self, row + 1, nonzero); // digit 0 leaves the sum unchanged
            const std::vector<Symbol> saved = current;
            for (unsigned s = 1; s < code.q; ++s) {
                const std::vector<Symbol> scaled = row_scaled(row, Symbol(s));
                for (std::size_t j = 0; j < code.N; ++j)
                    current[j] = f.add(saved[j], scaled[j]);
                self(self, row + 1, true);
            }
            current = saved;
        };
        rec(rec, 0, false);
        if (best > code.N) throw validation_error("min_distance: generator has rank zero");
        return {best, DistanceStatus::Exact};
    }

    // Too many messages to enumerate: sample. The result is a distance seen,
    // not a certificate, and is labelled accordingly.
    RandomSource rng(0xd157ULL ^ (std::uint64_t(code.q) << 32) ^ code.N);
    std::size_t best = code.N;
    std::vector<Symbol> msg(code.k);
    for (std::uint64_t trial = 0; trial < budget; ++trial) {
        bool nonzero = false;
        for (auto& s : msg) {
            s = Symbol(rng.next_below(code.q));
            nonzero = nonzero || (s != 0);
        }
        if (!nonzero) continue;
        best = std::min(best, weight(encode(code, msg)));
    }
    return {best, DistanceStatus::DeclaredOnly};
}

double gv_rate(unsigned q, double delta) {
    if (q < 2) throw validation_error("gv_rate: q must be at least 2");
    const double upper = 1.0 - 1.0 / double(q);
    if (!(delta > 0.0) || !(delta <= upper))
        throw validation_error("gv_rate: delta must lie in (0, 1 - 1/q]");
    const double lq = std::log2(double(q));
    const double hq = delta * std::log2(double(q - 1)) / lq - delta * std::log2(delta) / lq -
                      (1.0 - delta) * std::log2(1.0 - delta) / lq;
    return 1.0 - hq;
}

void write_code_file(const QaryCode& code, std::ostream& out) {
    out << "code kind=" << code.kind << " q=" << code.q << " N=" << code.N << " k=" << code.k
        << " d=" << code.d << " d_status=" << to_string(code.d_status) << "\n";
    for (std::size_t i = 0; i < code.k; ++i) {
        for (std::size_t j = 0; j < code.N; ++j) {
            if (j) out << " ";
            out << code.gen_at(i, j);
        }
        out << "\n";
    }
}

QaryCode parse_code_file(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw parse_error(1, "empty code file");
    ++lineno;

    char kind[32] = {0};
    char status[32] = {0};
    unsigned q = 0;
    std::size_t N = 0, k = 0, d = 0;
    if (std::sscanf(line.c_str(), "code kind=%31s q=%u N=%zu k=%zu d=%zu d_status=%31s", kind,
                    &q, &N, &k, &d, status) != 6)
        throw parse_error(lineno, "expected `code kind= q= N= k= d= d_status=` header");

    QaryCode code;
    code.kind = kind;
    code.q = q;
    code.N = N;
    code.k = k;
    code.d = d;
    try {
        code.d_status = distance_status_from_string(status);
        code.field = std::make_shared<FieldTables>(field_make(q));
        check_code_params(q, N, k);
    } catch (const validation_error& err) {
        throw parse_error(lineno, err.what());
    }
    if (d < 1 || d > N) throw parse_error(lineno, "d must satisfy 1 <= d <= N");

    code.generator.resize(k * N);
    for (std::size_t i = 0; i < k; ++i) {
        if (!std::getline(in, line))
            throw parse_error(lineno + 1, "expected " + std::to_string(k) + " generator rows");
        ++lineno;
        std::istringstream ls(line);
        for (std::size_t j = 0; j < N; ++j) {
            long v = -1;
            if (!(ls >> v) || v < 0 || unsigned(v) >= q)
                throw parse_error(lineno, "bad generator symbol in row " + std::to_string(i));
            code.generator[i * N + j] = Symbol(v);
        }
        long extra;
        if (ls >> extra) throw parse_error(lineno, "too many symbols in generator row");
    }
    return code;
}

QaryCode code_from_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    std::uint64_t q = 0, N = 0, k = 0, seed = 0;
    bool have_seed = false;
    if (colon != std::string::npos) {
        std::stringstream ss(spec.substr(colon + 1));
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos)
                throw validation_error("code spec: expected key=value, got `" + item + "`");
            const std::string key = item.substr(0, eq);
            const std::uint64_t val = std::stoull(item.substr(eq + 1));
            if (key == "q") q = val;
            else if (key == "N") N = val;
            else if (key == "k") k = val;
            else if (key == "seed") { seed = val; have_seed = true; }
            else throw validation_error("code spec: unknown key `" + key + "`");
        }
    }
    if (kind == "rep" || kind == "repetition") return repetition(unsigned(q), N);
    if (kind == "rs") return reed_solomon(unsigned(q), N, k);
    if (kind == "rand" || kind == "random-linear") {
        if (!have_seed) throw validation_error("code spec: random-linear needs seed=");
        return random_linear(unsigned(q), N, k, seed);
    }
    throw validation_error("code spec: unknown kind `" + kind + "` (want rep|rs|rand|file)");
}

} // namespace qbsc
