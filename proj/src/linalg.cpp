#include "qbsc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qbsc/random.hpp"

namespace qbsc {

double StateVector::norm_sq() const {
    double s = 0.0;
    for (const auto& a : amps) s += std::norm(a);
    return s;
}

double StateVector::norm() const { return std::sqrt(norm_sq()); }

bool StateVector::is_normalized(double tol) const {
    return std::abs(norm_sq() - 1.0) <= tol;
}

void StateVector::normalize() {
    const double n = norm();
    if (n == 0.0) throw validation_error("cannot normalize the zero vector");
    for (auto& a : amps) a /= n;
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) throw validation_error("basis index out of range");
    StateVector v;
    v.amps.assign(dim, complex_t{0.0, 0.0});
    v.amps[index] = complex_t{1.0, 0.0};
    return v;
}

complex_t inner_product(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim()) throw validation_error("inner_product: dimension mismatch");
    complex_t s{0.0, 0.0};
    for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a.amps[i]) * b.amps[i];
    return s;
}

DenseOperator DenseOperator::identity(std::size_t n) {
    DenseOperator op(n, true);
    for (std::size_t i = 0; i < n; ++i) op.at(i, i) = complex_t{1.0, 0.0};
    return op;
}

DenseOperator DenseOperator::outer(const StateVector& v) {
    DenseOperator op(v.dim(), true);
    for (std::size_t r = 0; r < v.dim(); ++r)
        for (std::size_t c = 0; c < v.dim(); ++c)
            op.at(r, c) = v.amps[r] * std::conj(v.amps[c]);
    return op;
}

DenseOperator& DenseOperator::operator+=(const DenseOperator& other) {
    if (dim != other.dim) throw validation_error("operator sum: dimension mismatch");
    for (std::size_t i = 0; i < entries.size(); ++i) entries[i] += other.entries[i];
    hermitian = hermitian && other.hermitian;
    return *this;
}

DenseOperator& DenseOperator::operator*=(double scalar) {
    for (auto& e : entries) e *= scalar;
    return *this;
}

bool DenseOperator::is_hermitian(double tol) const {
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = r; c < dim; ++c)
            if (std::abs(at(r, c) - std::conj(at(c, r))) > tol) return false;
    return true;
}

double DenseOperator::unitarity_defect() const {
    double worst = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
        for (std::size_t k = 0; k < dim; ++k) {
            complex_t s{0.0, 0.0};
            for (std::size_t r = 0; r < dim; ++r) s += std::conj(at(r, j)) * at(r, k);
            if (j == k) s -= 1.0;
            worst = std::max(worst, std::abs(s));
        }
    }
    return worst;
}

StateVector apply(const DenseOperator& op, const StateVector& v) {
    if (op.dim != v.dim()) throw validation_error("apply: dimension mismatch");
    StateVector out;
    out.amps.assign(op.dim, complex_t{0.0, 0.0});
    for (std::size_t r = 0; r < op.dim; ++r) {
        complex_t s{0.0, 0.0};
        for (std::size_t c = 0; c < op.dim; ++c) s += op.at(r, c) * v.amps[c];
        out.amps[r] = s;
    }
    return out;
}

namespace {

std::size_t checked_product_dim(std::span<const std::size_t> dims, std::size_t cap) {
    std::size_t total = 1;
    for (std::size_t d : dims) {
        if (d == 0) throw validation_error("tensor factor has dimension zero");
        if (total > cap / d)
            throw size_error("tensor product dimension exceeds cap " + std::to_string(cap));
        total *= d;
    }
    return total;
}

} // namespace

StateVector tensor_state(std::span<const StateVector> parts, std::size_t cap) {
    if (parts.empty()) throw validation_error("tensor_state: no factors");
    std::vector<std::size_t> dims;
    dims.reserve(parts.size());
    for (const auto& p : parts) dims.push_back(p.dim());
    checked_product_dim(dims, cap);

    StateVector acc = parts[0];
    for (std::size_t k = 1; k < parts.size(); ++k) {
        const StateVector& next = parts[k];
        StateVector out;
        out.amps.resize(acc.dim() * next.dim());
        for (std::size_t i = 0; i < acc.dim(); ++i)
            for (std::size_t j = 0; j < next.dim(); ++j)
                out.amps[i * next.dim() + j] = acc.amps[i] * next.amps[j];
        acc = std::move(out);
    }
    return acc;
}

DenseOperator tensor_operator(std::span<const DenseOperator> parts, std::size_t cap) {
    if (parts.empty()) throw validation_error("tensor_operator: no factors");
    std::vector<std::size_t> dims;
    dims.reserve(parts.size());
    for (const auto& p : parts) {
        if (p.dim * p.dim != p.entries.size())
            throw validation_error("tensor_operator: non-square factor");
        dims.push_back(p.dim);
    }
    checked_product_dim(dims, cap);

    DenseOperator acc = parts[0];
    for (std::size_t k = 1; k < parts.size(); ++k) {
        const DenseOperator& next = parts[k];
        DenseOperator out(acc.dim * next.dim);
        out.hermitian = acc.hermitian && next.hermitian;
        for (std::size_t ri = 0; ri < acc.dim; ++ri)
            for (std::size_t rj = 0; rj < next.dim; ++rj)
                for (std::size_t ci = 0; ci < acc.dim; ++ci) {
                    const complex_t aic = acc.at(ri, ci);
                    if (aic == complex_t{0.0, 0.0}) continue;
                    for (std::size_t cj = 0; cj < next.dim; ++cj)
                        out.at(ri * next.dim + rj, ci * next.dim + cj) = aic * next.at(rj, cj);
                }
        acc = std::move(out);
    }
    return acc;
}

double expectation(const StateVector& state, const DenseOperator& op, double imag_tol) {
    if (state.dim() != op.dim) throw validation_error("expectation: dimension mismatch");
    if (!op.hermitian) throw validation_error("expectation: operator not flagged Hermitian");
    if (!state.is_normalized(1e-9)) throw validation_error("expectation: state not normalized");
    complex_t s{0.0, 0.0};
    for (std::size_t r = 0; r < op.dim; ++r) {
        complex_t row{0.0, 0.0};
        for (std::size_t c = 0; c < op.dim; ++c) row += op.at(r, c) * state.amps[c];
        s += std::conj(state.amps[r]) * row;
    }
    if (std::abs(s.imag()) > imag_tol)
        throw validation_error("expectation: imaginary residue " + std::to_string(s.imag()));
    return s.real();
}

JacobiResult jacobi_diagonalize(const DenseOperator& op, double tol, std::size_t max_sweeps) {
    if (!op.hermitian || !op.is_hermitian(1e-9))
        throw validation_error("jacobi: operator not Hermitian");
    const std::size_t n = op.dim;
    DenseOperator a = op;
    DenseOperator v = DenseOperator::identity(n);

    auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = r + 1; c < n; ++c) s += std::norm(a.at(r, c));
        return std::sqrt(2.0 * s);
    };

    double scale = 0.0;
    for (const auto& e : a.entries) scale = std::max(scale, std::abs(e));
    if (scale == 0.0) scale = 1.0;

    bool settled = false;
    for (std::size_t sweep = 0; sweep < max_sweeps && !settled; ++sweep) {
        settled = off_norm() <= tol * scale * n;
        if (settled) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const complex_t apq = a.at(p, q);
                const double mag = std::abs(apq);
                if (mag <= tol * scale) continue;

                // Unitary plane rotation zeroing a_pq: phase e^{i phi} from
                // a_pq, angle from the real 2x2 symmetric problem.
                const complex_t phase = apq / mag;
                const double app = a.at(p, p).real();
                const double aqq = a.at(q, q).real();
                const double theta = (aqq - app) / (2.0 * mag);
                double t;
                if (theta >= 0.0)
                    t = 1.0 / (theta + std::sqrt(1.0 + theta * theta));
                else
                    t = -1.0 / (-theta + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const complex_t s = phase * (t * c);

                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const complex_t akp = a.at(k, p);
                    const complex_t akq = a.at(k, q);
                    a.at(k, p) = c * akp - std::conj(s) * akq;
                    a.at(k, q) = s * akp + c * akq;
                    a.at(p, k) = std::conj(a.at(k, p));
                    a.at(q, k) = std::conj(a.at(k, q));
                }
                a.at(p, p) = complex_t{app - t * mag, 0.0};
                a.at(q, q) = complex_t{aqq + t * mag, 0.0};
                a.at(p, q) = complex_t{0.0, 0.0};
                a.at(q, p) = complex_t{0.0, 0.0};

                for (std::size_t k = 0; k < n; ++k) {
                    const complex_t vkp = v.at(k, p);
                    const complex_t vkq = v.at(k, q);
                    v.at(k, p) = c * vkp - std::conj(s) * vkq;
                    v.at(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    if (!settled && off_norm() > tol * scale * n)
        throw convergence_error("jacobi: off-diagonal mass left after " +
                                    std::to_string(max_sweeps) + " sweeps",
                                0.0, max_sweeps);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return a.at(i, i).real() < a.at(j, j).real();
    });

    JacobiResult result;
    result.values.resize(n);
    result.vectors = DenseOperator(n);
    for (std::size_t k = 0; k < n; ++k) {
        result.values[k] = a.at(order[k], order[k]).real();
        for (std::size_t r = 0; r < n; ++r) result.vectors.at(r, k) = v.at(r, order[k]);
    }
    return result;
}

std::vector<double> jacobi_eigenvalues(const DenseOperator& op) {
    return jacobi_diagonalize(op).values;
}

LambdaMaxResult lambda_max(const DenseOperator& op, double tol, std::size_t max_iters) {
    if (op.dim == 0) throw validation_error("lambda_max: empty operator");
    if (!op.hermitian || !op.is_hermitian(1e-9))
        throw validation_error("lambda_max: operator not Hermitian");

    const std::size_t n = op.dim;

    // Seeded start; deterministic and almost surely not orthogonal to the
    // top eigenspace.
    RandomSource rng(0x5eedULL ^ (std::uint64_t)n);
    StateVector v;
    v.amps.resize(n);
    for (auto& a : v.amps) a = complex_t{rng.next_double() - 0.5, rng.next_double() - 0.5};
    v.normalize();

    double value = 0.0;
    double residual = 0.0;
    bool converged = false;
    std::size_t iters = 0;
    for (; iters < max_iters; ++iters) {
        StateVector w = apply(op, v);
        const complex_t rayleigh = inner_product(v, w);
        value = rayleigh.real();
        double rsq = 0.0;
        for (std::size_t i = 0; i < n; ++i) rsq += std::norm(w.amps[i] - rayleigh * v.amps[i]);
        residual = std::sqrt(rsq);
        const double wn = w.norm();
        if (wn == 0.0) {
            // op annihilates v: for PSD input v already spans a null direction
            // and 0 is the only reachable value from here.
            return {0.0, v, iters};
        }
        if (residual <= 0.5 * tol * std::max(std::abs(value), 1e-300)) {
            converged = true;
            for (std::size_t i = 0; i < n; ++i) v.amps[i] = w.amps[i] / wn;
            break;
        }
        for (std::size_t i = 0; i < n; ++i) v.amps[i] = w.amps[i] / wn;
    }

    if (n <= 512) {
        // Independent cross-check, and the fallback when the power method
        // stalls on a tight eigenvalue cluster.
        JacobiResult jd = jacobi_diagonalize(op);
        const double jv = jd.values.back();
        const double agree_tol = std::max(10.0 * tol * std::max(std::abs(jv), 1.0), 1e-9);
        if (!converged || std::abs(jv - value) > agree_tol) {
            StateVector witness;
            witness.amps.resize(n);
            for (std::size_t r = 0; r < n; ++r) witness.amps[r] = jd.vectors.at(r, n - 1);
            witness.normalize();
            return {jv, witness, iters};
        }
        return {value, v, iters};
    }

    if (!converged)
        throw convergence_error("lambda_max: no convergence after " +
                                    std::to_string(max_iters) + " iterations (residual " +
                                    std::to_string(residual) + ")",
                                value, iters);
    return {value, v, iters};
}

} // namespace qbsc
