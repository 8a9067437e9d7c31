#ifndef QBSC_BIGINT_HPP
#define QBSC_BIGINT_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "qbsc/errors.hpp"

namespace qbsc {

/// Unsigned big integer with just the operations the bound calculators need:
/// add, multiply/divide by small values, compare, log2, decimal rendering.
/// Limbs are base 2^32, little endian.
class BigUint {
public:
    BigUint() : limbs_{0} {}
    BigUint(std::uint64_t v) { // implicit: small literals convert freely
        limbs_.push_back(std::uint32_t(v));
        if (v >> 32) limbs_.push_back(std::uint32_t(v >> 32));
    }

    bool is_zero() const { return limbs_.size() == 1 && limbs_[0] == 0; }

    BigUint& operator+=(const BigUint& other) {
        const std::size_t n = std::max(limbs_.size(), other.limbs_.size());
        limbs_.resize(n, 0);
        std::uint64_t carry = 0;
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t s = carry + limbs_[i];
            if (i < other.limbs_.size()) s += other.limbs_[i];
            limbs_[i] = std::uint32_t(s);
            carry = s >> 32;
        }
        if (carry) limbs_.push_back(std::uint32_t(carry));
        return *this;
    }

    BigUint& mul_small(std::uint64_t m) {
        if (m > 0xffffffffULL)
            throw validation_error("BigUint::mul_small: multiplier exceeds 32 bits");
        std::uint64_t carry = 0;
        for (auto& limb : limbs_) {
            const std::uint64_t prod = std::uint64_t(limb) * m + carry;
            limb = std::uint32_t(prod);
            carry = prod >> 32;
        }
        while (carry) {
            limbs_.push_back(std::uint32_t(carry));
            carry >>= 32;
        }
        trim();
        return *this;
    }

    /// Exact division by a small divisor; throws if a remainder is left.
    BigUint& div_small_exact(std::uint32_t divisor) {
        std::uint32_t rem = div_small(divisor);
        if (rem != 0) throw validation_error("BigUint: division was not exact");
        return *this;
    }

    /// In-place division by a small divisor; returns the remainder.
    std::uint32_t div_small(std::uint32_t divisor) {
        if (divisor == 0) throw validation_error("BigUint: divide by zero");
        std::uint64_t rem = 0;
        for (std::size_t i = limbs_.size(); i-- > 0;) {
            const std::uint64_t cur = (rem << 32) | limbs_[i];
            limbs_[i] = std::uint32_t(cur / divisor);
            rem = cur % divisor;
        }
        trim();
        return std::uint32_t(rem);
    }

    int compare(const BigUint& other) const {
        if (limbs_.size() != other.limbs_.size())
            return limbs_.size() < other.limbs_.size() ? -1 : 1;
        for (std::size_t i = limbs_.size(); i-- > 0;)
            if (limbs_[i] != other.limbs_[i]) return limbs_[i] < other.limbs_[i] ? -1 : 1;
        return 0;
    }
    bool operator==(const BigUint& o) const { return compare(o) == 0; }
    bool operator<(const BigUint& o) const { return compare(o) < 0; }
    bool operator<=(const BigUint& o) const { return compare(o) <= 0; }

    /// Nearest double; +inf if out of range.
    double to_double() const {
        double acc = 0.0;
        for (std::size_t i = limbs_.size(); i-- > 0;) acc = acc * 4294967296.0 + limbs_[i];
        return acc;
    }

    /// log2, accurate to ~1e-12; -inf for zero.
    double log2() const {
        if (is_zero()) return -std::numeric_limits<double>::infinity();
        // 96 leading bits are more than a double mantissa can hold
        double mant = 0.0;
        std::size_t taken = 0;
        for (std::size_t i = limbs_.size(); i-- > 0 && taken < 3; ++taken)
            mant = mant * 4294967296.0 + limbs_[i];
        return std::log2(mant) + double((limbs_.size() - taken) * 32);
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        BigUint tmp = *this;
        std::string digits;
        while (!tmp.is_zero()) digits.push_back(char('0' + tmp.div_small(10)));
        return {digits.rbegin(), digits.rend()};
    }

private:
    void trim() {
        while (limbs_.size() > 1 && limbs_.back() == 0) limbs_.pop_back();
    }

    std::vector<std::uint32_t> limbs_;
};

} // namespace qbsc

#endif
