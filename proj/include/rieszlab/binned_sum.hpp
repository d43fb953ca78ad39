#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace rieszlab {

// Order-independent, exactly reproducible floating-point summation.
//
// Every finite double is an integer multiple of 2^(e-52) where e = ilogb(v),
// so each addend can be split losslessly into a 53-bit integer mantissa and a
// binary exponent.  The accumulator keeps one 128-bit integer per (exponent,
// sign) bucket; adding a value is a single exact integer addition, so the
// bucket state -- and therefore the finalized result -- is bit-identical
// under any permutation of the inputs and under any partitioning into merged
// sub-accumulators.  Signed cancellation happens exactly, per exponent, when
// the total is drained (e.g. {1e20, 1.0, -1e20} finalizes to exactly 1.0).
//
// Finalization rounds once per occupied exponent while draining in ascending
// exponent order; with at most 2098 occupied buckets the result is accurate
// to a few ulp, far tighter than the 1e-12 relative guarantee callers rely
// on.  Rejects non-finite input.
class BinnedAccumulator {
public:
    BinnedAccumulator()
        : pos_(kBuckets, 0), neg_(kBuckets, 0), lo_(kBuckets), hi_(-1) {}

    void add(double v) {
        if (v == 0.0) return;
        if (!std::isfinite(v)) throw std::invalid_argument("binned sum: non-finite addend");
        const int e = std::ilogb(v);
        const int idx = e - kMinExp;
        // scalbn(|v|, 52 - e) is an exact power-of-two rescale to an integer
        // in [2^52, 2^53) (smaller for subnormals).
        const auto m = static_cast<std::uint64_t>(std::scalbn(std::fabs(v), 52 - e));
        (v > 0.0 ? pos_ : neg_)[static_cast<std::size_t>(idx)] += m;
        if (idx < lo_) lo_ = idx;
        if (idx > hi_) hi_ = idx;
    }

    // Fold another accumulator in; bucketwise integer addition, so merging is
    // associative and commutative at the bit level.
    void merge(const BinnedAccumulator& other) {
        for (int idx = other.lo_; idx <= other.hi_; ++idx) {
            pos_[static_cast<std::size_t>(idx)] += other.pos_[static_cast<std::size_t>(idx)];
            neg_[static_cast<std::size_t>(idx)] += other.neg_[static_cast<std::size_t>(idx)];
        }
        if (other.hi_ >= other.lo_) {
            if (other.lo_ < lo_) lo_ = other.lo_;
            if (other.hi_ > hi_) hi_ = other.hi_;
        }
    }

    // Drain to a double.  Does not modify the accumulator.
    double value() const {
        double total = 0.0;
        for (int idx = lo_; idx <= hi_; ++idx) {
            const __int128 net = static_cast<__int128>(pos_[static_cast<std::size_t>(idx)]) -
                                 static_cast<__int128>(neg_[static_cast<std::size_t>(idx)]);
            if (net != 0)
                total += std::scalbn(static_cast<double>(net), idx + kMinExp - 52);
        }
        return total;
    }

    void clear() {
        for (int idx = lo_; idx <= hi_; ++idx) {
            pos_[static_cast<std::size_t>(idx)] = 0;
            neg_[static_cast<std::size_t>(idx)] = 0;
        }
        lo_ = kBuckets;
        hi_ = -1;
    }

private:
    // ilogb of a double ranges over [-1074, 1023].
    static constexpr int kMinExp = -1074;
    static constexpr int kMaxExp = 1023;
    static constexpr int kBuckets = kMaxExp - kMinExp + 1;

    std::vector<unsigned __int128> pos_, neg_;
    int lo_, hi_;  // occupied index range (inclusive); empty when lo_ > hi_
};

// Exact-binning sum of a sequence; empty input sums to 0.
inline double binned_sum(std::span<const double> values) {
    BinnedAccumulator acc;
    for (double v : values) acc.add(v);
    return acc.value();
}

}  // namespace rieszlab
