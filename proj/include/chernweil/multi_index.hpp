#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cw {

// A strictly increasing list of axis labels, stored as a bitmask over axes
// 0..dim-1. Axis i is present iff bit i is set, so the increasing-order
// invariant is structural. Dimensions up to 8 are supported, far above the
// dim <= 4 this project uses.
class MultiIndex {
public:
    MultiIndex() : mask_(0) {}
    explicit MultiIndex(std::uint32_t mask) : mask_(mask) {}

    static MultiIndex from_axes(const std::vector<int>& axes) {
        std::uint32_t m = 0;
        int prev = -1;
        for (int a : axes) {
            if (a < 0 || a >= 32) throw std::invalid_argument("axis out of range");
            if (a <= prev) throw std::invalid_argument("axes must be strictly increasing");
            m |= (1u << a);
            prev = a;
        }
        return MultiIndex(m);
    }

    std::uint32_t mask() const { return mask_; }
    int degree() const { return std::popcount(mask_); }
    bool contains(int axis) const { return (mask_ >> axis) & 1u; }
    bool disjoint(MultiIndex other) const { return (mask_ & other.mask_) == 0; }

    std::vector<int> axes() const {
        std::vector<int> out;
        for (int a = 0; a < 32; ++a)
            if (contains(a)) out.push_back(a);
        return out;
    }

    MultiIndex unite(MultiIndex other) const { return MultiIndex(mask_ | other.mask_); }
    MultiIndex with_axis(int axis) const { return MultiIndex(mask_ | (1u << axis)); }

    bool operator==(MultiIndex o) const { return mask_ == o.mask_; }
    bool operator!=(MultiIndex o) const { return mask_ != o.mask_; }
    bool operator<(MultiIndex o) const {
        if (degree() != o.degree()) return degree() < o.degree();
        return mask_ < o.mask_;
    }

    std::string str() const {
        std::string s = "dx(";
        bool first = true;
        for (int a : axes()) {
            if (!first) s += ",";
            s += std::to_string(a);
            first = false;
        }
        return s + ")";
    }

private:
    std::uint32_t mask_;
};

// Sign of dx^I wedge dx^J relative to dx^{I u J}, i.e. the parity of the
// shuffle that merges the two increasing lists. Zero when the lists share
// an axis.
inline int wedge_sign(MultiIndex I, MultiIndex J) {
    if (!I.disjoint(J)) return 0;
    int crossings = 0;
    std::uint32_t jm = J.mask();
    while (jm) {
        int j = std::countr_zero(jm);
        jm &= jm - 1;
        // elements of I strictly above j must jump over this element of J
        crossings += std::popcount(I.mask() >> (j + 1));
    }
    return (crossings & 1) ? -1 : 1;
}

// Sign of dx^axis wedge dx^I relative to dx^{I u axis}.
inline int axis_prepend_sign(int axis, MultiIndex I) {
    if (I.contains(axis)) return 0;
    int below = std::popcount(I.mask() & ((1u << axis) - 1u));
    return (below & 1) ? -1 : 1;
}

// All multi-indices of the given degree over `dim` axes, in canonical order
// (increasing mask value).
inline std::vector<MultiIndex> multi_indices(int dim, int degree) {
    std::vector<MultiIndex> out;
    for (std::uint32_t m = 0; m < (1u << dim); ++m)
        if (std::popcount(m) == degree) out.push_back(MultiIndex(m));
    return out;
}

} // namespace cw
