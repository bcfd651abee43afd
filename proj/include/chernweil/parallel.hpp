#pragma once

#include <cstddef>
#include <functional>
#include <future>
#include <thread>
#include <vector>

namespace cw {

inline unsigned worker_threads() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

// Deterministic pairwise reduction over the index range [0, n).
// The summation tree depends only on n (leaves of at most `leaf` terms,
// halves combined in fixed order), so the result is independent of thread
// scheduling. `eval(i)` must be pure.
template <typename T, typename Eval>
T pairwise_sum(std::size_t n, const Eval& eval, std::size_t leaf = 64) {
    struct Rec {
        static T run(std::size_t lo, std::size_t hi, const Eval& eval, std::size_t leaf) {
            if (hi - lo <= leaf) {
                T acc{};
                for (std::size_t i = lo; i < hi; ++i) acc += eval(i);
                return acc;
            }
            std::size_t mid = lo + (hi - lo) / 2;
            T a = run(lo, mid, eval, leaf);
            T b = run(mid, hi, eval, leaf);
            return a + b;
        }
    };
    if (n == 0) return T{};
    return Rec::run(0, n, eval, leaf);
}

// Parallel variant: splits [0, n) into 2^k top-level blocks evaluated on a
// small async pool, then combines the block results along the same fixed
// binary tree as the serial version. Identical output to pairwise_sum.
template <typename T, typename Eval>
T parallel_pairwise_sum(std::size_t n, const Eval& eval, std::size_t leaf = 64) {
    if (n == 0) return T{};
    unsigned hw = worker_threads();
    if (hw <= 1 || n < 4 * leaf) return pairwise_sum<T>(n, eval, leaf);

    // power-of-two block count so the combine tree matches the serial split
    std::size_t blocks = 1;
    while (blocks < 2 * hw) blocks *= 2;
    while (blocks > 1 && n / blocks < leaf) blocks /= 2;

    // serial split points: repeated halving of [0, n)
    std::vector<std::pair<std::size_t, std::size_t>> ranges{{0, n}};
    while (ranges.size() < blocks) {
        std::vector<std::pair<std::size_t, std::size_t>> next;
        for (auto [lo, hi] : ranges) {
            std::size_t mid = lo + (hi - lo) / 2;
            next.push_back({lo, mid});
            next.push_back({mid, hi});
        }
        ranges = std::move(next);
    }

    std::vector<std::future<T>> futs;
    futs.reserve(ranges.size());
    for (auto [lo, hi] : ranges)
        futs.push_back(std::async(std::launch::async, [lo, hi, &eval, leaf] {
            return pairwise_sum<T>(hi - lo, [&](std::size_t i) { return eval(lo + i); }, leaf);
        }));

    std::vector<T> partial;
    partial.reserve(futs.size());
    for (auto& f : futs) partial.push_back(f.get());
    while (partial.size() > 1) {
        std::vector<T> next;
        for (std::size_t i = 0; i + 1 < partial.size(); i += 2) next.push_back(partial[i] + partial[i + 1]);
        if (partial.size() & 1) next.push_back(partial.back());
        partial = std::move(next);
    }
    return partial[0];
}

// Plain parallel loop over [0, n); chunks are contiguous and the body must
// only write to disjoint state per index.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    unsigned hw = worker_threads();
    if (hw <= 1 || n < 128) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::size_t chunk = (n + hw - 1) / hw;
    std::vector<std::thread> ts;
    for (unsigned t = 0; t < hw; ++t) {
        std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        ts.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& t : ts) t.join();
}

} // namespace cw
