#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <mutex>
#include <vector>

#include "ttm/errors.hpp"

namespace ttm {

/// Canonical component order for compressed symmetric tensors over R^4:
/// exponent 4-tuples (e0,e1,e2,e3) with sum n, graded-lexicographic
/// descending, each carrying its multinomial multiplicity n!/(e0!e1!e2!e3!).
/// This order is shared by all files and APIs.
struct MultiIndexTable {
    struct Entry {
        std::array<int, 4> e;
        double mult;
    };

    int order = 0;
    std::vector<Entry> entries;

    std::size_t size() const noexcept { return entries.size(); }

    /// Cached table for even order 2 <= n <= 8 (odd orders are rejected: the
    /// rotation-recovery theory needs n in 2N).
    static const MultiIndexTable& get(int n) {
        require(n >= 2 && n % 2 == 0, errc::validation, "MultiIndexTable: order must be even and >= 2");
        require(n <= 8, errc::validation, "MultiIndexTable: orders above 8 are unsupported");
        static std::mutex mu;
        static std::map<int, MultiIndexTable> cache;
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
        MultiIndexTable t;
        t.order = n;
        double fact_n = 1.0;
        for (int i = 2; i <= n; ++i) fact_n *= i;
        auto fact = [](int k) {
            double f = 1.0;
            for (int i = 2; i <= k; ++i) f *= i;
            return f;
        };
        for (int e0 = n; e0 >= 0; --e0)
            for (int e1 = n - e0; e1 >= 0; --e1)
                for (int e2 = n - e0 - e1; e2 >= 0; --e2) {
                    int e3 = n - e0 - e1 - e2;
                    double m = fact_n / (fact(e0) * fact(e1) * fact(e2) * fact(e3));
                    t.entries.push_back({{e0, e1, e2, e3}, m});
                }
        return cache.emplace(n, std::move(t)).first->second;
    }
};

/// Compressed symmetric tensor A in S^n(R^4): one value per multi-index
/// pattern. Symmetry is structural, not checked.
struct SymTensor {
    const MultiIndexTable* table = nullptr;
    std::vector<double> comp;

    SymTensor() = default;
    explicit SymTensor(int n) : table(&MultiIndexTable::get(n)), comp(table->size(), 0.0) {}

    int order() const noexcept { return table ? table->order : 0; }
    std::size_t size() const noexcept { return comp.size(); }
};

namespace tensor_detail {

/// pw[i][k] = q_i^k for k <= n.
inline void power_table(const std::array<double, 4>& q, int n, double pw[4][16]) {
    for (int i = 0; i < 4; ++i) {
        pw[i][0] = 1.0;
        for (int k = 1; k <= n; ++k) pw[i][k] = pw[i][k - 1] * q[i];
    }
}

} // namespace tensor_detail

/// n-th tensor power q^(.n): comp[alpha] = q0^e0 q1^e1 q2^e2 q3^e3.
inline SymTensor tensor_power(const std::array<double, 4>& q, int n) {
    SymTensor a(n);
    double pw[4][16];
    tensor_detail::power_table(q, n, pw);
    for (std::size_t idx = 0; idx < a.size(); ++idx) {
        const auto& e = a.table->entries[idx].e;
        a.comp[idx] = pw[0][e[0]] * pw[1][e[1]] * pw[2][e[2]] * pw[3][e[3]];
    }
    return a;
}

/// Full inner product <A, B> = sum over all d^n index tuples, computed as
/// sum_alpha mult[alpha] A[alpha] B[alpha].
inline double tensor_dot(const SymTensor& a, const SymTensor& b) {
    require(a.table == b.table, errc::validation, "tensor_dot: table mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a.table->entries[i].mult * a.comp[i] * b.comp[i];
    return s;
}

/// phi(q) = A . q^(.n), evaluated without materializing the power tensor.
inline double tensor_apply(const SymTensor& a, const std::array<double, 4>& q) {
    double pw[4][16];
    tensor_detail::power_table(q, a.order(), pw);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& en = a.table->entries[i];
        s += en.mult * a.comp[i] * pw[0][en.e[0]] * pw[1][en.e[1]] * pw[2][en.e[2]] * pw[3][en.e[3]];
    }
    return s;
}

/// The contraction A q^(n-1) in R^4; satisfies grad(A . q^(.n)) = n A q^(n-1).
inline std::array<double, 4> contract(const SymTensor& a, const std::array<double, 4>& q) {
    const int n = a.order();
    double pw[4][16];
    tensor_detail::power_table(q, n, pw);
    std::array<double, 4> v{0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& en = a.table->entries[i];
        for (int j = 0; j < 4; ++j) {
            if (en.e[j] < 1) continue;
            double mono = 1.0;
            for (int ax = 0; ax < 4; ++ax) mono *= pw[ax][en.e[ax] - (ax == j ? 1 : 0)];
            v[j] += a.comp[i] * (en.mult * en.e[j] / static_cast<double>(n)) * mono;
        }
    }
    return v;
}

/// Frobenius norm sqrt(sum_alpha mult[alpha] A[alpha]^2).
inline double frobenius(const SymTensor& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a.table->entries[i].mult * a.comp[i] * a.comp[i];
    return std::sqrt(s);
}

} // namespace ttm
