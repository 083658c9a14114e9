#pragma once

#include <cstdint>
#include <vector>

namespace zomat {

// Advances a strictly increasing combination over [0, limit). Returns false
// when the last combination has been consumed.
inline bool next_combination(std::vector<int>& comb, int limit) {
    int k = static_cast<int>(comb.size());
    for (int i = k - 1; i >= 0; --i) {
        if (comb[i] < limit - (k - i)) {
            ++comb[i];
            for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
            return true;
        }
    }
    return false;
}

// Worker cap for internally parallel operations: ZOMAT_THREADS when set,
// otherwise hardware concurrency; always at least 1.
int worker_cap();

// k^e saturated just above the desk-scale index range, so quotients by a
// saturated power behave like quotients by "infinity" for any row index.
constexpr long long kPowCap = 1LL << 62;
long long saturating_pow(long long k, int e);

// Stream labels for Rng::derive; keeps every random consumer on its own
// deterministic stream.
enum : uint64_t {
    kStreamSelectBaseRow = 1,
    kStreamStats = 2,
    kStreamLowerTrial = 3,
    kStreamAttempt = 4,
    kStreamMatrixGen = 5,
};

}  // namespace zomat
