#include "zomat/util.hpp"

#include <cstdlib>
#include <string>
#include <thread>

namespace zomat {

int worker_cap() {
    if (const char* env = std::getenv("ZOMAT_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

long long saturating_pow(long long k, int e) {
    long long result = 1;
    for (int i = 0; i < e; ++i) {
        if (result > kPowCap / k) return kPowCap;
        result *= k;
    }
    return result;
}

}  // namespace zomat
