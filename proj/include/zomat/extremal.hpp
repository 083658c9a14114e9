#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include "zomat/matrix.hpp"

namespace zomat {

inline constexpr long long kDefaultNodeBudget = 100'000'000;

enum class CertMode { Exhaustive, BranchAndBound, LowerBoundOnly };

const char* to_string(CertMode mode);
CertMode cert_mode_from_string(std::string_view s);

// Claimed value of ex(n, A) together with a witness matrix achieving it and
// the search mode that established it. Witnesses are always verified A-free
// before a certificate is returned.
struct ExtremalCertificate {
    int n;
    Pattern pattern;
    long long value;
    Matrix01 witness;
    CertMode mode;
    long long nodes = 0;

    // Witness is n x n, has weight `value`, and avoids the pattern.
    bool validate() const;

    std::string serialize() const;
    static ExtremalCertificate parse(std::string_view text);
};

// Node budget ran out before the search completed; carries the best
// lower-bound certificate found so far.
class IncompleteSearchError : public std::runtime_error {
public:
    IncompleteSearchError(const std::string& what, ExtremalCertificate best)
        : std::runtime_error(what),
          best_(std::make_shared<ExtremalCertificate>(std::move(best))) {}

    const ExtremalCertificate& best() const { return *best_; }

private:
    std::shared_ptr<ExtremalCertificate> best_;
};

// Full enumeration of all 2^(n^2) matrices; guarded to n <= 4. Containment
// is decided by the brute-force oracle, keeping this mode independent of the
// backtracking search used everywhere else.
ExtremalCertificate ex_exhaustive(int n, const Pattern& pattern);

// Row-major cell-by-cell search, branching 1 before 0, pruning a branch when
// (current weight + undecided cells) <= best known, with incremental
// containment checks on the filled prefix.
ExtremalCertificate ex_branch_and_bound(int n, const Pattern& pattern,
                                        long long budget = kDefaultNodeBudget);

// Exhaustive mode for n <= 4, branch-and-bound otherwise.
ExtremalCertificate ex_exact(int n, const Pattern& pattern,
                             long long budget = kDefaultNodeBudget);

// Best-of-trials random construction with greedy deletion: sample each entry
// with the given density, then delete one 1 from every found copy of the
// pattern until none remain. Mode is always lower-bound-only. Trials run in
// parallel up to worker_cap(); the result does not depend on scheduling.
ExtremalCertificate ex_lower_random(int n, const Pattern& pattern, double density,
                                    int trials, uint64_t seed);

// Sanity laws at oracle scale (n <= 5): ex is nondecreasing in n, and if A
// contains A' then ex(n, A') <= ex(n, A).
bool monotone_checks(const Pattern& a, const Pattern& a_prime, int n);

}  // namespace zomat
