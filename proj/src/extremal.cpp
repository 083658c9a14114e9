#include "zomat/extremal.hpp"

#include <algorithm>
#include <future>
#include <sstream>
#include <thread>
#include <vector>

#include "zomat/containment.hpp"
#include "zomat/errors.hpp"
#include "zomat/rng.hpp"
#include "zomat/util.hpp"

namespace zomat {

const char* to_string(CertMode mode) {
    switch (mode) {
        case CertMode::Exhaustive: return "exhaustive";
        case CertMode::BranchAndBound: return "branch-and-bound";
        case CertMode::LowerBoundOnly: return "lower-bound-only";
    }
    return "?";
}

CertMode cert_mode_from_string(std::string_view s) {
    if (s == "exhaustive") return CertMode::Exhaustive;
    if (s == "branch-and-bound") return CertMode::BranchAndBound;
    if (s == "lower-bound-only") return CertMode::LowerBoundOnly;
    throw FormatError("unknown certificate mode: " + std::string(s));
}

bool ExtremalCertificate::validate() const {
    if (witness.n_rows() != n || witness.n_cols() != n) return false;
    if (witness.weight() != value) return false;
    return !find_embedding(witness, pattern).has_value();
}

std::string ExtremalCertificate::serialize() const {
    std::ostringstream out;
    out << "zomat-certificate v1\n";
    out << "n: " << n << "\n";
    out << "value: " << value << "\n";
    out << "mode: " << to_string(mode) << "\n";
    out << "nodes: " << nodes << "\n";
    char hex[17];
    snprintf(hex, sizeof hex, "%016llx",
             static_cast<unsigned long long>(pattern.matrix().content_hash()));
    out << "pattern-hash: " << hex << "\n";
    out << "pattern:\n" << pattern.matrix().to_text() << "\n";
    out << "witness:\n" << witness.to_text() << "\n";
    return out.str();
}

ExtremalCertificate ExtremalCertificate::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line != "zomat-certificate v1")
        throw FormatError("missing certificate header");

    int n = -1;
    long long value = -1, nodes = 0;
    CertMode mode = CertMode::LowerBoundOnly;
    bool have_mode = false;
    while (std::getline(in, line) && line != "pattern:") {
        size_t colon = line.find(": ");
        if (colon == std::string::npos) throw FormatError("malformed certificate line: " + line);
        std::string key = line.substr(0, colon), val = line.substr(colon + 2);
        if (key == "n") n = std::stoi(val);
        else if (key == "value") value = std::stoll(val);
        else if (key == "nodes") nodes = std::stoll(val);
        else if (key == "mode") { mode = cert_mode_from_string(val); have_mode = true; }
        else if (key != "pattern-hash") throw FormatError("unknown certificate key: " + key);
    }
    if (n < 0 || value < 0 || !have_mode) throw FormatError("incomplete certificate header");

    std::string pattern_text, witness_text;
    while (std::getline(in, line) && line != "witness:")
        pattern_text += line + "\n";
    while (std::getline(in, line))
        if (!line.empty()) witness_text += line + "\n";
    Matrix01 pat = Matrix01::parse(pattern_text);
    Matrix01 wit = Matrix01::parse(witness_text);
    return ExtremalCertificate{n, Pattern::unchecked(std::move(pat)), value, std::move(wit),
                               mode, nodes};
}

namespace {

void check_ex_args(int n, const Pattern& pattern) {
    if (n < 1) throw ArgumentError("n must be at least 1");
    if (pattern.matrix().weight() == 0)
        throw ArgumentError("pattern has no 1-entries; every matrix contains it");
}

// Row-major cell search. Undecided cells are zero, so containment of the
// prefix is monotone: once the placed 1s contain the pattern, every
// completion does, and the branch is dead.
struct BnBSearch {
    int n;
    const Pattern& pattern;
    long long budget;
    Matrix01 work;
    long long nodes = 0;
    long long best_value = 0;
    Matrix01 best_witness;

    BnBSearch(int n_, const Pattern& p, long long budget_)
        : n(n_), pattern(p), budget(budget_), work(n_, n_), best_witness(n_, n_) {}

    ExtremalCertificate certificate(CertMode mode) const {
        return ExtremalCertificate{n, pattern, best_value, best_witness, mode, nodes};
    }

    void run() {
        dfs(0, 0);
    }

    void dfs(int cell, long long cur_weight) {
        if (++nodes > budget)
            throw IncompleteSearchError("node budget exhausted",
                                        certificate(CertMode::LowerBoundOnly));
        long long total = static_cast<long long>(n) * n;
        if (cell == total) {
            if (cur_weight > best_value) {
                best_value = cur_weight;
                best_witness = work;
            }
            return;
        }
        if (cur_weight + (total - cell) <= best_value) return;
        int i = cell / n, j = cell % n;
        work.set(i, j, true);
        if (!find_embedding_last_row_at(work, pattern, i))
            dfs(cell + 1, cur_weight + 1);
        work.set(i, j, false);
        dfs(cell + 1, cur_weight);
    }
};

}  // namespace

ExtremalCertificate ex_exhaustive(int n, const Pattern& pattern) {
    check_ex_args(n, pattern);
    if (n > 4) throw ArgumentError("exhaustive mode is guarded to n <= 4");

    const Matrix01& a = pattern.matrix();
    int cells = n * n;
    long long best_value = -1;
    Matrix01 best_witness(n, n);
    long long scanned = 0;
    // Pattern larger than the board is avoided by everything, including the
    // all-ones matrix; the mask scan discovers that on its own.
    bool oracle_usable = a.n_rows() <= 4 && a.n_cols() <= 4;
    for (uint64_t mask = 0; mask < (uint64_t{1} << cells); ++mask) {
        ++scanned;
        Matrix01 m(n, n);
        long long w = 0;
        for (int c = 0; c < cells; ++c)
            if ((mask >> c) & 1) {
                m.set(c / n, c % n, true);
                ++w;
            }
        if (w <= best_value) continue;
        bool contains = oracle_usable ? oracle_contains(m, pattern)
                                      : find_embedding(m, pattern).has_value();
        if (!contains) {
            best_value = w;
            best_witness = m;
        }
    }
    return ExtremalCertificate{n, pattern, best_value, best_witness,
                               CertMode::Exhaustive, scanned};
}

ExtremalCertificate ex_branch_and_bound(int n, const Pattern& pattern, long long budget) {
    check_ex_args(n, pattern);
    BnBSearch search(n, pattern, budget);
    search.run();
    return search.certificate(CertMode::BranchAndBound);
}

ExtremalCertificate ex_exact(int n, const Pattern& pattern, long long budget) {
    check_ex_args(n, pattern);
    return n <= 4 ? ex_exhaustive(n, pattern) : ex_branch_and_bound(n, pattern, budget);
}

ExtremalCertificate ex_lower_random(int n, const Pattern& pattern, double density,
                                    int trials, uint64_t seed) {
    check_ex_args(n, pattern);
    if (trials < 1) throw ArgumentError("trials must be at least 1");
    if (density < 0.0 || density > 1.0) throw ArgumentError("density must lie in [0, 1]");

    auto run_trial = [&](int trial) {
        Rng rng = Rng::derive(seed, kStreamLowerTrial, static_cast<uint64_t>(trial));
        Matrix01 m = Matrix01::random(n, n, density, rng);
        while (auto emb = find_embedding(m, pattern)) {
            // delete the 1 backing the first pattern 1-entry of the copy
            const Matrix01& a = pattern.matrix();
            for (int u = 0; u < a.n_rows(); ++u) {
                int y = a.row(u).next_set(0);
                if (y >= 0) {
                    m.set(emb->row_map[u], emb->col_map[y], false);
                    break;
                }
            }
        }
        return m;
    };

    int workers = std::min(worker_cap(), trials);
    std::vector<Matrix01> results(trials);
    if (workers <= 1) {
        for (int tr = 0; tr < trials; ++tr) results[tr] = run_trial(tr);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (int tr = next.fetch_add(1); tr < trials; tr = next.fetch_add(1))
                    results[tr] = run_trial(tr);
            });
        for (auto& th : pool) th.join();
    }

    int best = 0;
    for (int tr = 1; tr < trials; ++tr)
        if (results[tr].weight() > results[best].weight()) best = tr;
    ExtremalCertificate cert{n, pattern, results[best].weight(), results[best],
                             CertMode::LowerBoundOnly, trials};
    if (!cert.validate())
        throw std::logic_error("lower-bound witness failed validation");
    return cert;
}

bool monotone_checks(const Pattern& a, const Pattern& a_prime, int n) {
    if (n > 5) throw ArgumentError("monotone_checks is guarded to n <= 5");
    if (n < 1) throw ArgumentError("n must be at least 1");
    long long ex_n = ex_exact(n, a).value;
    long long ex_n1 = ex_exact(n + 1, a).value;
    if (ex_n > ex_n1) return false;
    if (find_embedding(a.matrix(), a_prime)) {
        long long ex_n_prime = ex_exact(n, a_prime).value;
        if (ex_n_prime > ex_n) return false;
    }
    return true;
}

}  // namespace zomat
