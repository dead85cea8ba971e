// Acceptance run: one line per criterion, timed against its budget.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "ccsym/parse.hpp"
#include "ccsym/suites.hpp"

using namespace ccs;

namespace {

struct Run {
    std::string suite;
    std::string ring;
    int trials;
};

struct Criterion {
    int id;
    std::string title;
    double budget;  // seconds
    std::vector<Run> runs;
    // extra condition on the collected reports
    std::function<std::string(const std::vector<SuiteReport>&)> extra;
};

int total(const std::vector<SuiteReport>& reps, int SuiteReport::*field) {
    int n = 0;
    for (const SuiteReport& r : reps) n += r.*field;
    return n;
}

std::vector<Run> each(const std::string& suite, const std::vector<std::string>& rings, int trials) {
    std::vector<Run> v;
    for (const std::string& r : rings) v.push_back({suite, r, trials});
    return v;
}

std::vector<Criterion> criteria() {
    auto at_least = [](int n) {
        return [n](const std::vector<SuiteReport>& reps) {
            int got = total(reps, &SuiteReport::instances);
            return got >= n ? std::string() : "only " + std::to_string(got) + " cases";
        };
    };
    return {
        {1, "path agreement over Q[e]/(e^m), m=2..5", 60, each("path-agreement", {"Q[e]/(e^2)", "Q[e]/(e^3)", "Q[e]/(e^4)", "Q[e]/(e^5)"}, 200), nullptr},
        {2, "tame specialization over GF(p), p=2,3,5,7", 30, each("tame", {"GF(2)", "GF(3)", "GF(5)", "GF(7)"}, 200), nullptr},
        {3, "deformation residue over k[e]/(e^4)", 30,
         each("deformation", {"GF(2)[e]/(e^4)", "GF(3)[e]/(e^4)", "GF(5)[e]/(e^4)", "GF(7)[e]/(e^4)", "Q[e]/(e^4)"}, 100), nullptr},
        {4, "closed-form grids, exponents in [-3,3]", 60, each("closed-forms", {"Q"}, 1), nullptr},
        {5, "Steinberg, anti-symmetry, tri-multiplicativity, (f,f,g)", 60,
         each("algebraic", {"GF(5)", "GF(4; mod=x^2+x+1)", "Z/(9)", "GF(3)[e]/(e^3)", "Q[e]/(e^4)"}, 100), nullptr},
        {6, "parameter invariance", 60, each("invariance", {"Q[e]/(e^3)", "GF(5)[e]/(e^3)"}, 50), nullptr},
        {7, "nu equals the residue of dlog f ^ dlog g", 20, each("nu-residue", {"Q", "GF(2)", "GF(3)", "GF(5)", "GF(7)"}, 200), nullptr},
        {8, "one-dimensional reciprocity on P^1", 60,
         each("curve1d", {"GF(2)", "GF(3)", "GF(5)", "GF(9; mod=x^2+1)", "GF(2)[e]/(e^3)", "GF(3)[e]/(e^3)", "GF(5)[e]/(e^3)", "GF(9; mod=x^2+1)[e]/(e^3)"}, 50),
         nullptr},
        {9, "two-dimensional reciprocity along P^1", 120, each("curve2d", {"GF(3)", "GF(5)", "GF(5)[e]/(e^2)"}, 20),
         [at_least](const std::vector<SuiteReport>& reps) {
             std::string s = at_least(20)(reps);
             if (!s.empty()) return s;
             for (const SuiteReport& r : reps)
                 if (r.max_degree >= 2) return std::string();
             return std::string("no nontrivial site of degree 2");
         }},
        {10, "two-dimensional reciprocity at a point", 120, each("point2d", {"GF(5)[e]/(e^2)", "GF(5)"}, 15), at_least(15)},
        {11, "Witt symbol: ghost formula against p-typical projection", 60, each("witt-ghost", {"GF(2)", "GF(3)"}, 30), nullptr},
        {12, "Witt vector series round trips and ghost identity", 10, each("witt-series", {"Q"}, 200), nullptr},
        {13, "T, S, Q against the residue formula", 60, each("primitives", {"Q[a,b,c]/(a^3,b^3,c^3)"}, 100), nullptr},
    };
}

}  // namespace

int main() {
    int failed = 0;
    for (const Criterion& c : criteria()) {
        auto t0 = std::chrono::steady_clock::now();
        std::vector<SuiteReport> reps;
        std::string why;
        try {
            for (const Run& r : c.runs) reps.push_back(run_suite(r.suite, parse_ring(r.ring), r.trials, 1000 + static_cast<std::uint64_t>(c.id)));
        } catch (const Error& e) {
            why = std::string(error_name(e.code())) + ": " + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        for (const SuiteReport& r : reps)
            if (!r.pass() && why.empty()) why = r.suite + " over " + r.ring + ": " + std::to_string(r.failed) + " failed" + (r.failures.empty() ? "" : ", e.g. " + r.failures[0]);
        if (why.empty() && total(reps, &SuiteReport::nontrivial) == 0) why = "every instance was trivial";
        if (why.empty() && c.extra) why = c.extra(reps);
        if (why.empty() && secs >= c.budget) why = "over budget";
        bool ok = why.empty();
        failed += !ok;
        std::printf("%s %2d %-58s %6d cases %6d nontrivial %8.2f s / %3.0f s%s%s\n", ok ? "PASS" : "FAIL", c.id, c.title.c_str(), total(reps, &SuiteReport::instances),
                    total(reps, &SuiteReport::nontrivial), secs, c.budget, ok ? "" : "  ", why.c_str());
        std::fflush(stdout);
    }
    std::printf("%s: %d of 13 criteria failed\n", failed ? "FAIL" : "PASS", failed);
    return failed ? 1 : 0;
}
