// Acceptance gate: runs every release criterion at full scale and prints one
// pass/fail line per criterion.  Exits nonzero if any criterion fails.

#include <cstdio>
#include <vector>

#include "glsim/harness.hpp"

int main() {
    glsim::AcceptanceOptions opts;
    opts.master_seed = 1;
    opts.workers = 1;
    opts.scale = 1.0;
    opts.out_dir = "acceptance_out";

    std::vector<glsim::CriterionResult> results = glsim::run_acceptance(opts);

    // Byte-identity across worker counts is checked at reduced scale: the
    // reduction order is fixed by construction, not by sample count.
    results.push_back(glsim::determinism_criterion(opts.master_seed, 0.02,
                                                   "acceptance_determinism"));

    bool all_pass = true;
    for (const glsim::CriterionResult& c : results) {
        std::printf("criterion %2d %-30s %s  %s  (%.1f s)\n", c.id, c.name.c_str(),
                    c.pass ? "PASS" : "FAIL", c.detail.c_str(), c.seconds);
        std::fflush(stdout);
        all_pass = all_pass && c.pass;
    }
    return all_pass ? 0 : 1;
}
