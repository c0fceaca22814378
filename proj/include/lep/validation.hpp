#pragma once

// Self-checks shared by `lepsim validate` and the acceptance binary: the
// engine-vs-dense-oracle equivalence run and the property suites.

#include "lep/oracle.hpp"
#include "lep/protocols.hpp"
#include "lep/state.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace lep {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

/// Dense-oracle noise for `g` under `noise`. `physical[k]` names the scenario
/// vertex behind local vertex k+1; empty means the identity labeling.
oracle::DenseNoise dense_noise(const Graph& g, const NoiseSpec& noise,
                               const std::vector<Vertex>& physical = {});

/// Oracle version of auxiliary pre-purification on the star. Adaptive
/// rounds keep whichever recurrence direction gives the higher oracle
/// fidelity (P1 on ties). Returns the success probabilities.
std::vector<double> oracle_prepurify(oracle::DenseState& aux, const Graph& star, int alpha, double p_g,
                                     bool adaptive = true);

struct OracleSuiteOptions {
    int scenarios = 200;
    std::uint64_t seed = 20240611;
    double tolerance = 1e-9;
    double residual_tolerance = 1e-12;
};

/// Random graphs with at most five main qubits (paths, the 2x2 grid, stars),
/// random noise, p_g in {1, 0.99}, alpha in {0, 1, 2} under either pre-purification
/// schedule, and one to three random
/// recurrence or localized steps each.
CheckResult oracle_equivalence_suite(const OracleSuiteOptions& opt = {});

/// Normalization, dephasing semigroup, MCNOT bijectivity, resource
/// recurrence vs product, interpolation round trip, virtual-evaluation
/// purity, and parallel kernels vs their serial references.
std::vector<CheckResult> invariant_suite(std::uint64_t seed = 7);

}  // namespace lep
