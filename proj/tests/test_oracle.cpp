#include "lep/oracle.hpp"
#include "lep/validation.hpp"
#include "support.hpp"

using namespace lep;
using namespace lep::oracle;
using doctest::Approx;

TEST_CASE("Kraus channels are trace preserving") {
    for (double p : {0.0, 0.3, 0.9, 1.0}) {
        CHECK(white_noise_channel(p).completeness_error() < 1e-15);
        CHECK(dephasing_channel(p).completeness_error() < 1e-15);
    }
    CHECK(pauli_channel(0.4, 0.3, 0.2, 0.1).completeness_error() < 1e-15);
}

TEST_CASE("dense graph states are pure stabilizer states") {
    for (const Graph& g : {linear_cluster(3), grid_cluster(2, 2), Graph(4, {{1, 2}, {1, 3}, {1, 4}})}) {
        const DenseState s = dense_graph_state(g);
        CHECK(s.trace() == Approx(1.0));
        CHECK(s.hermiticity_error() < 1e-15);
        CHECK(s.min_eigenvalue() > -1e-12);
        CHECK((s.rho() * s.rho() - s.rho()).norm() < 1e-12);
        const auto diag = graph_basis_diagonal(s, g);
        CHECK(diag.lambdas[0] == Approx(1.0));
        CHECK(diag.off_diag_residual < 1e-12);
        CHECK(fidelity_with_graph_state(s, g) == Approx(1.0));
    }
}

TEST_CASE("noisy states stay physical") {
    test::Rng rng(51);
    const Graph g = grid_cluster(2, 2);
    for (int trial = 0; trial < 10; ++trial) {
        const auto s = noisy_graph_state(g, dense_noise(g, test::random_noise(rng, g, false)));
        CHECK(s.trace() == Approx(1.0).epsilon(1e-13));
        CHECK(s.hermiticity_error() < 1e-14);
        CHECK(s.min_eigenvalue() > -1e-12);
        CHECK(graph_basis_diagonal(s, g).off_diag_residual < 1e-12);
    }
}

TEST_CASE("stabilizer-group fidelity matches the dense state") {
    test::Rng rng(52);
    for (const Graph& g : {linear_cluster(3), grid_cluster(2, 2), linear_cluster(5)}) {
        for (int trial = 0; trial < 5; ++trial) {
            const auto noise = dense_noise(g, test::random_noise(rng, g, false));
            CHECK(stabilizer_group_fidelity(g, noise) ==
                  Approx(fidelity_with_graph_state(noisy_graph_state(g, noise), g)).epsilon(1e-12));
        }
    }
    // Fixed case: uniform white noise 0.9 and dephasing 0.8 on vertex 1 of the 2x2 grid.
    DenseNoise fixed{{0.9, 0.9, 0.9, 0.9}, {{1, 0.8}}};
    const double f = stabilizer_group_fidelity(grid_cluster(2, 2), fixed);
    CHECK(f == Approx(fidelity_with_graph_state(noisy_graph_state(grid_cluster(2, 2), fixed), grid_cluster(2, 2)))
                   .epsilon(1e-12));
}

TEST_CASE("CNOT is an involution and measurement probabilities sum to one") {
    test::Rng rng(53);
    const Graph g = linear_cluster(3);
    const auto s = noisy_graph_state(g, dense_noise(g, test::random_noise(rng, g, false)));
    DenseState twice = s;
    apply_cnot(twice, 0, 2);
    apply_cnot(twice, 0, 2);
    CHECK((twice.rho() - s.rho()).norm() < 1e-14);

    double total = 0.0;
    for (BitString outcome = 0; outcome < 4; ++outcome) {
        const auto r = measure_and_postselect(s, {{0, Basis::X}, {2, Basis::Z}},
                                              [outcome](BitString o) { return o == (outcome & 1) + ((outcome >> 1) << 2); });
        total += r.success_prob;
    }
    CHECK(total == Approx(1.0).epsilon(1e-13));
}

TEST_CASE("tensor product layout") {
    const DenseState a = dense_graph_state(linear_cluster(2));
    DenseState b = dense_graph_state(linear_cluster(1));
    apply_channel(b, 0, dephasing_channel(0.0));  // |-><-|
    const DenseState ab = tensor(a, b);
    CHECK(ab.qubits() == 3);
    CHECK(ab.trace() == Approx(1.0));
    // The high qubit reads -1 in the X basis with certainty.
    const auto r = measure_and_postselect(ab, {{2, Basis::X}}, [](BitString o) { return o == 0b100; });
    CHECK(r.success_prob == Approx(1.0));
}
