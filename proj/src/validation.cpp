#include "lep/validation.hpp"

#include "lep/errors.hpp"
#include "lep/kernels.hpp"
#include "lep/protocols.hpp"
#include "lep/reference.hpp"
#include "lep/resources.hpp"
#include "lep/strategies.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <bitset>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>

namespace lep {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
    bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }
    template <class T>
    const T& pick(const std::vector<T>& v) { return v[static_cast<std::size_t>(integer(0, static_cast<int>(v.size()) - 1))]; }

    std::vector<double> distribution(std::size_t n) {
        std::vector<double> v(n);
        double total = 0.0;
        for (double& x : v) total += (x = uniform(0.0, 1.0));
        for (double& x : v) x /= total;
        return v;
    }

private:
    std::mt19937_64 gen_;
};

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

std::vector<Graph> small_graphs() {
    return {linear_cluster(2), linear_cluster(3), linear_cluster(4), linear_cluster(5), grid_cluster(2, 2),
            ghz_star(1, {2, 3}).graph, ghz_star(1, {2, 3, 4}).graph, ghz_star(1, {2, 3, 4, 5}).graph};
}

NoiseSpec random_noise(Rng& rng, int n) {
    NoiseSpec noise;
    noise.white = rng.uniform(0.75, 1.0);
    for (Vertex v = 1; v <= n; ++v) {
        if (rng.coin(0.3)) noise.white_override[v] = rng.uniform(0.75, 1.0);
        if (rng.coin(0.5)) noise.dephasing[v] = rng.uniform(0.6, 1.0);
    }
    noise.gate = rng.coin() ? 1.0 : 0.99;
    return noise;
}

DiagonalState random_state(Rng& rng, const Graph& g) {
    return DiagonalState(g, rng.distribution(std::size_t{1} << g.size()));
}

struct Tally {
    double lambda = 0.0;
    double prob = 0.0;
    double residual = 0.0;
    int steps = 0;
    std::string first_failure;

    void record(const std::string& where, double dl, double dq, double res, const OracleSuiteOptions& opt) {
        lambda = std::max(lambda, dl);
        prob = std::max(prob, dq);
        residual = std::max(residual, res);
        ++steps;
        if (first_failure.empty() &&
            (dl > opt.tolerance || dq > opt.tolerance || res > opt.residual_tolerance))
            first_failure = fmt::format("{}: |dlambda|={:.3g} |dq|={:.3g} residual={:.3g}", where, dl, dq, res);
    }
};

std::string scenario_label(int index, const Graph& g, const NoiseSpec& noise, int alpha) {
    return fmt::format("scenario {} [{}; {}; alpha={}]", index, g.describe(), noise.describe(), alpha);
}

}  // namespace

oracle::DenseNoise dense_noise(const Graph& g, const NoiseSpec& noise, const std::vector<Vertex>& physical) {
    oracle::DenseNoise out;
    for (Vertex v = 1; v <= g.size(); ++v) {
        const Vertex phys = physical.empty() ? v : physical[static_cast<std::size_t>(v - 1)];
        out.white.push_back(noise.white_for(phys));
        if (auto it = noise.dephasing.find(phys); it != noise.dephasing.end()) out.dephasing[v] = it->second;
    }
    return out;
}

std::vector<double> oracle_prepurify(oracle::DenseState& aux, const Graph& star, int alpha, double p_g,
                                     bool adaptive) {
    std::vector<double> probs;
    auto sub = oracle::Recurrence::P1;
    for (int k = 0; k < alpha; ++k) {
        auto out = oracle::recurrence_step(aux, aux, star, sub, p_g);
        if (adaptive) {
            auto alt = oracle::recurrence_step(aux, aux, star, oracle::Recurrence::P2, p_g);
            if (oracle::fidelity_with_graph_state(alt.state, star) > oracle::fidelity_with_graph_state(out.state, star))
                out = std::move(alt);
        } else {
            sub = sub == oracle::Recurrence::P1 ? oracle::Recurrence::P2 : oracle::Recurrence::P1;
        }
        probs.push_back(out.success_prob);
        aux = std::move(out.state);
    }
    return probs;
}

CheckResult oracle_equivalence_suite(const OracleSuiteOptions& opt) {
    const auto start = Clock::now();
    Rng rng(opt.seed);
    const auto graphs = small_graphs();
    Tally tally;

    for (int i = 0; i < opt.scenarios; ++i) {
        const Graph& g = rng.pick(graphs);
        const NoiseSpec noise = random_noise(rng, g.size());
        const int alpha = rng.integer(0, 2);
        const bool adaptive = rng.coin();
        const auto schedule = adaptive ? PrepurifySchedule::Adaptive : PrepurifySchedule::Alternating;
        const std::string label = scenario_label(i, g, noise, alpha) + " " + to_string(schedule);

        DiagonalState engine = prepare_initial(g, noise);
        oracle::DenseState dense = oracle::noisy_graph_state(g, dense_noise(g, noise));
        {
            const auto d = oracle::graph_basis_diagonal(dense, g);
            tally.record(label + " initial", max_abs_diff(engine.lambdas(), d.lambdas), 0.0,
                         d.off_diag_residual, opt);
        }

        const AuxiliaryBank bank(g, noise, alpha, schedule);
        const int steps = rng.integer(1, 3);
        for (int k = 0; k < steps; ++k) {
            const int choice = rng.integer(0, 2);
            std::string where;
            double dq = 0.0;
            if (choice < 2) {
                const auto sub = choice == 0 ? SubProtocol::P1 : SubProtocol::P2;
                where = fmt::format("{} step {} {}", label, k + 1, to_string(sub));
                auto e = tcp_step(engine, sub, noise.gate);
                auto o = oracle::recurrence_step(dense, dense, g,
                                                 choice == 0 ? oracle::Recurrence::P1 : oracle::Recurrence::P2,
                                                 noise.gate);
                dq = std::abs(e.success_prob - o.success_prob);
                engine = std::move(e.state);
                dense = std::move(o.state);
            } else {
                const auto& aux = rng.pick(bank.entries());
                where = fmt::format("{} step {} T{}", label, k + 1, aux.target);
                const StarGraph star = auxiliary_star(g, aux.target);
                oracle::DenseState dense_aux =
                    oracle::noisy_graph_state(star.graph, dense_noise(star.graph, noise, star.physical));
                const auto pre = oracle_prepurify(dense_aux, star.graph, alpha, noise.gate, adaptive);
                for (std::size_t r = 0; r < pre.size(); ++r)
                    dq = std::max(dq, std::abs(pre[r] - aux.prepurify_probs[r]));
                {
                    const auto d = oracle::graph_basis_diagonal(dense_aux, star.graph);
                    tally.record(where + " auxiliary", max_abs_diff(aux.state.lambdas(), d.lambdas), dq,
                                 d.off_diag_residual, opt);
                }
                auto e = lep_step(engine, aux.state, aux.partition, noise.gate);
                auto o = oracle::localized_step(dense, dense_aux, g, aux.target, noise.gate);
                dq = std::abs(e.success_prob - o.success_prob);
                engine = std::move(e.state);
                dense = std::move(o.state);
            }
            const auto d = oracle::graph_basis_diagonal(dense, g);
            tally.record(where, max_abs_diff(engine.lambdas(), d.lambdas), dq, d.off_diag_residual, opt);
        }
    }

    CheckResult r;
    r.name = "oracle equivalence";
    r.passed = tally.first_failure.empty();
    r.detail = fmt::format("{} scenarios, {} compared states; max |dlambda| {:.3g}, max |dq| {:.3g}, "
                           "max off-diagonal residual {:.3g}",
                           opt.scenarios, tally.steps, tally.lambda, tally.prob, tally.residual);
    if (!r.passed) r.detail += "; first failure: " + tally.first_failure;
    r.seconds = seconds_since(start);
    return r;
}

namespace {

CheckResult timed(const std::string& name, const std::function<std::string(bool&)>& body) {
    const auto start = Clock::now();
    CheckResult r;
    r.name = name;
    r.passed = true;
    try {
        r.detail = body(r.passed);
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = seconds_since(start);
    return r;
}

std::string normalization_check(Rng& rng, bool& ok) {
    constexpr double tol = 1e-12;
    double worst = 0.0;
    double most_negative = 0.0;
    int ops = 0;
    auto check = [&](const DiagonalState& s) {
        worst = std::max(worst, std::abs(s.total() - 1.0));
        for (double x : s.lambdas()) most_negative = std::min(most_negative, x);
        ++ops;
    };
    const std::vector<Graph> graphs{linear_cluster(4), linear_cluster(6), grid_cluster(2, 3),
                                    ghz_star(1, {2, 3, 4}).graph, Graph(4, {{1, 2}, {2, 3}, {1, 3}, {3, 4}})};
    for (int trial = 0; trial < 60; ++trial) {
        const Graph& g = rng.pick(graphs);
        const NoiseSpec noise = random_noise(rng, g.size());
        DiagonalState s = prepare_initial(g, noise);
        check(s);
        const bool bipartite = [&] {
            try {
                two_coloring(g);
                return true;
            } catch (const NotTwoColorable&) {
                return false;
            }
        }();
        const AuxiliaryBank bank(g, noise, rng.integer(0, 2));
        for (const auto& aux : bank.entries()) check(aux.state);
        for (int k = 0; k < 6; ++k) {
            const Vertex q = rng.integer(1, g.size());
            switch (rng.integer(0, 5)) {
                case 0: s = apply_white_noise(s, q, rng.uniform(0.0, 1.0)); break;
                case 1: s = apply_dephasing(s, q, rng.uniform(0.0, 1.0)); break;
                case 2: {
                    auto w = rng.distribution(4);
                    s = apply_pauli_channel(s, q, w[0], w[1], w[2], w[3]);
                    break;
                }
                case 3: s = apply_gate_noise(s, g.all_mask(), rng.uniform(0.9, 1.0)); break;
                case 4:
                    if (bipartite) s = tcp_step(s, rng.coin() ? SubProtocol::P1 : SubProtocol::P2, noise.gate).state;
                    break;
                default: {
                    const auto& aux = rng.pick(bank.entries());
                    s = lep_step(s, aux.state, aux.partition, noise.gate).state;
                }
            }
            check(s);
        }
    }
    ok = worst <= tol && most_negative >= -tol;
    return fmt::format("{} states checked; max |sum - 1| {:.3g}, most negative entry {:.3g}", ops, worst,
                       most_negative);
}

std::string semigroup_check(Rng& rng, bool& ok) {
    double worst = 0.0;
    const std::vector<Graph> graphs{linear_cluster(3), linear_cluster(5), grid_cluster(2, 3), ghz_star(1, {2, 3, 4}).graph};
    constexpr int kTriples = 1000;
    for (int i = 0; i < kTriples; ++i) {
        const Graph& g = rng.pick(graphs);
        const DiagonalState s = random_state(rng, g);
        const Vertex q = rng.integer(1, g.size());
        const double a = rng.uniform(0.0, 1.0);
        const double b = rng.uniform(0.0, 1.0);
        const auto twice = apply_dephasing(apply_dephasing(s, q, a), q, b);
        const auto once = apply_dephasing(s, q, a * b + (1.0 - a) * (1.0 - b));
        worst = std::max(worst, max_abs_diff(twice.lambdas(), once.lambdas()));
    }
    ok = worst <= 1e-12;
    return fmt::format("{} random (state, p, p') triples; max deviation {:.3g}", kTriples, worst);
}

bool is_bijection(const Gf2Map& m) {
    const int w = m.width();
    std::bitset<4096> seen;
    for (BitString x = 0; x < (BitString{1} << w); ++x) {
        const BitString y = m.apply(x);
        if (y >> w) return false;
        if (seen.test(y)) return false;
        seen.set(y);
    }
    return true;
}

std::vector<Graph> all_labeled_graphs(int n) {
    std::vector<std::pair<Vertex, Vertex>> slots;
    for (Vertex a = 1; a <= n; ++a)
        for (Vertex b = a + 1; b <= n; ++b) slots.emplace_back(a, b);
    std::vector<Graph> out;
    for (std::uint32_t mask = 0; mask < (1U << slots.size()); ++mask) {
        std::vector<std::pair<Vertex, Vertex>> edges;
        for (std::size_t k = 0; k < slots.size(); ++k)
            if ((mask >> k) & 1U) edges.push_back(slots[k]);
        out.emplace_back(n, std::move(edges));
    }
    return out;
}

std::string bijectivity_check(bool& ok) {
    std::vector<Graph> graphs;
    for (int n = 1; n <= 5; ++n) {
        auto all = all_labeled_graphs(n);
        graphs.insert(graphs.end(), all.begin(), all.end());
    }
    for (const Graph& g : {linear_cluster(6), grid_cluster(2, 3), ghz_star(1, {2, 3, 4, 5, 6}).graph,
                           Graph(6, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {1, 6}})})
        graphs.push_back(g);

    int maps = 0;
    int failures = 0;
    for (const Graph& g : graphs) {
        auto check = [&](const Gf2Map& m) {
            if (m.width() > 12) return;
            ++maps;
            if (!is_bijection(m) || !m.invertible()) ++failures;
        };
        try {
            const TwoColoring c = two_coloring(g);
            check(mcnot_map_tcp(g, c, SubProtocol::P1));
            check(mcnot_map_tcp(g, c, SubProtocol::P2));
        } catch (const NotTwoColorable&) {
        }
        for (Vertex t = 1; t <= g.size(); ++t) {
            if (g.neighbors(t).empty()) continue;
            check(mcnot_map_lep(g, partition_for_target(g, t), auxiliary_star(g, t)));
        }
    }
    ok = failures == 0;
    return fmt::format("{} graphs, {} maps of width <= 12 enumerated; {} not bijective", graphs.size(), maps,
                       failures);
}

std::string resource_product_check(Rng& rng, bool& ok) {
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        const double base = rng.integer(1, 30);
        ResourceLedger ledger(base);
        double product = base;
        const int rounds = rng.integer(1, 25);
        for (int k = 0; k < rounds; ++k) {
            const double p = rng.uniform(0.05, 1.0);
            ledger = tcp_round_update(ledger, p);
            product *= 2.0 / p;
        }
        worst = std::max(worst, std::abs(ledger.current() - product) / product);
    }
    ok = worst <= 1e-12;
    return fmt::format("500 random success sequences; max relative deviation {:.3g}", worst);
}

std::string interpolation_check(Rng& rng, bool& ok) {
    double worst = 0.0;
    int cases = 0;
    for (int i = 0; i < 500; ++i) {
        std::vector<TracePoint> trace;
        double f = rng.uniform(0.3, 0.8);
        double r = rng.integer(1, 20);
        const int rows = rng.integer(2, 12);
        for (int k = 0; k < rows; ++k) {
            trace.push_back({f, r});
            f += rng.uniform(1e-4, (1.0 - f) / 2.0);
            r *= rng.uniform(1.1, 4.0);
        }
        const double target = rng.uniform(trace.front().fidelity, trace.back().fidelity);
        const auto to_r = interpolate_to_fidelity(trace, target);
        if (to_r.status != InterpolationStatus::Interpolated) continue;
        const auto back = interpolate_to_resources(trace, to_r.value);
        worst = std::max(worst, std::abs(back.value - target));
        ++cases;
        const double budget = rng.uniform(trace.front().resources, trace.back().resources);
        const auto to_f = interpolate_to_resources(trace, budget);
        const auto again = interpolate_to_fidelity(trace, to_f.value);
        if (again.status == InterpolationStatus::Interpolated)
            worst = std::max(worst, std::abs(again.value - budget) / budget);
    }
    ok = worst <= 1e-10 && cases > 400;
    return fmt::format("{} monotone traces; max round-trip deviation {:.3g}", cases, worst);
}

std::string purity_check(Rng& rng, bool& ok) {
    int checks = 0;
    bool identical = true;
    const auto graphs = small_graphs();
    for (int i = 0; i < 40; ++i) {
        const Graph& g = rng.pick(graphs);
        const NoiseSpec noise = random_noise(rng, g.size());
        const AuxiliaryBank bank(g, noise, rng.integer(0, 1));
        const DiagonalState main = prepare_initial(g, noise);
        const DiagonalState before = main;
        std::vector<DiagonalState> aux_before;
        for (const auto& a : bank.entries()) aux_before.push_back(a.state);
        (void)virtual_best_target(main, bank);
        (void)evaluate_all_targets(main, bank);
        identical = identical && main == before;
        for (std::size_t k = 0; k < aux_before.size(); ++k)
            identical = identical && bank.entries()[k].state == aux_before[k];
        ++checks;
    }
    ok = identical;
    return fmt::format("{} virtual evaluations; main and auxiliary states {}", checks,
                       identical ? "bit-identical" : "CHANGED");
}

std::string kernel_check(Rng& rng, bool& ok) {
    double worst = 0.0;
    for (int bits : {6, 12, 13}) {
        const std::size_t n = std::size_t{1} << bits;
        const auto in = rng.distribution(n);
        std::vector<XorTerm> terms;
        for (int k = 0; k < 4; ++k)
            terms.push_back({static_cast<BitString>(rng.integer(0, static_cast<int>(n) - 1)), rng.uniform(0.0, 1.0)});
        std::vector<double> a(n), b(n);
        kernels::mix_xor(in, a, terms);
        reference::mix_xor(in, b, terms);
        worst = std::max(worst, max_abs_diff(a, b));

        const auto second = rng.distribution(n);
        BitString keep = 0;
        for (int q = 0; q < bits; ++q)
            if (rng.coin()) keep |= BitString{1} << q;
        const BitString mix = ((BitString{1} << bits) - 1) & ~keep;
        const double ka = kernels::parity_convolve(in, second, keep, mix, a);
        const double kb = reference::parity_convolve(in, second, keep, mix, b);
        worst = std::max({worst, max_abs_diff(a, b), std::abs(ka - kb)});
    }
    for (const Graph& g : {grid_cluster(2, 3), linear_cluster(6), grid_cluster(3, 3)}) {
        const NoiseSpec noise = random_noise(rng, g.size());
        const DiagonalState s = prepare_initial(g, noise);
        if (g.size() <= 6) {
            for (auto sub : {SubProtocol::P1, SubProtocol::P2}) {
                const auto fused = tcp_step(s, sub, noise.gate);
                const auto literal = reference::tcp_step(s, sub, noise.gate);
                worst = std::max({worst, max_abs_diff(fused.state.lambdas(), literal.state.lambdas()),
                                  std::abs(fused.success_prob - literal.success_prob)});
            }
        }
        const AuxiliaryBank bank(g, noise, 0);
        for (const auto& aux : bank.entries()) {
            const auto fused = lep_step(s, aux.state, aux.partition, noise.gate);
            const auto literal = reference::lep_step(s, aux.state, aux.partition, noise.gate);
            worst = std::max({worst, max_abs_diff(fused.state.lambdas(), literal.state.lambdas()),
                              std::abs(fused.success_prob - literal.success_prob)});
        }
    }
    ok = worst <= 1e-12;
    return fmt::format("parallel kernels and fused steps vs serial references; max deviation {:.3g}", worst);
}

}  // namespace

std::vector<CheckResult> invariant_suite(std::uint64_t seed) {
    Rng rng(seed);
    std::vector<CheckResult> out;
    out.push_back(timed("normalization", [&](bool& ok) { return normalization_check(rng, ok); }));
    out.push_back(timed("dephasing semigroup", [&](bool& ok) { return semigroup_check(rng, ok); }));
    out.push_back(timed("MCNOT bijectivity", [&](bool& ok) { return bijectivity_check(ok); }));
    out.push_back(timed("resource recurrence vs product", [&](bool& ok) { return resource_product_check(rng, ok); }));
    out.push_back(timed("interpolation round trip", [&](bool& ok) { return interpolation_check(rng, ok); }));
    out.push_back(timed("virtual-evaluation purity", [&](bool& ok) { return purity_check(rng, ok); }));
    out.push_back(timed("kernels vs serial reference", [&](bool& ok) { return kernel_check(rng, ok); }));
    return out;
}

}  // namespace lep
