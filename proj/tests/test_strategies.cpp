#include "lep/errors.hpp"
#include "lep/strategies.hpp"
#include "support.hpp"

using namespace lep;
using doctest::Approx;

namespace {

StrategyContext dephased_line() {
    NoiseSpec n;
    n.dephasing[1] = 0.7;
    return {linear_cluster(8), n};
}

StrategyContext noisy_line() {
    NoiseSpec n;
    n.white = 0.95;
    n.dephasing = {{1, 0.81}, {3, 0.9}, {6, 0.85}};
    n.gate = 0.998;
    return {linear_cluster(8), n};
}

std::vector<double> column(const StrategyTrace& t, double TraceRow::*field) {
    std::vector<double> out;
    for (const auto& r : t.rows) out.push_back(r.*field);
    return out;
}

}  // namespace

TEST_CASE("strategy ids") {
    CHECK(StrategyKind::parse("tcp") == StrategyKind{});
    CHECK(StrategyKind::parse("s-3") == StrategyKind{StrategyFamily::Single, 3, {}});
    CHECK(StrategyKind::parse("c-0").family == StrategyFamily::Combined);
    CHECK(StrategyKind::parse("hybrid-1:3") == StrategyKind{StrategyFamily::Hybrid, 1, 3});
    CHECK(StrategyKind::parse("hybrid-2:auto") == StrategyKind{StrategyFamily::Hybrid, 2, {}});
    CHECK(StrategyKind::parse("hybrid-2") == StrategyKind{StrategyFamily::Hybrid, 2, {}});
    for (const char* id : {"tcp", "s-0", "c-4", "hybrid-1:3", "hybrid-0:auto"})
        CHECK(StrategyKind::parse(id).id() == id);
    for (const char* bad : {"", "s", "s-", "s--1", "x-1", "tcp-1", "hybrid-1:", "c-1:2", "s-1x"})
        CHECK_THROWS_AS(StrategyKind::parse(bad), InvalidArgument);
}

TEST_CASE("first localized and recurrence rounds coincide on a single dephased qubit") {
    StopRule one;
    one.max_rounds = 1;
    const auto tcp = run_tcp(dephased_line(), one);
    const auto s0 = run_s_alpha(dephased_line(), 0, one);
    REQUIRE(tcp.rows.size() == 2);
    REQUIRE(s0.rows.size() == 2);
    CHECK(tcp.rows[1].success_prob == Approx(0.58).epsilon(1e-14));
    CHECK(tcp.rows[1].fidelity == Approx(0.49 / 0.58).epsilon(1e-14));
    CHECK(std::abs(tcp.rows[1].fidelity - s0.rows[1].fidelity) <= 1e-12);
    CHECK(std::abs(tcp.rows[1].success_prob - s0.rows[1].success_prob) <= 1e-12);
    CHECK(s0.rows[1].actions == std::vector<StepAction>{StepAction::localized(1)});
}

TEST_CASE("S-1 trace on the dephased linear cluster") {
    StopRule stop;
    stop.max_rounds = 4;
    const auto t = run_s_alpha(dephased_line(), 1, stop);
    const std::vector<double> f = {0.7, 0.927027027027027, 0.9857478005865102, 0.997351434488271,
                                   0.9995124747079072};
    const std::vector<double> r = {7.0, 16.378378378378383, 24.954838709677425, 34.01576786600948,
                                   44.44128085672485};
    CHECK(test::max_abs_diff(column(t, &TraceRow::fidelity), f) < 1e-12);
    CHECK(test::max_abs_diff(column(t, &TraceRow::resources), r) < 1e-9);
    CHECK(t.end == TraceEnd::MaxRounds);
    for (std::size_t i = 1; i < t.rows.size(); ++i) CHECK(t.rows[i].action_label() == "T1");
}

TEST_CASE("recurrence on a pure state keeps fidelity one and doubles resources") {
    StrategyContext ctx{grid_cluster(2, 3), {}};
    const auto t = run_tcp(ctx, {});
    CHECK(t.end == TraceEnd::Saturated);
    REQUIRE(t.rows.size() >= 3);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        CHECK(t.rows[i].fidelity == Approx(1.0).epsilon(1e-15));
        CHECK(t.rows[i].resources == Approx(7.0 * std::pow(2.0, static_cast<double>(i))));
    }

    StopRule no_halt;
    no_halt.halt_on_stagnation = false;
    no_halt.max_rounds = 10;
    const auto long_run = run_tcp(ctx, no_halt);
    CHECK(long_run.rows.size() == 11);
    CHECK(long_run.final_resources() == Approx(7.0 * 1024));
}

TEST_CASE("localized strategies stop at once on a pure state") {
    StrategyContext ctx{linear_cluster(5), {}};
    for (int alpha : {0, 2}) {
        const auto s = run_s_alpha(ctx, alpha, {});
        CHECK(s.end == TraceEnd::Saturated);
        CHECK(s.rows.size() == 1);
        const auto c = run_c_alpha(ctx, alpha, {});
        CHECK(c.rows.size() == 1);
    }
}

TEST_CASE("deeper pre-purification reaches higher fidelity under white noise") {
    const auto s0 = run_s_alpha(noisy_line(), 0, {});
    const auto s1 = run_s_alpha(noisy_line(), 1, {});
    CHECK(s1.max_fidelity() > s0.max_fidelity());
    CHECK(s0.end == TraceEnd::Saturated);
}

TEST_CASE("virtual evaluation leaves the state untouched") {
    const auto ctx = noisy_line();
    const auto state = prepare_initial(ctx.graph, ctx.noise);
    const auto copy = state;
    const AuxiliaryBank bank(ctx.graph, ctx.noise, 1);
    const auto first = virtual_best_target(state, bank);
    const auto again = virtual_best_target(state, bank);
    CHECK(state == copy);
    CHECK(first.target == again.target);
    CHECK(first.outcome.state == again.outcome.state);

    const auto all = evaluate_all_targets(state, bank);
    CHECK(all.size() == 8);
    for (std::size_t i = 0; i < all.size(); ++i) {
        CHECK(all[i].target == static_cast<Vertex>(i + 1));
        CHECK(fidelity(all[i].outcome.state) <= fidelity(first.outcome.state));
    }
}

TEST_CASE("auxiliary bank") {
    const auto ctx = dephased_line();
    const AuxiliaryBank bank(ctx.graph, ctx.noise, 1);
    CHECK(bank.entries().size() == 8);
    const auto& a1 = bank.for_target(1);
    CHECK(a1.edges == 1.0);
    CHECK(a1.cost_multiplier == Approx(2 / 0.58));
    CHECK(a1.cost() == Approx(2 / 0.58));
    CHECK(bank.for_target(4).edges == 2.0);
    CHECK(bank.for_target(4).cost_multiplier == 2.0);  // noiseless auxiliary: q = 1
    CHECK_THROWS_AS(bank.for_target(9), InvalidArgument);
    CHECK_THROWS_AS(AuxiliaryBank(Graph(3, {}), {}, 0), InvalidArgument);
}

TEST_CASE("two-step look-ahead on two separated dephased qubits") {
    NoiseSpec n;
    n.dephasing = {{1, 0.8}, {3, 0.8}};
    n.gate = 0.999;
    StopRule one;
    one.max_rounds = 1;
    const auto c = run_c_alpha({linear_cluster(4), n}, 0, one);
    REQUIRE(c.rows.size() == 2);
    const auto& actions = c.rows[1].actions;
    REQUIRE(actions.size() == 2);
    CHECK(c.rows[1].fidelity > run_s_alpha({linear_cluster(4), n}, 0, one).rows[1].fidelity);
    CHECK(((actions[0].target == 1 && actions[1].target == 3) || (actions[0].target == 3 && actions[1].target == 1)));
}

TEST_CASE("look-ahead rounds are never worse than the greedy round") {
    test::Rng rng(81);
    StopRule one;
    one.max_rounds = 1;
    one.halt_on_stagnation = false;
    for (int trial = 0; trial < 20; ++trial) {
        const Graph g = test::random_bipartite(rng, test::uniform_int(rng, 2, 6));
        const StrategyContext ctx{g, test::random_noise(rng, g, true)};
        const int alpha = test::uniform_int(rng, 0, 1);
        const auto c = run_c_alpha(ctx, alpha, one);
        const auto s = run_s_alpha(ctx, alpha, one);
        REQUIRE(c.rows.size() == 2);
        REQUIRE(s.rows.size() == 2);
        CHECK(c.rows[1].fidelity >= s.rows[1].fidelity);
        if (c.rows[1].actions.size() == 1) {
            CHECK(c.rows[1].fidelity == s.rows[1].fidelity);
            CHECK(c.rows[1].resources == s.rows[1].resources);
        }
    }
}

TEST_CASE("hybrid without localized rounds is recurrence with the better sub-protocol") {
    const auto ctx = noisy_line();
    StopRule stop;
    stop.max_rounds = 5;
    const auto h = run_hybrid(ctx, 1, 0, stop);
    DiagonalState state = prepare_initial(ctx.graph, ctx.noise);
    double r = 7.0;
    for (std::size_t i = 1; i < h.rows.size(); ++i) {
        REQUIRE(h.rows[i].actions.size() == 1);
        const auto& a = h.rows[i].actions[0];
        CHECK(a.kind == StepAction::Kind::Recurrence);
        const auto p1 = tcp_step(state, SubProtocol::P1, ctx.noise.gate);
        const auto p2 = tcp_step(state, SubProtocol::P2, ctx.noise.gate);
        const bool two = fidelity(p2.state) > fidelity(p1.state);
        CHECK(a.sub == (two ? SubProtocol::P2 : SubProtocol::P1));
        const auto& chosen = two ? p2 : p1;
        r = 2 * r / chosen.success_prob;
        CHECK(h.rows[i].fidelity == Approx(fidelity(chosen.state)).epsilon(1e-14));
        CHECK(h.rows[i].resources == Approx(r).epsilon(1e-12));
        state = chosen.state;
    }
}

TEST_CASE("automatic hybrid on a pure state runs no localized rounds") {
    const auto h = run_hybrid({grid_cluster(2, 2), {}}, 1, std::nullopt, {});
    for (std::size_t i = 1; i < h.rows.size(); ++i) {
        REQUIRE(h.rows[i].actions.size() == 1);
        CHECK(h.rows[i].actions[0].kind == StepAction::Kind::Recurrence);
        CHECK(h.rows[i].fidelity == Approx(1.0));
    }
    CHECK(h.end == TraceEnd::Saturated);
}

TEST_CASE("hybrid rounds pump localized steps before the recurrence step") {
    StopRule stop;
    stop.max_rounds = 3;
    const auto h = run_hybrid(noisy_line(), 1, 3, stop);
    REQUIRE(h.rows.size() >= 2);
    const auto& first = h.rows[1].actions;
    CHECK(first.size() == 4);
    CHECK(first.back().kind == StepAction::Kind::Recurrence);
    CHECK(h.rows[1].action_label().find('+') != std::string::npos);
}

TEST_CASE("traces replay to the same fidelities") {
    StopRule stop;
    stop.max_rounds = 6;
    for (const char* id : {"tcp", "s-0", "s-1", "c-1", "hybrid-1:2", "hybrid-0:auto"}) {
        const auto kind = StrategyKind::parse(id);
        const auto t = run_strategy(noisy_line(), kind, stop);
        const auto replay = replay_fidelities(noisy_line(), t, kind.alpha);
        CHECK_MESSAGE(test::max_abs_diff(replay, column(t, &TraceRow::fidelity)) < 1e-12, id);
    }
}

TEST_CASE("resources grow strictly and the cap is respected") {
    StopRule stop;
    stop.resource_cap = 500.0;
    stop.halt_on_stagnation = false;
    stop.max_rounds = 40;
    for (const char* id : {"tcp", "s-1", "c-0", "hybrid-1:2"}) {
        const auto t = run_strategy(noisy_line(), StrategyKind::parse(id), stop);
        CHECK_MESSAGE(t.end == TraceEnd::ResourceCap, id);
        for (std::size_t i = 1; i < t.rows.size(); ++i) {
            CHECK(t.rows[i].resources > t.rows[i - 1].resources);
            CHECK(t.rows[i].resources <= 500.0);
        }
    }
}

TEST_CASE("deep pre-purification of nearly pure auxiliaries keeps success probabilities in range") {
    const auto t = run_s_alpha(dephased_line(), 5, {});
    CHECK(t.rows.size() > 1);
    for (const auto& row : t.rows) {
        CHECK(row.success_prob > 0.0);
        CHECK(row.success_prob <= 1.0);
    }
    const AuxiliaryBank bank(linear_cluster(8), dephased_line().noise, 5);
    for (const auto& a : bank.entries())
        for (double q : a.prepurify_probs) CHECK(q <= 1.0);
}

TEST_CASE("stop rule targets") {
    StopRule f;
    f.target_fidelity = 0.99;
    const auto t = run_s_alpha(dephased_line(), 1, f);
    CHECK(t.end == TraceEnd::ReachedFidelity);
    CHECK(t.rows.size() == 4);

    StopRule r;
    r.resource_limit = 30.0;
    r.halt_on_stagnation = false;
    const auto u = run_s_alpha(dephased_line(), 1, r);
    CHECK(u.end == TraceEnd::ReachedResources);
    CHECK(u.final_resources() >= 30.0);
    CHECK(u.rows[u.rows.size() - 2].resources < 30.0);
}

TEST_CASE("recurrence needs a two-colorable graph") {
    const StrategyContext triangle{Graph(3, {{1, 2}, {2, 3}, {1, 3}}), {}};
    CHECK_THROWS_AS(run_tcp(triangle, {}), NotTwoColorable);
    CHECK_THROWS_AS(run_hybrid(triangle, 0, 1, {}), NotTwoColorable);
    CHECK_NOTHROW(run_s_alpha(triangle, 0, {}));
}
