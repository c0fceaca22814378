#include "lep/config.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace lep {

ConfigError::ConfigError(const std::string& source, int line, const std::string& message)
    : Error(line > 0 ? fmt::format("{}:{}: {}", source, line, message)
                     : fmt::format("{}: {}", source, message)),
      line_(line) {}

const char* to_string(Mode m) {
    switch (m) {
        case Mode::Trace: return "trace";
        case Mode::FixedFidelity: return "fixed_fidelity";
        case Mode::FixedResources: return "fixed_resources";
    }
    return "?";
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::vector<std::string_view> words(std::string_view s) {
    std::vector<std::string_view> out;
    for (auto w : split(s, ' '))
        if (!w.empty()) out.push_back(w);
    return out;
}

std::optional<double> to_double(std::string_view s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<int> to_int(std::string_view s) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

// Parses the config line by line; `fail` throws with the current line.
class Parser {
public:
    Parser(std::string source) : source_(std::move(source)) {}

    Scenario run(std::string_view text) {
        std::istringstream in{std::string(text)};
        std::string raw;
        while (std::getline(in, raw)) {
            ++line_;
            std::string_view l = raw;
            if (auto hash = l.find('#'); hash != std::string_view::npos) l = l.substr(0, hash);
            l = trim(l);
            if (l.empty()) continue;
            const auto eq = l.find('=');
            if (eq == std::string_view::npos) fail("expected 'key = value'");
            const std::string key(trim(l.substr(0, eq)));
            const std::string_view value = trim(l.substr(eq + 1));
            if (key.empty()) fail("missing key");
            if (value.empty()) fail(fmt::format("missing value for '{}'", key));
            if (!seen_.insert(key).second) fail(fmt::format("duplicate key '{}'", key));
            assign(key, value);
            key_line_[key] = line_;
        }
        return finish();
    }

private:
    [[noreturn]] void fail(const std::string& message) const {
        throw ConfigError(source_, line_, message);
    }
    [[noreturn]] void fail_at(const std::string& key, const std::string& message) const {
        auto it = key_line_.find(key);
        throw ConfigError(source_, it == key_line_.end() ? 0 : it->second, message);
    }

    double probability(std::string_view v, const std::string& key) const {
        auto d = to_double(v);
        if (!d) fail(fmt::format("'{}' is not a number", v));
        if (!(*d >= 0.0 && *d <= 1.0)) fail(fmt::format("{} must lie in [0,1], got {}", key, v));
        return *d;
    }

    Vertex qubit_suffix(std::string_view key, std::size_t prefix) const {
        auto q = to_int(key.substr(prefix));
        if (!q || *q < 1) fail(fmt::format("bad qubit index in '{}'", key));
        return *q;
    }

    std::vector<double> axis(std::string_view v, const std::string& key) const {
        std::vector<double> out;
        if (v.find(':') != std::string_view::npos) {
            auto parts = split(v, ':');
            if (parts.size() != 3) fail(fmt::format("{} range must be start:stop:count", key));
            const double a = probability(parts[0], key);
            const double b = probability(parts[1], key);
            auto n = to_int(parts[2]);
            if (!n || *n < 1) fail(fmt::format("{} range needs a positive count", key));
            for (int i = 0; i < *n; ++i)
                out.push_back(*n == 1 ? a : a + (b - a) * i / (*n - 1));
        } else {
            for (auto item : split(v, ',')) {
                if (item.empty()) fail(fmt::format("empty entry in {}", key));
                out.push_back(probability(item, key));
            }
        }
        return out;
    }

    void assign(const std::string& key, std::string_view v) {
        if (key == "name") {
            s_.name = std::string(v);
        } else if (key == "graph") {
            try {
                s_.graph = parse_graph_spec(v);
            } catch (const Error& e) {
                fail(e.what());
            }
            s_.graph_spec = std::string(v);
            have_graph_ = true;
        } else if (key == "noise.white") {
            s_.noise.white = probability(v, key);
        } else if (key.starts_with("noise.white.")) {
            s_.noise.white_override[qubit_suffix(key, 12)] = probability(v, key);
        } else if (key.starts_with("noise.z.")) {
            s_.noise.dephasing[qubit_suffix(key, 8)] = probability(v, key);
        } else if (key == "noise.gate") {
            s_.noise.gate = probability(v, key);
        } else if (key == "strategies") {
            for (auto item : split(v, ',')) {
                if (item.empty()) fail("empty strategy entry");
                try {
                    s_.strategies.push_back(StrategyKind::parse(item));
                } catch (const Error& e) {
                    fail(e.what());
                }
            }
        } else if (key == "mode") {
            auto w = words(v);
            if (w.size() == 1 && w[0] == "trace") {
                s_.mode = Mode::Trace;
            } else if (w.size() == 2 && w[0] == "fixed_fidelity") {
                s_.mode = Mode::FixedFidelity;
                s_.target = probability(w[1], "target fidelity");
                if (s_.target <= 0.0) fail("target fidelity must be positive");
            } else if (w.size() == 2 && w[0] == "fixed_resources") {
                s_.mode = Mode::FixedResources;
                auto tr = to_double(w[1]);
                if (!tr || !(*tr > 0.0)) fail("total resources must be a positive number");
                s_.target = *tr;
            } else {
                fail("mode must be 'trace', 'fixed_fidelity <F>' or 'fixed_resources <R>'");
            }
        } else if (key == "cap") {
            auto c = to_double(v);
            if (!c || !(*c > 0.0)) fail("cap must be a positive number");
            s_.cap = *c;
        } else if (key == "max_rounds") {
            auto n = to_int(v);
            if (!n || *n < 0) fail("max_rounds must be a non-negative integer");
            s_.max_rounds = *n;
        } else if (key == "tcp.first") {
            if (v == "P1") s_.tcp_first = SubProtocol::P1;
            else if (v == "P2") s_.tcp_first = SubProtocol::P2;
            else fail("tcp.first must be P1 or P2");
        } else if (key == "prepurify") {
            if (v == "adaptive") s_.prepurify = PrepurifySchedule::Adaptive;
            else if (v == "alternating") s_.prepurify = PrepurifySchedule::Alternating;
            else fail("prepurify must be 'adaptive' or 'alternating'");
        } else if (key == "sweep.pw") {
            sweep().pw = axis(v, key);
        } else if (key == "sweep.pz") {
            sweep().pz = axis(v, key);
        } else if (key == "sweep.z_qubits") {
            for (auto item : split(v, ',')) {
                auto q = to_int(item);
                if (!q || *q < 1) fail(fmt::format("bad qubit '{}' in sweep.z_qubits", item));
                sweep().z_qubits.push_back(*q);
            }
        } else {
            fail(fmt::format("unknown key '{}'", key));
        }
    }

    SweepAxes& sweep() {
        if (!s_.sweep) s_.sweep.emplace();
        return *s_.sweep;
    }

    Scenario finish() {
        if (!have_graph_) throw ConfigError(source_, 0, "missing required key 'graph'");
        if (s_.strategies.empty()) {
            if (seen_.count("strategies")) fail_at("strategies", "strategy list is empty");
            throw ConfigError(source_, 0, "missing required key 'strategies'");
        }
        const int n = s_.graph.size();
        for (const auto& [q, p] : s_.noise.white_override)
            if (q > n) fail_at(fmt::format("noise.white.{}", q), fmt::format("qubit {} not in graph", q));
        for (const auto& [q, p] : s_.noise.dephasing)
            if (q > n) fail_at(fmt::format("noise.z.{}", q), fmt::format("qubit {} not in graph", q));
        if (s_.sweep) {
            auto& sw = *s_.sweep;
            if (sw.pw.empty()) throw ConfigError(source_, 0, "sweep needs a nonempty 'sweep.pw'");
            if (sw.pz.empty()) throw ConfigError(source_, 0, "sweep needs a nonempty 'sweep.pz'");
            if (sw.z_qubits.empty())
                throw ConfigError(source_, 0, "sweep needs a nonempty 'sweep.z_qubits'");
            for (Vertex q : sw.z_qubits)
                if (q > n) fail_at("sweep.z_qubits", fmt::format("qubit {} not in graph", q));
        }
        return s_;
    }

    std::string source_;
    int line_ = 0;
    bool have_graph_ = false;
    std::set<std::string> seen_;
    std::map<std::string, int> key_line_;
    Scenario s_;
};

}  // namespace

StopRule Scenario::stop_rule() const {
    StopRule r;
    r.max_rounds = max_rounds;
    r.resource_cap = cap;
    switch (mode) {
        case Mode::Trace: break;
        case Mode::FixedFidelity: r.target_fidelity = target; break;
        case Mode::FixedResources:
            // Keep committing past the fidelity peak so de-purifying rounds
            // inside the budget stay visible.
            r.resource_limit = target;
            r.halt_on_stagnation = false;
            break;
    }
    return r;
}

Scenario Scenario::at_cell(double pw, double pz) const {
    Scenario cell = *this;
    cell.noise.white = pw;
    cell.noise.white_override.clear();
    cell.noise.dephasing.clear();
    if (sweep)
        for (Vertex q : sweep->z_qubits) cell.noise.dephasing[q] = pz;
    return cell;
}

Graph parse_graph_spec(std::string_view spec) {
    auto w = words(spec);
    if (w.empty()) throw InvalidArgument("empty graph spec");
    auto count = [&](std::size_t i) {
        if (i >= w.size()) throw InvalidArgument("graph spec '" + std::string(spec) + "' is missing a size");
        auto n = to_int(w[i]);
        if (!n || *n < 1) throw InvalidArgument("bad size '" + std::string(w[i]) + "' in graph spec");
        return *n;
    };
    if (w[0] == "linear") {
        if (w.size() != 2) throw InvalidArgument("expected 'linear <n>'");
        return linear_cluster(count(1));
    }
    if (w[0] == "grid") {
        if (w.size() != 3) throw InvalidArgument("expected 'grid <rows> <cols>'");
        return grid_cluster(count(1), count(2));
    }
    if (w[0] == "ghz") {
        if (w.size() != 2) throw InvalidArgument("expected 'ghz <n>'");
        const int n = count(1);
        std::vector<std::pair<Vertex, Vertex>> edges;
        for (Vertex v = 2; v <= n; ++v) edges.emplace_back(1, v);
        return Graph(n, std::move(edges));
    }
    if (w[0] == "explicit") {
        const int n = count(1);
        std::vector<std::pair<Vertex, Vertex>> edges;
        for (std::size_t i = 2; i < w.size(); ++i) {
            auto ends = split(w[i], '-');
            auto a = ends.size() == 2 ? to_int(ends[0]) : std::nullopt;
            auto b = ends.size() == 2 ? to_int(ends[1]) : std::nullopt;
            if (!a || !b) throw InvalidArgument("bad edge '" + std::string(w[i]) + "'; expected a-b");
            edges.emplace_back(*a, *b);
        }
        return Graph(n, std::move(edges));
    }
    throw InvalidArgument("unknown graph kind '" + std::string(w[0]) + "'");
}

Scenario parse_config(std::string_view text, const std::string& source) {
    return Parser(source).run(text);
}

Scenario load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string(), 0, "cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.string());
}

}  // namespace lep
