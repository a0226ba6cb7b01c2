#include "quclone/ingen.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace quclone {

std::pair<std::uint64_t, std::uint64_t> alpha_beta(std::uint64_t n) {
    // largest r with r(r+1)/2 <= n, via a float guess corrected exactly
    std::uint64_t r = static_cast<std::uint64_t>((std::sqrt(8.0L * n + 1.0L) - 1.0L) / 2.0L);
    while (r * (r + 1) / 2 > n) --r;
    while ((r + 1) * (r + 2) / 2 <= n) ++r;
    return {n - r * (r + 1) / 2, r};
}

IngenConfig default_ingen_config(std::function<int(std::uint64_t)> ell) {
    IngenConfig cfg;
    cfg.ell = std::move(ell);
    const auto ell_copy = cfg.ell;
    cfg.q = [ell_copy](std::uint64_t n) {
        return std::ldexp(static_cast<double>(n + 2), -ell_copy(n));
    };
    cfg.schedule = [](std::uint64_t t) {
        const auto [a, b] = alpha_beta(t);
        return std::make_pair(a, BudgetSchedule::family(static_cast<std::uint32_t>(b)));
    };
    return cfg;
}

void validate_config(const IngenConfig& cfg, std::uint64_t horizon) {
    if (!cfg.ell || !cfg.q || !cfg.schedule)
        throw std::invalid_argument("ingen config: all three maps must be set");
    if (cfg.ell_cap < 0 || cfg.ell_cap > 16)
        throw std::invalid_argument("ingen config: ell_cap outside [0,16]");
    for (std::uint64_t n = 0; n <= horizon; ++n) {
        const int l = cfg.ell(n);
        if (l < 0 || l > cfg.ell_cap)
            throw std::invalid_argument("ingen config: ell(n) outside [0, ell_cap]");
        const double qn = cfg.q(n);
        if (!(qn > 0.0)) throw std::invalid_argument("ingen config: q(n) must be positive");
        if (!(qn * std::ldexp(1.0, l) > static_cast<double>(n + 1)))
            throw std::invalid_argument("ingen config: q(n) * 2^ell(n) <= n+1");
    }
}

namespace {

constexpr double kTieGuard = 1e-12;

struct GeneratorAtN {
    Circuit circuit;
    std::uint64_t generator_index = 0;
    bool arity_ok = false;
    bool budget_ok = false;
};

GeneratorAtN probe_generator(std::uint64_t t, std::uint64_t n, const IngenConfig& cfg) {
    GeneratorAtN out;
    const auto [g_idx, budget] = cfg.schedule(t);
    out.generator_index = g_idx;
    out.circuit = decode_circuit(nat_to_string(g_idx));
    out.arity_ok =
        out.circuit.input_wires == 0 && out.circuit.output_wires() == cfg.ell(n);
    out.budget_ok = budget.allows(n, gate_cost(out.circuit));
    return out;
}

}  // namespace

std::vector<Bits> compute_S(std::uint64_t t, std::uint64_t n, const IngenConfig& cfg) {
    const int l = cfg.ell(n);
    if (l < 0 || l > cfg.ell_cap) throw resource_error("compute_S: ell(n) beyond the cap");
    const GeneratorAtN gen = probe_generator(t, n, cfg);
    if (!gen.arity_ok || !gen.budget_ok) return {};
    const double qn = cfg.q(n);
    const std::vector<double> dist = output_distribution(gen.circuit, "", cfg.limits);
    std::vector<Bits> out;
    for (std::size_t i = 0; i < dist.size(); ++i)
        if (dist[i] >= qn - kTieGuard) out.push_back(index_to_bits(i, l));
    return out;
}

SequencePrefix diagonalize(const IngenConfig& cfg, std::uint64_t horizon) {
    validate_config(cfg, horizon);
    SequencePrefix prefix;
    prefix.config = cfg;

    std::uint64_t fp = 1469598103934665603ull;  // FNV offset basis
    const auto mix = [&fp](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            fp ^= (v >> (8 * i)) & 0xff;
            fp *= 1099511628211ull;
        }
    };

    for (std::uint64_t n = 0; n <= horizon; ++n) {
        const int l = cfg.ell(n);
        const double qn = cfg.q(n);
        const auto [a, b] = cfg.schedule(n);
        mix(n);
        mix(static_cast<std::uint64_t>(l));
        std::uint64_t qbits;
        static_assert(sizeof(qbits) == sizeof(qn));
        std::memcpy(&qbits, &qn, sizeof(qbits));
        mix(qbits);
        mix(a);
        mix(b.is_unbounded() ? ~0ull : static_cast<std::uint64_t>(*b.k));

        std::vector<bool> blocked(std::size_t{1} << l, false);
        EntryAudit audit;
        audit.n = n;
        std::uint64_t union_size = 0;
        for (std::uint64_t t = 0; t <= n; ++t) {
            const GeneratorAtN gen = probe_generator(t, n, cfg);
            SetAudit sa;
            sa.t = t;
            sa.generator_index = gen.generator_index;
            sa.arity_ok = gen.arity_ok;
            sa.budget_ok = gen.budget_ok;
            if (gen.arity_ok && gen.budget_ok) {
                const std::vector<Bits> s = compute_S(t, n, cfg);
                sa.size = s.size();
                if (static_cast<double>(s.size()) > 1.0 / qn + 1e-9)
                    throw std::logic_error("ingen: |S_{t,n}| exceeded 1/q(n)");
                for (const Bits& x : s) {
                    const std::uint64_t i = bits_to_index(x);
                    if (!blocked[i]) {
                        blocked[i] = true;
                        ++union_size;
                    }
                }
            }
            audit.sets.push_back(sa);
        }

        // counting bound, asserted every run
        const double bound = static_cast<double>(n + 1) / qn;
        if (static_cast<double>(union_size) > bound + 1e-9)
            throw std::logic_error("ingen: union size exceeded (n+1)/q(n)");
        if (!(bound < std::ldexp(1.0, l)))
            throw std::logic_error("ingen: counting bound fails to leave room");

        std::optional<std::uint64_t> pick;
        for (std::uint64_t i = 0; i < (std::uint64_t{1} << l); ++i) {
            if (!blocked[i]) {
                pick = i;
                break;
            }
        }
        if (!pick) throw std::logic_error("ingen: every string was generated");

        audit.union_size = union_size;
        audit.rank = *pick;
        prefix.entries.push_back(index_to_bits(*pick, l));
        prefix.audits.push_back(std::move(audit));
    }
    prefix.fingerprint = fp;
    return prefix;
}

WitnessReport witness_check(const SequencePrefix& prefix, std::uint64_t t) {
    const IngenConfig& cfg = prefix.config;
    WitnessReport report;
    report.t = t;
    for (std::uint64_t n = 0; n < prefix.entries.size(); ++n) {
        WitnessEntry e;
        e.n = n;
        e.threshold = cfg.q(n);
        const GeneratorAtN gen = probe_generator(t, n, cfg);
        e.arity_ok = gen.arity_ok;
        e.budget_ok = gen.budget_ok;
        if (gen.arity_ok && gen.budget_ok) {
            e.probability = outcome_probability(gen.circuit, "", prefix.entries[n], cfg.limits);
            e.generated = e.probability >= e.threshold - kTieGuard;
            if (n >= t && e.generated) report.all_pass = false;
        }
        report.entries.push_back(e);
    }
    return report;
}

SequencePrefix zero_leading(const SequencePrefix& prefix) {
    SequencePrefix out = prefix;
    for (std::size_t i = 0; i < out.entries.size(); ++i) {
        if (!out.entries[i].empty()) out.entries[i][0] = '0';
        if (i < out.audits.size()) out.audits[i].rank = bits_to_index(out.entries[i]);
    }
    return out;
}

double clone_deficiency(const Circuit& c, const DensityState& rho, const SimLimits& limits) {
    const int n = rho.wires();
    if (c.input_wires != n || c.output_wires() != 2 * n)
        throw std::invalid_argument("clone_deficiency: circuit must be (n, 2n) on rho's wires");
    const DensityState copied = apply_circuit(c, rho, limits);
    const DensityState twin = rho.tensor(rho);
    return trace_distance(twin, copied);
}

Circuit transversal_copier(int n) {
    Circuit c;
    c.input_wires = n;
    for (int i = 0; i < n; ++i) c.then(g_prep());
    for (int i = 0; i < n; ++i) c.then(g_cnot(i, n + i));
    return c;
}

nlohmann::json prefix_to_json(const SequencePrefix& prefix) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["fingerprint"] = prefix.fingerprint;
    j["horizon"] = prefix.entries.empty() ? 0 : prefix.entries.size() - 1;

    nlohmann::json cfg;
    nlohmann::json ell = nlohmann::json::array();
    nlohmann::json q = nlohmann::json::array();
    nlohmann::json alpha = nlohmann::json::array();
    nlohmann::json beta = nlohmann::json::array();
    for (std::uint64_t n = 0; n < prefix.entries.size(); ++n) {
        ell.push_back(prefix.config.ell(n));
        q.push_back(prefix.config.q(n));
        const auto [a, b] = prefix.config.schedule(n);
        alpha.push_back(a);
        if (b.is_unbounded())
            beta.push_back(nullptr);
        else
            beta.push_back(*b.k);
    }
    cfg["ell"] = std::move(ell);
    cfg["q"] = std::move(q);
    cfg["alpha"] = std::move(alpha);
    cfg["beta"] = std::move(beta);
    j["config"] = std::move(cfg);

    j["entries"] = prefix.entries;

    nlohmann::json audits = nlohmann::json::array();
    for (const EntryAudit& a : prefix.audits) {
        nlohmann::json ja;
        ja["n"] = a.n;
        ja["union_size"] = a.union_size;
        ja["rank"] = a.rank;
        nlohmann::json sets = nlohmann::json::array();
        for (const SetAudit& s : a.sets) {
            sets.push_back({{"t", s.t},
                            {"generator", s.generator_index},
                            {"arity_ok", s.arity_ok},
                            {"budget_ok", s.budget_ok},
                            {"size", s.size}});
        }
        ja["sets"] = std::move(sets);
        audits.push_back(std::move(ja));
    }
    j["audits"] = std::move(audits);
    return j;
}

}  // namespace quclone
