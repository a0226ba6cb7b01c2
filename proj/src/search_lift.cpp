#include "quclone/search_lift.hpp"

#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>

namespace quclone {

DecisionOracle DecisionOracle::from_table(int n, std::vector<double> p) {
    DecisionOracle o;
    o.n = n;
    o.p = std::move(p);
    o.validate();
    return o;
}

DecisionOracle DecisionOracle::from_circuit(const Circuit& c, const SimLimits& limits) {
    if (c.output_wires() != 1)
        throw std::invalid_argument("DecisionOracle: circuit must have one output wire");
    DecisionOracle o;
    o.n = c.input_wires;
    o.p.resize(std::size_t{1} << o.n);
    for (std::uint64_t x = 0; x < o.p.size(); ++x)
        o.p[x] = outcome_probability(c, index_to_bits(x, o.n), "1", limits);
    o.validate();
    return o;
}

void DecisionOracle::validate() const {
    if (n < 0 || n > 62) throw std::invalid_argument("DecisionOracle: bad input length");
    if (p.size() != (std::size_t{1} << n))
        throw std::invalid_argument("DecisionOracle: table size must be 2^n");
    for (double v : p)
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("DecisionOracle: probability outside [0, 1]");
}

double SearchDistribution::prob(std::uint64_t s) const {
    if (exact) return probs[s];
    return static_cast<double>(counts[s]) / static_cast<double>(samples);
}

double SearchDistribution::total() const {
    double t = 0;
    const std::uint64_t side = std::uint64_t{1} << n;
    for (std::uint64_t s = 0; s < side; ++s) t += prob(s);
    return t;
}

SearchDistribution lift_exact(const DecisionOracle& oracle) {
    oracle.validate();
    if (oracle.n > 4)
        throw resource_error("lift_exact: subset enumeration capped at n <= 4");
    const std::uint32_t side = std::uint32_t{1} << oracle.n;
    SearchDistribution dist;
    dist.n = oracle.n;
    dist.exact = true;
    dist.probs.assign(side, 0.0);
    const double uniform = std::ldexp(1.0, -oracle.n);
    // subsets of {0,1}^n as bitmasks over the 2^n strings
    const std::uint64_t masks = std::uint64_t{1} << side;
    for (std::uint64_t mask = 0; mask < masks; ++mask) {
        double weight = 1.0;
        for (std::uint32_t x = 0; x < side; ++x)
            weight *= (mask >> x) & 1 ? oracle.p[x] : 1.0 - oracle.p[x];
        if (weight == 0.0) continue;
        const int size = std::popcount(mask);
        if (size == 0) {
            for (std::uint32_t s = 0; s < side; ++s) dist.probs[s] += weight * uniform;
        } else {
            const double share = weight / size;
            for (std::uint32_t s = 0; s < side; ++s)
                if ((mask >> s) & 1) dist.probs[s] += share;
        }
    }
    return dist;
}

SearchDistribution lift_sampled(const DecisionOracle& oracle, std::uint64_t seed,
                                std::uint64_t samples) {
    oracle.validate();
    if (samples == 0) throw std::invalid_argument("lift_sampled: need at least one sample");
    const std::uint64_t side = std::uint64_t{1} << oracle.n;
    SearchDistribution dist;
    dist.n = oracle.n;
    dist.exact = false;
    dist.counts.assign(side, 0);
    dist.samples = samples;
    dist.seed = seed;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<std::uint64_t> members;
    members.reserve(side);
    for (std::uint64_t trial = 0; trial < samples; ++trial) {
        members.clear();
        for (std::uint64_t x = 0; x < side; ++x)
            if (coin(rng) < oracle.p[x]) members.push_back(x);
        std::uint64_t out;
        if (members.empty()) {
            out = std::uniform_int_distribution<std::uint64_t>(0, side - 1)(rng);
        } else {
            out = members[std::uniform_int_distribution<std::size_t>(0, members.size() - 1)(rng)];
        }
        ++dist.counts[out];
    }
    return dist;
}

SearchDistribution lift(const DecisionOracle& oracle, std::uint64_t seed,
                        std::uint64_t samples) {
    if (oracle.n <= 4) return lift_exact(oracle);
    return lift_sampled(oracle, seed, samples);
}

SearchBoundReport verify_search_bound(const DecisionOracle& oracle,
                                      const SearchDistribution& dist) {
    if (!dist.exact)
        throw std::invalid_argument("verify_search_bound: needs an exact distribution");
    if (dist.n != oracle.n)
        throw std::invalid_argument("verify_search_bound: length mismatch");
    double psum = 0;
    for (double v : oracle.p) psum += v;
    SearchBoundReport report;
    report.n = oracle.n;
    report.all_hold = true;
    const std::uint64_t side = std::uint64_t{1} << oracle.n;
    for (std::uint64_t s = 0; s < side; ++s) {
        SearchBoundRow row;
        row.s = index_to_bits(s, oracle.n);
        row.lhs = oracle.p[s] / (1.0 + (psum - oracle.p[s]));
        row.rhs = dist.probs[s];
        row.holds = row.lhs <= row.rhs + 1e-9;
        report.all_hold = report.all_hold && row.holds;
        report.rows.push_back(std::move(row));
    }
    return report;
}

nlohmann::json search_bound_report_to_json(const SearchBoundReport& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const SearchBoundRow& row : r.rows)
        rows.push_back({{"s", row.s}, {"lhs", row.lhs}, {"rhs", row.rhs}, {"holds", row.holds}});
    return {{"n", r.n}, {"rows", rows}, {"all_hold", r.all_hold}};
}

double expected_set_size(const std::vector<double>& p) {
    double sum = 0;
    for (double v : p) {
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("expected_set_size: probability outside [0, 1]");
        sum += v;
    }
    return sum;
}

SetSizeCheck expected_set_size_check(const std::vector<double>& p, std::uint64_t seed,
                                     std::uint64_t samples) {
    SetSizeCheck check;
    check.expected = expected_set_size(p);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    double sum = 0, sumsq = 0;
    for (std::uint64_t trial = 0; trial < samples; ++trial) {
        int size = 0;
        for (double v : p) size += coin(rng) < v ? 1 : 0;
        sum += size;
        sumsq += static_cast<double>(size) * size;
    }
    check.empirical_mean = sum / static_cast<double>(samples);
    const double var =
        std::max(0.0, sumsq / static_cast<double>(samples) -
                          check.empirical_mean * check.empirical_mean);
    check.std_error = std::sqrt(var / static_cast<double>(samples));
    check.within_4_sigma =
        std::abs(check.empirical_mean - check.expected) <= 4 * check.std_error + 1e-12;
    return check;
}

}  // namespace quclone
