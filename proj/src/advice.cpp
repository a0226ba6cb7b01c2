#include "quclone/advice.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>

#include "quclone/compile.hpp"
#include "quclone/gates.hpp"
#include "quclone/linalg.hpp"

namespace quclone {

namespace {

std::uint64_t splitmix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

bool all_zero(const Bits& s) {
    return s.find('1') == Bits::npos;
}

int parity(const Bits& s) {
    return static_cast<int>(std::count(s.begin(), s.end(), '1') & 1);
}

}  // namespace

// --- planted pair table ---------------------------------------------------

void PromiseSpec::validate() const {
    if (entries.empty()) throw std::invalid_argument("promise spec: needs at least the empty entry");
    for (std::size_t lam = 0; lam < entries.size(); ++lam) {
        const Entry& e = entries[lam];
        require_bits(e.x, "promise spec x");
        require_bits(e.theta, "promise spec theta");
        if (e.x.size() != lam || e.theta.size() != lam)
            throw std::invalid_argument("promise spec: entry " + std::to_string(lam) +
                                        " must hold two strings of that length");
    }
}

PromiseSpec spec_from_prefix(const SequencePrefix& prefix) {
    PromiseSpec spec;
    for (std::size_t n = 0; n < prefix.entries.size(); ++n) {
        const Bits& e = prefix.entries[n];
        if (e.size() != 2 * n)
            throw std::invalid_argument("spec_from_prefix: entry " + std::to_string(n) +
                                        " does not have length 2n (ell(n) = 2n required)");
        spec.entries.push_back({e.substr(0, n), e.substr(n)});
    }
    spec.validate();
    return spec;
}

PromiseSpec spec_from_json(const nlohmann::json& j) {
    const nlohmann::json& arr = j.is_array() ? j : j.at("entries");
    PromiseSpec spec;
    spec.entries.push_back({"", ""});
    for (const auto& item : arr) {
        std::uint64_t lam = item.at("lambda").get<std::uint64_t>();
        if (lam != spec.entries.size())
            throw std::invalid_argument("spec_from_json: lambdas must be contiguous from 1");
        spec.entries.push_back({item.at("x").get<std::string>(), item.at("theta").get<std::string>()});
    }
    spec.validate();
    return spec;
}

nlohmann::json spec_to_json(const PromiseSpec& spec) {
    spec.validate();
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t lam = 1; lam < spec.entries.size(); ++lam) {
        arr.push_back({{"lambda", lam}, {"x", spec.entries[lam].x}, {"theta", spec.entries[lam].theta}});
    }
    return {{"entries", arr}};
}

std::uint64_t all_nonzero_from(const PromiseSpec& spec) {
    spec.validate();
    std::uint64_t onset = 0;  // one past the last all-zero x; entry 0 is vacuously zero
    for (std::uint64_t lam = 0; lam <= spec.max_lambda(); ++lam)
        if (all_zero(spec.entries[lam].x)) onset = lam + 1;
    return onset;
}

PureState advice_state(const PromiseSpec& spec, std::uint64_t lambda) {
    if (lambda > spec.max_lambda())
        throw std::invalid_argument("advice_state: lambda beyond the planted table");
    const PromiseSpec::Entry& e = spec.entries[lambda];
    return wiesner_encode(e.x, e.theta);
}

// --- membership and instance sampling --------------------------------------

Membership promise_membership(const PromiseSpec& spec, const Bits& w) {
    require_bits(w, "promise_membership instance");
    if (w.size() % 2 != 0) return Membership::OutsidePromise;
    std::uint64_t lam = w.size() / 2;
    if (lam > spec.max_lambda()) return Membership::OutsidePromise;
    const PromiseSpec::Entry& e = spec.entries[lam];
    if (w.compare(0, lam, e.theta) != 0) return Membership::OutsidePromise;
    return dot2(e.x, w.substr(lam)) == 1 ? Membership::Yes : Membership::No;
}

double InstanceDistribution::prob(const Bits& w) const {
    if (w.size() != n) return 0.0;
    auto hit = [&](const std::vector<Bits>& side) {
        return std::binary_search(side.begin(), side.end(), w);
    };
    if (hit(yes)) return k / static_cast<double>(yes.size());
    if (hit(no)) return k / static_cast<double>(no.size());
    return 0.0;
}

InstanceDistribution promise_distribution(const PromiseSpec& spec, std::uint64_t n) {
    if (n % 2 != 0 || n / 2 > spec.max_lambda())
        throw std::invalid_argument("promise_distribution: no instances of length " + std::to_string(n));
    std::uint64_t lam = n / 2;
    if (lam > 16) throw resource_error("promise_distribution: 2^lambda enumeration capped at lambda = 16");
    const PromiseSpec::Entry& e = spec.entries[lam];
    InstanceDistribution dist;
    dist.n = n;
    for (std::uint64_t y = 0; y < (std::uint64_t{1} << lam); ++y) {
        Bits ys = index_to_bits(y, static_cast<int>(lam));
        (dot2(e.x, ys) == 1 ? dist.yes : dist.no).push_back(e.theta + ys);
    }
    dist.k = (dist.yes.empty() || dist.no.empty()) ? 1.0 : 0.5;
    return dist;
}

Bits sample_instance(const PromiseSpec& spec, std::uint64_t n, std::mt19937_64& rng) {
    if (n % 2 != 0 || n / 2 > spec.max_lambda())
        throw std::invalid_argument("sample_instance: no instances of length " + std::to_string(n));
    std::uint64_t lam = n / 2;
    const PromiseSpec::Entry& e = spec.entries[lam];
    Bits y(lam, '0');
    if (all_zero(e.x)) {
        // one-sided: every y answers 0, so the draw is uniform outright
        for (std::uint64_t i = 0; i < lam; ++i) y[i] = (rng() & 1) ? '1' : '0';
    } else {
        std::size_t pivot = e.x.rfind('1');
        int b = static_cast<int>(rng() & 1);
        int acc = 0;
        for (std::uint64_t i = 0; i < lam; ++i) {
            if (i == pivot) continue;
            y[i] = (rng() & 1) ? '1' : '0';
            acc ^= (e.x[i] == '1' && y[i] == '1');
        }
        y[pivot] = (acc != b) ? '1' : '0';
    }
    return e.theta + y;
}

Bits sample_instance(const PromiseSpec& spec, std::uint64_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return sample_instance(spec, n, rng);
}

// --- honest decoder ---------------------------------------------------------

Circuit build_honest_circuit(int nu) {
    if (nu < 0) throw std::invalid_argument("build_honest_circuit: negative length");
    if (nu > 8) throw resource_error("build_honest_circuit: capped at 8 input bits");
    if (nu % 2 != 0) {
        Circuit c;
        c.input_wires = nu;
        for (int w = nu - 1; w >= 0; --w) c.then(g_trace(w));
        c.then(g_prep());
        return c;
    }
    int lam = nu / 2;
    Circuit c;
    c.input_wires = 3 * lam;
    for (int i = 0; i < lam; ++i) append_controlled_h(c, lam + i, i);
    c.then(g_prep());  // result wire at 3*lam
    for (int i = 0; i < lam; ++i) c.then(g_tof(i, 2 * lam + i, 3 * lam));
    for (int w = 3 * lam - 1; w >= 0; --w) c.then(g_trace(w));
    return c;
}

// --- split-and-guess attacks ------------------------------------------------

void SplitAttack::validate(std::uint64_t lambda) const {
    int lam = static_cast<int>(lambda);
    if (b_wires < 0 || c_wires < 0) throw std::invalid_argument("split attack: negative share width");
    if (splitter.in_wires != lam || splitter.out_wires != b_wires + c_wires)
        throw std::invalid_argument("split attack: splitter arity mismatch");
    if (bob.in_wires != 2 * lam + b_wires || bob.out_wires != 1)
        throw std::invalid_argument("split attack: guesser B arity mismatch");
    if (charlie.in_wires != c_wires + 2 * lam || charlie.out_wires != 1)
        throw std::invalid_argument("split attack: guesser C arity mismatch");
}

namespace {

// Simultaneous-correctness probability for one fixed pair of challenges.
// The splitter output is threaded through B first (its instance most
// significant), then C picks up its share plus its own appended instance.
double split_term(const PromiseSpec::Entry& e, const SplitAttack& attack, int lam,
                  const Mat& sigma, std::uint64_t y_b, std::uint64_t y_c) {
    Bits ysb = index_to_bits(y_b, lam);
    Bits ysc = index_to_bits(y_c, lam);
    Mat st1 = kron(DensityState::basis(e.theta + ysb).matrix(), sigma);
    Mat after_b = channel_apply_prefix(attack.bob, st1, 2 * lam + attack.b_wires + attack.c_wires);
    Mat st2 = kron(after_b, DensityState::basis(e.theta + ysc).matrix());
    std::vector<int> targets(static_cast<std::size_t>(attack.c_wires + 2 * lam));
    for (std::size_t i = 0; i < targets.size(); ++i) targets[i] = 1 + static_cast<int>(i);
    Mat after_c = channel_apply_to(attack.charlie, st2, 1 + attack.c_wires + 2 * lam, targets);
    Eigen::Index idx = dot2(e.x, ysc) * 2 + dot2(e.x, ysb);
    return after_c(idx, idx).real();
}

}  // namespace

SplitAttackResult eval_split_attack(const PromiseSpec& spec, const SplitAttack& attack,
                                    std::uint64_t lambda, std::uint64_t seed,
                                    std::uint64_t samples, const SimLimits& limits) {
    if (lambda < 1 || lambda > spec.max_lambda())
        throw std::invalid_argument("eval_split_attack: lambda outside the planted table");
    attack.validate(lambda);
    int lam = static_cast<int>(lambda);
    int stage1 = 2 * lam + attack.b_wires + attack.c_wires;
    int stage2 = 1 + attack.c_wires + 2 * lam;
    if (std::max(stage1, stage2) > limits.max_density_wires)
        throw resource_error("eval_split_attack: pipeline exceeds the density wire cap");

    const PromiseSpec::Entry& e = spec.entries[lambda];
    Mat sigma = channel_apply(attack.splitter, DensityState::from_pure(wiesner_encode(e.x, e.theta)).matrix());

    SplitAttackResult res;
    std::uint64_t side = std::uint64_t{1} << lam;
    if (lambda <= 2) {
        double sum = 0.0;
        for (std::uint64_t yb = 0; yb < side; ++yb)
            for (std::uint64_t yc = 0; yc < side; ++yc)
                sum += split_term(e, attack, lam, sigma, yb, yc);
        res.value = sum / static_cast<double>(side * side);
        res.method = "exact";
        return res;
    }

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> draw(0, side - 1);
    std::unordered_map<std::uint64_t, double> cache;
    double sum = 0.0, sumsq = 0.0;
    for (std::uint64_t s = 0; s < samples; ++s) {
        std::uint64_t yb = draw(rng), yc = draw(rng);
        std::uint64_t key = yb * side + yc;
        auto it = cache.find(key);
        double t = (it != cache.end()) ? it->second
                                       : (cache[key] = split_term(e, attack, lam, sigma, yb, yc));
        sum += t;
        sumsq += t * t;
    }
    double mean = sum / static_cast<double>(samples);
    double var = std::max(0.0, sumsq / static_cast<double>(samples) - mean * mean);
    res.value = mean;
    res.method = "monte-carlo";
    res.seed = seed;
    res.samples = samples;
    res.std_error = std::sqrt(var / static_cast<double>(samples));
    return res;
}

namespace {

// Measure-and-duplicate: every computational outcome is written out twice.
ChoiChannel duplicate_choi(int wires) {
    Eigen::Index din = Eigen::Index(1) << wires;
    Eigen::Index dout = din * din;
    Mat j = Mat::Zero(din * dout, din * dout);
    for (Eigen::Index m = 0; m < din; ++m) {
        Eigen::Index row = m * dout + (m * din + m);
        j(row, row) = 1.0;
    }
    return ChoiChannel{wires, 2 * wires, std::move(j)};
}

// Trace everything: the unique (wires, 0) channel.
ChoiChannel trace_all_choi(int wires) {
    Eigen::Index din = Eigen::Index(1) << wires;
    return ChoiChannel{wires, 0, Mat::Identity(din, din)};
}

// Uniformly random answer, challenge ignored.
ChoiChannel uniform_answer_choi(int in_wires, int out_wires) {
    Eigen::Index din = Eigen::Index(1) << in_wires;
    Eigen::Index dout = Eigen::Index(1) << out_wires;
    Mat eye_in = Mat::Identity(din, din);
    Mat mixed = Mat::Identity(dout, dout) / static_cast<double>(dout);
    return ChoiChannel{in_wires, out_wires, kron(eye_in, mixed)};
}

// Choi of rho -> sum_m <m| U rho U^dag |m> |f(m)><f(m)|: a unitary, a full
// computational measurement, then a classical relabeling of the outcome.
ChoiChannel measured_unitary_choi(const Mat& u, int in_wires, int out_wires,
                                  const std::function<std::uint64_t(std::uint64_t)>& f) {
    Eigen::Index din = u.rows();
    Eigen::Index dout = Eigen::Index(1) << out_wires;
    Mat j = Mat::Zero(din * dout, din * dout);
    for (Eigen::Index m = 0; m < din; ++m) {
        Eigen::Index fm = static_cast<Eigen::Index>(f(static_cast<std::uint64_t>(m)));
        for (Eigen::Index a = 0; a < din; ++a) {
            if (u(m, a) == cplx(0.0, 0.0)) continue;
            for (Eigen::Index b = 0; b < din; ++b)
                j(a * dout + fm, b * dout + fm) += u(m, a) * std::conj(u(m, b));
        }
    }
    return ChoiChannel{in_wires, out_wires, std::move(j)};
}

// Unitary of the per-qubit conjugate decode on [theta][y][advice]: a
// Hadamard lands on advice qubit i exactly when theta_i reads 1.
Mat conjugate_decode_unitary(int lam) {
    Eigen::Index dim = Eigen::Index(1) << (3 * lam);
    Mat u = Mat::Zero(dim, dim);
    double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (Eigen::Index col = 0; col < dim; ++col) {
        std::uint64_t theta = static_cast<std::uint64_t>(col) >> (2 * lam);
        std::uint64_t mid = (static_cast<std::uint64_t>(col) >> lam) & ((1ull << lam) - 1);
        std::uint64_t a = static_cast<std::uint64_t>(col) & ((1ull << lam) - 1);
        // free positions are the theta = 1 qubits of the advice block
        std::vector<int> free;
        for (int i = 0; i < lam; ++i)
            if (theta >> (lam - 1 - i) & 1) free.push_back(lam - 1 - i);  // bit position within a
        for (std::uint64_t m = 0; m < (1ull << free.size()); ++m) {
            std::uint64_t ap = a;
            double amp = 1.0;
            for (std::size_t t = 0; t < free.size(); ++t) {
                int pos = free[t];
                std::uint64_t bit = (m >> t) & 1;
                ap = (ap & ~(1ull << pos)) | (bit << pos);
                amp *= inv_sqrt2 * (((a >> pos & 1) & bit) ? -1.0 : 1.0);
            }
            Eigen::Index row = static_cast<Eigen::Index>((theta << (2 * lam)) | (mid << lam) | ap);
            u(row, col) = amp;
        }
    }
    return u;
}

int dot_indices(std::uint64_t a, std::uint64_t b) {
    return static_cast<int>(std::popcount(a & b) & 1);
}

}  // namespace

SplitAttack forward_to_bob_split(std::uint64_t lambda) {
    int lam = static_cast<int>(lambda);
    SplitAttack att;
    att.b_wires = lam;
    att.c_wires = 0;
    att.splitter = identity_channel(lam);
    std::uint64_t mask = (std::uint64_t{1} << lam) - 1;
    att.bob = measured_unitary_choi(conjugate_decode_unitary(lam), 3 * lam, 1,
                                    [lam, mask](std::uint64_t m) {
                                        std::uint64_t y = (m >> lam) & mask;
                                        std::uint64_t a = m & mask;
                                        return static_cast<std::uint64_t>(dot_indices(a, y));
                                    });
    att.charlie = uniform_answer_choi(2 * lam, 1);
    return att;
}

SplitAttack both_output_one_split(std::uint64_t lambda) {
    int lam = static_cast<int>(lambda);
    SplitAttack att;
    att.b_wires = 0;
    att.c_wires = 0;
    att.splitter = trace_all_choi(lam);
    auto one = [](const Bits&) { return Bits("1"); };
    att.bob = classical_function_channel(2 * lam, 1, one);
    att.charlie = classical_function_channel(2 * lam, 1, one);
    return att;
}

SplitAttack measure_and_share_split(std::uint64_t lambda) {
    int lam = static_cast<int>(lambda);
    SplitAttack att;
    att.b_wires = lam;
    att.c_wires = lam;
    att.splitter = duplicate_choi(lam);
    std::uint64_t l = lambda;
    att.bob = classical_function_channel(3 * lam, 1, [l](const Bits& s) {
        // [theta][y][m]: answer m . y, trusting the measured string as x
        return Bits(1, dot2(s.substr(2 * l), s.substr(l, l)) ? '1' : '0');
    });
    att.charlie = classical_function_channel(3 * lam, 1, [l](const Bits& s) {
        // [m][theta][y]
        return Bits(1, dot2(s.substr(0, l), s.substr(2 * l)) ? '1' : '0');
    });
    return att;
}

// --- copy-protection game ---------------------------------------------------

void CPScheme::validate() const {
    if (kappa < 0 || d < 0 || c < 1 || q < 0)
        throw std::invalid_argument("cp scheme: widths must be nonnegative (answers nonempty)");
    if (!generate) throw std::invalid_argument("cp scheme: missing generator");
    if (evaluate.input_wires != q + d)
        throw std::invalid_argument("cp scheme: evaluator must take program plus challenge");
    if (evaluate.output_wires() != c)
        throw std::invalid_argument("cp scheme: evaluator must emit the answer register");
}

namespace {

// Basis-state detector: a density matrix that is exactly |s><s| for some
// computational s unlocks the statevector path in cp_correctness.
std::optional<Bits> as_basis_bits(const DensityState& rho) {
    const Mat& m = rho.matrix();
    Eigen::Index hit = -1;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (std::abs(m(i, i) - 1.0) < 1e-12) {
            hit = i;
            break;
        }
    }
    if (hit < 0) return std::nullopt;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            double want = (i == hit && j == hit) ? 1.0 : 0.0;
            if (std::abs(m(i, j) - want) > 1e-12) return std::nullopt;
        }
    return index_to_bits(static_cast<std::uint64_t>(hit), rho.wires());
}

}  // namespace

double cp_correctness(const CPScheme& scheme, const KeyedMap& f, const SimLimits& limits) {
    scheme.validate();
    if (scheme.kappa + scheme.d > 16)
        throw resource_error("cp_correctness: exhaustive enumeration capped at kappa + d = 16");
    double worst = 0.0;
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << scheme.kappa); ++k) {
        Bits key = index_to_bits(k, scheme.kappa);
        DensityState program = scheme.generate(key);
        if (program.wires() != scheme.q)
            throw std::invalid_argument("cp_correctness: generator emitted the wrong register width");
        std::optional<Bits> basis = as_basis_bits(program);
        for (std::uint64_t xi = 0; xi < (std::uint64_t{1} << scheme.d); ++xi) {
            Bits x = index_to_bits(xi, scheme.d);
            std::optional<Bits> want = f(key, x);
            if (!want) continue;
            if (static_cast<int>(want->size()) != scheme.c)
                throw std::invalid_argument("cp_correctness: map value has the wrong width");
            double p;
            if (basis) {
                p = outcome_probability(scheme.evaluate, *basis + x, *want, limits);
            } else {
                Mat in = kron(program.matrix(), DensityState::basis(x).matrix());
                DensityState out = apply_circuit(
                    scheme.evaluate, DensityState(scheme.q + scheme.d, std::move(in)), limits);
                Eigen::Index idx = static_cast<Eigen::Index>(bits_to_index(*want));
                p = out.matrix()(idx, idx).real();
            }
            worst = std::max(worst, 1.0 - p);
        }
    }
    return worst;
}

CPDistribution uniform_triples(int kappa, int d) {
    if (kappa + 2 * d > 20) throw resource_error("uniform_triples: support enumeration too large");
    CPDistribution dist;
    double p = 1.0 / static_cast<double>(std::uint64_t{1} << (kappa + 2 * d));
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << kappa); ++k)
        for (std::uint64_t b = 0; b < (std::uint64_t{1} << d); ++b)
            for (std::uint64_t c = 0; c < (std::uint64_t{1} << d); ++c)
                dist.push_back({index_to_bits(k, kappa), index_to_bits(b, d), index_to_bits(c, d), p});
    return dist;
}

void CPAttack::validate(const CPScheme& scheme) const {
    if (q_b < 0 || q_c < 0) throw std::invalid_argument("cp attack: negative share width");
    if (splitter.in_wires != scheme.q || splitter.out_wires != q_b + q_c)
        throw std::invalid_argument("cp attack: splitter arity mismatch");
    if (bob.in_wires != scheme.d + q_b || bob.out_wires != scheme.c)
        throw std::invalid_argument("cp attack: guesser B arity mismatch");
    if (charlie.in_wires != q_c + scheme.d || charlie.out_wires != scheme.c)
        throw std::invalid_argument("cp attack: guesser C arity mismatch");
}

double cp_attack_value(const CPScheme& scheme, const KeyedMap& f, const CPDistribution& dist,
                       const CPAttack& attack, const SimLimits& limits) {
    scheme.validate();
    attack.validate(scheme);
    int stage1 = scheme.d + attack.q_b + attack.q_c;
    int stage2 = scheme.c + attack.q_c + scheme.d;
    if (std::max({stage1, stage2, 2 * scheme.c}) > limits.max_density_wires)
        throw resource_error("cp_attack_value: pipeline exceeds the density wire cap");

    // Splitter outputs per distinct key, shared across triples.
    std::unordered_map<std::uint64_t, Mat> sigma_by_key;
    double value = 0.0;
    for (const CPTriple& t : dist) {
        if (t.p < 0.0) throw std::invalid_argument("cp_attack_value: negative weight");
        if (static_cast<int>(t.key.size()) != scheme.kappa ||
            static_cast<int>(t.x_b.size()) != scheme.d || static_cast<int>(t.x_c.size()) != scheme.d)
            throw std::invalid_argument("cp_attack_value: triple width mismatch");
        std::optional<Bits> fb = f(t.key, t.x_b);
        std::optional<Bits> fc = f(t.key, t.x_c);
        if (!fb || !fc) continue;  // outside the map's domain: contributes nothing

        std::uint64_t ki = bits_to_index(t.key);
        auto it = sigma_by_key.find(ki);
        if (it == sigma_by_key.end()) {
            DensityState program = scheme.generate(t.key);
            if (program.wires() != scheme.q)
                throw std::invalid_argument("cp_attack_value: generator emitted the wrong register width");
            it = sigma_by_key.emplace(ki, channel_apply(attack.splitter, program.matrix())).first;
        }

        Mat st1 = kron(DensityState::basis(t.x_b).matrix(), it->second);
        Mat after_b = channel_apply_prefix(attack.bob, st1, stage1);
        Mat st2 = kron(after_b, DensityState::basis(t.x_c).matrix());
        std::vector<int> targets(static_cast<std::size_t>(attack.q_c + scheme.d));
        for (std::size_t i = 0; i < targets.size(); ++i)
            targets[i] = scheme.c + static_cast<int>(i);
        Mat after_c = channel_apply_to(attack.charlie, st2, stage2, targets);
        Eigen::Index idx = static_cast<Eigen::Index>(
            (bits_to_index(*fc) << scheme.c) | bits_to_index(*fb));
        value += t.p * after_c(idx, idx).real();
    }
    return value;
}

namespace {

// Reversible-enough classical compute: for every input assignment whose
// image has a 1 bit, detect the assignment with an AND cascade and CNOT it
// into the answer register. The detector wires are traced immediately, which
// dephases the input in the computational basis; harmless for a classical
// map, and it keeps the live wire count flat across assignments.
Circuit classical_circuit(int in, int out, const std::function<Bits(const Bits&)>& fn) {
    Circuit c;
    c.input_wires = in;
    std::vector<Gate> preps(static_cast<std::size_t>(out), g_prep());
    c.layer(std::move(preps));  // answer register at [in, in + out)
    int live = in + out;
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << in); ++v) {
        Bits s = index_to_bits(v, in);
        Bits image = fn(s);
        if (static_cast<int>(image.size()) != out)
            throw std::invalid_argument("classical_circuit: image width mismatch");
        if (all_zero(image)) continue;
        std::vector<Gate> flips;
        for (int w = 0; w < in; ++w)
            if (s[static_cast<std::size_t>(w)] == '0') flips.push_back(g_x(w));
        if (!flips.empty()) c.layer(flips);
        std::vector<int> inputs(static_cast<std::size_t>(in));
        for (int w = 0; w < in; ++w) inputs[static_cast<std::size_t>(w)] = w;
        int hit = append_and_chain(c, inputs, live);
        for (int j = 0; j < out; ++j)
            if (image[static_cast<std::size_t>(j)] == '1') c.then(g_cnot(hit, in + j));
        for (int w = hit; w >= live; --w) c.then(g_trace(w));
        if (!flips.empty()) c.layer(flips);
    }
    for (int w = in - 1; w >= 0; --w) c.then(g_trace(w));
    return c;
}

Bits map_or_zero(const KeyedMap& f, const Bits& key, const Bits& x, int c) {
    std::optional<Bits> r = f(key, x);
    return r ? *r : Bits(static_cast<std::size_t>(c), '0');
}

}  // namespace

CPScheme classical_copy_scheme(int kappa, int d, int c, const KeyedMap& f) {
    CPScheme scheme;
    scheme.kappa = kappa;
    scheme.d = d;
    scheme.c = c;
    scheme.q = kappa;
    scheme.generate = [](const Bits& key) { return DensityState::basis(key); };
    scheme.evaluate = classical_circuit(kappa + d, c, [f, kappa, c](const Bits& s) {
        return map_or_zero(f, s.substr(0, static_cast<std::size_t>(kappa)),
                           s.substr(static_cast<std::size_t>(kappa)), c);
    });
    return scheme;
}

KeyedMap promise_map(const PromiseSpec& spec, std::uint64_t lambda) {
    return [spec, lambda](const Bits& key, const Bits& x) -> std::optional<Bits> {
        if (!key.empty() || x.size() != 2 * lambda) return std::nullopt;
        switch (promise_membership(spec, x)) {
            case Membership::Yes: return Bits("1");
            case Membership::No: return Bits("0");
            default: return std::nullopt;
        }
    };
}

CPScheme point_scheme(const PromiseSpec& spec, std::uint64_t lambda) {
    if (lambda > spec.max_lambda() || 2 * lambda > 8)
        throw std::invalid_argument("point_scheme: lambda outside the supported range");
    CPScheme scheme;
    scheme.kappa = 0;
    scheme.d = static_cast<int>(2 * lambda);
    scheme.c = 1;
    scheme.q = static_cast<int>(lambda);
    PureState program = advice_state(spec, lambda);
    scheme.generate = [program](const Bits&) { return DensityState::from_pure(program); };
    scheme.evaluate = build_honest_circuit(static_cast<int>(2 * lambda));
    return scheme;
}

Circuit garbage_evaluator(int q, int d, int c) {
    Circuit circ;
    circ.input_wires = q + d;
    for (int w = q + d - 1; w >= 0; --w) circ.then(g_trace(w));
    std::vector<Gate> preps(static_cast<std::size_t>(c), g_prep());
    circ.layer(std::move(preps));
    return circ;
}

CPAttack duplicate_attack(int kappa, int d, int c, const KeyedMap& f) {
    CPAttack att;
    att.q_b = kappa;
    att.q_c = kappa;
    att.splitter = duplicate_choi(kappa);
    att.bob = classical_function_channel(d + kappa, c, [f, d, c](const Bits& s) {
        return map_or_zero(f, s.substr(static_cast<std::size_t>(d)),
                           s.substr(0, static_cast<std::size_t>(d)), c);
    });
    att.charlie = classical_function_channel(kappa + d, c, [f, kappa, c](const Bits& s) {
        return map_or_zero(f, s.substr(0, static_cast<std::size_t>(kappa)),
                           s.substr(static_cast<std::size_t>(kappa)), c);
    });
    return att;
}

namespace {

// In-place wire permutation: after the appended gates, position i carries
// what position perm[i] carried before (each transposition is three CNOTs).
void append_rewire_perm(Circuit& c, const std::vector<int>& perm) {
    int n = static_cast<int>(perm.size());
    std::vector<int> cur(static_cast<std::size_t>(n));   // cur[pos] = original wire now at pos
    std::vector<int> where(static_cast<std::size_t>(n)); // where[orig] = its current position
    for (int i = 0; i < n; ++i) cur[static_cast<std::size_t>(i)] = where[static_cast<std::size_t>(i)] = i;
    for (int pos = 0; pos < n; ++pos) {
        int want = perm[static_cast<std::size_t>(pos)];
        int src = where[static_cast<std::size_t>(want)];
        if (src == pos) continue;
        c.then(g_cnot(pos, src));
        c.then(g_cnot(src, pos));
        c.then(g_cnot(pos, src));
        std::swap(where[static_cast<std::size_t>(cur[static_cast<std::size_t>(pos)])],
                  where[static_cast<std::size_t>(cur[static_cast<std::size_t>(src)])]);
        std::swap(cur[static_cast<std::size_t>(pos)], cur[static_cast<std::size_t>(src)]);
    }
}

}  // namespace

CPAttack trivial_attack(const CPScheme& scheme, const SimLimits& limits) {
    scheme.validate();
    CPAttack att;
    att.q_b = scheme.q;
    att.q_c = 0;
    att.splitter = identity_channel(scheme.q);
    // B sees [challenge][program]; the scheme evaluator wants them swapped.
    Circuit bob;
    bob.input_wires = scheme.d + scheme.q;
    std::vector<int> perm;
    for (int i = 0; i < scheme.q; ++i) perm.push_back(scheme.d + i);
    for (int i = 0; i < scheme.d; ++i) perm.push_back(i);
    append_rewire_perm(bob, perm);
    for (const auto& layer : scheme.evaluate.layers) bob.layers.push_back(layer);
    att.bob = circuit_choi(bob, limits);
    att.charlie = uniform_answer_choi(scheme.d, scheme.c);
    return att;
}

// --- the derived two-sided language ----------------------------------------

int language_membership(const LanguageSpec& lang, const Bits& w) {
    require_bits(w, "language_membership word");
    std::uint64_t n = w.size();
    int dn = lang.d(n), cn = lang.c(n);
    if (dn < 0 || cn < 0) throw std::invalid_argument("language_membership: negative width");
    if (n <= static_cast<std::uint64_t>(dn) + static_cast<std::uint64_t>(cn)) return parity(w);
    Bits x = w.substr(0, static_cast<std::size_t>(dn));
    Bits y = w.substr(static_cast<std::size_t>(dn), static_cast<std::size_t>(cn));
    Bits z = w.substr(static_cast<std::size_t>(dn + cn));
    Bits gx = lang.g(n, x);
    if (static_cast<int>(gx.size()) != cn)
        throw std::invalid_argument("language_membership: g image width mismatch");
    return dot2(gx, y) ^ parity(z);
}

std::pair<std::uint64_t, std::uint64_t> balance_count(const LanguageSpec& lang, int n) {
    if (n < 0) throw std::invalid_argument("balance_count: negative length");
    if (n > 20) throw resource_error("balance_count: exhaustive count capped at n = 20");
    std::uint64_t un = static_cast<std::uint64_t>(n);
    int dn = lang.d(un), cn = lang.c(un);
    std::uint64_t yes = 0, total = std::uint64_t{1} << n;
    if (un <= static_cast<std::uint64_t>(dn) + static_cast<std::uint64_t>(cn)) {
        for (std::uint64_t v = 0; v < total; ++v) yes += std::popcount(v) & 1;
        return {total - yes, yes};
    }
    int zn = n - dn - cn;
    std::vector<std::int64_t> memo(std::size_t{1} << dn, -1);
    for (std::uint64_t v = 0; v < total; ++v) {
        std::uint64_t xi = v >> (cn + zn);
        std::uint64_t yi = (v >> zn) & ((std::uint64_t{1} << cn) - 1);
        std::uint64_t zi = v & ((std::uint64_t{1} << zn) - 1);
        std::int64_t& g = memo[xi];
        if (g < 0) g = static_cast<std::int64_t>(bits_to_index(lang.g(un, index_to_bits(xi, dn))));
        yes += (std::popcount(static_cast<std::uint64_t>(g) & yi) ^ std::popcount(zi)) & 1;
    }
    return {total - yes, yes};
}

LanguageSpec prf_language(const Bits& key, int d, int c) {
    LanguageSpec lang;
    lang.d = [d](std::uint64_t) { return d; };
    lang.c = [c](std::uint64_t) { return c; };
    lang.g = [key, d, c](std::uint64_t, const Bits& x) { return toy_prf(key, x, {d, c}); };
    return lang;
}

// --- slowdown maps -----------------------------------------------------------

namespace {

constexpr unsigned __int128 kSaturated = static_cast<unsigned __int128>(-1);

// a^e with saturation; exponents stay small (<= 32) by construction.
unsigned __int128 pow_sat(unsigned __int128 a, unsigned e) {
    unsigned __int128 r = 1;
    for (unsigned i = 0; i < e; ++i) {
        if (a != 0 && r > kSaturated / a) return kSaturated;
        r *= a;
    }
    return r;
}

}  // namespace

void SlowdownMap::validate() const {
    if (degree < 1 || degree > 4) throw std::invalid_argument("slowdown map: degree must be in [1, 4]");
    if (scale < 1) throw std::invalid_argument("slowdown map: scale must be positive");
}

std::uint64_t SlowdownMap::threshold() const {
    validate();
    // least n with n^degree >= scale * onset^(2 * degree^2)
    unsigned __int128 rhs = pow_sat(onset, static_cast<unsigned>(2 * degree * degree));
    if (rhs != 0 && rhs > kSaturated / scale) return UINT64_MAX;
    rhs *= scale;
    std::uint64_t lo = 0, hi = UINT64_MAX;
    while (lo < hi) {
        std::uint64_t mid = lo + (hi - lo) / 2;
        if (pow_sat(mid, static_cast<unsigned>(degree)) >= rhs)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

std::uint64_t SlowdownMap::operator()(std::uint64_t n) const {
    validate();
    if (n < threshold()) return 0;
    // largest m with scale^2 * m^(2 * degree) <= n
    unsigned __int128 s2 = static_cast<unsigned __int128>(scale) * scale;
    std::uint64_t lo = 0, hi = n + 1;
    while (lo + 1 < hi) {
        std::uint64_t mid = lo + (hi - lo) / 2;
        unsigned __int128 v = pow_sat(mid, static_cast<unsigned>(2 * degree));
        bool fits = v != kSaturated && (v == 0 || v <= kSaturated / s2) && v * s2 <= n;
        if (fits)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

std::vector<std::uint64_t> slowdown_preimage(const SlowdownMap& f, std::uint64_t lambda) {
    f.validate();
    unsigned __int128 s2 = static_cast<unsigned __int128>(f.scale) * f.scale;
    unsigned __int128 upper = pow_sat(lambda + 1, static_cast<unsigned>(2 * f.degree));
    if (upper != kSaturated && upper <= kSaturated / s2) upper *= s2;
    else upper = kSaturated;
    std::uint64_t thr = f.threshold();
    unsigned __int128 bound = std::max<unsigned __int128>(upper, thr);
    std::uint64_t start = 0;
    if (lambda > 0) {
        unsigned __int128 low = pow_sat(lambda, static_cast<unsigned>(2 * f.degree));
        if (low != kSaturated && low <= kSaturated / s2) low *= s2;
        else low = kSaturated;
        start = static_cast<std::uint64_t>(std::min<unsigned __int128>(
            std::max<unsigned __int128>(low, thr), kSaturated));
    }
    if (bound - start > (std::uint64_t{1} << 24))
        throw resource_error("slowdown_preimage: candidate window too large to scan");
    std::vector<std::uint64_t> hits;
    for (std::uint64_t n = start; static_cast<unsigned __int128>(n) < bound; ++n)
        if (f(n) == lambda) hits.push_back(n);
    return hits;
}

// --- toy keyed map ------------------------------------------------------------

Bits toy_prf(const Bits& key, const Bits& x, const ToyPrfParams& p) {
    require_bits(key, "toy_prf key");
    require_bits(x, "toy_prf input");
    if (p.d < 0 || p.d > 64 || p.c < 1 || p.c > 64)
        throw std::invalid_argument("toy_prf: widths must fit one machine word");
    if (static_cast<int>(x.size()) != p.d) throw std::invalid_argument("toy_prf: input length mismatch");
    std::uint64_t s = fnv1a(key);
    std::uint64_t rk[4];
    for (int i = 0; i < 4; ++i) rk[i] = splitmix(s += 0x9e3779b97f4a7c15ull);
    std::uint64_t v = bits_to_index(x);
    std::uint32_t l = static_cast<std::uint32_t>(v >> 32);
    std::uint32_t r = static_cast<std::uint32_t>(v);
    for (int i = 0; i < 4; ++i) {
        std::uint32_t mixed = static_cast<std::uint32_t>(splitmix(r ^ rk[i]));
        std::uint32_t nl = r;
        r = l ^ mixed;
        l = nl;
    }
    std::uint64_t z = (static_cast<std::uint64_t>(l) << 32) | r;
    return index_to_bits(z, p.c);
}

}  // namespace quclone
