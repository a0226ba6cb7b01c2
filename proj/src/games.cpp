#include "quclone/games.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

namespace quclone {

namespace {

constexpr double kBreidbartCos = 0.92387953251128674;  // cos(pi/8)
constexpr double kBreidbartSin = 0.38268343236508978;  // sin(pi/8)

Vec basis_vec(std::uint64_t index, int wires) {
    Vec v = Vec::Zero(std::int64_t{1} << wires);
    v(static_cast<std::int64_t>(index)) = 1.0;
    return v;
}

// Kahan-compensated mean over 4^n (x, theta) game terms.
template <typename TermFn>
double exact_game_average(int n, TermFn&& term) {
    double sum = 0.0, comp = 0.0;
    const std::uint64_t side = std::uint64_t{1} << n;
    for (std::uint64_t x = 0; x < side; ++x) {
        for (std::uint64_t th = 0; th < side; ++th) {
            const double y = term(index_to_bits(x, n), index_to_bits(th, n)) - comp;
            const double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
    }
    return sum / static_cast<double>(side * side);
}

template <typename TermFn>
GameValueReport mc_game_average(int n, std::uint64_t seed, std::uint64_t samples,
                                double bound, TermFn&& term) {
    std::mt19937_64 rng(seed);
    const std::uint64_t side = std::uint64_t{1} << n;
    std::map<std::pair<std::uint64_t, std::uint64_t>, double> cache;
    double sum = 0.0, sumsq = 0.0;
    for (std::uint64_t s = 0; s < samples; ++s) {
        const std::uint64_t x = rng() % side;
        const std::uint64_t th = rng() % side;
        auto it = cache.find({x, th});
        if (it == cache.end())
            it = cache.emplace(std::make_pair(x, th),
                               term(index_to_bits(x, n), index_to_bits(th, n)))
                     .first;
        sum += it->second;
        sumsq += it->second * it->second;
    }
    GameValueReport r;
    r.method = "monte-carlo";
    r.seed = seed;
    r.samples = samples;
    r.value = sum / static_cast<double>(samples);
    const double var =
        std::max(0.0, sumsq / static_cast<double>(samples) - r.value * r.value);
    r.std_error = std::sqrt(var / static_cast<double>(samples));
    r.bound = bound;
    r.margin = bound - r.value;
    return r;
}

}  // namespace

void MoEStrategy::validate(int n) const {
    if (b_wires < 0 || c_wires < 0)
        throw std::invalid_argument("MoEStrategy: negative register width");
    if (splitter.in_wires != n || splitter.out_wires != b_wires + c_wires)
        throw std::invalid_argument("MoEStrategy: splitter arity mismatch");
    if (bob.in_wires != n + b_wires || bob.out_wires != n)
        throw std::invalid_argument("MoEStrategy: first guesser arity mismatch");
    if (charlie.in_wires != c_wires + n || charlie.out_wires != n)
        throw std::invalid_argument("MoEStrategy: second guesser arity mismatch");
    splitter.validate();
    bob.validate();
    charlie.validate();
}

nlohmann::json report_to_json(const GameValueReport& r) {
    nlohmann::json j;
    j["value"] = r.value;
    j["bound"] = r.bound;
    j["margin"] = r.margin;
    j["method"] = r.method;
    j["converged"] = r.converged;
    if (r.method == "sdp" || r.method == "see-saw") {
        j["iterations"] = r.iterations;
        j["feasibility"] = {{"psd", r.feas_psd}, {"trace_preserving", r.feas_tp}};
    }
    if (r.method == "see-saw" || r.method == "monte-carlo") j["seed"] = r.seed;
    if (r.method == "monte-carlo") {
        j["std_error"] = r.std_error;
        j["samples"] = r.samples;
    }
    return j;
}

double cloning_bound(int n) { return std::pow(0.75, n); }
double moe_bound(int n) { return std::pow(0.5 + 0.5 / std::sqrt(2.0), n); }

namespace {

double cloning_term(const CloningAttack& attack, const Bits& x, const Bits& th,
                    const SimLimits& limits) {
    (void)limits;
    const PureState code = wiesner_encode(x, th);
    const Mat out = channel_apply(attack.channel, code.density());
    const Vec twin = code.tensor(code).amplitudes();
    return (twin.adjoint() * out * twin)(0, 0).real();
}

}  // namespace

double eval_cloning(const CloningAttack& attack, int n, const SimLimits& limits) {
    if (n < 0) throw std::invalid_argument("eval_cloning: negative n");
    if (n > 3) throw resource_error("eval_cloning: exact path handles n <= 3 only");
    if (attack.channel.in_wires != n || attack.channel.out_wires != 2 * n)
        throw std::invalid_argument("eval_cloning: attack must map n to 2n qubits");
    return exact_game_average(
        n, [&](const Bits& x, const Bits& th) { return cloning_term(attack, x, th, limits); });
}

GameValueReport eval_cloning_mc(const CloningAttack& attack, int n, std::uint64_t seed,
                                std::uint64_t samples, const SimLimits& limits) {
    if (attack.channel.in_wires != n || attack.channel.out_wires != 2 * n)
        throw std::invalid_argument("eval_cloning_mc: attack must map n to 2n qubits");
    return mc_game_average(n, seed, samples, cloning_bound(n),
                           [&](const Bits& x, const Bits& th) {
                               return cloning_term(attack, x, th, limits);
                           });
}

CloningAttack measure_duplicate_attack(int n) {
    const std::int64_t din = std::int64_t{1} << n;
    KrausChannel kc;
    kc.in_wires = n;
    kc.out_wires = 2 * n;
    for (std::int64_t b = 0; b < din; ++b) {
        Mat k = Mat::Zero(din * din, din);
        k(b * din + b, b) = 1.0;
        kc.ops.push_back(std::move(k));
    }
    return CloningAttack{choi_of(kc)};
}

CloningAttack keep_append_attack(int n) {
    const std::int64_t din = std::int64_t{1} << n;
    Mat k = Mat::Zero(din * din, din);
    for (std::int64_t i = 0; i < din; ++i) k(i * din, i) = 1.0;
    KrausChannel kc{n, 2 * n, {std::move(k)}};
    return CloningAttack{choi_of(kc)};
}

GameValueReport optimal_cloning_sdp(int n, double tol, int max_iters) {
    if (n < 1 || n > 2)
        throw std::invalid_argument("optimal_cloning_sdp: n must be 1 or 2");
    const int d_in = 1 << n;
    const int d_out = 1 << (2 * n);
    Mat m = Mat::Zero(std::int64_t{d_in} * d_out, std::int64_t{d_in} * d_out);
    const std::uint64_t side = std::uint64_t{1} << n;
    for (std::uint64_t x = 0; x < side; ++x) {
        for (std::uint64_t th = 0; th < side; ++th) {
            const PureState code = wiesner_encode(index_to_bits(x, n), index_to_bits(th, n));
            const Mat rho_t = code.density().transpose();
            const Vec twin = code.tensor(code).amplitudes();
            m += kron(rho_t, Mat(twin * twin.adjoint()));
        }
    }
    m /= static_cast<double>(side * side);

    ChoiSdpOptions opt;
    opt.tol = tol;
    opt.max_iters = max_iters;
    const ChoiSdpResult sol =
        maximize_choi_objective(m, d_in, d_out, measure_duplicate_attack(n).channel.j, opt);

    GameValueReport r;
    r.method = "sdp";
    r.value = sol.objective;
    r.bound = cloning_bound(n);
    r.margin = r.bound - r.value;
    r.iterations = sol.iterations;
    r.converged = sol.converged && sol.monotone;
    r.feas_psd = sol.feas_psd;
    r.feas_tp = sol.feas_tp;
    return r;
}

namespace {

double moe_term(const MoEStrategy& s, int n, const Bits& x, const Bits& th,
                const SimLimits& limits) {
    (void)limits;
    const PureState code = wiesner_encode(x, th);
    const Mat split = channel_apply(s.splitter, code.density());
    const Mat theta_proj =
        basis_vec(bits_to_index(th), n) * basis_vec(bits_to_index(th), n).adjoint();
    // wires: [theta for Bob | b | c | theta for Charlie]
    Mat state = kron(kron(theta_proj, split), theta_proj);
    const int total = n + s.b_wires + s.c_wires + n;
    state = channel_apply_prefix(s.bob, state, total);
    // now [bob answer | c | theta], apply Charlie to everything after the answer
    const int mid = s.c_wires + n;
    std::vector<int> targets(static_cast<std::size_t>(mid));
    for (int i = 0; i < mid; ++i) targets[static_cast<std::size_t>(i)] = n + i;
    state = channel_apply_to(s.charlie, state, n + mid, targets);
    // now [charlie answer | bob answer]
    const std::uint64_t xi = bits_to_index(x);
    const std::uint64_t idx = (xi << n) | xi;
    return state(static_cast<std::int64_t>(idx), static_cast<std::int64_t>(idx)).real();
}

}  // namespace

double eval_moe(const MoEStrategy& strategy, int n, const SimLimits& limits) {
    if (n < 0) throw std::invalid_argument("eval_moe: negative n");
    if (n > 2) throw resource_error("eval_moe: exact path handles n <= 2 only");
    strategy.validate(n);
    return exact_game_average(
        n, [&](const Bits& x, const Bits& th) { return moe_term(strategy, n, x, th, limits); });
}

GameValueReport eval_moe_mc(const MoEStrategy& strategy, int n, std::uint64_t seed,
                            std::uint64_t samples, const SimLimits& limits) {
    strategy.validate(n);
    return mc_game_average(n, seed, samples, moe_bound(n),
                           [&](const Bits& x, const Bits& th) {
                               return moe_term(strategy, n, x, th, limits);
                           });
}

MoEStrategy breidbart_strategy(int n) {
    const std::int64_t d = std::int64_t{1} << n;
    MoEStrategy s;
    s.b_wires = n;
    s.c_wires = n;

    // split: measure each qubit in the intermediate basis, broadcast outcomes
    KrausChannel split;
    split.in_wires = n;
    split.out_wires = 2 * n;
    for (std::int64_t b = 0; b < d; ++b) {
        Eigen::RowVectorXcd bra = Eigen::RowVectorXcd::Ones(1);
        for (int i = 0; i < n; ++i) {
            Eigen::RowVectorXcd one(2);
            const bool bit = (b >> (n - 1 - i)) & 1;
            if (!bit)
                one << kBreidbartCos, kBreidbartSin;
            else
                one << -kBreidbartSin, kBreidbartCos;
            Eigen::RowVectorXcd next(bra.cols() * 2);
            for (long j = 0; j < bra.cols(); ++j) {
                next(2 * j) = bra(j) * one(0);
                next(2 * j + 1) = bra(j) * one(1);
            }
            bra = std::move(next);
        }
        Mat k = Mat::Zero(d * d, d);
        k.row(b * d + b) = bra;
        split.ops.push_back(std::move(k));
    }
    s.splitter = choi_of(split);

    // guessers: drop the basis register, answer with the broadcast copy
    KrausChannel bob;
    bob.in_wires = 2 * n;
    bob.out_wires = n;
    for (std::int64_t t = 0; t < d; ++t) {
        Mat k = Mat::Zero(d, d * d);
        for (std::int64_t j = 0; j < d; ++j) k(j, t * d + j) = 1.0;
        bob.ops.push_back(std::move(k));
    }
    s.bob = choi_of(bob);

    KrausChannel charlie;
    charlie.in_wires = 2 * n;
    charlie.out_wires = n;
    for (std::int64_t t = 0; t < d; ++t) {
        Mat k = Mat::Zero(d, d * d);
        for (std::int64_t j = 0; j < d; ++j) k(j, j * d + t) = 1.0;
        charlie.ops.push_back(std::move(k));
    }
    s.charlie = choi_of(charlie);
    return s;
}

MoEStrategy forward_to_bob_strategy(int n) {
    const std::int64_t d = std::int64_t{1} << n;
    MoEStrategy s;
    s.b_wires = n;
    s.c_wires = n;

    // splitter: state to Bob's side, zeros to Charlie's
    s.splitter = keep_append_attack(n).channel;

    // Bob decodes in the announced basis
    KrausChannel bob;
    bob.in_wires = 2 * n;
    bob.out_wires = n;
    for (std::int64_t th = 0; th < d; ++th) {
        for (std::int64_t x = 0; x < d; ++x) {
            const PureState code =
                wiesner_encode(index_to_bits(static_cast<std::uint64_t>(x), n),
                               index_to_bits(static_cast<std::uint64_t>(th), n));
            Mat k = Mat::Zero(d, d * d);
            for (std::int64_t j = 0; j < d; ++j)
                k(x, th * d + j) = std::conj(code.amplitudes()(j));
            bob.ops.push_back(std::move(k));
        }
    }
    s.bob = choi_of(bob);

    // Charlie ignores everything and answers all zeros
    KrausChannel charlie;
    charlie.in_wires = 2 * n;
    charlie.out_wires = n;
    for (std::int64_t j = 0; j < d * d; ++j) {
        Mat k = Mat::Zero(d, d * d);
        k(0, j) = 1.0;
        charlie.ops.push_back(std::move(k));
    }
    s.charlie = choi_of(charlie);
    return s;
}

namespace {

// One see-saw state at n = 1: the splitter's Choi and per-basis
// two-outcome measurements for each guesser.
struct SeeSawState {
    Mat j_a;       // 8x8
    Mat b_meas[2];  // B_theta^0; B_theta^1 = I - it
    Mat c_meas[2];
    double feas_psd = 0, feas_tp = 0;
};

Mat positive_part_projector(const Mat& h) {
    Eigen::SelfAdjointEigenSolver<Mat> es((h + h.adjoint()) / 2.0);
    Mat p = Mat::Zero(h.rows(), h.cols());
    for (long i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > 0)
            p += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    return p;
}

double see_saw_value(const SeeSawState& st) {
    double total = 0;
    for (int xv = 0; xv < 2; ++xv) {
        for (int tv = 0; tv < 2; ++tv) {
            const PureState code = wiesner_encode(Bits(1, char('0' + xv)), Bits(1, char('0' + tv)));
            const ChoiChannel a{1, 2, st.j_a};
            const Mat sigma = channel_apply(a, code.density());
            const Mat bx = xv ? Mat(Mat::Identity(2, 2) - st.b_meas[tv]) : st.b_meas[tv];
            const Mat cx = xv ? Mat(Mat::Identity(2, 2) - st.c_meas[tv]) : st.c_meas[tv];
            total += (sigma * kron(bx, cx)).trace().real();
        }
    }
    return total / 4.0;
}

void see_saw_a_step(SeeSawState& st, const ChoiSdpOptions& opt) {
    Mat m = Mat::Zero(8, 8);
    for (int xv = 0; xv < 2; ++xv) {
        for (int tv = 0; tv < 2; ++tv) {
            const PureState code = wiesner_encode(Bits(1, char('0' + xv)), Bits(1, char('0' + tv)));
            const Mat bx = xv ? Mat(Mat::Identity(2, 2) - st.b_meas[tv]) : st.b_meas[tv];
            const Mat cx = xv ? Mat(Mat::Identity(2, 2) - st.c_meas[tv]) : st.c_meas[tv];
            m += kron(code.density().transpose(), kron(bx, cx));
        }
    }
    m /= 4.0;
    const ChoiSdpResult sol = maximize_choi_objective(m, 2, 4, st.j_a, opt);
    st.j_a = sol.j;
    st.feas_psd = sol.feas_psd;
    st.feas_tp = sol.feas_tp;
}

void see_saw_measure_step(SeeSawState& st, bool update_b) {
    for (int tv = 0; tv < 2; ++tv) {
        Mat diff = Mat::Zero(2, 2);
        for (int xv = 0; xv < 2; ++xv) {
            const PureState code = wiesner_encode(Bits(1, char('0' + xv)), Bits(1, char('0' + tv)));
            const ChoiChannel a{1, 2, st.j_a};
            const Mat sigma = channel_apply(a, code.density());
            Mat eff;
            if (update_b) {
                const Mat cx = xv ? Mat(Mat::Identity(2, 2) - st.c_meas[tv]) : st.c_meas[tv];
                eff = partial_trace_qubits(sigma * kron(Mat::Identity(2, 2), cx), 2, {1});
            } else {
                const Mat bx = xv ? Mat(Mat::Identity(2, 2) - st.b_meas[tv]) : st.b_meas[tv];
                eff = partial_trace_qubits(sigma * kron(bx, Mat::Identity(2, 2)), 2, {0});
            }
            diff += (xv == 0) ? eff : Mat(-eff);
        }
        // choosing the outcome-0 effect as the positive part of the
        // difference maximizes Tr[M0 F0] + Tr[(I-M0) F1]
        if (update_b)
            st.b_meas[tv] = positive_part_projector(diff);
        else
            st.c_meas[tv] = positive_part_projector(diff);
    }
}

SeeSawState see_saw_init(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    SeeSawState st;
    st.j_a = Mat::Identity(8, 8) / 4.0;  // fully depolarizing splitter
    for (int tv = 0; tv < 2; ++tv) {
        const PureState vb = random_pure_state(1, rng);
        const PureState vc = random_pure_state(1, rng);
        st.b_meas[tv] = vb.amplitudes() * vb.amplitudes().adjoint();
        st.c_meas[tv] = vc.amplitudes() * vc.amplitudes().adjoint();
    }
    return st;
}

}  // namespace

std::vector<double> see_saw_moe_trace(std::uint64_t seed, int rounds) {
    SeeSawState st = see_saw_init(seed);
    ChoiSdpOptions opt;
    opt.max_iters = 800;
    opt.patience = 25;
    std::vector<double> values;
    for (int r = 0; r < rounds; ++r) {
        see_saw_a_step(st, opt);
        see_saw_measure_step(st, true);
        see_saw_measure_step(st, false);
        values.push_back(see_saw_value(st));
    }
    return values;
}

GameValueReport see_saw_moe(std::uint64_t seed, int rounds, int seeds) {
    GameValueReport best;
    best.method = "see-saw";
    best.bound = moe_bound(1);
    best.value = -1.0;
    for (int i = 0; i < seeds; ++i) {
        const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
        SeeSawState st = see_saw_init(s);
        ChoiSdpOptions opt;
        opt.max_iters = 800;
        opt.patience = 25;
        double last = -1.0;
        for (int r = 0; r < rounds; ++r) {
            see_saw_a_step(st, opt);
            see_saw_measure_step(st, true);
            see_saw_measure_step(st, false);
            last = see_saw_value(st);
        }
        if (last > best.value) {
            best.value = last;
            best.seed = s;
            best.iterations = rounds;
            best.feas_psd = st.feas_psd;
            best.feas_tp = st.feas_tp;
        }
    }
    best.margin = best.bound - best.value;
    return best;
}

namespace {

// Appends a sub-circuit acting on the trailing wire block starting at
// `base`. Preconditions: the host currently has exactly base +
// sub.input_wires wires, so the sub-circuit's preps and traces keep
// lining up with the host's numbering.
void embed_circuit(Circuit& host, const Circuit& sub, int base) {
    for (const auto& layer : sub.layers) {
        std::vector<Gate> shifted;
        shifted.reserve(layer.size());
        for (const Gate& g : layer) {
            Gate s = g;
            for (int& w : s.wires) w += base;
            shifted.push_back(std::move(s));
        }
        host.layers.push_back(std::move(shifted));
    }
}

void append_wire_swap(Circuit& c, int a, int b) {
    c.then(g_cnot(a, b));
    c.then(g_cnot(b, a));
    c.then(g_cnot(a, b));
}

// Rearranges live wires so that new position i holds what old wire
// perm[i] held.
void append_rewire(Circuit& c, const std::vector<int>& perm) {
    const int total = static_cast<int>(perm.size());
    std::vector<int> cur(perm.size());   // cur[pos] = old wire currently at pos
    std::vector<int> where(perm.size());  // where[old] = current position
    for (int i = 0; i < total; ++i) {
        cur[static_cast<std::size_t>(i)] = i;
        where[static_cast<std::size_t>(i)] = i;
    }
    for (int i = 0; i < total; ++i) {
        const int want = perm[static_cast<std::size_t>(i)];
        const int at = where[static_cast<std::size_t>(want)];
        if (at == i) continue;
        append_wire_swap(c, i, at);
        std::swap(cur[static_cast<std::size_t>(i)], cur[static_cast<std::size_t>(at)]);
        where[static_cast<std::size_t>(cur[static_cast<std::size_t>(i)])] = i;
        where[static_cast<std::size_t>(cur[static_cast<std::size_t>(at)])] = at;
    }
}

void trace_all_but_last(Circuit& c, int live) {
    for (int q = live - 2; q >= 0; --q) c.then(g_trace(q));
}

}  // namespace

Circuit build_money_wrapper(const Circuit& attack, int n) {
    if (n < 0) throw std::invalid_argument("build_money_wrapper: negative n");
    if (attack.input_wires != n || attack.output_wires() != 2 * n)
        throw std::invalid_argument("build_money_wrapper: attack must be an (n, 2n)-circuit");

    Circuit w;
    w.input_wires = 2 * n;  // x then theta
    for (int i = 0; i < n; ++i) w.then(g_prep());
    for (int i = 0; i < n; ++i) w.then(g_cnot(i, 2 * n + i));
    for (int i = 0; i < n; ++i) append_controlled_h(w, n + i, 2 * n + i);

    embed_circuit(w, attack, 2 * n);

    // decode both halves in the basis register, compare against x
    for (int i = 0; i < n; ++i) append_controlled_h(w, n + i, 2 * n + i);
    for (int i = 0; i < n; ++i) append_controlled_h(w, n + i, 3 * n + i);
    for (int i = 0; i < n; ++i) w.then(g_cnot(i, 2 * n + i));
    for (int i = 0; i < n; ++i) w.then(g_cnot(i, 3 * n + i));
    for (int i = 0; i < 2 * n; ++i) w.then(g_x(2 * n + i));

    std::vector<int> compare;
    for (int i = 0; i < 2 * n; ++i) compare.push_back(2 * n + i);
    const int live = 4 * n;
    const int res = append_and_chain(w, compare, live);
    trace_all_but_last(w, res + 1);
    return w;
}

Circuit build_tfkw_wrapper(const Circuit& a, const Circuit& b, const Circuit& c,
                           int b_wires, int c_wires, int lambda) {
    if (lambda < 0) throw std::invalid_argument("build_tfkw_wrapper: negative lambda");
    if (a.input_wires != lambda || a.output_wires() != b_wires + c_wires)
        throw std::invalid_argument("build_tfkw_wrapper: splitter arity mismatch");
    if (b.input_wires != lambda + b_wires || b.output_wires() != lambda)
        throw std::invalid_argument("build_tfkw_wrapper: first guesser arity mismatch");
    if (c.input_wires != c_wires + lambda || c.output_wires() != lambda)
        throw std::invalid_argument("build_tfkw_wrapper: second guesser arity mismatch");

    Circuit w;
    w.input_wires = 2 * lambda;  // x then theta

    // copy of theta for the second guesser
    for (int i = 0; i < lambda; ++i) w.then(g_prep());
    for (int i = 0; i < lambda; ++i) w.then(g_cnot(lambda + i, 2 * lambda + i));

    // code word
    for (int i = 0; i < lambda; ++i) w.then(g_prep());
    for (int i = 0; i < lambda; ++i) w.then(g_cnot(i, 3 * lambda + i));
    for (int i = 0; i < lambda; ++i) append_controlled_h(w, lambda + i, 3 * lambda + i);

    // split: layout becomes [x, theta, theta', bA, cA]
    embed_circuit(w, a, 3 * lambda);

    // first guesser consumes (theta', bA); park cA below them
    {
        std::vector<int> perm;
        for (int i = 0; i < 2 * lambda; ++i) perm.push_back(i);             // x, theta
        for (int i = 0; i < c_wires; ++i) perm.push_back(3 * lambda + b_wires + i);  // cA
        for (int i = 0; i < lambda; ++i) perm.push_back(2 * lambda + i);    // theta'
        for (int i = 0; i < b_wires; ++i) perm.push_back(3 * lambda + i);   // bA
        append_rewire(w, perm);
    }
    embed_circuit(w, b, 2 * lambda + c_wires);

    // layout now [x, theta, cA, ansB]; second guesser consumes (cA, theta)
    {
        std::vector<int> perm;
        for (int i = 0; i < lambda; ++i) perm.push_back(i);                          // x
        for (int i = 0; i < lambda; ++i) perm.push_back(2 * lambda + c_wires + i);   // ansB
        for (int i = 0; i < c_wires; ++i) perm.push_back(2 * lambda + i);            // cA
        for (int i = 0; i < lambda; ++i) perm.push_back(lambda + i);                 // theta
        append_rewire(w, perm);
    }
    embed_circuit(w, c, 2 * lambda);

    // layout [x, ansB, ansC]: compare both answers against x
    for (int i = 0; i < lambda; ++i) w.then(g_cnot(i, lambda + i));
    for (int i = 0; i < lambda; ++i) w.then(g_cnot(i, 2 * lambda + i));
    for (int i = 0; i < 2 * lambda; ++i) w.then(g_x(lambda + i));

    std::vector<int> compare;
    for (int i = 0; i < 2 * lambda; ++i) compare.push_back(lambda + i);
    const int res = append_and_chain(w, compare, 3 * lambda);
    trace_all_but_last(w, res + 1);
    return w;
}

MoECircuits breidbart_circuits() {
    MoECircuits mc;
    mc.b_wires = 1;
    mc.c_wires = 1;
    mc.a.input_wires = 1;
    append_ry45_inv(mc.a, 0);
    mc.a.then(g_prep());
    mc.a.then(g_cnot(0, 1));
    mc.b.input_wires = 2;  // (theta, answer copy): keep the copy
    mc.b.then(g_trace(0));
    mc.c.input_wires = 2;  // (answer copy, theta): keep the copy
    mc.c.then(g_trace(1));
    return mc;
}

MoECircuits forward_to_bob_circuits() {
    MoECircuits mc;
    mc.b_wires = 1;
    mc.c_wires = 1;
    mc.a.input_wires = 1;  // state straight through, a zero for the other side
    mc.a.then(g_prep());
    mc.b.input_wires = 2;  // (theta, state): decode then drop theta
    append_controlled_h(mc.b, 0, 1);
    mc.b.then(g_trace(0));
    mc.c.input_wires = 2;  // ignore everything, answer 0
    mc.c.then(g_trace(1));
    mc.c.then(g_trace(0));
    mc.c.then(g_prep());
    return mc;
}

double wrapper_average(const Circuit& wrapper, int total_input_bits, const SimLimits& limits) {
    if (wrapper.input_wires != total_input_bits)
        throw std::invalid_argument("wrapper_average: input width mismatch");
    double sum = 0.0, comp = 0.0;
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << total_input_bits); ++v) {
        const double y =
            outcome_probability(wrapper, index_to_bits(v, total_input_bits), "1", limits) - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum / std::ldexp(1.0, total_input_bits);
}

std::vector<DerandRow> derandomization_check(
    const std::function<Circuit(std::uint64_t)>& family, const SequencePrefix& prefix,
    const std::function<double(std::uint64_t)>& p, const SimLimits& limits) {
    std::vector<DerandRow> rows;
    for (std::uint64_t n = 0; n < prefix.entries.size(); ++n) {
        const int l = prefix.config.ell(n);
        if (l > 16) throw resource_error("derandomization_check: ell(n) beyond the cap");
        const Circuit cn = family(n);
        if (cn.input_wires != l || cn.output_wires() != 1)
            throw std::invalid_argument("derandomization_check: family must give (ell(n),1)-circuits");
        DerandRow row;
        row.n = n;
        row.lhs = outcome_probability(cn, prefix.entries[n], "1", limits);
        double mean = 0.0;
        for (std::uint64_t x = 0; x < (std::uint64_t{1} << l); ++x)
            mean += outcome_probability(cn, index_to_bits(x, l), "1", limits);
        mean /= std::ldexp(1.0, l);
        row.rhs = p(n) * (std::ldexp(1.0, -l) + mean);
        row.holds = row.lhs <= row.rhs + 1e-12;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace quclone
