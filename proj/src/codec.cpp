#include "quclone/codec.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace quclone {

Bits nat_to_string(std::uint64_t n) {
    // binary of n+1 with the leading 1 removed
    std::uint64_t m = n + 1;
    Bits out;
    while (m > 1) {
        out.push_back((m & 1) ? '1' : '0');
        m >>= 1;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

std::uint64_t string_to_nat(const Bits& s) {
    require_bits(s, "string_to_nat");
    if (s.size() >= 64) throw std::invalid_argument("string_to_nat: string too long");
    std::uint64_t m = 1;
    for (char c : s) m = (m << 1) | (c == '1' ? 1u : 0u);
    return m - 1;
}

void selfdelim_append(Bits& out, std::uint64_t n) {
    for (char c : nat_to_string(n)) {
        out.push_back(c);
        out.push_back(c);
    }
    out.push_back('0');
    out.push_back('1');
}

std::optional<std::uint64_t> selfdelim_read(const Bits& s, std::size_t& pos) {
    Bits collected;
    while (pos + 2 <= s.size()) {
        const char a = s[pos];
        const char b = s[pos + 1];
        pos += 2;
        if (a == '0' && b == '1') {
            if (collected.size() >= 64) return std::nullopt;
            return string_to_nat(collected);
        }
        if (a == '1' && b == '0') return std::nullopt;
        if (collected.size() >= 64) return std::nullopt;
        collected.push_back(a);
    }
    return std::nullopt;
}

namespace {

constexpr int kOpH = 0;
constexpr int kOpT = 1;
constexpr int kOpTof = 2;
constexpr int kOpPrep = 3;
constexpr int kOpTrace = 4;
constexpr int kOpLayer = 5;

void append_opcode(Bits& out, int op) {
    out.push_back((op & 4) ? '1' : '0');
    out.push_back((op & 2) ? '1' : '0');
    out.push_back((op & 1) ? '1' : '0');
}

}  // namespace

Bits encode_circuit(const Circuit& c) {
    c.validate();
    if (static_cast<std::uint64_t>(c.input_wires) > kMaxFormatIndex)
        throw std::invalid_argument("encode_circuit: too many input wires for the format");
    Bits out;
    selfdelim_append(out, static_cast<std::uint64_t>(c.input_wires));
    bool first = true;
    for (const auto& layer : c.layers) {
        if (layer.empty())
            throw std::invalid_argument("encode_circuit: empty layers have no canonical form");
        if (!first) append_opcode(out, kOpLayer);
        first = false;
        for (const Gate& g : layer) {
            switch (g.kind) {
                case GateKind::Hadamard:
                    append_opcode(out, kOpH);
                    selfdelim_append(out, static_cast<std::uint64_t>(g.wires[0]));
                    break;
                case GateKind::PhaseShift:
                    append_opcode(out, kOpT);
                    selfdelim_append(out, static_cast<std::uint64_t>(g.wires[0]));
                    break;
                case GateKind::Toffoli:
                    append_opcode(out, kOpTof);
                    for (int w : g.wires) selfdelim_append(out, static_cast<std::uint64_t>(w));
                    break;
                case GateKind::PrepZero:
                    append_opcode(out, kOpPrep);
                    break;
                case GateKind::TraceOut:
                    append_opcode(out, kOpTrace);
                    selfdelim_append(out, static_cast<std::uint64_t>(g.wires[0]));
                    break;
                default:
                    throw std::invalid_argument(
                        "encode_circuit: macro gates are not encodable, expand first");
            }
        }
    }
    return out;
}

Circuit decode_circuit(const Bits& s) {
    if (!is_bits(s)) return empty_circuit();
    std::size_t pos = 0;
    const std::optional<std::uint64_t> header = selfdelim_read(s, pos);
    if (!header || *header > kMaxFormatIndex) return empty_circuit();

    Circuit c;
    c.input_wires = static_cast<int>(*header);

    std::uint64_t cur = *header;          // wires at entry of the open layer
    std::vector<Gate> layer;
    std::set<std::uint64_t> used;         // explicit targets claimed in the open layer

    const auto commit = [&]() {
        if (layer.empty()) return;
        std::uint64_t preps = 0, traces = 0;
        for (const Gate& g : layer) {
            if (g.kind == GateKind::PrepZero) ++preps;
            if (g.kind == GateKind::TraceOut) ++traces;
        }
        c.layers.push_back(std::move(layer));
        layer.clear();
        used.clear();
        cur = cur + preps - traces;
    };

    for (;;) {
        if (pos + 3 > s.size()) break;  // trailing fragment, ignored
        const int op = ((s[pos] == '1') << 2) | ((s[pos + 1] == '1') << 1) | (s[pos + 2] == '1');
        pos += 3;
        if (op == kOpPrep) {
            layer.push_back(g_prep());
            continue;
        }
        if (op == kOpLayer) {
            commit();
            continue;
        }
        if (op > kOpLayer) break;  // reserved opcode, stop here

        const int arity = (op == kOpTof) ? 3 : 1;
        std::vector<std::uint64_t> ws;
        bool ok = true;
        for (int i = 0; i < arity; ++i) {
            const std::optional<std::uint64_t> w = selfdelim_read(s, pos);
            if (!w || *w >= cur || used.count(*w)) {
                ok = false;
                break;
            }
            // Toffoli wires must also be mutually distinct.
            for (std::uint64_t seen : ws)
                if (seen == *w) ok = false;
            if (!ok) break;
            ws.push_back(*w);
        }
        if (!ok) break;
        for (std::uint64_t w : ws) used.insert(w);
        std::vector<int> wi(ws.begin(), ws.end());
        switch (op) {
            case kOpH: layer.push_back(g_h(wi[0])); break;
            case kOpT: layer.push_back(g_t(wi[0])); break;
            case kOpTof: layer.push_back(Gate{GateKind::Toffoli, wi}); break;
            case kOpTrace: layer.push_back(g_trace(wi[0])); break;
            default: break;
        }
    }
    commit();
    return c;
}

GeneratorProgram make_generator(const Bits& description) {
    return GeneratorProgram{description, decode_circuit(description)};
}

namespace {

// (n+2)^k with saturation: returns nullopt when the value exceeds 2^63.
std::optional<std::uint64_t> exponent_of(std::uint64_t n, std::uint32_t k) {
    const std::uint64_t base = n + 2;
    std::uint64_t acc = 1;
    for (std::uint32_t i = 0; i < k; ++i) {
        if (acc > (1ull << 63) / base) return std::nullopt;
        acc *= base;
    }
    return acc;
}

}  // namespace

BigInt BudgetSchedule::eval(std::uint64_t n) const {
    if (!k) throw std::logic_error("BudgetSchedule::eval: unbounded budget has no value");
    const std::optional<std::uint64_t> e = exponent_of(n, *k);
    if (!e || *e > kMaxBudgetBits)
        throw resource_error("BudgetSchedule::eval: budget exceeds the bit cap");
    return BigInt(1) << static_cast<unsigned>(*e);
}

bool BudgetSchedule::allows(std::uint64_t n, std::uint64_t cost) const {
    if (!k) return true;
    const std::optional<std::uint64_t> e = exponent_of(n, *k);
    if (!e || *e >= 64) return true;  // 2^e >= 2^64 > any 64-bit cost
    const std::uint64_t budget = 1ull << *e;
    return cost <= budget;
}

}  // namespace quclone
