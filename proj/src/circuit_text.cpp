#include "quclone/circuit_text.hpp"

#include <sstream>

namespace quclone {

namespace {

std::vector<int> parse_wire_list(const std::string& s, int expected, const std::string& tok) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (part.empty()) throw std::invalid_argument("circuit text: empty wire index in " + tok);
        std::size_t pos = 0;
        int v = std::stoi(part, &pos);
        if (pos != part.size() || v < 0)
            throw std::invalid_argument("circuit text: bad wire index in " + tok);
        out.push_back(v);
    }
    if (static_cast<int>(out.size()) != expected)
        throw std::invalid_argument("circuit text: wrong wire count in " + tok);
    return out;
}

Gate parse_token(const std::string& tok) {
    if (tok == "PREP") return g_prep();
    const std::size_t at = tok.find('@');
    if (at == std::string::npos)
        throw std::invalid_argument("circuit text: unknown token " + tok);
    const std::string name = tok.substr(0, at);
    const std::string rest = tok.substr(at + 1);
    GateKind kind;
    if (name == "H") kind = GateKind::Hadamard;
    else if (name == "T") kind = GateKind::PhaseShift;
    else if (name == "TOF") kind = GateKind::Toffoli;
    else if (name == "TR") kind = GateKind::TraceOut;
    else if (name == "X") kind = GateKind::PauliX;
    else if (name == "CNOT") kind = GateKind::CNOT;
    else if (name == "Z") kind = GateKind::PauliZ;
    else throw std::invalid_argument("circuit text: unknown token " + tok);
    return Gate{kind, parse_wire_list(rest, gate_arity(kind), tok)};
}

}  // namespace

Circuit parse_circuit_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    Circuit c;
    bool saw_header = false;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string t;
        while (ls >> t) toks.push_back(t);
        if (toks.empty() || toks[0][0] == '#') continue;
        if (!saw_header) {
            if (toks.size() != 2 || toks[0] != "wires")
                throw std::invalid_argument("circuit text: expected 'wires <n>' header");
            std::size_t pos = 0;
            c.input_wires = std::stoi(toks[1], &pos);
            if (pos != toks[1].size() || c.input_wires < 0)
                throw std::invalid_argument("circuit text: bad wire count");
            saw_header = true;
            continue;
        }
        std::vector<Gate> layer;
        for (const std::string& tok : toks) layer.push_back(parse_token(tok));
        c.layers.push_back(std::move(layer));
    }
    if (!saw_header) throw std::invalid_argument("circuit text: missing header");
    c.validate();
    return c;
}

std::string format_circuit_text(const Circuit& c) {
    c.validate();
    std::ostringstream out;
    out << "wires " << c.input_wires << "\n";
    for (const auto& layer : c.layers) {
        bool first = true;
        for (const Gate& g : layer) {
            if (!first) out << ' ';
            first = false;
            out << gate_name(g.kind);
            for (std::size_t i = 0; i < g.wires.size(); ++i)
                out << (i == 0 ? "@" : ",") << g.wires[i];
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace quclone
