#include "quclone/gates.hpp"

#include <cmath>

namespace quclone {

int gate_arity(GateKind k) {
    switch (k) {
        case GateKind::PrepZero: return 0;
        case GateKind::TraceOut: return 1;
        case GateKind::Hadamard: return 1;
        case GateKind::PhaseShift: return 1;
        case GateKind::Toffoli: return 3;
        case GateKind::PauliX: return 1;
        case GateKind::CNOT: return 2;
        case GateKind::PauliZ: return 1;
    }
    throw std::invalid_argument("gate_arity: unknown kind");
}

bool is_macro(GateKind k) {
    return k == GateKind::PauliX || k == GateKind::CNOT || k == GateKind::PauliZ;
}

bool is_unitary(GateKind k) {
    return k != GateKind::PrepZero && k != GateKind::TraceOut;
}

const char* gate_name(GateKind k) {
    switch (k) {
        case GateKind::PrepZero: return "PREP";
        case GateKind::TraceOut: return "TR";
        case GateKind::Hadamard: return "H";
        case GateKind::PhaseShift: return "T";
        case GateKind::Toffoli: return "TOF";
        case GateKind::PauliX: return "X";
        case GateKind::CNOT: return "CNOT";
        case GateKind::PauliZ: return "Z";
    }
    throw std::invalid_argument("gate_name: unknown kind");
}

Mat gate_matrix(GateKind k) {
    const double s = 1.0 / std::sqrt(2.0);
    switch (k) {
        case GateKind::Hadamard: {
            Mat h(2, 2);
            h << s, s, s, -s;
            return h;
        }
        case GateKind::PhaseShift: {
            Mat t = Mat::Identity(2, 2);
            t(1, 1) = std::polar(1.0, M_PI / 4.0);
            return t;
        }
        case GateKind::Toffoli: {
            Mat m = Mat::Identity(8, 8);
            m(6, 6) = 0.0;
            m(7, 7) = 0.0;
            m(6, 7) = 1.0;
            m(7, 6) = 1.0;
            return m;
        }
        case GateKind::PauliX: {
            Mat x(2, 2);
            x << 0, 1, 1, 0;
            return x;
        }
        case GateKind::CNOT: {
            Mat m = Mat::Identity(4, 4);
            m(2, 2) = 0.0;
            m(3, 3) = 0.0;
            m(2, 3) = 1.0;
            m(3, 2) = 1.0;
            return m;
        }
        case GateKind::PauliZ: {
            Mat z = Mat::Identity(2, 2);
            z(1, 1) = -1.0;
            return z;
        }
        case GateKind::PrepZero:
        case GateKind::TraceOut:
            throw std::invalid_argument("gate_matrix: structural gate has no unitary");
    }
    throw std::invalid_argument("gate_matrix: unknown kind");
}

}  // namespace quclone
