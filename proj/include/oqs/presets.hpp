// presets.hpp: the three worked scenarios (driven V-atom, two-level atom with
// mixed entangled / correlated states, two-level atom with one packet).

#pragma once

#include <array>
#include <cmath>
#include <limits>

#include "oqs/initial_state.hpp"

namespace oqs {

enum class PresetKind { NSL, SL, DC };

struct Scenario {
    SystemSpec system;
    InitialState state;
};

// Bath vector sum_k G_k |1_k>.
FockVector packet_state(const GaussianPacket& packet);

struct Example1Params {
    double A{std::sqrt(0.5)};
    double B{std::sqrt(0.25)};
    double C{std::sqrt(0.25)};
    double sigma{std::sqrt(0.1)};
    double k0{std::numeric_limits<double>::quiet_NaN()};  // NaN: use omega1
    double omega1{1.0};
    double omega2{0.5};
    double epsilon_L{0.0};
    double omega_L{0.0};
    int max_exc{2};
};

struct Example2Params {
    std::array<double, 2> A{std::sqrt(0.5), std::sqrt(0.8)};
    std::array<double, 2> B{std::sqrt(0.5), std::sqrt(0.2)};
    std::array<double, 2> sigma{1.0, std::sqrt(0.5)};
    std::array<double, 2> weight{0.5, 0.5};
    double A_dc{std::sqrt(0.5)};
    double B_dc{std::sqrt(0.5)};
    double k0{std::numeric_limits<double>::quiet_NaN()};
    double omega1{1.1};
    int max_exc{2};
};

struct Example3Params {
    double A{std::sqrt(0.5)};
    double B{std::sqrt(0.5)};
    double sigma{1.0};
    double k0{std::numeric_limits<double>::quiet_NaN()};
    double omega1{0.45};
    int max_exc{2};
};

// `bath` holds lab-frame frequencies; packets are centred on k0 there.
Scenario build_example1(PresetKind kind, const Example1Params& p, const BathModel& bath);
Scenario build_example2(PresetKind kind, const Example2Params& p, const BathModel& bath);
Scenario build_example3(PresetKind kind, const Example3Params& p, const BathModel& bath);

}  // namespace oqs
