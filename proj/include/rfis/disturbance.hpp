#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rfis/dynamics.hpp"

namespace rfis {

/// A disturbance trajectory ν : [0, ∞) → Ψ.
class DisturbanceSignal {
 public:
  struct Constant {
    Point value;
  };
  /// Component i is Σ amplitude · sin(frequency · t + phase) over terms[i].
  struct SineTerm {
    double amplitude, frequency, phase;
  };
  struct Sinusoid {
    std::vector<std::vector<SineTerm>> terms;
  };
  /// Holds each vertex for `period` time units, cycling through the list.
  struct VertexSwitch {
    double period;
    std::vector<Point> vertices;
  };

  DisturbanceSignal() : DisturbanceSignal(Constant{Point::Zero(0)}) {}
  explicit DisturbanceSignal(Constant c) : kind_(std::move(c)) {}
  explicit DisturbanceSignal(Sinusoid s) : kind_(std::move(s)) {}
  explicit DisturbanceSignal(VertexSwitch v) : kind_(std::move(v)) {}

  static DisturbanceSignal zero(int n) { return DisturbanceSignal(Constant{Point::Zero(n)}); }

  /// ν(t); an empty Constant evaluates to the zero vector of length `n`.
  Point at(double t, int n) const;

  const std::string& label() const { return label_; }
  DisturbanceSignal& labeled(std::string label) {
    label_ = std::move(label);
    return *this;
  }

 private:
  std::variant<Constant, Sinusoid, VertexSwitch> kind_;
  std::string label_;
};

/// Samples ν at `samples` evenly spaced times on [0, horizon] and throws
/// ValidationError("signal") if any value leaves Ψ.
void validate_signal(const DisturbanceSignal& signal, const NoiseSet& noise,
                     int n, double horizon, int samples = 10000);

/// The reversed Van der Pol test signal:
///   ν1 = 0.01 sin 2t + 0.005 sin πt + 0.015 sin 6.53t
///   ν2 = -0.01 cos 0.2t + 0.02 sin 5πt
DisturbanceSignal reversed_vdp_signal();

/// The curve-tracking test signal: ν1 = 0, ν2 = 0.15 sin t.
DisturbanceSignal curve_tracking_signal(double amplitude = 0.15);

/// Default falsifier battery for `sys`: one constant signal per extreme
/// point of Ψ plus the system's own named signal when it has one.
std::vector<DisturbanceSignal> default_signals(const SystemModel& sys);

/// Parses a CLI signal spec:
///   zero | const:a,b,... | sin:A/w/phi+A/w/phi;A/w/phi | switch:period |
///   rvdp | curve_tracking | battery
/// `switch` cycles through the extreme points of Ψ; `battery` expands to
/// default_signals(sys).
std::vector<DisturbanceSignal> parse_signal(std::string_view spec,
                                            const SystemModel& sys);

}  // namespace rfis
