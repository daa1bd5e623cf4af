#include "rfis/disturbance.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace rfis {
namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

double to_number(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ValidationError("signal", "not a number: '" + s + "'");
}

}  // namespace

Point DisturbanceSignal::at(double t, int n) const {
  if (const auto* c = std::get_if<Constant>(&kind_)) {
    return c->value.size() == 0 ? Point::Zero(n) : c->value;
  }
  if (const auto* s = std::get_if<Sinusoid>(&kind_)) {
    Point out = Point::Zero(n);
    for (int i = 0; i < n && i < static_cast<int>(s->terms.size()); ++i) {
      for (const SineTerm& term : s->terms[i]) {
        out(i) += term.amplitude * std::sin(term.frequency * t + term.phase);
      }
    }
    return out;
  }
  const auto& v = std::get<VertexSwitch>(kind_);
  const auto slot = static_cast<long>(std::floor(t / v.period));
  return v.vertices[static_cast<size_t>(slot) % v.vertices.size()];
}

void validate_signal(const DisturbanceSignal& signal, const NoiseSet& noise,
                     int n, double horizon, int samples) {
  for (int k = 0; k < samples; ++k) {
    const double t = horizon * k / std::max(1, samples - 1);
    const Point nu = signal.at(t, n);
    if (nu.size() != n || !noise.contains(nu, 1e-12)) {
      std::ostringstream msg;
      msg << "signal '" << signal.label() << "' leaves the noise set at t=" << t;
      throw ValidationError("signal", msg.str());
    }
  }
}

DisturbanceSignal reversed_vdp_signal() {
  using Term = DisturbanceSignal::SineTerm;
  const double pi = std::numbers::pi;
  DisturbanceSignal::Sinusoid s;
  s.terms = {
      {Term{0.01, 2.0, 0.0}, Term{0.005, pi, 0.0}, Term{0.015, 6.53, 0.0}},
      // -0.01 cos(0.2t) = 0.01 sin(0.2t - π/2)
      {Term{0.01, 0.2, -pi / 2}, Term{0.02, 5.0 * pi, 0.0}},
  };
  DisturbanceSignal sig(std::move(s));
  sig.labeled("rvdp");
  return sig;
}

DisturbanceSignal curve_tracking_signal(double amplitude) {
  DisturbanceSignal::Sinusoid s;
  s.terms = {{}, {DisturbanceSignal::SineTerm{amplitude, 1.0, 0.0}}};
  DisturbanceSignal sig(std::move(s));
  sig.labeled("curve_tracking");
  return sig;
}

std::vector<DisturbanceSignal> default_signals(const SystemModel& sys) {
  std::vector<DisturbanceSignal> out;
  for (const Point& corner : sys.noise.extreme_points(sys.dimension)) {
    std::ostringstream label;
    label << "const";
    for (int k = 0; k < corner.size(); ++k) label << (k ? "," : ":") << corner(k);
    DisturbanceSignal sig(DisturbanceSignal::Constant{corner});
    sig.labeled(label.str());
    out.push_back(std::move(sig));
  }
  if (sys.name == "reversed_vdp") out.push_back(reversed_vdp_signal());
  if (sys.name == "curve_tracking") {
    const Point up = sys.noise.extreme_points(2).back();
    out.push_back(curve_tracking_signal(std::abs(up(1))));
  }
  return out;
}

std::vector<DisturbanceSignal> parse_signal(std::string_view spec_view,
                                            const SystemModel& sys) {
  const std::string spec(spec_view);
  const int n = sys.dimension;
  if (spec == "zero") return {DisturbanceSignal::zero(n).labeled("zero")};
  if (spec == "rvdp") return {reversed_vdp_signal()};
  if (spec == "curve_tracking") return {curve_tracking_signal()};
  if (spec == "battery") return default_signals(sys);

  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw ValidationError("signal", "unknown signal spec '" + spec + "'");
  }
  const std::string kind = spec.substr(0, colon);
  const std::string body = spec.substr(colon + 1);
  if (kind == "const") {
    const auto parts = split(body, ',');
    if (static_cast<int>(parts.size()) != n) {
      throw ValidationError("signal", "const needs " + std::to_string(n) + " values");
    }
    Point v(n);
    for (int k = 0; k < n; ++k) v(k) = to_number(parts[k]);
    return {DisturbanceSignal(DisturbanceSignal::Constant{v}).labeled(spec)};
  }
  if (kind == "sin") {
    DisturbanceSignal::Sinusoid s;
    for (const std::string& component : split(body, ';')) {
      std::vector<DisturbanceSignal::SineTerm> terms;
      for (const std::string& term : split(component, '+')) {
        if (term.empty() || term == "0") continue;
        const auto f = split(term, '/');
        if (f.size() != 3) {
          throw ValidationError("signal", "sine term must be A/w/phi: '" + term + "'");
        }
        terms.push_back({to_number(f[0]), to_number(f[1]), to_number(f[2])});
      }
      s.terms.push_back(std::move(terms));
    }
    if (static_cast<int>(s.terms.size()) != n) {
      throw ValidationError("signal", "sin needs " + std::to_string(n) + " components");
    }
    return {DisturbanceSignal(std::move(s)).labeled(spec)};
  }
  if (kind == "switch") {
    const double period = to_number(body);
    if (!(period > 0.0)) throw ValidationError("signal", "switch period must be > 0");
    return {DisturbanceSignal(DisturbanceSignal::VertexSwitch{
                                  period, sys.noise.extreme_points(n)})
                .labeled(spec)};
  }
  throw ValidationError("signal", "unknown signal kind '" + kind + "'");
}

}  // namespace rfis
