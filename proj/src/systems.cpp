#include "rfis/systems.hpp"

#include <dlfcn.h>

#include <cmath>
#include <sstream>

namespace rfis {
namespace {

Point vec(std::initializer_list<double> values) {
  Point p(values.size());
  int k = 0;
  for (double v : values) p(k++) = v;
  return p;
}

Point filled(int n, double v) { return Point::Constant(n, v); }

void add_builtins(SystemRegistry& reg) {
  reg.add("vdp", {[](const SystemParams& p) {
                    const double mu = p.at("mu");
                    SystemModel m{"vdp", 2, [mu](auto x, auto out) {
                                    out[0] = x[1];
                                    out[1] = mu * (1.0 - x[0] * x[0]) * x[1] - x[0];
                                  }};
                    return m;
                  },
                  {{"mu", 1.0}}, vec({-3, -3}), vec({3, 3}),
                  "Van der Pol oscillator"});

  reg.add("fitzhugh", {[](const SystemParams&) {
                         return SystemModel{
                             "fitzhugh", 2, [](auto x, auto out) {
                               out[0] = x[0] - x[0] * x[0] * x[0] / 3.0 - x[1] + 7.0 / 8.0;
                               out[1] = 0.08 * (x[0] + 0.7 - 0.8 * x[1]);
                             }};
                       },
                       {}, vec({-3, -1}), vec({3, 3}),
                       "Fitzhugh-Nagumo neuron model"});

  reg.add("curve_tracking",
          {[](const SystemParams& p) {
             const double rho = p.at("rho"), mu = p.at("mu"), w = p.at("noise");
             SystemModel m{"curve_tracking", 2, [rho, mu](auto x, auto out) {
                             out[0] = -std::sin(x[1]);
                             out[1] = (x[0] - rho) * std::cos(x[1]) - mu * std::sin(x[1]);
                           }};
             m.noise = NoiseSet::box(vec({0.0, -w}), vec({0.0, w}));
             return m;
           },
           {{"rho", 1.0}, {"mu", 6.42}, {"noise", 0.15}}, vec({0, -1}), vec({2, 1}),
           "curve tracking with disturbance {0} x [-noise, noise]"});

  reg.add("reversed_vdp",
          {[](const SystemParams& p) {
             const double w = p.at("noise");
             SystemModel m{"reversed_vdp", 2, [](auto x, auto out) {
                             out[0] = -x[1];
                             out[1] = x[0] - x[1] + x[1] * x[1] * x[1];
                           }};
             m.noise = NoiseSet::box(vec({-w, -w}), vec({w, w}));
             return m;
           },
           {{"noise", 0.03}}, vec({-1, -1}), vec({1, 1}),
           "reversed Van der Pol with box disturbance"});

  reg.add("phytoplankton",
          {[](const SystemParams&) {
             return SystemModel{"phytoplankton", 3, [](auto x, auto out) {
                                  out[0] = 1.0 - x[0] - 0.25 * x[0] * x[1];
                                  out[1] = (2.0 * x[2] - 1.0) * x[1];
                                  out[2] = 0.25 * x[0] - 2.0 * x[2] * x[2];
                                }};
           },
           {}, vec({0, -1, 0}), vec({2, 1, 1}), "phytoplankton growth"});

  reg.add("thomas", {[](const SystemParams& p) {
                       const double b = p.at("b");
                       return SystemModel{"thomas", 3, [b](auto x, auto out) {
                                            out[0] = std::sin(x[1]) - b * x[0];
                                            out[1] = std::sin(x[2]) - b * x[1];
                                            out[2] = std::sin(x[0]) - b * x[2];
                                          }};
                     },
                     {{"b", 0.3}}, filled(3, -10), filled(3, 10),
                     "Thomas' cyclically symmetric attractor"});

  auto linear = [](const char* name, double gain) {
    return SystemEntry{[name, gain](const SystemParams& p) {
                         const int n = static_cast<int>(p.at("dim"));
                         if (n < 2) {
                           throw ValidationError("system.dim", "must be >= 2");
                         }
                         return SystemModel{name, n, [gain](auto x, auto out) {
                                              for (size_t k = 0; k < x.size(); ++k) {
                                                out[k] = gain * x[k];
                                              }
                                            }};
                       },
                       {{"dim", 2.0}}, filled(2, -1), filled(2, 1),
                       gain < 0 ? "x' = -x" : "x' = x"};
  };
  reg.add("linear_decay", linear("linear_decay", -1.0));
  reg.add("linear_growth", linear("linear_growth", 1.0));

  reg.add("rotation", {[](const SystemParams&) {
                         return SystemModel{"rotation", 2, [](auto x, auto out) {
                                              out[0] = x[1];
                                              out[1] = -x[0];
                                            }};
                       },
                       {}, filled(2, -1), filled(2, 1), "x1' = x2, x2' = -x1"});
}

}  // namespace

SystemRegistry& SystemRegistry::global() {
  static SystemRegistry* reg = [] {
    auto* r = new SystemRegistry;
    add_builtins(*r);
    return r;
  }();
  return *reg;
}

void SystemRegistry::add(const std::string& name, SystemEntry entry) {
  entries_[name] = std::move(entry);
}

bool SystemRegistry::contains(const std::string& name) const {
  return entries_.count(name) > 0;
}

std::vector<std::string> SystemRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, entry] : entries_) out.push_back(name);
  return out;
}

const SystemEntry& SystemRegistry::entry(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw Error(ErrorCode::kUnknownSystem, name);
  return it->second;
}

SystemModel SystemRegistry::make(const std::string& name,
                                 const SystemParams& params) const {
  const SystemEntry& e = entry(name);
  SystemParams merged = e.defaults;
  for (const auto& [key, value] : params) {
    if (!merged.count(key)) {
      throw ValidationError("system." + key,
                            "unknown parameter for system '" + name + "'");
    }
    merged[key] = value;
  }
  SystemModel model = e.make(merged);
  if (model.lipschitz <= 0.0) {
    Point lower = e.region_lower, upper = e.region_upper;
    if (lower.size() != model.dimension) {
      lower = Point::Constant(model.dimension, e.region_lower(0));
      upper = Point::Constant(model.dimension, e.region_upper(0));
    }
    model.lipschitz = estimate_lipschitz(model, lower, upper);
  }
  return model;
}

std::pair<std::string, SystemParams> parse_system_id(std::string_view id) {
  const auto colon = id.find(':');
  std::string name(id.substr(0, colon));
  SystemParams params;
  if (colon != std::string_view::npos) {
    std::stringstream ss{std::string(id.substr(colon + 1))};
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) {
        throw ValidationError("system", "expected key=value, got '" + item + "'");
      }
      try {
        params[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
      } catch (const std::exception&) {
        throw ValidationError("system." + item.substr(0, eq), "not a number");
      }
    }
  }
  return {name, params};
}

SystemModel benchmark(std::string_view id) {
  auto [name, params] = parse_system_id(id);
  return SystemRegistry::global().make(name, params);
}

void load_plugin(const std::filesystem::path& library) {
  void* handle = dlopen(library.c_str(), RTLD_NOW | RTLD_LOCAL);
  if (!handle) {
    throw Error(ErrorCode::kIoError, std::string("dlopen failed: ") + dlerror());
  }
  using RegisterFn = void (*)(SystemRegistry&);
  auto fn = reinterpret_cast<RegisterFn>(dlsym(handle, "rfis_register_systems"));
  if (!fn) {
    throw Error(ErrorCode::kIoError,
                library.string() + " does not export rfis_register_systems");
  }
  // The handle stays open: registered factories point into the library.
  fn(SystemRegistry::global());
}

}  // namespace rfis
