#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rfis/dynamics.hpp"

namespace rfis {

using SystemParams = std::map<std::string, double>;

/// Builds a model from named parameters. The returned model's `lipschitz`
/// may be left at 0, in which case the registry estimates it over the
/// entry's region. `defaults` lists every accepted parameter.
struct SystemEntry {
  std::function<SystemModel(const SystemParams&)> make;
  SystemParams defaults;
  Point region_lower;
  Point region_upper;
  std::string summary;
};

/// Name → system factory. Holds the built-in benchmark systems; plugins add
/// more through `rfis_register_systems` (see load_plugin).
class SystemRegistry {
 public:
  static SystemRegistry& global();

  void add(const std::string& name, SystemEntry entry);
  bool contains(const std::string& name) const;
  std::vector<std::string> names() const;
  const SystemEntry& entry(const std::string& name) const;

  /// Builds `name` with `params`; throws kUnknownSystem.
  SystemModel make(const std::string& name, const SystemParams& params = {}) const;

 private:
  std::map<std::string, SystemEntry> entries_;
};

/// Parses "name" or "name:key=value,key=value" into (name, params).
std::pair<std::string, SystemParams> parse_system_id(std::string_view id);

/// Built-in benchmark by id, e.g. "vdp", "thomas:b=0.14",
/// "curve_tracking:rho=1,mu=6.42". Ids: vdp, fitzhugh, curve_tracking,
/// reversed_vdp, phytoplankton, thomas, linear_decay, linear_growth, rotation.
SystemModel benchmark(std::string_view id);

/// Loads a shared library exporting
///   extern "C" void rfis_register_systems(rfis::SystemRegistry&);
/// and lets it register its systems in the global registry.
void load_plugin(const std::filesystem::path& library);

}  // namespace rfis
