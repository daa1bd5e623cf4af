// Test plugin: registers "scaled_decay" (x' = -k x in 2D).
#include "rfis/systems.hpp"

extern "C" void rfis_register_systems(rfis::SystemRegistry& reg) {
  reg.add("scaled_decay",
          {[](const rfis::SystemParams& p) {
             const double k = p.at("k");
             return rfis::SystemModel{"scaled_decay", 2, [k](auto x, auto out) {
                                        out[0] = -k * x[0];
                                        out[1] = -k * x[1];
                                      }};
           },
           {{"k", 1.0}},
           rfis::Point::Constant(2, -1),
           rfis::Point::Constant(2, 1),
           "x' = -k x"});
}
