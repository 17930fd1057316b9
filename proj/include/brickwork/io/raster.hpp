#pragma once

#include <sstream>
#include <string>
#include <string_view>

#include "brickwork/error.hpp"
#include "brickwork/sim.hpp"

namespace brickwork::io {

enum class RasterFormat { events, per_neuron };

inline RasterFormat raster_format_from_string(std::string_view s) {
  if (s == "events") return RasterFormat::events;
  if (s == "per-neuron") return RasterFormat::per_neuron;
  throw error(errc::parameter, "unknown raster format '" + std::string(s) + "'");
}

// events:     header `t,neuron_id`, then one line per spike sorted by (t, id).
// per-neuron: header `# neuron_id: spike times`, then `id: t1 t2 ...` for
//             every neuron that fired, sorted by id.
inline std::string write_raster(const SpikeRaster& raster, RasterFormat format) {
  std::ostringstream out;
  if (format == RasterFormat::events) {
    out << "t,neuron_id\n";
    for (const auto& e : raster.events()) out << e.t << ',' << e.neuron << '\n';
  } else {
    out << "# neuron_id: spike times\n";
    for (const auto& [id, times] : raster.by_neuron()) {
      out << id << ':';
      for (int t : times) out << ' ' << t;
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace brickwork::io
