#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace brickwork {

enum class errc {
  parameter,
  missing_neuron,
  duplicate_edge,
  namespace_clash,
  arity,
  shape,
  build,
  cycle,
  fan_in,
  wiring,
  unsupported_buffer,
  capacity,
  injection,
  validation,
  decode,
  parse,
};

constexpr std::string_view to_string(errc code) noexcept {
  switch (code) {
    case errc::parameter: return "parameter";
    case errc::missing_neuron: return "missing-neuron";
    case errc::duplicate_edge: return "duplicate-edge";
    case errc::namespace_clash: return "namespace";
    case errc::arity: return "arity";
    case errc::shape: return "shape";
    case errc::build: return "build";
    case errc::cycle: return "cycle";
    case errc::fan_in: return "fan-in";
    case errc::wiring: return "wiring";
    case errc::unsupported_buffer: return "unsupported-buffer";
    case errc::capacity: return "capacity";
    case errc::injection: return "injection";
    case errc::validation: return "validation";
    case errc::decode: return "decode";
    case errc::parse: return "parse";
  }
  return "unknown";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + " error: " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace brickwork
