#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace coulomb2d {

// Plane coordinates are dimensionless; all areas are measured against the
// normalized Lebesgue measure dA = dx dy / pi.
using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Errc {
  OutsideDomain,
  PoleAtOrigin,
  NotHeleShaw,
  DropletTouchesWall,
  BadParameters,
  QuadratureFailure,
  SupportViolation,
  NoConvergence,
  ConfigError,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::OutsideDomain: return "OutsideDomain";
    case Errc::PoleAtOrigin: return "PoleAtOrigin";
    case Errc::NotHeleShaw: return "NotHeleShaw";
    case Errc::DropletTouchesWall: return "DropletTouchesWall";
    case Errc::BadParameters: return "BadParameters";
    case Errc::QuadratureFailure: return "QuadratureFailure";
    case Errc::SupportViolation: return "SupportViolation";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool cond, Errc code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

}  // namespace coulomb2d
