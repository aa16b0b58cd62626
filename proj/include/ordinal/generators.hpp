#pragma once

#include <cstdint>
#include <string>

#include "ordinal/nullmodel.hpp"
#include "ordinal/pattern.hpp"

namespace ordinal {

/// Recipe for a synthetic series.
struct GeneratorSpec {
  enum class Kind { iid_uniform, walk, logistic, mod10, sine };

  Kind kind = Kind::iid_uniform;
  std::size_t length = 1000;
  std::uint64_t seed = 0;      // iid_uniform, walk
  StepModel step;              // walk
  double x0 = 0.3;             // logistic, mod10; must lie in (0, 1)
  double period = 20.0;        // sine
  double phase = 0.0;          // sine
  double amplitude = 1.0;      // sine

  static GeneratorSpec iid_uniform(std::size_t length, std::uint64_t seed);
  static GeneratorSpec walk(StepModel step, std::size_t length, std::uint64_t seed);
  static GeneratorSpec logistic(std::size_t length, double x0);
  static GeneratorSpec mod10(std::size_t length, double x0);
  static GeneratorSpec sine(std::size_t length, double period = 20.0, double phase = 0.0, double amplitude = 1.0);

  /// Throws SpecError when a field is out of range.
  void validate() const;
};

std::string to_string(GeneratorSpec::Kind kind);
GeneratorSpec::Kind parse_generator_kind(const std::string& text);

/// iid_uniform: N draws from [0, 1).
/// walk:        0 followed by the partial sums of N-1 steps.
/// logistic:    x -> 4x(1-x) from x0.
/// mod10:       x -> 10x mod 1 from x0. Throws SpecError if the orbit repeats
///              exactly (in double precision) within N steps.
/// sine:        amplitude * sin(2 pi t / period + phase), t = 1..N.
TimeSeries generate(const GeneratorSpec& spec);

}  // namespace ordinal
