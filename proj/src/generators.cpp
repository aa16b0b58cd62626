#include "ordinal/generators.hpp"

#include <cmath>
#include <numbers>
#include <unordered_set>

#include "ordinal/error.hpp"
#include "ordinal/random.hpp"

namespace ordinal {

GeneratorSpec GeneratorSpec::iid_uniform(std::size_t length, std::uint64_t seed) {
  GeneratorSpec s;
  s.kind = Kind::iid_uniform;
  s.length = length;
  s.seed = seed;
  return s;
}

GeneratorSpec GeneratorSpec::walk(StepModel step, std::size_t length, std::uint64_t seed) {
  GeneratorSpec s;
  s.kind = Kind::walk;
  s.step = std::move(step);
  s.length = length;
  s.seed = seed;
  return s;
}

GeneratorSpec GeneratorSpec::logistic(std::size_t length, double x0) {
  GeneratorSpec s;
  s.kind = Kind::logistic;
  s.length = length;
  s.x0 = x0;
  return s;
}

GeneratorSpec GeneratorSpec::mod10(std::size_t length, double x0) {
  GeneratorSpec s;
  s.kind = Kind::mod10;
  s.length = length;
  s.x0 = x0;
  return s;
}

GeneratorSpec GeneratorSpec::sine(std::size_t length, double period, double phase, double amplitude) {
  GeneratorSpec s;
  s.kind = Kind::sine;
  s.length = length;
  s.period = period;
  s.phase = phase;
  s.amplitude = amplitude;
  return s;
}

void GeneratorSpec::validate() const {
  if (length < 1) throw SpecError("generator length must be >= 1");
  switch (kind) {
    case Kind::iid_uniform: break;
    case Kind::walk:
      try {
        step.validate();
      } catch (const Error& e) {
        throw SpecError(std::string("invalid step model: ") + e.what());
      }
      break;
    case Kind::logistic:
    case Kind::mod10:
      if (!(x0 > 0.0 && x0 < 1.0)) throw SpecError("x0 must lie in (0, 1)");
      break;
    case Kind::sine:
      if (!std::isfinite(period) || period <= 0.0) throw SpecError("sine period must be positive");
      if (!std::isfinite(phase) || !std::isfinite(amplitude) || amplitude == 0.0) {
        throw SpecError("sine phase must be finite and amplitude finite and nonzero");
      }
      break;
  }
}

std::string to_string(GeneratorSpec::Kind kind) {
  switch (kind) {
    case GeneratorSpec::Kind::iid_uniform: return "iid_uniform";
    case GeneratorSpec::Kind::walk: return "walk";
    case GeneratorSpec::Kind::logistic: return "logistic";
    case GeneratorSpec::Kind::mod10: return "mod10";
    case GeneratorSpec::Kind::sine: return "sine";
  }
  return "iid_uniform";
}

GeneratorSpec::Kind parse_generator_kind(const std::string& text) {
  for (auto k : {GeneratorSpec::Kind::iid_uniform, GeneratorSpec::Kind::walk, GeneratorSpec::Kind::logistic,
                 GeneratorSpec::Kind::mod10, GeneratorSpec::Kind::sine}) {
    if (text == to_string(k)) return k;
  }
  throw SpecError("unknown generator kind '" + text + "'");
}

TimeSeries generate(const GeneratorSpec& spec) {
  spec.validate();
  const std::size_t n = spec.length;
  std::vector<double> x(n);
  switch (spec.kind) {
    case GeneratorSpec::Kind::iid_uniform: {
      Rng rng(spec.seed);
      std::uniform_real_distribution<double> u(0.0, 1.0);
      for (double& v : x) v = u(rng);
      break;
    }
    case GeneratorSpec::Kind::walk: {
      Rng rng(spec.seed);
      const auto& m = spec.step;
      std::uniform_real_distribution<double> u(m.b - 1.0, m.b);
      std::normal_distribution<double> g(m.mu, m.sigma);
      std::uniform_int_distribution<std::size_t> pick(0, m.steps.empty() ? 0 : m.steps.size() - 1);
      x[0] = 0.0;
      for (std::size_t i = 1; i < n; ++i) {
        double y = 0.0;
        switch (m.family) {
          case StepModel::Family::uniform_b: y = u(rng); break;
          case StepModel::Family::normal: y = g(rng); break;
          case StepModel::Family::empirical: y = m.steps[pick(rng)]; break;
        }
        x[i] = x[i - 1] + y;
      }
      break;
    }
    case GeneratorSpec::Kind::logistic: {
      double v = spec.x0;
      for (double& out : x) {
        out = v;
        v = 4.0 * v * (1.0 - v);
      }
      break;
    }
    case GeneratorSpec::Kind::mod10: {
      std::unordered_set<double> seen;
      double v = spec.x0;
      for (std::size_t i = 0; i < n; ++i) {
        if (!seen.insert(v).second) {
          throw SpecError("mod10 orbit from x0 becomes periodic after " + std::to_string(i) + " steps");
        }
        x[i] = v;
        v = std::fmod(10.0 * v, 1.0);
      }
      break;
    }
    case GeneratorSpec::Kind::sine: {
      for (std::size_t t = 1; t <= n; ++t) {
        x[t - 1] = spec.amplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / spec.period + spec.phase);
      }
      break;
    }
  }
  return TimeSeries(std::move(x));
}

}  // namespace ordinal
