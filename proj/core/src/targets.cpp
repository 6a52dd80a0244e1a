#include "ngkde/targets.hpp"

#include <json.hpp>

#include "ngkde/math.hpp"

namespace ngkde {

namespace {

bool nonnegative_family(MarginFamily f) {
  switch (f) {
    case MarginFamily::HalfNormal:
    case MarginFamily::Gamma:
    case MarginFamily::Exponential:
    case MarginFamily::TruncatedNormalAtZero:
      return true;
    default:
      return false;
  }
}

void validate_margin(const std::vector<MarginComponent>& margin,
                     bool is_x2_margin, const char* label) {
  if (margin.empty())
    throw std::invalid_argument(std::string("TargetSpec: empty ") + label);
  double wsum = 0.0;
  for (const auto& c : margin) {
    if (!(c.weight > 0.0))
      throw std::invalid_argument("TargetSpec: component weights must be > 0");
    if (!(c.scale > 0.0))
      throw std::invalid_argument("TargetSpec: component scales must be > 0");
    if (c.family == MarginFamily::Gamma && !(c.shape > 0.0))
      throw std::invalid_argument("TargetSpec: gamma shape must be > 0");
    if (c.family == MarginFamily::Exponential && !(c.rate > 0.0))
      throw std::invalid_argument("TargetSpec: exponential rate must be > 0");
    if (nonnegative_family(c.family) != is_x2_margin)
      throw std::invalid_argument(
          std::string("TargetSpec: family ") + to_string(c.family) +
          " is not legal on the " + label + " margin");
    wsum += c.weight;
  }
  if (std::abs(wsum - 1.0) > 1e-12)
    throw std::invalid_argument(std::string("TargetSpec: ") + label +
                                " weights must sum to 1");
}

// --- seeded sampling primitives ------------------------------------------

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform_open() {  // (0, 1)
    return (static_cast<double>(rng_() >> 12) + 0.5) * 0x1.0p-52;
  }
  double normal() {  // Box-Muller, one variate per pair of uniforms
    const double u1 = uniform_open();
    const double u2 = uniform_open();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
  }
  double gamma(double shape) {  // Marsaglia-Tsang, unit scale
    if (shape < 1.0) {
      const double u = uniform_open();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double z, v;
      do {
        z = normal();
        v = 1.0 + c * z;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform_open();
      if (std::log(u) < 0.5 * z * z + d - d * v + d * std::log(v)) return d * v;
    }
  }

  double draw(const MarginComponent& c) {
    switch (c.family) {
      case MarginFamily::Normal:
        return c.location + c.scale * normal();
      case MarginFamily::Cauchy:
        return c.location + c.scale * std::tan(pi * (uniform_open() - 0.5));
      case MarginFamily::HalfNormal:
        return c.scale * std::abs(normal());
      case MarginFamily::Gamma:
        return c.scale * gamma(c.shape);
      case MarginFamily::Exponential:
        return -std::log(uniform_open()) / c.rate;
      case MarginFamily::Logistic: {
        const double u = uniform_open();
        return c.location + c.scale * std::log(u / (1.0 - u));
      }
      case MarginFamily::TruncatedNormalAtZero:
        for (;;) {
          const double z = c.location + c.scale * normal();
          if (z >= 0.0) return z;
        }
    }
    throw std::logic_error("unreachable margin family");
  }

  double draw_mixture(const std::vector<MarginComponent>& margin) {
    const double u = uniform_open();
    double acc = 0.0;
    for (const auto& c : margin) {
      acc += c.weight;
      if (u <= acc) return draw(c);
    }
    return draw(margin.back());  // guard against rounding of the weight sum
  }

 private:
  std::mt19937_64 rng_;
};

MarginComponent comp(MarginFamily f, double location, double scale,
                     double weight) {
  MarginComponent c;
  c.family = f;
  c.location = location;
  c.scale = scale;
  c.weight = weight;
  return c;
}

}  // namespace

void TargetSpec::validate() const {
  validate_margin(margin_x1, false, "x1");
  validate_margin(margin_x2, true, "x2");
  if (!(x1_lo < x1_hi) || !(x2_lo < x2_hi) || x2_lo < 0.0)
    throw std::invalid_argument("TargetSpec: invalid integration box");
}

std::string to_string(MarginFamily family) {
  switch (family) {
    case MarginFamily::Normal: return "normal";
    case MarginFamily::Cauchy: return "cauchy";
    case MarginFamily::HalfNormal: return "half_normal";
    case MarginFamily::Gamma: return "gamma";
    case MarginFamily::Exponential: return "exponential";
    case MarginFamily::Logistic: return "logistic";
    case MarginFamily::TruncatedNormalAtZero: return "truncated_normal";
  }
  return "?";
}

MarginFamily parse_margin_family(const std::string& name) {
  if (name == "normal") return MarginFamily::Normal;
  if (name == "cauchy") return MarginFamily::Cauchy;
  if (name == "half_normal") return MarginFamily::HalfNormal;
  if (name == "gamma") return MarginFamily::Gamma;
  if (name == "exponential") return MarginFamily::Exponential;
  if (name == "logistic") return MarginFamily::Logistic;
  if (name == "truncated_normal") return MarginFamily::TruncatedNormalAtZero;
  throw std::invalid_argument("unknown margin family: " + name);
}

TargetSpec builtin_target(const std::string& id) {
  TargetSpec t;
  t.name = id;
  if (id == "f1") {
    t.margin_x1 = {comp(MarginFamily::Cauchy, 0.0, 1.0, 1.0)};
    t.margin_x2 = {comp(MarginFamily::HalfNormal, 0.0, 2.0, 1.0)};
    t.x1_lo = -20.0; t.x1_hi = 20.0; t.x2_hi = 10.0;
  } else if (id == "f2") {
    t.margin_x1 = {comp(MarginFamily::Normal, -3.0, 1.0, 0.2),
                   comp(MarginFamily::Cauchy, 0.0, 1.0, 0.6),
                   comp(MarginFamily::Normal, 3.0, 1.0, 0.2)};
    MarginComponent ga;
    ga.family = MarginFamily::Gamma;
    ga.shape = 3.0; ga.scale = 1.0; ga.weight = 1.0;
    t.margin_x2 = {ga};
    t.x1_lo = -10.0; t.x1_hi = 10.0; t.x2_hi = 15.0;
  } else if (id == "f3") {
    t.margin_x1 = {comp(MarginFamily::Normal, -3.0, 3.0, 0.4),
                   comp(MarginFamily::Cauchy, 0.0, 1.0, 0.2),
                   comp(MarginFamily::Normal, 3.0, 3.0, 0.4)};
    MarginComponent ex;
    ex.family = MarginFamily::Exponential;
    ex.rate = 1.0; ex.weight = 1.0;
    t.margin_x2 = {ex};
    t.x1_lo = -12.0; t.x1_hi = 12.0; t.x2_hi = 10.0;
  } else if (id == "f4") {
    t.margin_x1 = {comp(MarginFamily::Logistic, -1.0, 0.5, 0.5),
                   comp(MarginFamily::Logistic, 1.5, 0.7, 0.5)};
    t.margin_x2 = {comp(MarginFamily::TruncatedNormalAtZero, 0.0, 0.5, 0.6),
                   comp(MarginFamily::TruncatedNormalAtZero, 1.3, 0.25, 0.4)};
    t.x1_lo = -8.0; t.x1_hi = 10.0; t.x2_hi = 3.0;
  } else {
    throw std::invalid_argument("unknown builtin target: " + id);
  }
  t.validate();
  return t;
}

double margin_pdf(const MarginComponent& c, double x) {
  switch (c.family) {
    case MarginFamily::Normal: {
      const double z = (x - c.location) / c.scale;
      return gaussian_kernel(z) / c.scale;
    }
    case MarginFamily::Cauchy: {
      const double z = (x - c.location) / c.scale;
      return 1.0 / (pi * c.scale * (1.0 + z * z));
    }
    case MarginFamily::HalfNormal: {
      if (x < 0.0) return 0.0;
      const double z = x / c.scale;
      return 2.0 * gaussian_kernel(z) / c.scale;
    }
    case MarginFamily::Gamma: {
      if (x < 0.0) return 0.0;
      if (x == 0.0) {
        if (c.shape > 1.0) return 0.0;
        if (c.shape == 1.0) return 1.0 / c.scale;
        return std::numeric_limits<double>::infinity();
      }
      return std::exp((c.shape - 1.0) * std::log(x) - x / c.scale -
                      c.shape * std::log(c.scale) - log_gamma(c.shape));
    }
    case MarginFamily::Exponential:
      return x < 0.0 ? 0.0 : c.rate * std::exp(-c.rate * x);
    case MarginFamily::Logistic: {
      const double e = std::exp(-(x - c.location) / c.scale);
      return e / (c.scale * (1.0 + e) * (1.0 + e));
    }
    case MarginFamily::TruncatedNormalAtZero: {
      if (x < 0.0) return 0.0;
      const double z = (x - c.location) / c.scale;
      const double mass = 1.0 - normal_cdf(-c.location / c.scale);
      return gaussian_kernel(z) / (c.scale * mass);
    }
  }
  return 0.0;
}

double target_pdf(const TargetSpec& spec, const Obs2& x) {
  if (x.x2 < 0.0) throw std::invalid_argument("target_pdf: x2 must be >= 0");
  double m1 = 0.0, m2 = 0.0;
  for (const auto& c : spec.margin_x1) m1 += c.weight * margin_pdf(c, x.x1);
  for (const auto& c : spec.margin_x2) m2 += c.weight * margin_pdf(c, x.x2);
  return m1 * m2;
}

std::vector<Obs2> target_sample(const TargetSpec& spec, std::uint64_t seed,
                                std::size_t n) {
  if (n < 1) throw std::invalid_argument("target_sample: n must be >= 1");
  spec.validate();
  Sampler sampler(seed);
  std::vector<Obs2> out(n);
  for (auto& obs : out) {
    obs.x1 = sampler.draw_mixture(spec.margin_x1);
    obs.x2 = sampler.draw_mixture(spec.margin_x2);
  }
  return out;
}

namespace {

nlohmann::json margin_to_json(const std::vector<MarginComponent>& margin) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : margin) {
    nlohmann::json j{{"family", to_string(c.family)}, {"weight", c.weight}};
    switch (c.family) {
      case MarginFamily::Exponential:
        j["rate"] = c.rate;
        break;
      case MarginFamily::Gamma:
        j["shape"] = c.shape;
        j["scale"] = c.scale;
        break;
      case MarginFamily::HalfNormal:
        j["scale"] = c.scale;
        break;
      default:
        j["location"] = c.location;
        j["scale"] = c.scale;
    }
    arr.push_back(std::move(j));
  }
  return arr;
}

std::vector<MarginComponent> margin_from_json(const nlohmann::json& arr) {
  std::vector<MarginComponent> out;
  for (const auto& j : arr) {
    MarginComponent c;
    c.family = parse_margin_family(j.at("family").get<std::string>());
    c.weight = j.at("weight").get<double>();
    c.location = j.value("location", 0.0);
    c.scale = j.value("scale", 1.0);
    c.shape = j.value("shape", 1.0);
    c.rate = j.value("rate", 1.0);
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string target_to_json(const TargetSpec& spec) {
  nlohmann::json j{
      {"name", spec.name},
      {"margin_x1", margin_to_json(spec.margin_x1)},
      {"margin_x2", margin_to_json(spec.margin_x2)},
      {"box", {spec.x1_lo, spec.x1_hi, spec.x2_lo, spec.x2_hi}},
  };
  return j.dump(2);
}

TargetSpec target_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  TargetSpec spec;
  spec.name = j.value("name", "custom");
  spec.margin_x1 = margin_from_json(j.at("margin_x1"));
  spec.margin_x2 = margin_from_json(j.at("margin_x2"));
  const auto& box = j.at("box");
  if (!box.is_array() || box.size() != 4)
    throw std::invalid_argument("target json: box must be [x1_lo, x1_hi, x2_lo, x2_hi]");
  spec.x1_lo = box[0].get<double>();
  spec.x1_hi = box[1].get<double>();
  spec.x2_lo = box[2].get<double>();
  spec.x2_hi = box[3].get<double>();
  spec.validate();
  return spec;
}

}  // namespace ngkde
