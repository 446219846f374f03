#include "levydrift/rng.hpp"

#include <cmath>

namespace levydrift {

std::uint64_t substream_seed(std::uint64_t master, std::uint64_t cell,
                             std::uint64_t rep) {
  std::uint64_t s = master;
  std::uint64_t a = splitmix64(s);
  s ^= cell * 0xd1342543de82ef95ULL;
  std::uint64_t b = splitmix64(s);
  s ^= rep * 0xaf251af3b0f025b5ULL;
  std::uint64_t c = splitmix64(s);
  return a ^ (b + 0x9e3779b97f4a7c15ULL * (rep + 1)) ^ (c << 1);
}

double Rng::uniform() {
  return std::uniform_real_distribution<double>(0.0, 1.0)(eng_);
}

double Rng::normal() {
  return std::normal_distribution<double>(0.0, 1.0)(eng_);
}

double Rng::exponential() {
  return std::exponential_distribution<double>(1.0)(eng_);
}

double Rng::gamma(double shape, double scale) {
  return std::gamma_distribution<double>(shape, scale)(eng_);
}

long long Rng::poisson(double mean) {
  if (mean <= 0.0) return 0;
  return std::poisson_distribution<long long>(mean)(eng_);
}

double Rng::stable(double alpha, double beta) {
  double u;
  do {
    u = uniform();
  } while (u <= 0.0 || u >= 1.0);
  const double U = M_PI * (u - 0.5);
  double W;
  do {
    W = exponential();
  } while (W <= 0.0);

  if (alpha == 1.0) {
    if (beta == 0.0) return std::tan(U);
    const double hp = M_PI / 2.0;
    return (2.0 / M_PI) * ((hp + beta * U) * std::tan(U) -
                           beta * std::log((hp * W * std::cos(U)) / (hp + beta * U)));
  }
  const double t = beta * std::tan(M_PI * alpha / 2.0);
  const double B = std::atan(t) / alpha;
  const double S = std::pow(1.0 + t * t, 1.0 / (2.0 * alpha));
  const double aUB = alpha * (U + B);
  return S * std::sin(aUB) / std::pow(std::cos(U), 1.0 / alpha) *
         std::pow(std::cos(U - aUB) / W, (1.0 - alpha) / alpha);
}

}  // namespace levydrift
