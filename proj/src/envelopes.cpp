#include "sao/envelopes.hpp"

#include <cmath>
#include <string>

#include "sao/errors.hpp"

namespace sao {
namespace {

void check_common(int num_arms, double log_beta, std::int64_t n) {
  if (num_arms < 2) {
    throw OutOfDomainError("envelope needs at least 2 arms");
  }
  if (!(log_beta > 0.0)) {
    throw OutOfDomainError("envelope needs log(beta) > 0");
  }
  if (n < 1) {
    throw OutOfDomainError("envelope needs a positive horizon");
  }
}

}  // namespace

double stochastic_regret_envelope(int num_arms, double log_beta, double gap) {
  check_common(num_arms, log_beta, 1);
  if (!(gap > 0.0)) {
    throw OutOfDomainError("stochastic envelope undefined for gap " +
                           std::to_string(gap));
  }
  const double k = static_cast<double>(num_arms);
  return 260.0 * k * (1.0 + std::log(k)) * log_beta * log_beta / gap;
}

double adversarial_regret_envelope(int num_arms, std::int64_t n,
                                   double log_beta) {
  check_common(num_arms, log_beta, n);
  const double k = static_cast<double>(num_arms);
  const double nd = static_cast<double>(n);
  const double kl = k * log_beta;
  return 60.0 * (1.0 + std::log(k)) * (1.0 + std::log(nd)) *
             std::sqrt(nd * k * log_beta + 5.0 * kl * kl) +
         200.0 * kl * kl;
}

double exp3p_regret_envelope(std::int64_t n, int num_arms, double delta) {
  if (num_arms < 2 || n < 1) {
    throw OutOfDomainError("envelope needs n >= 1 and at least 2 arms");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw OutOfDomainError("envelope needs a confidence level in (0, 1)");
  }
  const double k = static_cast<double>(num_arms);
  return 5.15 * std::sqrt(static_cast<double>(n) * k * std::log(k / delta));
}

}  // namespace sao
