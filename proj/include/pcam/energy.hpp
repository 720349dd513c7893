#pragma once

#include <cstdint>

#include "pcam/geometry.hpp"
#include "pcam/params.hpp"

namespace pcam {

/// Virtual energy H(sigma) = -h sum_i sigma(i) - sum_i |S_sigma(i) + h|.
double virtual_energy(const ModelParams& p, const SpinConfig& c);

/// Finite-beta Hamiltonian G(sigma) = -h sum sigma(i) - (1/beta) sum log cosh(beta (S+h)).
/// G -> H as beta -> infinity; at finite beta, G - H = n log2/beta - tail with
/// tail = (1/beta) sum log1p(exp(-2 beta |S+h|)).
double hamiltonian_G(const ModelParams& p, const SpinConfig& c);

/// Energy cost Delta(src, dst) = sum over sites with dst(i)(S_src(i)+h) < 0 of 2|S_src(i)+h|.
double delta_cost(const ModelParams& p, const SpinConfig& src, const SpinConfig& dst);

/// Transition energy H(src) + Delta(src, dst); symmetric under reversibility.
double transition_energy(const ModelParams& p, const SpinConfig& src, const SpinConfig& dst);

// Exact-arithmetic forms: values in units of 1/scale.q, valid when scale.exact().

std::int64_t virtual_energy_scaled(const EnergyScale& scale, const SpinConfig& c);
std::int64_t delta_cost_scaled(const EnergyScale& scale, const SpinConfig& src,
                               const SpinConfig& dst);

}  // namespace pcam
