// Rao-Blackwellized Monte Carlo v1.0
// Copyright (c) 2026 The rbmc authors
//
// SPDX-License-Identifier: Apache-2.0


#ifndef HPP_RBMC_CATALOG_INCLUDED
#define HPP_RBMC_CATALOG_INCLUDED


#include <span>
#include <vector>

#include "model.hpp"


// Built-in targets, distributions and proposal kernels. Parameters are standard
// deviations for Gaussians, scales for Cauchy and rates for exponentials.
namespace rbmc::catalog
{
	[[nodiscard]] target_model normal_target(double mean = 0, double standard_deviation = 1);
	[[nodiscard]] target_model standard_normal_target();
	/// scale * phi(x) with phi the standard normal density; the normalization is `scale`.
	[[nodiscard]] target_model scaled_normal_target(double scale);
	[[nodiscard]] target_model exponential_target(double rate = 1);
	[[nodiscard]] target_model cauchy_target(double scale);
	/// Unnormalized weights over {0, ..., n - 1}; at least two states, nonnegative, not all zero.
	[[nodiscard]] target_model discrete_target(std::span<double const> weights);

	[[nodiscard]] independent_distribution normal_distribution(double mean, double standard_deviation);
	[[nodiscard]] independent_distribution cauchy_distribution(double scale);
	[[nodiscard]] independent_distribution exponential_distribution(double rate);
	/// Probabilities over {0, ..., n - 1}; must sum to 1 within 1e-12.
	[[nodiscard]] independent_distribution discrete_distribution(std::span<double const> probabilities);

	/// y ~ N(x, standard_deviation^2).
	[[nodiscard]] proposal_kernel gaussian_random_walk(double standard_deviation);
	/// y ~ distribution, independently of x.
	[[nodiscard]] proposal_kernel independence_proposal(independent_distribution distribution);
	[[nodiscard]] proposal_kernel independent_gaussian(double standard_deviation);
	[[nodiscard]] proposal_kernel independent_cauchy(double scale);
	[[nodiscard]] proposal_kernel independent_exponential(double rate);
	/// Row-stochastic matrix over a finite space; every row must sum to 1 within 1e-12.
	[[nodiscard]] proposal_kernel discrete_matrix(std::vector<std::vector<double>> rows);
	[[nodiscard]] proposal_kernel discrete_uniform(std::size_t state_count);
	/// First-order Langevin move y = x + (step^2 / 2) grad log pi(x) + step * xi, xi ~ N(0, 1).
	[[nodiscard]] proposal_kernel langevin(target_model const& target, double step);
	/// (1 - large_step_probability) * local + large_step_probability * global.
	[[nodiscard]] proposal_kernel mixture(proposal_kernel local, independent_distribution global, double large_step_probability);
	/// Always proposes the current state.
	[[nodiscard]] proposal_kernel point_mass_self();

	[[nodiscard]] double standard_normal_quantile(double u);
} // namespace rbmc::catalog


#endif // !HPP_RBMC_CATALOG_INCLUDED
