// Rao-Blackwellized Monte Carlo v1.0
// Copyright (c) 2026 The rbmc authors
//
// SPDX-License-Identifier: Apache-2.0


#ifndef HPP_RBMC_EXACT_INCLUDED
#define HPP_RBMC_EXACT_INCLUDED


#include <cstddef>
#include <memory>
#include <vector>

#include "model.hpp"


// Exhaustive-summation oracles for finite discrete spaces, plus quadrature for the
// expected acceptance of continuous one-dimensional kernels.
namespace rbmc::exact
{
	using matrix = std::vector<std::vector<double>>;

	/// a(x) = sum_y q(x, y) alpha(x, y). Throws config_error on continuous targets.
	[[nodiscard]] double expected_acceptance(target_model const& target, proposal_kernel const& proposal, state x);

	/// r2(x) = sum_y q(x, y) (1 - alpha(x, y))^2. Throws degenerate_error if r2(x) = 1.
	[[nodiscard]] double rejection_second_moment(target_model const& target, proposal_kernel const& proposal, state x);

	/// Normalized target probabilities pi(x) / sum pi.
	[[nodiscard]] std::vector<double> normalized_target(target_model const& target);

	/// Proposal matrix q(x, y).
	[[nodiscard]] matrix proposal_matrix(target_model const& target, proposal_kernel const& proposal);

	/// Metropolis-Hastings transition matrix P(x, y) = q(x, y) alpha(x, y) + [x = y] (1 - a(x)).
	[[nodiscard]] matrix transition_matrix(target_model const& target, proposal_kernel const& proposal);

	/// Transition matrix of the augmented chain (current state, next proposal) over pairs
	/// indexed x * n + y:  K((x, y), (x', y')) = [(1 - alpha) [x' = x] + alpha [x' = y]] q(x', y').
	[[nodiscard]] matrix augmented_transition_matrix(target_model const& target, proposal_kernel const& proposal);

	/// mu_aug(x, y) = mu(x) q(x, y), indexed x * n + y.
	[[nodiscard]] std::vector<double> augmented_invariant(target_model const& target, proposal_kernel const& proposal);

	/// Row vector times matrix.
	[[nodiscard]] std::vector<double> left_multiply(std::vector<double> const& row, matrix const& m);

	/// a(x) for continuous kernels by adaptive Gauss-Kronrod over the proposal's quantile
	/// function, a(x) = int_0^1 alpha(x, Q_x^{-1}(u)) du. Requires proposal.quantile.
	[[nodiscard]] double expected_acceptance_quadrature(target_model const& target, proposal_kernel const& proposal, state x);

	/// a(x) as a cheap callable. Discrete targets use exhaustive summation per state;
	/// continuous targets use a cubic B-spline through quadrature values on
	/// [lower, upper] and direct quadrature outside it.
	class expected_acceptance_curve
	{
	public:
		expected_acceptance_curve(target_model target, proposal_kernel proposal, double lower = -12, double upper = 12, std::size_t nodes = 2401);

		[[nodiscard]] double operator()(state x) const;

	private:
		struct impl;
		std::shared_ptr<impl const> m_impl;
	};
} // namespace rbmc::exact


#endif // !HPP_RBMC_EXACT_INCLUDED
