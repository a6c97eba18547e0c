// Rao-Blackwellized Monte Carlo v1.0
// Copyright (c) 2026 The rbmc authors
//
// SPDX-License-Identifier: Apache-2.0


#ifndef HPP_RBMC_MODEL_INCLUDED
#define HPP_RBMC_MODEL_INCLUDED


#include <cstddef>
#include <functional>
#include <optional>
#include <string>

#include "error.hpp"
#include "rng.hpp"


namespace rbmc
{
	/// Points of the state space. Finite discrete spaces use the integers 0, ..., n - 1.
	using state = double;

	using integrand = std::function<double(state)>;

	enum class measure_kind
	{
		continuous,
		discrete
	};

	class reference_measure
	{
	public:
		/// Lebesgue measure on the real line.
		[[nodiscard]] static reference_measure continuous_1d() noexcept { return {}; }

		/// Counting measure on {0, ..., state_count - 1}; requires state_count >= 2.
		[[nodiscard]] static reference_measure discrete_finite(std::size_t const state_count)
		{
			if (state_count < 2)
				throw config_error{ "discrete reference measure needs at least two states" };
			return reference_measure{ measure_kind::discrete, state_count };
		}

		[[nodiscard]] measure_kind kind() const noexcept { return m_kind; }
		[[nodiscard]] bool is_discrete() const noexcept { return m_kind == measure_kind::discrete; }
		[[nodiscard]] std::size_t state_count() const noexcept { return m_state_count; }

		/// True if x is a point of the space (any real for the continuous case).
		[[nodiscard]] bool contains(state const x) const noexcept;

	private:
		reference_measure() noexcept = default;
		reference_measure(measure_kind const kind, std::size_t const state_count) noexcept
			: m_kind(kind),
			  m_state_count(state_count)
		{}

		measure_kind m_kind = measure_kind::continuous;
		std::size_t m_state_count = 0;
	};

	/// Unnormalized target density pi with respect to `reference`.
	///
	/// log_density may return -inf (pi = 0) but never +inf or NaN.
	struct target_model
	{
		std::string name;
		reference_measure reference = reference_measure::continuous_1d();
		std::function<double(state)> log_density;

		/// d/dx log pi; continuous targets only. Empty when unavailable.
		std::function<double(state)> log_gradient;
		/// Integral of pi against the reference measure, when known exactly.
		std::optional<double> exact_normalization;
		/// Draws from the normalized target. Empty when unavailable.
		std::function<state(rng_stream&)> exact_sampler;
	};

	/// A state-independent distribution with a density; used both as an independence
	/// proposal and as the regeneration (transfer) distribution of Jump Restore.
	struct independent_distribution
	{
		std::string name;
		std::function<state(rng_stream&)> sample;
		std::function<double(state)> log_density;
		/// Inverse CDF on (0, 1); empty for discrete distributions.
		std::function<state(double)> quantile;
	};

	/// Conditional sampler Q(x, .) with density q(x, .).
	struct proposal_kernel
	{
		std::string name;
		std::function<state(state, rng_stream&)> sample;
		std::function<double(state, state)> log_density;
		/// q(x, y) = q(y, x) for all x, y.
		bool symmetric = false;
		/// Conditional inverse CDF (x, u) -> y on (0, 1); used by the quadrature for the
		/// expected acceptance of continuous kernels. Empty when unavailable.
		std::function<state(state, double)> quantile;
	};

	/// Metropolis-Hastings acceptance probability from the four log terms:
	/// min(1, pi(y) q(y, x) / (pi(x) q(x, y))) when pi(x) q(x, y) > 0 and 1 otherwise.
	[[nodiscard]] double acceptance_probability(
		double log_target_x,
		double log_target_y,
		double log_proposal_xy,
		double log_proposal_yx) noexcept;

	[[nodiscard]] double acceptance_probability(
		target_model const& target,
		proposal_kernel const& proposal,
		state x,
		state y);

	/// Same as above with log pi(x) supplied by the caller (the chain caches it).
	[[nodiscard]] double acceptance_probability(
		target_model const& target,
		proposal_kernel const& proposal,
		state x,
		double log_target_x,
		state y);
} // namespace rbmc


#endif // !HPP_RBMC_MODEL_INCLUDED
