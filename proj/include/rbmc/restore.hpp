// Rao-Blackwellized Monte Carlo v1.0
// Copyright (c) 2026 The rbmc authors
//
// SPDX-License-Identifier: Apache-2.0


#ifndef HPP_RBMC_RESTORE_INCLUDED
#define HPP_RBMC_RESTORE_INCLUDED


#include <cstdint>
#include <span>
#include <vector>

#include "mh.hpp"
#include "model.hpp"
#include "summation.hpp"


namespace rbmc
{
	enum class rate_variant
	{
		/// kappa = c * C_mu * q / pi; needs the exact normalization of the target.
		with_normalization,
		/// kappa = c~ * q / pi with C_mu absorbed into the constant.
		absorbed
	};

	struct rate_constant
	{
		rate_variant variant = rate_variant::absorbed;
		double value = 1;

		friend bool operator==(rate_constant const&, rate_constant const&) = default;
	};

	struct restore_config
	{
		target_model target;
		/// Proposal of the Metropolis-Hastings local dynamics.
		proposal_kernel local_proposal;
		/// State-independent regeneration distribution.
		independent_distribution transfer;
		double holding_rate = 1;
		rate_constant rate;
		/// Number of tours.
		std::uint64_t tour_budget = 20;
		estimator_mode mode = estimator_mode::standard;
		rng_stream_spec rng;
		/// Holding intervals per tour after which the run aborts with degenerate_error.
		std::uint64_t max_events_per_tour = 10'000'000;
		/// Redraws allowed when a regeneration lands where pi = 0.
		std::uint64_t max_regeneration_retries = 1'000;
		bool record_events = false;
		/// Strictly increasing tour counts in [1, tour_budget] at which the running
		/// estimate is recorded.
		std::vector<std::uint64_t> checkpoints;
	};

	enum class jump_terminal
	{
		local_transition,
		regeneration
	};

	/// One holding interval of the piecewise constant process.
	struct jump_event
	{
		double duration = 0;
		state occupying_state = 0;
		jump_terminal terminal = jump_terminal::local_transition;
	};

	struct tour_output
	{
		/// Mode-dependent weight T of the tour.
		double lifetime = 0;
		/// Mode-dependent weighted sums I~ per integrand.
		std::vector<double> weighted_sums;
		/// Sum of the sampled holding intervals, independent of the mode.
		double physical_lifetime = 0;
		std::uint64_t local_steps = 0;
		std::uint64_t local_acceptances = 0;
		std::uint64_t regeneration_retries = 0;
		std::vector<jump_event> events;
	};

	/// kappa(x); +inf where pi(x) = 0.
	[[nodiscard]] double killing_rate(restore_config const& config, state x);

	/// One tour of the Rao-Blackwellized Jump Restore estimator. Clocks, proposals and
	/// acceptance uniforms come from `g`; the regeneration point from `transfer_g`.
	///
	/// On termination the non-vanilla modes credit the sampled killing time, i.e. the
	/// actual length of the final holding interval.
	[[nodiscard]] tour_output simulate_tour(
		restore_config const& config,
		std::span<integrand const> integrands,
		rng_stream& g,
		rng_stream& transfer_g);

	struct restore_diagnostics
	{
		/// Sum of the physical tour lifetimes.
		double total_lifetime = 0;
		std::uint64_t tour_count = 0;
		std::uint64_t local_steps = 0;
		std::uint64_t local_acceptances = 0;
		std::uint64_t regeneration_retries = 0;
		std::vector<jump_event> events;

		[[nodiscard]] double mean_tour_lifetime() const noexcept
		{
			return tour_count == 0 ? 0 : total_lifetime / static_cast<double>(tour_count);
		}
	};

	struct restore_result
	{
		std::vector<double> estimates;
		estimator_accumulator accumulator{ 0 };
		restore_diagnostics diagnostics;
		/// checkpoint_estimates[c][k]: estimate of integrand k after checkpoints[c] tours.
		std::vector<std::vector<double>> checkpoint_estimates;
	};

	/// Runs tour_budget tours from the streams (rng, 0) and (rng, 1); the estimate is
	/// the ratio of the summed weighted sums to the summed tour weights.
	[[nodiscard]] restore_result run_jump_restore(restore_config const& config, std::span<integrand const> integrands);

	/// C_mu = c~ * total_lifetime / tour_count for an absorbed-variant run.
	[[nodiscard]] double estimate_normalization(double rate_constant, double total_lifetime, std::uint64_t tour_count);

	/// Metropolis-Hastings with the mixture proposal (1 - delta) local + delta transfer.
	[[nodiscard]] mh_result mixture_mh_baseline(
		mh_run_config config,
		independent_distribution const& transfer,
		double large_step_probability,
		std::span<integrand const> integrands);
} // namespace rbmc


#endif // !HPP_RBMC_RESTORE_INCLUDED
