// Rao-Blackwellized Monte Carlo v1.0
// Copyright (c) 2026 The rbmc authors
//
// SPDX-License-Identifier: Apache-2.0


#ifndef HPP_RBMC_MH_INCLUDED
#define HPP_RBMC_MH_INCLUDED


#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "model.hpp"
#include "summation.hpp"


namespace rbmc
{
	enum class estimator_mode
	{
		/// Ergodic average of the chain states.
		standard,
		/// Every proposal contributes (1 - alpha) f(x) + alpha f(y).
		waste_recycling,
		/// Each accepted state is weighted by the tour-local estimate of 1 / a(x).
		vanilla
	};

	inline constexpr estimator_mode all_estimator_modes[] = { estimator_mode::standard, estimator_mode::waste_recycling, estimator_mode::vanilla };

	[[nodiscard]] std::string_view to_string(estimator_mode mode) noexcept;
	/// Accepts "standard", "waste_recycling" and "vanilla".
	[[nodiscard]] estimator_mode parse_estimator_mode(std::string_view text);

	struct mh_step_result
	{
		state next;
		state proposal;
		double alpha;
		bool accepted;
	};

	/// One Metropolis-Hastings update: y ~ Q(x, .), then u ~ U[0, 1) from the same stream,
	/// accepted iff u < alpha(x, y).
	[[nodiscard]] mh_step_result mh_step(state x, target_model const& target, proposal_kernel const& proposal, rng_stream& g);

	/// One accepted state together with how long the chain stayed there.
	struct tour_record
	{
		/// The accepted state Z.
		state accepted_state = 0;
		/// Number of proposals made from Z up to and including the accepted one (L).
		std::uint64_t observed_waiting = 0;
		/// 1 + sum_{t <= L} prod_{s <= t} (1 - alpha(Z, Y_s)) over the tour's own proposals.
		double vanilla_weight = 1;
		/// Chain time at which Z was accepted; the initial state counts as accepted at 0.
		std::uint64_t acceptance_time = 0;
		/// False for a trailing tour that ended without an acceptance.
		bool complete = true;

		friend bool operator==(tour_record const&, tour_record const&) = default;
	};

	/// Splits a chain trace (the steps taken from `initial`) into tours. Repeating each
	/// accepted state observed_waiting times reproduces the pre-move states of the trace.
	/// A trailing run of rejections is returned as a final record with complete = false.
	[[nodiscard]] std::vector<tour_record> decompose_tours(state initial, std::span<mh_step_result const> trace);

	/// 1 + sum_{t=1}^{L} prod_{s=1}^{t} (1 - alpha(Z, proposals[s - 1])).
	[[nodiscard]] double vanilla_weight_from_tour(
		state accepted_state,
		std::span<state const> proposals,
		target_model const& target,
		proposal_kernel const& proposal);

	struct initial_state_policy
	{
		enum class kind
		{
			from_exact_sampler,
			fixed_point
		};

		kind policy = kind::from_exact_sampler;
		state point = 0;
		std::uint64_t burn_in = 0;

		[[nodiscard]] static initial_state_policy from_exact_sampler(std::uint64_t burn_in = 0) noexcept
		{
			return { kind::from_exact_sampler, 0, burn_in };
		}

		[[nodiscard]] static initial_state_policy fixed_point(state const point, std::uint64_t const burn_in = 10'000) noexcept
		{
			return { kind::fixed_point, point, burn_in };
		}
	};

	struct mh_run_config
	{
		target_model target;
		proposal_kernel proposal;
		initial_state_policy initial = initial_state_policy::from_exact_sampler();
		/// Number of chain samples n.
		std::uint64_t sample_budget = 100;
		estimator_mode mode = estimator_mode::standard;
		rng_stream_spec rng;
		/// Consecutive rejections after which the run aborts with degenerate_error.
		std::uint64_t max_tour_length = 10'000'000;
		bool record_tours = false;
		bool record_trace = false;
		/// Strictly increasing sample counts in [1, sample_budget] at which the running
		/// estimate is recorded.
		std::vector<std::uint64_t> checkpoints;
	};

	struct mh_diagnostics
	{
		/// Initial state after burn-in.
		state initial_state = 0;
		std::uint64_t proposals = 0;
		std::uint64_t acceptances = 0;
		/// Chain states visited including the initial one: proposals + 1.
		std::uint64_t samples = 0;
		std::vector<tour_record> tours;
		std::vector<mh_step_result> trace;
	};

	struct mh_result
	{
		std::vector<double> estimates;
		estimator_accumulator accumulator{ 0 };
		mh_diagnostics diagnostics;
		/// checkpoint_estimates[c][k]: running estimate of integrand k at checkpoints[c].
		std::vector<std::vector<double>> checkpoint_estimates;
	};

	/// Rao-Blackwellized Metropolis-Hastings estimator.
	///
	/// Standard and waste-recycling runs stop after sample_budget chain samples
	/// (sample_budget - 1 proposals). A vanilla run stops at the first acceptance at or
	/// after proposal sample_budget, so its closed tours cover at least sample_budget
	/// states; with alpha = 1 throughout it reproduces the standard estimate.
	///
	/// The chain itself does not depend on the mode: for a fixed rng spec all three modes
	/// see identical states and proposals up to the point where they stop.
	[[nodiscard]] mh_result run_mh_estimator(mh_run_config const& config, std::span<integrand const> integrands);
} // namespace rbmc


#endif // !HPP_RBMC_MH_INCLUDED
