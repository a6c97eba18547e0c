// Rao-Blackwellized Monte Carlo v1.0
// Copyright (c) 2026 The rbmc authors
//
// SPDX-License-Identifier: Apache-2.0


#ifndef HPP_RBMC_BIAS_ORACLE_INCLUDED
#define HPP_RBMC_BIAS_ORACLE_INCLUDED


#include <cstdint>
#include <vector>

#include "mh.hpp"
#include "model.hpp"
#include "stats.hpp"


// Truncation bias of the in-tour vanilla weight and its completion to an unbiased
// estimator of 1 / a(Z).
namespace rbmc::bias
{
	inline constexpr double tail_threshold = 1e-15;
	inline constexpr std::uint64_t default_tail_cap = 1'000'000;

	/// sum_{t >= 1} prod_{s <= t} (1 - alpha(Z, Y~_s)) with fresh Y~_s ~ Q(Z, .), stopped
	/// once the running product drops below tail_threshold. Throws degenerate_error if
	/// `cap` terms do not get there.
	[[nodiscard]] double completion_tail(
		state z,
		target_model const& target,
		proposal_kernel const& proposal,
		rng_stream& g,
		std::uint64_t cap = default_tail_cap);

	/// L^ + trailing_product * tail.
	[[nodiscard]] double completed_weight(tour_record const& tour, double tail, double trailing_product) noexcept;

	/// (1 - a) / (1 - r2).
	[[nodiscard]] double predicted_bias(double expected_acceptance, double rejection_second_moment) noexcept;

	struct conditioned_tour
	{
		tour_record tour;
		/// prod_{s < L} (1 - alpha(Z, Y_s)) over the rejected proposals.
		double trailing_product = 1;
		/// prod_{s <= L} (1 - alpha(Z, Y_s)) including the accepted proposal.
		double full_product = 1;
	};

	/// One tour started from the pinned state z, run until the first acceptance.
	[[nodiscard]] conditioned_tour simulate_conditioned_tour(
		state z,
		target_model const& target,
		proposal_kernel const& proposal,
		rng_stream& g,
		std::uint64_t max_tour_length = 10'000'000);

	struct bias_report
	{
		state z = 0;
		double expected_acceptance = 0;
		double rejection_second_moment = 0;
		double predicted_bias = 0;
		/// Mean of L_bar - L^ = trailing_product * tail.
		double empirical_bias = 0;
		double standard_error = 0;
		std::uint64_t tour_count = 0;

		/// Mean and standard error of L_bar.
		double completed_weight_mean = 0;
		double completed_weight_se = 0;
		/// Mean and standard error of L^ + full_product * tail.
		double full_completion_mean = 0;
		double full_completion_se = 0;
		/// Mean and standard error of 1 + tail (independent of the tour).
		double douc_robert_mean = 0;
		double douc_robert_se = 0;
		/// Mean and standard error of L^.
		double vanilla_weight_mean = 0;
		double vanilla_weight_se = 0;
		/// Chi-square fit of the waiting times L against Geometric(a(z)).
		stats::chi_square_result waiting_time_fit;
	};

	/// For every state of a discrete target, simulates `tours` tours pinned at that state
	/// on stream (rng.master_seed, rng.stream_index + z) and compares the Monte Carlo
	/// truncation bias against the closed form.
	[[nodiscard]] std::vector<bias_report> verify_bias_theorem(
		target_model const& target,
		proposal_kernel const& proposal,
		std::uint64_t tours,
		rng_stream_spec rng);
} // namespace rbmc::bias


#endif // !HPP_RBMC_BIAS_ORACLE_INCLUDED
