// Rao-Blackwellized Monte Carlo v1.0
// Copyright (c) 2026 The rbmc authors
//
// SPDX-License-Identifier: Apache-2.0


#ifndef HPP_RBMC_EXPERIMENTS_INCLUDED
#define HPP_RBMC_EXPERIMENTS_INCLUDED


#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bias_oracle.hpp"
#include "mh.hpp"
#include "model.hpp"
#include "restore.hpp"


namespace rbmc::experiments
{
	enum class command_kind
	{
		table,
		fanchart,
		bias_check,
		normalize_check
	};

	enum class sampler_kind
	{
		mh,
		jump_restore
	};

	/// A named family with scalar parameters, e.g. {"normal", {{"mean", 0}, {"sd", 1}}}.
	struct family_spec
	{
		std::string family;
		std::map<std::string, double> parameters;
		/// Weights of discrete families.
		std::vector<double> weights;
		/// Rows of a discrete proposal matrix.
		std::vector<std::vector<double>> matrix;

		friend bool operator==(family_spec const&, family_spec const&) = default;
	};

	struct integrand_spec
	{
		/// "x", "x^2", "indicator", "expected_acceptance" or "constant".
		std::string kind;
		/// Indicator threshold t in 1{x > t}.
		double threshold = 0;
		/// Value of the constant integrand.
		double value = 1;

		friend bool operator==(integrand_spec const&, integrand_spec const&) = default;
	};

	struct experiment_spec
	{
		std::string name;
		command_kind command = command_kind::table;
		sampler_kind sampler = sampler_kind::mh;
		family_spec target;
		/// Family of the (local) proposal; `grid` supplies its single free parameter.
		family_spec proposal;
		std::vector<double> grid;
		/// Regeneration distribution; Jump Restore only.
		std::optional<family_spec> transfer;
		std::vector<integrand_spec> integrands;
		/// Samples n for MH, tours for Jump Restore and the bias check.
		std::uint64_t budget = 100;
		std::uint64_t realizations = 1000;
		std::uint64_t seed = 0;
		std::uint64_t burn_in = 0;
		double holding_rate = 1;
		rate_constant rate;
		/// Fan charts: lower and upper quantile levels (one level draws a single band).
		std::vector<double> quantiles{ 0.05, 0.95 };
		/// Fan charts: number of checkpoints.
		std::uint64_t checkpoints = 100;
		/// Bias check: allowed |empirical - predicted| in standard errors.
		double sigma_gate = 4;
		/// Normalize check: allowed relative error and the tour count below which the gate is off.
		double relative_tolerance = 0.05;
		std::uint64_t gate_floor = 1'000;

		friend bool operator==(experiment_spec const&, experiment_spec const&) = default;
	};

	[[nodiscard]] std::string to_string(command_kind kind);
	[[nodiscard]] std::string to_string(sampler_kind kind);

	/// Throws config_error with a field pointer on the first inconsistency.
	void validate(experiment_spec const& spec);

	[[nodiscard]] target_model build_target(family_spec const& spec);
	[[nodiscard]] independent_distribution build_distribution(family_spec const& spec);
	/// `parameter` is the grid value; ignored by parameter-free families.
	[[nodiscard]] proposal_kernel build_proposal(family_spec const& spec, double parameter, target_model const& target);
	[[nodiscard]] std::string integrand_name(integrand_spec const& spec);
	/// a(x) integrands are bound to the given target and proposal; continuous targets
	/// interpolate a(x) on [curve_lower, curve_upper] and integrate directly outside.
	[[nodiscard]] std::vector<integrand> build_integrands(
		std::span<integrand_spec const> specs,
		target_model const& target,
		proposal_kernel const& proposal,
		double curve_lower = -12,
		double curve_upper = 12);

	/// Runs one realization of the configured sampler in the given mode.
	struct realization_output
	{
		std::vector<double> estimates;
		std::vector<std::vector<double>> checkpoint_estimates;
		/// Proposals (MH) or local steps (Jump Restore) consumed.
		std::uint64_t proposals = 0;
	};

	struct cell_setup
	{
		target_model target;
		proposal_kernel proposal;
		std::optional<independent_distribution> transfer;
		std::vector<integrand> integrands;
	};

	[[nodiscard]] cell_setup build_cell(experiment_spec const& spec, double parameter);

	[[nodiscard]] realization_output run_realization(
		experiment_spec const& spec,
		cell_setup const& cell,
		estimator_mode mode,
		rng_stream_spec rng,
		std::vector<std::uint64_t> const& checkpoints = {});

	struct variance_ratio_cell
	{
		std::string sampler;
		std::string target;
		std::string proposal;
		double parameter = 0;
		std::string integrand;
		double ratio_vanilla = 0;
		double ratio_waste = 0;
		/// Indexed standard, vanilla, waste-recycling.
		double variance[3]{};
		double mean[3]{};
		double standard_error[3]{};
		std::uint64_t realizations = 0;
		std::uint64_t budget = 0;
		std::uint64_t seed = 0;
		/// Standard-estimator variance is zero: ratios are undefined.
		bool degenerate = false;
		/// Set when the sampler aborted the cell.
		std::optional<std::string> failure;
	};

	inline constexpr std::size_t standard_index = 0;
	inline constexpr std::size_t vanilla_index = 1;
	inline constexpr std::size_t waste_index = 2;

	/// Runs all three modes on stream-matched realizations: realization r of grid cell c
	/// uses stream (seed, c * realizations + r) in every mode.
	[[nodiscard]] std::vector<variance_ratio_cell> variance_ratio_table(experiment_spec const& spec, unsigned jobs = 1);

	void write_table_csv(std::ostream& out, std::vector<variance_ratio_cell> const& cells);
	/// Aligned text with one row per grid value and "vanilla / waste" per integrand.
	void write_table_text(std::ostream& out, experiment_spec const& spec, std::vector<variance_ratio_cell> const& cells);

	/// `count` log-spaced distinct integers in [1, last], always including 1 and last.
	[[nodiscard]] std::vector<std::uint64_t> log_spaced_checkpoints(std::uint64_t last, std::uint64_t count);

	struct fan_chart_row
	{
		std::uint64_t t = 0;
		double q_lo_std = 0;
		double q_hi_std = 0;
		double q_lo_van = 0;
		double q_hi_van = 0;
		double min_std = 0;
		double max_std = 0;
		double min_van = 0;
		double max_van = 0;
	};

	struct fan_chart_result
	{
		std::vector<fan_chart_row> rows;
		/// trajectories[m][r][c]: realization r of mode m (0 standard, 1 vanilla) at checkpoint c.
		std::vector<std::vector<std::vector<double>>> trajectories;
	};

	/// Running estimates of the first integrand at each checkpoint over all realizations,
	/// for the standard and vanilla estimators. MH checkpoints are log-spaced sample
	/// counts; Jump Restore checkpoints are tour counts.
	[[nodiscard]] fan_chart_result fan_chart(experiment_spec const& spec, unsigned jobs = 1);

	void write_fan_chart_csv(std::ostream& out, fan_chart_result const& chart);
	/// Self-contained SVG: per-realization trajectories and the quantile bands.
	void write_fan_chart_svg(std::ostream& out, experiment_spec const& spec, fan_chart_result const& chart);

	struct budget_row
	{
		estimator_mode mode = estimator_mode::standard;
		std::uint64_t realization = 0;
		std::uint64_t proposals = 0;
		double seconds = 0;
		double estimate = 0;
	};

	struct budget_summary
	{
		estimator_mode mode = estimator_mode::standard;
		/// Proposals the mode needs at minimum: n - 1 (MH standard and waste-recycling), n (MH vanilla) or tours.
		std::uint64_t nominal = 0;
		std::uint64_t total_proposals = 0;
		std::uint64_t max_proposals = 0;
		double total_seconds = 0;
		double variance = 0;
		double variance_per_proposal = 0;
		double variance_per_second = 0;
	};

	struct budget_report
	{
		std::vector<budget_row> rows;
		std::vector<budget_summary> summary;
	};

	/// Realized proposal counts and wall-clock per mode for the first grid value and the
	/// first integrand. variance_per_proposal is variance times mean proposals, and
	/// variance_per_second is variance times mean seconds.
	[[nodiscard]] budget_report equal_budget_report(experiment_spec const& spec);

	void write_budget_csv(std::ostream& out, budget_report const& report);

	struct bias_check_result
	{
		std::vector<bias::bias_report> reports;
		bool passed = true;
	};

	/// |empirical - predicted| <= sigma * SE for every report (exact equality when SE = 0).
	[[nodiscard]] bool bias_gate(std::vector<bias::bias_report> const& reports, double sigma);

	[[nodiscard]] bias_check_result bias_check(experiment_spec const& spec);

	void write_bias_csv(std::ostream& out, std::vector<bias::bias_report> const& reports);

	struct normalize_check_result
	{
		double estimate = 0;
		double truth = 0;
		double relative_error = 0;
		std::uint64_t tours = 0;
		double total_lifetime = 0;
		bool gate_active = false;
		bool passed = true;
	};

	/// One standard-mode Jump Restore run with the absorbed killing rate.
	[[nodiscard]] normalize_check_result normalize_check(experiment_spec const& spec);

	void write_normalize_csv(std::ostream& out, normalize_check_result const& result);

	/// Formats doubles for reports: shortest round-trip representation.
	[[nodiscard]] std::string format_number(double value);
} // namespace rbmc::experiments


#endif // !HPP_RBMC_EXPERIMENTS_INCLUDED
