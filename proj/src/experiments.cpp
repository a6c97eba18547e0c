// Rao-Blackwellized Monte Carlo v1.0
// Copyright (c) 2026 The rbmc authors
//
// SPDX-License-Identifier: Apache-2.0


#include <rbmc/experiments.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include <rbmc/catalog.hpp>
#include <rbmc/exact.hpp>
#include <rbmc/parallel.hpp>
#include <rbmc/stats.hpp>


namespace rbmc::experiments
{
	namespace
	{
		constexpr double nan = std::numeric_limits<double>::quiet_NaN();

		double parameter(family_spec const& spec, std::string const& key, std::string const& pointer)
		{
			auto const it = spec.parameters.find(key);
			if (it == spec.parameters.end())
				throw config_error{ "family '" + spec.family + "' needs parameter '" + key + "'", pointer + "/parameters/" + key };
			return it->second;
		}

		double positive_parameter(family_spec const& spec, std::string const& key, std::string const& pointer)
		{
			double const value = parameter(spec, key, pointer);
			if (!(value > 0) || !std::isfinite(value))
				throw config_error{ "parameter '" + key + "' must be positive and finite", pointer + "/parameters/" + key };
			return value;
		}

		bool proposal_takes_parameter(std::string const& family)
		{
			return family == "random_walk_normal" || family == "independent_normal" || family == "independent_cauchy"
				|| family == "independent_exponential" || family == "langevin";
		}

		std::string csv_field(std::string const& text)
		{
			if (text.find_first_of(",\"\n") == std::string::npos)
				return text;
			std::string quoted = "\"";
			for (char const c : text)
			{
				if (c == '"')
					quoted += '"';
				quoted += c;
			}
			return quoted + '"';
		}

		std::pair<double, double> acceptance_curve_range(family_spec const& spec)
		{
			if (spec.family == "exponential")
				return { 0, 40 / spec.parameters.at("rate") };
			if (spec.family == "normal")
			{
				double const mean = spec.parameters.at("mean"), sd = spec.parameters.at("sd");
				return { mean - 12 * sd, mean + 12 * sd };
			}
			if (spec.family == "cauchy")
				return { -200 * spec.parameters.at("scale"), 200 * spec.parameters.at("scale") };
			return { -12, 12 };
		}
	} // namespace

	std::string to_string(command_kind const kind)
	{
		switch (kind)
		{
		case command_kind::table:
			return "table";
		case command_kind::fanchart:
			return "fanchart";
		case command_kind::bias_check:
			return "bias-check";
		case command_kind::normalize_check:
			return "normalize-check";
		}
		return "unknown";
	}

	std::string to_string(sampler_kind const kind)
	{
		return kind == sampler_kind::mh ? "mh" : "jump_restore";
	}

	std::string format_number(double const value)
	{
		if (std::isnan(value))
			return "nan";
		if (std::isinf(value))
			return value > 0 ? "inf" : "-inf";
		char buffer[64];
		auto const [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
		return ec == std::errc{} ? std::string(buffer, end) : std::string{ "nan" };
	}

	target_model build_target(family_spec const& spec)
	{
		std::string const pointer = "/target";
		if (spec.family == "normal")
			return catalog::normal_target(parameter(spec, "mean", pointer), positive_parameter(spec, "sd", pointer));
		if (spec.family == "scaled_normal")
			return catalog::scaled_normal_target(positive_parameter(spec, "scale", pointer));
		if (spec.family == "exponential")
			return catalog::exponential_target(positive_parameter(spec, "rate", pointer));
		if (spec.family == "cauchy")
			return catalog::cauchy_target(positive_parameter(spec, "scale", pointer));
		if (spec.family == "discrete")
		{
			if (spec.weights.size() < 2)
				throw config_error{ "discrete target needs at least two weights", pointer + "/weights" };
			return catalog::discrete_target(spec.weights);
		}
		throw config_error{ "unknown target family '" + spec.family + "'", pointer + "/family" };
	}

	independent_distribution build_distribution(family_spec const& spec)
	{
		std::string const pointer = "/transfer";
		if (spec.family == "normal")
			return catalog::normal_distribution(parameter(spec, "mean", pointer), positive_parameter(spec, "sd", pointer));
		if (spec.family == "cauchy")
			return catalog::cauchy_distribution(positive_parameter(spec, "scale", pointer));
		if (spec.family == "exponential")
			return catalog::exponential_distribution(positive_parameter(spec, "rate", pointer));
		if (spec.family == "discrete")
			return catalog::discrete_distribution(spec.weights);
		throw config_error{ "unknown distribution family '" + spec.family + "'", pointer + "/family" };
	}

	proposal_kernel build_proposal(family_spec const& spec, double const value, target_model const& target)
	{
		if (proposal_takes_parameter(spec.family) && !(value > 0 && std::isfinite(value)))
			throw config_error{ "proposal parameter must be positive and finite", "/grid" };
		if (spec.family == "random_walk_normal")
			return catalog::gaussian_random_walk(value);
		if (spec.family == "independent_normal")
			return catalog::independent_gaussian(value);
		if (spec.family == "independent_cauchy")
			return catalog::independent_cauchy(value);
		if (spec.family == "independent_exponential")
			return catalog::independent_exponential(value);
		if (spec.family == "langevin")
			return catalog::langevin(target, value);
		if (spec.family == "discrete_uniform")
			return catalog::discrete_uniform(target.reference.state_count());
		if (spec.family == "discrete_matrix")
			return catalog::discrete_matrix(spec.matrix);
		if (spec.family == "self")
			return catalog::point_mass_self();
		throw config_error{ "unknown proposal family '" + spec.family + "'", "/proposal/family" };
	}

	std::string integrand_name(integrand_spec const& spec)
	{
		if (spec.kind == "indicator")
			return "1{x>" + format_number(spec.threshold) + "}";
		if (spec.kind == "expected_acceptance")
			return "a(x)";
		if (spec.kind == "constant")
			return "const(" + format_number(spec.value) + ")";
		return spec.kind;
	}

	std::vector<integrand> build_integrands(
		std::span<integrand_spec const> const specs,
		target_model const& target,
		proposal_kernel const& proposal,
		double const curve_lower,
		double const curve_upper)
	{
		std::vector<integrand> result;
		std::optional<exact::expected_acceptance_curve> curve;
		for (std::size_t i = 0; i < specs.size(); ++i)
		{
			auto const& spec = specs[i];
			if (spec.kind == "x")
				result.emplace_back([](state const x) { return x; });
			else if (spec.kind == "x^2")
				result.emplace_back([](state const x) { return x * x; });
			else if (spec.kind == "indicator")
				result.emplace_back([t = spec.threshold](state const x) { return x > t ? 1. : 0.; });
			else if (spec.kind == "constant")
				result.emplace_back([c = spec.value](state) { return c; });
			else if (spec.kind == "expected_acceptance")
			{
				if (!curve)
					curve.emplace(target, proposal, curve_lower, curve_upper, 1601);
				result.emplace_back(*curve);
			}
			else
				throw config_error{ "unknown integrand kind '" + spec.kind + "'", "/integrands/" + std::to_string(i) + "/kind" };
		}
		return result;
	}

	void validate(experiment_spec const& spec)
	{
		if (spec.command != command_kind::bias_check && spec.integrands.empty())
			throw config_error{ "at least one integrand is required", "/integrands" };
		if (spec.budget < 1)
			throw config_error{ "budget must be positive", "/budget" };
		if (spec.command == command_kind::table && spec.realizations < 2)
			throw config_error{ "tables need at least two realizations", "/realizations" };
		if (spec.command == command_kind::fanchart && spec.realizations < 1)
			throw config_error{ "fan charts need at least one realization", "/realizations" };
		for (std::size_t i = 0; i < spec.grid.size(); ++i)
			if (!(spec.grid[i] > 0) || !std::isfinite(spec.grid[i]))
				throw config_error{ "grid values must be positive and finite", "/grid/" + std::to_string(i) };
		if (proposal_takes_parameter(spec.proposal.family) && spec.grid.empty())
			throw config_error{ "proposal family '" + spec.proposal.family + "' needs a parameter grid", "/grid" };
		if (spec.sampler == sampler_kind::jump_restore && !spec.transfer)
			throw config_error{ "Jump Restore needs a transfer distribution", "/transfer" };
		if (!(spec.holding_rate > 0) || !std::isfinite(spec.holding_rate))
			throw config_error{ "holding rate must be positive and finite", "/holding_rate" };
		if (!(spec.rate.value > 0) || !std::isfinite(spec.rate.value))
			throw config_error{ "rate constant must be positive and finite", "/rate/value" };
		if (spec.quantiles.empty() || spec.quantiles.size() > 2)
			throw config_error{ "give one or two quantile levels", "/quantiles" };
		for (std::size_t i = 0; i < spec.quantiles.size(); ++i)
			if (!(spec.quantiles[i] >= 0 && spec.quantiles[i] <= 1))
				throw config_error{ "quantile levels must lie in [0, 1]", "/quantiles/" + std::to_string(i) };
		if (spec.quantiles.size() == 2 && spec.quantiles[0] > spec.quantiles[1])
			throw config_error{ "quantile levels must be ascending", "/quantiles" };
		if (spec.command == command_kind::fanchart && spec.checkpoints < 1)
			throw config_error{ "fan charts need at least one checkpoint", "/checkpoints" };
		if (spec.command == command_kind::bias_check && spec.target.family != "discrete")
			throw config_error{ "bias check needs a discrete target", "/target/family" };
		if (spec.command == command_kind::bias_check && spec.budget < 2)
			throw config_error{ "bias check needs at least two tours per state", "/budget" };
		if (spec.command == command_kind::normalize_check)
		{
			if (spec.sampler != sampler_kind::jump_restore)
				throw config_error{ "normalize check needs the Jump Restore sampler", "/sampler" };
			if (spec.rate.variant != rate_variant::absorbed)
				throw config_error{ "normalize check needs the absorbed killing rate", "/rate/variant" };
		}
		if (!(spec.sigma_gate > 0))
			throw config_error{ "sigma gate must be positive", "/sigma_gate" };
		if (!(spec.relative_tolerance > 0))
			throw config_error{ "relative tolerance must be positive", "/relative_tolerance" };

		auto const target = build_target(spec.target);
		if (spec.transfer)
			(void)build_distribution(*spec.transfer);
		double const first = spec.grid.empty() ? nan : spec.grid.front();
		(void)build_proposal(spec.proposal, first, target);
		for (std::size_t i = 0; i < spec.integrands.size(); ++i)
		{
			auto const& kind = spec.integrands[i].kind;
			if (kind != "x" && kind != "x^2" && kind != "indicator" && kind != "constant" && kind != "expected_acceptance")
				throw config_error{ "unknown integrand kind '" + kind + "'", "/integrands/" + std::to_string(i) + "/kind" };
		}
		if (spec.rate.variant == rate_variant::with_normalization && !target.exact_normalization)
			throw config_error{ "killing rate with normalization needs a target with known normalization", "/rate/variant" };
	}

	cell_setup build_cell(experiment_spec const& spec, double const value)
	{
		cell_setup cell{ build_target(spec.target), {}, {}, {} };
		cell.proposal = build_proposal(spec.proposal, value, cell.target);
		if (spec.transfer)
			cell.transfer = build_distribution(*spec.transfer);

		auto const [lower, upper] = acceptance_curve_range(spec.target);
		cell.integrands = build_integrands(spec.integrands, cell.target, cell.proposal, lower, upper);
		return cell;
	}

	realization_output run_realization(
		experiment_spec const& spec,
		cell_setup const& cell,
		estimator_mode const mode,
		rng_stream_spec const rng,
		std::vector<std::uint64_t> const& checkpoints)
	{
		realization_output out;
		if (spec.sampler == sampler_kind::mh)
		{
			mh_run_config config;
			config.target = cell.target;
			config.proposal = cell.proposal;
			config.initial = initial_state_policy::from_exact_sampler(spec.burn_in);
			config.sample_budget = spec.budget;
			config.mode = mode;
			config.rng = rng;
			config.checkpoints = checkpoints;
			auto result = run_mh_estimator(config, cell.integrands);
			out.estimates = std::move(result.estimates);
			out.checkpoint_estimates = std::move(result.checkpoint_estimates);
			out.proposals = result.diagnostics.proposals;
		}
		else
		{
			restore_config config;
			config.target = cell.target;
			config.local_proposal = cell.proposal;
			config.transfer = *cell.transfer;
			config.holding_rate = spec.holding_rate;
			config.rate = spec.rate;
			config.tour_budget = spec.budget;
			config.mode = mode;
			config.rng = rng;
			config.checkpoints = checkpoints;
			auto result = run_jump_restore(config, cell.integrands);
			out.estimates = std::move(result.estimates);
			out.checkpoint_estimates = std::move(result.checkpoint_estimates);
			out.proposals = result.diagnostics.local_steps;
		}
		return out;
	}

	std::vector<variance_ratio_cell> variance_ratio_table(experiment_spec const& spec, unsigned const jobs)
	{
		validate(spec);
		std::vector<double> const grid = spec.grid.empty() ? std::vector<double>{ nan } : spec.grid;
		std::size_t const integrand_count = spec.integrands.size();
		std::size_t const realizations = spec.realizations;
		constexpr estimator_mode modes[3] = { estimator_mode::standard, estimator_mode::vanilla, estimator_mode::waste_recycling };

		std::vector<variance_ratio_cell> cells;
		for (std::size_t c = 0; c < grid.size(); ++c)
		{
			cell_setup const setup = build_cell(spec, grid[c]);

			// estimates[m][r][k]
			std::vector<std::vector<std::vector<double>>> estimates(3, std::vector<std::vector<double>>(realizations));
			std::vector<std::optional<std::string>> failures(realizations);
			parallel_for(realizations, jobs, [&](std::size_t const r) {
				rng_stream_spec const rng{ spec.seed, c * realizations + r };
				try
				{
					for (std::size_t m = 0; m < 3; ++m)
						estimates[m][r] = run_realization(spec, setup, modes[m], rng).estimates;
				}
				catch (degenerate_error const& e)
				{
					failures[r] = e.what();
				}
			});

			std::optional<std::string> failure;
			for (auto const& f : failures)
				if (f)
				{
					failure = f;
					break;
				}

			for (std::size_t k = 0; k < integrand_count; ++k)
			{
				variance_ratio_cell cell;
				cell.sampler = to_string(spec.sampler);
				cell.target = setup.target.name;
				cell.proposal = setup.proposal.name;
				cell.parameter = grid[c];
				cell.integrand = integrand_name(spec.integrands[k]);
				cell.realizations = realizations;
				cell.budget = spec.budget;
				cell.seed = spec.seed;
				cell.failure = failure;
				if (!failure)
				{
					for (std::size_t m = 0; m < 3; ++m)
					{
						std::vector<double> column(realizations);
						for (std::size_t r = 0; r < realizations; ++r)
							column[r] = estimates[m][r][k];
						cell.variance[m] = stats::variance(column);
						cell.mean[m] = stats::mean(column);
						cell.standard_error[m] = stats::standard_error(column);
					}
					double const scale = std::max(1., std::abs(cell.mean[standard_index]));
					cell.degenerate = cell.variance[standard_index] <= 1e-24 * scale * scale;
					cell.ratio_vanilla = cell.degenerate ? nan : cell.variance[vanilla_index] / cell.variance[standard_index];
					cell.ratio_waste = cell.degenerate ? nan : cell.variance[waste_index] / cell.variance[standard_index];
				}
				cells.push_back(std::move(cell));
			}
		}
		return cells;
	}

	void write_table_csv(std::ostream& out, std::vector<variance_ratio_cell> const& cells)
	{
		out << "sampler,target,proposal,param,integrand,ratio_vanilla,ratio_waste,var_std,var_van,var_wr,"
			   "mean_std,mean_van,mean_wr,se_std,se_van,se_wr,realizations,budget,seed\n";
		for (auto const& cell : cells)
		{
			out << csv_field(cell.sampler) << ',' << csv_field(cell.target) << ',' << csv_field(cell.proposal) << ','
				<< (std::isnan(cell.parameter) ? std::string{ "-" } : format_number(cell.parameter)) << ','
				<< csv_field(cell.integrand) << ',';
			if (cell.failure)
				out << "failed,failed,,,,,,,,,,";
			else
			{
				if (cell.degenerate)
					out << "degenerate,degenerate,";
				else
					out << format_number(cell.ratio_vanilla) << ',' << format_number(cell.ratio_waste) << ',';
				out << format_number(cell.variance[standard_index]) << ',' << format_number(cell.variance[vanilla_index]) << ','
					<< format_number(cell.variance[waste_index]) << ',' << format_number(cell.mean[standard_index]) << ','
					<< format_number(cell.mean[vanilla_index]) << ',' << format_number(cell.mean[waste_index]) << ','
					<< format_number(cell.standard_error[standard_index]) << ',' << format_number(cell.standard_error[vanilla_index]) << ','
					<< format_number(cell.standard_error[waste_index]) << ',';
			}
			out << cell.realizations << ',' << cell.budget << ',' << cell.seed << '\n';
		}
	}

	void write_table_text(std::ostream& out, experiment_spec const& spec, std::vector<variance_ratio_cell> const& cells)
	{
		std::size_t const columns = spec.integrands.size();
		constexpr int width = 15;
		auto const pad = [&](std::string text) {
			if (text.size() < width)
				text.insert(0, width - text.size(), ' ');
			return text;
		};
		auto const ratio = [](double const value) {
			char buffer[16];
			std::snprintf(buffer, sizeof buffer, "%.3f", value);
			return std::string{ buffer };
		};

		out << spec.name << ": ratio of empirical variances, vanilla / waste-recycling over standard\n";
		out << pad("param");
		for (auto const& integrand : spec.integrands)
			out << pad(integrand_name(integrand));
		out << '\n';
		for (std::size_t row = 0; columns > 0 && row < cells.size() / columns; ++row)
		{
			auto const& first = cells[row * columns];
			out << pad(std::isnan(first.parameter) ? "-" : format_number(first.parameter));
			for (std::size_t k = 0; k < columns; ++k)
			{
				auto const& cell = cells[row * columns + k];
				if (cell.failure)
					out << pad("failed");
				else if (cell.degenerate)
					out << pad("degenerate");
				else
					out << pad(ratio(cell.ratio_vanilla) + " / " + ratio(cell.ratio_waste));
			}
			out << '\n';
		}
	}

	std::vector<std::uint64_t> log_spaced_checkpoints(std::uint64_t const last, std::uint64_t const count)
	{
		if (last == 0 || count == 0)
			return {};
		std::uint64_t const n = std::min(count, last);
		if (n == 1)
			return { last };
		std::vector<std::uint64_t> points(n);
		double const log_last = std::log(static_cast<double>(last));
		for (std::uint64_t i = 0; i < n; ++i)
		{
			auto const value = static_cast<std::uint64_t>(std::llround(std::exp(log_last * static_cast<double>(i) / static_cast<double>(n - 1))));
			points[i] = std::clamp<std::uint64_t>(value, 1, last);
		}
		for (std::uint64_t i = 1; i < n; ++i)
			points[i] = std::max(points[i], points[i - 1] + 1);
		// Bumping may have pushed the tail past `last`; pull it back from the end.
		points[n - 1] = last;
		for (std::uint64_t i = n - 1; i-- > 0;)
			points[i] = std::min(points[i], points[i + 1] - 1);
		return points;
	}

	fan_chart_result fan_chart(experiment_spec const& spec, unsigned const jobs)
	{
		validate(spec);
		double const value = spec.grid.empty() ? nan : spec.grid.front();
		cell_setup setup = build_cell(spec, value);
		setup.integrands.resize(1);

		std::vector<std::uint64_t> checkpoints;
		if (spec.sampler == sampler_kind::mh)
			checkpoints = log_spaced_checkpoints(spec.budget, spec.checkpoints);
		else if (spec.budget <= spec.checkpoints)
		{
			checkpoints.resize(spec.budget);
			for (std::uint64_t t = 0; t < spec.budget; ++t)
				checkpoints[t] = t + 1;
		}
		else
			checkpoints = log_spaced_checkpoints(spec.budget, spec.checkpoints);

		std::size_t const realizations = spec.realizations;
		constexpr estimator_mode modes[2] = { estimator_mode::standard, estimator_mode::vanilla };

		fan_chart_result chart;
		chart.trajectories.assign(2, std::vector<std::vector<double>>(realizations));
		parallel_for(realizations, jobs, [&](std::size_t const r) {
			for (std::size_t m = 0; m < 2; ++m)
			{
				auto const output = run_realization(spec, setup, modes[m], { spec.seed, r }, checkpoints);
				auto& trajectory = chart.trajectories[m][r];
				trajectory.resize(checkpoints.size());
				for (std::size_t c = 0; c < checkpoints.size(); ++c)
					trajectory[c] = output.checkpoint_estimates[c][0];
			}
		});

		double const lower = spec.quantiles.front(), upper = spec.quantiles.back();
		std::vector<double> column(realizations);
		for (std::size_t c = 0; c < checkpoints.size(); ++c)
		{
			fan_chart_row row;
			row.t = checkpoints[c];
			for (std::size_t m = 0; m < 2; ++m)
			{
				for (std::size_t r = 0; r < realizations; ++r)
					column[r] = chart.trajectories[m][r][c];
				std::sort(column.begin(), column.end());
				double const lo = stats::quantile_sorted(column, lower), hi = stats::quantile_sorted(column, upper);
				if (m == 0)
				{
					row.q_lo_std = lo;
					row.q_hi_std = hi;
					row.min_std = column.front();
					row.max_std = column.back();
				}
				else
				{
					row.q_lo_van = lo;
					row.q_hi_van = hi;
					row.min_van = column.front();
					row.max_van = column.back();
				}
			}
			chart.rows.push_back(row);
		}
		return chart;
	}

	void write_fan_chart_csv(std::ostream& out, fan_chart_result const& chart)
	{
		out << "t,q_lo_std,q_hi_std,q_lo_van,q_hi_van,min_std,max_std,min_van,max_van\n";
		for (auto const& row : chart.rows)
			out << row.t << ',' << format_number(row.q_lo_std) << ',' << format_number(row.q_hi_std) << ','
				<< format_number(row.q_lo_van) << ',' << format_number(row.q_hi_van) << ',' << format_number(row.min_std) << ','
				<< format_number(row.max_std) << ',' << format_number(row.min_van) << ',' << format_number(row.max_van) << '\n';
	}

	void write_fan_chart_svg(std::ostream& out, experiment_spec const& spec, fan_chart_result const& chart)
	{
		constexpr double width = 800, height = 500, left = 60, right = 20, top = 40, bottom = 50;
		if (chart.rows.empty())
			return;

		double y_min = std::numeric_limits<double>::infinity(), y_max = -y_min;
		for (auto const& row : chart.rows)
		{
			y_min = std::min({ y_min, row.min_std, row.min_van });
			y_max = std::max({ y_max, row.max_std, row.max_van });
		}
		if (!(y_max > y_min))
		{
			y_min -= 1;
			y_max += 1;
		}
		double const t_min = static_cast<double>(chart.rows.front().t), t_max = static_cast<double>(chart.rows.back().t);
		bool const log_axis = t_max / t_min > 20;
		auto const x_of = [&](double const t) {
			double const u = t_max > t_min ? (log_axis ? std::log(t / t_min) / std::log(t_max / t_min) : (t - t_min) / (t_max - t_min)) : 0;
			return left + u * (width - left - right);
		};
		auto const y_of = [&](double const v) { return top + (y_max - v) / (y_max - y_min) * (height - top - bottom); };
		auto const point = [&](double const t, double const v) {
			char buffer[48];
			std::snprintf(buffer, sizeof buffer, "%.2f,%.2f ", x_of(t), y_of(v));
			return std::string{ buffer };
		};

		out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
		out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
		out << "<text x=\"" << left << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << spec.name
			<< ": standard (gold) and vanilla (gray) running estimates</text>\n";

		char const* const trajectory_colors[2] = { "#d4a017", "#808080" };
		for (std::size_t m = 0; m < 2; ++m)
		{
			out << "<g stroke=\"" << trajectory_colors[m] << "\" stroke-opacity=\"0.15\" fill=\"none\" stroke-width=\"0.6\">\n";
			for (auto const& trajectory : chart.trajectories[m])
			{
				out << "<polyline points=\"";
				for (std::size_t c = 0; c < trajectory.size(); ++c)
					out << point(static_cast<double>(chart.rows[c].t), trajectory[c]);
				out << "\"/>\n";
			}
			out << "</g>\n";
		}

		auto const band = [&](double fan_chart_row::* const member, char const* const color) {
			out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
			for (auto const& row : chart.rows)
				out << point(static_cast<double>(row.t), row.*member);
			out << "\"/>\n";
		};
		band(&fan_chart_row::q_lo_std, "#8b4513");
		band(&fan_chart_row::q_hi_std, "#8b4513");
		band(&fan_chart_row::q_lo_van, "#ff69b4");
		band(&fan_chart_row::q_hi_van, "#ff69b4");

		out << "<g stroke=\"black\" stroke-width=\"1\">\n";
		out << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\"" << width - right << "\" y2=\"" << height - bottom << "\"/>\n";
		out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << height - bottom << "\"/>\n";
		out << "</g>\n";
		out << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
		out << "<text x=\"" << left << "\" y=\"" << height - bottom + 18 << "\">" << chart.rows.front().t << "</text>\n";
		out << "<text x=\"" << width - right - 30 << "\" y=\"" << height - bottom + 18 << "\">" << chart.rows.back().t << "</text>\n";
		out << "<text x=\"" << width / 2 - 40 << "\" y=\"" << height - 12 << "\">" << (spec.sampler == sampler_kind::mh ? "iterations" : "tours")
			<< (log_axis ? " (log scale)" : "") << "</text>\n";
		out << "<text x=\"4\" y=\"" << top + 10 << "\">" << format_number(y_max) << "</text>\n";
		out << "<text x=\"4\" y=\"" << height - bottom << "\">" << format_number(y_min) << "</text>\n";
		out << "</g>\n</svg>\n";
	}

	budget_report equal_budget_report(experiment_spec const& spec)
	{
		validate(spec);
		double const value = spec.grid.empty() ? nan : spec.grid.front();
		cell_setup setup = build_cell(spec, value);
		setup.integrands.resize(1);

		budget_report report;
		for (auto const mode : { estimator_mode::standard, estimator_mode::vanilla, estimator_mode::waste_recycling })
		{
			budget_summary summary;
			summary.mode = mode;
			summary.nominal = spec.sampler == sampler_kind::mh && mode != estimator_mode::vanilla ? spec.budget - 1 : spec.budget;
			std::vector<double> estimates;
			for (std::uint64_t r = 0; r < spec.realizations; ++r)
			{
				auto const start = std::chrono::steady_clock::now();
				auto const output = run_realization(spec, setup, mode, { spec.seed, r });
				double const seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
				report.rows.push_back({ mode, r, output.proposals, seconds, output.estimates[0] });
				summary.total_proposals += output.proposals;
				summary.max_proposals = std::max(summary.max_proposals, output.proposals);
				summary.total_seconds += seconds;
				estimates.push_back(output.estimates[0]);
			}
			double const count = static_cast<double>(spec.realizations);
			summary.variance = stats::variance(estimates);
			summary.variance_per_proposal = summary.variance * static_cast<double>(summary.total_proposals) / count;
			summary.variance_per_second = summary.variance * summary.total_seconds / count;
			report.summary.push_back(summary);
		}
		return report;
	}

	void write_budget_csv(std::ostream& out, budget_report const& report)
	{
		out << "mode,nominal,total_proposals,max_proposals,total_seconds,variance,variance_per_proposal,variance_per_second\n";
		for (auto const& s : report.summary)
			out << rbmc::to_string(s.mode) << ',' << s.nominal << ',' << s.total_proposals << ',' << s.max_proposals << ','
				<< format_number(s.total_seconds) << ',' << format_number(s.variance) << ',' << format_number(s.variance_per_proposal) << ','
				<< format_number(s.variance_per_second) << '\n';
	}

	bool bias_gate(std::vector<bias::bias_report> const& reports, double const sigma)
	{
		for (auto const& report : reports)
		{
			double const deviation = std::abs(report.empirical_bias - report.predicted_bias);
			if (report.standard_error > 0 ? deviation > sigma * report.standard_error : deviation > 1e-12)
				return false;
		}
		return true;
	}

	bias_check_result bias_check(experiment_spec const& spec)
	{
		validate(spec);
		auto const target = build_target(spec.target);
		auto const proposal = build_proposal(spec.proposal, spec.grid.empty() ? nan : spec.grid.front(), target);
		bias_check_result result;
		result.reports = bias::verify_bias_theorem(target, proposal, spec.budget, { spec.seed, 0 });
		result.passed = bias_gate(result.reports, spec.sigma_gate);
		return result;
	}

	void write_bias_csv(std::ostream& out, std::vector<bias::bias_report> const& reports)
	{
		out << "state,a,r2,predicted_bias,empirical_bias,se,tours,completed_mean,completed_se,full_completion_mean,"
			   "full_completion_se,douc_robert_mean,douc_robert_se,vanilla_mean,vanilla_se,chi2,chi2_dof,chi2_p\n";
		for (auto const& r : reports)
			out << format_number(r.z) << ',' << format_number(r.expected_acceptance) << ',' << format_number(r.rejection_second_moment) << ','
				<< format_number(r.predicted_bias) << ',' << format_number(r.empirical_bias) << ',' << format_number(r.standard_error) << ','
				<< r.tour_count << ',' << format_number(r.completed_weight_mean) << ',' << format_number(r.completed_weight_se) << ','
				<< format_number(r.full_completion_mean) << ',' << format_number(r.full_completion_se) << ','
				<< format_number(r.douc_robert_mean) << ',' << format_number(r.douc_robert_se) << ','
				<< format_number(r.vanilla_weight_mean) << ',' << format_number(r.vanilla_weight_se) << ','
				<< format_number(r.waiting_time_fit.statistic) << ',' << r.waiting_time_fit.degrees_of_freedom << ','
				<< format_number(r.waiting_time_fit.p_value) << '\n';
	}

	normalize_check_result normalize_check(experiment_spec const& spec)
	{
		validate(spec);
		auto const setup = build_cell(spec, spec.grid.empty() ? nan : spec.grid.front());
		if (!setup.target.exact_normalization)
			throw config_error{ "normalize check needs a target with known normalization", "/target" };

		restore_config config;
		config.target = setup.target;
		config.local_proposal = setup.proposal;
		config.transfer = *setup.transfer;
		config.holding_rate = spec.holding_rate;
		config.rate = spec.rate;
		config.tour_budget = spec.budget;
		config.rng = { spec.seed, 0 };
		auto const run = run_jump_restore(config, setup.integrands);

		normalize_check_result result;
		result.tours = run.diagnostics.tour_count;
		result.total_lifetime = run.diagnostics.total_lifetime;
		result.estimate = estimate_normalization(spec.rate.value, result.total_lifetime, result.tours);
		result.truth = *setup.target.exact_normalization;
		result.relative_error = std::abs(result.estimate - result.truth) / result.truth;
		result.gate_active = spec.budget >= spec.gate_floor;
		result.passed = !result.gate_active || result.relative_error <= spec.relative_tolerance;
		return result;
	}

	void write_normalize_csv(std::ostream& out, normalize_check_result const& result)
	{
		out << "estimate,truth,relative_error,tours,total_lifetime,gate_active,passed\n";
		out << format_number(result.estimate) << ',' << format_number(result.truth) << ',' << format_number(result.relative_error) << ','
			<< result.tours << ',' << format_number(result.total_lifetime) << ',' << (result.gate_active ? "true" : "false") << ','
			<< (result.passed ? "true" : "false") << '\n';
	}
} // namespace rbmc::experiments
