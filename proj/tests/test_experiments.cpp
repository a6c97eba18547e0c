// Rao-Blackwellized Monte Carlo v1.0
// Copyright (c) 2026 The rbmc authors
//
// SPDX-License-Identifier: Apache-2.0


#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include <rbmc/error.hpp>
#include <rbmc/experiments.hpp>
#include <rbmc/spec_io.hpp>


using namespace rbmc;
using namespace rbmc::experiments;

namespace
{
	std::string const spec_dir = RBMC_SPEC_DIR;

	experiment_spec small_table(std::uint64_t const realizations = 50)
	{
		auto spec = load_spec(spec_dir + "/table_e1.json");
		spec.realizations = realizations;
		return spec;
	}

	std::string table_csv(experiment_spec const& spec, unsigned const jobs)
	{
		std::ostringstream out;
		write_table_csv(out, variance_ratio_table(spec, jobs));
		return out.str();
	}

	std::size_t line_count(std::string const& text)
	{
		return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
	}

	std::string field_of(std::string const& json)
	{
		try
		{
			(void)parse_spec(json);
		}
		catch (config_error const& e)
		{
			return e.field();
		}
		return "<none>";
	}
} // namespace


TEST_SUITE("experiments")
{
	TEST_CASE("bundled specs parse and round-trip through serialization")
	{
		for (auto const* name : { "table_e1", "table_e2", "table_e3", "table_e4", "table_e5", "fig_e1", "fig_e2", "fig_e3", "fig_e4", "bias_3state", "normalize_gauss2" })
		{
			CAPTURE(name);
			auto const spec = load_spec(spec_dir + "/" + name + ".json");
			CHECK(spec.name == name);
			CHECK(parse_spec(serialize_spec(spec)) == spec);
		}
	}

	TEST_CASE("spec errors carry a JSON pointer")
	{
		std::string const base = R"("name":"t","command":"table","target":{"family":"normal","parameters":{"mean":0,"sd":1}},"proposal":{"family":"random_walk_normal"},"grid":[1])";
		CHECK(field_of("{" + base + R"(,"integrands":[],"budget":10})") == "/integrands");
		CHECK(field_of("{" + base + R"(,"integrands":[{"kind":"x"}]})") == "/budget");
		CHECK(field_of("{" + base + R"(,"integrands":[{"kind":"x"}],"budget":10,"colour":1})") == "/colour");
		CHECK(field_of("{" + base + R"(,"integrands":[{"kind":"x","treshold":1}],"budget":10})") == "/integrands/0/treshold");
		CHECK(field_of("{" + base + R"(,"integrands":[{"kind":"x"}],"budget":-3})") == "/budget");
		CHECK(field_of("{" + base + R"(,"integrands":[{"kind":"x"}],"budget":10,"rate":{"variant":"fast"}})") == "/rate/variant");
		CHECK(field_of(R"({"name":"t","command":"plot"})") == "/command");
		CHECK(field_of("{" + base + R"(,"integrands":[{"kind":"x"}],"budget":10})") == "<none>");
		CHECK_THROWS_AS((void)parse_spec("{not json"), config_error);
	}

	TEST_CASE("table_e1 yields sixteen cells")
	{
		auto const csv = table_csv(small_table(), 1);
		CHECK(line_count(csv) == 1 + 16);
	}

	TEST_CASE("table CSV is identical across runs and job counts")
	{
		auto const spec = small_table();
		auto const first = table_csv(spec, 1);
		CHECK(table_csv(spec, 1) == first);
		CHECK(table_csv(spec, 3) == first);
	}

	TEST_CASE("a constant integrand makes the cell degenerate")
	{
		auto spec = small_table(20);
		spec.grid = { 2 };
		spec.integrands = { { "constant", 0, 3.5 } };
		auto const cells = variance_ratio_table(spec, 1);
		REQUIRE(cells.size() == 1);
		CHECK(cells[0].degenerate);
		CHECK(std::isnan(cells[0].ratio_vanilla));
		std::ostringstream out;
		write_table_csv(out, cells);
		CHECK(out.str().find("degenerate") != std::string::npos);
	}

	TEST_CASE("failed cells do not abort the table")
	{
		auto spec = load_spec(spec_dir + "/table_e3.json");
		spec.realizations = 5;
		spec.grid = { 0.5, 200 };
		spec.integrands = { { "x", 0, 1 } };
		auto const cells = variance_ratio_table(spec, 1);
		REQUIRE(cells.size() == 2);
		CHECK_FALSE(cells[0].failure);
		CHECK(cells[1].failure);
	}

	TEST_CASE("log-spaced checkpoints")
	{
		auto const points = log_spaced_checkpoints(1000, 100);
		CHECK(points.size() == 100);
		CHECK(points.front() == 1);
		CHECK(points.back() == 1000);
		CHECK(std::is_sorted(points.begin(), points.end()));
		CHECK(std::adjacent_find(points.begin(), points.end()) == points.end());
		CHECK(log_spaced_checkpoints(5, 100).size() == 5);
	}

	TEST_CASE("fan chart rows, quantile order and the single-realization case")
	{
		auto spec = load_spec(spec_dir + "/fig_e1.json");
		spec.realizations = 40;
		auto const chart = fan_chart(spec, 1);
		CHECK(chart.rows.size() == 100);
		for (auto const& row : chart.rows)
		{
			CHECK(row.q_lo_std <= row.q_hi_std);
			CHECK(row.q_lo_van <= row.q_hi_van);
			CHECK(row.min_std <= row.q_lo_std);
			CHECK(row.q_hi_van <= row.max_van);
		}

		spec.realizations = 1;
		for (auto const& row : fan_chart(spec, 1).rows)
		{
			CHECK(row.q_lo_std == row.q_hi_std);
			CHECK(row.min_std == row.max_std);
			CHECK(row.q_lo_std == row.min_std);
		}

		spec.realizations = 30;
		spec.quantiles = { 0.5 };
		for (auto const& row : fan_chart(spec, 1).rows)
			CHECK(row.q_lo_std == row.q_hi_std);
	}

	TEST_CASE("jump restore fan chart uses tour checkpoints")
	{
		auto spec = load_spec(spec_dir + "/fig_e3.json");
		spec.realizations = 10;
		auto const chart = fan_chart(spec, 1);
		REQUIRE(chart.rows.size() == 100);
		CHECK(chart.rows.front().t == 1);
		CHECK(chart.rows.back().t == 100);
	}

	TEST_CASE("fan chart SVG is self-contained")
	{
		auto spec = load_spec(spec_dir + "/fig_e2.json");
		spec.realizations = 5;
		auto const chart = fan_chart(spec, 1);
		std::ostringstream svg;
		write_fan_chart_svg(svg, spec, chart);
		auto const text = svg.str();
		CHECK(text.rfind("<svg", 0) == 0);
		CHECK(text.find("</svg>") != std::string::npos);
		CHECK(text.find("href") == std::string::npos);
	}

	TEST_CASE("budget report: alpha one gives nominal counts")
	{
		auto spec = small_table(10);
		spec.proposal = { "independent_normal", {}, {}, {} };
		spec.grid = { 1 };
		auto const report = equal_budget_report(spec);
		for (auto const& row : report.rows)
			CHECK(row.proposals == (row.mode == estimator_mode::vanilla ? 100 : 99));
		for (auto const& summary : report.summary)
			CHECK(summary.max_proposals == summary.nominal);
	}

	TEST_CASE("budget report: vanilla overshoot is bounded by one tour and totals add up")
	{
		auto spec = small_table(200);
		spec.grid = { 2 };
		auto const report = equal_budget_report(spec);
		std::uint64_t totals[3]{};
		for (auto const& row : report.rows)
		{
			auto const index = static_cast<std::size_t>(row.mode);
			totals[index] += row.proposals;
			if (row.mode == estimator_mode::vanilla)
			{
				CHECK(row.proposals >= 100);
				// The overshoot is shorter than the tour that straddles the budget.
				CHECK(row.proposals - 100 < 100);
			}
		}
		for (auto const& summary : report.summary)
			CHECK(summary.total_proposals == totals[static_cast<std::size_t>(summary.mode)]);
	}

	TEST_CASE("bias check on the bundled three-state spec")
	{
		auto spec = load_spec(spec_dir + "/bias_3state.json");
		spec.budget = 20'000;
		auto const result = bias_check(spec);
		CHECK(result.reports.size() == 3);
		CHECK(result.passed);

		auto tampered = result.reports;
		tampered[0].predicted_bias *= 1.5;
		CHECK_FALSE(bias_gate(tampered, spec.sigma_gate));
	}

	TEST_CASE("bias check with alpha one everywhere")
	{
		auto spec = load_spec(spec_dir + "/bias_3state.json");
		spec.target.weights = { 1, 1, 1 };
		spec.budget = 1000;
		auto const result = bias_check(spec);
		CHECK(result.passed);
		for (auto const& report : result.reports)
		{
			CHECK(report.predicted_bias == 0.0);
			CHECK(report.empirical_bias == 0.0);
		}
	}

	TEST_CASE("normalize check: gate floor and rate-constant invariance")
	{
		auto spec = load_spec(spec_dir + "/normalize_gauss2.json");
		spec.budget = 10;
		auto const small = normalize_check(spec);
		CHECK_FALSE(small.gate_active);
		CHECK(small.passed);

		spec.budget = 10'000;
		auto const base = normalize_check(spec);
		spec.rate.value *= 2;
		auto const doubled = normalize_check(spec);
		CHECK(base.gate_active);
		CHECK(base.passed == doubled.passed);
		CHECK(doubled.estimate == doctest::Approx(2).epsilon(0.05));
	}
}
