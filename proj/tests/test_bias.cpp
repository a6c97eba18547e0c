// Rao-Blackwellized Monte Carlo v1.0
// Copyright (c) 2026 The rbmc authors
//
// SPDX-License-Identifier: Apache-2.0


#include <cmath>
#include <vector>

#include <doctest.h>

#include <rbmc/bias_oracle.hpp>
#include <rbmc/catalog.hpp>
#include <rbmc/exact.hpp>
#include <rbmc/stats.hpp>


using namespace rbmc;

namespace
{
	std::vector<double> const three_state{ 0.5, 0.3, 0.2 };

	// pi = (1, 0.5), deterministic swap: alpha(0, y) = 0.5 for every proposal from 0.
	target_model half_target()
	{
		static std::vector<double> const w{ 1, 0.5 };
		return catalog::discrete_target(w);
	}

	proposal_kernel swap_proposal()
	{
		return catalog::discrete_matrix({ { 0, 1 }, { 1, 0 } });
	}
} // namespace


TEST_SUITE("bias")
{
	TEST_CASE("completion tail is zero when alpha is one")
	{
		auto const target = catalog::standard_normal_target();
		auto const proposal = catalog::independent_gaussian(1);
		rng_stream g{ { 1, 0 } };
		// 1 - alpha is zero up to rounding in the density ratio.
		CHECK(bias::completion_tail(0.5, target, proposal, g) < 1e-12);
		auto const self = catalog::point_mass_self();
		CHECK(bias::completion_tail(0.5, target, self, g) == 0.0);
	}

	TEST_CASE("completion tail with constant rejection one half sums to one")
	{
		auto const target = half_target();
		auto const proposal = swap_proposal();
		rng_stream g{ { 2, 0 } };
		// Deterministic: sum_{t >= 1} 0.5^t up to the stopping threshold.
		CHECK(bias::completion_tail(0, target, proposal, g) == doctest::Approx(1.0).epsilon(1e-14));
	}

	TEST_CASE("completed weight arithmetic")
	{
		tour_record const one{ 0, 1, 1.0, 0, true };
		CHECK(bias::completed_weight(one, 0.8, 1.0) == doctest::Approx(1.8));
		tour_record const two{ 0, 2, 1.75, 0, true };
		CHECK(bias::completed_weight(two, 0.6, 0.5) == doctest::Approx(1.75 + 0.3));
	}

	TEST_CASE("predicted bias closed form")
	{
		CHECK(bias::predicted_bias(1, 0) == 0.0);
		// (1 - alpha) a.s. equal to rho: a = 1 - rho and r2 = rho^2.
		for (double const rho : { 0.1, 0.5, 0.9 })
			CHECK(bias::predicted_bias(1 - rho, rho * rho) == doctest::Approx(rho / (1 - rho * rho)));
		// Frozen oracle for the three-state example: a = 2/3, r2 = 0.52/3.
		CHECK(bias::predicted_bias(2. / 3, 0.52 / 3) == doctest::Approx(0.4032258064516129).epsilon(1e-14));
		CHECK(bias::predicted_bias(8. / 9, 1. / 27) == doctest::Approx(0.11538461538461539).epsilon(1e-14));
	}

	TEST_CASE("predicted bias decreases to zero as the acceptance rises")
	{
		// Independence sampler with constant rejection rho; a = 1 - rho.
		double previous = bias::predicted_bias(0.05, 0.95 * 0.95);
		for (double a = 0.1; a <= 1.0 + 1e-12; a += 0.05)
		{
			double const rho = std::max(0.0, 1 - a);
			double const current = bias::predicted_bias(std::min(a, 1.0), rho * rho);
			CHECK(current < previous);
			previous = current;
		}
		CHECK(previous == doctest::Approx(0.0));
	}

	TEST_CASE("conditioned tour with constant rejection one half")
	{
		auto const target = half_target();
		auto const proposal = swap_proposal();
		rng_stream g{ { 3, 0 } };
		for (int i = 0; i < 100; ++i)
		{
			auto const run = bias::simulate_conditioned_tour(0, target, proposal, g);
			auto const length = static_cast<double>(run.tour.observed_waiting);
			CHECK(run.trailing_product == doctest::Approx(std::pow(0.5, length - 1)));
			CHECK(run.full_product == doctest::Approx(std::pow(0.5, length)));
			CHECK(run.tour.vanilla_weight == doctest::Approx(2 - std::pow(0.5, length)));
		}
	}

	TEST_CASE("douc-robert completion 1 + tail is unbiased for 1 / a")
	{
		auto const target = catalog::discrete_target(three_state);
		auto const proposal = catalog::discrete_uniform(3);
		rng_stream g{ { 4, 0 } };
		constexpr int repeats = 100'000;
		for (state z : { 0.0, 1.0 })
		{
			std::vector<double> values(repeats);
			for (auto& v : values)
				v = 1 + bias::completion_tail(z, target, proposal, g);
			double const truth = 1 / exact::expected_acceptance(target, proposal, z);
			CHECK(std::abs(stats::mean(values) - truth) < 3 * stats::standard_error(values));
		}
	}

	TEST_CASE("alpha one everywhere: predicted and empirical bias are zero")
	{
		std::vector<double> const w{ 0.25, 0.25, 0.25, 0.25 };
		auto const target = catalog::discrete_target(w);
		auto const proposal = catalog::discrete_uniform(4);
		auto const reports = bias::verify_bias_theorem(target, proposal, 1000, { 5, 0 });
		REQUIRE(reports.size() == 4);
		for (auto const& report : reports)
		{
			CHECK(report.predicted_bias == 0.0);
			CHECK(report.empirical_bias == 0.0);
			CHECK(report.standard_error == 0.0);
		}
	}

	TEST_CASE("bias theorem on the three-state example")
	{
		auto const target = catalog::discrete_target(three_state);
		auto const proposal = catalog::discrete_uniform(3);
		auto const reports = bias::verify_bias_theorem(target, proposal, 100'000, { 6, 0 });
		REQUIRE(reports.size() == 3);
		for (auto const& report : reports)
		{
			CAPTURE(report.z);
			CHECK(report.tour_count == 100'000);
			if (report.standard_error > 0)
				CHECK(std::abs(report.empirical_bias - report.predicted_bias) <= 3 * report.standard_error);
			else
				CHECK(report.empirical_bias == report.predicted_bias);
			CHECK(report.waiting_time_fit.p_value > 1e-3);
			double const inverse = 1 / report.expected_acceptance;
			CHECK(std::abs(report.douc_robert_mean - inverse) <= 3 * report.douc_robert_se + 1e-12);
			CHECK(std::abs(report.full_completion_mean - inverse) <= 3 * report.full_completion_se + 1e-12);
		}
	}
}
