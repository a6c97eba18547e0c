// Rao-Blackwellized Monte Carlo v1.0
// Copyright (c) 2026 The rbmc authors
//
// SPDX-License-Identifier: Apache-2.0


#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <doctest.h>

#include <rbmc/rng.hpp>
#include <rbmc/stats.hpp>
#include <rbmc/summation.hpp>


using namespace rbmc;


TEST_SUITE("stats")
{
	TEST_CASE("moments of a small sample")
	{
		std::vector<double> const x{ 2, 4, 4, 4, 5, 5, 7, 9 };
		CHECK(stats::mean(x) == 5.0);
		CHECK(stats::variance(x) == doctest::Approx(32.0 / 7));
		CHECK(stats::standard_error(x) == doctest::Approx(std::sqrt(32.0 / 7 / 8)));
	}

	TEST_CASE("type 7 quantiles")
	{
		std::vector<double> const x{ 3, 1, 4, 1, 5, 9, 2, 6 };
		// Sorted: 1 1 2 3 4 5 6 9; h = (n - 1) p.
		CHECK(stats::quantile(x, 0) == 1.0);
		CHECK(stats::quantile(x, 1) == 9.0);
		CHECK(stats::quantile(x, 0.5) == doctest::Approx(3.5));
		CHECK(stats::quantile(x, 0.9) == doctest::Approx(6 + 0.3 * 3));
		std::vector<double> const single{ 2.5 };
		CHECK(stats::quantile(single, 0.05) == 2.5);
		CHECK(stats::quantile(single, 0.95) == 2.5);
	}

	TEST_CASE("chi-square test on a perfect fit and a gross misfit")
	{
		std::vector<double> const expected{ 25, 25, 25, 25 };
		auto const perfect = stats::chi_square_test(expected, expected);
		CHECK(perfect.statistic == 0.0);
		CHECK(perfect.degrees_of_freedom == 3);
		CHECK(perfect.p_value == doctest::Approx(1.0));

		std::vector<double> const observed{ 40, 10, 30, 20 };
		auto const misfit = stats::chi_square_test(observed, expected);
		CHECK(misfit.statistic == doctest::Approx(20.0));
		// P(chi2_3 > 20) from tables.
		CHECK(misfit.p_value == doctest::Approx(1.69e-4).epsilon(0.01));
	}

	TEST_CASE("geometric fit accepts geometric samples and rejects shifted ones")
	{
		rng_stream g{ { 2, 0 } };
		std::vector<std::uint64_t> samples, shifted;
		for (int i = 0; i < 20'000; ++i)
		{
			std::uint64_t k = 1;
			while (g.uniform() >= 0.3)
				++k;
			samples.push_back(k);
			shifted.push_back(k + 1);
		}
		CHECK(stats::geometric_goodness_of_fit(samples, 0.3).p_value > 1e-3);
		CHECK(stats::geometric_goodness_of_fit(shifted, 0.3).p_value < 1e-6);
	}

	TEST_CASE("kolmogorov distribution tail")
	{
		CHECK(stats::kolmogorov_complementary_cdf(0) == 1.0);
		// Tabulated critical values: P(K > 1.3581) = 0.05, P(K > 1.6276) = 0.01.
		CHECK(stats::kolmogorov_complementary_cdf(1.3581) == doctest::Approx(0.05).epsilon(1e-3));
		CHECK(stats::kolmogorov_complementary_cdf(1.6276) == doctest::Approx(0.01).epsilon(1e-3));
	}

	TEST_CASE("kolmogorov-smirnov test on uniform draws")
	{
		rng_stream g{ { 3, 0 } };
		std::vector<double> uniform(5000), skewed(5000);
		for (std::size_t i = 0; i < uniform.size(); ++i)
		{
			uniform[i] = g.uniform();
			skewed[i] = uniform[i] * uniform[i];
		}
		auto const identity = [](double u) { return std::clamp(u, 0.0, 1.0); };
		CHECK(stats::kolmogorov_smirnov_test(uniform, identity).p_value > 1e-3);
		CHECK(stats::kolmogorov_smirnov_test(skewed, identity).p_value < 1e-6);
	}

	TEST_CASE("compensated summation recovers small addends")
	{
		compensated_sum sum;
		sum += 1e16;
		for (int i = 0; i < 1000; ++i)
			sum += 1.0;
		sum += -1e16;
		CHECK(sum.value() == 1000.0);
	}
}
