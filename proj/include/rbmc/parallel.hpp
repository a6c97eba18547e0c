// Rao-Blackwellized Monte Carlo v1.0
// Copyright (c) 2026 The rbmc authors
//
// SPDX-License-Identifier: Apache-2.0


#ifndef HPP_RBMC_PARALLEL_INCLUDED
#define HPP_RBMC_PARALLEL_INCLUDED


#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>


namespace rbmc
{
	/// Calls task(i) for every i in [0, count) on up to `jobs` threads. Tasks must write
	/// only to their own slot of any shared output. The first exception is rethrown after
	/// all workers have stopped.
	template<class Task>
	void parallel_for(std::size_t const count, unsigned const jobs, Task&& task)
	{
		std::size_t const workers = std::min<std::size_t>(std::max(1u, jobs), count);
		if (workers <= 1)
		{
			for (std::size_t i = 0; i < count; ++i)
				task(i);
			return;
		}

		std::atomic<std::size_t> next{ 0 };
		std::atomic<bool> failed{ false };
		std::exception_ptr failure;
		std::atomic_flag failure_taken;

		auto const worker = [&] {
			for (;;)
			{
				std::size_t const i = next.fetch_add(1, std::memory_order_relaxed);
				if (i >= count || failed.load(std::memory_order_relaxed))
					return;
				try
				{
					task(i);
				}
				catch (...)
				{
					if (!failure_taken.test_and_set())
						failure = std::current_exception();
					failed.store(true);
					return;
				}
			}
		};

		std::vector<std::jthread> threads;
		threads.reserve(workers - 1);
		for (std::size_t w = 1; w < workers; ++w)
			threads.emplace_back(worker);
		worker();
		threads.clear();

		if (failure)
			std::rethrow_exception(failure);
	}
} // namespace rbmc


#endif // !HPP_RBMC_PARALLEL_INCLUDED
