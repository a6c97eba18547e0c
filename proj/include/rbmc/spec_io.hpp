// Rao-Blackwellized Monte Carlo v1.0
// Copyright (c) 2026 The rbmc authors
//
// SPDX-License-Identifier: Apache-2.0


#ifndef HPP_RBMC_SPEC_IO_INCLUDED
#define HPP_RBMC_SPEC_IO_INCLUDED


#include <filesystem>
#include <string>
#include <string_view>

#include "experiments.hpp"


namespace rbmc::experiments
{
	/// Parses a JSON run specification. Unknown keys and type mismatches raise
	/// config_error whose field() is a JSON pointer into the document.
	[[nodiscard]] experiment_spec parse_spec(std::string_view json_text);

	[[nodiscard]] experiment_spec load_spec(std::filesystem::path const& path);

	/// Pretty-printed JSON that parse_spec maps back to an equal spec.
	[[nodiscard]] std::string serialize_spec(experiment_spec const& spec);
} // namespace rbmc::experiments


#endif // !HPP_RBMC_SPEC_IO_INCLUDED
