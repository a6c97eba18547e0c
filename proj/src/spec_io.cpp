// Rao-Blackwellized Monte Carlo v1.0
// Copyright (c) 2026 The rbmc authors
//
// SPDX-License-Identifier: Apache-2.0


#include <rbmc/spec_io.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>


namespace rbmc::experiments
{
	namespace
	{
		using json = nlohmann::json;

		void require_object(json const& node, std::string const& pointer, std::set<std::string> const& allowed)
		{
			if (!node.is_object())
				throw config_error{ "expected an object", pointer };
			for (auto const& [key, value] : node.items())
				if (!allowed.contains(key))
					throw config_error{ "unknown key '" + key + "'", pointer + "/" + key };
		}

		json const* find(json const& node, std::string const& key)
		{
			auto const it = node.find(key);
			return it == node.end() ? nullptr : &*it;
		}

		double read_number(json const& node, std::string const& pointer)
		{
			if (!node.is_number())
				throw config_error{ "expected a number", pointer };
			return node.get<double>();
		}

		std::uint64_t read_count(json const& node, std::string const& pointer)
		{
			if (node.is_number_unsigned())
				return node.get<std::uint64_t>();
			if (node.is_number_integer())
				throw config_error{ "expected a nonnegative integer", pointer };
			if (node.is_number_float())
			{
				double const value = node.get<double>();
				if (value >= 0 && value == std::floor(value) && value < 1.8e19)
					return static_cast<std::uint64_t>(value);
			}
			throw config_error{ "expected a nonnegative integer", pointer };
		}

		std::string read_string(json const& node, std::string const& pointer)
		{
			if (!node.is_string())
				throw config_error{ "expected a string", pointer };
			return node.get<std::string>();
		}

		std::vector<double> read_numbers(json const& node, std::string const& pointer)
		{
			if (!node.is_array())
				throw config_error{ "expected an array of numbers", pointer };
			std::vector<double> values;
			for (std::size_t i = 0; i < node.size(); ++i)
				values.push_back(read_number(node[i], pointer + "/" + std::to_string(i)));
			return values;
		}

		family_spec read_family(json const& node, std::string const& pointer)
		{
			require_object(node, pointer, { "family", "parameters", "weights", "matrix" });
			family_spec spec;
			auto const* family = find(node, "family");
			if (!family)
				throw config_error{ "missing key 'family'", pointer + "/family" };
			spec.family = read_string(*family, pointer + "/family");
			if (auto const* parameters = find(node, "parameters"))
			{
				if (!parameters->is_object())
					throw config_error{ "expected an object", pointer + "/parameters" };
				for (auto const& [key, value] : parameters->items())
					spec.parameters[key] = read_number(value, pointer + "/parameters/" + key);
			}
			if (auto const* weights = find(node, "weights"))
				spec.weights = read_numbers(*weights, pointer + "/weights");
			if (auto const* matrix = find(node, "matrix"))
			{
				if (!matrix->is_array())
					throw config_error{ "expected an array of rows", pointer + "/matrix" };
				for (std::size_t i = 0; i < matrix->size(); ++i)
					spec.matrix.push_back(read_numbers((*matrix)[i], pointer + "/matrix/" + std::to_string(i)));
			}
			return spec;
		}

		json write_family(family_spec const& spec)
		{
			json node = { { "family", spec.family } };
			if (!spec.parameters.empty())
			{
				node["parameters"] = json::object();
				for (auto const& [key, value] : spec.parameters)
					node["parameters"][key] = value;
			}
			if (!spec.weights.empty())
				node["weights"] = spec.weights;
			if (!spec.matrix.empty())
				node["matrix"] = spec.matrix;
			return node;
		}

		command_kind parse_command(std::string const& text, std::string const& pointer)
		{
			for (auto const kind : { command_kind::table, command_kind::fanchart, command_kind::bias_check, command_kind::normalize_check })
				if (to_string(kind) == text)
					return kind;
			throw config_error{ "unknown command '" + text + "'", pointer };
		}

		sampler_kind parse_sampler(std::string const& text, std::string const& pointer)
		{
			if (text == "mh")
				return sampler_kind::mh;
			if (text == "jump_restore")
				return sampler_kind::jump_restore;
			throw config_error{ "unknown sampler '" + text + "'", pointer };
		}
	} // namespace

	experiment_spec parse_spec(std::string_view const json_text)
	{
		json document;
		try
		{
			document = json::parse(json_text);
		}
		catch (json::parse_error const& e)
		{
			throw config_error{ std::string{ "malformed JSON: " } + e.what(), "" };
		}

		require_object(document, "",
			{ "name", "command", "sampler", "target", "proposal", "grid", "transfer", "integrands", "budget", "realizations", "seed",
				"burn_in", "holding_rate", "rate", "quantiles", "checkpoints", "sigma_gate", "relative_tolerance", "gate_floor" });

		experiment_spec spec;
		auto const required = [&](std::string const& key) -> json const& {
			auto const* node = find(document, key);
			if (!node)
				throw config_error{ "missing key '" + key + "'", "/" + key };
			return *node;
		};

		spec.name = read_string(required("name"), "/name");
		spec.command = parse_command(read_string(required("command"), "/command"), "/command");
		if (auto const* node = find(document, "sampler"))
			spec.sampler = parse_sampler(read_string(*node, "/sampler"), "/sampler");
		spec.target = read_family(required("target"), "/target");
		spec.proposal = read_family(required("proposal"), "/proposal");
		if (auto const* node = find(document, "grid"))
			spec.grid = read_numbers(*node, "/grid");
		if (auto const* node = find(document, "transfer"))
			spec.transfer = read_family(*node, "/transfer");

		if (auto const* node = find(document, "integrands"))
		{
			if (!node->is_array())
				throw config_error{ "expected an array", "/integrands" };
			for (std::size_t i = 0; i < node->size(); ++i)
			{
				std::string const pointer = "/integrands/" + std::to_string(i);
				auto const& item = (*node)[i];
				require_object(item, pointer, { "kind", "threshold", "value" });
				integrand_spec integrand;
				auto const* kind = find(item, "kind");
				if (!kind)
					throw config_error{ "missing key 'kind'", pointer + "/kind" };
				integrand.kind = read_string(*kind, pointer + "/kind");
				if (auto const* threshold = find(item, "threshold"))
					integrand.threshold = read_number(*threshold, pointer + "/threshold");
				if (auto const* value = find(item, "value"))
					integrand.value = read_number(*value, pointer + "/value");
				spec.integrands.push_back(integrand);
			}
		}

		spec.budget = read_count(required("budget"), "/budget");
		if (auto const* node = find(document, "realizations"))
			spec.realizations = read_count(*node, "/realizations");
		if (auto const* node = find(document, "seed"))
			spec.seed = read_count(*node, "/seed");
		if (auto const* node = find(document, "burn_in"))
			spec.burn_in = read_count(*node, "/burn_in");
		if (auto const* node = find(document, "holding_rate"))
			spec.holding_rate = read_number(*node, "/holding_rate");
		if (auto const* node = find(document, "rate"))
		{
			require_object(*node, "/rate", { "variant", "value" });
			if (auto const* variant = find(*node, "variant"))
			{
				auto const text = read_string(*variant, "/rate/variant");
				if (text == "absorbed")
					spec.rate.variant = rate_variant::absorbed;
				else if (text == "with_normalization")
					spec.rate.variant = rate_variant::with_normalization;
				else
					throw config_error{ "unknown rate variant '" + text + "'", "/rate/variant" };
			}
			if (auto const* value = find(*node, "value"))
				spec.rate.value = read_number(*value, "/rate/value");
		}
		if (auto const* node = find(document, "quantiles"))
			spec.quantiles = read_numbers(*node, "/quantiles");
		if (auto const* node = find(document, "checkpoints"))
			spec.checkpoints = read_count(*node, "/checkpoints");
		if (auto const* node = find(document, "sigma_gate"))
			spec.sigma_gate = read_number(*node, "/sigma_gate");
		if (auto const* node = find(document, "relative_tolerance"))
			spec.relative_tolerance = read_number(*node, "/relative_tolerance");
		if (auto const* node = find(document, "gate_floor"))
			spec.gate_floor = read_count(*node, "/gate_floor");

		validate(spec);
		return spec;
	}

	experiment_spec load_spec(std::filesystem::path const& path)
	{
		std::ifstream in{ path, std::ios::binary };
		if (!in)
			throw config_error{ "cannot open spec file '" + path.string() + "'", "" };
		std::ostringstream text;
		text << in.rdbuf();
		return parse_spec(text.str());
	}

	std::string serialize_spec(experiment_spec const& spec)
	{
		json document;
		document["name"] = spec.name;
		document["command"] = to_string(spec.command);
		document["sampler"] = to_string(spec.sampler);
		document["target"] = write_family(spec.target);
		document["proposal"] = write_family(spec.proposal);
		document["grid"] = spec.grid;
		if (spec.transfer)
			document["transfer"] = write_family(*spec.transfer);
		document["integrands"] = json::array();
		for (auto const& integrand : spec.integrands)
		{
			json item = { { "kind", integrand.kind } };
			if (integrand.kind == "indicator" || integrand.threshold != 0)
				item["threshold"] = integrand.threshold;
			if (integrand.kind == "constant" || integrand.value != 1)
				item["value"] = integrand.value;
			document["integrands"].push_back(item);
		}
		document["budget"] = spec.budget;
		document["realizations"] = spec.realizations;
		document["seed"] = spec.seed;
		document["burn_in"] = spec.burn_in;
		document["holding_rate"] = spec.holding_rate;
		document["rate"] = { { "variant", spec.rate.variant == rate_variant::absorbed ? "absorbed" : "with_normalization" }, { "value", spec.rate.value } };
		document["quantiles"] = spec.quantiles;
		document["checkpoints"] = spec.checkpoints;
		document["sigma_gate"] = spec.sigma_gate;
		document["relative_tolerance"] = spec.relative_tolerance;
		document["gate_floor"] = spec.gate_floor;
		return document.dump(2) + "\n";
	}
} // namespace rbmc::experiments
