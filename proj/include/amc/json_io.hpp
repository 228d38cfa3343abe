#pragma once

#include <json.hpp>

#include "amc/mc.hpp"
#include "amc/model.hpp"
#include "amc/por.hpp"
#include "amc/strategy.hpp"

// JSON views of every result the command line tool prints.  All emitters are
// deterministic: object keys are alphabetical (nlohmann::json default), state
// lists are sorted by name, transition lists by (source, event, target).

namespace amc {

using Json = nlohmann::json;

[[nodiscard]] Json model_to_json(const Model& m);
[[nodiscard]] Json strategy_to_json(const JointStrategy& sigma, const Amas& amas);
[[nodiscard]] Json lasso_to_json(const Lasso& lasso, const Model& m);
[[nodiscard]] Json outcome_to_json(const OutcomeGraph& g, StateId from);
[[nodiscard]] Json verdict_to_json(const Verdict& v, const Model& m);
[[nodiscard]] Json reduction_stats_to_json(const ReductionStats& s);
[[nodiscard]] Json reduced_model_to_json(const ReducedModel& r);
[[nodiscard]] Json variant_report_to_json(const VariantReport& v);
[[nodiscard]] Json reduction_report_to_json(const ReductionReport& r);

// Serializes with 2-space indentation and a trailing newline.
[[nodiscard]] std::string dump_json(const Json& j);

}  // namespace amc
