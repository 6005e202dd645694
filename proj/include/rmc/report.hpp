// Structured (JSON) reports for every result type.
#pragma once

#include <json.hpp>

#include <string>

#include "rmc/bounds.hpp"
#include "rmc/certify.hpp"
#include "rmc/numeric.hpp"
#include "rmc/rank.hpp"
#include "rmc/robust.hpp"
#include "rmc/sim.hpp"

namespace rmc {

using Json = nlohmann::ordered_json;

/// Verdict, witnesses (index, origin, row support), slack values and any
/// refutation data; enough to re-verify without this library.
Json certificate_json(const ConstraintMatrix& cm, const Certificate& cert);
/// Reads back the verdict, witness indices and refutation of certificate_json.
Certificate certificate_from_json(const Json& j);

Json removal_json(const RemovalSet& removal);
RemovalSet removal_from_json(const Json& j);

/// `pattern` and `r` let the failing certificate be rendered in full.
Json robust_json(const RobustVerdict& v, const SamplingPattern& pattern, int r, NoiseBudget budget);
Json bound_json(const BoundQuery& q, const BoundResult& b);
Json rank_ceiling_json(const RankCeiling& c);
Json dichotomy_json(const DichotomyReport& d);
Json trial_json(const TrialOutcome& o);
Json threshold_json(const ThresholdResult& t, double epsilon);
Json fit_json(const FitResult& f);
/// Sidecar metadata for an instance written as an observation file.
Json instance_metadata_json(const Instance& inst);

/// Renders a JSON document as "key: value" lines.
std::string render_text(const Json& j);

}  // namespace rmc
