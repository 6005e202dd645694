#include "rmc/report.hpp"

#include <sstream>

namespace rmc {

namespace {

Json witness_json(const ConstraintMatrix& cm, const std::vector<int>& w, CountCondition cond) {
  Json j;
  j["size"] = w.size();
  j["min_slack"] = w.empty() ? Json(nullptr) : Json(min_slack(cm, w, cond));
  Json cols = Json::array();
  for (int c : w) {
    const auto& col = cm.columns[static_cast<std::size_t>(c)];
    cols.push_back({{"index", c}, {"origin", col.origin}, {"rows", col.rows}});
  }
  j["columns"] = std::move(cols);
  return j;
}

std::vector<int> witness_indices(const Json& j) {
  std::vector<int> out;
  for (const auto& c : j.at("columns")) out.push_back(c.at("index").get<int>());
  return out;
}

const char* kind_name(Refutation::Kind k) {
  switch (k) {
    case Refutation::Kind::RankTooLarge: return "rank_too_large";
    case Refutation::Kind::OriginShortage: return "origin_shortage";
    case Refutation::Kind::RankBound: return "rank_bound";
    case Refutation::Kind::ExhaustedSearch: return "exhausted_search";
  }
  return "?";
}

Refutation::Kind kind_from(const std::string& s) {
  if (s == "rank_too_large") return Refutation::Kind::RankTooLarge;
  if (s == "origin_shortage") return Refutation::Kind::OriginShortage;
  if (s == "rank_bound") return Refutation::Kind::RankBound;
  if (s == "exhausted_search") return Refutation::Kind::ExhaustedSearch;
  throw std::invalid_argument("unknown refutation kind: " + s);
}

CertificateVerdict verdict_from(const std::string& s) {
  for (auto v : {CertificateVerdict::Finite, CertificateVerdict::Unique, CertificateVerdict::Refuted,
                 CertificateVerdict::Indeterminate}) {
    if (to_string(v) == s) return v;
  }
  throw std::invalid_argument("unknown certificate verdict: " + s);
}

}  // namespace

Json certificate_json(const ConstraintMatrix& cm, const Certificate& cert) {
  Json j;
  j["verdict"] = to_string(cert.verdict);
  j["rank"] = cm.rank;
  j["rows"] = cm.rows;
  j["constraint_columns"] = cm.size();
  j["distinct_origins"] = cm.distinct_origins();
  if (cert.finite_witness) j["finite_witness"] = witness_json(cm, *cert.finite_witness, CountCondition::finite(cm.rank));
  if (cert.unique_witness) j["unique_witness"] = witness_json(cm, *cert.unique_witness, CountCondition::unique(cm.rank));
  if (cert.refutation) {
    const auto& r = *cert.refutation;
    Json ref;
    ref["kind"] = kind_name(r.kind);
    ref["reason"] = r.reason;
    ref["two_blocks"] = r.two_blocks;
    ref["bound"] = r.bound;
    ref["target"] = r.target;
    if (r.has_rank_bound) {
      ref["separating_finite"] = r.finite_part;
      ref["separating_unique"] = r.unique_part;
    }
    j["refutation"] = std::move(ref);
  }
  if (!cert.note.empty()) j["note"] = cert.note;
  j["nodes"] = cert.nodes;
  return j;
}

Certificate certificate_from_json(const Json& j) {
  Certificate cert;
  cert.verdict = verdict_from(j.at("verdict").get<std::string>());
  if (j.contains("finite_witness")) cert.finite_witness = witness_indices(j["finite_witness"]);
  if (j.contains("unique_witness")) cert.unique_witness = witness_indices(j["unique_witness"]);
  if (j.contains("refutation")) {
    const auto& r = j["refutation"];
    Refutation ref;
    ref.kind = kind_from(r.at("kind").get<std::string>());
    ref.reason = r.at("reason").get<std::string>();
    ref.two_blocks = r.at("two_blocks").get<bool>();
    ref.bound = r.at("bound").get<int>();
    ref.target = r.at("target").get<int>();
    if (r.contains("separating_finite")) {
      ref.has_rank_bound = true;
      ref.finite_part = r["separating_finite"].get<std::vector<int>>();
      ref.unique_part = r["separating_unique"].get<std::vector<int>>();
    }
    cert.refutation = std::move(ref);
  }
  if (j.contains("note")) cert.note = j["note"].get<std::string>();
  cert.nodes = j.value("nodes", std::int64_t{0});
  return cert;
}

Json removal_json(const RemovalSet& removal) {
  Json cells = Json::array();
  for (const Cell& c : removal.cells) cells.push_back({c.row, c.col});
  return cells;
}

RemovalSet removal_from_json(const Json& j) {
  RemovalSet out;
  for (const auto& c : j) out.cells.push_back({c.at(0).get<int>(), c.at(1).get<int>()});
  return out;
}

Json robust_json(const RobustVerdict& v, const SamplingPattern& pattern, int r, NoiseBudget budget) {
  Json j;
  j["verdict"] = to_string(v.verdict);
  j["rank"] = r;
  j["noise"] = budget.to_string();
  j["rows"] = pattern.rows();
  j["cols"] = pattern.cols();
  j["observed"] = pattern.observed_count();
  j["premise_violated"] = v.premise_violated;
  j["checked"] = v.checked;
  j["removal_patterns"] = v.total ? Json(*v.total) : Json(nullptr);
  if (!v.reason.empty()) j["reason"] = v.reason;
  if (v.failing_removal) {
    j["failing_removal"] = removal_json(*v.failing_removal);
    if (v.failing_certificate) {
      const auto cm = build_constraint_matrix(remove_entries(pattern, *v.failing_removal), r);
      j["failing_certificate"] = certificate_json(cm, *v.failing_certificate);
    }
  }
  return j;
}

Json bound_json(const BoundQuery& q, const BoundResult& b) {
  Json j;
  j["d"] = q.d;
  if (q.N) j["N"] = *q.N;
  j["r"] = q.r;
  j["epsilon"] = q.epsilon;
  j["noise"] = q.budget ? q.budget->to_string() : "none";
  j["l_min"] = b.l_min;
  j["binding"] = b.binding;
  j["rhs"] = b.rhs;
  j["portion"] = static_cast<double>(b.l_min) / q.d;
  j["feasible"] = b.feasible;
  j["premise_ok"] = b.premise_ok;
  if (b.finite_N_ok) j["finite_N_ok"] = *b.finite_N_ok;
  if (b.unique_N_ok) j["unique_N_ok"] = *b.unique_N_ok;
  return j;
}

Json rank_ceiling_json(const RankCeiling& c) {
  Json j;
  j["r_star"] = c.r_star;
  j["noise"] = c.budget.to_string();
  j["exact"] = c.exact;
  Json table = Json::array();
  for (const auto& [r, v] : c.per_rank) {
    Json row{{"r", r}, {"verdict", to_string(v.verdict)}, {"premise_violated", v.premise_violated},
             {"checked", v.checked}};
    if (!v.reason.empty()) row["reason"] = v.reason;
    if (v.failing_removal) row["failing_removal"] = removal_json(*v.failing_removal);
    table.push_back(std::move(row));
  }
  j["per_rank"] = std::move(table);
  return j;
}

Json dichotomy_json(const DichotomyReport& d) {
  Json j;
  j["r_prime"] = d.r_prime;
  j["r_star"] = d.r_star;
  j["exact"] = d.exact;
  j["completion_rank"] = d.completion_rank ? Json(*d.completion_rank) : Json(nullptr);
  j["alternative"] = d.alternative == DichotomyAlternative::RankAtMost ? "i" : "ii";
  j["statement"] = d.statement;
  return j;
}

Json trial_json(const TrialOutcome& o) {
  Json j;
  j["l"] = o.l;
  j["pass"] = o.pass_count;
  j["trials"] = o.trial_count;
  j["estimate"] = o.point_estimate;
  j["ci_lo"] = o.confidence_interval.lo;
  j["ci_hi"] = o.confidence_interval.hi;
  Json reasons = Json::object();
  for (const auto& [k, v] : o.failure_reasons) reasons[k] = v;
  j["failures"] = std::move(reasons);
  return j;
}

Json threshold_json(const ThresholdResult& t, double epsilon) {
  Json j;
  j["epsilon"] = epsilon;
  j["empirical_l"] = t.empirical_l ? Json(*t.empirical_l) : Json(nullptr);
  j["theory_l_min"] = t.theory_l_min;
  j["theory_capped"] = t.theory_capped;
  Json rows = Json::array();
  for (const auto& o : t.outcomes) rows.push_back(trial_json(o));
  j["outcomes"] = std::move(rows);
  return j;
}

Json fit_json(const FitResult& f) {
  return Json{{"residual", f.residual},
              {"iterations", f.iterations},
              {"converged", f.converged},
              {"admits", f.admits},
              {"underdetermined_columns", f.underdetermined_columns}};
}

Json instance_metadata_json(const Instance& inst) {
  Json j;
  j["d"] = inst.pattern.rows();
  j["N"] = inst.pattern.cols();
  j["r"] = inst.rank;
  j["noise"] = inst.budget.to_string();
  j["planted"] = inst.planted;
  j["seed"] = inst.seed;
  Json support = Json::array();
  for (const Cell& c : inst.noise_support) support.push_back({c.row, c.col});
  j["noise_support"] = std::move(support);
  return j;
}

std::string render_text(const Json& j) {
  std::ostringstream out;
  for (const auto& [key, value] : j.items()) {
    out << key << ": ";
    if (value.is_string()) {
      out << value.get<std::string>();
    } else {
      out << value.dump();
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace rmc
