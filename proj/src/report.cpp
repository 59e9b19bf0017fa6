#include "cuspext/report.hpp"

#include <cmath>
#include <sstream>

namespace cuspext {

namespace {

// nlohmann writes non-finite doubles as null; keep infinities readable.
Json number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

template <class T>
Json optional_number(const std::optional<T>& v) {
  return v ? number(static_cast<double>(*v)) : Json(nullptr);
}

std::string csv_number(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

template <class T>
std::string csv_optional(const std::optional<T>& v) {
  return v ? csv_number(static_cast<double>(*v)) : std::string();
}

}  // namespace

Json to_json(const DomainPoint& z) {
  Json j;
  j["t"] = number(z.t);
  Json x = Json::array();
  for (double xi : z.x) x.push_back(number(xi));
  j["x"] = std::move(x);
  return j;
}

Json to_json(const DistortionReport& r) {
  Json j;
  j["sample_count"] = r.sample_count;
  j["min_ratio"] = number(r.min_ratio);
  j["max_ratio"] = number(r.max_ratio);
  j["min_jacobian"] = number(r.min_jacobian);
  j["max_jacobian"] = number(r.max_jacobian);
  j["jacobian_samples"] = r.jacobian_samples;
  return j;
}

Json to_json(const ImageCheck& r) {
  Json j;
  j["ok"] = r.ok;
  j["checked_forward"] = r.checked_forward;
  j["checked_inverse"] = r.checked_inverse;
  j["skipped_band"] = r.skipped_band;
  j["counterexample"] = r.counterexample ? to_json(*r.counterexample) : Json(nullptr);
  j["failure"] = r.failure;
  return j;
}

Json to_json(const SeamModulus& r) {
  Json j;
  j["seam"] = r.seam;
  Json d = Json::array(), m = Json::array();
  for (double v : r.deltas) d.push_back(number(v));
  for (double v : r.modulus) m.push_back(number(v));
  j["deltas"] = std::move(d);
  j["modulus"] = std::move(m);
  j["stable"] = r.stable;
  return j;
}

Json to_json(const QuotientCheck& r) {
  Json j;
  j["ok"] = r.ok;
  if (r.first_violation)
    j["first_violation"] = {number(r.first_violation->first), number(r.first_violation->second)};
  else
    j["first_violation"] = nullptr;
  return j;
}

Json to_json(const DoublingTransfer& r) {
  Json j;
  j["ok"] = r.ok;
  j["bound"] = number(r.bound);
  j["max_ratio"] = number(r.max_ratio);
  j["worst_t_hat"] = number(r.worst_t_hat);
  j["nodes_checked"] = r.nodes_checked;
  return j;
}

Json to_json(const BoundaryDecay& r) {
  Json j;
  j["ok"] = r.ok;
  j["normals"] = r.normals;
  j["worst_ratio"] = number(r.worst_ratio);
  j["worst_point"] = to_json(r.worst_point);
  return j;
}

Json to_json(const NormReport& r) {
  Json j;
  j["field"] = r.field;
  j["profile"] = r.profile;
  j["n"] = r.n;
  j["p"] = number(r.p);
  j["q"] = number(r.q);
  j["norm_u_W1p"] = number(r.norm_u_W1p);
  j["norm_Eu_W1q"] = number(r.norm_Eu_W1q);
  j["ratio"] = optional_number(r.ratio);
  j["zero_denominator"] = r.zero_denominator;
  j["refined_ratio"] = optional_number(r.refined_ratio);
  j["refinement_delta"] = optional_number(r.refinement_delta);
  j["resolution"] = r.resolution;
  j["nodes"] = r.nodes;
  j["excluded_nodes"] = r.excluded_nodes;
  return j;
}

Json to_json(const IntegralCheck& r) {
  Json j;
  j["verdict"] = std::string(to_string(r.verdict));
  j["value"] = number(r.value);
  j["partial_sum"] = number(r.partial_sum);
  j["tail_ratio"] = number(r.tail_ratio);
  j["decay"] = r.decay;
  j["decay_exponent"] = number(r.decay_exponent);
  j["alpha"] = optional_number(r.alpha);
  return j;
}

Json to_json(const DoublingCheck& r) {
  Json j;
  j["constant"] = number(r.constant);
  j["worst_t"] = number(r.worst_t);
  j["unbounded"] = r.unbounded;
  j["nodes"] = r.nodes;
  return j;
}

Json to_json(const AdmissibilityVerdict& v) {
  Json j;
  j["n"] = v.n;
  j["s"] = number(v.s);
  j["p"] = number(v.p);
  j["q"] = number(v.q);
  Json m = Json::array();
  for (Mechanism x : v.mechanisms) m.push_back(std::string(to_string(x)));
  j["mechanisms"] = std::move(m);
  j["s1"] = optional_number(v.thresholds.s1);
  j["s2"] = optional_number(v.thresholds.s2);
  Json c = Json::array();
  for (const auto& cv : v.condition_values) {
    Json e = to_json(cv.check);
    e["name"] = cv.name;
    c.push_back(std::move(e));
  }
  j["condition_values"] = std::move(c);
  j["quotient_hypothesis"] = v.quotient_hypothesis ? Json(*v.quotient_hypothesis) : Json(nullptr);
  j["admissible"] = v.admissible ? Json(*v.admissible) : Json(nullptr);
  return j;
}

Json to_json(const SweepResult& r) {
  Json j;
  j["n"] = r.n;
  j["p"] = number(r.p);
  j["q"] = number(r.q);
  j["limit_case"] = r.limit_case;
  j["frontier"] = optional_number(r.frontier);
  j["s1"] = optional_number(r.analytic.s1);
  j["s2"] = optional_number(r.analytic.s2);
  j["rows"] = r.rows.size();
  return j;
}

void write_sweep_csv(std::ostream& out, const SweepResult& r) {
  out << "sigma,admissible,via,s_max_e1,s_max_e2,s_max_e3,inc1,inc1_value,inc2,inc2_value,s1,s2\n";
  for (const SweepRow& row : r.rows) {
    std::string via;
    for (Mechanism m : row.via) {
      if (!via.empty()) via += '|';
      via += to_string(m);
    }
    out << csv_number(row.sigma) << ',' << (row.admissible ? "true" : "false") << ',' << via << ','
        << csv_optional(row.s_max_e1) << ',' << csv_optional(row.s_max_e2) << ','
        << csv_optional(row.s_max_e3) << ',' << (row.inc1 ? to_string(*row.inc1) : "") << ','
        << csv_optional(row.inc1_value) << ',' << (row.inc2 ? to_string(*row.inc2) : "") << ','
        << csv_optional(row.inc2_value) << ',' << csv_optional(r.analytic.s1) << ','
        << csv_optional(r.analytic.s2) << '\n';
  }
}

void write_norm_csv(std::ostream& out, const std::vector<NormReport>& reports) {
  out << "field,profile,n,p,q,norm_u_W1p,norm_Eu_W1q,ratio,refined_ratio,refinement_delta\n";
  for (const NormReport& r : reports) {
    out << r.field << ',' << r.profile << ',' << r.n << ',' << csv_number(r.p) << ','
        << csv_number(r.q) << ',' << csv_number(r.norm_u_W1p) << ',' << csv_number(r.norm_Eu_W1q)
        << ',' << csv_optional(r.ratio) << ',' << csv_optional(r.refined_ratio) << ','
        << csv_optional(r.refinement_delta) << '\n';
  }
}

}  // namespace cuspext
