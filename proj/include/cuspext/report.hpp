#pragma once

#include <ostream>

#include <json.hpp>

#include "cuspext/admissibility.hpp"
#include "cuspext/bilip.hpp"
#include "cuspext/extension.hpp"
#include "cuspext/lipschitzify.hpp"
#include "cuspext/quadrature.hpp"

namespace cuspext {

using Json = nlohmann::ordered_json;

Json to_json(const DomainPoint& z);
Json to_json(const DistortionReport& r);
Json to_json(const ImageCheck& r);
Json to_json(const SeamModulus& r);
Json to_json(const QuotientCheck& r);
Json to_json(const DoublingTransfer& r);
Json to_json(const BoundaryDecay& r);
Json to_json(const NormReport& r);
Json to_json(const IntegralCheck& r);
Json to_json(const DoublingCheck& r);
Json to_json(const AdmissibilityVerdict& v);
Json to_json(const SweepResult& r);

/// One row per sigma: sigma,admissible,via,s_max_e1,s_max_e2,s_max_e3,
/// inc1,inc1_value,inc2,inc2_value,s1,s2.
void write_sweep_csv(std::ostream& out, const SweepResult& r);

/// field,profile,n,p,q,norm_u_W1p,norm_Eu_W1q,ratio,refined_ratio,refinement_delta
void write_norm_csv(std::ostream& out, const std::vector<NormReport>& reports);

}  // namespace cuspext
