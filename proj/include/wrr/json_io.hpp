#ifndef WRR_JSON_IO_HPP
#define WRR_JSON_IO_HPP

// JSON views of the library types. Keys are lowercase snake case; field
// order follows the type declarations so output is reproducible byte for
// byte under a fixed indent.

#include <json.hpp>

#include "wrr/genericity.hpp"
#include "wrr/minima.hpp"
#include "wrr/retract.hpp"
#include "wrr/sympoint.hpp"

namespace wrr {

using Json = nlohmann::ordered_json;

inline Json json_of(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json json_of(const IMat& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json json_of(const Vec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

inline Json json_of(const IVec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

inline Json json_of(const std::vector<IVec>& vs) {
  Json out = Json::array();
  for (const IVec& v : vs) out.push_back(json_of(v));
  return out;
}

inline Json json_of(const ShortVectorSet& s) {
  return Json{{"radius", s.radius}, {"vectors", json_of(s.vectors)}};
}

inline Json json_of(const SuccessiveMinima& m) {
  Json values = Json::array();
  for (double v : m.values) values.push_back(v);
  return Json{{"values", std::move(values)}};
}

inline Json json_of(const MinimaFlag& f) {
  Json syst = json_of(f.syst);
  Json dims = Json::array();
  for (int d : f.lambda_dims) dims.push_back(d);
  Json lbases = Json::array();
  for (const auto& basis : f.lambda_bases) lbases.push_back(json_of(basis));
  Json tbases = Json::array();
  for (const Mat& block : f.theta_bases) tbases.push_back(json_of(block));
  return Json{{"syst", std::move(syst)},
              {"lambda_dims", std::move(dims)},
              {"lambda_bases", std::move(lbases)},
              {"theta_bases", std::move(tbases)}};
}

inline Json json_of(const StratumReport& r) {
  return Json{{"k", r.k},
              {"well_rounded", r.well_rounded},
              {"extremely_well_rounded", r.extremely_well_rounded},
              {"systole_index", r.systole_index}};
}

inline const char* flow_kind_name(FlowKind k) {
  switch (k) {
    case FlowKind::TFlow: return "T-flow";
    case FlowKind::PhiFlow: return "Phi-flow";
    default: return "retraction";
  }
}

inline Json json_of(const FlowPath& path) {
  Json samples = Json::array();
  for (const FlowSample& s : path.samples)
    samples.push_back(Json{{"param", s.param},
                           {"gram", json_of(s.point.gram())},
                           {"k", s.report.k},
                           {"syst1", s.syst1}});
  return Json{{"kind", flow_kind_name(path.kind)}, {"samples", std::move(samples)}};
}

inline Json json_of(const PerturbationPlan& plan) {
  Json steps = Json::array();
  for (const SectorStep& s : plan.steps)
    steps.push_back(Json{{"hyperplane_normal", json_of(s.hyperplane_normal)},
                         {"pivot", json_of(s.pivot)},
                         {"theta", s.theta},
                         {"eta", s.eta},
                         {"eliminated", json_of(s.eliminated)}});
  return Json{{"basis", json_of(plan.basis)},
              {"map_f", json_of(plan.map_f)},
              {"sector_data", std::move(steps)}};
}

inline Json json_of(const CycleScanReport& r) {
  Json rays = Json::array();
  for (const RayData& ray : r.rays) {
    Json samples = Json::array();
    for (const RaySample& s : ray.samples)
      samples.push_back(Json{{"radius", s.radius},
                             {"well_rounded", s.well_rounded},
                             {"syst1", s.syst1}});
    rays.push_back(Json{{"direction", json_of(ray.direction)},
                        {"samples", std::move(samples)}});
  }
  Json hits = Json::array();
  for (const ScanIntersection& x : r.intersections)
    hits.push_back(Json{{"direction", x.direction}, {"radius", x.radius}});
  return Json{{"base_point", json_of(r.base_point.gram())},
              {"b_matrix", json_of(r.b_matrix)},
              {"epsilon", r.epsilon},
              {"ray_samples", std::move(rays)},
              {"intersections", std::move(hits)}};
}

}  // namespace wrr

#endif
