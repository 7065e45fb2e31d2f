#include "perihyp/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace perihyp {

namespace {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_field_csv(const std::string& path, const Field& f, const FileMeta& meta) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  for (const auto& [k, v] : meta) out << "# " << k << ": " << v << "\n";
  out << "t_index,x_index,component,value\n";
  const auto& g = f.grid();
  for (int c = 0; c < f.ncomp(); ++c)
    for (int it = 0; it < g.nt; ++it)
      for (int ix = 0; ix < g.nx; ++ix)
        out << it << ',' << ix << ',' << c << ',' << fmt17(f.at(c, it, ix)) << "\n";
}

void write_json(const std::string& path, const nlohmann::ordered_json& body,
                const FileMeta& meta) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json m;
  for (const auto& [k, v] : meta) m[k] = v;
  j["meta"] = m;
  for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

nlohmann::ordered_json report_to_json(const SolveReport& rep) {
  nlohmann::ordered_json j;
  j["status"] = to_string(rep.status);
  j["final_residual"] = rep.final_residual;
  j["residuals"] = rep.residuals;
  j["contraction_ratios"] = rep.ratios;
  j["inner_iterations"] = rep.inner_iterations;
  if (rep.status == SolveStatus::resonance) j["resonant_lambda"] = rep.resonant_lambda;
  j["note"] = rep.note;
  return j;
}

nlohmann::ordered_json resonance_to_json(const ResonanceTable& table) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : table.rows) {
    nlohmann::ordered_json row;
    row["lambda"] = r.lambda;
    row["sigma_min"] = r.sigma_min;
    row["sigma_min_rel"] = r.sigma_min_rel;
    row["cond"] = r.cond;
    row["R"] = r.R;
    row["S"] = r.S;
    if (r.min_mode_multiplier) row["min_mode_multiplier"] = *r.min_mode_multiplier;
    row["flag_sigma"] = r.flag_sigma;
    row["flag_rs"] = r.flag_rs;
    row["flag_multiplier"] = r.flag_multiplier;
    row["flagged"] = r.flagged();
    rows.push_back(std::move(row));
  }
  nlohmann::ordered_json j;
  j["thresholds"] = {{"rs_warning", table.thresholds.rs_warning},
                     {"sigma_floor_rel", table.thresholds.sigma_floor_rel},
                     {"multiplier_floor", table.thresholds.multiplier_floor}};
  j["rows"] = std::move(rows);
  return j;
}

nlohmann::ordered_json probe_to_json(const SmoothnessProbe& probe) {
  nlohmann::ordered_json orders = nlohmann::ordered_json::array();
  for (const auto& o : probe.orders) {
    nlohmann::ordered_json row;
    row["order"] = o.order;
    row["norm0"] = o.norm0;
    row["norm1"] = o.norm1;
    if (std::isfinite(o.richardson_order)) row["richardson_order"] = o.richardson_order;
    orders.push_back(std::move(row));
  }
  nlohmann::ordered_json j;
  j["center_lambda"] = probe.center_lambda;
  j["step"] = probe.step;
  j["orders"] = std::move(orders);
  return j;
}

}  // namespace perihyp
