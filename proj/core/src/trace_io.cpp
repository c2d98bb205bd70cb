#include "collapse/trace_io.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <vector>

#include "json.hpp"

namespace collapse {

namespace {

using nlohmann::json;

json candidate_json(const Candidate& c) {
  return json{{"theta", c.axis.theta()},
              {"phi", c.axis.phi()},
              {"overlap", c.overlap},
              {"s_up", c.s_up},
              {"component", c.component_id},
              {"is_boundary", c.is_boundary},
              {"retained", c.retained},
              {"kind", c.kind == ExtremumKind::maximum ? "max" : "min"}};
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

std::string step_record_json(const StepRecord& r) {
  json j;
  j["step"] = r.step_index;
  j["status"] = std::string(to_string(r.status));
  j["theta_i"] = r.axis_before.theta();
  j["phi_i"] = r.axis_before.phi();
  j["theta_f"] = r.axis_after.theta();
  j["phi_f"] = r.axis_after.phi();
  j["outcome"] = r.outcome ? json(to_bit(*r.outcome)) : json(nullptr);
  j["rho_before"] = r.state_before.rho();
  j["tau_before"] = r.state_before.tau();
  j["rho_after"] = r.state_after.rho();
  j["tau_after"] = r.state_after.tau();
  j["s_i"] = r.s_i.value();
  j["s_up"] = r.s_up.value();
  j["world_id"] = r.world_id;
  return j.dump();
}

void write_jsonl(std::ostream& out, const RunResult& result) {
  for (const auto& r : result.records) out << step_record_json(r) << '\n';
}

std::string run_summary_json(const RunResult& result) {
  json j;
  j["steps"] = result.records.size();
  j["halted"] = result.halted;
  j["halt_reason"] = std::string(to_string(result.halt_reason));
  j["death_step"] = result.death_step ? json(*result.death_step) : json(nullptr);
  return j.dump();
}

std::string solution_json(const CollapseSolution& sol, int indent) {
  json j;
  j["status"] = std::string(to_string(sol.status));
  j["method"] = std::string(to_string(sol.method));
  j["theta_i"] = sol.axis_i.theta();
  j["phi_i"] = sol.axis_i.phi();
  j["theta_f"] = sol.axis_f.theta();
  j["phi_f"] = sol.axis_f.phi();
  j["labels_swapped"] = sol.axis_f.labels_swapped();
  j["overlap"] = sol.overlap;
  j["s_up"] = sol.s_up.value();
  j["s_i"] = sol.s_i.value();
  j["s_f"] = sol.s_f.value();
  json cands = json::array();
  for (const auto& c : sol.candidates) cands.push_back(candidate_json(c));
  j["candidates"] = std::move(cands);
  if (sol.agreement) {
    const auto& a = *sol.agreement;
    j["method_agreement"] = json{{"agree", a.agree},
                                 {"closed_form_status", std::string(to_string(a.closed_form_status))},
                                 {"closed_form_theta_f", a.closed_form_axis.theta()},
                                 {"closed_form_phi_f", a.closed_form_axis.phi()},
                                 {"closed_form_s_up", a.closed_form_s_up},
                                 {"axis_delta", a.axis_delta},
                                 {"s_up_delta", a.s_up_delta},
                                 {"axis_tolerance", kAgreementAxisTol},
                                 {"s_up_tolerance", kAgreementEntropyTol}};
  } else {
    j["method_agreement"] = nullptr;
  }
  return j.dump(indent);
}

void write_trace_csv(std::ostream& out, std::span<const LevelSetCurve> curves) {
  out << kTraceCsvHeader << '\n';
  std::vector<const LevelSetCurve*> order;
  for (const auto& c : curves) order.push_back(&c);
  std::stable_sort(order.begin(), order.end(),
                   [](const LevelSetCurve* a, const LevelSetCurve* b) { return a->component_id < b->component_id; });
  for (const LevelSetCurve* c : order) {
    const std::size_t n = c->vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
      const auto& v = c->vertices[i];
      const bool boundary = !c->closed && (i == 0 || i + 1 == n);
      out << format_number(v.theta) << ',' << format_number(v.phi) << ',' << format_number(c->level) << ','
          << c->component_id << ',' << format_number(v.overlap) << ',' << format_number(v.s_up) << ','
          << (boundary ? 1 : 0) << '\n';
    }
  }
}

}  // namespace collapse
