#include "zslab/report.hpp"

namespace zslab {

void CheckReport::fail(const Sequence& witness) {
  verdict = Verdict::fails;
  if (counterexamples.size() < kMaxCounterexamples) counterexamples.push_back(witness);
  ++counterexamples_total;
}

void CheckReport::merge(const CheckReport& other) {
  cases_examined += other.cases_examined;
  counterexamples_total += other.counterexamples_total;
  if (!other.holds()) verdict = Verdict::fails;
  for (const auto& s : other.counterexamples) {
    if (counterexamples.size() < kMaxCounterexamples) counterexamples.push_back(s);
  }
}

std::string to_string(Verdict v) { return v == Verdict::holds ? "holds" : "fails"; }

nlohmann::json to_json(const CheckReport& report, bool include_timing) {
  nlohmann::json out;
  out["check"] = report.check;
  out["params"] = report.params;
  out["verdict"] = to_string(report.verdict);
  out["cases_examined"] = report.cases_examined;
  out["counterexamples_total"] = report.counterexamples_total;
  if (include_timing) out["elapsed_ms"] = report.elapsed.count();
  auto& list = out["counterexamples"] = nlohmann::json::array();
  for (const auto& s : report.counterexamples) {
    list.push_back({{"group", s.group().to_string()}, {"sequence", format_sequence(s)}});
  }
  return out;
}

}  // namespace zslab
