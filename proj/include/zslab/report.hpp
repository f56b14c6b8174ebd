#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "zslab/sequence.hpp"

namespace zslab {

enum class Verdict { holds, fails };

/// Outcome of one exhaustive check. A failing report always carries at least
/// one counterexample that can be re-verified on its own.
struct CheckReport {
  std::string check;
  nlohmann::json params = nlohmann::json::object();
  Verdict verdict = Verdict::holds;
  std::vector<Sequence> counterexamples;
  /// All counterexamples seen, including those beyond the kept list.
  std::uint64_t counterexamples_total = 0;
  std::uint64_t cases_examined = 0;
  std::chrono::milliseconds elapsed{0};

  bool holds() const noexcept { return verdict == Verdict::holds; }

  /// Records a counterexample and flips the verdict to fails.
  void fail(const Sequence& witness);
  /// Cases and counterexamples add up; the verdict is the conjunction.
  void merge(const CheckReport& other);
};

std::string to_string(Verdict v);

/// {check, params, verdict, cases_examined, elapsed_ms, counterexamples[],
/// counterexamples_total}.
/// Keys are sorted; with include_timing = false the output is bit-stable.
nlohmann::json to_json(const CheckReport& report, bool include_timing = true);

/// Measures wall time of a check body into report.elapsed.
class ReportTimer {
 public:
  explicit ReportTimer(CheckReport& report)
      : report_(report), start_(std::chrono::steady_clock::now()) {}
  ~ReportTimer() {
    report_.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start_);
  }
  ReportTimer(const ReportTimer&) = delete;
  ReportTimer& operator=(const ReportTimer&) = delete;

 private:
  CheckReport& report_;
  std::chrono::steady_clock::time_point start_;
};

/// Counterexamples kept per report; the total is recorded separately.
inline constexpr std::size_t kMaxCounterexamples = 64;

}  // namespace zslab
