#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

namespace lawvere {

enum class Status { Ok, Fail, Inconclusive };
std::string to_string(Status s);

inline constexpr const char* kReportSchema = "lawvere-report/1";

// JSON shape: {schema, command, params, status, truncated, seconds, result}.
// Everything except seconds is deterministic given the params.
struct Report {
  std::string command;
  nlohmann::json params = nlohmann::json::object();
  nlohmann::json result = nlohmann::json::object();
  Status status = Status::Ok;
  bool truncated = false;
  double seconds = 0;
  std::string text;  // human-readable rendering
};

nlohmann::json to_json(const Report& r);
Report report_from_json(const nlohmann::json& j);

struct ReportOptions {
  std::size_t jobs = 1;
  std::uint64_t seed = 1;
  std::size_t list_limit = 4096;  // entries printed per table
};

Report report_theories(const ReportOptions& opt = {});
Report report_hom(const std::string& spec, std::size_t n, std::size_t m, const ReportOptions& opt = {});
Report report_order(const std::string& spec, std::size_t N, bool two_sided, const ReportOptions& opt = {});
Report report_conservativity(const std::string& spec, std::size_t N, const ReportOptions& opt = {});
Report report_tensor(const std::string& spec, std::size_t N, const std::string& mode, bool verify,
                     const ReportOptions& opt = {});
Report report_uniformity(const std::string& spec, std::size_t n, std::size_t m, const ReportOptions& opt = {});
Report report_additivity(const std::string& spec, std::size_t N, const ReportOptions& opt = {});
Report report_run(const std::string& file, const std::string& monad, const ReportOptions& opt = {});
Report report_laws(const std::string& monad, const std::string& suite, std::size_t max_type_size,
                   const ReportOptions& opt = {});

}  // namespace lawvere
