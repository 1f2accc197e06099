#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "chroma/errors.hpp"

namespace chroma {

using json = nlohmann::json;

enum class CertStatus { verified, failed, infeasible_certified, inconclusive };

inline const char* to_string(CertStatus s) {
  switch (s) {
    case CertStatus::verified: return "VERIFIED";
    case CertStatus::failed: return "FAILED";
    case CertStatus::infeasible_certified: return "INFEASIBLE_CERTIFIED";
    case CertStatus::inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

inline CertStatus cert_status_from_string(const std::string& s) {
  if (s == "VERIFIED") return CertStatus::verified;
  if (s == "FAILED") return CertStatus::failed;
  if (s == "INFEASIBLE_CERTIFIED") return CertStatus::infeasible_certified;
  if (s == "INCONCLUSIVE") return CertStatus::inconclusive;
  throw invalid_argument_error("unknown certificate status: " + s);
}

// Machine-checkable record of one verified claim. Everything needed to
// re-derive the verdict is in `parameters` (a deterministic rebuild
// recipe) plus `witness`; `stats` are the figures the run produced.
struct Certificate {
  std::string claim;
  CertStatus status = CertStatus::failed;
  json parameters = json::object();
  json witness;  // null when no witness applies
  json stats = json::object();
  std::vector<std::string> notes;

  bool ok() const {
    return status == CertStatus::verified ||
           status == CertStatus::infeasible_certified;
  }

  json to_json() const {
    json j;
    j["claim"] = claim;
    j["status"] = to_string(status);
    j["parameters"] = parameters;
    if (!witness.is_null()) j["witness"] = witness;
    j["stats"] = stats;
    if (!notes.empty()) j["notes"] = notes;
    return j;
  }

  static Certificate from_json(const json& j) {
    Certificate c;
    c.claim = j.at("claim").get<std::string>();
    c.status = cert_status_from_string(j.at("status").get<std::string>());
    c.parameters = j.value("parameters", json::object());
    if (j.contains("witness")) c.witness = j["witness"];
    c.stats = j.value("stats", json::object());
    if (j.contains("notes")) c.notes = j["notes"].get<std::vector<std::string>>();
    return c;
  }

  std::string to_markdown() const {
    std::string md = "## Certificate: " + claim + "\n\n";
    md += "- **status**: " + std::string(to_string(status)) + "\n";
    md += "- **parameters**: `" + parameters.dump() + "`\n";
    md += "- **stats**: `" + stats.dump() + "`\n";
    if (!witness.is_null()) md += "- **witness**: `" + witness.dump() + "`\n";
    for (const auto& n : notes) md += "- note: " + n + "\n";
    return md;
  }
};

}  // namespace chroma
