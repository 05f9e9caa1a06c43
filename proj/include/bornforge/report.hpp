#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bornforge/harness.hpp"
#include "bornforge/linalg.hpp"

namespace bornforge {

inline constexpr const char* BORNFORGE_VERSION = "1.0.0";

/**
 * Everything a verification run produces. Mutants and rigidity blocks are
 * optional; they are omitted from the serialized report when absent.
 */
struct ReportInputs {
  std::string theory_name;
  SuiteConfig config;
  std::vector<ClaimCheck> claims;
  std::vector<MutantOutcome> mutants;  // empty = omit the block
  std::optional<RigidityReport> rigidity;
};

/**
 * Serializes a run as JSON with a fixed key order and no volatile fields
 * (no timestamps, hostnames or paths), so identical inputs give
 * byte-identical output. The summary block is computed from the claim list.
 */
nlohmann::ordered_json report_json(const ReportInputs& in);

/** Human-readable one-line-per-claim rendering of the same content. */
std::string report_text(const ReportInputs& in);

/** True when the run is clean: no failed claims and no missed mutants. */
bool report_pass(const ReportInputs& in);

/** JSON rendering of a matrix: rows of [re, im] pairs. */
nlohmann::ordered_json matrix_json(const Matrix& m);

}  // namespace bornforge
