#pragma once

#include <string>
#include <vector>

namespace failop {

/// Machine-readable codes for every rule the engine can report as broken,
/// covering both model validation and deployment-configuration checks.
enum class ViolationCode {
  // model validation
  DUPLICATE_ID,
  DANGLING_REF,
  NON_POSITIVE_DURATION,
  ASIL_OUT_OF_RANGE,
  NEGATIVE_FAIL_OP,
  NO_CENTRAL_NODE,
  NODE_LIMIT,
  CHI_INCONSISTENT,
  EMPTY_FEATURE,
  EMPTY_CLUSTER,
  CLUSTER_NOT_HOMOGENEOUS,
  CLUSTER_PARTITION,
  NON_POSITIVE_PRIORITY,
  // deployment configuration checks
  PLACEMENT_INVALID,
  BUDGET_EXCEEDED,
  ACTIVE_ON_ISOLATED,
  SUPPLY_DIVERSITY,
  SLAVE_NOT_ALLOWED,
  SLAVE_MODE_MISMATCH,
  ALLOC_ON_PERIPHERAL,
  ALLOC_COUNT,
  CONTINUITY_ALLOC,
  PROMOTION,
};

inline const char* to_string(ViolationCode code) {
  switch (code) {
    case ViolationCode::DUPLICATE_ID: return "DUPLICATE_ID";
    case ViolationCode::DANGLING_REF: return "DANGLING_REF";
    case ViolationCode::NON_POSITIVE_DURATION: return "NON_POSITIVE_DURATION";
    case ViolationCode::ASIL_OUT_OF_RANGE: return "ASIL_OUT_OF_RANGE";
    case ViolationCode::NEGATIVE_FAIL_OP: return "NEGATIVE_FAIL_OP";
    case ViolationCode::NO_CENTRAL_NODE: return "NO_CENTRAL_NODE";
    case ViolationCode::NODE_LIMIT: return "NODE_LIMIT";
    case ViolationCode::CHI_INCONSISTENT: return "CHI_INCONSISTENT";
    case ViolationCode::EMPTY_FEATURE: return "EMPTY_FEATURE";
    case ViolationCode::EMPTY_CLUSTER: return "EMPTY_CLUSTER";
    case ViolationCode::CLUSTER_NOT_HOMOGENEOUS: return "CLUSTER_NOT_HOMOGENEOUS";
    case ViolationCode::CLUSTER_PARTITION: return "CLUSTER_PARTITION";
    case ViolationCode::NON_POSITIVE_PRIORITY: return "NON_POSITIVE_PRIORITY";
    case ViolationCode::PLACEMENT_INVALID: return "PLACEMENT_INVALID";
    case ViolationCode::BUDGET_EXCEEDED: return "BUDGET_EXCEEDED";
    case ViolationCode::ACTIVE_ON_ISOLATED: return "ACTIVE_ON_ISOLATED";
    case ViolationCode::SUPPLY_DIVERSITY: return "SUPPLY_DIVERSITY";
    case ViolationCode::SLAVE_NOT_ALLOWED: return "SLAVE_NOT_ALLOWED";
    case ViolationCode::SLAVE_MODE_MISMATCH: return "SLAVE_MODE_MISMATCH";
    case ViolationCode::ALLOC_ON_PERIPHERAL: return "ALLOC_ON_PERIPHERAL";
    case ViolationCode::ALLOC_COUNT: return "ALLOC_COUNT";
    case ViolationCode::CONTINUITY_ALLOC: return "CONTINUITY_ALLOC";
    case ViolationCode::PROMOTION: return "PROMOTION";
  }
  return "UNKNOWN";
}

/// One broken rule, identifying the cluster/node involved and the offending
/// values. Checks collect all violations they find; nothing fails fast.
struct Violation {
  ViolationCode code;
  std::string cluster_id;  // empty when not cluster-specific
  std::string node_id;     // empty when not node-specific
  std::string detail;
};

inline bool contains(const std::vector<Violation>& vs, ViolationCode code) {
  for (const auto& v : vs)
    if (v.code == code) return true;
  return false;
}

}  // namespace failop
