#pragma once

#include <stdexcept>
#include <string>

namespace fixpoint {

// A caller broke a documented precondition.
struct ContractViolation : std::invalid_argument {
  explicit ContractViolation(const std::string& what) : std::invalid_argument(what) {}
};

// The oracle returned a value outside its declared range box, or otherwise
// behaved inconsistently with the promised map class.
struct OracleContractViolation : std::runtime_error {
  explicit OracleContractViolation(const std::string& what) : std::runtime_error(what) {}
};

// A runtime assertion that is guaranteed for certified instances failed;
// signals a broken oracle or an implementation bug.
struct InvariantBreach : std::runtime_error {
  explicit InvariantBreach(const std::string& what) : std::runtime_error(what) {}
};

// The planar case analysis ran out of candidates: every candidate's verified
// residual exceeded eps, which cannot happen for a genuinely nonexpansive map.
struct CaseAnalysisExhausted : InvariantBreach {
  explicit CaseAnalysisExhausted(const std::string& what) : InvariantBreach(what) {}
};

}  // namespace fixpoint
