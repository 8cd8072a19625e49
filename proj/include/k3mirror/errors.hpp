#pragma once

#include <stdexcept>
#include <string>

namespace k3m {

// One exception type per failure mode so callers (and the CLI) can map them
// to stable messages.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define K3M_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                    \
   public:                                                       \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

K3M_DEFINE_ERROR(ParseError);
K3M_DEFINE_ERROR(NotInvertible);
K3M_DEFINE_ERROR(NoPositiveSolution);
K3M_DEFINE_ERROR(ElementNotInAmbient);
K3M_DEFINE_ERROR(GroupNotInMax);
K3M_DEFINE_ERROR(NotASubgroup);
K3M_DEFINE_ERROR(GroupTooLarge);
K3M_DEFINE_ERROR(InadmissibleSymbol);
K3M_DEFINE_ERROR(DegenerateForm);
K3M_DEFINE_ERROR(SearchBudgetExceeded);
K3M_DEFINE_ERROR(UnknownName);
K3M_DEFINE_ERROR(BadParameters);
K3M_DEFINE_ERROR(DegenerateGram);
K3M_DEFINE_ERROR(OddLattice);
K3M_DEFINE_ERROR(UnknownNode);
K3M_DEFINE_ERROR(BadAutomorphism);
K3M_DEFINE_ERROR(RankDeficiency);
K3M_DEFINE_ERROR(NotASublattice);
K3M_DEFINE_ERROR(SchemaError);

#undef K3M_DEFINE_ERROR

}  // namespace k3m
