#pragma once

#include <stdexcept>
#include <string>

namespace invcnx {

// Base for every error raised by the library. The CLI maps these to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define INVCNX_DEFINE_ERROR(Name)                     \
    class Name : public Error {                       \
    public:                                           \
        explicit Name(const std::string& what)        \
            : Error(std::string(#Name ": ") + what) {} \
    }

INVCNX_DEFINE_ERROR(ParseError);
INVCNX_DEFINE_ERROR(UnknownParameter);
INVCNX_DEFINE_ERROR(EvalSingular);
INVCNX_DEFINE_ERROR(ParamSingular);
INVCNX_DEFINE_ERROR(ClosureError);
INVCNX_DEFINE_ERROR(JetSingular);
INVCNX_DEFINE_ERROR(OracleSingular);
INVCNX_DEFINE_ERROR(ProfileUnsupported);
INVCNX_DEFINE_ERROR(NotTransitive);
INVCNX_DEFINE_ERROR(UnknownCase);
INVCNX_DEFINE_ERROR(ConstraintViolated);

#undef INVCNX_DEFINE_ERROR

}  // namespace invcnx
