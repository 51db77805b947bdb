#ifndef REGDEF_ERRORS_HPP
#define REGDEF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace regdef {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// graph construction / mutation
class DuplicateLabelError : public Error { using Error::Error; };
class UnknownEndpointError : public Error { using Error::Error; };
class LoopEdgeError : public Error { using Error::Error; };
class DuplicateEdgeError : public Error { using Error::Error; };
class EdgeNotInGraphError : public Error { using Error::Error; };

// parsing and file formats
class MalformedLabelError : public Error { using Error::Error; };
class MalformedGraph6Error : public Error { using Error::Error; };
class MalformedFileError : public Error { using Error::Error; };

// factorizations
class OddOrderError : public Error { using Error::Error; };
class EvenOrderError : public Error { using Error::Error; };
class CountTooLargeError : public Error { using Error::Error; };
class UnsatisfiableRequirementsError : public Error { using Error::Error; };
class NoSuchMatchingError : public Error { using Error::Error; };

// coloring engine
class ImproperPartialError : public Error { using Error::Error; };
class ChiMismatchError : public Error { using Error::Error; };

class BudgetExhaustedError : public Error {
public:
    BudgetExhaustedError(const std::string& msg, int lo, int hi)
        : Error(msg), lower(lo), upper(hi) {}
    int lower;  // proven lower bound at the point of exhaustion
    int upper;  // best upper bound at the point of exhaustion
};

// constructions
class LabelCollisionError : public Error { using Error::Error; };
class ImproperInputColoringError : public Error { using Error::Error; };
class InternalRecipeInconsistencyError : public Error { using Error::Error; };

enum class ParamRejection { OutOfRange, ParityViolation, TEqualsKMinus2 };

inline const char* to_string(ParamRejection r) {
    switch (r) {
        case ParamRejection::OutOfRange:     return "ParamOutOfRange";
        case ParamRejection::ParityViolation: return "ParityViolation";
        case ParamRejection::TEqualsKMinus2: return "TEqualsKMinus2";
    }
    return "?";
}

class InfeasibleParamsError : public Error {
public:
    InfeasibleParamsError(const std::string& msg, ParamRejection r)
        : Error(msg), rejection(r) {}
    ParamRejection rejection;
};

}  // namespace regdef

#endif
