#ifndef SOPMON_ERRORS_HPP
#define SOPMON_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sopmon {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define SOPMON_DEFINE_ERROR(Name)          \
  struct Name : Error {                    \
    using Error::Error;                    \
  }

SOPMON_DEFINE_ERROR(DimensionError);    // frame smaller than 2x2, or shape changed mid-stream
SOPMON_DEFINE_ERROR(NonFiniteError);    // NaN or infinity in input values
SOPMON_DEFINE_ERROR(ScaleError);        // nonpositive jitter scale
SOPMON_DEFINE_ERROR(DelayError);        // delay exceeds grid extent
SOPMON_DEFINE_ERROR(DegenerateError);   // constant grid / empty pool: statistic undefined
SOPMON_DEFINE_ERROR(OverlapError);      // spatial lag leaves no overlapping cells
SOPMON_DEFINE_ERROR(ConfigError);       // invalid chart/run configuration
SOPMON_DEFINE_ERROR(ParamError);        // distribution/model parameter out of range
SOPMON_DEFINE_ERROR(StationarityError); // autoregressive coefficients violate sum condition
SOPMON_DEFINE_ERROR(ConvergenceError);  // iterative solver failed to reach tolerance
SOPMON_DEFINE_ERROR(ModelError);        // operation not defined for this frame/model kind
SOPMON_DEFINE_ERROR(SchemaError);       // malformed or incomplete frame file
SOPMON_DEFINE_ERROR(ShapeError);        // inconsistent frame dimensions in a stream
SOPMON_DEFINE_ERROR(BracketError);      // control-limit search could not bracket the target
SOPMON_DEFINE_ERROR(NonConvergence);    // search budget exhausted before tolerance met

#undef SOPMON_DEFINE_ERROR

}  // namespace sopmon

#endif
