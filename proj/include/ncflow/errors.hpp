#pragma once

#include <stdexcept>
#include <string>

namespace ncflow {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

#define NCFLOW_DEFINE_ERROR(Name)                                              \
  class Name : public Error                                                    \
  {                                                                            \
  public:                                                                      \
    using Error::Error;                                                        \
  }

/// Principal curvatures outside the admissible cone of the speed.
NCFLOW_DEFINE_ERROR(ConeViolation);
/// Adjacent nodes closer than the degenerate-spacing threshold.
NCFLOW_DEFINE_ERROR(DegenerateSpacing);
/// Profile node with r < 0, or r = 0 away from a pole.
NCFLOW_DEFINE_ERROR(AxisViolation);
NCFLOW_DEFINE_ERROR(InvalidGeometry);
NCFLOW_DEFINE_ERROR(CoincidentPoints);
NCFLOW_DEFINE_ERROR(NonPositiveSpeed);
NCFLOW_DEFINE_ERROR(NonConvexInput);
/// A resampling event lies between the two snapshots of a time difference.
NCFLOW_DEFINE_ERROR(ResampleBoundary);
NCFLOW_DEFINE_ERROR(InitialContact);
NCFLOW_DEFINE_ERROR(Instability);
NCFLOW_DEFINE_ERROR(ParseError);
NCFLOW_DEFINE_ERROR(ValidationError);
NCFLOW_DEFINE_ERROR(IoError);

#undef NCFLOW_DEFINE_ERROR

} // namespace ncflow
