#include "stochwave/errors.hpp"

#include <sstream>

namespace stochwave {

const char* to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::MeshMismatch: return "mesh-mismatch";
    case ErrorCode::StencilOutOfRange: return "stencil-out-of-range";
    case ErrorCode::IncompleteTrajectory: return "incomplete-trajectory";
    case ErrorCode::WeightOverflow: return "weight-overflow";
    case ErrorCode::DegenerateOrder: return "degenerate-order";
    case ErrorCode::SingularUpdate: return "singular-update";
    case ErrorCode::BlowUp: return "blow-up";
    case ErrorCode::Coupling: return "coupling";
    case ErrorCode::Config: return "config";
    }
    return "unknown";
}

namespace {

std::string overflow_message(double exponent)
{
    std::ostringstream os;
    os.precision(17);
    os << "weight overflow: exp(" << exponent
       << ") is not representable; use a smaller s or lambda";
    return os.str();
}

std::string blowup_message(int j, int n, std::int64_t path)
{
    std::ostringstream os;
    if (path >= 0)
        os << "path " << path << ": ";
    os << "non-finite value at node j=" << j << ", n=" << n;
    return os.str();
}

}  // namespace

WeightOverflow::WeightOverflow(double exponent)
    : Error(ErrorCode::WeightOverflow, overflow_message(exponent)),
      exponent_(exponent)
{
}

SingularUpdate::SingularUpdate(int j, int n)
    : Error(ErrorCode::SingularUpdate,
            "singular update: 1 - c*dt vanishes at j=" + std::to_string(j)
                + ", n=" + std::to_string(n)),
      j_(j),
      n_(n)
{
}

BlowUp::BlowUp(int j, int n, std::int64_t path)
    : Error(ErrorCode::BlowUp, blowup_message(j, n, path)),
      j_(j),
      n_(n),
      path_(path)
{
}

}  // namespace stochwave
