#include "fbiharm/error.hpp"

namespace fbiharm {

std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid_argument";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::SingularEvaluation: return "singular_evaluation";
    case ErrorKind::OrderExceeded: return "order_exceeded";
    case ErrorKind::DegenerateMetric: return "degenerate_metric";
    case ErrorKind::TargetDomainEscape: return "target_domain_escape";
    case ErrorKind::ImmersionDegenerate: return "immersion_degenerate";
    case ErrorKind::PositivityViolation: return "positivity_violation";
    case ErrorKind::DescriptorMismatch: return "descriptor_mismatch";
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::UnknownName: return "unknown_name";
    case ErrorKind::Io: return "io";
    }
    return "unknown";
}

}  // namespace fbiharm
