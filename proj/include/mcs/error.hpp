#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mcs {

/// Error codes used across the library. Each code has a stable printable
/// name; the CLI maps contract errors to exit code 1 and config errors to
/// exit code 2 using these names.
enum class errc {
    arity_mismatch,
    depth_unsupported,
    not_a_predecessor,
    sample_too_large,
    invalid_side_info,
    cap_exceeded,
    family_gap,
    no_fresh_element,
    contract_violated,
    empty_class,
    not_in_class,
    no_dominating_concept,
    not_union_bounded,
    size_bound_exceeded,
    r_not_p,
    missing_table_entry,
    config_error,
};

constexpr std::string_view errc_name(errc c) {
    switch (c) {
        case errc::arity_mismatch: return "ArityMismatch";
        case errc::depth_unsupported: return "DepthUnsupported";
        case errc::not_a_predecessor: return "NotAPredecessor";
        case errc::sample_too_large: return "SampleTooLarge";
        case errc::invalid_side_info: return "InvalidSideInfo";
        case errc::cap_exceeded: return "CapExceeded";
        case errc::family_gap: return "FamilyGap";
        case errc::no_fresh_element: return "NoFreshElement";
        case errc::contract_violated: return "ContractViolated";
        case errc::empty_class: return "EmptyClass";
        case errc::not_in_class: return "NotInClass";
        case errc::no_dominating_concept: return "NoDominatingConcept";
        case errc::not_union_bounded: return "NotUnionBounded";
        case errc::size_bound_exceeded: return "SizeBoundExceeded";
        case errc::r_not_p: return "RNotP";
        case errc::missing_table_entry: return "MissingTableEntry";
        case errc::config_error: return "ConfigError";
    }
    return "UnknownError";
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }
    std::string_view name() const noexcept { return errc_name(code_); }

private:
    errc code_;
};

} // namespace mcs
