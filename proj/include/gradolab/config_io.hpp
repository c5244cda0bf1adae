#ifndef GRADOLAB_CONFIG_IO_HPP
#define GRADOLAB_CONFIG_IO_HPP

#include <string>

#include "gradolab/sweeps.hpp"

namespace gradolab {

/// Parses a JSON configuration document. Unknown keys are errors, not
/// warnings; omitted option fields take their documented defaults.
/// Under time_unit "day" all rates are divided and all times multiplied
/// by 86400 on load; the returned setup is always in SI units.
RunSetup parse_config(const std::string& text);

/// Canonical JSON form (SI units, sorted keys). parse(serialize(s))
/// reproduces s.
std::string serialize_config(const RunSetup& setup);

}  // namespace gradolab

#endif  // GRADOLAB_CONFIG_IO_HPP
