#pragma once

namespace fsl {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace fsl
