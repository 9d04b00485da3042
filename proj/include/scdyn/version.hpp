#ifndef SCDYN_VERSION_HPP
#define SCDYN_VERSION_HPP

namespace scdyn {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace scdyn

#endif  // SCDYN_VERSION_HPP
