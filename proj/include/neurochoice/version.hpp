#ifndef NEUROCHOICE_VERSION_HPP
#define NEUROCHOICE_VERSION_HPP

namespace neurochoice
{
inline constexpr const char* version = "0.1.0";
}

#endif // NEUROCHOICE_VERSION_HPP
