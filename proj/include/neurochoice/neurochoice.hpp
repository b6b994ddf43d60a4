#ifndef NEUROCHOICE_NEUROCHOICE_HPP
#define NEUROCHOICE_NEUROCHOICE_HPP

#include "errors.hpp"
#include "mi_network.hpp"
#include "neural_utility.hpp"
#include "numeric.hpp"
#include "random_mi.hpp"
#include "rate_model.hpp"
#include "response_time.hpp"
#include "rng.hpp"
#include "spiking.hpp"
#include "version.hpp"

#endif // NEUROCHOICE_NEUROCHOICE_HPP
