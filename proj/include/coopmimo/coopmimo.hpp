#ifndef COOPMIMO_COOPMIMO_HPP
#define COOPMIMO_COOPMIMO_HPP

#include "coopmimo/channel.hpp"
#include "coopmimo/config.hpp"
#include "coopmimo/conv_code.hpp"
#include "coopmimo/errors.hpp"
#include "coopmimo/geometry.hpp"
#include "coopmimo/interleaver.hpp"
#include "coopmimo/qam.hpp"
#include "coopmimo/receiver.hpp"
#include "coopmimo/relay.hpp"
#include "coopmimo/results.hpp"
#include "coopmimo/rng.hpp"
#include "coopmimo/simulation.hpp"
#include "coopmimo/stbc.hpp"

#endif // COOPMIMO_COOPMIMO_HPP
