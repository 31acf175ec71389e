#ifndef OSCIDISSIP_OSCIDISSIP_HPP
#define OSCIDISSIP_OSCIDISSIP_HPP

// Exact collective dissipation of oscillator dipoles in 1-D electromagnetic
// reservoirs, with a Markovian Lindblad benchmark.

#include "analysis.hpp"
#include "bogoliubov.hpp"
#include "config_io.hpp"
#include "dynamics.hpp"
#include "hamiltonian.hpp"
#include "lindblad.hpp"
#include "model.hpp"

#endif
