#pragma once

#include "siglap/consensus.hpp"
#include "siglap/definiteness.hpp"
#include "siglap/error.hpp"
#include "siglap/graph.hpp"
#include "siglap/io.hpp"
#include "siglap/laplacians.hpp"
#include "siglap/resistance.hpp"
#include "siglap/spectra.hpp"
