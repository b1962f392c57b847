// metastab.hpp — Umbrella header

#pragma once

#include "metastab/algebra.hpp"
#include "metastab/entanglement.hpp"
#include "metastab/hae.hpp"
#include "metastab/lindblad.hpp"
#include "metastab/models.hpp"
#include "metastab/spectral.hpp"
#include "metastab/trajectories.hpp"
#include "metastab/version.hpp"
