#pragma once

#include <random>
#include <vector>

#include "spectra/mc.hpp"

namespace spectra {

// A concrete tuple together with its exact HTL bookkeeping data.
struct Sample {
  HTLTuple tuple;
  HTLSymbolData data;
};

// Seeded irreducible samples with rank <= 4, <= 3 points, pole order <= 3,
// zero residue sum, and at least one tuple choice with xi_i != 0 admitting a
// block-persistent middle convolution. Built from exactly rigged rank-2
// seeds (Fuchsian, pole-2 and pole-3 two-block points) grown by mc walks.
std::vector<Sample> generate_samples(int count, unsigned seed);

// First tuple choice with xi_i != 0 whose predicted mc output keeps every
// convolved block nonempty and collision-free; empty when none exists.
std::optional<JTuple> pick_mc_choice(const Sample& s, std::mt19937_64& rng);

}  // namespace spectra
