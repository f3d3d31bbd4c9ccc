#pragma once

#include "surfot/mesh.hpp"

namespace surfot {

// Test surfaces: graphs z = f(x, y) over the unit disk on a hexagonal fan
// with `resolution` rings (F = 6 res^2 faces). The fan keeps a vertex line
// exactly on y = 0 and no face straddling it, so bent_sheet folds the flat
// disk isometrically along that line.
enum class SynthKind { flat_disk, gaussian_bump, two_bumps, bent_sheet };

struct SynthParams {
    double height = 0.35;    // gaussian_bump peak height
    double sigma_b = 0.25;   // gaussian_bump width
    double angle_deg = 30.0; // bent_sheet fold angle in degrees
};

TriMesh synth_surface(SynthKind kind, int resolution, const SynthParams& params = {});

} // namespace surfot
