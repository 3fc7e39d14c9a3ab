#pragma once

#include "nslit/experiment.hpp"

namespace nslit::test {

/// Synthetic desk-scale double slit: 22 um slits, 104 um bar, 2 nm
/// neutrons, 5 m flight before and after the grating.
inline ExperimentConfig desk_config() {
    ExperimentConfig c;
    c.beam.entrance_slit_width = 20e-6;
    c.beam.source_distance = 5.0;
    c.beam.k_spread = 0.0;
    c.beam.wavelength = GaussianSpectrum{2e-9, 0.0};
    c.grating = {22e-6, 22e-6, 104e-6};
    c.detector.distance = 5.0;
    c.detector.resolution = 0.0;
    c.detector.grid_points = 2001;
    return c;
}

}  // namespace nslit::test
