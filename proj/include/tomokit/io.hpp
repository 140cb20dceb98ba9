#pragma once

#include <string>

#include "tomokit/acquisition.hpp"
#include "tomokit/curved.hpp"
#include "tomokit/grid.hpp"
#include "tomokit/invert.hpp"
#include "tomokit/m2.hpp"
#include "tomokit/quantum.hpp"
#include "tomokit/radon.hpp"
#include "tomokit/spherical.hpp"
#include "tomokit/tgm.hpp"

namespace tomokit {

// Converters between domain types and TGM containers. Readers throw FormatError
// when the kind or the metadata does not match.
TgmFile to_tgm(const ScalarField& f);
ScalarField field_from_tgm(const TgmFile& file);

TgmFile to_tgm(const Sinogram& g);
Sinogram sinogram_from_tgm(const TgmFile& file);

TgmFile to_tgm(const M2Tomogram& t);
M2Tomogram m2_from_tgm(const TgmFile& file);

TgmFile to_tgm(const CurvedTomograms& t);
CurvedTomograms curved_from_tgm(const TgmFile& file);

TgmFile to_tgm(const SphereMeanField& g);
SphereMeanField sphere_means_from_tgm(const TgmFile& file);

TgmFile to_tgm(const LineTomograms& g);
LineTomograms line_tomograms_from_tgm(const TgmFile& file);

TgmFile to_tgm(const DensityMatrix& rho);
DensityMatrix density_from_tgm(const TgmFile& file);

TgmFile to_tgm(const WignerField& w);
WignerField wigner_from_tgm(const TgmFile& file);

TgmFile to_tgm(const QuadratureTomogramSet& t);
QuadratureTomogramSet quadrature_from_tgm(const TgmFile& file);

TgmFile to_tgm(const IntensityTable& t);
IntensityTable scan_from_tgm(const TgmFile& file);

// Flat CSV of the payload with coordinates where the kind defines them.
std::string to_csv(const TgmFile& file);

}  // namespace tomokit
