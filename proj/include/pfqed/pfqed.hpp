#ifndef PFQED_PFQED_HPP
#define PFQED_PFQED_HPP

// Core library. The scenario layer (pfqed/scenario/runner.hpp) also needs
// OpenSSL and the vendored JSON header and is included separately.

#include "pfqed/core/error.hpp"
#include "pfqed/core/log.hpp"
#include "pfqed/linalg/banded.hpp"
#include "pfqed/linalg/dense.hpp"
#include "pfqed/linalg/krylov.hpp"
#include "pfqed/linalg/sparse.hpp"
#include "pfqed/matter/atom.hpp"
#include "pfqed/matter/basis.hpp"
#include "pfqed/matter/grid.hpp"
#include "pfqed/matter/h2.hpp"
#include "pfqed/molecular/popes.hpp"
#include "pfqed/observables/density.hpp"
#include "pfqed/observables/spectrum.hpp"
#include "pfqed/photon/continuum.hpp"
#include "pfqed/photon/dispersion.hpp"
#include "pfqed/photon/normal_modes.hpp"
#include "pfqed/qed/assembler.hpp"
#include "pfqed/qed/fock.hpp"
#include "pfqed/qed/free_particle.hpp"
#include "pfqed/qed/solve.hpp"

#endif // PFQED_PFQED_HPP
