#pragma once
// Constrained-transport coupling: rebuild the magnetic field as the
// discrete curl of the vector potential so its discrete divergence stays
// at round-off. Curl and divergence share one 4th-order centered first
// derivative; because constant-coefficient stencils commute, div(curl A)
// cancels exactly wherever both operate on consistent node values. Ghost
// margins on non-periodic faces are filled by cubic extension of A so
// the cancellation holds at boundary nodes too.

#include "ctmhd/grid.hpp"

namespace ctmhd {

// Fill all ghost layers of a node field: periodic wrap where the axis is
// periodic, cubic (degree-3) one-sided extension otherwise.
void fill_potential_ghosts(const Grid& g, Field& f);

// B = curl A on the interior plus a 2-layer margin. A carries
// potential_components(g) components and no ghosts; AE is scratch with
// the same components and ghosts >= 4; B has 3 components and ghosts
// >= 2. In 2-D only the in-plane pair is produced from the scalar
// potential; the out-of-plane slot is set to zero and callers must not
// treat it as part of the curl.
void curl_from_potential(const Grid& g, const Field& A, Field& AE, Field& B);

// Max |div B| over unique nodes, same derivative stencil as the curl.
// B must provide the 2-layer margin curl_from_potential writes.
double max_divergence(const Grid& g, const Field& B);

// Root-mean-square of the same nodal divergence over unique nodes.
double l2_divergence(const Grid& g, const Field& B);

// Max Euclidean norm over unique nodes of a 3-component field.
double max_field_norm(const Grid& g, const Field& B);

// Install the curl field into the conserved state (components 5..6 in
// 2-D, 5..7 in 3-D). energy_option 1 keeps the advanced total energy;
// option 2 adds half the magnetic-energy difference so the thermal
// pressure is exactly unchanged by the replacement.
void replace_magnetic_field(const Grid& g, const Field& Bc, int energy_option,
                            Field& q);

}  // namespace ctmhd
