#pragma once

#include <filesystem>
#include <string>

#include "gmalab/torus.hpp"

// Snapshot layout (all integers and reals little-endian):
//   bytes 0..3   magic "GMLF"
//   u32          version (currently 1)
//   u32          kind: 0 = real scalar field, 1 = Hermitian form field
//   u32          n (complex dimension), u32 N (samples per real axis)
//   payload      kind 0: N^{2n} doubles, row-major in the grid order;
//                kind 1: n*n background entries then N^{2n} * n*n hessian
//                entries, each entry a (re, im) double pair, matrices
//                row-major.
// CSV exports carry one row per grid point: the 2n fractional coordinates
// followed by the value.  All writers go through a temp file in the target
// directory plus an atomic rename.

namespace gmalab {

void atomic_write_text(const std::filesystem::path& path,
                       const std::string& content);

void write_potential(const std::filesystem::path& path,
                     const PotentialField& field);
PotentialField read_potential(const std::filesystem::path& path);

void write_form(const std::filesystem::path& path, const FormField& field);
FormField read_form(const std::filesystem::path& path);

void write_potential_csv(const std::filesystem::path& path,
                         const PotentialField& field);

} // namespace gmalab
