#pragma once

namespace egmgeom {

/// Command-line front end: subcommands gen, meb, mecp, polydist, margin,
/// bench, qp-check. Returns 0 on success, 1 when a solve finished without
/// meeting its target, 2 on invalid input or usage errors.
int cli_dispatch(int argc, const char* const* argv);

}  // namespace egmgeom
