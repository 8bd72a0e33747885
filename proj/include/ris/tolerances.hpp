// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace ris {

// Central numerical tolerance record. Every module reads its thresholds from
// here so there is exactly one place where they can be adjusted.
struct Tolerances {
  // Linear algebra.
  double hermiticity = 1e-12;        // max |A - A*| entry for Hermitian input
  double qr_deflation_rel = 1e-12;   // subdiagonal deflation, relative to |M|
  int qr_sweeps_per_dim = 30;        // QR iteration budget: 30 * dim
  double eig_cluster_rel = 1e-8;     // relative tolerance merging degenerate eigenvalues
  double unitarity = 1e-10;

  // States.
  double trace_one = 1e-12;
  double psd_floor = 1e-12;          // eigenvalues of a state may not dip below -this
  double faithful_floor = 1e-12;     // smallest eigenvalue must exceed this for logs

  // Channels.
  double peripheral_band = 1e-9;     // |e| > 1 - band classifies as peripheral
  double peripheral_guard = 1e-6;    // next modulus must sit below 1 - guard
  double choi_psd = 1e-10;           // min Choi eigenvalue >= -this for CP
  double trace_preserving = 1e-10;

  static const Tolerances& defaults() {
    static const Tolerances t{};
    return t;
  }
};

}  // namespace ris
