#pragma once

#include <Eigen/Dense>

namespace bsbm {

/// Expected positive-edge (T), negative-edge (S) and non-edge (R) counts
/// between row class l (posterior-weighted) and column class l' (hard).
struct SuffStats {
  Eigen::MatrixXd T;
  Eigen::MatrixXd S;
  Eigen::MatrixXd R;

  int K() const { return static_cast<int>(T.rows()); }

  /// (X + X^T) / 2 for each of T, S, R. Pooling the two orientations of a
  /// class pair gives the exact M-step under the symmetry constraint on P
  /// and Q; already-symmetric stats are returned unchanged.
  SuffStats symmetrized() const {
    return {0.5 * (T + T.transpose()), 0.5 * (S + S.transpose()), 0.5 * (R + R.transpose())};
  }
};

}  // namespace bsbm
