//! Named configurations used throughout the tests, the CLI and the demo.

use crate::geometry::SupportSet;
use crate::rat::{ints, Rat};

/// Six points in the plane: (0,0),(2,0),(3,0),(1,1),(2,1),(1,2).
pub fn planar_six() -> SupportSet {
    SupportSet::from_ints(2, &[&[0, 0], &[2, 0], &[3, 0], &[1, 1], &[2, 1], &[1, 2]]).unwrap()
}

/// Support of the Motzkin form in inhomogeneous coordinates, interior point last.
pub fn motzkin() -> SupportSet {
    SupportSet::from_ints(2, &[&[0, 0], &[4, 2], &[2, 4], &[2, 2]]).unwrap()
}

/// `{0, 1, …, k}` on the line.
pub fn segment(k: i64) -> SupportSet {
    SupportSet::univariate(&(0..=k).collect::<Vec<_>>()).unwrap()
}

/// Generic planar configuration whose sonc-complexes each have a single maximal cell.
pub fn generic_six() -> SupportSet {
    SupportSet::from_ints(2, &[&[0, 0], &[0, 5], &[1, 2], &[1, 3], &[5, 0], &[5, 5]]).unwrap()
}

/// The four minimal simplicial circuits of [`planar_six`] as primitive integer rows.
pub const PLANAR_SIX_CIRCUITS: [[i64; 6]; 4] =
    [[1, 1, 0, -4, 0, 2], [0, 0, 1, 0, -2, 1], [1, -3, 2, 0, 0, 0], [1, 0, 0, -3, 1, 1]];

/// Weight vectors on [`planar_six`] inducing the six subdivisions whose charts carry
/// the implicit equations `D0..D5`, in that order.
pub fn planar_six_chart_weights() -> Vec<Vec<Rat>> {
    [
        [0, 0, 0, 0, 0, 0],
        [1, 1, 0, 0, 0, 0],
        [0, 0, 1, 0, 1, 0],
        [2, 0, 0, 1, 0, 0],
        [0, 0, -1, 1, -2, 0],
        [0, -2, 0, 0, 0, -1],
    ]
    .iter()
    .map(|w| ints(w))
    .collect()
}
