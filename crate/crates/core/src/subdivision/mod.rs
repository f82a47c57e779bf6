//! Regular subdivisions induced by weight vectors, their sonc-complexes, the dual
//! tropical complexes, and complete enumeration with exact regularity witnesses.

mod plane;
mod tropical;

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SoncError};
use crate::geometry::{combinations, relint_members_of, vertices_of, Polytope, SupportSet};
use crate::linalg::{self, Matrix};
use crate::lp::{Cmp, Lp, LpOutcome};
use crate::rat::{int, serde_rat_vec, Rat};

pub use tropical::{check_duality, tropical_complex, TropicalCell, TropicalComplex};

pub const MAX_ENUMERATION_POINTS: usize = 10;

/// Heights `ω_i` assigned to the points of a support set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightVector(#[serde(with = "serde_rat_vec")] pub Vec<Rat>);

impl WeightVector {
    pub fn zeros(len: usize) -> Self {
        WeightVector(vec![Rat::zero(); len])
    }

    pub fn from_ints(w: &[i64]) -> Self {
        WeightVector(w.iter().map(|&x| int(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Maximal cells as sorted index sets, each the set of all points of `A` inside the cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularSubdivision {
    pub cells: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WeightVector>,
}

impl RegularSubdivision {
    pub fn new(mut cells: Vec<Vec<usize>>, witness: Option<WeightVector>) -> Self {
        for c in cells.iter_mut() {
            c.sort_unstable();
        }
        cells.sort();
        RegularSubdivision { cells, witness }
    }

    pub fn trivial(a: &SupportSet) -> Self {
        RegularSubdivision { cells: vec![(0..a.len()).collect()], witness: Some(WeightVector::zeros(a.len())) }
    }

    pub fn is_trivial(&self) -> bool {
        self.cells.len() == 1
    }

    pub fn polytope(&self, a: &SupportSet, i: usize) -> Polytope {
        a.sub_polytope(&self.cells[i])
    }

    /// Every face of every maximal cell, as point sets.
    pub fn faces(&self, a: &SupportSet) -> BTreeSet<Vec<usize>> {
        self.cells.iter().flat_map(|c| a.sub_polytope(c).face_sets()).collect()
    }
}

/// Cells carrying a point of `A` in their relative interior, closed under taking faces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SoncComplex {
    pub cells: Vec<Vec<usize>>,
}

impl SoncComplex {
    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Inclusion-maximal cells.
    pub fn maximal(&self) -> Vec<Vec<usize>> {
        self.cells
            .iter()
            .filter(|c| !self.cells.iter().any(|d| d.len() > c.len() && c.iter().all(|x| d.contains(x))))
            .cloned()
            .collect()
    }
}

fn check_weights(a: &SupportSet, w: &WeightVector) -> Result<()> {
    if w.len() != a.len() {
        return Err(SoncError::LengthMismatch { expected: a.len(), got: w.len() });
    }
    Ok(())
}

fn reduced_points(a: &SupportSet) -> (Polytope, Vec<Vec<Rat>>) {
    let frame = a.polytope();
    let y = a.points().iter().map(|p| frame.reduced(p)).collect();
    (frame, y)
}

fn lifted_row(y: &[Rat]) -> Vec<Rat> {
    let mut r = y.to_vec();
    r.push(int(1));
    r
}

/// Affine function `y ↦ ⟨g, y⟩ + c` through the lifts of `pts`, if they are affinely independent.
fn affine_through(y: &[Vec<Rat>], w: &WeightVector, pts: &[usize]) -> Option<Vec<Rat>> {
    let m: Matrix = pts.iter().map(|&s| lifted_row(&y[s])).collect();
    if linalg::rank(&m) < pts.len() {
        return None;
    }
    let rhs: Vec<Rat> = pts.iter().map(|&s| w.0[s].clone()).collect();
    linalg::solve(&m, &rhs)
}

fn eval_affine(h: &[Rat], y: &[Rat]) -> Rat {
    linalg::dot(&h[..y.len()], y) + &h[y.len()]
}

/// Linearity domains of the upper hull of the lifted points `(α_i, ω_i)`.
pub fn subdivide(a: &SupportSet, w: &WeightVector) -> Result<RegularSubdivision> {
    a.check_ambient()?;
    check_weights(a, w)?;
    let (frame, y) = reduced_points(a);
    let k = frame.dim;
    if k == 0 {
        return Ok(RegularSubdivision::new(vec![(0..a.len()).collect()], Some(w.clone())));
    }
    let mut cells = BTreeSet::new();
    for sub in combinations(a.len(), k + 1) {
        let Some(h) = affine_through(&y, w, &sub) else { continue };
        let vals: Vec<Rat> = y.iter().map(|yi| eval_affine(&h, yi)).collect();
        if vals.iter().zip(&w.0).any(|(v, wi)| wi > v) {
            continue;
        }
        let upper: Vec<usize> = (0..a.len()).filter(|&j| vals[j] == w.0[j]).collect();
        cells.insert(a.points_in_hull(&upper));
    }
    Ok(RegularSubdivision::new(cells.into_iter().collect(), Some(w.clone())))
}

/// Affine lift of a maximal cell under `w`, as coefficients on reduced coordinates.
pub(crate) fn cell_lift(a: &SupportSet, y: &[Vec<Rat>], w: &WeightVector, cell: &[usize], k: usize) -> Vec<Rat> {
    let verts = vertices_of(a, cell);
    combinations(verts.len(), k + 1)
        .into_iter()
        .find_map(|sub| affine_through(y, w, &sub.iter().map(|&i| verts[i]).collect::<Vec<_>>()))
        .expect("a full-dimensional cell has an affine basis among its vertices")
}

pub fn sonc_complex(a: &SupportSet, sub: &RegularSubdivision) -> SoncComplex {
    let mut cells: BTreeSet<Vec<usize>> = BTreeSet::new();
    for face in sub.faces(a) {
        if face.len() > 1 && !relint_members_of(a, &face).is_empty() {
            cells.extend(a.sub_polytope(&face).face_sets());
        }
    }
    let mut cells: Vec<Vec<usize>> = cells.into_iter().collect();
    cells.sort_by(|x, y| x.len().cmp(&y.len()).then(x.cmp(y)));
    SoncComplex { cells }
}

/// Checks that `cells` is a polyhedral subdivision of the Newton polytope with geometric cells.
pub fn validate_subdivision(a: &SupportSet, cells: &[Vec<usize>]) -> Result<()> {
    let bad = |m: String| Err(SoncError::InvalidSubdivision(m));
    let (frame, y) = reduced_points(a);
    let k = frame.dim;
    if cells.is_empty() {
        return bad("no cells".into());
    }
    for c in cells {
        if c.iter().any(|&i| i >= a.len()) {
            return bad(format!("cell {c:?} has an index out of range"));
        }
        if a.points_in_hull(c) != *c {
            return bad(format!("cell {c:?} omits points of the support inside it"));
        }
        if a.affine_dim(c) != k {
            return bad(format!("cell {c:?} is not full-dimensional"));
        }
    }
    for (i, s) in cells.iter().enumerate() {
        for t in &cells[i + 1..] {
            if !meet_in_common_face(&y, s, t) {
                return bad(format!("cells {s:?} and {t:?} do not meet in a common face"));
            }
        }
    }
    let boundary: Vec<&Vec<usize>> = frame.facets.iter().map(|h| &h.members).collect();
    for c in cells {
        for f in a.sub_polytope(c).facets {
            if boundary.iter().any(|b| f.members.iter().all(|x| b.contains(x))) {
                continue;
            }
            let sharing =
                cells.iter().filter(|d| a.sub_polytope(d).facets.iter().any(|g| g.members == f.members)).count();
            if sharing != 2 {
                return bad(format!("interior facet {:?} of cell {c:?} is not shared by exactly two cells", f.members));
            }
        }
    }
    Ok(())
}

/// Exact separation test: a hyperplane contains `s ∩ t` and strictly separates the remaining points.
fn meet_in_common_face(y: &[Vec<Rat>], s: &[usize], t: &[usize]) -> bool {
    let k = y[0].len();
    // variables: g (k), c, ε
    let mut lp = Lp::new(k + 2);
    lp.free = vec![true; k + 1];
    lp.free.push(false);
    lp.objective[k + 1] = int(1);
    let row = |j: usize, sgn: i64, eps: i64| {
        let mut r: Vec<Rat> = y[j].iter().map(|v| v * int(sgn)).collect();
        r.push(int(sgn));
        r.push(int(eps));
        r
    };
    for &j in s.iter().chain(t) {
        match (s.contains(&j), t.contains(&j)) {
            (true, true) => lp.add(row(j, 1, 0), Cmp::Eq, Rat::zero()),
            (true, false) => lp.add(row(j, 1, 1), Cmp::Le, Rat::zero()),
            _ => lp.add(row(j, -1, 1), Cmp::Le, Rat::zero()),
        }
    }
    let mut cap = vec![Rat::zero(); k + 2];
    cap[k + 1] = int(1);
    lp.add(cap, Cmp::Le, int(1));
    matches!(lp.solve(), LpOutcome::Optimal { value, .. } if value.is_positive())
}

/// Exact witness weights for a valid subdivision, or `None` when it is not regular.
pub fn is_regular(a: &SupportSet, candidate: &RegularSubdivision) -> Result<Option<WeightVector>> {
    validate_subdivision(a, &candidate.cells)?;
    Ok(regularity_witness(a, &candidate.cells))
}

/// Maximizes the margin `ε ≤ 1` by which points outside each cell fall below its lift.
pub(crate) fn regularity_witness(a: &SupportSet, cells: &[Vec<usize>]) -> Option<WeightVector> {
    if cells.len() == 1 {
        return Some(WeightVector::zeros(a.len()));
    }
    let (frame, y) = reduced_points(a);
    let k = frame.dim;
    let n_pts = a.len();
    let per_cell = k + 1;
    let eps = n_pts + cells.len() * per_cell;
    let mut lp = Lp::new(eps + 1);
    lp.free = vec![true; eps];
    lp.free.push(false);
    lp.objective[eps] = int(1);

    let basis = linalg::rref(&mut a.matrix());
    for &j in &basis {
        let mut r = vec![Rat::zero(); eps + 1];
        r[j] = int(1);
        lp.add(r, Cmp::Eq, Rat::zero());
    }
    for (ci, cell) in cells.iter().enumerate() {
        let verts = vertices_of(a, cell);
        let off = n_pts + ci * per_cell;
        for j in 0..n_pts {
            // ω_j − ⟨g, y_j⟩ − c
            let mut r = vec![Rat::zero(); eps + 1];
            r[j] = int(1);
            for (q, v) in y[j].iter().enumerate() {
                r[off + q] = -v.clone();
            }
            r[off + k] = int(-1);
            if verts.contains(&j) {
                lp.add(r, Cmp::Eq, Rat::zero());
            } else if cell.contains(&j) {
                lp.add(r, Cmp::Le, Rat::zero());
            } else {
                r[eps] = int(1);
                lp.add(r, Cmp::Le, Rat::zero());
            }
        }
    }
    let mut cap = vec![Rat::zero(); eps + 1];
    cap[eps] = int(1);
    lp.add(cap, Cmp::Le, int(1));
    match lp.solve() {
        LpOutcome::Optimal { x, value } if value.is_positive() => Some(WeightVector(x[..n_pts].to_vec())),
        _ => None,
    }
}

/// Every regular subdivision of `a` exactly once, each with an exact witness, sorted by cells.
pub fn enumerate_regular_subdivisions(a: &SupportSet) -> Result<Vec<RegularSubdivision>> {
    if a.len() > MAX_ENUMERATION_POINTS {
        return Err(SoncError::TooLarge(format!("{} points exceed the limit of {MAX_ENUMERATION_POINTS}", a.len())));
    }
    let (frame, y) = reduced_points(a);
    let mut out = match frame.dim {
        0 => vec![RegularSubdivision::trivial(a)],
        1 => line_subdivisions(a, &y),
        2 => plane::complete_subdivisions(a, &y)
            .into_iter()
            .filter_map(|cells| regularity_witness(a, &cells).map(|w| RegularSubdivision::new(cells, Some(w))))
            .collect(),
        k => return Err(SoncError::TooLarge(format!("enumeration needs affine dimension at most 2, got {k}"))),
    };
    out.sort_by(|x, y| x.cells.cmp(&y.cells));
    Ok(out)
}

/// On a line every subset of interior points is the breakpoint set of a concave lift.
fn line_subdivisions(a: &SupportSet, y: &[Vec<Rat>]) -> Vec<RegularSubdivision> {
    let t: Vec<Rat> = y.iter().map(|v| v[0].clone()).collect();
    let lo = t.iter().min().unwrap().clone();
    let hi = t.iter().max().unwrap().clone();
    let mut interior: Vec<usize> = (0..a.len()).filter(|&j| t[j] != lo && t[j] != hi).collect();
    interior.sort_by(|&i, &j| t[i].cmp(&t[j]));
    let mut out = Vec::new();
    for mask in 0u32..(1 << interior.len()) {
        let breaks: Vec<&Rat> =
            interior.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &j)| &t[j]).collect();
        let mut cuts: Vec<&Rat> = vec![&lo];
        cuts.extend(breaks.iter().copied());
        cuts.push(&hi);
        let cells: Vec<Vec<usize>> = cuts
            .windows(2)
            .map(|w| (0..a.len()).filter(|&j| &t[j] >= w[0] && &t[j] <= w[1]).collect())
            .collect();
        let witness: Vec<Rat> = t
            .iter()
            .map(|tj| breaks.iter().fold(Rat::zero(), |acc, tb| acc - (tj - *tb).abs()))
            .collect();
        out.push(RegularSubdivision::new(cells, Some(WeightVector(witness))));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rat::{ints, rat};
    use proptest::prelude::*;

    fn cells_of(a: &SupportSet, w: &[i64]) -> Vec<Vec<usize>> {
        subdivide(a, &WeightVector::from_ints(w)).unwrap().cells
    }

    #[test]
    fn segment_split() {
        let a = fixtures::segment(4);
        assert_eq!(cells_of(&a, &[0, 0, 1, 0, 0]), vec![vec![0, 1, 2], vec![2, 3, 4]]);
        assert_eq!(cells_of(&a, &[0, 0, 0, 0, 0]), vec![vec![0, 1, 2, 3, 4]]);
    }

    #[test]
    fn planar_six_charts() {
        let a = fixtures::planar_six();
        let w = fixtures::planar_six_chart_weights();
        let got: Vec<Vec<Vec<usize>>> = w.iter().map(|w| subdivide(&a, &WeightVector(w.clone())).unwrap().cells).collect();
        assert_eq!(got[0], vec![vec![0, 1, 2, 3, 4, 5]]);
        assert_eq!(got[1], vec![vec![0, 1, 3, 5], vec![1, 2, 4, 5]]);
        assert_eq!(got[2], vec![vec![0, 1, 2, 4], vec![0, 3, 4, 5]]);
        assert_eq!(got[3], vec![vec![0, 1, 2, 3], vec![0, 3, 5], vec![2, 3, 4, 5]]);
        assert_eq!(got[4], vec![vec![0, 1, 3], vec![0, 3, 5], vec![1, 2, 3], vec![2, 3, 4, 5]]);
        assert_eq!(got[5], vec![vec![0, 1, 2, 3, 4], vec![0, 3, 5], vec![3, 4, 5]]);
    }

    #[test]
    fn complexes_of_named_subdivisions() {
        let m = fixtures::motzkin();
        let triv = sonc_complex(&m, &RegularSubdivision::trivial(&m));
        assert_eq!(triv.maximal(), vec![vec![0, 1, 2, 3]]);
        assert_eq!(triv.cells.len(), 7);

        let a = fixtures::planar_six();
        let l1 = subdivide(&a, &WeightVector::from_ints(&[1, 1, 0, 0, 0, 0])).unwrap();
        assert_eq!(sonc_complex(&a, &l1).maximal(), vec![vec![2, 4, 5], vec![0, 1, 3, 5]]);

        // a fine triangulation avoiding every interior point
        let fine = RegularSubdivision::new(
            vec![vec![0, 1, 3], vec![0, 3, 5], vec![1, 2, 4], vec![1, 3, 4], vec![3, 4, 5]],
            None,
        );
        assert!(is_regular(&a, &fine).unwrap().is_some());
        assert!(sonc_complex(&a, &fine).is_empty());
    }

    #[test]
    fn regularity_certificates() {
        let a = fixtures::planar_six();
        let triv = RegularSubdivision::trivial(&a);
        assert_eq!(is_regular(&a, &triv).unwrap(), Some(WeightVector::zeros(6)));
        let overlapping = RegularSubdivision::new(vec![vec![0, 1, 3, 5], vec![0, 1, 2, 3, 4, 5]], None);
        assert!(matches!(is_regular(&a, &overlapping), Err(SoncError::InvalidSubdivision(_))));
        let missing = RegularSubdivision::new(vec![vec![0, 1, 3, 5]], None);
        assert!(matches!(is_regular(&a, &missing), Err(SoncError::InvalidSubdivision(_))));
        let not_geometric = RegularSubdivision::new(vec![vec![0, 2, 5]], None);
        assert!(matches!(is_regular(&a, &not_geometric), Err(SoncError::InvalidSubdivision(_))));
    }

    #[test]
    fn mother_of_all_examples_is_not_regular() {
        // two nested triangles; the twisted triangulation is the classic non-regular one
        let a = SupportSet::from_ints(2, &[&[0, 0], &[4, 0], &[0, 4], &[1, 1], &[2, 1], &[1, 2]]).unwrap();
        let twisted = RegularSubdivision::new(
            vec![vec![0, 1, 3], vec![1, 3, 4], vec![1, 2, 4], vec![2, 4, 5], vec![0, 2, 5], vec![0, 3, 5], vec![3, 4, 5]],
            None,
        );
        assert_eq!(is_regular(&a, &twisted).unwrap(), None);
    }

    #[test]
    fn line_enumeration() {
        assert_eq!(enumerate_regular_subdivisions(&fixtures::segment(2)).unwrap().len(), 2);
        let subs = enumerate_regular_subdivisions(&fixtures::segment(4)).unwrap();
        assert_eq!(subs.len(), 8);
        for s in &subs {
            let a = fixtures::segment(4);
            assert_eq!(subdivide(&a, s.witness.as_ref().unwrap()).unwrap().cells, s.cells);
        }
    }

    #[test]
    fn planar_enumeration_round_trips() {
        let a = fixtures::planar_six();
        let subs = enumerate_regular_subdivisions(&a).unwrap();
        let distinct: BTreeSet<Vec<Vec<usize>>> = subs.iter().map(|s| s.cells.clone()).collect();
        assert_eq!(distinct.len(), subs.len());
        for s in &subs {
            let w = s.witness.as_ref().unwrap();
            assert_eq!(subdivide(&a, w).unwrap().cells, s.cells);
            assert!(is_regular(&a, s).unwrap().is_some());
        }
        let complexes: BTreeSet<Vec<Vec<usize>>> = subs.iter().map(|s| sonc_complex(&a, s).cells).collect();
        assert_eq!(complexes.len(), 10);
    }

    #[test]
    fn enumeration_limits() {
        let big = fixtures::segment(10);
        assert!(matches!(enumerate_regular_subdivisions(&big), Err(SoncError::TooLarge(_))));
        let tet = SupportSet::from_ints(3, &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        assert!(matches!(enumerate_regular_subdivisions(&tet), Err(SoncError::TooLarge(_))));
    }

    #[test]
    fn collinear_points_in_the_plane() {
        let a = SupportSet::from_ints(2, &[&[0, 0], &[1, 1], &[2, 2], &[3, 3]]).unwrap();
        assert_eq!(enumerate_regular_subdivisions(&a).unwrap().len(), 4);
        assert_eq!(cells_of(&a, &[0, 1, 0, 0]), vec![vec![0, 1], vec![1, 2, 3]]);
    }

    #[test]
    fn fractional_weights() {
        let a = fixtures::segment(2);
        let w = WeightVector(vec![int(0), rat(1, 3), int(0)]);
        assert_eq!(subdivide(&a, &w).unwrap().cells, vec![vec![0, 1], vec![1, 2]]);
        let w = WeightVector(ints(&[0, -1, 0]));
        assert_eq!(subdivide(&a, &w).unwrap().cells, vec![vec![0, 1, 2]]);
    }

    fn weights(n: usize) -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(-3i64..4, n)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn affine_shift_invariance(w in weights(6), v in (-3i64..4, -3i64..4, -3i64..4)) {
            let a = fixtures::planar_six();
            let base = subdivide(&a, &WeightVector::from_ints(&w)).unwrap();
            let shifted: Vec<Rat> = a.points().iter().zip(&w)
                .map(|(p, wi)| int(*wi) + &p[0] * int(v.0) + &p[1] * int(v.1) + int(v.2))
                .collect();
            prop_assert_eq!(subdivide(&a, &WeightVector(shifted)).unwrap().cells, base.cells);
        }

        #[test]
        fn subdivide_output_is_valid_and_regular(w in weights(6)) {
            let a = fixtures::planar_six();
            let s = subdivide(&a, &WeightVector::from_ints(&w)).unwrap();
            let cert = is_regular(&a, &s).unwrap();
            prop_assert!(cert.is_some());
            prop_assert_eq!(subdivide(&a, &cert.unwrap()).unwrap().cells, s.cells);
        }

        #[test]
        fn line_counts_are_powers_of_two(k in 1i64..8) {
            let subs = enumerate_regular_subdivisions(&fixtures::segment(k)).unwrap();
            prop_assert_eq!(subs.len(), 1usize << (k - 1));
        }

        #[test]
        fn complexes_closed_under_faces(w in weights(6)) {
            let a = fixtures::planar_six();
            let s = subdivide(&a, &WeightVector::from_ints(&w)).unwrap();
            let g = sonc_complex(&a, &s);
            for c in &g.cells {
                for f in a.sub_polytope(c).face_sets() {
                    prop_assert!(g.cells.contains(&f));
                }
            }
            for m in g.maximal() {
                prop_assert!(!relint_members_of(&a, &m).is_empty());
            }
        }
    }
}
