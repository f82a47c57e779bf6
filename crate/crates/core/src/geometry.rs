//! Exact affine and convex geometry of support sets in ambient dimension at most three.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SoncError};
use crate::linalg::{self, Matrix};
use crate::rat::{int, is_integer, serde_rat, serde_rat_mat, serde_rat_vec, Rat};

pub const MAX_AMBIENT_DIM: usize = 3;

pub type Point = Vec<Rat>;

/// Ordered, pairwise distinct exponent configuration `{α_0, …, α_d}` in ℚⁿ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SupportSetJson", into = "SupportSetJson")]
pub struct SupportSet {
    n: usize,
    points: Vec<Point>,
}

#[derive(Serialize, Deserialize)]
struct SupportSetJson {
    n: usize,
    #[serde(with = "serde_rat_mat")]
    points: Vec<Vec<Rat>>,
}

impl TryFrom<SupportSetJson> for SupportSet {
    type Error = SoncError;
    fn try_from(j: SupportSetJson) -> Result<Self> {
        SupportSet::new(j.n, j.points)
    }
}

impl From<SupportSet> for SupportSetJson {
    fn from(s: SupportSet) -> Self {
        SupportSetJson { n: s.n, points: s.points }
    }
}

impl SupportSet {
    pub fn new(n: usize, points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(SoncError::InvalidSupport("empty support set".into()));
        }
        if let Some(i) = points.iter().position(|p| p.len() != n) {
            return Err(SoncError::InvalidSupport(format!("point {i} has length {} instead of {n}", points[i].len())));
        }
        for i in 0..points.len() {
            for j in 0..i {
                if points[i] == points[j] {
                    return Err(SoncError::InvalidSupport(format!("points {j} and {i} coincide")));
                }
            }
        }
        Ok(SupportSet { n, points })
    }

    pub fn from_ints(n: usize, points: &[&[i64]]) -> Result<Self> {
        Self::new(n, points.iter().map(|p| p.iter().map(|&x| int(x)).collect()).collect())
    }

    /// Univariate support `{a_0, …, a_d}`.
    pub fn univariate(exps: &[i64]) -> Result<Self> {
        Self::new(1, exps.iter().map(|&e| vec![int(e)]).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of points, `d + 1`.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Largest index `d`.
    pub fn d(&self) -> usize {
        self.points.len() - 1
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    /// The `(1+n)×(1+d)` matrix with columns `(1, α)`.
    pub fn matrix(&self) -> Matrix {
        let mut m = vec![vec![Rat::one(); self.len()]];
        for k in 0..self.n {
            m.push(self.points.iter().map(|p| p[k].clone()).collect());
        }
        m
    }

    /// Columns of the lifted matrix restricted to `indices`.
    pub fn sub_matrix(&self, indices: &[usize]) -> Matrix {
        let mut m = vec![vec![Rat::one(); indices.len()]];
        for k in 0..self.n {
            m.push(indices.iter().map(|&i| self.points[i][k].clone()).collect());
        }
        m
    }

    pub fn is_integral(&self) -> bool {
        self.points.iter().flatten().all(is_integer)
    }

    /// `(dim, codim)` where `dim = rank − 1` and `codim = d − dim`.
    pub fn dims(&self) -> (usize, usize) {
        let dim = linalg::rank(&self.matrix()) - 1;
        (dim, self.d() - dim)
    }

    pub fn dim(&self) -> usize {
        self.dims().0
    }

    pub fn polytope(&self) -> Polytope {
        Polytope::new(&self.points, (0..self.len()).collect())
    }

    pub fn sub_polytope(&self, indices: &[usize]) -> Polytope {
        Polytope::new(&self.points, indices.to_vec())
    }

    /// Affine dimension of the listed points.
    pub fn affine_dim(&self, indices: &[usize]) -> usize {
        linalg::rank(&self.sub_matrix(indices)) - 1
    }

    /// All points of the support lying in `conv(indices)`, sorted.
    pub fn points_in_hull(&self, indices: &[usize]) -> Vec<usize> {
        let p = self.sub_polytope(indices);
        (0..self.len()).filter(|&j| p.contains(&self.points[j])).collect()
    }

    pub fn check_ambient(&self) -> Result<()> {
        if self.n > MAX_AMBIENT_DIM {
            return Err(SoncError::AmbientDimTooLarge(self.n, MAX_AMBIENT_DIM));
        }
        Ok(())
    }
}

/// Base point and an exact basis (in reduced row echelon form) of the
/// direction space of the affine span of `points`.
pub fn affine_span_basis(points: &[Point]) -> (Point, Vec<Vec<Rat>>) {
    let base = points[0].clone();
    let diffs: Vec<Vec<Rat>> = points[1..].iter().map(|p| linalg::sub(p, &base)).collect();
    let (rows, _) = linalg::row_basis(&diffs, base.len());
    (base, rows)
}

/// Basis of the orthogonal complement of the direction space of `Aff(points)`.
pub fn orthogonal_complement(points: &[Point]) -> Vec<Vec<Rat>> {
    let (base, dirs) = affine_span_basis(points);
    linalg::nullspace(&dirs, base.len())
}

/// Supporting halfspace `⟨normal, x⟩ ≤ offset` with the points attaining equality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Halfspace {
    #[serde(with = "serde_rat_vec")]
    pub normal: Vec<Rat>,
    #[serde(with = "serde_rat")]
    pub offset: Rat,
    pub members: Vec<usize>,
}

/// Convex hull of a subset of a point list, described inside its own affine span.
#[derive(Debug, Clone)]
pub struct Polytope {
    pub indices: Vec<usize>,
    pub dim: usize,
    base: Point,
    directions: Matrix,
    pivots: Vec<usize>,
    pub facets: Vec<Halfspace>,
}

impl Polytope {
    pub fn new(all: &[Point], mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        let pts: Vec<Point> = indices.iter().map(|&i| all[i].clone()).collect();
        let n = pts[0].len();
        let base = pts[0].clone();
        let diffs: Vec<Vec<Rat>> = pts[1..].iter().map(|p| linalg::sub(p, &base)).collect();
        let (directions, pivots) = linalg::row_basis(&diffs, n);
        let dim = directions.len();
        let mut poly = Polytope { indices, dim, base, directions, pivots, facets: Vec::new() };
        poly.facets = poly.compute_facets(&pts);
        poly
    }

    pub fn reduced(&self, p: &[Rat]) -> Vec<Rat> {
        self.pivots.iter().map(|&c| &p[c] - &self.base[c]).collect()
    }

    pub fn in_affine_span(&self, p: &[Rat]) -> bool {
        let y = self.reduced(p);
        (0..p.len()).all(|c| {
            let mut v = self.base[c].clone();
            for (yi, row) in y.iter().zip(&self.directions) {
                v += yi * &row[c];
            }
            v == p[c]
        })
    }

    pub fn contains(&self, p: &[Rat]) -> bool {
        self.in_affine_span(p) && self.facets.iter().all(|h| linalg::dot(&h.normal, p) <= h.offset)
    }

    pub fn relint_contains(&self, p: &[Rat]) -> bool {
        self.in_affine_span(p) && self.facets.iter().all(|h| linalg::dot(&h.normal, p) < h.offset)
    }

    /// Coordinates read off by [`Polytope::reduced`].
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn directions(&self) -> &Matrix {
        &self.directions
    }

    fn ambient_normal(&self, nu: &[Rat]) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.base.len()];
        for (c, x) in self.pivots.iter().zip(nu) {
            v[*c] = x.clone();
        }
        v
    }

    fn compute_facets(&self, pts: &[Point]) -> Vec<Halfspace> {
        let k = self.dim;
        if k == 0 {
            return Vec::new();
        }
        let red: Vec<Vec<Rat>> = pts.iter().map(|p| self.reduced(p)).collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut out = Vec::new();
        for sub in combinations(red.len(), k) {
            let diffs: Matrix = sub[1..].iter().map(|&j| linalg::sub(&red[j], &red[sub[0]])).collect();
            let ns = linalg::nullspace(&diffs, k);
            if ns.len() != 1 {
                continue;
            }
            let nu = &ns[0];
            let v0 = linalg::dot(nu, &red[sub[0]]);
            let vals: Vec<Rat> = red.iter().map(|y| linalg::dot(nu, y)).collect();
            for orient in [1i64, -1] {
                let ok = vals.iter().all(|v| if orient == 1 { *v <= v0 } else { *v >= v0 });
                if !ok {
                    continue;
                }
                let members: Vec<usize> =
                    vals.iter().enumerate().filter(|(_, v)| **v == v0).map(|(j, _)| self.indices[j]).collect();
                if !seen.insert(members.clone()) {
                    continue;
                }
                let nu_o: Vec<Rat> = nu.iter().map(|x| x * int(orient)).collect();
                let normal = self.ambient_normal(&nu_o);
                let offset = linalg::dot(&normal, &pts[sub[0]]);
                out.push(Halfspace { normal, offset, members });
            }
        }
        out
    }

    /// Point sets of all nonempty faces, including the polytope itself.
    pub fn face_sets(&self) -> Vec<Vec<usize>> {
        let mut faces: BTreeSet<Vec<usize>> = self.facets.iter().map(|h| h.members.clone()).collect();
        loop {
            let current: Vec<Vec<usize>> = faces.iter().cloned().collect();
            let mut added = false;
            for (i, a) in current.iter().enumerate() {
                for b in &current[i + 1..] {
                    let inter: Vec<usize> = a.iter().filter(|x| b.contains(x)).copied().collect();
                    if !inter.is_empty() && faces.insert(inter) {
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
        }
        faces.insert(self.indices.clone());
        faces.into_iter().collect()
    }
}

/// A face of a Newton polytope with its supporting functional.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub vertex_indices: Vec<usize>,
    #[serde(with = "serde_rat_vec")]
    pub normal: Vec<Rat>,
    #[serde(with = "serde_rat")]
    pub offset: Rat,
    pub dim: usize,
}

impl Face {
    pub fn is_vertex(&self) -> bool {
        self.dim == 0
    }
}

/// Complete face lattice of `conv(points of indices)`.
pub fn faces_of(a: &SupportSet, indices: &[usize]) -> Vec<Face> {
    let poly = a.sub_polytope(indices);
    poly.face_sets()
        .into_iter()
        .map(|set| {
            let containing: Vec<&Halfspace> =
                poly.facets.iter().filter(|h| set.iter().all(|x| h.members.contains(x))).collect();
            let mut normal = vec![Rat::zero(); a.n()];
            let mut offset = Rat::zero();
            if set != poly.indices {
                for h in containing {
                    for (x, y) in normal.iter_mut().zip(&h.normal) {
                        *x += y;
                    }
                    offset += &h.offset;
                }
            }
            let dim = a.affine_dim(&set);
            Face { vertex_indices: set, normal, offset, dim }
        })
        .collect()
}

pub fn newton_faces(a: &SupportSet) -> Result<Vec<Face>> {
    a.check_ambient()?;
    Ok(faces_of(a, &(0..a.len()).collect::<Vec<_>>()))
}

/// Indices of points of `a` in the relative interior of `face`.
pub fn relint_members(a: &SupportSet, face: &Face) -> Vec<usize> {
    relint_members_of(a, &face.vertex_indices)
}

/// Points of `a` in the relative interior of `conv(indices)`.
pub fn relint_members_of(a: &SupportSet, indices: &[usize]) -> Vec<usize> {
    let poly = a.sub_polytope(indices);
    if poly.dim == 0 {
        return Vec::new();
    }
    (0..a.len()).filter(|&j| poly.relint_contains(a.point(j))).collect()
}

/// Vertices (0-dimensional faces) of `conv(indices)`.
pub fn vertices_of(a: &SupportSet, indices: &[usize]) -> Vec<usize> {
    let poly = a.sub_polytope(indices);
    if poly.dim == 0 {
        return poly.indices.clone();
    }
    let mut v: Vec<usize> = poly.face_sets().into_iter().filter(|s| s.len() == 1).map(|s| s[0]).collect();
    v.sort_unstable();
    v
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 && idx[0] == n - k {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rat::ints;

    fn euler(faces: &[Face]) -> i64 {
        faces.iter().map(|f| if f.dim % 2 == 0 { 1 } else { -1 }).sum()
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(4, 0), vec![Vec::<usize>::new()]);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert!(combinations(2, 3).is_empty());
    }

    #[test]
    fn dims_examples() {
        assert_eq!(fixtures::planar_six().dims(), (2, 3));
        assert_eq!(SupportSet::univariate(&[0, 1, 2]).unwrap().dims(), (1, 1));
        assert_eq!(fixtures::motzkin().dims(), (2, 1));
    }

    #[test]
    fn rejects_duplicates_and_lengths() {
        assert!(SupportSet::from_ints(1, &[&[0], &[0]]).is_err());
        assert!(SupportSet::from_ints(2, &[&[0, 0], &[1]]).is_err());
    }

    #[test]
    fn planar_six_faces() {
        let a = fixtures::planar_six();
        let faces = newton_faces(&a).unwrap();
        let verts: Vec<usize> = faces.iter().filter(|f| f.dim == 0).map(|f| f.vertex_indices[0]).collect();
        assert_eq!(verts, vec![0, 2, 5]);
        let edges: Vec<&Face> = faces.iter().filter(|f| f.dim == 1).collect();
        assert_eq!(edges.len(), 3);
        assert_eq!(euler(&faces), 1);
        for f in &faces {
            for (j, p) in a.points().iter().enumerate() {
                let v = linalg::dot(&f.normal, p);
                assert!(v <= f.offset);
                assert_eq!(v == f.offset, f.vertex_indices.contains(&j) || f.dim == 2);
            }
        }
    }

    #[test]
    fn segment_faces() {
        let a = SupportSet::univariate(&[0, 1, 2, 3, 4]).unwrap();
        let faces = newton_faces(&a).unwrap();
        let sets: Vec<Vec<usize>> = faces.iter().map(|f| f.vertex_indices.clone()).collect();
        assert_eq!(sets, vec![vec![0], vec![0, 1, 2, 3, 4], vec![4]]);
    }

    #[test]
    fn motzkin_triangle() {
        let a = fixtures::motzkin();
        let faces = newton_faces(&a).unwrap();
        let verts: Vec<usize> = faces.iter().filter(|f| f.dim == 0).map(|f| f.vertex_indices[0]).collect();
        assert_eq!(verts, vec![0, 1, 2]);
        let whole = faces.iter().find(|f| f.dim == 2).unwrap();
        assert_eq!(relint_members(&a, whole), vec![3]);
        for f in faces.iter().filter(|f| f.dim == 0) {
            assert!(relint_members(&a, f).is_empty());
        }
    }

    #[test]
    fn relint_of_edge() {
        let a = fixtures::planar_six();
        let faces = newton_faces(&a).unwrap();
        let edge = faces.iter().find(|f| f.dim == 1 && f.vertex_indices.contains(&2) && f.vertex_indices.contains(&5)).unwrap();
        assert_eq!(edge.vertex_indices, vec![2, 4, 5]);
        assert_eq!(relint_members(&a, edge), vec![4]);
    }

    #[test]
    fn span_bases() {
        let (_, d) = affine_span_basis(&[ints(&[3, 0]), ints(&[2, 1]), ints(&[1, 2])]);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0][0].clone() * int(-1), d[0][1]);
        assert!(affine_span_basis(&[ints(&[3, 0])]).1.is_empty());
        assert_eq!(affine_span_basis(&[ints(&[0, 0]), ints(&[1, 0]), ints(&[0, 1])]).1.len(), 2);
        let perp = orthogonal_complement(&[ints(&[3, 0]), ints(&[2, 1]), ints(&[1, 2])]);
        assert_eq!(perp.len(), 1);
        assert_eq!(perp[0][0], perp[0][1]);
    }

    #[test]
    fn degenerate_inputs() {
        let a = SupportSet::from_ints(2, &[&[0, 0], &[1, 1], &[2, 2]]).unwrap();
        let faces = newton_faces(&a).unwrap();
        assert_eq!(faces.len(), 3);
        assert_eq!(euler(&faces), 1);
        let single = SupportSet::from_ints(2, &[&[1, 1]]).unwrap();
        assert_eq!(newton_faces(&single).unwrap().len(), 1);
        assert_eq!(single.dims(), (0, 0));
    }

    #[test]
    fn too_large() {
        let a = SupportSet::from_ints(4, &[&[0, 0, 0, 0], &[1, 0, 0, 0]]).unwrap();
        assert!(matches!(newton_faces(&a), Err(SoncError::AmbientDimTooLarge(4, 3))));
    }

    #[test]
    fn cube_lattice() {
        let mut pts: Vec<Vec<i64>> = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    pts.push(vec![x, y, z]);
                }
            }
        }
        pts.push(vec![1, 1, 2]);
        let refs: Vec<&[i64]> = pts.iter().map(|p| p.as_slice()).collect();
        let a = SupportSet::from_ints(3, &refs).unwrap();
        let faces = newton_faces(&a).unwrap();
        assert_eq!(euler(&faces), 1);
    }
}
