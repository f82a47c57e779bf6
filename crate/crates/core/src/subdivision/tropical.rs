//! Tropical complex of `θ(x) = max_i (ω_i + ⟨x, α_i⟩)`, dual to the regular subdivision.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{cell_lift, eval_affine, reduced_points, subdivide, RegularSubdivision, WeightVector};
use crate::error::Result;
use crate::geometry::{orthogonal_complement, SupportSet};
use crate::linalg;
use crate::rat::{serde_rat_mat, Rat};

/// Region `μ` where the maximum of `θ` is attained exactly on `indicator`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TropicalCell {
    /// The cell of the subdivision dual to this region.
    pub dual_face: Vec<usize>,
    pub indicator: Vec<usize>,
    pub dim: usize,
    #[serde(with = "serde_rat_mat")]
    pub vertices: Vec<Vec<Rat>>,
    #[serde(with = "serde_rat_mat")]
    pub rays: Vec<Vec<Rat>>,
}

impl TropicalCell {
    /// A point of the relative interior: barycentre of the vertices plus every ray.
    pub fn interior_point(&self) -> Vec<Rat> {
        let n = self.vertices[0].len();
        let k = Rat::from_integer(self.vertices.len().into());
        let mut p = vec![Rat::zero(); n];
        for v in &self.vertices {
            for (x, y) in p.iter_mut().zip(v) {
                *x += y / &k;
            }
        }
        for r in &self.rays {
            for (x, y) in p.iter_mut().zip(r) {
                *x += y;
            }
        }
        p
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TropicalComplex {
    pub weights: WeightVector,
    pub cells: Vec<TropicalCell>,
    /// Directions along which `θ` is constant (nonempty when `A` is not full-dimensional).
    #[serde(with = "serde_rat_mat")]
    pub lineality: Vec<Vec<Rat>>,
}

impl TropicalComplex {
    /// The 0-dimensional cells, one per maximal cell of the subdivision.
    pub fn vertices(&self) -> impl Iterator<Item = &TropicalCell> {
        self.cells.iter().filter(|c| c.dim == 0)
    }

    /// Tropical vertex dual to the maximal cell `cell`.
    pub fn vertex_of(&self, cell: &[usize]) -> Option<&Vec<Rat>> {
        self.vertices().find(|c| c.dual_face == cell).map(|c| &c.vertices[0])
    }
}

/// Indices attaining `max_i (ω_i + ⟨x, α_i⟩)`.
pub(crate) fn argmax(a: &SupportSet, w: &WeightVector, x: &[Rat]) -> Vec<usize> {
    let vals: Vec<Rat> = a.points().iter().zip(&w.0).map(|(p, wi)| wi + linalg::dot(p, x)).collect();
    let m = vals.iter().max().cloned().unwrap_or_else(Rat::zero);
    (0..a.len()).filter(|&j| vals[j] == m).collect()
}

pub fn tropical_complex(a: &SupportSet, w: &WeightVector) -> Result<TropicalComplex> {
    let sub = subdivide(a, w)?;
    let (frame, y) = reduced_points(a);
    let k = frame.dim;
    let tops: Vec<(Vec<usize>, Vec<Rat>, Vec<Rat>)> = sub
        .cells
        .iter()
        .map(|c| {
            let h = if k == 0 { vec![w.0[0].clone()] } else { cell_lift(a, &y, w, c, k) };
            let mut x = vec![Rat::zero(); a.n()];
            for (piv, g) in frame.pivots().iter().zip(&h) {
                x[*piv] = -g.clone();
            }
            (c.clone(), h, x)
        })
        .collect();

    let mut cells = Vec::new();
    for face in sub.faces(a) {
        let containing: Vec<&(Vec<usize>, Vec<Rat>, Vec<Rat>)> =
            tops.iter().filter(|(c, _, _)| face.iter().all(|j| c.contains(j))).collect();
        let h = &containing[0].1;
        let indicator: Vec<usize> = face.iter().copied().filter(|&j| eval_affine(h, &y[j]) == w.0[j]).collect();
        let rays: Vec<Vec<Rat>> = frame
            .facets
            .iter()
            .filter(|f| face.iter().all(|j| f.members.contains(j)))
            .map(|f| f.normal.clone())
            .collect();
        cells.push(TropicalCell {
            dim: k - a.affine_dim(&face),
            vertices: containing.iter().map(|t| t.2.clone()).collect(),
            rays,
            indicator,
            dual_face: face,
        });
    }
    cells.sort_by(|p, q| p.dim.cmp(&q.dim).then_with(|| p.dual_face.cmp(&q.dual_face)));
    let lineality = orthogonal_complement(a.points());
    Ok(TropicalComplex { weights: w.clone(), cells, lineality })
}

/// True iff the regions of `m`, classified by where `θ` attains its maximum, correspond
/// one-to-one to the cells of `sub` with inclusions reversed.
pub fn check_duality(a: &SupportSet, sub: &RegularSubdivision, m: &TropicalComplex) -> bool {
    let faces = sub.faces(a);
    let k = a.dim();
    let mut seen = BTreeSet::new();
    for cell in &m.cells {
        if cell.vertices.is_empty() {
            return false;
        }
        let ind = argmax(a, &m.weights, &cell.interior_point());
        let dual = a.points_in_hull(&ind);
        if dual != cell.dual_face || !faces.contains(&dual) || cell.dim + a.affine_dim(&dual) != k {
            return false;
        }
        // every vertex sees at least the indicator of the region it bounds
        if cell.vertices.iter().any(|v| !ind.iter().all(|j| argmax(a, &m.weights, v).contains(j))) {
            return false;
        }
        if !seen.insert(dual) {
            return false;
        }
    }
    if seen != faces {
        return false;
    }
    let contains = |big: &super::TropicalCell, small: &super::TropicalCell| {
        small.vertices.iter().all(|v| big.vertices.contains(v)) && small.rays.iter().all(|r| big.rays.contains(r))
    };
    for p in &m.cells {
        for q in &m.cells {
            let face_incl = p.dual_face.iter().all(|j| q.dual_face.contains(j));
            if face_incl != contains(p, q) {
                return false;
            }
        }
    }
    true
}
