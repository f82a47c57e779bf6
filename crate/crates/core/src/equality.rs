//! Decides whether every nonnegative exponential sum on a generic support is a sum of
//! nonnegative circuit sums, by inspecting the sonc-complexes of all regular subdivisions.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::circuits::simplicial_circuits;
use crate::error::Result;
use crate::geometry::SupportSet;
use crate::linalg;
use crate::rat::Rat;
use crate::subdivision::{enumerate_regular_subdivisions, sonc_complex, RegularSubdivision, SoncComplex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Equal,
    NotEqual,
    PreconditionViolated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusEntry {
    pub complex: SoncComplex,
    /// First regular subdivision found with this complex.
    pub witness: RegularSubdivision,
    pub maximal: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqualityReport {
    /// All simplicial circuits are full-dimensional.
    pub generic: bool,
    pub complexes: Vec<CensusEntry>,
    pub subdivisions: usize,
    /// Number of point permutations induced by affine self-maps of the support.
    pub symmetries: usize,
    /// Orbits of the nonempty complexes under those symmetries.
    pub nonempty_up_to_symmetry: usize,
    pub verdict: Verdict,
}

impl EqualityReport {
    pub fn nonempty(&self) -> impl Iterator<Item = &CensusEntry> {
        self.complexes.iter().filter(|c| !c.complex.is_empty())
    }
}

/// Distinct sonc-complexes over all regular subdivisions, each with its first witness.
pub fn complex_census(a: &SupportSet) -> Result<(Vec<CensusEntry>, usize)> {
    let subs = enumerate_regular_subdivisions(a)?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for sub in &subs {
        let complex = sonc_complex(a, sub);
        if seen.insert(complex.cells.clone()) {
            let maximal = complex.maximal();
            out.push(CensusEntry { complex, witness: sub.clone(), maximal });
        }
    }
    Ok((out, subs.len()))
}

pub fn is_generic(a: &SupportSet) -> bool {
    simplicial_circuits(a).iter().all(|c| c.is_full_dimensional(a))
}

/// Permutations `π` of the points such that some affine map sends `α_i` to `α_{π(i)}` for all `i`.
pub fn affine_symmetries(a: &SupportSet) -> Vec<Vec<usize>> {
    let frame = a.polytope();
    let y: Vec<Vec<Rat>> = a.points().iter().map(|p| frame.reduced(p)).collect();
    let k = frame.dim;
    let basis: Vec<usize> = affine_basis(&y, k);
    let source: Vec<Vec<Rat>> = y.iter().map(|p| barycentric(&y, &basis, p)).collect();
    let mut out = Vec::new();
    let mut image = Vec::new();
    assign(a.len(), k + 1, &mut image, &mut |targets| {
        // the affine map is fixed by the basis images; points go to the same barycentric combination
        let perm: Option<Vec<usize>> = source
            .iter()
            .map(|lam| {
                let p: Vec<Rat> = (0..k)
                    .map(|c| lam.iter().zip(targets).map(|(l, &t)| l * &y[t][c]).sum())
                    .collect();
                y.iter().position(|q| *q == p)
            })
            .collect();
        if let Some(perm) = perm {
            if perm.iter().collect::<BTreeSet<_>>().len() == perm.len() {
                out.push(perm);
            }
        }
    });
    out.sort();
    out.dedup();
    out
}

fn affine_basis(y: &[Vec<Rat>], k: usize) -> Vec<usize> {
    let mut basis = vec![0];
    for j in 1..y.len() {
        if basis.len() == k + 1 {
            break;
        }
        let mut cand = basis.clone();
        cand.push(j);
        let diffs: Vec<Vec<Rat>> = cand[1..].iter().map(|&i| linalg::sub(&y[i], &y[cand[0]])).collect();
        if linalg::rank(&diffs) == cand.len() - 1 {
            basis = cand;
        }
    }
    basis
}

/// Affine coordinates of `p` with respect to the affinely independent points `basis`.
fn barycentric(y: &[Vec<Rat>], basis: &[usize], p: &[Rat]) -> Vec<Rat> {
    let k = basis.len() - 1;
    let m: Vec<Vec<Rat>> = (0..k).map(|r| basis[1..].iter().map(|&i| &y[i][r] - &y[basis[0]][r]).collect()).collect();
    let rhs: Vec<Rat> = (0..k).map(|r| &p[r] - &y[basis[0]][r]).collect();
    let mu = if k == 0 { vec![] } else { linalg::solve(&m, &rhs).expect("basis is affinely independent") };
    let first = Rat::from_integer(1.into()) - mu.iter().sum::<Rat>();
    std::iter::once(first).chain(mu).collect()
}

fn assign(n: usize, len: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if cur.len() == len {
        f(cur);
        return;
    }
    for i in 0..n {
        if !cur.contains(&i) {
            cur.push(i);
            assign(n, len, cur, f);
            cur.pop();
        }
    }
}

fn permute(cells: &[Vec<usize>], perm: &[usize]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = cells
        .iter()
        .map(|c| {
            let mut d: Vec<usize> = c.iter().map(|&i| perm[i]).collect();
            d.sort_unstable();
            d
        })
        .collect();
    out.sort();
    out
}

/// Number of orbits of the census under the symmetries.
pub fn orbits(census: &[CensusEntry], symmetries: &[Vec<usize>]) -> usize {
    let canon: BTreeSet<Vec<Vec<usize>>> = census
        .iter()
        .map(|e| symmetries.iter().map(|p| permute(&e.complex.cells, p)).min().unwrap_or_else(|| e.complex.cells.clone()))
        .collect();
    canon.len()
}

pub fn check_equality(a: &SupportSet) -> Result<EqualityReport> {
    let generic = is_generic(a);
    let (complexes, subdivisions) = complex_census(a)?;
    let symmetries = affine_symmetries(a);
    let nonempty: Vec<CensusEntry> = complexes.iter().filter(|e| !e.complex.is_empty()).cloned().collect();
    let single_top = complexes.iter().all(|e| e.complex.is_empty() || e.maximal.len() == 1);
    let verdict = match (generic, single_top) {
        (false, _) => Verdict::PreconditionViolated,
        (true, true) => Verdict::Equal,
        (true, false) => Verdict::NotEqual,
    };
    Ok(EqualityReport {
        generic,
        nonempty_up_to_symmetry: orbits(&nonempty, &symmetries),
        symmetries: symmetries.len(),
        complexes,
        subdivisions,
        verdict,
    })
}
