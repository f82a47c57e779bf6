//! Discriminant charts of regular subdivisions: the parametrization by scaled agiforms
//! whose loci are glued across shared cell faces, exact sampling, the implicit
//! equations of the planar six-point charts, boundary samples arranged along
//! tropical complexes, and a numeric rank probe.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuits::{reznick_cone, Circuit};
use crate::error::{Result, SoncError};
use crate::expsum::{
    agiform_coeffs, assemble, check_nonneg_numeric, eval, Agiform, ExponentialSum, MinimizeConfig, Scalar,
    SoncDecomposition, ToricPoint,
};
use crate::geometry::{affine_span_basis, SupportSet};
use crate::linalg;
use crate::rat::{denom_lcm, int, pow_i, primitive_integer, rat, to_f64, Rat};
use crate::subdivision::{subdivide, tropical_complex, RegularSubdivision, TropicalComplex, WeightVector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartCircuit {
    pub circuit: Circuit,
    /// Index of the maximal cell whose locus the circuit uses.
    pub cell: usize,
}

/// Lattice directions `u` along which the loci of two maximal cells must agree: `z_i^u = z_j^u`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingRelation {
    pub cells: (usize, usize),
    pub basis: Vec<Vec<i64>>,
}

#[derive(Debug, Clone)]
pub struct LambdaChart {
    pub support: Arc<SupportSet>,
    pub subdivision: RegularSubdivision,
    pub circuits: Vec<ChartCircuit>,
    /// Points used by some chart circuit.
    pub covered: Vec<usize>,
    /// Points entering only as free monomials.
    pub complement: Vec<usize>,
    pub relations: Vec<GluingRelation>,
}

fn to_i64_vec(v: &[BigInt]) -> Vec<i64> {
    v.iter().map(|x| x.to_i64().expect("lattice vector entries fit in i64")).collect()
}

/// Minimal simplicial circuits inside the cells of `sub`, each attached to the first cell containing it.
pub fn build_chart(a: &Arc<SupportSet>, sub: &RegularSubdivision) -> LambdaChart {
    let circuits: Vec<ChartCircuit> = reznick_cone(a)
        .edge_generators
        .into_iter()
        .filter_map(|c| {
            let cell = sub.cells.iter().position(|cell| c.support.iter().all(|i| cell.contains(i)))?;
            Some(ChartCircuit { circuit: c, cell })
        })
        .collect();
    let mut covered: Vec<usize> = circuits.iter().flat_map(|c| c.circuit.support.iter().copied()).collect();
    covered.sort_unstable();
    covered.dedup();
    let complement = (0..a.len()).filter(|i| !covered.contains(i)).collect();

    let mut relations = Vec::new();
    for i in 0..sub.cells.len() {
        for j in i + 1..sub.cells.len() {
            let common: Vec<usize> = sub.cells[i].iter().copied().filter(|x| sub.cells[j].contains(x)).collect();
            if common.len() < 2 {
                continue;
            }
            let pts: Vec<Vec<Rat>> = common.iter().map(|&k| a.point(k).clone()).collect();
            let (_, dirs) = affine_span_basis(&pts);
            if dirs.is_empty() {
                continue;
            }
            let basis = dirs.iter().map(|d| to_i64_vec(&primitive_integer(d))).collect();
            relations.push(GluingRelation { cells: (i, j), basis });
        }
    }
    LambdaChart { support: a.clone(), subdivision: sub.clone(), circuits, covered, complement, relations }
}

impl LambdaChart {
    pub fn n_cells(&self) -> usize {
        self.subdivision.cells.len()
    }

    /// Integer basis of the log-loci `(w_λ)_λ ∈ ℚ^{cells·n}` solving every gluing relation.
    pub fn locus_lattice(&self) -> Vec<Vec<i64>> {
        let n = self.support.n();
        let cols = self.n_cells() * n;
        let mut eqs = Vec::new();
        for rel in &self.relations {
            for u in &rel.basis {
                let mut row = vec![Rat::zero(); cols];
                for (k, uk) in u.iter().enumerate() {
                    row[rel.cells.0 * n + k] += int(*uk);
                    row[rel.cells.1 * n + k] -= int(*uk);
                }
                eqs.push(row);
            }
        }
        let basis = if eqs.is_empty() {
            (0..cols)
                .map(|c| {
                    let mut e = vec![Rat::zero(); cols];
                    e[c] = int(1);
                    e
                })
                .collect()
        } else {
            linalg::nullspace(&eqs, cols)
        };
        basis.iter().map(|b| to_i64_vec(&primitive_integer(b))).collect()
    }

    /// Number of real parameters of the chart: scales, free loci and monomials.
    pub fn n_params(&self) -> usize {
        self.circuits.len() + self.locus_lattice().len() + self.complement.len()
    }
}

/// An exact point of the chart together with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct HkSample {
    pub t: Vec<Rat>,
    pub z_cells: Vec<ToricPoint>,
    pub monomials: Vec<Rat>,
    pub a: Vec<Rat>,
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(SoncError::LengthMismatch { expected, got });
    }
    Ok(())
}

/// Evaluates the chart map exactly after checking every gluing relation.
pub fn hk_sample(chart: &LambdaChart, t: &[Rat], z_cells: &[ToricPoint], monomials: &[Rat]) -> Result<HkSample> {
    check_len(chart.circuits.len(), t.len())?;
    check_len(chart.n_cells(), z_cells.len())?;
    check_len(chart.complement.len(), monomials.len())?;
    if t.iter().chain(monomials).any(|x| x.is_negative()) {
        return Err(SoncError::NegativeScale);
    }
    let a = &chart.support;
    for z in z_cells {
        ToricPoint::new(z.z.clone())?;
        check_len(a.n(), z.z.len())?;
    }
    for rel in &chart.relations {
        let (i, j) = rel.cells;
        for u in &rel.basis {
            let ur: Vec<Rat> = u.iter().map(|&x| int(x)).collect();
            let zi = crate::expsum::toric_monomial(&z_cells[i], &ur);
            let zj = crate::expsum::toric_monomial(&z_cells[j], &ur);
            if zi != zj {
                return Err(SoncError::RelationViolated { cells: (i, j), u: u.clone() });
            }
        }
    }
    let mut coeffs = vec![Rat::zero(); a.len()];
    for (cc, ti) in chart.circuits.iter().zip(t) {
        let g = Agiform::toric(cc.circuit.clone(), ti.clone(), z_cells[cc.cell].clone());
        let f = agiform_coeffs(a, &g)?;
        for (x, y) in coeffs.iter_mut().zip(f.exact_coeffs().expect("toric agiforms are exact")) {
            *x += y;
        }
    }
    for (&i, m) in chart.complement.iter().zip(monomials) {
        coeffs[i] += m;
    }
    Ok(HkSample { t: t.to_vec(), z_cells: z_cells.to_vec(), monomials: monomials.to_vec(), a: coeffs })
}

fn random_positive<R: Rng>(rng: &mut R) -> Rat {
    rat(rng.gen_range(1..=9), rng.gen_range(1..=9))
}

/// Exact random sample: loci are monomials `Π r_k^{B_k}` in random positive rationals over an
/// integer basis `B` of the relation-compatible loci, scales and monomials random positive rationals.
pub fn random_sample<R: Rng>(chart: &LambdaChart, rng: &mut R) -> HkSample {
    let n = chart.support.n();
    let lattice = chart.locus_lattice();
    let r: Vec<Rat> = lattice.iter().map(|_| random_positive(rng)).collect();
    let z_cells: Vec<ToricPoint> = (0..chart.n_cells())
        .map(|cell| {
            let z = (0..n)
                .map(|k| {
                    lattice.iter().zip(&r).fold(int(1), |acc, (b, rk)| acc * pow_i(rk, b[cell * n + k]))
                })
                .collect();
            ToricPoint { z }
        })
        .collect();
    let t: Vec<Rat> = chart.circuits.iter().map(|_| random_positive(rng)).collect();
    let monomials: Vec<Rat> = chart.complement.iter().map(|_| random_positive(rng)).collect();
    hk_sample(chart, &t, &z_cells, &monomials).expect("sampled loci satisfy the gluing relations")
}

pub fn seeded_samples(chart: &LambdaChart, count: usize, seed: u64) -> Vec<HkSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_sample(chart, &mut rng)).collect()
}

/// Polynomial in the coefficients `a_0, …, a_d` with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImplicitPolynomial {
    pub name: String,
    pub terms: Vec<(i64, Vec<u32>)>,
}

const D0: &[(i64, [u32; 6])] = &[
    (-1, [0, 0, 1, 6, 0, 0]),
    (1, [0, 1, 0, 5, 1, 0]),
    (1, [1, 0, 0, 3, 3, 0]),
    (-1, [0, 2, 0, 4, 0, 1]),
    (-36, [1, 0, 1, 3, 1, 1]),
    (30, [1, 1, 0, 2, 2, 1]),
    (27, [2, 0, 0, 0, 4, 1]),
    (72, [1, 1, 1, 2, 0, 2]),
    (-96, [1, 2, 0, 1, 1, 2]),
    (-216, [2, 0, 1, 0, 2, 2]),
    (64, [1, 3, 0, 0, 0, 3]),
    (432, [2, 0, 2, 0, 0, 3]),
];
const D1: &[(i64, [u32; 6])] =
    &[(-1, [0, 0, 2, 4, 0, 0]), (4, [1, 1, 0, 0, 4, 0]), (-32, [1, 1, 1, 0, 2, 1]), (64, [1, 1, 2, 0, 0, 2])];
const D2: &[(i64, [u32; 6])] = &[(1, [0, 0, 2, 3, 0, 0]), (4, [0, 3, 0, 0, 1, 1]), (27, [1, 0, 2, 0, 1, 1])];
const D3: &[(i64, [u32; 6])] =
    &[(27, [1, 0, 0, 0, 4, 0]), (-216, [1, 0, 1, 0, 2, 1]), (64, [0, 3, 0, 0, 0, 2]), (432, [1, 0, 2, 0, 0, 2])];
const D4: &[(i64, [u32; 6])] = &[(1, [0, 0, 0, 0, 2, 0]), (-4, [0, 0, 1, 0, 0, 1])];
const D5: &[(i64, [u32; 6])] = &[(4, [0, 3, 0, 0, 0, 0]), (27, [1, 0, 2, 0, 0, 0])];

impl ImplicitPolynomial {
    fn from_table(name: &str, table: &[(i64, [u32; 6])]) -> Self {
        ImplicitPolynomial { name: name.into(), terms: table.iter().map(|(c, e)| (*c, e.to_vec())).collect() }
    }

    /// `D0 … D5`: the equations of the six charts of the planar six-point configuration.
    pub fn named(name: &str) -> Option<Self> {
        let table = match name.to_ascii_uppercase().as_str() {
            "D0" => D0,
            "D1" => D1,
            "D2" => D2,
            "D3" => D3,
            "D4" => D4,
            "D5" => D5,
            _ => return None,
        };
        Some(Self::from_table(&name.to_ascii_uppercase(), table))
    }

    pub fn planar_six() -> Vec<Self> {
        (0..6).map(|k| Self::named(&format!("D{k}")).unwrap()).collect()
    }

    pub fn eval(&self, a: &[Rat]) -> Rat {
        self.terms.iter().fold(Rat::zero(), |acc, (c, e)| {
            acc + e.iter().zip(a).fold(int(*c), |m, (k, x)| m * pow_i(x, *k as i64))
        })
    }

    pub fn eval_f64(&self, a: &[f64]) -> f64 {
        self.terms.iter().map(|(c, e)| *c as f64 * e.iter().zip(a).map(|(k, x)| x.powi(*k as i32)).product::<f64>()).sum()
    }
}

impl fmt::Display for ImplicitPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (c, e)) in self.terms.iter().enumerate() {
            let sign = if *c < 0 { "-" } else { "+" };
            if i == 0 {
                if *c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if c.abs() != 1 {
                factors.push(c.abs().to_string());
            }
            for (k, p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    1 => factors.push(format!("a{k}")),
                    _ => factors.push(format!("a{k}^{p}")),
                }
            }
            write!(f, "{}", if factors.is_empty() { "1".to_string() } else { factors.join("*") })?;
        }
        Ok(())
    }
}

pub fn verify_vanishing(d: &ImplicitPolynomial, s: &HkSample) -> Rat {
    d.eval(&s.a)
}

/// An exponential sum on the boundary, assembled from agiforms whose loci sit at the vertices
/// of the tropical complex, realized exactly as `z_σ = base^{scale · x_σ}`.
#[derive(Debug, Clone)]
pub struct BoundarySample {
    pub subdivision: RegularSubdivision,
    pub complex: TropicalComplex,
    pub decomposition: SoncDecomposition,
    pub sum: ExponentialSum,
    /// Maximal cell carrying each agiform term.
    pub term_cells: Vec<usize>,
    pub base: Rat,
    pub scale: BigInt,
}

impl BoundarySample {
    /// Factor taking tropical coordinates to log coordinates of the loci.
    pub fn log_scale(&self) -> f64 {
        to_f64(&self.base).ln() * self.scale.to_f64().unwrap_or(f64::NAN)
    }

    /// Exact toric point at the tropical vertex dual to maximal cell `i`.
    pub fn cell_locus(&self, i: usize) -> ToricPoint {
        let x = self.complex.vertex_of(&self.subdivision.cells[i]).expect("every maximal cell has a dual vertex");
        let l = Rat::from_integer(self.scale.clone());
        ToricPoint {
            z: x.iter().map(|xi| pow_i(&self.base, (xi * &l).to_integer().to_i64().expect("exponent fits"))).collect(),
        }
    }
}

/// Boundary sample using the chart circuits of `subdivide(a, w)` with scales `t`.
pub fn boundary_sample(a: &Arc<SupportSet>, w: &WeightVector, t: &[Rat]) -> Result<BoundarySample> {
    let sub = subdivide(a, w)?;
    let chart = build_chart(a, &sub);
    check_len(chart.circuits.len(), t.len())?;
    let terms: Vec<(Circuit, Rat)> = chart.circuits.into_iter().map(|c| c.circuit).zip(t.iter().cloned()).collect();
    boundary_sample_with(a, w, &terms)
}

/// Boundary sample with explicitly chosen circuits; each must lie in a cell of `subdivide(a, w)`.
pub fn boundary_sample_with(a: &Arc<SupportSet>, w: &WeightVector, terms: &[(Circuit, Rat)]) -> Result<BoundarySample> {
    let subdivision = subdivide(a, w)?;
    let complex = tropical_complex(a, w)?;
    let coords: Vec<Rat> = complex.vertices().flat_map(|c| c.vertices[0].iter().cloned()).collect();
    let mut bs = BoundarySample {
        subdivision,
        complex,
        decomposition: SoncDecomposition::default(),
        sum: ExponentialSum::zero(a.clone()),
        term_cells: Vec::new(),
        base: int(2),
        scale: denom_lcm(&coords),
    };
    for (c, t) in terms {
        if t.is_negative() {
            return Err(SoncError::NegativeScale);
        }
        let cell = bs
            .subdivision
            .cells
            .iter()
            .position(|cell| c.support.iter().all(|i| cell.contains(i)))
            .ok_or_else(|| SoncError::CircuitNotInCell(c.support.clone()))?;
        bs.term_cells.push(cell);
        bs.decomposition.agiform_terms.push(Agiform::toric(c.clone(), t.clone(), bs.cell_locus(cell)));
    }
    bs.sum = assemble(a, &bs.decomposition)?;
    Ok(bs)
}

/// Exact check that each agiform's singular locus contains the tropical cell dual to the
/// smallest face of the subdivision containing its circuit.
pub fn check_arrangement(a: &SupportSet, bs: &BoundarySample) -> bool {
    bs.decomposition.agiform_terms.iter().zip(&bs.term_cells).all(|(g, &cell)| {
        let Some(x) = bs.complex.vertex_of(&bs.subdivision.cells[cell]) else { return false };
        let expected = bs.cell_locus(cell);
        if g.locus != crate::expsum::Locus::Toric(expected) {
            return false;
        }
        let Some(mu) = bs
            .complex
            .cells
            .iter()
            .filter(|m| g.circuit.support.iter().all(|i| m.dual_face.contains(i)))
            .min_by_key(|m| m.dual_face.len())
        else {
            return false;
        };
        let s = &g.circuit.support;
        let diffs: Vec<Vec<Rat>> = s[1..].iter().map(|&i| linalg::sub(a.point(i), a.point(s[0]))).collect();
        let orth = |v: &[Rat]| diffs.iter().all(|d| linalg::dot(d, v).is_zero());
        mu.vertices.iter().all(|v| orth(&linalg::sub(v, x))) && mu.rays.iter().all(|r| orth(r))
    })
}

/// For each maximal cell carrying a full-dimensional circuit: whether the part of the
/// decomposition on that cell vanishes exactly at the cell's dual vertex.
pub fn cell_truncations_vanish(a: &Arc<SupportSet>, bs: &BoundarySample) -> Result<Vec<(usize, bool)>> {
    let dim = a.dim();
    let mut out = Vec::new();
    for cell in 0..bs.subdivision.cells.len() {
        let terms: Vec<Agiform> = bs
            .decomposition
            .agiform_terms
            .iter()
            .zip(&bs.term_cells)
            .filter(|(_, &c)| c == cell)
            .map(|(g, _)| g.clone())
            .collect();
        if !terms.iter().any(|g| g.circuit.dim == dim && g.t.is_positive()) {
            continue;
        }
        let f = assemble(a, &SoncDecomposition { agiform_terms: terms, monomial_terms: vec![] })?;
        let v = eval(&f, &bs.cell_locus(cell))?;
        out.push((cell, v == Scalar::Exact(Rat::zero())));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodimReport {
    pub params: usize,
    pub expected: usize,
    pub ranks: Vec<usize>,
}

/// Parameters `(t, s, m)` in float mode: log-loci `w = B s` over the locus lattice `B`.
fn chart_map_f64(chart: &LambdaChart, lattice: &[Vec<i64>], p: &[f64]) -> Vec<f64> {
    let a = &chart.support;
    let n = a.n();
    let nc = chart.circuits.len();
    let ns = lattice.len();
    let (t, rest) = p.split_at(nc);
    let (s, mono) = rest.split_at(ns);
    let w = |cell: usize, k: usize| -> f64 { lattice.iter().zip(s).map(|(b, sk)| b[cell * n + k] as f64 * sk).sum() };
    let mut out = vec![0.0; a.len()];
    for (cc, ti) in chart.circuits.iter().zip(t) {
        let row = cc.circuit.full_integer_vector(a.len());
        for &i in &cc.circuit.support {
            let dot: f64 = (0..n).map(|k| to_f64(&a.point(i)[k]) * w(cc.cell, k)).sum();
            out[i] += ti * to_f64(&row[i]) * (-dot).exp();
        }
    }
    for (&i, m) in chart.complement.iter().zip(mono) {
        out[i] += m;
    }
    out
}

/// Numeric rank of the Jacobian of the chart map at `points` seeded random parameter values.
pub fn codim_probe(chart: &LambdaChart, seed: u64, points: usize) -> CodimReport {
    let lattice = chart.locus_lattice();
    let params = chart.circuits.len() + lattice.len() + chart.complement.len();
    let expected = if chart.circuits.is_empty() {
        chart.complement.len()
    } else {
        chart.support.n() + chart.support.dims().1
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = 1e-6;
    let ranks = (0..points)
        .map(|_| {
            let p: Vec<f64> = (0..params)
                .map(|i| {
                    let is_locus = i >= chart.circuits.len() && i < chart.circuits.len() + lattice.len();
                    if is_locus {
                        rng.gen_range(-1.0..1.0)
                    } else {
                        rng.gen_range(0.5..2.0)
                    }
                })
                .collect();
            let rows = chart.support.len();
            let mut jac = DMatrix::<f64>::zeros(rows, params);
            for j in 0..params {
                let mut pp = p.clone();
                let mut pm = p.clone();
                pp[j] += h;
                pm[j] -= h;
                let fp = chart_map_f64(chart, &lattice, &pp);
                let fm = chart_map_f64(chart, &lattice, &pm);
                for i in 0..rows {
                    jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
                }
            }
            numeric_rank(&jac, 1e-6)
        })
        .collect();
    CodimReport { params, expected, ranks }
}

fn numeric_rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    if m.ncols() == 0 || m.nrows() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let top = sv.iter().cloned().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * top).count()
}

/// One point of a two-coordinate slice through coefficient space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceRow {
    pub a: Vec<f64>,
    pub d_value: Option<f64>,
    pub f_min: f64,
}

/// Evaluates the implicit equation and the numeric minimum over a `steps × steps` grid of
/// offsets in `[-half_width, half_width]` applied to coefficients `axes` of `f`.
pub fn coefficient_slice(
    f: &ExponentialSum,
    axes: (usize, usize),
    half_width: f64,
    steps: usize,
    poly: Option<&ImplicitPolynomial>,
    cfg: &MinimizeConfig,
) -> Result<Vec<SliceRow>> {
    let len = f.support.len();
    if axes.0 >= len || axes.1 >= len {
        return Err(SoncError::LengthMismatch { expected: len, got: axes.0.max(axes.1) + 1 });
    }
    let base = f.coeffs.to_f64();
    let offs: Vec<f64> = (0..steps)
        .map(|i| if steps == 1 { 0.0 } else { -half_width + 2.0 * half_width * i as f64 / (steps - 1) as f64 })
        .collect();
    let mut rows = Vec::with_capacity(steps * steps);
    for du in &offs {
        for dv in &offs {
            let mut a = base.clone();
            a[axes.0] += du;
            a[axes.1] += dv;
            let g = ExponentialSum::float(f.support.clone(), a.clone())?;
            let f_min = check_nonneg_numeric(&g, cfg)?.min_found;
            rows.push(SliceRow { d_value: poly.map(|p| p.eval_f64(&a)), a, f_min });
        }
    }
    Ok(rows)
}
