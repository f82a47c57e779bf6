//! Exponential sums, agiforms and sonc-decompositions in exact toric or floating log coordinates.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::circuits::Circuit;
use crate::error::{Result, SoncError};
use crate::geometry::{orthogonal_complement, SupportSet};
use crate::poly::Poly;
use crate::rat::{is_integer, pow_i, to_f64, Rat};

/// Point of the positive orthant, the image of `x` under `z = e^x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricPoint {
    pub z: Vec<Rat>,
}

impl ToricPoint {
    pub fn new(z: Vec<Rat>) -> Result<Self> {
        if z.iter().any(|c| !c.is_positive()) {
            return Err(SoncError::InvalidToricPoint(z.len()));
        }
        Ok(ToricPoint { z })
    }

    pub fn ones(n: usize) -> Self {
        ToricPoint { z: vec![Rat::from_integer(1.into()); n] }
    }

    pub fn log(&self) -> Vec<f64> {
        self.z.iter().map(|c| to_f64(c).ln()).collect()
    }
}

/// Exact `z^e` for rational `e`, defined when the needed root of `z` is rational.
pub fn rational_power(z: &Rat, e: &Rat) -> Option<Rat> {
    if is_integer(e) {
        return Some(pow_i(z, e.to_integer().try_into().ok()?));
    }
    let q: u32 = e.denom().try_into().ok()?;
    let root = |x: &BigInt| {
        let r = x.nth_root(q);
        (num_traits::pow(r.clone(), q as usize) == *x).then_some(r)
    };
    let base = Rat::new(root(z.numer())?, root(z.denom())?);
    Some(pow_i(&base, e.numer().try_into().ok()?))
}

/// Exact `z^α`.
pub fn toric_monomial(z: &ToricPoint, alpha: &[Rat]) -> Option<Rat> {
    let mut acc = Rat::from_integer(1.into());
    for (zk, ak) in z.z.iter().zip(alpha) {
        acc *= rational_power(zk, ak)?;
    }
    Some(acc)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Coeffs {
    Exact(Vec<Rat>),
    Float(Vec<f64>),
}

impl Coeffs {
    pub fn len(&self) -> usize {
        match self {
            Coeffs::Exact(v) => v.len(),
            Coeffs::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            Coeffs::Exact(v) => v.iter().map(to_f64).collect(),
            Coeffs::Float(v) => v.clone(),
        }
    }
}

/// `f = Σ a_α z^α` over a shared support set.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentialSum {
    pub support: Arc<SupportSet>,
    pub coeffs: Coeffs,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(Rat),
    Float(f64),
}

impl Scalar {
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => to_f64(r),
            Scalar::Float(x) => *x,
        }
    }
}

impl ExponentialSum {
    pub fn exact(support: Arc<SupportSet>, coeffs: Vec<Rat>) -> Result<Self> {
        if coeffs.len() != support.len() {
            return Err(SoncError::LengthMismatch { expected: support.len(), got: coeffs.len() });
        }
        Ok(ExponentialSum { support, coeffs: Coeffs::Exact(coeffs) })
    }

    pub fn float(support: Arc<SupportSet>, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != support.len() {
            return Err(SoncError::LengthMismatch { expected: support.len(), got: coeffs.len() });
        }
        Ok(ExponentialSum { support, coeffs: Coeffs::Float(coeffs) })
    }

    pub fn zero(support: Arc<SupportSet>) -> Self {
        let n = support.len();
        ExponentialSum { support, coeffs: Coeffs::Exact(vec![Rat::zero(); n]) }
    }

    pub fn exact_coeffs(&self) -> Option<&[Rat]> {
        match &self.coeffs {
            Coeffs::Exact(v) => Some(v),
            Coeffs::Float(_) => None,
        }
    }

    pub fn add(&self, o: &ExponentialSum) -> ExponentialSum {
        let coeffs = match (&self.coeffs, &o.coeffs) {
            (Coeffs::Exact(a), Coeffs::Exact(b)) => Coeffs::Exact(a.iter().zip(b).map(|(x, y)| x + y).collect()),
            (a, b) => Coeffs::Float(a.to_f64().iter().zip(b.to_f64()).map(|(x, y)| x + y).collect()),
        };
        ExponentialSum { support: self.support.clone(), coeffs }
    }

    /// Value in log coordinates, `Σ a_α e^{⟨α, x⟩}`.
    pub fn eval_log(&self, x: &[f64]) -> f64 {
        let a = self.coeffs.to_f64();
        self.support.points().iter().zip(&a).map(|(p, c)| c * exp_dot(p, x)).sum()
    }

    /// Gradient in log coordinates.
    pub fn grad_log(&self, x: &[f64]) -> Vec<f64> {
        let a = self.coeffs.to_f64();
        let mut g = vec![0.0; x.len()];
        for (p, c) in self.support.points().iter().zip(&a) {
            let e = c * exp_dot(p, x);
            for (gk, pk) in g.iter_mut().zip(p) {
                *gk += e * to_f64(pk);
            }
        }
        g
    }

    /// Exact toric gradient `z_k ∂f/∂z_k = Σ a_α α_k z^α`.
    pub fn toric_gradient(&self, z: &ToricPoint) -> Result<Vec<Rat>> {
        let a = self.exact_coeffs().ok_or_else(|| SoncError::Parse("exact coefficients required".into()))?;
        let mut g = vec![Rat::zero(); self.support.n()];
        for (i, (p, c)) in self.support.points().iter().zip(a).enumerate() {
            if c.is_zero() {
                continue;
            }
            let m = toric_monomial(z, p).ok_or(SoncError::NonIntegralExponent(i))?;
            for (gk, pk) in g.iter_mut().zip(p) {
                *gk += c * &m * pk;
            }
        }
        Ok(g)
    }

    /// The sum as a polynomial in `z` when the support is univariate with nonnegative integer exponents.
    pub fn to_univariate_poly(&self) -> Option<Poly> {
        let a = self.exact_coeffs()?;
        if self.support.n() != 1 {
            return None;
        }
        let mut v: Vec<Rat> = Vec::new();
        for (p, c) in self.support.points().iter().zip(a) {
            if !is_integer(&p[0]) || p[0].is_negative() {
                return None;
            }
            let k: usize = p[0].to_integer().try_into().ok()?;
            if v.len() <= k {
                v.resize(k + 1, Rat::zero());
            }
            v[k] += c;
        }
        Some(Poly::new(v))
    }
}

fn exp_dot(p: &[Rat], x: &[f64]) -> f64 {
    p.iter().zip(x).map(|(a, b)| to_f64(a) * b).sum::<f64>().exp()
}

pub fn eval(f: &ExponentialSum, z: &ToricPoint) -> Result<Scalar> {
    if z.z.len() != f.support.n() {
        return Err(SoncError::InvalidToricPoint(f.support.n()));
    }
    match &f.coeffs {
        Coeffs::Exact(a) => {
            let mut acc = Rat::zero();
            for (i, (p, c)) in f.support.points().iter().zip(a).enumerate() {
                if c.is_zero() {
                    continue;
                }
                acc += c * toric_monomial(z, p).ok_or(SoncError::NonIntegralExponent(i))?;
            }
            Ok(Scalar::Exact(acc))
        }
        Coeffs::Float(_) => Ok(Scalar::Float(f.eval_log(&z.log()))),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Locus {
    Toric(ToricPoint),
    Log(Vec<f64>),
}

/// `t · Σ c_α (z/z_0)^α` over a simplicial circuit, singular at the locus.
#[derive(Debug, Clone, PartialEq)]
pub struct Agiform {
    pub circuit: Circuit,
    pub t: Rat,
    pub locus: Locus,
}

impl Agiform {
    pub fn toric(circuit: Circuit, t: Rat, z: ToricPoint) -> Self {
        Agiform { circuit, t, locus: Locus::Toric(z) }
    }
}

fn circuit_row(c: &Circuit, len: usize) -> Vec<Rat> {
    c.full_integer_vector(len)
}

pub fn agiform_coeffs(a: &Arc<SupportSet>, g: &Agiform) -> Result<ExponentialSum> {
    if g.t.is_negative() {
        return Err(SoncError::NegativeScale);
    }
    if !g.circuit.simplicial {
        return Err(SoncError::NotSimplicial);
    }
    let row = circuit_row(&g.circuit, a.len());
    match &g.locus {
        Locus::Toric(z) => {
            if z.z.len() != a.n() {
                return Err(SoncError::InvalidToricPoint(a.n()));
            }
            let mut v = vec![Rat::zero(); a.len()];
            if !g.t.is_zero() {
                for &i in &g.circuit.support {
                    let m = toric_monomial(z, a.point(i)).ok_or(SoncError::NonIntegralExponent(i))?;
                    v[i] = &g.t * &row[i] / m;
                }
            }
            ExponentialSum::exact(a.clone(), v)
        }
        Locus::Log(w) => {
            let t = to_f64(&g.t);
            let v: Vec<f64> =
                (0..a.len()).map(|i| if row[i].is_zero() { 0.0 } else { t * to_f64(&row[i]) / exp_dot(a.point(i), w) }).collect();
            ExponentialSum::float(a.clone(), v)
        }
    }
}

/// Log-space point and an exact basis of the directions along which the agiform stays singular.
pub fn singular_locus(a: &SupportSet, g: &Agiform) -> Result<(Vec<f64>, Vec<Vec<Rat>>)> {
    if g.t.is_negative() {
        return Err(SoncError::NegativeScale);
    }
    if g.t.is_zero() {
        return Err(SoncError::ZeroScale);
    }
    let w = match &g.locus {
        Locus::Toric(z) => z.log(),
        Locus::Log(w) => w.clone(),
    };
    let pts: Vec<Vec<Rat>> = g.circuit.support.iter().map(|&i| a.point(i).clone()).collect();
    Ok((w, orthogonal_complement(&pts)))
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SoncDecomposition {
    pub agiform_terms: Vec<Agiform>,
    pub monomial_terms: Vec<(usize, Rat)>,
}

impl SoncDecomposition {
    pub fn validate(&self) -> Result<()> {
        if self.agiform_terms.iter().any(|g| g.t.is_negative()) || self.monomial_terms.iter().any(|(_, c)| c.is_negative()) {
            return Err(SoncError::NegativeScale);
        }
        Ok(())
    }
}

pub fn assemble(a: &Arc<SupportSet>, dec: &SoncDecomposition) -> Result<ExponentialSum> {
    dec.validate()?;
    let mut f = ExponentialSum::zero(a.clone());
    for g in &dec.agiform_terms {
        f = f.add(&agiform_coeffs(a, g)?);
    }
    if !dec.monomial_terms.is_empty() {
        let mut v = vec![Rat::zero(); a.len()];
        for (i, c) in &dec.monomial_terms {
            if *i >= a.len() {
                return Err(SoncError::LengthMismatch { expected: a.len(), got: *i + 1 });
            }
            v[*i] += c;
        }
        f = f.add(&ExponentialSum::exact(a.clone(), v)?);
    }
    Ok(f)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimizeConfig {
    pub points_per_axis: usize,
    pub range: (f64, f64),
    pub descent_steps: usize,
    pub tol: f64,
}

impl Default for MinimizeConfig {
    fn default() -> Self {
        MinimizeConfig { points_per_axis: 41, range: (-4.0, 4.0), descent_steps: 200, tol: 1e-12 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonnegReport {
    pub min_found: f64,
    /// Location in log coordinates.
    pub argmin: Vec<f64>,
}

/// Grid search in log space refined by backtracking gradient descent. A report, not a certificate.
pub fn check_nonneg_numeric(f: &ExponentialSum, cfg: &MinimizeConfig) -> Result<NonnegReport> {
    f.support.check_ambient()?;
    let n = f.support.n();
    let k = cfg.points_per_axis.max(2);
    let (lo, hi) = cfg.range;
    let axis: Vec<f64> = (0..k).map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64).collect();
    let mut best = (f64::INFINITY, vec![0.0; n]);
    for flat in 0..k.pow(n as u32) {
        let mut rest = flat;
        let mut x = vec![0.0; n];
        for xi in x.iter_mut().rev() {
            *xi = axis[rest % k];
            rest /= k;
        }
        let v = f.eval_log(&x);
        if v < best.0 {
            best = (v, x);
        }
    }
    let (mut fx, mut x) = best;
    for _ in 0..cfg.descent_steps {
        let g = f.grad_log(&x);
        let gn2: f64 = g.iter().map(|v| v * v).sum();
        if gn2 == 0.0 || !gn2.is_finite() {
            break;
        }
        let mut step = 1.0 / gn2.sqrt();
        let mut moved = false;
        while step * gn2.sqrt() > cfg.tol {
            let cand: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi - step * gi).collect();
            let fc = f.eval_log(&cand);
            if fc <= fx - 1e-4 * step * gn2 {
                x = cand;
                fx = fc;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if !moved {
            break;
        }
    }
    Ok(NonnegReport { min_found: fx, argmin: x })
}
