//! Dense univariate polynomials over the rationals, square-free decomposition and Sturm chains.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::rat::{sign, Rat};

/// Coefficients from the constant term upward; never has a trailing zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rat) -> Self {
        Poly::new(vec![c])
    }

    /// `c · z^k`.
    pub fn monomial(c: Rat, k: usize) -> Self {
        let mut v = vec![Rat::zero(); k + 1];
        v[k] = c;
        Poly::new(v)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, z: &Rat) -> Rat {
        self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * z + c)
    }

    pub fn eval_f64(&self, z: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * z + crate::rat::to_f64(c))
    }

    pub fn derivative(&self) -> Self {
        Poly::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * Rat::from_integer(k.into())).collect())
    }

    pub fn scale(&self, s: &Rat) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().recip())
    }

    pub fn add(&self, o: &Poly) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new(
            (0..n)
                .map(|k| {
                    self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero) + o.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
                })
                .collect(),
        )
    }

    pub fn sub(&self, o: &Poly) -> Self {
        self.add(&o.scale(&-Rat::one()))
    }

    pub fn mul(&self, o: &Poly) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Rat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly::new(v)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![Rat::zero(); r.len() - dd];
        let lc = d.leading();
        for k in (0..q.len()).rev() {
            let f = &r[k + dd] / &lc;
            if !f.is_zero() {
                for (j, c) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &f * c;
                }
            }
            q[k] = f;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Number of leading zero coefficients, i.e. the multiplicity of the root at 0.
    pub fn low_order(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    pub fn shift_down(&self, k: usize) -> Poly {
        Poly::new(self.coeffs[k.min(self.coeffs.len())..].to_vec())
    }

    /// Square-free factors `[f_1, f_2, …]` with `self = c · Π f_i^i` (Yun's algorithm).
    pub fn squarefree_decomposition(&self) -> Vec<Poly> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let dp = self.derivative();
        let g = self.gcd(&dp);
        let mut c = self.divrem(&g).0;
        let mut d = dp.divrem(&g).0.sub(&c.derivative());
        let mut out = Vec::new();
        while c.degree().unwrap_or(0) > 0 {
            let a = c.gcd(&d);
            c = c.divrem(&a).0;
            d = d.divrem(&a).0.sub(&c.derivative());
            out.push(a);
        }
        out
    }

    pub fn sturm_chain(&self) -> Vec<Poly> {
        let mut chain = vec![self.clone(), self.derivative()];
        while !chain.last().unwrap().is_zero() {
            let n = chain.len();
            let r = chain[n - 2].divrem(&chain[n - 1]).1;
            chain.push(r.scale(&-Rat::one()));
        }
        chain.pop();
        chain
    }

    /// Distinct real roots in the open interval `(lo, ∞)`; `lo` must not be a root.
    pub fn count_roots_above(&self, lo: &Rat) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let chain = self.sturm_chain();
        let at_lo: Vec<i8> = chain.iter().map(|p| sign(&p.eval(lo))).collect();
        let at_inf: Vec<i8> = chain.iter().map(|p| sign(&p.leading())).collect();
        sign_changes(&at_lo) - sign_changes(&at_inf)
    }

    /// Distinct real roots in the half-open interval `(lo, hi]`.
    pub fn count_roots_between(&self, lo: &Rat, hi: &Rat) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let chain = self.sturm_chain();
        let v = |x: &Rat| sign_changes(&chain.iter().map(|p| sign(&p.eval(x))).collect::<Vec<_>>());
        v(lo) - v(hi)
    }
}

fn sign_changes(s: &[i8]) -> usize {
    let nz: Vec<i8> = s.iter().copied().filter(|&x| x != 0).collect();
    nz.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Exact decision of `p(z) ≥ 0` for every `z > 0`.
pub fn nonneg_on_positive_halfline(p: &Poly) -> bool {
    if p.is_zero() {
        return true;
    }
    let q = p.shift_down(p.low_order());
    // q(0) ≠ 0, so the sign of q can only change at a root of odd multiplicity
    let odd = q
        .squarefree_decomposition()
        .into_iter()
        .enumerate()
        .filter(|(i, _)| i % 2 == 0)
        .fold(Poly::constant(Rat::one()), |acc, (_, f)| acc.mul(&f));
    odd.count_roots_above(&Rat::zero()) == 0 && q.leading().is_positive()
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (s, a) = if c.is_negative() { ("-", -c.clone()) } else { ("+", c.clone()) };
            if first {
                if s == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {s} ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{a}")?,
                1 if a.is_one() => write!(f, "z")?,
                1 => write!(f, "{a}*z")?,
                _ if a.is_one() => write!(f, "z^{k}")?,
                _ => write!(f, "{a}*z^{k}")?,
            }
        }
        Ok(())
    }
}
