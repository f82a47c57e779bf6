//! Dense exact linear algebra over the rationals.

use num_traits::{One, Zero};

use crate::rat::Rat;

pub type Matrix = Vec<Vec<Rat>>;

/// Reduces `m` in place to reduced row echelon form and returns the pivot columns.
/// Zero rows are moved to the bottom.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut w = m.clone();
    rref(&mut w).len()
}

/// Basis of `{x : m x = 0}` for a matrix with `cols` columns.
pub fn nullspace(m: &Matrix, cols: usize) -> Vec<Vec<Rat>> {
    let mut w = m.clone();
    let pivots = rref(&mut w);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); cols];
            v[f] = Rat::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -w[r][f].clone();
            }
            v
        })
        .collect()
}

/// Some solution of `m x = b` (free variables set to zero), or `None` if inconsistent.
pub fn solve(m: &Matrix, b: &[Rat]) -> Option<Vec<Rat>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut aug: Matrix = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![Rat::zero(); cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][cols].clone();
    }
    Some(x)
}

/// Nonzero rows of the RREF of `vectors`, together with their pivot columns.
pub fn row_basis(vectors: &[Vec<Rat>], cols: usize) -> (Matrix, Vec<usize>) {
    if vectors.is_empty() {
        return (Vec::new(), Vec::new());
    }
    let mut w: Matrix = vectors.to_vec();
    let pivots = rref(&mut w);
    w.truncate(pivots.len());
    debug_assert!(w.iter().all(|r| r.len() == cols));
    (w, pivots)
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn mat_vec(m: &Matrix, v: &[Rat]) -> Vec<Rat> {
    m.iter().map(|row| dot(row, v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, ints};

    #[test]
    fn kernel_of_lifted_motzkin() {
        let m = vec![ints(&[1, 1, 1, 1]), ints(&[0, 4, 2, 2]), ints(&[0, 2, 4, 2])];
        let k = nullspace(&m, 4);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        // proportional to (1,1,1,-3)
        let s = v[0].clone();
        let scaled: Vec<Rat> = v.iter().map(|x| x / &s).collect();
        assert_eq!(scaled, ints(&[1, 1, 1, -3]));
        assert!(mat_vec(&m, v).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn solve_inconsistent() {
        let m = vec![ints(&[1, 1]), ints(&[2, 2])];
        assert!(solve(&m, &[int(1), int(3)]).is_none());
        let x = solve(&m, &[int(1), int(2)]).unwrap();
        assert_eq!(dot(&m[0], &x), int(1));
    }

    #[test]
    fn rank_of_collinear() {
        let m = vec![ints(&[1, 1, 1]), ints(&[0, 1, 2])];
        assert_eq!(rank(&m), 2);
    }
}
