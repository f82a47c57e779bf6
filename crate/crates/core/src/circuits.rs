//! Circuits of the lifted matrix, barycentric coordinates and the Reznick cone.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SoncError};
use crate::geometry::{combinations, Polytope, SupportSet};
use crate::linalg;
use crate::rat::{primitive_integer, serde_rat_vec, Rat};

/// A minimally supported kernel vector of the lifted matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Circuit {
    /// Sorted point indices.
    pub support: Vec<usize>,
    /// Entries over `support`, barycentric when simplicial, first entry `+1` otherwise.
    #[serde(with = "serde_rat_vec")]
    pub kernel_vec: Vec<Rat>,
    /// `(negative entries, positive entries)`.
    pub signature: (usize, usize),
    pub simplicial: bool,
    pub interior_index: Option<usize>,
    pub dim: usize,
    /// Primitive integer multiple of `kernel_vec`, present when the support is integral.
    #[serde(skip_serializing_if = "Option::is_none", default, with = "opt_bigint_vec")]
    pub integer_vec: Option<Vec<BigInt>>,
}

mod opt_bigint_vec {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<BigInt>>, s: S) -> Result<S::Ok, S::Error> {
        let strings: Option<Vec<String>> = v.as_ref().map(|v| v.iter().map(|x| x.to_string()).collect());
        serde::Serialize::serialize(&strings, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<BigInt>>, D::Error> {
        let v = Option::<Vec<serde_json::Value>>::deserialize(d)?;
        v.map(|v| {
            v.iter()
                .map(|x| {
                    let s = match x {
                        serde_json::Value::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    s.parse::<BigInt>().map_err(serde::de::Error::custom)
                })
                .collect()
        })
        .transpose()
    }
}

impl Circuit {
    /// Builds the circuit on `support` if the points form a minimally dependent set.
    pub fn from_support(a: &SupportSet, support: &[usize]) -> Option<Circuit> {
        let mut support = support.to_vec();
        support.sort_unstable();
        let ns = linalg::nullspace(&a.sub_matrix(&support), support.len());
        if ns.len() != 1 || ns[0].iter().any(|x| x.is_zero()) {
            return None;
        }
        let mut v = ns.into_iter().next().unwrap();
        let neg = v.iter().filter(|x| x.is_negative()).count();
        let pos = v.len() - neg;
        let (simplicial, interior_slot) = if neg == 1 {
            (true, v.iter().position(|x| x.is_negative()))
        } else if pos == 1 {
            v.iter_mut().for_each(|x| *x = -x.clone());
            (true, v.iter().position(|x| x.is_negative()))
        } else {
            (false, None)
        };
        if let Some(slot) = interior_slot {
            let s = -v[slot].clone();
            v.iter_mut().for_each(|x| *x /= &s);
        } else {
            let s = v[0].clone();
            v.iter_mut().for_each(|x| *x /= &s);
        }
        let neg = v.iter().filter(|x| x.is_negative()).count();
        let integer_vec =
            support.iter().all(|&i| a.point(i).iter().all(crate::rat::is_integer)).then(|| primitive_integer(&v));
        Some(Circuit {
            dim: a.affine_dim(&support),
            interior_index: interior_slot.map(|s| support[s]),
            signature: (neg, v.len() - neg),
            simplicial,
            kernel_vec: v,
            support,
            integer_vec,
        })
    }

    /// Coefficient at point `i` (zero off the support).
    pub fn coeff(&self, i: usize) -> Rat {
        self.support.iter().position(|&s| s == i).map_or_else(Rat::zero, |p| self.kernel_vec[p].clone())
    }

    /// Kernel vector extended by zeros to length `len`.
    pub fn full_vector(&self, len: usize) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); len];
        for (s, x) in self.support.iter().zip(&self.kernel_vec) {
            v[*s] = x.clone();
        }
        v
    }

    /// Integer vector extended by zeros, falling back to the rational kernel vector.
    pub fn full_integer_vector(&self, len: usize) -> Vec<Rat> {
        match &self.integer_vec {
            Some(iv) => {
                let mut v = vec![Rat::zero(); len];
                for (s, x) in self.support.iter().zip(iv) {
                    v[*s] = Rat::from_integer(x.clone());
                }
                v
            }
            None => self.full_vector(len),
        }
    }

    pub fn is_full_dimensional(&self, a: &SupportSet) -> bool {
        self.dim == a.dim()
    }
}

/// All circuits of the lifted matrix, ordered by support size then lexicographically.
pub fn enumerate_circuits(a: &SupportSet) -> Vec<Circuit> {
    let r = linalg::rank(&a.matrix());
    let mut out = Vec::new();
    for k in 2..=(r + 1).min(a.len()) {
        for sub in combinations(a.len(), k) {
            if let Some(c) = Circuit::from_support(a, &sub) {
                out.push(c);
            }
        }
    }
    out
}

pub fn simplicial_circuits(a: &SupportSet) -> Vec<Circuit> {
    enumerate_circuits(a).into_iter().filter(|c| c.simplicial).collect()
}

/// Barycentric coordinates over the circuit's support: `−1` at the interior point.
pub fn barycentric_vector(c: &Circuit) -> Result<Vec<Rat>> {
    if !c.simplicial {
        return Err(SoncError::NotSimplicial);
    }
    Ok(c.kernel_vec.clone())
}

/// True iff the only points of `a` in the Newton polytope of `c` are those of `c`.
pub fn is_edge_generator(a: &SupportSet, c: &Circuit) -> Result<bool> {
    if !c.simplicial {
        return Err(SoncError::NotSimplicial);
    }
    Ok(a.points_in_hull(&c.support) == c.support)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReznickCone {
    pub circuits: Vec<Circuit>,
    pub edge_generators: Vec<Circuit>,
    pub dim: usize,
}

pub fn reznick_cone(a: &SupportSet) -> ReznickCone {
    let circuits = simplicial_circuits(a);
    let edge_generators: Vec<Circuit> =
        circuits.iter().filter(|c| is_edge_generator(a, c).unwrap_or(false)).cloned().collect();
    let vectors: Vec<Vec<Rat>> = circuits.iter().map(|c| c.full_vector(a.len())).collect();
    let dim = if vectors.is_empty() { 0 } else { linalg::rank(&vectors) };
    ReznickCone { circuits, edge_generators, dim }
}

/// A simplicial circuit with interior point `interior` whose support contains `vertex`.
///
/// Walks from `vertex` through `interior` to the boundary of the Newton polytope,
/// then spans the exit point by a smallest simplex of points on the exit face.
pub fn simplicial_circuit_through(a: &SupportSet, interior: usize, vertex: usize) -> Result<Circuit> {
    let poly = a.polytope();
    if interior >= a.len() || poly.dim == 0 || !poly.relint_contains(a.point(interior)) {
        return Err(SoncError::NotInteriorPoint(interior));
    }
    if vertex >= a.len() || vertex == interior {
        return Err(SoncError::InvalidSupport(format!("vertex {vertex} must be a point distinct from {interior}")));
    }
    let p = a.point(interior);
    let v = linalg::sub(p, a.point(vertex));
    let step = poly
        .facets
        .iter()
        .filter_map(|h| {
            let rate = linalg::dot(&h.normal, &v);
            rate.is_positive().then(|| (&h.offset - linalg::dot(&h.normal, p)) / rate)
        })
        .min()
        .expect("a bounded polytope is left along every direction");
    let exit: Vec<Rat> = p.iter().zip(&v).map(|(x, y)| x + &step * y).collect();

    let face = poly
        .face_sets()
        .into_iter()
        .filter(|f| Polytope::new(a.points(), f.clone()).contains(&exit))
        .min_by_key(|f| (a.affine_dim(f), f.len()))
        .expect("the polytope itself contains the exit point");

    for k in 1..=face.len() {
        for sub in combinations(face.len(), k) {
            let pts: Vec<usize> = sub.iter().map(|&i| face[i]).collect();
            if a.affine_dim(&pts) + 1 != k {
                continue;
            }
            if Polytope::new(a.points(), pts.clone()).relint_contains(&exit) {
                let mut support = pts;
                support.push(vertex);
                support.push(interior);
                let c = Circuit::from_support(a, &support).expect("simplex plus an interior point is a circuit");
                debug_assert_eq!(c.interior_index, Some(interior));
                return Ok(c);
            }
        }
    }
    unreachable!("the exit point lies in the relative interior of a simplex on its face")
}

/// Decides whether `target` lies in the cone spanned by `generators` (exact LP).
pub fn in_positive_hull(generators: &[Vec<Rat>], target: &[Rat]) -> bool {
    let rows = target.len();
    let m: Vec<Vec<Rat>> = (0..rows).map(|r| generators.iter().map(|g| g[r].clone()).collect()).collect();
    crate::lp::feasible_nonneg(&m, target)
}

/// Integer row of `c` over all `len` points (the rational row when no integer rescaling exists).
pub fn integer_row(c: &Circuit, len: usize) -> Vec<i64> {
    use num_traits::ToPrimitive;
    c.full_integer_vector(len).iter().map(|x| x.to_integer().to_i64().unwrap_or(i64::MAX)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rat::{int, rat};
    use proptest::prelude::*;

    /// Independent oracle: subsets that are dependent while every one-smaller subset is independent.
    fn oracle_supports(a: &SupportSet) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for k in 1..=a.len() {
            for sub in combinations(a.len(), k) {
                let dependent = linalg::rank(&a.sub_matrix(&sub)) < k;
                let minimal = (0..k).all(|skip| {
                    let smaller: Vec<usize> = sub.iter().enumerate().filter(|(j, _)| *j != skip).map(|(_, &x)| x).collect();
                    smaller.is_empty() || linalg::rank(&a.sub_matrix(&smaller)) == smaller.len()
                });
                if dependent && minimal {
                    out.push(sub);
                }
            }
        }
        out
    }

    #[test]
    fn motzkin_single_circuit() {
        let cs = enumerate_circuits(&fixtures::motzkin());
        assert_eq!(cs.len(), 1);
        let c = &cs[0];
        assert!(c.simplicial);
        assert_eq!(c.interior_index, Some(3));
        assert_eq!(c.kernel_vec, vec![rat(1, 3), rat(1, 3), rat(1, 3), int(-1)]);
        assert_eq!(integer_row(c, 4), vec![1, 1, 1, -3]);
        assert_eq!(c.signature, (1, 3));
    }

    #[test]
    fn midpoint_circuit() {
        let cs = enumerate_circuits(&fixtures::segment(2));
        assert_eq!(cs.len(), 1);
        assert_eq!(barycentric_vector(&cs[0]).unwrap(), vec![rat(1, 2), int(-1), rat(1, 2)]);
        assert_eq!(integer_row(&cs[0], 3), vec![1, -2, 1]);
    }

    #[test]
    fn uneven_barycentric() {
        let a = SupportSet::univariate(&[0, 2, 3]).unwrap();
        let c = &enumerate_circuits(&a)[0];
        assert_eq!(barycentric_vector(c).unwrap(), vec![rat(1, 3), int(-1), rat(2, 3)]);
    }

    #[test]
    fn square_is_not_simplicial() {
        let a = SupportSet::from_ints(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]).unwrap();
        let cs = enumerate_circuits(&a);
        assert_eq!(cs.len(), 1);
        assert!(!cs[0].simplicial);
        assert_eq!(cs[0].signature, (2, 2));
        assert_eq!(barycentric_vector(&cs[0]), Err(SoncError::NotSimplicial));
        assert_eq!(reznick_cone(&a).dim, 0);
    }

    #[test]
    fn planar_six_generators() {
        let a = fixtures::planar_six();
        let cone = reznick_cone(&a);
        let mut rows: Vec<Vec<i64>> = cone.edge_generators.iter().map(|c| integer_row(c, 6)).collect();
        rows.sort();
        let mut expected: Vec<Vec<i64>> = fixtures::PLANAR_SIX_CIRCUITS.iter().map(|r| r.to_vec()).collect();
        expected.sort();
        assert_eq!(rows, expected);
        assert_eq!(cone.dim, 3);
        let gens: Vec<Vec<Rat>> = cone.edge_generators.iter().map(|c| c.full_vector(6)).collect();
        for c in &cone.circuits {
            assert!(in_positive_hull(&gens, &c.full_vector(6)));
        }
    }

    #[test]
    fn segment_generators_are_consecutive_triples() {
        let a = fixtures::segment(4);
        let cone = reznick_cone(&a);
        let supports: Vec<Vec<usize>> = cone.edge_generators.iter().map(|c| c.support.clone()).collect();
        assert_eq!(supports, vec![vec![0, 1, 2], vec![1, 2, 3], vec![2, 3, 4]]);
        assert_eq!(cone.dim, 3);
    }

    #[test]
    fn single_circuit_generates() {
        let a = fixtures::motzkin();
        let c = &enumerate_circuits(&a)[0];
        assert!(is_edge_generator(&a, c).unwrap());
    }

    #[test]
    fn circuit_through_interior() {
        let a = fixtures::planar_six();
        let c = simplicial_circuit_through(&a, 3, 2).unwrap();
        assert!(c.simplicial && c.support.contains(&2) && c.interior_index == Some(3));
        assert!(linalg::mat_vec(&a.matrix(), &c.full_vector(6)).iter().all(|x| x.is_zero()));

        let m = fixtures::motzkin();
        assert_eq!(simplicial_circuit_through(&m, 3, 0).unwrap().support, vec![0, 1, 2, 3]);

        let s = fixtures::segment(4);
        let c = simplicial_circuit_through(&s, 2, 4).unwrap();
        assert_eq!(c.interior_index, Some(2));
        assert!(c.support.contains(&4) && c.support.len() == 3);

        assert_eq!(simplicial_circuit_through(&a, 0, 3), Err(SoncError::NotInteriorPoint(0)));
    }

    #[test]
    fn circuit_json_roundtrip() {
        let c = enumerate_circuits(&fixtures::motzkin()).remove(0);
        let s = serde_json::to_string(&c).unwrap();
        let back: Circuit = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }

    fn small_config() -> impl Strategy<Value = SupportSet> {
        prop::collection::btree_set((0i64..5, 0i64..5), 3..8).prop_map(|pts| {
            let v: Vec<Vec<Rat>> = pts.into_iter().map(|(x, y)| vec![int(x), int(y)]).collect();
            SupportSet::new(2, v).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn circuits_match_oracle(a in small_config()) {
            let got: Vec<Vec<usize>> = enumerate_circuits(&a).into_iter().map(|c| c.support).collect();
            let mut want = oracle_supports(&a);
            want.sort_by(|x, y| x.len().cmp(&y.len()).then(x.cmp(y)));
            prop_assert_eq!(got, want);
        }

        #[test]
        fn circuits_in_kernel(a in small_config()) {
            let m = a.matrix();
            for c in enumerate_circuits(&a) {
                prop_assert!(linalg::mat_vec(&m, &c.full_vector(a.len())).iter().all(|x| x.is_zero()));
                if c.simplicial {
                    prop_assert_eq!(c.signature.0, 1);
                    let interior = c.interior_index.unwrap();
                    let rest: Vec<usize> = c.support.iter().copied().filter(|&i| i != interior).collect();
                    prop_assert!(a.sub_polytope(&rest).relint_contains(a.point(interior)));
                }
            }
        }

        #[test]
        fn generators_relabel_invariant(a in small_config(), rot in 0usize..7) {
            let n = a.len();
            let perm: Vec<usize> = (0..n).map(|i| (i + rot) % n).collect();
            let b = SupportSet::new(2, perm.iter().map(|&i| a.point(i).clone()).collect()).unwrap();
            let mut ga: Vec<Vec<usize>> = reznick_cone(&a).edge_generators.into_iter().map(|c| c.support).collect();
            let mut gb: Vec<Vec<usize>> = reznick_cone(&b).edge_generators.into_iter()
                .map(|c| { let mut s: Vec<usize> = c.support.iter().map(|&i| perm[i]).collect(); s.sort_unstable(); s })
                .collect();
            ga.sort();
            gb.sort();
            prop_assert_eq!(ga, gb);
        }

        #[test]
        fn generators_span_all_simplicial(a in small_config()) {
            let cone = reznick_cone(&a);
            let gens: Vec<Vec<Rat>> = cone.edge_generators.iter().map(|c| c.full_vector(a.len())).collect();
            for c in &cone.circuits {
                prop_assert!(in_positive_hull(&gens, &c.full_vector(a.len())));
            }
        }

        #[test]
        fn interior_point_gives_full_cone(a in small_config()) {
            let poly = a.polytope();
            let has_interior = (0..a.len()).any(|i| poly.dim > 0 && poly.relint_contains(a.point(i)));
            if has_interior {
                prop_assert_eq!(reznick_cone(&a).dim, a.dims().1);
            }
        }
    }
}
