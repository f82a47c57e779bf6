//! Boundary strata of the sonc cone for univariate supports `α_0 < … < α_d`.
//!
//! The minimal circuits are the consecutive triples `c_i = {α_{i-1}, α_i, α_{i+1}}`,
//! `i = 1, …, m` with `m = d - 1`. A stratum is labelled by the circuits used and by
//! which of them share a singular locus.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::circuits::Circuit;
use crate::error::{Result, SoncError};
use crate::expsum::{assemble, Agiform, ExponentialSum, SoncDecomposition, ToricPoint};
use crate::geometry::SupportSet;
use crate::poly::{nonneg_on_positive_halfline, Poly};
use crate::rat::{int, Rat};

/// Circuit indices (1-based) split into runs with a common singular locus.
///
/// Indices are increasing across the concatenated groups, and `i`, `i + 1` never sit in
/// different groups.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct StratumLabel {
    groups: Vec<Vec<usize>>,
}

impl StratumLabel {
    pub fn new(groups: Vec<Vec<usize>>) -> Result<Self> {
        let flat: Vec<usize> = groups.iter().flatten().copied().collect();
        let bad = groups.iter().any(|g| g.is_empty())
            || flat.iter().any(|&i| i == 0)
            || flat.windows(2).any(|w| w[0] >= w[1])
            || groups.windows(2).any(|w| w[0].last().unwrap() + 1 == w[1][0]);
        if bad {
            return Err(SoncError::InvalidLabel(format_groups(&groups)));
        }
        Ok(StratumLabel { groups })
    }

    pub fn empty() -> Self {
        StratumLabel { groups: vec![] }
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn indices(&self) -> Vec<usize> {
        self.groups.iter().flatten().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Dimension of the stratum in `ℝ^A`.
    pub fn dim(&self) -> usize {
        self.len() + self.groups.len()
    }

    /// True iff `self` lies in the closure of `other`: obtained by deleting indices and bars.
    pub fn in_closure_of(&self, other: &StratumLabel) -> bool {
        let group_of = |l: &StratumLabel| -> BTreeMap<usize, usize> {
            l.groups.iter().enumerate().flat_map(|(g, ix)| ix.iter().map(move |&i| (i, g))).collect()
        };
        let theirs = group_of(other);
        if !self.indices().iter().all(|i| theirs.contains_key(i)) {
            return false;
        }
        // indices sharing a group in `other` must still share one
        let mine = group_of(self);
        let idx = self.indices();
        idx.windows(2).all(|w| theirs[&w[0]] != theirs[&w[1]] || mine[&w[0]] == mine[&w[1]])
    }
}

fn format_groups(groups: &[Vec<usize>]) -> String {
    let inner: Vec<String> =
        groups.iter().map(|g| g.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")).collect();
    format!("{{{}}}", inner.join("|"))
}

impl fmt::Display for StratumLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_groups(&self.groups))
    }
}

impl FromStr for StratumLabel {
    type Err = SoncError;

    /// Parses `{1,2|4}`; braces optional, `{}` is the empty label.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('{').trim_end_matches('}').trim();
        if body.is_empty() {
            return Ok(Self::empty());
        }
        let groups = body
            .split('|')
            .map(|g| {
                g.split(',')
                    .map(|x| x.trim().parse::<usize>().map_err(|_| SoncError::InvalidLabel(s.to_string())))
                    .collect::<Result<Vec<usize>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(groups)
    }
}

impl TryFrom<Vec<Vec<usize>>> for StratumLabel {
    type Error = SoncError;
    fn try_from(groups: Vec<Vec<usize>>) -> Result<Self> {
        Self::new(groups)
    }
}

impl From<StratumLabel> for Vec<Vec<usize>> {
    fn from(l: StratumLabel) -> Self {
        l.groups
    }
}

/// All labels for `d + 1` points, sorted by decreasing dimension. With `slice`, only labels
/// using the first and last circuit (the strata meeting `a_0 = a_d = 1`).
pub fn enumerate_labels(d: usize, slice: bool) -> Vec<StratumLabel> {
    assert!(d >= 2, "need at least three points");
    let m = d - 1;
    let mut out = Vec::new();
    for mask in 0u32..(1 << m) {
        let idx: Vec<usize> = (1..=m).filter(|i| mask >> (i - 1) & 1 == 1).collect();
        if slice && !(idx.contains(&1) && idx.contains(&m)) {
            continue;
        }
        let gaps: Vec<usize> = (1..idx.len()).filter(|&k| idx[k] > idx[k - 1] + 1).collect();
        for bars in 0u32..(1 << gaps.len()) {
            let mut groups: Vec<Vec<usize>> = Vec::new();
            for (k, &i) in idx.iter().enumerate() {
                let split = gaps.iter().position(|&g| g == k).is_some_and(|p| bars >> p & 1 == 1);
                if k == 0 || split {
                    groups.push(vec![i]);
                } else {
                    groups.last_mut().unwrap().push(i);
                }
            }
            out.push(StratumLabel { groups });
        }
    }
    out.sort_by_key(|l| (std::cmp::Reverse(l.dim()), l.indices(), l.groups.len()));
    out
}

/// Dimension of a stratum inside the affine slice `a_0 = a_d = 1`.
pub fn slice_dim(l: &StratumLabel) -> usize {
    l.dim().saturating_sub(2)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrataPoset {
    pub labels: Vec<StratumLabel>,
    /// `(upper, lower)` index pairs: `labels[lower]` is maximal in the closure of `labels[upper]`.
    pub covers: Vec<(usize, usize)>,
}

impl StrataPoset {
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph strata {\n  rankdir=TB;\n");
        for (i, l) in self.labels.iter().enumerate() {
            s += &format!("  n{i} [label=\"{l}  dim {}\"];\n", l.dim());
        }
        for (u, v) in &self.covers {
            s += &format!("  n{u} -> n{v};\n");
        }
        s + "}\n"
    }
}

/// Hasse diagram of the closure order restricted to `labels`.
pub fn build_poset(labels: &[StratumLabel]) -> StrataPoset {
    let n = labels.len();
    let below = |u: usize, v: usize| u != v && labels[v].in_closure_of(&labels[u]);
    let mut covers = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if below(u, v) && !(0..n).any(|w| below(u, w) && below(w, v)) {
                covers.push((u, v));
            }
        }
    }
    StrataPoset { labels: labels.to_vec(), covers }
}

/// Strata of codimension one in `ℝ^A`, alone and together with the hyperplanes `a_0 = 0`, `a_d = 0`.
pub fn codim1_count(d: usize) -> (usize, usize) {
    assert!(d >= 3, "need at least four points");
    let labels = enumerate_labels(d, false).iter().filter(|l| l.dim() == d).count();
    (labels, labels + 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuarticVerdict {
    Boundary,
    Interior,
}

/// For `1 - 2w₁z + w₁²z² + z²(w₃² - 2w₃z + z²)` on `{0, …, 4}`.
pub fn quartic_boundary_test(w1: &Rat, w3: &Rat) -> Result<QuarticVerdict> {
    if !w1.is_positive() || !w3.is_positive() {
        return Err(SoncError::NegativeScale);
    }
    Ok(if w1 * w3 >= Rat::one() { QuarticVerdict::Boundary } else { QuarticVerdict::Interior })
}

/// The quartic tested by [`quartic_boundary_test`].
pub fn quartic_pair(w1: &Rat, w3: &Rat) -> Poly {
    let g1 = Poly::new(vec![int(1), -int(2) * w1, w1 * w1]);
    let g3 = Poly::new(vec![int(0), int(0), w3 * w3, -int(2) * w3, int(1)]);
    g1.add(&g3)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Label(StratumLabel),
    InteriorCandidate,
}

/// Label of a sum of minimal agiforms `(i, w_i, t_i)`, or `InteriorCandidate` when adjacent
/// circuits have different loci or the loci decrease along the indices.
pub fn classify_decomposition(terms: &[(usize, Rat, Rat)]) -> Result<Classification> {
    if terms.iter().any(|(_, _, t)| !t.is_positive()) {
        return Err(SoncError::NegativeScale);
    }
    let mut ts: Vec<&(usize, Rat, Rat)> = terms.iter().collect();
    ts.sort_by_key(|t| t.0);
    if ts.windows(2).any(|w| w[0].0 == w[1].0) || ts.iter().any(|t| t.0 == 0) {
        let idx: Vec<String> = terms.iter().map(|t| t.0.to_string()).collect();
        return Err(SoncError::InvalidLabel(idx.join(",")));
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (k, (i, w, _)) in ts.iter().enumerate() {
        if k == 0 {
            groups.push(vec![*i]);
            continue;
        }
        let (pi, pw, _) = ts[k - 1];
        if w < pw || (*i == pi + 1 && w != pw) {
            return Ok(Classification::InteriorCandidate);
        }
        if w == pw {
            groups.last_mut().unwrap().push(*i);
        } else {
            groups.push(vec![*i]);
        }
    }
    Ok(Classification::Label(StratumLabel { groups }))
}

pub fn sturm_nonneg_halfline(p: &Poly) -> bool {
    nonneg_on_positive_halfline(p)
}

/// Sum over the label's circuits of `t_i · ⟨φ(z/z_g), c_i⟩`, where `z_g` is the locus of
/// the group containing `i`. Needs `d + 1` points, one locus per group and one scale per index.
pub fn stratum_point(
    a: &Arc<SupportSet>,
    label: &StratumLabel,
    group_loci: &[Rat],
    scales: &[Rat],
) -> Result<ExponentialSum> {
    if a.n() != 1 {
        return Err(SoncError::InvalidSupport("strata need a univariate support".into()));
    }
    if label.groups.len() != group_loci.len() {
        return Err(SoncError::LengthMismatch { expected: label.groups.len(), got: group_loci.len() });
    }
    if label.len() != scales.len() {
        return Err(SoncError::LengthMismatch { expected: label.len(), got: scales.len() });
    }
    let mut order: Vec<usize> = (0..a.len()).collect();
    order.sort_by(|&i, &j| a.point(i)[0].cmp(&a.point(j)[0]));
    let mut dec = SoncDecomposition::default();
    let mut k = 0;
    for (g, z) in label.groups.iter().zip(group_loci) {
        for &i in g {
            if i + 1 >= a.len() {
                return Err(SoncError::InvalidLabel(label.to_string()));
            }
            let support = vec![order[i - 1], order[i], order[i + 1]];
            let c = Circuit::from_support(a, &support).expect("three distinct collinear points form a circuit");
            dec.agiform_terms.push(Agiform::toric(c, scales[k].clone(), ToricPoint::new(vec![z.clone()])?));
            k += 1;
        }
    }
    assemble(a, &dec)
}
