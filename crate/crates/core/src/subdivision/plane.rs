//! Complete enumeration of polyhedral subdivisions of a planar point set by
//! recursive cell placement across open interior edges.

use std::collections::{BTreeSet, HashMap};

use num_traits::ToPrimitive;

use crate::geometry::SupportSet;
use crate::rat::{denom_lcm, Rat};

type P = (i128, i128);

fn cross(o: P, a: P, b: P) -> i128 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn on_segment(u: P, v: P, p: P) -> bool {
    cross(u, v, p) == 0 && (p.0 - u.0) * (p.0 - v.0) <= 0 && (p.1 - u.1) * (p.1 - v.1) <= 0
}

/// Strictly convex hull in counter-clockwise order starting at the lowest, then leftmost, point.
fn hull(pts: &[P], idx: &[usize]) -> Vec<usize> {
    let mut s: Vec<usize> = idx.to_vec();
    s.sort_by_key(|&i| (pts[i].1, pts[i].0));
    let origin = s[0];
    if s.len() < 3 {
        return s;
    }
    // monotone chain on (x, y) order, then rotate to start at `origin`
    let mut byx = s.clone();
    byx.sort_by_key(|&i| pts[i]);
    let mut lower: Vec<usize> = Vec::new();
    for &i in &byx {
        while lower.len() >= 2 && cross(pts[lower[lower.len() - 2]], pts[lower[lower.len() - 1]], pts[i]) <= 0 {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in byx.iter().rev() {
        while upper.len() >= 2 && cross(pts[upper[upper.len() - 2]], pts[upper[upper.len() - 1]], pts[i]) <= 0 {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    let start = lower.iter().position(|&i| i == origin).unwrap_or(0);
    lower.rotate_left(start);
    lower
}

fn inside(pts: &[P], ring: &[usize], p: P) -> bool {
    (0..ring.len()).all(|i| cross(pts[ring[i]], pts[ring[(i + 1) % ring.len()]], p) >= 0)
}

struct Cell {
    mask: u32,
    ring: Vec<usize>,
    /// Directed counter-clockwise edges with the points lying on them.
    edges: Vec<(usize, usize, u32)>,
}

impl Cell {
    fn is_face(&self, m: u32) -> bool {
        self.ring.iter().any(|&v| m == 1 << v) || self.edges.iter().any(|e| e.2 == m)
    }
}

struct Search<'a> {
    pts: &'a [P],
    cells: Vec<Cell>,
    by_edge: HashMap<(usize, usize), Vec<usize>>,
    outer: Vec<usize>,
    compat: HashMap<(usize, usize), bool>,
    found: BTreeSet<Vec<u32>>,
}

impl Search<'_> {
    fn separated(&self, p: &Cell, q: &Cell) -> bool {
        p.edges.iter().any(|&(u, v, _)| q.ring.iter().all(|&w| cross(self.pts[u], self.pts[v], self.pts[w]) <= 0))
    }

    fn compatible(&mut self, i: usize, j: usize) -> bool {
        let key = (i.min(j), i.max(j));
        if let Some(&c) = self.compat.get(&key) {
            return c;
        }
        let (p, q) = (&self.cells[i], &self.cells[j]);
        let ok = (self.separated(p, q) || self.separated(q, p)) && {
            let common = p.mask & q.mask;
            common == 0 || (p.is_face(common) && q.is_face(common))
        };
        self.compat.insert(key, ok);
        ok
    }

    fn on_boundary(&self, u: usize, v: usize) -> bool {
        let h = &self.outer;
        (0..h.len()).any(|i| {
            let (a, b) = (self.pts[h[i]], self.pts[h[(i + 1) % h.len()]]);
            cross(a, b, self.pts[u]) == 0 && cross(a, b, self.pts[v]) == 0
        })
    }

    fn place(&mut self, placed: &mut Vec<usize>, open: &BTreeSet<(usize, usize)>, c: usize) {
        if !placed.iter().all(|&p| self.compatible(p, c)) {
            return;
        }
        let mut open = open.clone();
        for &(u, v, _) in &self.cells[c].edges {
            if !open.remove(&(v, u)) && !self.on_boundary(u, v) {
                open.insert((u, v));
            }
        }
        placed.push(c);
        self.grow(placed, &open);
        placed.pop();
    }

    fn grow(&mut self, placed: &mut Vec<usize>, open: &BTreeSet<(usize, usize)>) {
        let Some(&(a, b)) = open.iter().next() else {
            let mut key: Vec<u32> = placed.iter().map(|&c| self.cells[c].mask).collect();
            key.sort_unstable();
            self.found.insert(key);
            return;
        };
        let options = self.by_edge.get(&(b, a)).cloned().unwrap_or_default();
        for c in options {
            self.place(placed, open, c);
        }
    }
}

/// All polyhedral subdivisions with geometric cells of a planar configuration,
/// given by reduced coordinates `y` (regularity not checked).
pub(super) fn complete_subdivisions(a: &SupportSet, y: &[Vec<Rat>]) -> Vec<Vec<Vec<usize>>> {
    let flat: Vec<Rat> = y.iter().flatten().cloned().collect();
    let scale = Rat::from_integer(denom_lcm(&flat));
    let pts: Vec<P> = y
        .iter()
        .map(|v| {
            let c = |x: &Rat| (x * &scale).to_integer().to_i128().expect("coordinates fit in i128");
            (c(&v[0]), c(&v[1]))
        })
        .collect();
    let n = a.len();
    let all: Vec<usize> = (0..n).collect();
    let outer = hull(&pts, &all);

    let mut cells = Vec::new();
    for mask in 1u32..(1 << n) {
        if mask.count_ones() < 3 {
            continue;
        }
        let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let ring = hull(&pts, &idx);
        if ring.len() < 3 {
            continue;
        }
        let closure = (0..n).filter(|&j| inside(&pts, &ring, pts[j])).fold(0u32, |m, j| m | 1 << j);
        if closure != mask {
            continue;
        }
        let edges = (0..ring.len())
            .map(|i| {
                let (u, v) = (ring[i], ring[(i + 1) % ring.len()]);
                let on = idx.iter().filter(|&&j| on_segment(pts[u], pts[v], pts[j])).fold(0u32, |m, &j| m | 1 << j);
                (u, v, on)
            })
            .collect();
        cells.push(Cell { mask, ring, edges });
    }

    let mut by_edge: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (ci, c) in cells.iter().enumerate() {
        for &(u, v, _) in &c.edges {
            by_edge.entry((u, v)).or_default().push(ci);
        }
    }

    // the cell containing the lowest point and the start of the outer edge leaving it
    let (p0, p1) = (outer[0], outer[1]);
    let starts: Vec<usize> = cells
        .iter()
        .enumerate()
        .filter(|(_, c)| {
            c.edges.iter().any(|&(u, v, _)| u == p0 && on_segment(pts[p0], pts[p1], pts[v]))
        })
        .map(|(i, _)| i)
        .collect();

    let mut search = Search { pts: &pts, cells, by_edge, outer, compat: HashMap::new(), found: BTreeSet::new() };
    for c in starts {
        search.place(&mut Vec::new(), &BTreeSet::new(), c);
    }
    search
        .found
        .into_iter()
        .map(|key| key.into_iter().map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect()).collect())
        .collect()
}
