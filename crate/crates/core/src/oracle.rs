//! Exhaustive enumeration of equitable colorings.
//!
//! The oracle is the ground truth for the infeasible-color set `A(G)`, the
//! equitable chromatic number, inequality validity and every affine-rank
//! computation. It lists labeled colorings (color permutations are distinct)
//! and refuses instances above a configurable vertex cap.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use crate::graph::{Graph, Vertex, VertexSet};
use crate::row::{CutRow, Vars};
use crate::{Error, Result};

pub const DEFAULT_ENUMERATION_CAP: usize = 14;

/// A proper coloring with classes of size `⌊n/k⌋` or `⌈n/k⌉`, using every
/// color `1..=k`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct EquitableColoring {
    colors: Vec<u16>,
    k: usize,
}

impl EquitableColoring {
    /// Validates `colors[v - 1]` (1-based colors) against `g`.
    pub fn new(g: &Graph, colors: Vec<usize>) -> Result<Self> {
        if colors.len() != g.n() {
            return Err(Error::LengthMismatch { expected: g.n(), found: colors.len() });
        }
        let k = colors.iter().copied().max().unwrap_or(0);
        if let Some(&bad) = colors.iter().find(|&&c| c == 0 || c > g.n()) {
            return Err(Error::ColorOutOfRange { color: bad, max: g.n() });
        }
        for (u, v) in g.edges() {
            if colors[u - 1] == colors[v - 1] {
                return Err(Error::Parameter(format!("adjacent vertices {u} and {v} share color {}", colors[u - 1])));
            }
        }
        let mut sizes = vec![0usize; k];
        for &c in &colors {
            sizes[c - 1] += 1;
        }
        if !sizes_are_equitable(g.n(), &sizes) {
            return Err(Error::Parameter(format!("class sizes {sizes:?} are not equitable")));
        }
        Ok(Self { colors: colors.into_iter().map(|c| c as u16).collect(), k })
    }

    #[inline]
    pub fn color_of(&self, v: Vertex) -> usize {
        usize::from(self.colors[v - 1])
    }

    /// Number of colors used.
    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.colors.len()
    }

    pub fn colors(&self) -> impl Iterator<Item = usize> + '_ {
        self.colors.iter().map(|&c| usize::from(c))
    }

    /// Color class `C_j` (empty for `j > k`).
    pub fn class(&self, j: usize) -> VertexSet {
        (1..=self.n()).filter(|&v| self.color_of(v) == j).collect()
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &c in &self.colors {
            sizes[usize::from(c) - 1] += 1;
        }
        sizes
    }

    /// Relabels colors so that classes are ordered by their smallest vertex.
    pub fn canonical(&self) -> Self {
        let mut map = vec![0u16; self.k + 1];
        let mut next = 0u16;
        let colors = self
            .colors
            .iter()
            .map(|&c| {
                if map[usize::from(c)] == 0 {
                    next += 1;
                    map[usize::from(c)] = next;
                }
                map[usize::from(c)]
            })
            .collect();
        Self { colors, k: self.k }
    }

    /// Applies `perm[j - 1]` as the new label of color `j`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let colors = self.colors.iter().map(|&c| perm[usize::from(c) - 1] as u16).collect();
        Self { colors, k: self.k }
    }

    pub fn to_vector(&self) -> EqcolVector {
        EqcolVector::from_coloring(self)
    }
}

/// True when `sizes` (one per color, all present) are within one of each
/// other at `⌊n/k⌋..=⌈n/k⌉`.
pub fn sizes_are_equitable(n: usize, sizes: &[usize]) -> bool {
    let k = sizes.len();
    if k == 0 {
        return n == 0;
    }
    let lo = n / k;
    let hi = n.div_ceil(k);
    sizes.iter().all(|&s| s >= lo && s <= hi && s > 0) && sizes.iter().sum::<usize>() == n
}

/// The 0/1 vector `(x_{1,1..n}, ..., x_{n,1..n}, w_{1..n})` of a coloring.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct EqcolVector {
    n: usize,
    bits: Vec<u8>,
}

impl EqcolVector {
    pub fn from_coloring(c: &EquitableColoring) -> Self {
        let n = c.n();
        let vars = Vars::new(n);
        let mut bits = vec![0u8; vars.len()];
        for v in 1..=n {
            bits[vars.x(v, c.color_of(v)).0] = 1;
        }
        for j in 1..=c.k() {
            bits[vars.w(j).0] = 1;
        }
        Self { n, bits }
    }

    /// Wraps a raw vector; length must be `n² + n`.
    pub fn from_bits(n: usize, bits: Vec<u8>) -> Result<Self> {
        let expected = n * n + n;
        if bits.len() != expected {
            return Err(Error::LengthMismatch { expected, found: bits.len() });
        }
        Ok(Self { n, bits })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.bits
    }

    /// Decodes the vector back into a coloring, if it encodes a valid one.
    pub fn decode(&self, g: &Graph) -> Result<EquitableColoring> {
        let vars = Vars::new(self.n);
        let mut colors = vec![0usize; self.n];
        for (v, slot) in colors.iter_mut().enumerate() {
            let v = v + 1;
            let used: Vec<usize> = (1..=self.n).filter(|&j| self.bits[vars.x(v, j).0] == 1).collect();
            match used[..] {
                [j] => *slot = j,
                _ => return Err(Error::Parameter(format!("vertex {v} has {} colors", used.len()))),
            }
        }
        let c = EquitableColoring::new(g, colors)?;
        let w_ok = (1..=self.n).all(|j| self.bits[vars.w(j).0] == u8::from(j <= c.k()));
        if !w_ok {
            return Err(Error::Parameter("w does not match the colors in use".into()));
        }
        Ok(c)
    }
}

/// A primitive condition on a `k`-eqcol, used by existence queries.
#[derive(Clone, Debug)]
pub enum Predicate {
    /// `|C_color ∩ set| = count`.
    ClassMeets { color: usize, set: VertexSet, count: usize },
    /// `C_color = set`.
    ClassEquals { color: usize, set: VertexSet },
    InClass { v: Vertex, color: usize },
    NotInClass { v: Vertex, color: usize },
    /// The row holds with equality.
    Tight(CutRow),
}

impl Predicate {
    fn color(&self) -> Option<usize> {
        match self {
            Predicate::ClassMeets { color, .. }
            | Predicate::ClassEquals { color, .. }
            | Predicate::InClass { color, .. }
            | Predicate::NotInClass { color, .. } => Some(*color),
            Predicate::Tight(_) => None,
        }
    }

    pub fn holds(&self, c: &EquitableColoring) -> bool {
        match self {
            Predicate::ClassMeets { color, set, count } => {
                set.iter().filter(|&v| c.color_of(v) == *color).count() == *count
            }
            Predicate::ClassEquals { color, set } => {
                (1..=c.n()).all(|v| (c.color_of(v) == *color) == set.contains(v))
            }
            Predicate::InClass { v, color } => c.color_of(*v) == *color,
            Predicate::NotInClass { v, color } => c.color_of(*v) != *color,
            Predicate::Tight(row) => row.tight_at(Vars::new(c.n()), c),
        }
    }
}

/// Enumeration front end carrying the vertex cap.
#[derive(Clone, Copy, Debug)]
pub struct Oracle {
    pub cap: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Self { cap: DEFAULT_ENUMERATION_CAP }
    }
}

impl Oracle {
    pub fn with_cap(cap: usize) -> Self {
        Self { cap }
    }

    fn check(&self, g: &Graph) -> Result<()> {
        if g.n() > self.cap {
            return Err(Error::EnumerationCap { n: g.n(), cap: self.cap });
        }
        Ok(())
    }

    /// Calls `f` on every labeled `k`-eqcol until it breaks.
    pub fn for_each_eqcol<F>(&self, g: &Graph, k: usize, f: F) -> Result<ControlFlow<()>>
    where
        F: FnMut(&EquitableColoring) -> ControlFlow<()>,
    {
        self.check(g)?;
        if k == 0 || k > g.n() {
            return Err(Error::ColorOutOfRange { color: k, max: g.n() });
        }
        Ok(Backtrack::new(g, k).run(f))
    }

    /// All labeled `k`-eqcols.
    pub fn enumerate_eqcols(&self, g: &Graph, k: usize) -> Result<Vec<EquitableColoring>> {
        let mut out = Vec::new();
        let _ = self.for_each_eqcol(g, k, |c| {
            out.push(c.clone());
            ControlFlow::Continue(())
        })?;
        Ok(out)
    }

    pub fn has_eqcol(&self, g: &Graph, k: usize) -> Result<bool> {
        Ok(self.for_each_eqcol(g, k, |_| ControlFlow::Break(()))?.is_break())
    }

    /// `A(G)`: the `k ∈ 1..=n` admitting no `k`-eqcol.
    pub fn infeasible_k_set(&self, g: &Graph) -> Result<BTreeSet<usize>> {
        let mut out = BTreeSet::new();
        for k in 1..=g.n() {
            if !self.has_eqcol(g, k)? {
                out.insert(k);
            }
        }
        Ok(out)
    }

    /// Minimum `k` with a `k`-eqcol.
    pub fn chi_eq_exact(&self, g: &Graph) -> Result<usize> {
        for k in 1..=g.n() {
            if self.has_eqcol(g, k)? {
                return Ok(k);
            }
        }
        Ok(g.n())
    }

    /// A `k`-eqcol satisfying every predicate, if one exists.
    pub fn exists_eqcol_matching(
        &self,
        g: &Graph,
        k: usize,
        spec: &[Predicate],
    ) -> Result<Option<EquitableColoring>> {
        validate_predicates(k, spec)?;
        let mut found = None;
        let _ = self.for_each_eqcol(g, k, |c| {
            if spec.iter().all(|p| p.holds(c)) {
                found = Some(c.clone());
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })?;
        Ok(found)
    }
}

fn validate_predicates(k: usize, spec: &[Predicate]) -> Result<()> {
    for p in spec {
        if let Some(color) = p.color() {
            if color == 0 || color > k {
                return Err(Error::Parameter(format!("predicate color {color} outside 1..={k}")));
            }
        }
    }
    Ok(())
}

/// Depth-first assignment of vertices in index order, bounding each class by
/// `⌈n/k⌉`, limiting the number of classes at the ceiling to `n mod k`, and
/// pruning when the remaining vertices cannot lift every class to `⌊n/k⌋`.
struct Backtrack<'g> {
    g: &'g Graph,
    k: usize,
    lo: usize,
    hi: usize,
    /// How many classes may reach `hi` when `hi > lo`.
    big_allowed: usize,
    big: usize,
    counts: Vec<usize>,
    colors: Vec<u16>,
    earlier: Vec<Vec<usize>>,
    current: EquitableColoring,
}

impl<'g> Backtrack<'g> {
    fn new(g: &'g Graph, k: usize) -> Self {
        let n = g.n();
        let earlier = (1..=n).map(|v| g.neighbors(v).iter().filter(|&u| u < v).map(|u| u - 1).collect()).collect();
        Self {
            g,
            k,
            lo: n / k,
            hi: n.div_ceil(k),
            big_allowed: n % k,
            big: 0,
            counts: vec![0; k],
            colors: vec![0; n],
            earlier,
            current: EquitableColoring { colors: vec![0; n], k },
        }
    }

    fn run<F: FnMut(&EquitableColoring) -> ControlFlow<()>>(mut self, mut f: F) -> ControlFlow<()> {
        self.step(0, &mut f)
    }

    fn step<F: FnMut(&EquitableColoring) -> ControlFlow<()>>(&mut self, i: usize, f: &mut F) -> ControlFlow<()> {
        let n = self.g.n();
        if i == n {
            self.current.colors.copy_from_slice(&self.colors);
            return f(&self.current);
        }
        let remaining = n - i;
        let deficit: usize = self.counts.iter().map(|&c| self.lo.saturating_sub(c)).sum();
        if deficit > remaining {
            return ControlFlow::Continue(());
        }
        for c in 0..self.k {
            let count = self.counts[c];
            if count == self.hi {
                continue;
            }
            let makes_big = self.hi > self.lo && count + 1 == self.hi;
            if makes_big && self.big == self.big_allowed {
                continue;
            }
            if self.earlier[i].iter().any(|&u| usize::from(self.colors[u]) == c + 1) {
                continue;
            }
            // Filling a class below `lo` is free; otherwise a spare vertex is consumed.
            if count >= self.lo && deficit == remaining {
                continue;
            }
            self.colors[i] = (c + 1) as u16;
            self.counts[c] += 1;
            self.big += usize::from(makes_big);
            let flow = self.step(i + 1, f);
            self.big -= usize::from(makes_big);
            self.counts[c] -= 1;
            self.colors[i] = 0;
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// Every eqcol of a graph, grouped by number of colors.
#[derive(Clone, Debug)]
pub struct EqcolCatalog {
    n: usize,
    by_k: Vec<Vec<EquitableColoring>>,
}

impl EqcolCatalog {
    pub fn build(g: &Graph, oracle: &Oracle) -> Result<Self> {
        let by_k = (1..=g.n()).map(|k| oracle.enumerate_eqcols(g, k)).collect::<Result<_>>()?;
        Ok(Self { n: g.n(), by_k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vars(&self) -> Vars {
        Vars::new(self.n)
    }

    pub fn of_k(&self, k: usize) -> &[EquitableColoring] {
        &self.by_k[k - 1]
    }

    pub fn iter(&self) -> impl Iterator<Item = &EquitableColoring> {
        self.by_k.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.by_k.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn infeasible_k_set(&self) -> BTreeSet<usize> {
        (1..=self.n).filter(|&k| self.by_k[k - 1].is_empty()).collect()
    }

    pub fn is_feasible_k(&self, k: usize) -> bool {
        (1..=self.n).contains(&k) && !self.by_k[k - 1].is_empty()
    }

    pub fn chi_eq(&self) -> usize {
        (1..=self.n).find(|&k| self.is_feasible_k(k)).unwrap_or(self.n)
    }

    pub fn find(&self, k: usize, spec: &[Predicate]) -> Result<Option<&EquitableColoring>> {
        if k == 0 || k > self.n {
            return Err(Error::ColorOutOfRange { color: k, max: self.n });
        }
        validate_predicates(k, spec)?;
        Ok(self.of_k(k).iter().find(|c| spec.iter().all(|p| p.holds(c))))
    }

    /// An eqcol with any number of colors satisfying `spec`; predicate
    /// colors above a coloring's `k` are evaluated on the empty class.
    pub fn find_any(&self, spec: &[Predicate]) -> Option<&EquitableColoring> {
        self.iter().find(|c| spec.iter().all(|p| p.holds(c)))
    }

    /// True when every eqcol satisfies `row`.
    pub fn is_valid(&self, row: &CutRow) -> bool {
        let vars = self.vars();
        self.iter().all(|c| row.satisfied_by(vars, c))
    }

    /// True when every canonically labelled eqcol satisfies `row`; the test
    /// for rows that only cut off symmetric copies.
    pub fn is_valid_for_canonical(&self, row: &CutRow) -> bool {
        let vars = self.vars();
        self.iter().filter(|c| **c == c.canonical()).all(|c| row.satisfied_by(vars, c))
    }
}
