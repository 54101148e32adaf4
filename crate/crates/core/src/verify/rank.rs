//! Exact affine rank of 0/1 point sets by fraction-free elimination.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Affine dimension of a point set with a maximal affinely independent witness.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffineRankReport {
    pub num_points: usize,
    /// `-1` for the empty set.
    pub affine_dim: isize,
    /// Indices (into the input order) of `affine_dim + 1` affinely independent points.
    pub basis_witness: Vec<usize>,
}

trait Scalar: Clone + PartialEq {
    fn from_i8(v: i8) -> Self;
    fn is_zero(&self) -> bool;
    /// `a * x - b * y`, or `None` on overflow.
    fn cross(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self>;
    fn gcd(&self, other: &Self) -> Self;
    fn div_exact(&self, d: &Self) -> Self;
    fn is_one_or_zero(&self) -> bool;
}

impl Scalar for i128 {
    fn from_i8(v: i8) -> Self {
        v.into()
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn cross(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        a.checked_mul(*x)?.checked_sub(b.checked_mul(*y)?)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
    fn is_one_or_zero(&self) -> bool {
        self.unsigned_abs() <= 1
    }
}

impl Scalar for BigInt {
    fn from_i8(v: i8) -> Self {
        v.into()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn cross(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        Some(a * x - b * y)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
    fn is_one_or_zero(&self) -> bool {
        self.abs() <= BigInt::from(1)
    }
}

struct Echelon<T> {
    /// `(pivot column, row)`; each row is zero at the pivots of earlier rows.
    rows: Vec<(usize, Vec<T>)>,
}

impl<T: Scalar> Echelon<T> {
    fn new() -> Self {
        Self { rows: Vec::new() }
    }

    /// Reduces `d` against the basis; appends it when independent.
    /// Returns `Some(true)` if the rank grew, `None` on overflow.
    fn insert(&mut self, mut d: Vec<T>) -> Option<bool> {
        for (p, row) in &self.rows {
            if d[*p].is_zero() {
                continue;
            }
            let factor = d[*p].clone();
            let lead = row[*p].clone();
            for (di, ri) in d.iter_mut().zip(row) {
                *di = T::cross(&lead, di, &factor, ri)?;
            }
            normalize(&mut d);
        }
        match d.iter().position(|x| !x.is_zero()) {
            Some(p) => {
                self.rows.push((p, d));
                Some(true)
            }
            None => Some(false),
        }
    }
}

fn normalize<T: Scalar>(d: &mut [T]) {
    let mut g: Option<T> = None;
    for x in d.iter().filter(|x| !x.is_zero()) {
        let next = match &g {
            None => x.gcd(x),
            Some(acc) => acc.gcd(x),
        };
        if next.is_one_or_zero() {
            return;
        }
        g = Some(next);
    }
    if let Some(g) = g {
        for x in d.iter_mut() {
            *x = x.div_exact(&g);
        }
    }
}

fn run<'a, T: Scalar, I>(points: I, cap: Option<usize>) -> Option<AffineRankReport>
where
    I: IntoIterator<Item = &'a [u8]>,
{
    let mut basis = Echelon::<T>::new();
    let mut witness = Vec::new();
    let mut first: Option<Vec<u8>> = None;
    let mut num_points = 0;
    for (i, p) in points.into_iter().enumerate() {
        num_points += 1;
        let Some(origin) = &first else {
            first = Some(p.to_vec());
            witness.push(i);
            continue;
        };
        if cap.is_some_and(|c| basis.rows.len() >= c) {
            continue;
        }
        let d: Vec<T> = p.iter().zip(origin).map(|(&a, &b)| T::from_i8(a as i8 - b as i8)).collect();
        if basis.insert(d)? {
            witness.push(i);
        }
    }
    let affine_dim = if first.is_some() { basis.rows.len() as isize } else { -1 };
    Some(AffineRankReport { num_points, affine_dim, basis_witness: witness })
}

/// Affine dimension of `points`, exact. Elimination stops growing the basis
/// once it reaches `cap` (points are still counted).
pub fn affine_rank<'a, I>(points: I, cap: Option<usize>) -> AffineRankReport
where
    I: IntoIterator<Item = &'a [u8]> + Clone,
{
    run::<i128, _>(points.clone(), cap)
        .or_else(|| run::<BigInt, _>(points, cap))
        .expect("arbitrary precision never overflows")
}
