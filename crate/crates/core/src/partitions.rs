//! Integer partitions: the index set of every Jack/zonal object.
//!
//! A [`Partition`] is stored without trailing zeros, so `(2,1)` and
//! `(2,1,0,0)` are the same value and hash to the same cache key.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, ZonalError};
use crate::scalar::Field;

#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

/// A cell of a Young diagram, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellPosition {
    pub row: usize,
    pub column: usize,
}

impl Partition {
    /// Builds a partition, sorting the parts into weakly decreasing order.
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition { parts }
    }

    /// Builds a partition from parts that must already be weakly decreasing.
    pub fn try_from_parts(parts: &[usize]) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(ZonalError::InvalidParameter(format!(
                "partition parts {parts:?} are not weakly decreasing"
            )));
        }
        Ok(Partition::new(parts.to_vec()))
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// Single row `(n)`.
    pub fn row(n: usize) -> Self {
        Partition::new(vec![n])
    }

    /// Single column `(1^n)`.
    pub fn column(n: usize) -> Self {
        Partition::new(vec![1; n])
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Part `i` (0-based), zero beyond the length.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of nonzero parts.
    pub fn length(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.part(0);
        let parts = (1..=first)
            .map(|j| self.parts.iter().take_while(|&&p| p >= j).count())
            .collect();
        Partition { parts }
    }

    /// Whether the diagram fits in a box of `max_parts` rows and `max_part` columns.
    pub fn fits_in_box(&self, max_part: usize, max_parts: usize) -> bool {
        self.length() <= max_parts && self.part(0) <= max_part
    }

    /// Dominance order: `self <= other` iff all partial sums of `self` are
    /// bounded by those of `other`. Only meaningful for equal weights.
    pub fn dominated_by(&self, other: &Partition) -> bool {
        let n = self.length().max(other.length());
        let (mut a, mut b) = (0usize, 0usize);
        for i in 0..n {
            a += self.part(i);
            b += other.part(i);
            if a > b {
                return false;
            }
        }
        true
    }

    /// Partition with every part doubled, `2κ`.
    pub fn doubled_parts(&self) -> Partition {
        Partition::new(self.parts.iter().map(|p| 2 * p).collect())
    }

    /// Partition with every part repeated, `κ²`.
    pub fn repeated_parts(&self) -> Partition {
        Partition::new(self.parts.iter().flat_map(|&p| [p, p]).collect())
    }

    /// Complement inside the `(max_part)^rows` box, read as a partition:
    /// `(max_part - κ_rows, ..., max_part - κ_1)`.
    pub fn complement_in_box(&self, max_part: usize, rows: usize) -> Partition {
        debug_assert!(self.fits_in_box(max_part, rows));
        Partition::new((0..rows).map(|i| max_part - self.part(i)).collect())
    }

    pub fn cells(&self) -> impl Iterator<Item = CellPosition> + '_ {
        self.parts.iter().enumerate().flat_map(|(i, &p)| {
            (1..=p).map(move |j| CellPosition { row: i + 1, column: j })
        })
    }

    /// Arm length `κ_i - j` of a cell.
    pub fn arm(&self, s: CellPosition) -> usize {
        self.part(s.row - 1) - s.column
    }

    /// Leg length `κ'_j - i` of a cell.
    pub fn leg(&self, s: CellPosition) -> usize {
        self.parts.iter().take_while(|&&p| p >= s.column).count() - s.row
    }
}

impl From<Vec<usize>> for Partition {
    fn from(parts: Vec<usize>) -> Self {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "()");
        }
        let body: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", body.join(","))
    }
}

/// Graded order: by weight, then lexicographically descending within a weight.
impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| other.parts.cmp(&self.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Number of partitions in the `max_parts × max_part` box, `C(max_part + max_parts, max_parts)`,
/// saturating at `u64::MAX`.
pub fn box_size(max_part: usize, max_parts: usize) -> u64 {
    let total = (max_part + max_parts) as u128;
    let r = max_parts.min(max_part) as u128;
    let mut c: u128 = 1;
    for i in 1..=r {
        c = c * (total - r + i) / i;
        if c > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    c as u64
}

/// Every partition with at most `max_parts` parts, each at most `max_part`,
/// in graded-lex order (weight ascending, lex descending inside a weight).
pub fn enumerate_in_box(max_part: usize, max_parts: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(max_parts);
    fill_box(max_part, max_parts, &mut current, &mut out);
    out.sort();
    out
}

fn fill_box(bound: usize, slots: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
    out.push(Partition::new(current.clone()));
    if slots == 0 {
        return;
    }
    for p in 1..=bound {
        current.push(p);
        fill_box(p, slots - 1, current, out);
        current.pop();
    }
}

/// All partitions of `n`, lexicographically descending.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    partitions_rec(n, n, &mut current, &mut out);
    out
}

fn partitions_rec(rest: usize, bound: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition::new(current.clone()));
        return;
    }
    for p in (1..=bound.min(rest)).rev() {
        current.push(p);
        partitions_rec(rest - p, p, current, out);
        current.pop();
    }
}

/// `(h'_κ, h_κ)` over an arbitrary field, used by both the float and exact paths.
pub fn hook_products_in<T: Field>(kappa: &Partition, alpha: &T) -> (T, T) {
    let mut upper = T::one();
    let mut lower = T::one();
    for s in kappa.cells() {
        let a = T::from_i64(kappa.arm(s) as i64);
        let l = T::from_i64(kappa.leg(s) as i64);
        upper = upper * (alpha.clone() * (a.clone() + T::one()) + l.clone());
        lower = lower * (alpha.clone() * a + l + T::one());
    }
    (upper, lower)
}

/// Upper and lower hook products `(h'_κ, h_κ)` at parameter `alpha`.
pub fn hook_products(kappa: &Partition, alpha: f64) -> Result<(f64, f64)> {
    if !(alpha > 0.0) {
        return Err(ZonalError::NonPositiveAlpha(alpha));
    }
    Ok(hook_products_in(kappa, &alpha))
}
