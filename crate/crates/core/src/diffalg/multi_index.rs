use std::cmp::Ordering;
use std::fmt;

/// Largest number of independent variables supported by the fixed-width index.
pub const MAX_DIM: usize = 4;

/// A multi-index `(i_1, ..., i_D)` of non-negative integers.
///
/// Stored inline so jet variables stay `Copy`. Ordering is graded
/// lexicographic: first by total order `|I|`, then entrywise.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    dim: u8,
    entries: [u8; MAX_DIM],
}

impl MultiIndex {
    pub fn zero(dim: usize) -> Self {
        assert!(dim <= MAX_DIM, "dimension {dim} exceeds MAX_DIM = {MAX_DIM}");
        MultiIndex {
            dim: dim as u8,
            entries: [0; MAX_DIM],
        }
    }

    pub fn new(entries: &[u32]) -> Self {
        let mut out = MultiIndex::zero(entries.len());
        for (slot, &e) in out.entries.iter_mut().zip(entries) {
            *slot = u8::try_from(e).expect("multi-index entry exceeds 255");
        }
        out
    }

    /// The unit index `e_k` (0-based direction).
    pub fn unit(dim: usize, k: usize) -> Self {
        let mut out = MultiIndex::zero(dim);
        out.entries[k] = 1;
        out
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn get(&self, k: usize) -> u32 {
        self.entries[k] as u32
    }

    pub fn entries(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries[..self.dim()].iter().map(|&e| e as u32)
    }

    /// Total order `|I|`.
    pub fn order(&self) -> u32 {
        self.entries().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.order() == 0
    }

    pub fn raised(&self, k: usize) -> Self {
        let mut out = *self;
        out.entries[k] = out.entries[k].checked_add(1).expect("multi-index overflow");
        out
    }

    pub fn lowered(&self, k: usize) -> Option<Self> {
        let mut out = *self;
        out.entries[k] = out.entries[k].checked_sub(1)?;
        Some(out)
    }

    pub fn checked_sub(&self, other: &MultiIndex) -> Option<Self> {
        debug_assert_eq!(self.dim, other.dim);
        let mut out = *self;
        for k in 0..self.dim() {
            out.entries[k] = self.entries[k].checked_sub(other.entries[k])?;
        }
        Some(out)
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &MultiIndex) -> bool {
        (0..self.dim()).all(|k| self.entries[k] <= other.entries[k])
    }

    /// All indices `J` with `J <= self` componentwise.
    pub fn sub_indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex::zero(self.dim())];
        for k in 0..self.dim() {
            let mut next = Vec::with_capacity(out.len() * (self.entries[k] as usize + 1));
            for base in &out {
                for e in 0..=self.entries[k] {
                    let mut idx = *base;
                    idx.entries[k] = e;
                    next.push(idx);
                }
            }
            out = next;
        }
        out
    }

    /// All indices of total order exactly `order` in `dim` variables, in
    /// ascending graded-lex order.
    pub fn all_of_order(dim: usize, order: u32) -> Vec<MultiIndex> {
        fn rec(dim: usize, k: usize, left: u32, cur: &mut [u32], out: &mut Vec<MultiIndex>) {
            if k + 1 == dim {
                cur[k] = left;
                out.push(MultiIndex::new(cur));
                return;
            }
            for e in 0..=left {
                cur[k] = e;
                rec(dim, k + 1, left - e, cur, out);
            }
        }
        if dim == 0 {
            return if order == 0 { vec![MultiIndex::zero(0)] } else { vec![] };
        }
        let mut out = Vec::new();
        rec(dim, 0, order, &mut vec![0; dim], &mut out);
        out.sort();
        out
    }

    /// Product of binomial coefficients `prod_k C(self_k, sub_k)`.
    pub fn binomial(&self, sub: &MultiIndex) -> u64 {
        (0..self.dim())
            .map(|k| binomial(self.entries[k] as u64, sub.entries[k] as u64))
            .product()
    }

    /// The index written as a digit string of directions, e.g. `(2,1)` -> `"112"`.
    pub fn direction_digits(&self) -> String {
        let mut s = String::new();
        for k in 0..self.dim() {
            for _ in 0..self.entries[k] {
                s.push_str(&(k + 1).to_string());
            }
        }
        s
    }
}

impl std::ops::Add for MultiIndex {
    type Output = MultiIndex;

    fn add(self, rhs: MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.dim, rhs.dim);
        let mut out = self;
        for k in 0..self.dim() {
            out.entries[k] += rhs.entries[k];
        }
        out
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dim
            .cmp(&other.dim)
            .then_with(|| self.order().cmp(&other.order()))
            .then_with(|| self.entries.cmp(&other.entries))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, e) in self.entries().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")
    }
}

pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}
