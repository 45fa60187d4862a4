//! Dense subset-lattice primitives.
//!
//! Coalitions over `n` variables are bit masks: bit `i` set means variable `i`
//! is present, and a mask doubles as the index into dense `2^n` arrays. The
//! hard cap `n <= 24` keeps one lattice of doubles under 256 MiB.

use crate::error::{Error, Result};

/// Largest supported player count for dense lattices.
pub const MAX_PLAYERS: u32 = 24;

/// A coalition encoded as a bit mask together with its universe size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetMask {
    bits: u32,
    n: u8,
}

impl SubsetMask {
    pub fn new(bits: u32, n: u32) -> Result<Self> {
        check_players(n)?;
        if bits >= (1u32 << n) {
            return Err(Error::MaskOutOfRange { mask: bits, n });
        }
        Ok(SubsetMask { bits, n: n as u8 })
    }

    pub fn empty(n: u32) -> Result<Self> {
        SubsetMask::new(0, n)
    }

    pub fn full(n: u32) -> Result<Self> {
        check_players(n)?;
        Ok(SubsetMask {
            bits: (1u32 << n) - 1,
            n: n as u8,
        })
    }

    pub fn singleton(i: u32, n: u32) -> Result<Self> {
        check_players(n)?;
        if i >= n {
            return Err(Error::precondition(format!("player {i} out of range for n={n}")));
        }
        Ok(SubsetMask { bits: 1 << i, n: n as u8 })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn n(&self) -> u32 {
        self.n as u32
    }

    /// Number of members (popcount).
    pub fn order(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    /// Index of this coalition in a dense lattice array.
    pub fn index(&self) -> usize {
        self.bits as usize
    }

    pub fn contains(&self, i: u32) -> bool {
        i < self.n() && (self.bits >> i) & 1 == 1
    }

    pub fn is_subset_of(&self, other: &SubsetMask) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn is_disjoint_from(&self, other: &SubsetMask) -> bool {
        self.bits & other.bits == 0
    }

    pub fn union(&self, other: &SubsetMask) -> SubsetMask {
        debug_assert_eq!(self.n, other.n);
        SubsetMask {
            bits: self.bits | other.bits,
            n: self.n,
        }
    }

    pub fn with(&self, i: u32) -> Result<SubsetMask> {
        if i >= self.n() {
            return Err(Error::precondition(format!(
                "player {i} out of range for n={}",
                self.n
            )));
        }
        Ok(SubsetMask {
            bits: self.bits | (1 << i),
            n: self.n,
        })
    }

    pub fn without(&self, i: u32) -> SubsetMask {
        SubsetMask {
            bits: self.bits & !(1u32 << i.min(31)),
            n: self.n,
        }
    }

    pub fn complement(&self) -> SubsetMask {
        SubsetMask {
            bits: !self.bits & ((1u32 << self.n) - 1),
            n: self.n,
        }
    }

    /// Member indices in ascending order.
    pub fn members(&self) -> impl Iterator<Item = u32> {
        let mut rest = self.bits;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let i = rest.trailing_zeros();
                rest &= rest - 1;
                Some(i)
            }
        })
    }

    /// All subsets of this coalition (including the empty set and itself),
    /// in ascending mask order.
    pub fn subsets(&self) -> impl Iterator<Item = SubsetMask> {
        let n = self.n;
        submasks(self.bits).map(move |bits| SubsetMask { bits, n })
    }
}

impl std::fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#b}", self.bits)
    }
}

/// Enumerate all submasks of `mask` in ascending numeric order.
///
/// Uses the carry-ripple trick: `t -> (t - mask) & mask` walks the subset
/// lattice of `mask` in increasing order, starting from the empty set.
pub fn submasks(mask: u32) -> impl Iterator<Item = u32> {
    let mut next = Some(0u32);
    std::iter::from_fn(move || {
        let cur = next?;
        let stepped = cur.wrapping_sub(mask) & mask;
        next = if stepped == 0 { None } else { Some(stepped) };
        Some(cur)
    })
}

fn check_players(n: u32) -> Result<()> {
    if n == 0 || n > MAX_PLAYERS {
        Err(Error::PlayerCountOutOfRange { n, max: MAX_PLAYERS })
    } else {
        Ok(())
    }
}

/// A dense array of doubles indexed by coalition mask (length `2^n`).
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeArray {
    n: u8,
    data: Vec<f64>,
}

impl LatticeArray {
    pub fn new(n: u32, data: Vec<f64>) -> Result<Self> {
        check_players(n)?;
        let expected = 1usize << n;
        if data.len() != expected {
            return Err(Error::LengthMismatch {
                n,
                expected,
                got: data.len(),
            });
        }
        if let Some(bad) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: format!("lattice entry for mask {bad:#b}"),
            });
        }
        Ok(LatticeArray { n: n as u8, data })
    }

    pub fn zeros(n: u32) -> Result<Self> {
        check_players(n)?;
        Ok(LatticeArray {
            n: n as u8,
            data: vec![0.0; 1 << n],
        })
    }

    /// Build by evaluating `f` on every mask in ascending order.
    pub fn from_fn(n: u32, mut f: impl FnMut(SubsetMask) -> f64) -> Result<Self> {
        check_players(n)?;
        let data: Vec<f64> = (0..1u32 << n)
            .map(|bits| f(SubsetMask { bits, n: n as u8 }))
            .collect();
        LatticeArray::new(n, data)
    }

    pub fn n(&self) -> u32 {
        self.n as u32
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        false // length is always 2^n >= 2
    }

    pub fn get(&self, mask: SubsetMask) -> f64 {
        debug_assert_eq!(mask.n(), self.n());
        self.data[mask.index()]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Reference magnitude for relative tolerance checks: `max(1, max|entry|)`.
    pub fn scale(&self) -> f64 {
        self.max_abs().max(1.0)
    }

    /// In-place subset Möbius transform (inverse of [`LatticeArray::zeta_in_place`]).
    ///
    /// After the sweep, entry `S` holds the alternating subset sum
    /// `sum_{T ⊆ S} (-1)^{|S|-|T|} a[T]`. One pass per bit, O(n·2^n).
    pub fn mobius_in_place(&mut self) {
        let mut stride = 1usize;
        while stride < self.data.len() {
            for block in self.data.chunks_exact_mut(stride * 2) {
                let (lo, hi) = block.split_at_mut(stride);
                for (h, l) in hi.iter_mut().zip(lo.iter()) {
                    *h -= *l;
                }
            }
            stride <<= 1;
        }
    }

    /// In-place subset zeta transform: entry `S` becomes `sum_{T ⊆ S} a[T]`.
    pub fn zeta_in_place(&mut self) {
        let mut stride = 1usize;
        while stride < self.data.len() {
            for block in self.data.chunks_exact_mut(stride * 2) {
                let (lo, hi) = block.split_at_mut(stride);
                for (h, l) in hi.iter_mut().zip(lo.iter()) {
                    *h += *l;
                }
            }
            stride <<= 1;
        }
    }
}

impl std::ops::Index<usize> for LatticeArray {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.data[i]
    }
}

/// Alternating subset sums of the whole lattice: `out[S] = sum_{T ⊆ S} (-1)^{|S|-|T|} a[T]`.
pub fn mobius_transform(values: &LatticeArray) -> LatticeArray {
    let mut out = values.clone();
    out.mobius_in_place();
    out
}

/// Subset sums of the whole lattice: `out[S] = sum_{T ⊆ S} a[T]`.
pub fn zeta_transform(values: &LatticeArray) -> LatticeArray {
    let mut out = values.clone();
    out.zeta_in_place();
    out
}

/// Exact binomial coefficient `C(n, k)` for `n <= 64`; `0` when `k > n`.
pub fn binomial(n: u32, k: u32) -> Result<u64> {
    if n > 64 {
        return Err(Error::BinomialRange { n });
    }
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // C(n, i+1) = C(n, i) * (n - i) / (i + 1); the division is exact.
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    Ok(acc as u64)
}

/// `C(n, k)` as a double, for weight computations.
pub fn binomial_f64(n: u32, k: u32) -> Result<f64> {
    Ok(binomial(n, k)? as f64)
}

/// All coalitions of exactly `k` members out of `n`, in ascending mask order.
pub fn subsets_of_size(n: u32, k: u32) -> Result<Vec<SubsetMask>> {
    check_players(n)?;
    if k > n {
        return Err(Error::precondition(format!(
            "subset size k={k} exceeds n={n}"
        )));
    }
    if k == 0 {
        return Ok(vec![SubsetMask::empty(n)?]);
    }
    let limit = 1u32 << n;
    let mut out = Vec::with_capacity(binomial(n, k)? as usize);
    // Gosper's hack: next larger integer with the same popcount.
    let mut v: u32 = (1 << k) - 1;
    while v < limit {
        out.push(SubsetMask { bits: v, n: n as u8 });
        let t = v | (v - 1);
        v = (t + 1) | (((!t & t.wrapping_add(1)) - 1) >> (v.trailing_zeros() + 1));
    }
    Ok(out)
}
