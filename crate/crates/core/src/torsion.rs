//! Finite subgroups of the p-divisible torus `(Q_p/Z_p)^n` and formal sums
//! of them.
//!
//! A subgroup `H` is stored through its annihilator `Λ_H ⊆ Z^n`, the
//! lattice of characters vanishing on `H`. Any isogeny `A` with kernel `H`
//! satisfies `A^T Z^n + p^k Z^n = Λ_H`, and the canonical such isogeny is
//! `B_H^T` where `B_H` is the Hermite basis of `Λ_H`. Then
//! `H = (B_H^T)^{-1} Z^n / Z^n`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lattice::{self, IntMatrix, LatticeBasis};

/// A finite subgroup of `(Q_p/Z_p)^n` in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorsionSubgroup {
    log_order: u32,
    lattice: LatticeBasis,
}

impl TorsionSubgroup {
    pub fn trivial(p: u64, n: usize) -> Self {
        TorsionSubgroup {
            log_order: 0,
            lattice: LatticeBasis::from_hnf(p, IntMatrix::identity(n)),
        }
    }

    /// The `p^k`-torsion `(p^{-k} Z^n)/Z^n`.
    pub fn full_torsion(p: u64, n: usize, k: u32) -> Self {
        let pk = i64::try_from(p.pow(k)).expect("p^k fits in i64");
        TorsionSubgroup {
            log_order: k * n as u32,
            lattice: LatticeBasis::from_hnf(p, IntMatrix::scalar(n, pk)),
        }
    }

    /// The subgroup whose annihilator is the given lattice. The index must
    /// be a power of `p`.
    pub fn from_annihilator(lattice: LatticeBasis) -> Result<Self> {
        let index = lattice.index();
        let log_order = lattice::valuation(&index, lattice.p());
        if num_traits::pow(BigInt::from(lattice.p()), log_order as usize) != index {
            return Err(Error::NotASubgroup);
        }
        Ok(TorsionSubgroup { log_order, lattice })
    }

    pub fn p(&self) -> u64 {
        self.lattice.p()
    }

    pub fn n(&self) -> usize {
        self.lattice.dim()
    }

    /// `log_p |H|`.
    pub fn log_order(&self) -> u32 {
        self.log_order
    }

    pub fn order(&self) -> u64 {
        self.p().pow(self.log_order)
    }

    pub fn is_trivial(&self) -> bool {
        self.log_order == 0
    }

    /// Hermite basis of `Λ_H = {λ ∈ Z^n : λ·h ∈ Z_p for all h ∈ H}`.
    pub fn annihilator_lattice(&self) -> &LatticeBasis {
        &self.lattice
    }

    /// The canonical isogeny with kernel `H`, namely `B_H^T`.
    pub fn canonical_isogeny_matrix(&self) -> IntMatrix {
        self.lattice.basis().transpose()
    }

    /// Columns of `(B_H^T)^{-1}`; their classes mod `Z^n` generate `H`.
    pub fn generators(&self) -> Vec<Vec<BigRational>> {
        let a = self.canonical_isogeny_matrix();
        let det = a.det();
        let adj = a.adjugate();
        (0..self.n())
            .map(|j| {
                (0..self.n())
                    .map(|i| reduce_unit_interval(BigRational::new(adj.get(i, j).clone(), det.clone())))
                    .collect()
            })
            .collect()
    }

    /// Whether the torsion point `h` (coordinates in `Q`, taken mod `Z`)
    /// lies in `H`.
    pub fn contains(&self, h: &[BigRational]) -> bool {
        self.lattice.basis().columns().iter().all(|col| {
            let pairing: BigRational = col
                .iter()
                .zip(h)
                .map(|(l, x)| BigRational::from_integer(l.clone()) * x)
                .sum();
            pairing.is_integer()
        })
    }

    /// Canonical form of `γ(H)` for a nonsingular integer matrix `γ`.
    pub fn image(&self, gamma: &IntMatrix) -> Result<TorsionSubgroup> {
        if gamma.det().is_zero() {
            return Err(Error::SingularMatrix);
        }
        // λ ∈ Λ_{γH} iff γ^T λ ∈ Λ_H
        TorsionSubgroup::from_annihilator(lattice::preimage(&gamma.transpose(), &self.lattice)?)
    }
}

impl fmt::Display for TorsionSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H{}", self.lattice.basis())
    }
}

fn reduce_unit_interval(x: BigRational) -> BigRational {
    let fl = x.floor();
    x - fl
}

/// Free function form of [`TorsionSubgroup::annihilator_lattice`].
pub fn annihilator_lattice(h: &TorsionSubgroup) -> LatticeBasis {
    h.annihilator_lattice().clone()
}

/// Free function form of [`TorsionSubgroup::image`].
pub fn image_subgroup(gamma: &IntMatrix, h: &TorsionSubgroup) -> Result<TorsionSubgroup> {
    h.image(gamma)
}

/// All subgroups of order `p^k`, in lexicographic order of their Hermite
/// bases.
///
/// Index-`p^k` lattices correspond to Hermite matrices with diagonal
/// `p^{a_1}, ..., p^{a_n}` summing to `k` and free entries right of each
/// pivot.
pub fn enumerate_subgroups(p: u64, n: usize, k: u32) -> Vec<TorsionSubgroup> {
    let mut out = Vec::new();
    for exps in compositions(k, n) {
        let pivots: Vec<i64> = exps.iter().map(|&a| p.pow(a) as i64).collect();
        // Free positions (i, j) with j > i, ranging over [0, pivot_i).
        let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let mut values = vec![0i64; slots.len()];
        loop {
            let mut m = IntMatrix::diagonal(&pivots);
            for (&(i, j), &v) in slots.iter().zip(&values) {
                m.set(i, j, BigInt::from(v));
            }
            out.push(TorsionSubgroup {
                log_order: k,
                lattice: LatticeBasis::from_hnf(p, m),
            });
            if !advance(&mut values, |s| pivots[slots[s].0]) {
                break;
            }
        }
    }
    out.sort();
    out
}

/// All subgroups of order at most `p^bound`.
pub fn enumerate_subgroups_up_to(p: u64, n: usize, bound: u32) -> Vec<TorsionSubgroup> {
    (0..=bound).flat_map(|k| enumerate_subgroups(p, n, k)).collect()
}

/// Odometer step over `0 <= values[s] < radix(s)`; false once exhausted.
fn advance(values: &mut [i64], radix: impl Fn(usize) -> i64) -> bool {
    for s in (0..values.len()).rev() {
        values[s] += 1;
        if values[s] < radix(s) {
            return true;
        }
        values[s] = 0;
    }
    false
}

/// Ordered `n`-tuples of nonnegative integers summing to `k`.
fn compositions(k: u32, n: usize) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![k]];
    }
    let mut out = Vec::new();
    for first in 0..=k {
        for mut rest in compositions(k - first, n - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// A formal sum `⊕ H_i` of finite subgroups, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SumOfSubgroups {
    summands: Vec<TorsionSubgroup>,
}

impl SumOfSubgroups {
    pub fn new(mut summands: Vec<TorsionSubgroup>) -> Self {
        summands.sort();
        SumOfSubgroups { summands }
    }

    pub fn summands(&self) -> &[TorsionSubgroup] {
        &self.summands
    }

    /// `Σ |H_i|`.
    pub fn total(&self) -> u64 {
        self.summands.iter().map(TorsionSubgroup::order).sum()
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    /// Concatenation of two sums.
    pub fn plus(&self, other: &SumOfSubgroups) -> SumOfSubgroups {
        let mut all = self.summands.clone();
        all.extend(other.summands.iter().cloned());
        SumOfSubgroups::new(all)
    }
}

impl fmt::Display for SumOfSubgroups {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, h) in self.summands.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{h}")?;
        }
        Ok(())
    }
}

/// All formal sums of subgroups with orders adding up to `m`, sorted.
pub fn enumerate_sums(p: u64, n: usize, m: u64) -> Vec<SumOfSubgroups> {
    let mut bound = 0;
    while p.pow(bound + 1) <= m {
        bound += 1;
    }
    let subs = enumerate_subgroups_up_to(p, n, bound);
    let mut out = Vec::new();
    let mut current = Vec::new();
    multisets(&subs, 0, m, &mut current, &mut out);
    out.sort();
    out
}

fn multisets(
    subs: &[TorsionSubgroup],
    start: usize,
    remaining: u64,
    current: &mut Vec<TorsionSubgroup>,
    out: &mut Vec<SumOfSubgroups>,
) {
    if remaining == 0 {
        out.push(SumOfSubgroups::new(current.clone()));
        return;
    }
    for i in start..subs.len() {
        let order = subs[i].order();
        if order <= remaining {
            current.push(subs[i].clone());
            multisets(subs, i, remaining - order, current, out);
            current.pop();
        }
    }
}

/// Integer point of `H` scaled by `p^e`: used by tests to compare with
/// brute-force subgroups of `(Z/p^e)^n`.
pub fn scaled_elements(h: &TorsionSubgroup, e: u32) -> Vec<Vec<i64>> {
    let q = h.p().pow(e) as i64;
    let mut pts = Vec::new();
    let n = h.n();
    let mut v = vec![0i64; n];
    loop {
        let point: Vec<BigRational> = v
            .iter()
            .map(|&x| BigRational::new(BigInt::from(x), BigInt::from(q)))
            .collect();
        if h.contains(&point) {
            pts.push(v.clone());
        }
        if !advance(&mut v, |_| q) {
            break;
        }
    }
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Signed};
    use std::collections::BTreeSet;

    /// All subgroups of `(Z/q)^n` of the given order, by closing every
    /// subset of at most `n` generators.
    fn bruteforce_subgroups(q: i64, n: usize, order: usize) -> BTreeSet<BTreeSet<Vec<i64>>> {
        let mut points = vec![vec![]];
        for _ in 0..n {
            points = points
                .into_iter()
                .flat_map(|v: Vec<i64>| {
                    (0..q).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        let close = |gens: &[&Vec<i64>]| -> BTreeSet<Vec<i64>> {
            let mut set = BTreeSet::new();
            set.insert(vec![0; n]);
            loop {
                let mut added = false;
                let current: Vec<_> = set.iter().cloned().collect();
                for a in &current {
                    for g in gens {
                        let s: Vec<i64> = a.iter().zip(g.iter()).map(|(x, y)| (x + y) % q).collect();
                        added |= set.insert(s);
                    }
                }
                if !added {
                    return set;
                }
            }
        };
        let mut out = BTreeSet::new();
        for a in &points {
            for b in &points {
                let gens: Vec<&Vec<i64>> = if n == 1 { vec![a] } else { vec![a, b] };
                let s = close(&gens);
                if s.len() == order {
                    out.insert(s);
                }
            }
        }
        out
    }

    #[test]
    fn trivial_enumeration() {
        assert_eq!(enumerate_subgroups(2, 2, 0), vec![TorsionSubgroup::trivial(2, 2)]);
    }

    #[test]
    fn counts_match_bruteforce() {
        for (k, expected) in [(1u32, 3usize), (2, 7)] {
            let subs = enumerate_subgroups(2, 2, k);
            assert_eq!(subs.len(), expected);
            // Every subgroup of order 2^k lives in the 2^k-torsion.
            let brute = bruteforce_subgroups(4, 2, 1 << k);
            assert_eq!(brute.len(), expected);
            let ours: BTreeSet<BTreeSet<Vec<i64>>> = subs
                .iter()
                .map(|h| scaled_elements(h, 2).into_iter().collect())
                .collect();
            assert_eq!(ours, brute);
        }
        assert_eq!(enumerate_subgroups(3, 2, 1).len(), 4);
        assert_eq!(enumerate_subgroups(2, 1, 3).len(), 1);
    }

    #[test]
    fn annihilator_examples() {
        assert_eq!(TorsionSubgroup::trivial(2, 2).annihilator_lattice().basis(), &IntMatrix::identity(2));
        let full = TorsionSubgroup::full_torsion(2, 2, 1);
        assert_eq!(full.annihilator_lattice().basis(), &IntMatrix::scalar(2, 2));
        for h in enumerate_subgroups(2, 2, 2) {
            assert_eq!(h.annihilator_lattice().index(), BigInt::from(h.order()));
            for g in h.generators() {
                assert!(h.contains(&g));
            }
            assert_eq!(scaled_elements(&h, 2).len() as u64, h.order());
        }
    }

    #[test]
    fn image_examples() {
        let subs = enumerate_subgroups(2, 2, 1);
        for h in &subs {
            assert_eq!(&h.image(&IntMatrix::identity(2)).unwrap(), h);
        }
        let full = TorsionSubgroup::full_torsion(2, 2, 1);
        assert!(full.image(&IntMatrix::scalar(2, 2)).unwrap().is_trivial());
        assert_eq!(full.image(&IntMatrix::zeros(2, 2)), Err(Error::SingularMatrix));
    }

    #[test]
    fn image_matches_pointwise_action() {
        let gamma = IntMatrix::from_rows(&[&[1, 1], &[0, 1]]);
        for h in enumerate_subgroups(2, 2, 2) {
            let img = h.image(&gamma).unwrap();
            let moved: BTreeSet<Vec<i64>> = scaled_elements(&h, 2)
                .iter()
                .map(|v| vec![(v[0] + v[1]).rem_euclid(4), v[1]])
                .collect();
            let expected: BTreeSet<Vec<i64>> = scaled_elements(&img, 2).into_iter().collect();
            assert_eq!(moved, expected);
        }
    }

    #[test]
    fn sum_counts() {
        assert_eq!(enumerate_sums(2, 2, 1), vec![SumOfSubgroups::new(vec![TorsionSubgroup::trivial(2, 2)])]);
        assert_eq!(enumerate_sums(2, 2, 2).len(), 4);
        assert_eq!(enumerate_sums(2, 2, 3).len(), 4);
        assert_eq!(enumerate_sums(2, 2, 4).len(), 17);
    }

    /// Partition-and-choose oracle: pick how many summands `c` of each
    /// order `p^k` to use and multiply the multiset counts `C(s + c - 1, c)`
    /// where `s = |Sub_{p^k}|`.
    #[test]
    fn sum_counts_match_partition_oracle() {
        fn multichoose(s: u64, c: u64) -> u64 {
            (0..c).fold(1, |acc, i| acc * (s + i) / (i + 1))
        }
        fn count(p: u64, n: usize, m: u64, k: i32) -> u64 {
            if k < 0 {
                return u64::from(m == 0);
            }
            let size = p.pow(k as u32);
            let s = enumerate_subgroups(p, n, k as u32).len() as u64;
            (0..=m / size)
                .map(|c| multichoose(s, c) * count(p, n, m - c * size, k - 1))
                .sum()
        }
        for p in [2u64, 3] {
            for n in [1usize, 2] {
                for m in 1..=6u64 {
                    assert_eq!(enumerate_sums(p, n, m).len() as u64, count(p, n, m, 2), "p={p} n={n} m={m}");
                }
            }
        }
    }

    #[test]
    fn single_summand_sums_match_subgroups() {
        for k in 0..=2 {
            let singles: Vec<TorsionSubgroup> = enumerate_sums(2, 2, 1 << k)
                .into_iter()
                .filter(|s| s.len() == 1)
                .map(|s| s.summands()[0].clone())
                .collect();
            assert_eq!(singles, enumerate_subgroups(2, 2, k));
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn unimodular() -> impl Strategy<Value = IntMatrix> {
            proptest::collection::vec(-3i64..=3, 4)
                .prop_map(|v| IntMatrix::from_i64(2, 2, &v))
                .prop_filter("det ±1", |m| m.det().abs() == BigInt::one())
        }

        proptest! {
            #[test]
            fn unimodular_action_permutes_subgroups(g in unimodular(), k in 0u32..=2) {
                let subs = enumerate_subgroups(2, 2, k);
                let mut images: Vec<TorsionSubgroup> = subs.iter().map(|h| h.image(&g).unwrap()).collect();
                images.sort();
                prop_assert_eq!(&images, &subs);
                let inv = g.adjugate().scaled(&g.det());
                for h in &subs {
                    prop_assert_eq!(&h.image(&g).unwrap().image(&inv).unwrap(), h);
                }
            }

            #[test]
            fn det_valuation_matches_order(k in 0u32..=3) {
                for h in enumerate_subgroups(2, 2, k) {
                    prop_assert_eq!(lattice::det_valuation(h.annihilator_lattice().basis(), 2).unwrap(), h.log_order());
                }
            }
        }
    }
}
