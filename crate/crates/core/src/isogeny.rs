//! Isogenies of `(Q_p/Z_p)^n` as nonsingular integer matrices, their
//! kernels, and sections of the kernel map.
//!
//! An isogeny acts on column vectors of the torus through its matrix `A`;
//! the dual map on characters is `A^T`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{self, IntMatrix, LatticeBasis, PAdicMatrix};
use crate::rng::SeededRng;
use crate::torsion::{enumerate_subgroups_up_to, TorsionSubgroup};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Isogeny {
    matrix: PAdicMatrix,
    log_kernel_order: u32,
}

impl Isogeny {
    pub fn new(p: u64, matrix: IntMatrix) -> Result<Self> {
        let matrix = PAdicMatrix::new(p, matrix);
        let log_kernel_order = matrix.det_valuation()?;
        Ok(Isogeny {
            matrix,
            log_kernel_order,
        })
    }

    pub fn identity(p: u64, n: usize) -> Self {
        Isogeny::new(p, IntMatrix::identity(n)).expect("identity is nonsingular")
    }

    pub fn p(&self) -> u64 {
        self.matrix.p()
    }

    pub fn n(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &IntMatrix {
        self.matrix.matrix()
    }

    pub fn padic(&self) -> &PAdicMatrix {
        &self.matrix
    }

    pub fn log_kernel_order(&self) -> u32 {
        self.log_kernel_order
    }

    pub fn kernel(&self) -> TorsionSubgroup {
        kernel(self)
    }

    /// `self ∘ other`, i.e. the matrix product `A_self · A_other`.
    pub fn compose(&self, other: &Isogeny) -> Isogeny {
        compose(self, other)
    }
}

impl fmt::Display for Isogeny {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.matrix())
    }
}

/// Annihilator lattice of `ker A`, i.e. the p-saturation
/// `A^T Z^n + p^v Z^n` with `v = v_p(det A)`.
fn kernel_annihilator(phi: &Isogeny) -> LatticeBasis {
    let n = phi.n();
    let p = phi.p();
    let pv = num_traits::pow(BigInt::from(p), phi.log_kernel_order as usize);
    let mut gens = phi.matrix().transpose().columns();
    for i in 0..n {
        let mut e = vec![BigInt::zero(); n];
        e[i] = pv.clone();
        gens.push(e);
    }
    LatticeBasis::from_generators(p, &IntMatrix::from_columns(n, &gens)).expect("saturated lattice has full rank")
}

/// `ker φ ⊂ (Q_p/Z_p)^n` in canonical form.
pub fn kernel(phi: &Isogeny) -> TorsionSubgroup {
    TorsionSubgroup::from_annihilator(kernel_annihilator(phi)).expect("kernel has p-power order")
}

pub fn compose(phi: &Isogeny, psi: &Isogeny) -> Isogeny {
    Isogeny {
        matrix: phi.matrix.compose(&psi.matrix),
        log_kernel_order: phi.log_kernel_order + psi.log_kernel_order,
    }
}

/// Matrix `X` of `ψ_H^*: Λ → Λ_H` in the Hermite basis `B` of `Λ_H`, so
/// that `B · X = A^T`. `X` is invertible over `Z_p`.
pub fn psi_dual(phi: &Isogeny) -> IntMatrix {
    let b = kernel_annihilator(phi);
    lattice::solve_integer(&b, &phi.matrix().transpose()).expect("A^T Z^n lies in the annihilator of ker A")
}

/// The conjugator `σ` with `φ(γH) · γ = σ · φ(H)`.
pub fn sigma_solve(gamma: &PAdicMatrix, h: &TorsionSubgroup, section: &Section) -> Result<PAdicMatrix> {
    if !gamma.is_unimodular() {
        return Err(Error::NoIntegralSolution);
    }
    let gh = h.image(gamma.matrix())?;
    let left = section.get(&gh)?.matrix() * gamma.matrix();
    let sigma = lattice::right_divide(&left, section.get(h)?.matrix())?;
    let sigma = PAdicMatrix::new(gamma.p(), sigma);
    if !sigma.is_unimodular() {
        return Err(Error::NoIntegralSolution);
    }
    Ok(sigma)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SectionKind {
    Canonical,
    Seeded(u64),
}

impl fmt::Display for SectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SectionKind::Canonical => write!(f, "canonical"),
            SectionKind::Seeded(s) => write!(f, "seeded:{s}"),
        }
    }
}

impl std::str::FromStr for SectionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "canonical" {
            return Ok(SectionKind::Canonical);
        }
        s.strip_prefix("seeded:")
            .and_then(|v| v.parse().ok())
            .map(SectionKind::Seeded)
            .ok_or_else(|| Error::Parse(format!("bad section spec {s:?}")))
    }
}

/// A choice of isogeny with kernel `H` for every `H` of order at most
/// `p^bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    p: u64,
    n: usize,
    bound: u32,
    kind: SectionKind,
    assignment: BTreeMap<TorsionSubgroup, Isogeny>,
}

impl Section {
    pub fn new(p: u64, n: usize, bound: u32, kind: SectionKind) -> Section {
        match kind {
            SectionKind::Canonical => canonical_section(p, n, bound),
            SectionKind::Seeded(seed) => random_section(p, n, bound, seed),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn kind(&self) -> &SectionKind {
        &self.kind
    }

    pub fn get(&self, h: &TorsionSubgroup) -> Result<&Isogeny> {
        self.assignment.get(h).ok_or(Error::SectionOutOfRange {
            log_order: h.log_order(),
            bound: self.bound,
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TorsionSubgroup, &Isogeny)> {
        self.assignment.iter()
    }
}

/// `H ↦ B_H^T`.
pub fn canonical_section(p: u64, n: usize, bound: u32) -> Section {
    let assignment = enumerate_subgroups_up_to(p, n, bound)
        .into_iter()
        .map(|h| {
            let phi = Isogeny::new(p, h.canonical_isogeny_matrix()).expect("canonical isogeny is nonsingular");
            (h, phi)
        })
        .collect();
    Section {
        p,
        n,
        bound,
        kind: SectionKind::Canonical,
        assignment,
    }
}

/// `H ↦ U_H · B_H^T` with `U_H` a seeded random matrix of determinant ±1.
/// Subgroups draw their `U_H` in canonical order from one stream.
pub fn random_section(p: u64, n: usize, bound: u32, seed: u64) -> Section {
    let mut rng = SeededRng::new(seed);
    let assignment = enumerate_subgroups_up_to(p, n, bound)
        .into_iter()
        .map(|h| {
            let u = random_unimodular(n, &mut rng);
            let phi = Isogeny::new(p, &u * &h.canonical_isogeny_matrix()).expect("unimodular times nonsingular");
            (h, phi)
        })
        .collect();
    Section {
        p,
        n,
        bound,
        kind: SectionKind::Seeded(seed),
        assignment,
    }
}

/// Product of `2n` random elementary column operations `col_j += c·col_i`
/// with `c ∈ [-2, 2]`, followed by a random sign flip of one column.
pub fn random_unimodular(n: usize, rng: &mut SeededRng) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    if n > 1 {
        for _ in 0..2 * n {
            let i = rng.below(n as u64) as usize;
            let mut j = rng.below(n as u64 - 1) as usize;
            if j >= i {
                j += 1;
            }
            let c = BigInt::from(rng.range_i64(-2, 2));
            for r in 0..n {
                let v = u.get(r, j) + &c * u.get(r, i);
                u.set(r, j, v);
            }
        }
    }
    let col = rng.below(n as u64) as usize;
    if rng.coin() {
        for r in 0..n {
            let v = -u.get(r, col);
            u.set(r, col, v);
        }
    }
    debug_assert!(u.det().abs().is_one());
    u
}
