//! Truncated power series, formal group laws, `i`-series and the ranks of
//! the quotient rings `R⟦x⟧/[p^k](x)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::valuation;

/// Coefficient rings. Elements are carried as rationals and normalised by
/// [`CoeffRing::reduce`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoeffRing {
    Rationals,
    /// `Z_(p)`: rationals with denominator prime to `p`.
    PLocal(u64),
    /// `Z/p^exponent`; `exponent = 1` is the prime field.
    ModPrimePower { p: u64, exponent: u32 },
}

impl CoeffRing {
    pub fn prime_field(p: u64) -> Self {
        CoeffRing::ModPrimePower { p, exponent: 1 }
    }

    pub fn reduce(&self, x: &BigRational) -> Result<BigRational> {
        match *self {
            CoeffRing::Rationals => Ok(x.clone()),
            CoeffRing::PLocal(p) => {
                if valuation(x.denom(), p) > 0 {
                    return Err(Error::NonIntegralCoefficient(x.to_string()));
                }
                Ok(x.clone())
            }
            CoeffRing::ModPrimePower { p, exponent } => {
                if valuation(x.denom(), p) > 0 {
                    return Err(Error::NonIntegralCoefficient(x.to_string()));
                }
                let q = BigInt::from(p).pow(exponent);
                let d = x.denom().mod_floor(&q);
                let inv = d.extended_gcd(&q).x;
                Ok(BigRational::from_integer((x.numer() * inv).mod_floor(&q)))
            }
        }
    }

    pub fn is_unit(&self, x: &BigRational) -> bool {
        match *self {
            CoeffRing::Rationals => !x.is_zero(),
            CoeffRing::PLocal(p) | CoeffRing::ModPrimePower { p, .. } => {
                !x.is_zero() && valuation(x.numer(), p) == 0 && valuation(x.denom(), p) == 0
            }
        }
    }
}

impl fmt::Display for CoeffRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffRing::Rationals => write!(f, "Q"),
            CoeffRing::PLocal(p) => write!(f, "Z_({p})"),
            CoeffRing::ModPrimePower { p, exponent: 1 } => write!(f, "F_{p}"),
            CoeffRing::ModPrimePower { p, exponent } => write!(f, "Z/{p}^{exponent}"),
        }
    }
}

/// A power series in `vars` variables truncated above total degree
/// `degree`. Coefficients are stored densely; the monomial `x^e` sits at
/// `Σ e_k (degree+1)^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    ring: CoeffRing,
    vars: usize,
    degree: usize,
    coeffs: Vec<BigRational>,
}

impl TruncatedSeries {
    pub fn zero(ring: CoeffRing, vars: usize, degree: usize) -> Self {
        TruncatedSeries {
            ring,
            vars,
            degree,
            coeffs: vec![BigRational::zero(); (degree + 1).pow(vars as u32)],
        }
    }

    /// The variable `x_k`.
    pub fn variable(ring: CoeffRing, vars: usize, degree: usize, k: usize) -> Self {
        let mut s = TruncatedSeries::zero(ring, vars, degree);
        if degree >= 1 {
            let e: Vec<usize> = (0..vars).map(|i| usize::from(i == k)).collect();
            let idx = s.index(&e);
            s.coeffs[idx] = BigRational::one();
        }
        s
    }

    pub fn constant(ring: CoeffRing, vars: usize, degree: usize, c: BigRational) -> Result<Self> {
        let mut s = TruncatedSeries::zero(ring, vars, degree);
        s.coeffs[0] = ring.reduce(&c)?;
        Ok(s)
    }

    /// Univariate series from coefficients `c_0, c_1, …`.
    pub fn from_coeffs(ring: CoeffRing, degree: usize, coeffs: &[BigRational]) -> Result<Self> {
        let mut s = TruncatedSeries::zero(ring, 1, degree);
        for (i, c) in coeffs.iter().enumerate().take(degree + 1) {
            s.coeffs[i] = ring.reduce(c)?;
        }
        Ok(s)
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    fn index(&self, e: &[usize]) -> usize {
        e.iter().rev().fold(0, |acc, &x| acc * (self.degree + 1) + x)
    }

    fn exponents(&self, mut idx: usize) -> Vec<usize> {
        (0..self.vars)
            .map(|_| {
                let e = idx % (self.degree + 1);
                idx /= self.degree + 1;
                e
            })
            .collect()
    }

    pub fn coeff(&self, e: &[usize]) -> BigRational {
        if e.len() != self.vars || e.iter().sum::<usize>() > self.degree {
            return BigRational::zero();
        }
        self.coeffs[self.index(e)].clone()
    }

    /// Coefficient of `x^i` in a univariate series.
    pub fn coeff1(&self, i: usize) -> BigRational {
        self.coeff(&[i])
    }

    /// Nonzero terms as (exponents, coefficient), by index.
    pub fn terms(&self) -> Vec<(Vec<usize>, BigRational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.exponents(i), c.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring || self.vars != other.vars || self.degree != other.degree {
            return Err(Error::Parse(format!(
                "series over {} in {} vars to degree {} vs {} in {} vars to degree {}",
                self.ring, self.vars, self.degree, other.ring, other.vars, other.degree
            )));
        }
        Ok(())
    }

    fn normalised(mut self) -> Result<Self> {
        if self.ring != CoeffRing::Rationals {
            for c in self.coeffs.iter_mut() {
                if !c.is_zero() {
                    *c = self.ring.reduce(c)?;
                }
            }
        }
        Ok(self)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        out.normalised()
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a -= b;
        }
        out.normalised()
    }

    pub fn scale(&self, c: &BigRational) -> Result<Self> {
        let mut out = self.clone();
        for a in out.coeffs.iter_mut() {
            *a *= c;
        }
        out.normalised()
    }

    /// Nonzero coefficients with their total degrees, sorted by degree.
    fn support(&self) -> Vec<(usize, usize)> {
        let mut s: Vec<(usize, usize)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| (self.exponents(i).iter().sum(), i))
            .collect();
        s.sort_unstable();
        s
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = TruncatedSeries::zero(self.ring, self.vars, self.degree);
        let right = other.support();
        for (da, ia) in self.support() {
            let a = &self.coeffs[ia];
            for &(db, ib) in &right {
                if da + db > self.degree {
                    break;
                }
                // no carries: each exponent of the product is at most `degree`
                out.coeffs[ia + ib] += a * &other.coeffs[ib];
            }
        }
        out.normalised()
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut out = TruncatedSeries::constant(self.ring, self.vars, self.degree, BigRational::one())?;
        for _ in 0..e {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// `self(g)` for univariate `self` and `g` without constant term, by
    /// Horner's rule.
    pub fn compose(&self, g: &TruncatedSeries) -> Result<Self> {
        if self.vars != 1 {
            return Err(Error::Parse("compose needs a univariate outer series".into()));
        }
        if !g.coeffs[0].is_zero() {
            return Err(Error::Parse("inner series has a constant term".into()));
        }
        let mut out = TruncatedSeries::zero(g.ring, g.vars, g.degree);
        for i in (0..=self.degree).rev() {
            out = out.mul(g)?;
            out.coeffs[0] += &self.coeffs[i];
        }
        out.normalised()
    }

    /// Compositional inverse of a univariate series `a_1 x + …` with unit
    /// `a_1`.
    pub fn reversion(&self) -> Result<Self> {
        let a1 = self.coeff1(1);
        if self.vars != 1 || !self.coeffs[0].is_zero() || !self.ring.is_unit(&a1) {
            return Err(Error::Parse("series is not invertible under composition".into()));
        }
        let inv = self.ring.reduce(&a1.recip())?;
        let mut f = TruncatedSeries::variable(self.ring, 1, self.degree, 0).scale(&inv)?;
        for k in 2..=self.degree {
            let err = self.compose(&f)?.coeff1(k);
            f.coeffs[k] -= &err * &inv;
            f = f.normalised()?;
        }
        Ok(f)
    }

    /// Reduction into another coefficient ring.
    pub fn change_ring(&self, ring: CoeffRing) -> Result<Self> {
        TruncatedSeries {
            ring,
            ..self.clone()
        }
        .normalised()
    }

    /// Same coefficients truncated to a lower degree.
    pub fn truncate(&self, degree: usize) -> Self {
        let mut out = TruncatedSeries::zero(self.ring, self.vars, degree.min(self.degree));
        for (e, c) in self.terms() {
            if e.iter().sum::<usize>() <= out.degree {
                let idx = out.index(&e);
                out.coeffs[idx] = c;
            }
        }
        out
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 3] = ["x", "y", "z"];
        let mut terms = self.terms();
        terms.sort_by_key(|(e, _)| (e.iter().sum::<usize>(), std::cmp::Reverse(e.clone())));
        if terms.is_empty() {
            return write!(f, "0 + O({})", self.degree + 1);
        }
        for (k, (e, c)) in terms.iter().enumerate() {
            match (k, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let c = c.abs();
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| {
                    let name = NAMES.get(i).map_or_else(|| format!("x{i}"), |s| s.to_string());
                    if x == 1 { name } else { format!("{name}^{x}") }
                })
                .collect();
            match (c.is_one(), mono.is_empty()) {
                (_, true) => write!(f, "{c}")?,
                (true, false) => write!(f, "{}", mono.join(""))?,
                (false, false) => write!(f, "{c}{}", mono.join(""))?,
            }
        }
        write!(f, " + O({})", self.degree + 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FglKind {
    Additive,
    Multiplicative,
    Honda { height: u32 },
    Custom,
}

/// A one-dimensional formal group law `F(x, y)` truncated at total degree
/// `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalGroupLaw {
    kind: FglKind,
    law: TruncatedSeries,
}

/// `p^{2n} + 1`, enough to see `[p^2](x)` of a height-`n` law.
pub fn default_degree(p: u64, height: u32) -> usize {
    p.pow(2 * height) as usize + 1
}

impl FormalGroupLaw {
    pub fn additive(ring: CoeffRing, degree: usize) -> Result<Self> {
        let x = TruncatedSeries::variable(ring, 2, degree, 0);
        let y = TruncatedSeries::variable(ring, 2, degree, 1);
        Ok(FormalGroupLaw {
            kind: FglKind::Additive,
            law: x.add(&y)?,
        })
    }

    /// `x + y + xy`
    pub fn multiplicative(ring: CoeffRing, degree: usize) -> Result<Self> {
        let x = TruncatedSeries::variable(ring, 2, degree, 0);
        let y = TruncatedSeries::variable(ring, 2, degree, 1);
        Ok(FormalGroupLaw {
            kind: FglKind::Multiplicative,
            law: x.add(&y)?.add(&x.mul(&y)?)?,
        })
    }

    /// The Honda law of height `n` with logarithm `Σ_i x^{p^{ni}}/p^i`,
    /// built over the rationals and then reduced into `ring`.
    pub fn honda(p: u64, height: u32, degree: usize, ring: CoeffRing) -> Result<Self> {
        let q = CoeffRing::Rationals;
        let mut log = vec![BigRational::zero(); degree + 1];
        let mut i = 0u32;
        while (p.pow(height * i) as usize) <= degree {
            log[p.pow(height * i) as usize] = BigRational::new(BigInt::one(), BigInt::from(p).pow(i));
            i += 1;
        }
        let log = TruncatedSeries::from_coeffs(q, degree, &log)?;
        let exp = log.reversion()?;
        let x = TruncatedSeries::variable(q, 2, degree, 0);
        let y = TruncatedSeries::variable(q, 2, degree, 1);
        let sum = log.compose(&x)?.add(&log.compose(&y)?)?;
        let law = exp.compose(&sum)?;
        for (_, c) in law.terms() {
            CoeffRing::PLocal(p).reduce(&c)?;
        }
        Ok(FormalGroupLaw {
            kind: FglKind::Honda { height },
            law: law.change_ring(ring)?,
        })
    }

    /// A law from explicit bivariate coefficients; the unit and
    /// commutativity axioms are checked.
    pub fn custom(law: TruncatedSeries) -> Result<Self> {
        let fgl = FormalGroupLaw {
            kind: FglKind::Custom,
            law,
        };
        if fgl.law.vars != 2 || !fgl.satisfies_unit_and_commutativity() {
            return Err(Error::Parse("series is not a formal group law".into()));
        }
        Ok(fgl)
    }

    pub fn kind(&self) -> FglKind {
        self.kind
    }

    pub fn ring(&self) -> CoeffRing {
        self.law.ring
    }

    pub fn degree(&self) -> usize {
        self.law.degree
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.law
    }

    pub fn change_ring(&self, ring: CoeffRing) -> Result<Self> {
        Ok(FormalGroupLaw {
            kind: self.kind,
            law: self.law.change_ring(ring)?,
        })
    }

    /// `F(x, 0) = x`, `F(0, y) = y` and `F(x, y) = F(y, x)`.
    pub fn satisfies_unit_and_commutativity(&self) -> bool {
        let d = self.law.degree;
        self.law.terms().iter().all(|(e, c)| {
            let unit = match (e[0], e[1]) {
                (1, 0) | (0, 1) => c.is_one(),
                (0, _) | (_, 0) => false,
                _ => true,
            };
            unit && self.law.coeff(&[e[1], e[0]]) == *c
        }) && (d == 0 || (self.law.coeff(&[1, 0]).is_one() && self.law.coeff(&[0, 1]).is_one()))
    }

    /// `F(u, v)` for series `u`, `v` without constant term, via Horner in
    /// `u`.
    pub fn apply(&self, u: &TruncatedSeries, v: &TruncatedSeries) -> Result<TruncatedSeries> {
        u.check(v)?;
        if u.ring != self.law.ring {
            return Err(Error::Parse(format!("arguments over {} for a law over {}", u.ring, self.law.ring)));
        }
        let d = self.law.degree.min(u.degree);
        let one = TruncatedSeries::constant(u.ring, u.vars, u.degree, BigRational::one())?;
        let mut vpow = vec![one];
        for j in 1..=d {
            let next = vpow[j - 1].mul(v)?;
            vpow.push(next);
        }
        let mut out = TruncatedSeries::zero(u.ring, u.vars, u.degree);
        for i in (0..=d).rev() {
            out = out.mul(u)?;
            for (j, vj) in vpow.iter().enumerate().take(d - i + 1) {
                let c = self.law.coeff(&[i, j]);
                if !c.is_zero() {
                    out = out.add(&vj.scale(&c)?)?;
                }
            }
        }
        Ok(out)
    }

    /// `F(F(x, y), z) − F(x, F(y, z))`.
    pub fn associativity_residual(&self) -> Result<TruncatedSeries> {
        let (ring, d) = (self.law.ring, self.law.degree);
        let x = TruncatedSeries::variable(ring, 3, d, 0);
        let y = TruncatedSeries::variable(ring, 3, d, 1);
        let z = TruncatedSeries::variable(ring, 3, d, 2);
        let left = self.apply(&self.apply(&x, &y)?, &z)?;
        let right = self.apply(&x, &self.apply(&y, &z)?)?;
        left.sub(&right)
    }

    /// `[i](x)`, with `[0] = 0` and `[i] = F([i-1](x), x)`; computed by
    /// doubling.
    pub fn i_series(&self, i: u64) -> Result<TruncatedSeries> {
        let (ring, d) = (self.law.ring, self.law.degree);
        let mut acc = TruncatedSeries::zero(ring, 1, d);
        let mut base = TruncatedSeries::variable(ring, 1, d, 0);
        let mut k = i;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.apply(&acc, &base)?;
            }
            k >>= 1;
            if k > 0 {
                base = self.apply(&base, &base)?;
            }
        }
        Ok(acc)
    }
}

/// The least degree carrying a unit coefficient.
pub fn weierstrass_degree(g: &TruncatedSeries) -> Result<usize> {
    if g.vars != 1 {
        return Err(Error::Parse("weierstrass degree of a multivariate series".into()));
    }
    (0..=g.degree)
        .find(|&i| g.ring.is_unit(&g.coeffs[i]))
        .ok_or(Error::NoUnitCoefficient(g.degree))
}

/// The free module `R⟦x_1..x_r⟧/([p^{k_1}](x_1), …)` over `R`: its rank and
/// monomial basis `x^e` with `e_i < deg [p^{k_i}]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientRing {
    pub degrees: Vec<usize>,
    pub rank: u64,
    pub basis: Vec<Vec<usize>>,
}

/// Rank of the quotient ring modelling `E^0(B(C_{p^{k_1}} × …))`.
pub fn quotient_ring_rank(fgl: &FormalGroupLaw, p: u64, ks: &[u32]) -> Result<QuotientRing> {
    let degrees = ks
        .iter()
        .map(|&k| weierstrass_degree(&fgl.i_series(p.pow(k))?))
        .collect::<Result<Vec<_>>>()?;
    let rank = degrees.iter().map(|&d| d as u64).product();
    let mut basis = vec![vec![]];
    for &d in &degrees {
        basis = basis
            .into_iter()
            .flat_map(|e: Vec<usize>| {
                (0..d).map(move |i| {
                    let mut e = e.clone();
                    e.push(i);
                    e
                })
            })
            .collect();
    }
    Ok(QuotientRing { degrees, rank, basis })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(x: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(x))
    }

    fn binomial(n: u64, k: u64) -> i64 {
        (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
    }

    #[test]
    fn mod_reduction_inverts_denominators() {
        let r = CoeffRing::ModPrimePower { p: 2, exponent: 3 };
        assert_eq!(r.reduce(&BigRational::new(BigInt::from(1), BigInt::from(3))).unwrap(), int(3));
        assert_eq!(r.reduce(&int(-1)).unwrap(), int(7));
        assert!(r.reduce(&BigRational::new(BigInt::from(1), BigInt::from(2))).is_err());
    }

    #[test]
    fn small_i_series() {
        let q = CoeffRing::Rationals;
        let add = FormalGroupLaw::additive(q, 6).unwrap();
        assert_eq!(add.i_series(2).unwrap().terms(), vec![(vec![1], int(2))]);
        let mult = FormalGroupLaw::multiplicative(q, 6).unwrap();
        assert_eq!(mult.i_series(2).unwrap().terms(), vec![(vec![1], int(2)), (vec![2], int(1))]);
        assert!(mult.i_series(0).unwrap().is_zero());
    }

    #[test]
    fn multiplicative_i_series_is_binomial() {
        let mult = FormalGroupLaw::multiplicative(CoeffRing::Rationals, 8).unwrap();
        for i in 1..=5u64 {
            let s = mult.i_series(i).unwrap();
            for k in 1..=8 {
                assert_eq!(s.coeff1(k as usize), int(if k <= i { binomial(i, k) } else { 0 }));
            }
        }
    }

    #[test]
    fn honda_height_one_is_multiplicative_shape() {
        for p in [2u64, 3] {
            let f = FormalGroupLaw::honda(p, 1, default_degree(p, 1), CoeffRing::prime_field(p)).unwrap();
            let s = f.i_series(p).unwrap();
            assert_eq!(s.terms(), vec![(vec![p as usize], int(1))]);
        }
    }

    #[test]
    fn honda_height_two_p_series() {
        let f = FormalGroupLaw::honda(2, 2, default_degree(2, 2), CoeffRing::prime_field(2)).unwrap();
        let s = f.i_series(2).unwrap();
        assert_eq!(weierstrass_degree(&s).unwrap(), 4);
        assert!((0..4).all(|i| s.coeff1(i).is_zero()));
        assert_eq!(weierstrass_degree(&f.i_series(4).unwrap()).unwrap(), 16);
    }

    #[test]
    fn honda_is_p_integral() {
        let f = FormalGroupLaw::honda(2, 2, 10, CoeffRing::PLocal(2)).unwrap();
        assert!(f.satisfies_unit_and_commutativity());
        assert!(f.associativity_residual().unwrap().is_zero());
    }

    #[test]
    fn laws_are_associative() {
        let f = FormalGroupLaw::multiplicative(CoeffRing::ModPrimePower { p: 3, exponent: 2 }, 8).unwrap();
        assert!(f.associativity_residual().unwrap().is_zero());
        let h = FormalGroupLaw::honda(3, 1, default_degree(3, 1), CoeffRing::prime_field(3)).unwrap();
        assert!(h.associativity_residual().unwrap().is_zero());
    }

    #[test]
    fn non_associative_law_has_residual() {
        let ring = CoeffRing::Rationals;
        let x = TruncatedSeries::variable(ring, 2, 4, 0);
        let y = TruncatedSeries::variable(ring, 2, 4, 1);
        let xy = x.mul(&y).unwrap();
        let law = x.add(&y).unwrap().add(&xy.mul(&xy).unwrap()).unwrap();
        let f = FormalGroupLaw::custom(law).unwrap();
        assert!(!f.associativity_residual().unwrap().is_zero());
    }

    #[test]
    fn i_series_is_additive_in_i() {
        let f = FormalGroupLaw::honda(2, 1, 9, CoeffRing::ModPrimePower { p: 2, exponent: 3 }).unwrap();
        for (i, j) in [(1u64, 2u64), (2, 3), (3, 4)] {
            let lhs = f.i_series(i + j).unwrap();
            let rhs = f.apply(&f.i_series(i).unwrap(), &f.i_series(j).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn weierstrass_of_multiplicative_over_local_integers() {
        for p in [2u64, 3, 5] {
            let f = FormalGroupLaw::multiplicative(CoeffRing::PLocal(p), p as usize + 1).unwrap();
            assert_eq!(weierstrass_degree(&f.i_series(p).unwrap()).unwrap(), p as usize);
        }
    }

    #[test]
    fn weierstrass_errors_without_unit() {
        let s = TruncatedSeries::from_coeffs(CoeffRing::PLocal(2), 3, &[int(0), int(2), int(4)]).unwrap();
        assert_eq!(weierstrass_degree(&s), Err(Error::NoUnitCoefficient(3)));
    }

    #[test]
    fn quotient_ranks() {
        let h = FormalGroupLaw::honda(2, 2, default_degree(2, 2), CoeffRing::prime_field(2)).unwrap();
        assert_eq!(quotient_ring_rank(&h, 2, &[1]).unwrap().rank, 4);
        let q = quotient_ring_rank(&h, 2, &[1, 1]).unwrap();
        assert_eq!(q.rank, 16);
        assert_eq!(q.basis.len(), 16);
        let m = FormalGroupLaw::multiplicative(CoeffRing::prime_field(3), 10).unwrap();
        assert_eq!(quotient_ring_rank(&m, 3, &[2]).unwrap().rank, 9);
    }

    #[test]
    fn reversion_inverts() {
        let q = CoeffRing::Rationals;
        let g = TruncatedSeries::from_coeffs(q, 7, &[int(0), int(1), int(3), int(-2), int(5)]).unwrap();
        let inv = g.reversion().unwrap();
        assert_eq!(g.compose(&inv).unwrap(), TruncatedSeries::variable(q, 1, 7, 0));
        assert_eq!(inv.compose(&g).unwrap(), TruncatedSeries::variable(q, 1, 7, 0));
    }

    #[test]
    fn display() {
        let f = FormalGroupLaw::multiplicative(CoeffRing::Rationals, 3).unwrap();
        assert_eq!(f.i_series(2).unwrap().to_string(), "2x + x^2 + O(4)");
    }
}
