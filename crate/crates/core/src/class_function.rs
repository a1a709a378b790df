//! The finite-level coefficient ring `C_0` and generalized class functions.
//!
//! At level `N` an element of `C_0` is a rational-valued function on
//! `M_n(Z/q)`, `q = p^N`. Isogenies act on the right by
//! `(c·A)(ξ) = c(Aξ)` and stabilizer elements by `(c·s)(ξ) = c(ξs)`; both
//! are ring maps and the two actions commute.
//!
//! Matrices `ξ` are indexed row-major with the first entry most
//! significant, entries running over `0..q`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::group::{GroupHom, HomClasses};
use crate::lattice::IntMatrix;
use crate::rng::SeededRng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct C0Level {
    pub p: u64,
    pub n: usize,
    pub level: u32,
}

impl C0Level {
    pub fn new(p: u64, n: usize, level: u32) -> Self {
        C0Level { p, n, level }
    }

    /// `q = p^N`
    pub fn modulus(&self) -> u64 {
        self.p.pow(self.level)
    }

    /// `q^{n^2}`, the number of matrices mod `q`.
    pub fn size(&self) -> usize {
        (self.modulus() as usize).pow((self.n * self.n) as u32)
    }

    pub fn matrix_at(&self, index: usize) -> Vec<u64> {
        let q = self.modulus() as usize;
        let k = self.n * self.n;
        let mut out = vec![0u64; k];
        let mut rest = index;
        for e in out.iter_mut().rev() {
            *e = (rest % q) as u64;
            rest /= q;
        }
        out
    }

    pub fn index_of(&self, entries: &[u64]) -> usize {
        let q = self.modulus() as usize;
        entries.iter().fold(0usize, |acc, &e| acc * q + e as usize)
    }

    fn mat_mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = self.n;
        let q = self.modulus();
        let mut out = vec![0u64; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = (0..n).map(|k| a[i * n + k] * b[k * n + j]).sum::<u64>() % q;
            }
        }
        out
    }

    /// Entries of an integer matrix reduced mod `q`.
    pub fn reduce(&self, a: &IntMatrix) -> Vec<u64> {
        assert_eq!(a.rows(), self.n);
        a.reduced_mod(self.modulus())
    }

    /// `ξ ↦ index(Aξ)`
    pub fn left_map(&self, a: &[u64]) -> Vec<u32> {
        (0..self.size())
            .map(|i| self.index_of(&self.mat_mul(a, &self.matrix_at(i))) as u32)
            .collect()
    }

    /// `ξ ↦ index(ξs)`
    pub fn right_map(&self, s: &[u64]) -> Vec<u32> {
        (0..self.size())
            .map(|i| self.index_of(&self.mat_mul(&self.matrix_at(i), s)) as u32)
            .collect()
    }

    pub fn is_invertible(&self, a: &[u64]) -> bool {
        let m = IntMatrix::from_i64(self.n, self.n, &a.iter().map(|&x| x as i64).collect::<Vec<_>>());
        !m.det().is_multiple_of(&BigInt::from(self.p))
    }

    /// `GL_n(Z/q)` as integer matrices with entries in `[0, q)`, in index
    /// order.
    pub fn general_linear(&self) -> Vec<IntMatrix> {
        (0..self.size())
            .map(|i| self.matrix_at(i))
            .filter(|a| self.is_invertible(a))
            .map(|a| self.lift(&a))
            .collect()
    }

    pub fn lift(&self, a: &[u64]) -> IntMatrix {
        IntMatrix::from_i64(self.n, self.n, &a.iter().map(|&x| x as i64).collect::<Vec<_>>())
    }

    /// A uniformly drawn invertible matrix mod `q` (rejection sampling).
    pub fn random_invertible(&self, rng: &mut SeededRng) -> Vec<u64> {
        loop {
            let a: Vec<u64> = (0..self.n * self.n).map(|_| rng.below(self.modulus())).collect();
            if self.is_invertible(&a) {
                return a;
            }
        }
    }
}

impl fmt::Display for C0Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} n={} N={}", self.p, self.n, self.level)
    }
}

/// A rational-valued function on `M_n(Z/q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct C0Element {
    level: C0Level,
    values: Vec<BigRational>,
}

impl C0Element {
    pub fn new(level: C0Level, values: Vec<BigRational>) -> Result<Self> {
        if values.len() != level.size() {
            return Err(Error::Parse(format!(
                "C0 table has {} entries, expected {}",
                values.len(),
                level.size()
            )));
        }
        Ok(C0Element { level, values })
    }

    pub fn constant(level: C0Level, c: BigRational) -> Self {
        C0Element {
            level,
            values: vec![c; level.size()],
        }
    }

    pub fn zero(level: C0Level) -> Self {
        Self::constant(level, BigRational::zero())
    }

    pub fn one(level: C0Level) -> Self {
        Self::constant(level, BigRational::one())
    }

    /// `ξ ↦ ξ_{00}` as an integer in `[0, q)`.
    pub fn coordinate(level: C0Level) -> Self {
        let values = (0..level.size())
            .map(|i| BigRational::from_integer(BigInt::from(level.matrix_at(i)[0])))
            .collect();
        C0Element { level, values }
    }

    /// Integer values drawn from `[-2, 2]`.
    pub fn random(level: C0Level, rng: &mut SeededRng) -> Self {
        let values = (0..level.size())
            .map(|_| BigRational::from_integer(BigInt::from(rng.range_i64(-2, 2))))
            .collect();
        C0Element { level, values }
    }

    pub fn level(&self) -> C0Level {
        self.level
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    fn check(&self, other: &C0Element) -> Result<()> {
        if self.level != other.level {
            return Err(Error::LevelMismatch(format!("{} vs {}", self.level, other.level)));
        }
        Ok(())
    }

    pub fn add(&self, other: &C0Element) -> Result<C0Element> {
        self.check(other)?;
        Ok(self.zip(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &C0Element) -> Result<C0Element> {
        self.check(other)?;
        Ok(self.zip(other, |a, b| a - b))
    }

    pub fn mul(&self, other: &C0Element) -> Result<C0Element> {
        self.check(other)?;
        Ok(self.zip(other, |a, b| a * b))
    }

    fn zip(&self, other: &C0Element, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> C0Element {
        C0Element {
            level: self.level,
            values: self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> C0Element {
        C0Element {
            level: self.level,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> C0Element {
        (0..e).fold(C0Element::one(self.level), |acc, _| acc.zip(self, |a, b| a * b))
    }

    /// `ξ ↦ self(map(ξ))`
    pub fn gather(&self, map: &[u32]) -> C0Element {
        C0Element {
            level: self.level,
            values: map.iter().map(|&j| self.values[j as usize].clone()).collect(),
        }
    }

    /// `(c·A)(ξ) = c(Aξ mod q)`
    pub fn act_isogeny(&self, a: &IntMatrix) -> C0Element {
        self.gather(&self.level.left_map(&self.level.reduce(a)))
    }

    /// `(c·s)(ξ) = c(ξs)`
    pub fn act_stabilizer(&self, s: &StabilizerElement) -> Result<C0Element> {
        if s.level != self.level {
            return Err(Error::LevelMismatch(format!("{} vs {}", self.level, s.level)));
        }
        Ok(self.gather(&self.level.right_map(&s.matrix)))
    }
}

/// An invertible matrix mod `q`, acting on `C_0` by right translation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StabilizerElement {
    level: C0Level,
    matrix: Vec<u64>,
}

impl StabilizerElement {
    pub fn new(level: C0Level, matrix: Vec<u64>) -> Result<Self> {
        let q = level.modulus();
        let matrix: Vec<u64> = matrix.into_iter().map(|x| x % q).collect();
        if matrix.len() != level.n * level.n || !level.is_invertible(&matrix) {
            return Err(Error::NotInvertible);
        }
        Ok(StabilizerElement { level, matrix })
    }

    pub fn identity(level: C0Level) -> Self {
        let n = level.n;
        let matrix = (0..n * n).map(|k| u64::from(k / n == k % n)).collect();
        StabilizerElement { level, matrix }
    }

    pub fn random(level: C0Level, rng: &mut SeededRng) -> Self {
        StabilizerElement {
            level,
            matrix: level.random_invertible(rng),
        }
    }

    pub fn level(&self) -> C0Level {
        self.level
    }

    pub fn matrix(&self) -> &[u64] {
        &self.matrix
    }
}

/// Checks that `q = p^N` is a multiple of the exponent of the p-part of
/// the group, so that matrices mod `q` act on tuple classes.
pub fn check_group_level(classes: &HomClasses, level: C0Level) -> Result<()> {
    if classes.p() != level.p || classes.n() != level.n {
        return Err(Error::LevelMismatch(format!(
            "classes over p={} n={} used at {level}",
            classes.p(),
            classes.n()
        )));
    }
    let exponent = classes.group().p_exponent(level.p);
    if !level.modulus().is_multiple_of(exponent) {
        let mut needed = 0;
        while level.p.pow(needed) < exponent {
            needed += 1;
        }
        return Err(Error::LevelMismatch(format!(
            "{} has p-exponent {exponent}; level must be at least {needed}",
            classes.group().name()
        )));
    }
    Ok(())
}

/// A `C_0`-valued function on `hom(Z_p^n, G)/~`, stored sparsely: classes
/// without an entry take the value zero.
#[derive(Clone, Debug)]
pub struct ClassFunction {
    classes: Arc<HomClasses>,
    level: C0Level,
    values: BTreeMap<usize, C0Element>,
}

impl PartialEq for ClassFunction {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.classes, &other.classes) || self.classes == other.classes)
            && self.level == other.level
            && self.values == other.values
    }
}

impl Eq for ClassFunction {}

impl ClassFunction {
    pub fn zero(classes: Arc<HomClasses>, level: C0Level) -> Result<Self> {
        check_group_level(&classes, level)?;
        Ok(ClassFunction {
            classes,
            level,
            values: BTreeMap::new(),
        })
    }

    /// Builds a function from one value per class.
    pub fn from_fn(
        classes: Arc<HomClasses>,
        level: C0Level,
        mut f: impl FnMut(usize) -> C0Element,
    ) -> Result<Self> {
        let mut out = ClassFunction::zero(classes, level)?;
        for c in 0..out.classes.len() {
            let v = f(c);
            out.set(c, v)?;
        }
        Ok(out)
    }

    pub fn constant(classes: Arc<HomClasses>, value: C0Element) -> Result<Self> {
        let level = value.level();
        ClassFunction::from_fn(classes, level, |_| value.clone())
    }

    pub fn one(classes: Arc<HomClasses>, level: C0Level) -> Result<Self> {
        ClassFunction::constant(classes, C0Element::one(level))
    }

    /// Indicator of a single class.
    pub fn indicator(classes: Arc<HomClasses>, level: C0Level, class: usize) -> Result<Self> {
        let mut out = ClassFunction::zero(classes, level)?;
        out.set(class, C0Element::one(level))?;
        Ok(out)
    }

    /// Independent random tables for every class.
    pub fn random(classes: Arc<HomClasses>, level: C0Level, rng: &mut SeededRng) -> Result<Self> {
        ClassFunction::from_fn(classes, level, |_| C0Element::random(level, rng))
    }

    pub fn classes(&self) -> &Arc<HomClasses> {
        &self.classes
    }

    pub fn level(&self) -> C0Level {
        self.level
    }

    pub fn get(&self, class: usize) -> C0Element {
        self.values.get(&class).cloned().unwrap_or_else(|| C0Element::zero(self.level))
    }

    /// Nonzero values only.
    pub fn support(&self) -> &BTreeMap<usize, C0Element> {
        &self.values
    }

    pub fn set(&mut self, class: usize, value: C0Element) -> Result<()> {
        if value.level() != self.level {
            return Err(Error::LevelMismatch(format!("{} vs {}", value.level(), self.level)));
        }
        assert!(class < self.classes.len(), "class index out of range");
        if value.is_zero() {
            self.values.remove(&class);
        } else {
            self.values.insert(class, value);
        }
        Ok(())
    }

    fn check_same(&self, other: &ClassFunction) -> Result<()> {
        if self.level != other.level {
            return Err(Error::LevelMismatch(format!("{} vs {}", self.level, other.level)));
        }
        if !(Arc::ptr_eq(&self.classes, &other.classes) || self.classes == other.classes) {
            return Err(Error::GroupMismatch(format!(
                "{} vs {}",
                self.classes.group().name(),
                other.classes.group().name()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &ClassFunction) -> Result<ClassFunction> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (&c, v) in &other.values {
            out.set(c, self.get(c).add(v)?)?;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &ClassFunction) -> Result<ClassFunction> {
        self.check_same(other)?;
        let mut out = ClassFunction::zero(self.classes.clone(), self.level)?;
        for (&c, v) in &self.values {
            if let Some(w) = other.values.get(&c) {
                out.set(c, v.mul(w)?)?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigRational) -> ClassFunction {
        let mut out = ClassFunction {
            classes: self.classes.clone(),
            level: self.level,
            values: BTreeMap::new(),
        };
        for (&k, v) in &self.values {
            out.set(k, v.scale(c)).expect("same level");
        }
        out
    }

    pub fn pow(&self, e: u32) -> ClassFunction {
        let mut out = ClassFunction::one(self.classes.clone(), self.level).expect("level already checked");
        for _ in 0..e {
            out = out.mul(self).expect("same group and level");
        }
        out
    }

    /// `(f·γ)([α]) = f([α γ^T])·γ` for `γ` invertible mod `p`.
    pub fn aut_act(&self, gamma: &IntMatrix) -> Result<ClassFunction> {
        let reduced = self.level.reduce(gamma);
        if !self.level.is_invertible(&reduced) {
            return Err(Error::NotInvertible);
        }
        let map = self.level.left_map(&reduced);
        let gt = gamma.transpose();
        let mut out = ClassFunction::zero(self.classes.clone(), self.level)?;
        for c in 0..self.classes.len() {
            let source = self.classes.precompose(c, &gt);
            if let Some(v) = self.values.get(&source) {
                out.set(c, v.gather(&map))?;
            }
        }
        Ok(out)
    }

    /// Projection onto `GL_n(Z/q)`-invariants by exact averaging.
    pub fn average(&self) -> Result<ClassFunction> {
        let group = self.level.general_linear();
        let mut total = ClassFunction::zero(self.classes.clone(), self.level)?;
        for gamma in &group {
            total = total.add(&self.aut_act(gamma)?)?;
        }
        Ok(total.scale(&BigRational::new(BigInt::one(), BigInt::from(group.len()))))
    }

    /// Invariance under every element of `GL_n(Z/q)`.
    pub fn is_invariant(&self) -> bool {
        self.level
            .general_linear()
            .iter()
            .all(|g| self.aut_act(g).map(|h| &h == self).unwrap_or(false))
    }

    /// `(γ^* f)([α]) = f([γα])` along `γ: G → K`, where `self` lives on `K`.
    pub fn restrict(&self, hom: &GroupHom, source: Arc<HomClasses>) -> Result<ClassFunction> {
        if hom.target().as_ref() != self.classes.group().as_ref() || hom.source().as_ref() != source.group().as_ref() {
            return Err(Error::GroupMismatch("restriction along a homomorphism with other endpoints".into()));
        }
        ClassFunction::from_fn(source.clone(), self.level, |c| self.get(source.push_forward(c, hom, &self.classes)))
    }

    /// `(s·f)([α]) = f([α])·s`
    pub fn stabilizer_act(&self, s: &StabilizerElement) -> Result<ClassFunction> {
        let mut out = ClassFunction::zero(self.classes.clone(), self.level)?;
        if s.level() != self.level {
            return Err(Error::LevelMismatch(format!("{} vs {}", s.level(), self.level)));
        }
        let map = self.level.right_map(s.matrix());
        for (&c, v) in &self.values {
            out.set(c, v.gather(&map))?;
        }
        Ok(out)
    }

    /// Same value on every class.
    pub fn is_constant(&self) -> bool {
        let first = self.get(0);
        (1..self.classes.len()).all(|c| self.get(c) == first)
    }
}

/// `(f ⊠ g)([(α, β)]) = f([α])·g([β])` on `G × K`, given the classes of
/// the two-factor product.
pub fn external_product(f: &ClassFunction, g: &ClassFunction, product: Arc<HomClasses>) -> Result<ClassFunction> {
    if f.level != g.level {
        return Err(Error::LevelMismatch(format!("{} vs {}", f.level, g.level)));
    }
    let group = product.group().clone();
    let factors = group
        .factors()
        .filter(|fs| fs.len() == 2)
        .ok_or_else(|| Error::GroupMismatch("external product needs a two-factor product".into()))?;
    if factors[0].as_ref() != f.classes.group().as_ref() || factors[1].as_ref() != g.classes.group().as_ref() {
        return Err(Error::GroupMismatch("factors differ from the class functions' groups".into()));
    }
    let level = f.level;
    let mut out = ClassFunction::zero(product.clone(), level)?;
    for c in 0..product.len() {
        let (left, right) = split_product_tuple(&group, product.rep(c));
        let a = f.classes.class_of(&left)?;
        let b = g.classes.class_of(&right)?;
        if let (Some(x), Some(y)) = (f.values.get(&a), g.values.get(&b)) {
            out.set(c, x.mul(y)?)?;
        }
    }
    Ok(out)
}

/// Splits a tuple in a two-factor product into its two coordinate tuples.
pub fn split_product_tuple(group: &crate::group::FiniteGroup, tuple: &[u32]) -> (Vec<u32>, Vec<u32>) {
    tuple
        .iter()
        .map(|&x| {
            let c = group.product_components(x);
            (c[0], c[1])
        })
        .unzip()
}

/// Rational as `"num/den"`.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a, b),
        None => (s, "1"),
    };
    let num: BigInt = num.trim().parse().map_err(|_| bad())?;
    let den: BigInt = den.trim().parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}
