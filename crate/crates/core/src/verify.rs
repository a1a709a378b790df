//! Exhaustive property checks at small parameters, grouped into suites.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::class_function::{external_product, C0Element, C0Level, ClassFunction, StabilizerElement};
use crate::error::{Error, Result};
use crate::formal_group::{default_degree, quotient_ring_rank, weierstrass_degree, CoeffRing, FormalGroupLaw};
use crate::group::{
    decorated_to_wreath_class, enumerate_decorated_sums, enumerate_hom_classes, sum_to_symm_class, symm_class_to_sum,
    wreath_class_to_decorated, FiniteGroup, GroupHom, HomClasses,
};
use crate::isogeny::{canonical_section, random_section, Section};
use crate::lemmas::{check_lem1, check_lem2, check_lem3, check_padicsum};
use crate::power::{section_bound, young_restriction, PowerOperation, TotalPowerOperation};
use crate::rng::SeededRng;
use crate::torsion::{enumerate_subgroups, enumerate_sums, TorsionSubgroup};
use crate::transfer::{transfer, transfer_ideal};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Bijections,
    Fgl,
    Invariance,
    Powerops,
    Stabilizer,
    Transfers,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Bijections,
        Suite::Fgl,
        Suite::Invariance,
        Suite::Powerops,
        Suite::Stabilizer,
        Suite::Transfers,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Bijections => "bijections",
            Suite::Fgl => "fgl",
            Suite::Invariance => "invariance",
            Suite::Powerops => "powerops",
            Suite::Stabilizer => "stabilizer",
            Suite::Transfers => "transfers",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `all` or a single suite name.
pub fn parse_suites(s: &str) -> Result<Vec<Suite>> {
    if s == "all" {
        return Ok(Suite::ALL.to_vec());
    }
    Ok(vec![s.parse()?])
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

/// Parameters of the class-function suites. Bijection, transfer and
/// formal-group suites run on fixed grids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub p: u64,
    pub n: usize,
    pub level: u32,
    pub max_m: usize,
    pub seed: u64,
    /// Random class functions per group.
    pub samples: usize,
    /// Seeded sections compared against the canonical one.
    pub sections: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            p: 2,
            n: 2,
            level: 2,
            max_m: 4,
            seed: 0,
            samples: 3,
            sections: 5,
        }
    }
}

impl VerifyOptions {
    fn c0(&self) -> C0Level {
        C0Level::new(self.p, self.n, self.level)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Check {
    pub suite: Suite,
    pub params: String,
    pub property: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(
                f,
                "{} {:<10} {:<34} {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.suite.name(),
                c.property,
                c.params
            )?;
            if !c.detail.is_empty() {
                write!(f, "  ({})", c.detail)?;
            }
            writeln!(f)?;
        }
        let failed = self.failures().count();
        writeln!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

/// Runs the suites; the report is sorted by suite, then parameters.
pub fn run(suites: &[Suite], options: &VerifyOptions) -> Report {
    let mut checks = Vec::new();
    for suite in suites.iter().collect::<BTreeSet<_>>() {
        let mut out = Checks::new(*suite);
        match suite {
            Suite::Bijections => bijections(&mut out),
            Suite::Transfers => transfers(&mut out),
            Suite::Powerops => powerops(&mut out, options),
            Suite::Invariance => invariance(&mut out, options),
            Suite::Stabilizer => stabilizer(&mut out, options),
            Suite::Fgl => fgl(&mut out),
        }
        checks.extend(out.checks);
    }
    checks.sort();
    Report { checks }
}

struct Checks {
    suite: Suite,
    checks: Vec<Check>,
}

impl Checks {
    fn new(suite: Suite) -> Self {
        Checks { suite, checks: vec![] }
    }

    /// Records `body`; an `Err` counts as a failure with the error as detail,
    /// a `Some(msg)` as a failure with that detail.
    fn add(&mut self, property: &str, params: String, body: impl FnOnce() -> Result<Option<String>>) {
        let (passed, detail) = match body() {
            Ok(None) => (true, String::new()),
            Ok(Some(msg)) => (false, msg),
            Err(e) => (false, format!("error: {e}")),
        };
        self.checks.push(Check {
            suite: self.suite,
            params,
            property: property.to_string(),
            passed,
            detail,
        });
    }
}

fn expect_eq<T: PartialEq + fmt::Debug>(got: T, want: T) -> Option<String> {
    (got != want).then(|| format!("got {got:?}, expected {want:?}"))
}

fn expect(cond: bool, msg: &str) -> Option<String> {
    (!cond).then(|| msg.to_string())
}

fn classes(group: &Arc<FiniteGroup>, n: usize, p: u64) -> Result<Arc<HomClasses>> {
    Ok(Arc::new(enumerate_hom_classes(group, n, p)?))
}

/// Canonical section plus `count` seeded ones, all up to `p^bound`.
pub fn test_sections(p: u64, n: usize, bound: u32, seed: u64, count: usize) -> Vec<Section> {
    std::iter::once(canonical_section(p, n, bound))
        .chain((0..count as u64).map(|i| random_section(p, n, bound, seed.wrapping_add(i + 1))))
        .collect()
}

/// Class-count equality and round trip of `hom(Λ, Σ_m)/~ ≅ Sum_m`.
pub fn check_conjiso(p: u64, n: usize, m: usize) -> Result<Option<String>> {
    let classes = enumerate_hom_classes(&FiniteGroup::symmetric(m)?, n, p)?;
    let sums = enumerate_sums(p, n, m as u64);
    if classes.len() != sums.len() {
        return Ok(Some(format!("{} classes vs {} sums", classes.len(), sums.len())));
    }
    let mut image = BTreeSet::new();
    for c in 0..classes.len() {
        let s = symm_class_to_sum(&classes, c)?;
        if sum_to_symm_class(&classes, &s)? != c {
            return Ok(Some(format!("class {c} does not round-trip")));
        }
        image.insert(s);
    }
    Ok(expect(image.len() == sums.len() && image.iter().eq(sums.iter()), "image differs from Sum_m"))
}

/// Transitive classes of `Σ_{p^k}` against `Sub_{p^k}`.
pub fn check_subiso(p: u64, n: usize, k: u32) -> Result<Option<String>> {
    let classes = enumerate_hom_classes(&FiniteGroup::symmetric(p.pow(k) as usize)?, n, p)?;
    let mut transitive = BTreeSet::new();
    for c in 0..classes.len() {
        let s = symm_class_to_sum(&classes, c)?;
        if s.len() == 1 {
            transitive.insert(s.summands()[0].clone());
        }
    }
    let subs: BTreeSet<_> = enumerate_subgroups(p, n, k).into_iter().collect();
    Ok(expect(transitive == subs, "transitive classes differ from Sub_{p^k}"))
}

/// Count and round trip of `hom(Λ, G≀Σ_m)/~ ≅ Sum_m(qz, G)`.
pub fn check_wreath_bijection(base: &Arc<FiniteGroup>, m: usize, n: usize, p: u64) -> Result<Option<String>> {
    let base_classes = enumerate_hom_classes(base, n, p)?;
    let wreath = enumerate_hom_classes(&FiniteGroup::wreath(base, m)?, n, p)?;
    let decorated = enumerate_decorated_sums(&base_classes, m as u64);
    if wreath.len() != decorated.len() {
        return Ok(Some(format!("{} classes vs {} decorated sums", wreath.len(), decorated.len())));
    }
    let mut image = BTreeSet::new();
    for c in 0..wreath.len() {
        let d = wreath_class_to_decorated(&wreath, c, &base_classes)?;
        if decorated_to_wreath_class(&wreath, &d, &base_classes)? != c {
            return Ok(Some(format!("class {c} does not round-trip")));
        }
        image.insert(d);
    }
    Ok(expect(image.len() == decorated.len(), "decorated sums hit twice"))
}

/// For `G = e` the wreath bijection is the symmetric one.
pub fn check_wreath_reduces(m: usize, n: usize, p: u64) -> Result<Option<String>> {
    let trivial = FiniteGroup::trivial();
    let base = enumerate_hom_classes(&trivial, n, p)?;
    let wreath_group = FiniteGroup::wreath(&trivial, m)?;
    let wreath = enumerate_hom_classes(&wreath_group, n, p)?;
    let sym_group = FiniteGroup::symmetric(m)?;
    let sym = enumerate_hom_classes(&sym_group, n, p)?;
    for c in 0..wreath.len() {
        let d = wreath_class_to_decorated(&wreath, c, &base)?;
        let tuple: Vec<u32> = wreath
            .rep(c)
            .iter()
            .map(|&w| sym_group.element_of_perm(wreath_group.perm(w)).expect("same permutations"))
            .collect();
        let s = symm_class_to_sum(&sym, sym.class_of(&tuple)?)?;
        if d.sum() != s {
            return Ok(Some(format!("class {c}: {:?} vs {:?}", d.sum(), s)));
        }
    }
    Ok(None)
}

fn bijections(out: &mut Checks) {
    for p in [2u64, 3] {
        for n in 1..=2 {
            for m in 1..=6 {
                out.add("conjiso count and round trip", format!("p={p} n={n} m={m}"), || check_conjiso(p, n, m));
            }
        }
    }
    for (m, want) in [(2usize, 4usize), (3, 4), (4, 17)] {
        out.add("sum counts", format!("p=2 n=2 m={m}"), || {
            Ok(expect_eq(enumerate_sums(2, 2, m as u64).len(), want))
        });
    }
    for n in 1..=2 {
        for k in 1..=2 {
            out.add("subiso", format!("p=2 n={n} k={k}"), || check_subiso(2, n, k));
        }
    }
    for spec in ["S2", "C2"] {
        for n in 1..=2 {
            out.add("wreath bijection", format!("G={spec} m=2 p=2 n={n}"), || {
                check_wreath_bijection(&FiniteGroup::parse(spec)?, 2, n, 2)
            });
        }
    }
    for m in 1..=4 {
        out.add("wreath bijection at G=e", format!("m={m} p=2 n=2"), || check_wreath_reduces(m, 2, 2));
    }
    for m in 1..=6 {
        for n in 1..=2 {
            let params = format!("p=2 n={n} m={m}");
            out.add("padicsum surjective", params.clone(), || {
                let c = check_padicsum(2, n, m)?;
                Ok(expect(c.passed(), &format!("{c:?}")))
            });
            out.add("lem1 injective", params, || {
                let c = check_lem1(2, n, m)?;
                Ok(expect(c.passed(), &format!("{c:?}")))
            });
        }
    }
    for m in 2..=5 {
        out.add("lem2 injective", format!("G=S{m} p=2 n=2"), || {
            let c = check_lem2(&FiniteGroup::symmetric(m)?, 2, 2)?;
            Ok(expect(c.passed(), &format!("{c:?}")))
        });
    }
    for n in 1..=2 {
        for k in 1..=2 {
            out.add("lem3 injective", format!("p=2 n={n} k={k}"), || {
                let c = check_lem3(2, n, k)?;
                Ok(expect(c.passed(), &format!("{c:?}")))
            });
        }
    }
}

fn transfers(out: &mut Checks) {
    for n in 1..=2 {
        for k in 1..=2u32 {
            out.add("transfer ideal quotient rank", format!("p=2 n={n} k={k}"), || {
                let ideal = transfer_ideal(&FiniteGroup::trivial(), 1 << k, n, 2)?;
                Ok(expect_eq(ideal.quotient_dim(), enumerate_subgroups(2, n, k).len()))
            });
            out.add("transfer ideal support", format!("p=2 n={n} k={k}"), || {
                let ideal = transfer_ideal(&FiniteGroup::trivial(), 1 << k, n, 2)?;
                for c in 0..ideal.classes().len() {
                    let multi = symm_class_to_sum(ideal.classes(), c)?.len() > 1;
                    if ideal.contains_indicator(c) != multi {
                        return Ok(Some(format!("class {c}")));
                    }
                }
                Ok(None)
            });
        }
    }
    out.add("transfer from G to G", "G=S3 p=2 n=2 N=1".into(), || {
        let g = FiniteGroup::symmetric(3)?;
        let cl = classes(&g, 2, 2)?;
        let f = ClassFunction::random(cl.clone(), C0Level::new(2, 2, 1), &mut SeededRng::new(0))?;
        Ok(expect(transfer(&f, &GroupHom::identity(&g), cl)? == f, "Tr differs from f"))
    });
    out.add("transfer from e to S2", "p=2 n=1 N=1".into(), || {
        let s2 = FiniteGroup::symmetric(2)?;
        let e = FiniteGroup::trivial();
        let level = C0Level::new(2, 1, 1);
        let inc = GroupHom::from_perm_embedding(e.clone(), s2.clone())?;
        let tr = transfer(&ClassFunction::one(classes(&e, 1, 2)?, level)?, &inc, classes(&s2, 1, 2)?)?;
        let two = C0Element::constant(level, BigRational::from_integer(BigInt::from(2)));
        Ok(expect(tr.get(0) == two && tr.get(1).is_zero(), "expected Tr(1) = (2, 0)"))
    });
    for (i, j) in [(1usize, 1usize), (1, 2), (2, 2), (1, 3)] {
        out.add("Tr(1) counts fixed cosets", format!("i={i} j={j} p=2 n=2"), || {
            let inc = crate::group::delta_embed(i, j)?;
            let level = C0Level::new(2, 2, 2);
            let source = classes(inc.source(), 2, 2)?;
            let target = classes(inc.target(), 2, 2)?;
            let tr = transfer(&ClassFunction::one(source, level)?, &inc, target.clone())?;
            let h: Vec<u32> = inc.source().elements().map(|x| inc.apply(x)).collect();
            for (a, rep) in target.reps().iter().enumerate() {
                let direct = target.group().fixed_cosets(&h, rep)?.len();
                let want = C0Element::constant(level, BigRational::from_integer(BigInt::from(direct)));
                if tr.get(a) != want {
                    return Ok(Some(format!("class {a}")));
                }
            }
            Ok(None)
        });
    }
}

fn power_groups() -> [&'static str; 3] {
    ["C1", "C2", "S3"]
}

fn powerops(out: &mut Checks, o: &VerifyOptions) {
    let level = o.c0();
    for spec in power_groups() {
        for m in 1..=o.max_m {
            let params = format!("G={spec} m={m} p={} n={} N={}", o.p, o.n, o.level);
            let setup = || -> Result<(Arc<HomClasses>, PowerOperation, Vec<Section>)> {
                let cl = classes(&FiniteGroup::parse(spec)?, o.n, o.p)?;
                let op = PowerOperation::new(cl.clone(), m)?;
                let sections = test_sections(o.p, o.n, section_bound(o.p, m), o.seed, 2);
                Ok((cl, op, sections))
            };
            out.add("P(1) = 1", params.clone(), || {
                let (cl, op, sections) = setup()?;
                let one = ClassFunction::one(op.product().clone(), level)?;
                for s in &sections {
                    if op.apply(&ClassFunction::one(cl.clone(), level)?, s)? != one {
                        return Ok(Some(format!("section {}", s.kind())));
                    }
                }
                Ok(None)
            });
            out.add("P(fg) = P(f)P(g)", params.clone(), || {
                let (cl, op, sections) = setup()?;
                let mut rng = SeededRng::new(o.seed);
                for s in &sections {
                    let f = ClassFunction::random(cl.clone(), level, &mut rng)?;
                    let g = ClassFunction::random(cl.clone(), level, &mut rng)?;
                    if op.apply(&f.mul(&g)?, s)? != op.apply(&f, s)?.mul(&op.apply(&g, s)?)? {
                        return Ok(Some(format!("section {}", s.kind())));
                    }
                }
                Ok(None)
            });
            out.add("m-th power identity", params.clone(), || {
                let (cl, op, sections) = setup()?;
                let inc = op.base_inclusion()?;
                let mut rng = SeededRng::new(o.seed);
                // φ_e is the identity for the canonical section; in general
                // the restriction is (f·φ_e)^m
                for s in &sections {
                    let f = ClassFunction::random(cl.clone(), level, &mut rng)?;
                    let phi_e = s.get(&TorsionSubgroup::trivial(o.p, o.n))?.matrix();
                    if op.apply(&f, s)?.restrict(&inc, cl.clone())? != f.aut_act(phi_e)?.pow(m as u32) {
                        return Ok(Some(format!("section {}", s.kind())));
                    }
                }
                Ok(None)
            });
            if m == 1 {
                out.add("P_1 is the identity", params.clone(), || {
                    let (cl, op, _) = setup()?;
                    let f = ClassFunction::random(cl.clone(), level, &mut SeededRng::new(o.seed))?;
                    let p1 = op.apply(&f, &canonical_section(o.p, o.n, 0))?;
                    Ok(expect(p1.restrict(&op.base_inclusion()?, cl)? == f, "P_1(f) differs from f"))
                });
            }
            for i in 1..m {
                out.add("restriction identity", format!("{params} i={i}"), || {
                    let (cl, _, sections) = setup()?;
                    check_restriction_identity(&cl, level, i, m - i, &sections, o.seed)
                });
            }
        }
    }
    for m in 1..=o.max_m.min(3) {
        out.add("naturality along C2 -> S3", format!("m={m} p={} n={} N={}", o.p, o.n, o.level), || {
            check_naturality(o, m)
        });
    }
    for spec in ["C1", "C2", "S2"] {
        for m in 1..=o.max_m.min(3) {
            out.add("diagonal compatibility", format!("G={spec} m={m} p={} n={} N={}", o.p, o.n, o.level), || {
                check_diagonal(&FiniteGroup::parse(spec)?, m, o)
            });
        }
    }
    out.add("hand-expanded table", "G=C1 m=2 p=2 n=1 N=2".into(), || {
        let level = C0Level::new(2, 1, 2);
        let cl = classes(&FiniteGroup::trivial(), 1, 2)?;
        let f = ClassFunction::constant(cl.clone(), C0Element::coordinate(level))?;
        let op = PowerOperation::new(cl, 2)?;
        let out = op.apply(&f, &canonical_section(2, 1, 1))?;
        let ints = |v: &[i64]| v.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect::<Vec<_>>();
        Ok(expect(
            out.get(0).values() == ints(&[0, 1, 4, 9]) && out.get(1).values() == ints(&[0, 2, 0, 2]),
            "table differs",
        ))
    });
}

/// `Δ_{i,j}^* P_{i+j}(f) = Δ^*(P_i(f) ⊠ P_j(f))` for random `f`, per section.
pub fn check_restriction_identity(
    cl: &Arc<HomClasses>,
    level: C0Level,
    i: usize,
    j: usize,
    sections: &[Section],
    seed: u64,
) -> Result<Option<String>> {
    let (n, p) = (cl.n(), cl.p());
    let pm = PowerOperation::new(cl.clone(), i + j)?;
    let pi = PowerOperation::new(cl.clone(), i)?;
    let pj = PowerOperation::new(cl.clone(), j)?;
    let maps = young_restriction(
        cl.group(),
        i,
        j,
        pm.product().group(),
        pi.product().group(),
        pj.product().group(),
    )?;
    let source = classes(&maps.source, n, p)?;
    let pair = classes(maps.into_pair.target(), n, p)?;
    let mut rng = SeededRng::new(seed);
    for s in sections {
        let f = ClassFunction::random(cl.clone(), level, &mut rng)?;
        let lhs = pm.apply(&f, s)?.restrict(&maps.into_sum, source.clone())?;
        let ext = external_product(&pi.apply(&f, s)?, &pj.apply(&f, s)?, pair.clone())?;
        if lhs != ext.restrict(&maps.into_pair, source.clone())? {
            return Ok(Some(format!("section {}", s.kind())));
        }
    }
    Ok(None)
}

/// `P_m(γ^* f) = (γ × id)^* P_m(f)` along `C_2 → Σ_2 ⊂ Σ_3`.
pub fn check_naturality(o: &VerifyOptions, m: usize) -> Result<Option<String>> {
    let level = o.c0();
    let c2 = FiniteGroup::cyclic(2)?;
    let s2 = FiniteGroup::symmetric(2)?;
    let s3 = FiniteGroup::symmetric(3)?;
    let gamma = GroupHom::from_perm_embedding(s2.clone(), s3.clone())?.compose(&GroupHom::from_perm_embedding(
        c2.clone(),
        s2,
    )?)?;
    let small = classes(&c2, o.n, o.p)?;
    let big = classes(&s3, o.n, o.p)?;
    let small_op = PowerOperation::new(small.clone(), m)?;
    let big_op = PowerOperation::new(big.clone(), m)?;
    let sym = FiniteGroup::symmetric(m)?;
    let gamma_m = GroupHom::product(
        &gamma,
        &GroupHom::identity(&sym),
        small_op.product().group().clone(),
        big_op.product().group().clone(),
    )?;
    let mut rng = SeededRng::new(o.seed);
    for s in test_sections(o.p, o.n, section_bound(o.p, m), o.seed, 2) {
        let f = ClassFunction::random(big.clone(), level, &mut rng)?;
        let lhs = small_op.apply(&f.restrict(&gamma, small.clone())?, &s)?;
        let rhs = big_op.apply(&f, &s)?.restrict(&gamma_m, small_op.product().clone())?;
        if lhs != rhs {
            return Ok(Some(format!("section {}", s.kind())));
        }
    }
    Ok(None)
}

/// `ℙ_m(f)` restricted along `G × Σ_m → G ≀ Σ_m` is `P_m(f)`.
pub fn check_diagonal(base: &Arc<FiniteGroup>, m: usize, o: &VerifyOptions) -> Result<Option<String>> {
    let level = o.c0();
    let cl = classes(base, o.n, o.p)?;
    let op = PowerOperation::new(cl.clone(), m)?;
    let total = TotalPowerOperation::new(cl.clone(), m)?;
    let diag = total.diagonal(op.product().group())?;
    let mut rng = SeededRng::new(o.seed);
    for s in test_sections(o.p, o.n, section_bound(o.p, m), o.seed, 2) {
        let f = ClassFunction::random(cl.clone(), level, &mut rng)?;
        let restricted = total.apply(&f, &s)?.restrict(&diag, op.product().clone())?;
        if restricted != op.apply(&f, &s)? {
            return Ok(Some(format!("section {}", s.kind())));
        }
    }
    Ok(None)
}

/// For `samples` random invariant `f`: `P_m(f)` is invariant and the same
/// for the canonical and every seeded section.
pub fn check_invariants(
    cl: &Arc<HomClasses>,
    level: C0Level,
    m: usize,
    samples: usize,
    sections: usize,
    seed: u64,
) -> Result<Option<String>> {
    let op = PowerOperation::new(cl.clone(), m)?;
    let sections = test_sections(cl.p(), cl.n(), section_bound(cl.p(), m), seed, sections);
    let mut rng = SeededRng::new(seed);
    for k in 0..samples {
        let f = ClassFunction::random(cl.clone(), level, &mut rng)?.average()?;
        let reference = op.apply(&f, &sections[0])?;
        if !reference.is_invariant() {
            return Ok(Some(format!("sample {k}: P(f) is not invariant")));
        }
        for s in &sections[1..] {
            if op.apply(&f, s)? != reference {
                return Ok(Some(format!("sample {k}: section {} differs", s.kind())));
            }
        }
    }
    Ok(None)
}

fn invariance(out: &mut Checks, o: &VerifyOptions) {
    let level = o.c0();
    let params = |spec: &str| format!("G={spec} p={} n={} N={}", o.p, o.n, o.level);
    for spec in power_groups() {
        out.add("average is idempotent and invariant", params(spec), || {
            let cl = classes(&FiniteGroup::parse(spec)?, o.n, o.p)?;
            let avg = ClassFunction::random(cl, level, &mut SeededRng::new(o.seed))?.average()?;
            Ok(expect(avg.is_invariant() && avg.average()? == avg, "average is not a projection"))
        });
        out.add("right action law", params(spec), || {
            let cl = classes(&FiniteGroup::parse(spec)?, o.n, o.p)?;
            let mut rng = SeededRng::new(o.seed);
            let f = ClassFunction::random(cl, level, &mut rng)?;
            for _ in 0..4 {
                let a = level.lift(&level.random_invertible(&mut rng));
                let b = level.lift(&level.random_invertible(&mut rng));
                if f.aut_act(&a)?.aut_act(&b)? != f.aut_act(&(&a * &b))? {
                    return Ok(Some("(f.a).b differs from f.(ab)".into()));
                }
            }
            Ok(None)
        });
        for m in 1..=o.max_m {
            out.add(
                "invariants preserved, section independent",
                format!("{} m={m} samples={} sections={}", params(spec), o.samples, o.sections),
                || {
                    let cl = classes(&FiniteGroup::parse(spec)?, o.n, o.p)?;
                    check_invariants(&cl, level, m, o.samples, o.sections, o.seed)
                },
            );
        }
    }
}

/// `P_m(s·f) = s·P_m(f)` and `ℙ_m(s·f) = s·ℙ_m(f)` for `count` random `s`.
pub fn check_stabilizer(
    base: &Arc<FiniteGroup>,
    m: usize,
    o: &VerifyOptions,
    count: usize,
    total: bool,
) -> Result<Option<String>> {
    let level = o.c0();
    let cl = classes(base, o.n, o.p)?;
    let section = test_sections(o.p, o.n, section_bound(o.p, m), o.seed, 1).pop().expect("one seeded section");
    let mut rng = SeededRng::new(o.seed);
    let apply = |f: &ClassFunction| -> Result<ClassFunction> {
        if total {
            TotalPowerOperation::new(cl.clone(), m)?.apply(f, &section)
        } else {
            PowerOperation::new(cl.clone(), m)?.apply(f, &section)
        }
    };
    let f = ClassFunction::random(cl.clone(), level, &mut rng)?;
    let pf = apply(&f)?;
    for k in 0..count {
        let s = StabilizerElement::random(level, &mut rng);
        if apply(&f.stabilizer_act(&s)?)? != pf.stabilizer_act(&s)? {
            return Ok(Some(format!("stabilizer element {k}")));
        }
    }
    Ok(None)
}

fn stabilizer(out: &mut Checks, o: &VerifyOptions) {
    let level = o.c0();
    out.add("identity acts trivially", format!("p={} n={} N={}", o.p, o.n, o.level), || {
        let cl = classes(&FiniteGroup::symmetric(3)?, o.n, o.p)?;
        let f = ClassFunction::random(cl, level, &mut SeededRng::new(o.seed))?;
        Ok(expect(f.stabilizer_act(&StabilizerElement::identity(level))? == f, "identity moved f"))
    });
    out.add("constants are fixed", format!("p={} n={} N={}", o.p, o.n, o.level), || {
        let mut rng = SeededRng::new(o.seed);
        let c = C0Element::constant(level, BigRational::new(BigInt::from(-3), BigInt::from(7)));
        for _ in 0..10 {
            if c.act_stabilizer(&StabilizerElement::random(level, &mut rng))? != c {
                return Ok(Some("constant moved".into()));
            }
        }
        Ok(None)
    });
    out.add("commutes with isogenies", format!("p={} n={} N={}", o.p, o.n, o.level), || {
        let mut rng = SeededRng::new(o.seed);
        for _ in 0..10 {
            let c = C0Element::random(level, &mut rng);
            let s = StabilizerElement::random(level, &mut rng);
            let a = crate::isogeny::random_unimodular(o.n, &mut rng).scaled(&BigInt::from(o.p));
            if c.act_isogeny(&a).act_stabilizer(&s)? != c.act_stabilizer(&s)?.act_isogeny(&a) {
                return Ok(Some("actions do not commute".into()));
            }
        }
        Ok(None)
    });
    for spec in power_groups() {
        for m in 1..=o.max_m {
            out.add("commutes with P_m", format!("G={spec} m={m} p={} n={} N={}", o.p, o.n, o.level), || {
                check_stabilizer(&FiniteGroup::parse(spec)?, m, o, 10, false)
            });
        }
    }
    for spec in ["C1", "C2", "S2"] {
        for m in 1..=o.max_m.min(3) {
            out.add(
                "commutes with total P_m",
                format!("G={spec} m={m} p={} n={} N={}", o.p, o.n, o.level),
                || check_stabilizer(&FiniteGroup::parse(spec)?, m, o, 10, true),
            );
        }
    }
}

fn int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn fgl(out: &mut Checks) {
    out.add("[2](x) = 2x + x^2", "multiplicative over Q".into(), || {
        let s = FormalGroupLaw::multiplicative(CoeffRing::Rationals, 6)?.i_series(2)?;
        Ok(expect_eq(s.terms(), vec![(vec![1], int(2)), (vec![2], int(1))]))
    });
    for p in [2u64, 3] {
        out.add("weierstrass degree of [p]", format!("multiplicative p={p}"), || {
            let f = FormalGroupLaw::multiplicative(CoeffRing::PLocal(p), p as usize + 2)?;
            Ok(expect_eq(weierstrass_degree(&f.i_series(p)?)?, p as usize))
        });
    }
    for (p, h) in [(2u64, 1u32), (2, 2), (3, 1)] {
        let params = format!("honda p={p} n={h}");
        out.add("[p](x) = x^(p^n) mod p", params.clone(), || {
            let f = FormalGroupLaw::honda(p, h, default_degree(p, h), CoeffRing::prime_field(p))?;
            let s = f.i_series(p)?;
            Ok(expect_eq(s.terms(), vec![(vec![p.pow(h) as usize], BigRational::one())]))
        });
        out.add("axioms and associativity", params.clone(), || {
            let f = FormalGroupLaw::honda(p, h, default_degree(p, h), CoeffRing::prime_field(p))?;
            Ok(expect(
                f.satisfies_unit_and_commutativity() && f.associativity_residual()?.is_zero(),
                "axiom fails",
            ))
        });
        out.add("[i+j] = F([i], [j])", params.clone(), || {
            let f = FormalGroupLaw::honda(p, h, default_degree(p, h), CoeffRing::prime_field(p))?;
            for (i, j) in [(1u64, 1u64), (1, 2), (2, 3)] {
                if f.i_series(i + j)? != f.apply(&f.i_series(i)?, &f.i_series(j)?)? {
                    return Ok(Some(format!("i={i} j={j}")));
                }
            }
            Ok(None)
        });
        out.add("deg [p^2] = (deg [p])^2", params, || {
            let f = FormalGroupLaw::honda(p, h, default_degree(p, h), CoeffRing::prime_field(p))?;
            let d1 = weierstrass_degree(&f.i_series(p)?)?;
            Ok(expect_eq(weierstrass_degree(&f.i_series(p * p)?)?, d1 * d1))
        });
    }
    out.add("quotient ring rank", "honda p=2 n=2 k=1".into(), || {
        let f = FormalGroupLaw::honda(2, 2, default_degree(2, 2), CoeffRing::prime_field(2))?;
        Ok(expect_eq(quotient_ring_rank(&f, 2, &[1])?.rank, 4))
    });
    out.add("quotient ring rank", "honda p=2 n=2 A=C2xC2".into(), || {
        let f = FormalGroupLaw::honda(2, 2, default_degree(2, 2), CoeffRing::prime_field(2))?;
        Ok(expect_eq(quotient_ring_rank(&f, 2, &[1, 1])?.rank, 16))
    });
    out.add("quotient ring rank", "multiplicative p=3 k=1".into(), || {
        let f = FormalGroupLaw::multiplicative(CoeffRing::prime_field(3), 4)?;
        Ok(expect_eq(quotient_ring_rank(&f, 3, &[1])?.rank, 3))
    });
    out.add("honda over Q is p-integral", "p=2 n=2".into(), || {
        let f = FormalGroupLaw::honda(2, 2, default_degree(2, 2), CoeffRing::Rationals)?;
        Ok(expect(
            f.series().terms().iter().all(|(_, c)| CoeffRing::PLocal(2).reduce(c).is_ok()),
            "non-integral coefficient",
        ))
    });
    out.add("additive [p] vanishes mod p", "p=3".into(), || {
        let f = FormalGroupLaw::additive(CoeffRing::prime_field(3), 5)?;
        Ok(expect(f.i_series(3)?.is_zero() && f.i_series(2)?.coeff1(1) == int(2), "unexpected series"))
    });
}
