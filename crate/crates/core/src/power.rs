//! The power operations `P_m^φ: Cl_n(G, C_0) → Cl_n(G × Σ_m, C_0)` and the
//! total power operations `ℙ_m^φ: Cl_n(G, C_0) → Cl_n(G ≀ Σ_m, C_0)`.
//!
//! A class of `G × Σ_m` is a pair `([α], ⊕ H_i)` and
//! `P_m^φ(f)([α], ⊕ H_i) = Π_i f([α φ_{H_i}^*])·φ_{H_i}`.
//! A class of `G ≀ Σ_m` is a decorated sum `⊕ (H_i, [α_i])` and
//! `ℙ_m^φ(f)(⊕ (H_i, [α_i])) = Π_i f([α_i ψ_{H_i}^*])·φ_{H_i}`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::class_function::{split_product_tuple, C0Element, ClassFunction};
use crate::error::{Error, Result};
use crate::group::{
    delta_embed, enumerate_hom_classes, symm_tuple_to_sum, wreath_class_to_decorated, DecoratedSum, FiniteGroup,
    GroupHom, HomClasses,
};
use crate::isogeny::{psi_dual, Section};
use crate::lattice::IntMatrix;
use crate::torsion::{SumOfSubgroups, TorsionSubgroup};

/// `floor(log_p m)`: the largest kernel exponent among sums of total `m`.
pub fn section_bound(p: u64, m: usize) -> u32 {
    let mut b = 0;
    while p.pow(b + 1) <= m as u64 {
        b += 1;
    }
    b
}

fn check_inputs(f: &ClassFunction, base: &HomClasses, section: &Section, m: usize) -> Result<()> {
    if f.classes().as_ref() != base {
        return Err(Error::GroupMismatch("class function lives on another group".into()));
    }
    let level = f.level();
    if section.p() != level.p || section.n() != level.n {
        return Err(Error::LevelMismatch(format!(
            "section over p={} n={} used at {level}",
            section.p(),
            section.n()
        )));
    }
    let bound = section_bound(level.p, m);
    if level.level < bound {
        return Err(Error::LevelMismatch(format!(
            "m = {m} produces kernels of order p^{bound}; level must be at least {bound}"
        )));
    }
    Ok(())
}

/// Memo of `f([β])·A` keyed by `(A, class)`.
struct Twists<'a> {
    f: &'a ClassFunction,
    cache: HashMap<(IntMatrix, usize), C0Element>,
}

impl<'a> Twists<'a> {
    fn new(f: &'a ClassFunction) -> Self {
        Twists {
            f,
            cache: HashMap::new(),
        }
    }

    fn get(&mut self, class: usize, isogeny: &IntMatrix) -> C0Element {
        let f = self.f;
        self.cache
            .entry((isogeny.clone(), class))
            .or_insert_with(|| f.get(class).act_isogeny(isogeny))
            .clone()
    }
}

/// Precomputed class bookkeeping for `P_m^φ` on a fixed group.
pub struct PowerOperation {
    base: Arc<HomClasses>,
    m: usize,
    product: Arc<HomClasses>,
    /// per class of `G × Σ_m`: the class of the `G`-part and the sum
    decomposition: Vec<(usize, SumOfSubgroups)>,
}

impl PowerOperation {
    pub fn new(base: Arc<HomClasses>, m: usize) -> Result<Self> {
        let (n, p) = (base.n(), base.p());
        let sym = FiniteGroup::symmetric(m)?;
        let group = FiniteGroup::product(&[base.group().clone(), sym.clone()])?;
        let product = Arc::new(enumerate_hom_classes(&group, n, p)?);
        let decomposition = product
            .reps()
            .iter()
            .map(|rep| {
                let (g, s) = split_product_tuple(&group, rep);
                Ok((base.class_of(&g)?, symm_tuple_to_sum(&sym, &s, p)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PowerOperation {
            base,
            m,
            product,
            decomposition,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn base(&self) -> &Arc<HomClasses> {
        &self.base
    }

    /// Classes of `G × Σ_m`.
    pub fn product(&self) -> &Arc<HomClasses> {
        &self.product
    }

    /// `([α], ⊕ H_i)` for a class of `G × Σ_m`.
    pub fn decomposition(&self, class: usize) -> (usize, &SumOfSubgroups) {
        let (a, s) = &self.decomposition[class];
        (*a, s)
    }

    pub fn apply(&self, f: &ClassFunction, section: &Section) -> Result<ClassFunction> {
        check_inputs(f, &self.base, section, self.m)?;
        let level = f.level();
        let mut twists = Twists::new(f);
        let mut out = ClassFunction::zero(self.product.clone(), level)?;
        for (c, (alpha, sum)) in self.decomposition.iter().enumerate() {
            let mut value = C0Element::one(level);
            for h in sum.summands() {
                let phi = section.get(h)?.matrix();
                let beta = self.base.precompose(*alpha, &phi.transpose());
                value = value.mul(&twists.get(beta, phi))?;
                if value.is_zero() {
                    break;
                }
            }
            out.set(c, value)?;
        }
        Ok(out)
    }

    /// `g ↦ (g, e)`, along which `P_m` restricts to the `m`-th power.
    pub fn base_inclusion(&self) -> Result<GroupHom> {
        let target = self.product.group().clone();
        let t = target.clone();
        GroupHom::from_fn(self.base.group().clone(), target, |g| t.product_element(&[g, 0]))
    }
}

/// One-shot form of [`PowerOperation::apply`].
pub fn power_op(f: &ClassFunction, m: usize, section: &Section) -> Result<ClassFunction> {
    PowerOperation::new(f.classes().clone(), m)?.apply(f, section)
}

/// Precomputed class bookkeeping for `ℙ_m^φ`.
pub struct TotalPowerOperation {
    base: Arc<HomClasses>,
    m: usize,
    wreath: Arc<HomClasses>,
    decorated: Vec<DecoratedSum>,
}

impl TotalPowerOperation {
    pub fn new(base: Arc<HomClasses>, m: usize) -> Result<Self> {
        let group = FiniteGroup::wreath(base.group(), m)?;
        let wreath = Arc::new(enumerate_hom_classes(&group, base.n(), base.p())?);
        let decorated = (0..wreath.len())
            .map(|c| wreath_class_to_decorated(&wreath, c, &base))
            .collect::<Result<Vec<_>>>()?;
        Ok(TotalPowerOperation {
            base,
            m,
            wreath,
            decorated,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn wreath(&self) -> &Arc<HomClasses> {
        &self.wreath
    }

    pub fn decorated(&self, class: usize) -> &DecoratedSum {
        &self.decorated[class]
    }

    pub fn apply(&self, f: &ClassFunction, section: &Section) -> Result<ClassFunction> {
        check_inputs(f, &self.base, section, self.m)?;
        let level = f.level();
        let mut twists = Twists::new(f);
        let mut psi: HashMap<&TorsionSubgroup, IntMatrix> = HashMap::new();
        let mut out = ClassFunction::zero(self.wreath.clone(), level)?;
        for (c, sum) in self.decorated.iter().enumerate() {
            let mut value = C0Element::one(level);
            for (h, alpha) in sum.summands() {
                let phi = section.get(h)?;
                let x = psi.entry(h).or_insert_with(|| psi_dual(phi));
                let beta = self.base.precompose(*alpha, x);
                value = value.mul(&twists.get(beta, phi.matrix()))?;
                if value.is_zero() {
                    break;
                }
            }
            out.set(c, value)?;
        }
        Ok(out)
    }

    /// `(g, s) ↦ ((g, …, g), s)` from `G × Σ_m` into `G ≀ Σ_m`.
    pub fn diagonal(&self, product: &Arc<FiniteGroup>) -> Result<GroupHom> {
        let wreath = self.wreath.group().clone();
        let w = wreath.clone();
        let prod = product.clone();
        let m = self.m;
        GroupHom::from_fn(product.clone(), wreath, |x| {
            let c = prod.product_components(x);
            w.wreath_encode(&vec![c[0]; m], c[1])
        })
    }
}

pub fn total_power_op(f: &ClassFunction, m: usize, section: &Section) -> Result<ClassFunction> {
    TotalPowerOperation::new(f.classes().clone(), m)?.apply(f, section)
}

/// The two homomorphisms out of `G × Σ_i × Σ_j` compared by the
/// restriction identity: `id × Δ_{i,j}` into `G × Σ_{i+j}` and the diagonal
/// into `(G × Σ_i) × (G × Σ_j)`.
pub struct YoungRestriction {
    pub source: Arc<FiniteGroup>,
    pub into_sum: GroupHom,
    pub into_pair: GroupHom,
}

pub fn young_restriction(
    base: &Arc<FiniteGroup>,
    i: usize,
    j: usize,
    sum_group: &Arc<FiniteGroup>,
    left: &Arc<FiniteGroup>,
    right: &Arc<FiniteGroup>,
) -> Result<YoungRestriction> {
    let delta = delta_embed(i, j)?;
    let young = delta.source().clone();
    let source = FiniteGroup::product(&[base.clone(), young.clone()])?;
    let pair = FiniteGroup::product(&[left.clone(), right.clone()])?;
    let (src, sg) = (source.clone(), sum_group.clone());
    let into_sum = GroupHom::from_fn(source.clone(), sum_group.clone(), |x| {
        let c = src.product_components(x);
        sg.product_element(&[c[0], delta.apply(c[1])])
    })?;
    let (src, pr, l, r, y) = (source.clone(), pair.clone(), left.clone(), right.clone(), young.clone());
    let into_pair = GroupHom::from_fn(source.clone(), pair, |x| {
        let c = src.product_components(x);
        let st = y.product_components(c[1]);
        pr.product_element(&[l.product_element(&[c[0], st[0]]), r.product_element(&[c[0], st[1]])])
    })?;
    Ok(YoungRestriction {
        source,
        into_sum,
        into_pair,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::class_function::{external_product, C0Level, StabilizerElement};
    use crate::isogeny::{canonical_section, random_section};
    use crate::rng::SeededRng;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn classes(spec: &str, n: usize) -> Arc<HomClasses> {
        Arc::new(enumerate_hom_classes(&FiniteGroup::parse(spec).unwrap(), n, 2).unwrap())
    }

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()
    }

    #[test]
    fn p1_is_identity() {
        let cl = classes("S3", 2);
        let level = C0Level::new(2, 2, 2);
        let f = ClassFunction::random(cl.clone(), level, &mut SeededRng::new(1)).unwrap();
        let op = PowerOperation::new(cl.clone(), 1).unwrap();
        let p1 = op.apply(&f, &canonical_section(2, 2, 0)).unwrap();
        assert_eq!(p1.restrict(&op.base_inclusion().unwrap(), cl).unwrap(), f);
    }

    #[test]
    fn power_of_one_is_one() {
        let cl = classes("C2", 2);
        let level = C0Level::new(2, 2, 2);
        let one = ClassFunction::one(cl.clone(), level).unwrap();
        for m in 1..=4 {
            let op = PowerOperation::new(cl.clone(), m).unwrap();
            let out = op.apply(&one, &random_section(2, 2, 2, 5)).unwrap();
            assert_eq!(out, ClassFunction::one(op.product().clone(), level).unwrap());
        }
    }

    /// n = 1, p = 2, m = 2, G trivial, f = the coordinate ξ at level 2.
    /// Σ_2 has the class of the identity (sum e ⊕ e, value ξ²) and the
    /// transposition (H of order 2 with φ_H = 2, value (2ξ mod 4)).
    #[test]
    fn hand_expanded_table() {
        let cl = classes("C1", 1);
        let level = C0Level::new(2, 1, 2);
        let f = ClassFunction::constant(cl.clone(), C0Element::coordinate(level)).unwrap();
        let op = PowerOperation::new(cl, 2).unwrap();
        let out = op.apply(&f, &canonical_section(2, 1, 1)).unwrap();
        assert_eq!(out.get(0).values(), ints(&[0, 1, 4, 9]).as_slice());
        assert_eq!(out.get(1).values(), ints(&[0, 2, 0, 2]).as_slice());
    }

    #[test]
    fn multiplicative() {
        let cl = classes("S3", 2);
        let level = C0Level::new(2, 2, 2);
        let mut rng = SeededRng::new(2);
        let f = ClassFunction::random(cl.clone(), level, &mut rng).unwrap();
        let g = ClassFunction::random(cl.clone(), level, &mut rng).unwrap();
        let op = PowerOperation::new(cl, 3).unwrap();
        let s = random_section(2, 2, 1, 9);
        let lhs = op.apply(&f.mul(&g).unwrap(), &s).unwrap();
        let rhs = op.apply(&f, &s).unwrap().mul(&op.apply(&g, &s).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn mth_power_identity() {
        let cl = classes("C2", 2);
        let level = C0Level::new(2, 2, 2);
        let f = ClassFunction::random(cl.clone(), level, &mut SeededRng::new(3)).unwrap();
        for m in 1..=4 {
            let op = PowerOperation::new(cl.clone(), m).unwrap();
            let out = op.apply(&f, &canonical_section(2, 2, section_bound(2, m))).unwrap();
            assert_eq!(out.restrict(&op.base_inclusion().unwrap(), cl.clone()).unwrap(), f.pow(m as u32));
        }
    }

    #[test]
    fn restriction_identity() {
        let cl = classes("C2", 2);
        let level = C0Level::new(2, 2, 2);
        let f = ClassFunction::random(cl.clone(), level, &mut SeededRng::new(4)).unwrap();
        let section = random_section(2, 2, 2, 17);
        let (i, j) = (1, 2);
        let pm = PowerOperation::new(cl.clone(), i + j).unwrap();
        let pi = PowerOperation::new(cl.clone(), i).unwrap();
        let pj = PowerOperation::new(cl.clone(), j).unwrap();
        let maps = young_restriction(
            cl.group(),
            i,
            j,
            pm.product().group(),
            pi.product().group(),
            pj.product().group(),
        )
        .unwrap();
        let source = Arc::new(enumerate_hom_classes(&maps.source, 2, 2).unwrap());
        let lhs = pm.apply(&f, &section).unwrap().restrict(&maps.into_sum, source.clone()).unwrap();
        let pair = Arc::new(enumerate_hom_classes(maps.into_pair.target(), 2, 2).unwrap());
        let ext = external_product(&pi.apply(&f, &section).unwrap(), &pj.apply(&f, &section).unwrap(), pair).unwrap();
        let rhs = ext.restrict(&maps.into_pair, source).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn total_power_op_restricts_to_power_op() {
        let cl = classes("S2", 2);
        let level = C0Level::new(2, 2, 2);
        let f = ClassFunction::random(cl.clone(), level, &mut SeededRng::new(5)).unwrap();
        let section = random_section(2, 2, 1, 23);
        let op = PowerOperation::new(cl.clone(), 2).unwrap();
        let total = TotalPowerOperation::new(cl, 2).unwrap();
        let diag = total.diagonal(op.product().group()).unwrap();
        let restricted = total.apply(&f, &section).unwrap().restrict(&diag, op.product().clone()).unwrap();
        assert_eq!(restricted, op.apply(&f, &section).unwrap());
    }

    #[test]
    fn total_power_op_for_trivial_group_matches_power_op() {
        let cl = classes("C1", 2);
        let level = C0Level::new(2, 2, 2);
        let f = ClassFunction::random(cl.clone(), level, &mut SeededRng::new(6)).unwrap();
        let section = random_section(2, 2, 2, 1);
        let op = PowerOperation::new(cl.clone(), 4).unwrap();
        let total = TotalPowerOperation::new(cl, 4).unwrap();
        let p = op.apply(&f, &section).unwrap();
        let t = total.apply(&f, &section).unwrap();
        for c in 0..total.wreath().len() {
            let sum = total.decorated(c).sum();
            let k = (0..op.product().len()).find(|&k| op.decomposition(k).1 == &sum).unwrap();
            assert_eq!(t.get(c), p.get(k));
        }
    }

    #[test]
    fn naturality_along_c2_into_s3() {
        let c2 = classes("C2", 2);
        let s3 = classes("S3", 2);
        let level = C0Level::new(2, 2, 2);
        let gamma = GroupHom::from_perm_embedding(c2.group().clone(), s3.group().clone()).unwrap();
        let f = ClassFunction::random(s3.clone(), level, &mut SeededRng::new(7)).unwrap();
        let section = random_section(2, 2, 1, 3);
        for m in 1..=3 {
            let small = PowerOperation::new(c2.clone(), m).unwrap();
            let big = PowerOperation::new(s3.clone(), m).unwrap();
            let sym = FiniteGroup::symmetric(m).unwrap();
            let gamma_m = GroupHom::product(
                &gamma,
                &GroupHom::identity(&sym),
                small.product().group().clone(),
                big.product().group().clone(),
            )
            .unwrap();
            let lhs = small.apply(&f.restrict(&gamma, c2.clone()).unwrap(), &section).unwrap();
            let rhs = big.apply(&f, &section).unwrap().restrict(&gamma_m, small.product().clone()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn invariants_go_to_invariants_independently_of_section() {
        let cl = classes("C2", 2);
        let level = C0Level::new(2, 2, 2);
        let f = ClassFunction::random(cl.clone(), level, &mut SeededRng::new(8)).unwrap().average().unwrap();
        let op = PowerOperation::new(cl, 2).unwrap();
        let canonical = op.apply(&f, &canonical_section(2, 2, 1)).unwrap();
        assert!(canonical.is_invariant());
        assert_eq!(op.apply(&f, &random_section(2, 2, 1, 11)).unwrap(), canonical);
    }

    #[test]
    fn stabilizer_commutes_with_both_operations() {
        let cl = classes("S2", 2);
        let level = C0Level::new(2, 2, 2);
        let mut rng = SeededRng::new(9);
        let f = ClassFunction::random(cl.clone(), level, &mut rng).unwrap();
        let s = StabilizerElement::random(level, &mut rng);
        let section = random_section(2, 2, 1, 4);
        let op = PowerOperation::new(cl.clone(), 2).unwrap();
        let lhs = op.apply(&f.stabilizer_act(&s).unwrap(), &section).unwrap();
        assert_eq!(lhs, op.apply(&f, &section).unwrap().stabilizer_act(&s).unwrap());
        let total = TotalPowerOperation::new(cl, 2).unwrap();
        let lhs = total.apply(&f.stabilizer_act(&s).unwrap(), &section).unwrap();
        assert_eq!(lhs, total.apply(&f, &section).unwrap().stabilizer_act(&s).unwrap());
    }

    #[test]
    fn section_out_of_range() {
        let cl = classes("C1", 2);
        let level = C0Level::new(2, 2, 2);
        let f = ClassFunction::one(cl.clone(), level).unwrap();
        let err = power_op(&f, 4, &canonical_section(2, 2, 1)).unwrap_err();
        assert!(matches!(err, Error::SectionOutOfRange { log_order: 2, bound: 1 }));
    }

    #[test]
    fn level_below_section_bound() {
        let cl = classes("C1", 1);
        let f = ClassFunction::one(cl, C0Level::new(2, 1, 1)).unwrap();
        assert!(matches!(power_op(&f, 4, &canonical_section(2, 1, 2)), Err(Error::LevelMismatch(_))));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            #[test]
            fn multiplicative_for_any_section(spec in prop::sample::select(vec!["C1", "C2", "S3"]),
                                              m in 1usize..=3, f_seed: u64, g_seed: u64, section_seed: u64) {
                let cl = classes(spec, 2);
                let level = C0Level::new(2, 2, 2);
                let f = ClassFunction::random(cl.clone(), level, &mut SeededRng::new(f_seed)).unwrap();
                let g = ClassFunction::random(cl.clone(), level, &mut SeededRng::new(g_seed)).unwrap();
                let s = random_section(2, 2, section_bound(2, m), section_seed);
                let op = PowerOperation::new(cl, m).unwrap();
                let lhs = op.apply(&f.mul(&g).unwrap(), &s).unwrap();
                prop_assert_eq!(lhs, op.apply(&f, &s).unwrap().mul(&op.apply(&g, &s).unwrap()).unwrap());
            }
        }
    }
}
