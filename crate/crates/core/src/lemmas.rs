//! Set-level checks behind the injectivity lemmas. A restriction map
//! `Cl_n(G, C_0) → Π Cl_n(K_i, C_0)` is injective exactly when the induced
//! maps of class sets `⊔ hom(Λ, K_i)/~ → hom(Λ, G)/~` are jointly
//! surjective, so every check below counts the image of such a map.

use std::collections::BTreeSet;
use std::sync::Arc;

use itertools::Itertools;

use crate::error::Result;
use crate::group::{enumerate_hom_classes, symm_class_to_sum, symm_tuple_to_sum, FiniteGroup, GroupHom, HomClasses};
use crate::torsion::{enumerate_subgroups, enumerate_sums, SumOfSubgroups};

/// Outcome of one surjectivity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetCheck {
    pub name: String,
    pub domain: usize,
    pub codomain: usize,
    pub image: usize,
    /// Whether the group-level map agrees with the combinatorial one.
    pub consistent: bool,
}

impl SetCheck {
    pub fn surjective(&self) -> bool {
        self.image == self.codomain
    }

    pub fn passed(&self) -> bool {
        self.surjective() && self.consistent
    }
}

/// Block sizes `p^j`, each repeated `a_j` times, for `m = Σ a_j p^j`.
pub fn p_adic_parts(p: u64, m: usize) -> Vec<usize> {
    let mut parts = Vec::new();
    let (mut rest, mut power) = (m, 1usize);
    while rest > 0 {
        let digit = rest % p as usize;
        parts.extend(std::iter::repeat_n(power, digit));
        rest /= p as usize;
        power *= p as usize;
    }
    parts
}

/// The block inclusion `Σ_{m_1} × … × Σ_{m_r} ⊂ Σ_{Σ m_i}`.
pub fn young_inclusion(parts: &[usize]) -> Result<GroupHom> {
    let factors = parts.iter().map(|&k| FiniteGroup::symmetric(k)).collect::<Result<Vec<_>>>()?;
    let source = FiniteGroup::product(&factors)?;
    GroupHom::from_perm_embedding(source, FiniteGroup::symmetric(parts.iter().sum())?)
}

/// The sum attached to a class of a Young subgroup: the concatenation of
/// the sums of its block components.
fn young_class_to_sum(classes: &HomClasses, class: usize, parts: &[usize], p: u64) -> Result<SumOfSubgroups> {
    let group = classes.group();
    let rep = classes.rep(class);
    if parts.len() == 1 {
        return symm_tuple_to_sum(group, rep, p);
    }
    let factors = group.factors().expect("Young subgroups with several blocks are products");
    let mut total = SumOfSubgroups::new(vec![]);
    for (k, factor) in factors.iter().enumerate() {
        let tuple: Vec<u32> = rep.iter().map(|&g| group.product_components(g)[k]).collect();
        total = total.plus(&symm_tuple_to_sum(factor, &tuple, p)?);
    }
    Ok(total)
}

/// Restriction along a Young subgroup: the image of its classes in those of
/// `Σ_m`, checked against concatenation of sums.
fn young_check(name: String, parts: &[usize], n: usize, p: u64) -> Result<(SetCheck, BTreeSet<usize>)> {
    let inclusion = young_inclusion(parts)?;
    let source = enumerate_hom_classes(inclusion.source(), n, p)?;
    let target = enumerate_hom_classes(inclusion.target(), n, p)?;
    let mut image = BTreeSet::new();
    let mut consistent = true;
    for c in 0..source.len() {
        let d = source.push_forward(c, &inclusion, &target);
        consistent &= young_class_to_sum(&source, c, parts, p)? == symm_class_to_sum(&target, d)?;
        image.insert(d);
    }
    let check = SetCheck {
        name,
        domain: source.len(),
        codomain: target.len(),
        image: image.len(),
        consistent,
    };
    Ok((check, image))
}

/// The concatenation map `Π_j Sum_{p^j}^{×a_j} → Sum_m`, combinatorially and
/// through the Young subgroup `Π_j Σ_{p^j}^{×a_j} ⊂ Σ_m`.
pub fn check_padicsum(p: u64, n: usize, m: usize) -> Result<SetCheck> {
    let parts = p_adic_parts(p, m);
    let mut image: BTreeSet<SumOfSubgroups> = BTreeSet::new();
    let mut domain = 0;
    for combo in parts.iter().map(|&k| enumerate_sums(p, n, k as u64)).multi_cartesian_product() {
        domain += 1;
        image.insert(combo.iter().fold(SumOfSubgroups::new(vec![]), |acc, s| acc.plus(s)));
    }
    let codomain = enumerate_sums(p, n, m as u64).len();
    let (group, _) = young_check(String::new(), &parts, n, p)?;
    Ok(SetCheck {
        name: format!("padicsum p={p} n={n} m={m}"),
        domain,
        codomain,
        image: image.len(),
        consistent: group.consistent && group.image == image.len() && group.domain == domain,
    })
}

/// Restriction `Cl_n(Σ_m) → Cl_n(Π_j Σ_{p^j}^{×a_j})`.
pub fn check_lem1(p: u64, n: usize, m: usize) -> Result<SetCheck> {
    let parts = p_adic_parts(p, m);
    Ok(young_check(format!("lem1 p={p} n={n} m={m}"), &parts, n, p)?.0)
}

/// Restrictions from `G` to all of its abelian subgroups.
pub fn check_lem2(group: &Arc<FiniteGroup>, n: usize, p: u64) -> Result<SetCheck> {
    let target = enumerate_hom_classes(group, n, p)?;
    let mut image = BTreeSet::new();
    let mut domain = 0;
    for elements in group.abelian_subgroups()? {
        let sub = group.subgroup(&elements)?;
        let inclusion = GroupHom::from_perm_embedding(sub.clone(), group.clone())?;
        let source = enumerate_hom_classes(&sub, n, p)?;
        domain += source.len();
        image.extend((0..source.len()).map(|c| source.push_forward(c, &inclusion, &target)));
    }
    Ok(SetCheck {
        name: format!("lem2 G={} n={n} p={p}", group.name()),
        domain,
        codomain: target.len(),
        image: image.len(),
        consistent: true,
    })
}

/// `Sub_{p^k} ⊔ Sum_{p^{k-1}}^{×p} → Sum_{p^k}`, with the second component
/// realised as restriction along `Σ_{p^{k-1}}^{×p} ⊂ Σ_{p^k}` and the first
/// as the transitive classes.
pub fn check_lem3(p: u64, n: usize, k: u32) -> Result<SetCheck> {
    let m = p.pow(k) as usize;
    let parts = vec![m / p as usize; p as usize];
    let (young, mut image) = young_check(String::new(), &parts, n, p)?;
    let target = enumerate_hom_classes(&FiniteGroup::symmetric(m)?, n, p)?;
    let mut transitive = 0;
    let mut consistent = young.consistent;
    let subgroups: BTreeSet<_> = enumerate_subgroups(p, n, k).into_iter().collect();
    for c in 0..target.len() {
        let sum = symm_class_to_sum(&target, c)?;
        if sum.len() == 1 {
            transitive += 1;
            consistent &= subgroups.contains(&sum.summands()[0]);
            image.insert(c);
        }
    }
    consistent &= transitive == subgroups.len();
    Ok(SetCheck {
        name: format!("lem3 p={p} n={n} k={k}"),
        domain: subgroups.len() + young.domain,
        codomain: target.len(),
        image: image.len(),
        consistent,
    })
}
