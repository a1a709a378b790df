//! Transfers of class functions along subgroup inclusions and the transfer
//! ideal of `Cl_n(Σ_m, C_0)` (or of `Cl_n(G≀Σ_m, C_0)`).
//!
//! `Tr(f)([α]) = Σ_{gH ∈ (G/H)^{im α}} f([g^{-1} α g])`.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::class_function::ClassFunction;
use crate::error::{Error, Result};
use crate::group::{delta_embed, enumerate_hom_classes, FiniteGroup, GroupHom, HomClasses};

/// `counts[β][α]`: the number of fixed cosets `gH` of `α` with
/// `[g^{-1}αg] = β` in `H`. The transfer of `1_β` is row `β`.
pub fn transfer_matrix(
    inclusion: &GroupHom,
    source: &HomClasses,
    target: &HomClasses,
) -> Result<Vec<Vec<u64>>> {
    if !inclusion.is_injective() {
        return Err(Error::NotASubgroup);
    }
    if inclusion.source().as_ref() != source.group().as_ref() || inclusion.target().as_ref() != target.group().as_ref()
    {
        return Err(Error::GroupMismatch("transfer along a map with other endpoints".into()));
    }
    let g = target.group();
    let image: Vec<u32> = inclusion.source().elements().map(|h| inclusion.apply(h)).collect();
    let back: HashMap<u32, u32> = image.iter().enumerate().map(|(i, &x)| (x, i as u32)).collect();
    let mut counts = vec![vec![0u64; target.len()]; source.len()];
    for (a, rep) in target.reps().iter().enumerate() {
        for x in g.fixed_cosets(&image, rep)? {
            let xinv = g.inv(x);
            let conj: Vec<u32> = rep.iter().map(|&r| back[&g.mul(g.mul(xinv, r), x)]).collect();
            counts[source.class_of(&conj)?][a] += 1;
        }
    }
    Ok(counts)
}

/// Transfer of a class function on `H` to `G` along an inclusion.
pub fn transfer(f: &ClassFunction, inclusion: &GroupHom, target: Arc<HomClasses>) -> Result<ClassFunction> {
    let counts = transfer_matrix(inclusion, f.classes(), &target)?;
    let mut out = ClassFunction::zero(target.clone(), f.level())?;
    for a in 0..target.len() {
        let mut total = None;
        for (&b, value) in f.support() {
            let c = counts[b][a];
            if c == 0 {
                continue;
            }
            let term = value.scale(&BigRational::from_integer(BigInt::from(c)));
            total = Some(match total {
                None => term,
                Some(t) => term.add(&t)?,
            });
        }
        if let Some(t) = total {
            out.set(a, t)?;
        }
    }
    Ok(out)
}

/// The `C_0`-span of all `Tr(1_β)` from the Young-type subgroups
/// `G≀(Σ_i × Σ_j)`, `i, j > 0`, `i + j = m`. Since every `Tr(1_β)` takes
/// rational constant values, the ideal is `C_0 ⊗ V` for the rational
/// subspace `V` recorded here in reduced row echelon form.
#[derive(Clone, Debug)]
pub struct TransferIdeal {
    classes: Arc<HomClasses>,
    basis: Vec<Vec<BigRational>>,
}

impl TransferIdeal {
    pub fn classes(&self) -> &Arc<HomClasses> {
        &self.classes
    }

    pub fn basis(&self) -> &[Vec<BigRational>] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Rank over `C_0` of `Cl_n / I_tr`.
    pub fn quotient_dim(&self) -> usize {
        self.classes.len() - self.rank()
    }

    /// Whether a vector of rational constants (one per class) lies in the
    /// ideal.
    pub fn contains(&self, v: &[BigRational]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        rref(rows).len() == self.rank()
    }

    pub fn contains_indicator(&self, class: usize) -> bool {
        let mut v = vec![BigRational::zero(); self.classes.len()];
        v[class] = BigRational::one();
        self.contains(&v)
    }
}

/// Reduced row echelon form, zero rows dropped.
pub fn rref(mut rows: Vec<Vec<BigRational>>) -> Vec<Vec<BigRational>> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pivot);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &factor * y;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

/// The transfer ideal in `Cl_n(G≀Σ_m, C_0)`; for trivial `G` the ambient
/// group is `Σ_m` itself.
pub fn transfer_ideal(base: &Arc<FiniteGroup>, m: usize, n: usize, p: u64) -> Result<TransferIdeal> {
    let trivial = base.order() == 1;
    let ambient = if trivial {
        FiniteGroup::symmetric(m)?
    } else {
        FiniteGroup::wreath(base, m)?
    };
    let classes = Arc::new(enumerate_hom_classes(&ambient, n, p)?);
    let mut rows = Vec::new();
    for i in 1..m {
        let inclusion = if trivial {
            delta_embed(i, m - i)?
        } else {
            young_wreath_inclusion(&ambient, i)?
        };
        let source = enumerate_hom_classes(inclusion.source(), n, p)?;
        for row in transfer_matrix(&inclusion, &source, &classes)? {
            rows.push(row.into_iter().map(|c| BigRational::from_integer(BigInt::from(c))).collect());
        }
    }
    Ok(TransferIdeal {
        classes,
        basis: rref(rows),
    })
}

/// `G≀(Σ_i × Σ_{m-i}) ⊂ G≀Σ_m`: elements whose block permutation preserves
/// the first `i` blocks.
pub fn young_wreath_inclusion(wreath: &Arc<FiniteGroup>, i: usize) -> Result<GroupHom> {
    let (_, top) = wreath
        .wreath_parts()
        .ok_or_else(|| Error::GroupMismatch("expected a wreath product".into()))?;
    let elements: Vec<u32> = wreath
        .elements()
        .filter(|&w| {
            let s = top.perm(wreath.wreath_decode(w).1);
            s[..i].iter().all(|&x| (x as usize) < i)
        })
        .collect();
    let sub = wreath.subgroup(&elements)?;
    GroupHom::from_perm_embedding(sub, wreath.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::class_function::{C0Level, C0Element};
    use crate::group::symm_class_to_sum;
    use crate::rng::SeededRng;
    use crate::torsion::enumerate_subgroups;

    fn int(x: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(x))
    }

    #[test]
    fn transfer_from_whole_group_is_identity() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let classes = Arc::new(enumerate_hom_classes(&g, 2, 2).unwrap());
        let level = C0Level::new(2, 2, 1);
        let mut rng = SeededRng::new(1);
        let f = ClassFunction::random(classes.clone(), level, &mut rng).unwrap();
        let id = GroupHom::identity(&g);
        assert_eq!(transfer(&f, &id, classes).unwrap(), f);
    }

    #[test]
    fn transfer_of_one_from_trivial_subgroup_of_s2() {
        let s2 = FiniteGroup::symmetric(2).unwrap();
        let e = FiniteGroup::trivial();
        let inc = GroupHom::from_perm_embedding(e.clone(), s2.clone()).unwrap();
        let level = C0Level::new(2, 1, 1);
        let source = Arc::new(enumerate_hom_classes(&e, 1, 2).unwrap());
        let target = Arc::new(enumerate_hom_classes(&s2, 1, 2).unwrap());
        let tr = transfer(&ClassFunction::one(source, level).unwrap(), &inc, target).unwrap();
        assert_eq!(tr.get(0), C0Element::constant(level, int(2)));
        assert_eq!(tr.get(1), C0Element::zero(level));
    }

    /// Tr(1)([α]) counts fixed cosets directly.
    #[test]
    fn transfer_of_one_counts_fixed_cosets() {
        let inc = delta_embed(2, 2).unwrap();
        let level = C0Level::new(2, 2, 2);
        let source = Arc::new(enumerate_hom_classes(inc.source(), 2, 2).unwrap());
        let target = Arc::new(enumerate_hom_classes(inc.target(), 2, 2).unwrap());
        let tr = transfer(&ClassFunction::one(source, level).unwrap(), &inc, target.clone()).unwrap();
        let s4 = target.group();
        let h: Vec<u32> = inc.source().elements().map(|x| inc.apply(x)).collect();
        for (a, rep) in target.reps().iter().enumerate() {
            let direct = s4.fixed_cosets(&h, rep).unwrap().len() as i64;
            assert_eq!(tr.get(a), C0Element::constant(level, int(direct)));
        }
    }

    #[test]
    fn transfer_ideal_for_m2_n1() {
        let ideal = transfer_ideal(&FiniteGroup::trivial(), 2, 1, 2).unwrap();
        assert_eq!(ideal.classes().len(), 2);
        assert_eq!(ideal.quotient_dim(), 1);
        // identity class (two summands) is in the ideal, the transposition is not
        assert!(ideal.contains_indicator(0));
        assert!(!ideal.contains_indicator(1));
    }

    #[test]
    fn transfer_ideal_is_multi_summand_support() {
        for (n, k) in [(1usize, 1u32), (1, 2), (2, 1), (2, 2)] {
            let m = 1usize << k;
            let ideal = transfer_ideal(&FiniteGroup::trivial(), m, n, 2).unwrap();
            assert_eq!(ideal.quotient_dim(), enumerate_subgroups(2, n, k).len());
            for c in 0..ideal.classes().len() {
                let summands = symm_class_to_sum(ideal.classes(), c).unwrap().len();
                assert_eq!(ideal.contains_indicator(c), summands > 1);
            }
        }
    }

    #[test]
    fn wreath_transfer_ideal_has_transitive_quotient() {
        // Classes of C2≀Σ2 with n = 1: decorated sums of total 2 over the two
        // classes of C2; the transitive ones are (H of order 2, class) pairs.
        let ideal = transfer_ideal(&FiniteGroup::cyclic(2).unwrap(), 2, 1, 2).unwrap();
        assert_eq!(ideal.classes().len(), 5);
        assert_eq!(ideal.quotient_dim(), 2);
    }

    #[test]
    fn rref_rank() {
        let rows = vec![vec![int(1), int(2)], vec![int(2), int(4)], vec![int(0), int(1)]];
        assert_eq!(rref(rows), vec![vec![int(1), int(0)], vec![int(0), int(1)]]);
    }
}
