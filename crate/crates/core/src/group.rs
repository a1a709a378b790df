//! Finite groups as permutation groups with multiplication tables, their
//! commuting p-power tuple classes, and the bijections between tuple
//! classes in symmetric and wreath product groups and (decorated) sums of
//! subgroups of the torus.
//!
//! Products are composed right to left: `(a·b)(x) = a(b(x))`.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::lattice::{self, IntMatrix, LatticeBasis};
use crate::torsion::{enumerate_subgroups_up_to, SumOfSubgroups, TorsionSubgroup};

/// Largest group the library will build.
pub const ORDER_CAP: usize = 10_000;
/// Groups up to this order get a full multiplication table.
const TABLE_CAP: usize = 1_500;
/// Associativity is checked on the table up to this order.
const ASSOC_CHECK_CAP: usize = 200;
/// Tuples are packed 16 bits per entry into a `u64`.
pub const MAX_RANK: usize = 4;

/// Group description in the group mini-language: `S<m>`, `C<k>`,
/// `x`-separated products and `wr(<spec>,<m>)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Symmetric(usize),
    Cyclic(usize),
    Product(Vec<GroupSpec>),
    Wreath(Box<GroupSpec>, usize),
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Symmetric(m) => write!(f, "S{m}"),
            GroupSpec::Cyclic(k) => write!(f, "C{k}"),
            GroupSpec::Product(parts) => write!(f, "{}", parts.iter().map(|g| g.to_string()).join("x")),
            GroupSpec::Wreath(g, m) => write!(f, "wr({g},{m})"),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let invalid = |reason: &str| Error::InvalidGroupSpec {
            spec: s.to_string(),
            reason: reason.to_string(),
        };
        let s = s.trim();
        let parts = split_top_level(s, 'x').ok_or_else(|| invalid("unbalanced parentheses"))?;
        if parts.len() > 1 {
            let factors = parts.iter().map(|p| p.parse()).collect::<Result<Vec<GroupSpec>>>()?;
            return Ok(GroupSpec::Product(factors));
        }
        let number = |t: &str| t.trim().parse::<usize>().ok().filter(|&v| v >= 1);
        if let Some(inner) = s.strip_prefix("wr(").and_then(|r| r.strip_suffix(')')) {
            let args = split_top_level(inner, ',').ok_or_else(|| invalid("unbalanced parentheses"))?;
            if args.len() != 2 {
                return Err(invalid("wr takes two arguments"));
            }
            let m = number(args[1]).ok_or_else(|| invalid("bad wreath degree"))?;
            return Ok(GroupSpec::Wreath(Box::new(args[0].parse()?), m));
        }
        if let Some(m) = s.strip_prefix('S') {
            return number(m).map(GroupSpec::Symmetric).ok_or_else(|| invalid("bad symmetric degree"));
        }
        if let Some(k) = s.strip_prefix('C') {
            return number(k).map(GroupSpec::Cyclic).ok_or_else(|| invalid("bad cyclic order"));
        }
        Err(invalid("expected S<m>, C<k>, a product or wr(<spec>,<m>)"))
    }
}

fn split_top_level(s: &str, sep: char) -> Option<Vec<&str>> {
    let mut depth = 0i32;
    let mut parts = Vec::new();
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return None;
                }
            }
            c if c == sep && depth == 0 => {
                parts.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    if depth != 0 {
        return None;
    }
    parts.push(&s[start..]);
    Some(parts)
}

/// How a group was built; needed to decode elements of products and wreath
/// products into their coordinates.
#[derive(Clone, Debug)]
pub enum Structure {
    Symmetric(usize),
    Cyclic(usize),
    Product(Vec<Arc<FiniteGroup>>),
    Wreath {
        base: Arc<FiniteGroup>,
        top: Arc<FiniteGroup>,
    },
    Subgroup,
}

/// A finite permutation group with indexed elements. Element 0 is the
/// identity.
#[derive(Clone)]
pub struct FiniteGroup {
    name: String,
    degree: usize,
    perms: Vec<Vec<u16>>,
    index: HashMap<Vec<u16>, u32>,
    table: Option<Vec<u32>>,
    inverse: Vec<u32>,
    orders: Vec<u32>,
    structure: Structure,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order())
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.perms == other.perms
    }
}

impl Eq for FiniteGroup {}

fn check_order(what: &str, size: usize) -> Result<()> {
    if size > ORDER_CAP {
        return Err(Error::TooLarge {
            what: what.to_string(),
            size,
            cap: ORDER_CAP,
        });
    }
    Ok(())
}

fn perm_order(perm: &[u16]) -> u32 {
    let mut seen = vec![false; perm.len()];
    let mut order: u32 = 1;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0u32;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x] as usize;
            len += 1;
        }
        order = order.lcm(&len);
    }
    order
}

fn compose_perms(a: &[u16], b: &[u16]) -> Vec<u16> {
    b.iter().map(|&x| a[x as usize]).collect()
}

fn invert_perm(a: &[u16]) -> Vec<u16> {
    let mut inv = vec![0u16; a.len()];
    for (i, &x) in a.iter().enumerate() {
        inv[x as usize] = i as u16;
    }
    inv
}

fn is_p_power(mut x: u64, p: u64) -> bool {
    while x.is_multiple_of(p) {
        x /= p;
    }
    x == 1
}

impl FiniteGroup {
    /// Builds a group from a closed list of permutations, identity first.
    fn from_perms(name: String, degree: usize, perms: Vec<Vec<u16>>, structure: Structure) -> Result<Self> {
        check_order(&name, perms.len())?;
        let index: HashMap<Vec<u16>, u32> = perms.iter().enumerate().map(|(i, p)| (p.clone(), i as u32)).collect();
        let identity: Vec<u16> = (0..degree as u16).collect();
        if perms.first() != Some(&identity) || index.len() != perms.len() {
            return Err(Error::NotASubgroup);
        }
        let inverse = perms
            .iter()
            .map(|p| index.get(&invert_perm(p)).copied().ok_or(Error::NotASubgroup))
            .collect::<Result<Vec<u32>>>()?;
        let orders = perms.iter().map(|p| perm_order(p)).collect();
        let mut group = FiniteGroup {
            name,
            degree,
            perms,
            index,
            table: None,
            inverse,
            orders,
            structure,
        };
        let order = group.order();
        if order <= TABLE_CAP {
            let mut table = Vec::with_capacity(order * order);
            for a in 0..order {
                for b in 0..order {
                    let c = compose_perms(&group.perms[a], &group.perms[b]);
                    table.push(*group.index.get(&c).ok_or(Error::NotASubgroup)?);
                }
            }
            group.table = Some(table);
            if order <= ASSOC_CHECK_CAP {
                group.check_associativity()?;
            }
        }
        Ok(group)
    }

    fn check_associativity(&self) -> Result<()> {
        let n = self.order() as u32;
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::NotASubgroup);
                    }
                }
            }
        }
        Ok(())
    }

    pub fn build(spec: &GroupSpec) -> Result<Arc<FiniteGroup>> {
        match spec {
            GroupSpec::Symmetric(m) => FiniteGroup::symmetric(*m),
            GroupSpec::Cyclic(k) => FiniteGroup::cyclic(*k),
            GroupSpec::Product(parts) => {
                let factors = parts.iter().map(FiniteGroup::build).collect::<Result<Vec<_>>>()?;
                FiniteGroup::product(&factors)
            }
            GroupSpec::Wreath(g, m) => FiniteGroup::wreath(&FiniteGroup::build(g)?, *m),
        }
    }

    pub fn parse(spec: &str) -> Result<Arc<FiniteGroup>> {
        FiniteGroup::build(&spec.parse()?)
    }

    pub fn trivial() -> Arc<FiniteGroup> {
        FiniteGroup::cyclic(1).expect("trivial group")
    }

    /// `Σ_m` with elements in lexicographic order of their image arrays.
    pub fn symmetric(m: usize) -> Result<Arc<FiniteGroup>> {
        let size = (1..=m).try_fold(1usize, |acc, k| acc.checked_mul(k)).unwrap_or(usize::MAX);
        check_order(&format!("S{m}"), size)?;
        let perms = (0..m as u16).permutations(m).collect();
        Ok(Arc::new(FiniteGroup::from_perms(format!("S{m}"), m, perms, Structure::Symmetric(m))?))
    }

    /// `C_k` acting on `k` points by rotation; element `i` is rotation by `i`.
    pub fn cyclic(k: usize) -> Result<Arc<FiniteGroup>> {
        check_order(&format!("C{k}"), k)?;
        let perms = (0..k).map(|i| (0..k).map(|x| ((x + i) % k) as u16).collect()).collect();
        Ok(Arc::new(FiniteGroup::from_perms(format!("C{k}"), k, perms, Structure::Cyclic(k))?))
    }

    /// Direct product acting on the disjoint union. Elements are indexed in
    /// mixed radix with the first factor most significant.
    pub fn product(factors: &[Arc<FiniteGroup>]) -> Result<Arc<FiniteGroup>> {
        if factors.len() == 1 {
            return Ok(factors[0].clone());
        }
        let name = factors.iter().map(|g| g.name.clone()).join("x");
        let size = factors
            .iter()
            .try_fold(1usize, |acc, g| acc.checked_mul(g.order()))
            .unwrap_or(usize::MAX);
        check_order(&name, size)?;
        let degree = factors.iter().map(|g| g.degree).sum();
        let perms = factors
            .iter()
            .map(|g| 0..g.order())
            .multi_cartesian_product()
            .map(|idx| {
                let mut perm = Vec::with_capacity(degree);
                let mut offset = 0u16;
                for (g, &i) in factors.iter().zip(&idx) {
                    perm.extend(g.perms[i].iter().map(|&x| x + offset));
                    offset += g.degree as u16;
                }
                perm
            })
            .collect::<Vec<_>>();
        let perms = if factors.is_empty() { vec![vec![]] } else { perms };
        Ok(Arc::new(FiniteGroup::from_perms(
            name,
            degree,
            perms,
            Structure::Product(factors.to_vec()),
        )?))
    }

    /// `G ≀ Σ_m = G^m ⋊ Σ_m` acting on `deg(G)·m` points: `(c_0, …, c_{m-1}; s)`
    /// sends point `(y, x)` (index `x·deg + y`) to `(c_x(y), s(x))`. The index
    /// is `s·|G|^m + Σ c_x |G|^{m-1-x}`.
    pub fn wreath(base: &Arc<FiniteGroup>, m: usize) -> Result<Arc<FiniteGroup>> {
        let name = format!("wr({},{m})", base.name);
        let top = FiniteGroup::symmetric(m).map_err(|_| Error::TooLarge {
            what: name.clone(),
            size: usize::MAX,
            cap: ORDER_CAP,
        })?;
        let size = (0..m)
            .try_fold(top.order(), |acc, _| acc.checked_mul(base.order()))
            .unwrap_or(usize::MAX);
        check_order(&name, size)?;
        let d = base.degree;
        let mut perms = Vec::with_capacity(size);
        for s in &top.perms {
            for c in (0..m).map(|_| 0..base.order()).multi_cartesian_product() {
                let mut perm = vec![0u16; d * m];
                for x in 0..m {
                    let cx = &base.perms[c[x]];
                    for y in 0..d {
                        perm[x * d + y] = (s[x] as usize * d + cx[y] as usize) as u16;
                    }
                }
                perms.push(perm);
            }
        }
        if m == 0 {
            perms = vec![vec![]];
        }
        Ok(Arc::new(FiniteGroup::from_perms(
            name,
            d * m,
            perms,
            Structure::Wreath {
                base: base.clone(),
                top,
            },
        )?))
    }

    /// The subgroup on the given elements (indices into `self`), with
    /// elements kept in the order of `self`.
    pub fn subgroup(self: &Arc<Self>, elements: &[u32]) -> Result<Arc<FiniteGroup>> {
        let set: BTreeSet<u32> = elements.iter().copied().collect();
        for &a in &set {
            for &b in &set {
                if !set.contains(&self.mul(a, b)) {
                    return Err(Error::NotASubgroup);
                }
            }
        }
        let perms = set.iter().map(|&g| self.perms[g as usize].clone()).collect();
        Ok(Arc::new(FiniteGroup::from_perms(
            format!("sub({})", self.name),
            self.degree,
            perms,
            Structure::Subgroup,
        )?))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.perms.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn perm(&self, g: u32) -> &[u16] {
        &self.perms[g as usize]
    }

    pub fn element_of_perm(&self, perm: &[u16]) -> Option<u32> {
        self.index.get(perm).copied()
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.table {
            Some(t) => t[a as usize * self.order() + b as usize],
            None => self.index[&compose_perms(&self.perms[a as usize], &self.perms[b as usize])],
        }
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    pub fn element_order(&self, a: u32) -> u32 {
        self.orders[a as usize]
    }

    /// `a^e` for any integer exponent.
    pub fn pow(&self, a: u32, e: &BigInt) -> u32 {
        let ord = BigInt::from(self.element_order(a));
        let e = e.mod_floor(&ord).to_u32().expect("reduced exponent");
        self.pow_u32(a, e)
    }

    pub fn pow_u32(&self, a: u32, e: u32) -> u32 {
        let mut result = 0;
        let mut base = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    /// `x a x^{-1}`
    pub fn conj(&self, x: u32, a: u32) -> u32 {
        self.mul(self.mul(x, a), self.inv(x))
    }

    pub fn commute(&self, a: u32, b: u32) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order() as u32
    }

    /// Largest order of a p-power element.
    pub fn p_exponent(&self, p: u64) -> u64 {
        self.orders
            .iter()
            .map(|&o| o as u64)
            .filter(|&o| is_p_power(o, p))
            .max()
            .unwrap_or(1)
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter().all(|&a| gens.iter().all(|&b| self.commute(a, b)))
    }

    /// Closure of a set of elements under multiplication.
    pub fn generated(&self, gens: &[u32]) -> Vec<u32> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut queue = VecDeque::from([0u32]);
        let mut out = vec![0u32];
        while let Some(a) = queue.pop_front() {
            for &g in gens {
                let b = self.mul(a, g);
                if !seen[b as usize] {
                    seen[b as usize] = true;
                    out.push(b);
                    queue.push_back(b);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// A greedy generating set: each element not yet generated is added.
    pub fn generators(&self) -> Vec<u32> {
        let mut gens = Vec::new();
        let mut covered = vec![false; self.order()];
        covered[0] = true;
        for g in self.elements() {
            if !covered[g as usize] {
                gens.push(g);
                for h in self.generated(&gens) {
                    covered[h as usize] = true;
                }
            }
        }
        gens
    }

    /// Coordinates of a product element, one index per factor.
    pub fn product_components(&self, g: u32) -> Vec<u32> {
        let Structure::Product(factors) = &self.structure else {
            panic!("{} is not a direct product", self.name);
        };
        let mut g = g as usize;
        let mut out = vec![0u32; factors.len()];
        for (i, f) in factors.iter().enumerate().rev() {
            out[i] = (g % f.order()) as u32;
            g /= f.order();
        }
        out
    }

    pub fn product_element(&self, components: &[u32]) -> u32 {
        let Structure::Product(factors) = &self.structure else {
            panic!("{} is not a direct product", self.name);
        };
        factors
            .iter()
            .zip(components)
            .fold(0usize, |acc, (f, &c)| acc * f.order() + c as usize) as u32
    }

    pub fn factors(&self) -> Option<&[Arc<FiniteGroup>]> {
        match &self.structure {
            Structure::Product(f) => Some(f),
            _ => None,
        }
    }

    /// Base group and top symmetric group of a wreath product.
    pub fn wreath_parts(&self) -> Option<(&Arc<FiniteGroup>, &Arc<FiniteGroup>)> {
        match &self.structure {
            Structure::Wreath { base, top } => Some((base, top)),
            _ => None,
        }
    }

    /// Splits a wreath element into `(c_0, …, c_{m-1})` and `s ∈ Σ_m`.
    pub fn wreath_decode(&self, w: u32) -> (Vec<u32>, u32) {
        let (base, top) = self.wreath_parts().expect("wreath product");
        let m = top.degree();
        let b = base.order();
        let mut rest = w as usize;
        let mut c = vec![0u32; m];
        for x in (0..m).rev() {
            c[x] = (rest % b) as u32;
            rest /= b;
        }
        (c, rest as u32)
    }

    pub fn wreath_encode(&self, c: &[u32], s: u32) -> u32 {
        let (base, _) = self.wreath_parts().expect("wreath product");
        let b = base.order();
        c.iter().fold(s as usize, |acc, &x| acc * b + x as usize) as u32
    }

    /// Cosets `gH` fixed by every entry of `tuple`, each represented by its
    /// least element `g`; these satisfy `g^{-1} a g ∈ H` for all entries `a`.
    pub fn fixed_cosets(&self, h: &[u32], tuple: &[u32]) -> Result<Vec<u32>> {
        let in_h = self.membership(h)?;
        let mut covered = vec![false; self.order()];
        let mut reps = Vec::new();
        for g in self.elements() {
            if covered[g as usize] {
                continue;
            }
            for &x in h {
                covered[self.mul(g, x) as usize] = true;
            }
            let ginv = self.inv(g);
            if tuple.iter().all(|&a| in_h[self.mul(self.mul(ginv, a), g) as usize]) {
                reps.push(g);
            }
        }
        Ok(reps)
    }

    /// Indicator vector of a subgroup, after checking closure.
    pub fn membership(&self, h: &[u32]) -> Result<Vec<bool>> {
        let mut in_h = vec![false; self.order()];
        for &x in h {
            in_h[x as usize] = true;
        }
        if !in_h[0] || h.iter().any(|&a| h.iter().any(|&b| !in_h[self.mul(a, b) as usize])) {
            return Err(Error::NotASubgroup);
        }
        Ok(in_h)
    }

    /// Every abelian subgroup, as sorted element lists, sorted.
    pub fn abelian_subgroups(&self) -> Result<Vec<Vec<u32>>> {
        if self.order() > 1000 {
            return Err(Error::TooLarge {
                what: format!("abelian subgroups of {}", self.name),
                size: self.order(),
                cap: 1000,
            });
        }
        let mut found: HashSet<Vec<u32>> = HashSet::new();
        let mut queue = VecDeque::from([vec![0u32]]);
        found.insert(vec![0]);
        while let Some(a) = queue.pop_front() {
            let mut member = vec![false; self.order()];
            for &x in &a {
                member[x as usize] = true;
            }
            for g in self.elements() {
                if member[g as usize] || !a.iter().all(|&x| self.commute(x, g)) {
                    continue;
                }
                let mut gens = a.clone();
                gens.push(g);
                let b = self.generated(&gens);
                if found.insert(b.clone()) {
                    queue.push_back(b);
                }
            }
        }
        let mut out: Vec<Vec<u32>> = found.into_iter().collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(out)
    }
}

/// A homomorphism given by its table of values.
#[derive(Clone, Debug)]
pub struct GroupHom {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    map: Vec<u32>,
}

impl GroupHom {
    pub fn new(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, map: Vec<u32>) -> Result<Self> {
        if map.len() != source.order() || map.iter().any(|&x| x as usize >= target.order()) {
            return Err(Error::NotAHomomorphism);
        }
        // Multiplicativity on (a, s) for s in a generating set implies it
        // everywhere.
        for s in source.generators() {
            for a in source.elements() {
                if map[source.mul(a, s) as usize] != target.mul(map[a as usize], map[s as usize]) {
                    return Err(Error::NotAHomomorphism);
                }
            }
        }
        Ok(GroupHom { source, target, map })
    }

    pub fn from_fn(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, f: impl Fn(u32) -> u32) -> Result<Self> {
        let map = source.elements().map(f).collect();
        GroupHom::new(source, target, map)
    }

    pub fn identity(g: &Arc<FiniteGroup>) -> Self {
        GroupHom {
            source: g.clone(),
            target: g.clone(),
            map: g.elements().collect(),
        }
    }

    /// Inclusion of permutation groups: each source permutation, extended
    /// by fixed points, must be an element of the target.
    pub fn from_perm_embedding(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>) -> Result<Self> {
        if source.degree() > target.degree() {
            return Err(Error::NotAHomomorphism);
        }
        let map = source
            .elements()
            .map(|g| {
                let mut perm = source.perm(g).to_vec();
                perm.extend(source.degree() as u16..target.degree() as u16);
                target.element_of_perm(&perm).ok_or(Error::NotAHomomorphism)
            })
            .collect::<Result<Vec<u32>>>()?;
        GroupHom::new(source, target, map)
    }

    /// `f × g` between direct products of two factors.
    pub fn product(
        f: &GroupHom,
        g: &GroupHom,
        source: Arc<FiniteGroup>,
        target: Arc<FiniteGroup>,
    ) -> Result<Self> {
        let src = source.clone();
        let tgt = target.clone();
        GroupHom::from_fn(source, target, |x| {
            let c = src.product_components(x);
            tgt.product_element(&[f.apply(c[0]), g.apply(c[1])])
        })
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn apply(&self, g: u32) -> u32 {
        self.map[g as usize]
    }

    pub fn compose(&self, first: &GroupHom) -> Result<GroupHom> {
        if first.target != self.source {
            return Err(Error::GroupMismatch("composable homomorphisms".into()));
        }
        Ok(GroupHom {
            source: first.source.clone(),
            target: self.target.clone(),
            map: first.map.iter().map(|&x| self.apply(x)).collect(),
        })
    }

    pub fn is_injective(&self) -> bool {
        self.map.iter().collect::<HashSet<_>>().len() == self.map.len()
    }
}

/// The block embedding `Σ_i × Σ_j → Σ_{i+j}`.
pub fn delta_embed(i: usize, j: usize) -> Result<GroupHom> {
    let source = FiniteGroup::product(&[FiniteGroup::symmetric(i)?, FiniteGroup::symmetric(j)?])?;
    GroupHom::from_perm_embedding(source, FiniteGroup::symmetric(i + j)?)
}

fn pack(tuple: &[u32]) -> u64 {
    tuple.iter().enumerate().fold(0u64, |acc, (j, &g)| acc | (g as u64) << (16 * j))
}

/// Conjugacy classes of commuting n-tuples of p-power elements, i.e.
/// `hom(Z_p^n, G)/~`. Each class is represented by the lexicographically
/// least tuple in it; classes are listed in order of their
/// representatives.
#[derive(Debug)]
pub struct HomClasses {
    group: Arc<FiniteGroup>,
    n: usize,
    p: u64,
    reps: Vec<Vec<u32>>,
    lookup: HashMap<u64, u32>,
}

impl PartialEq for HomClasses {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.p == other.p && self.group == other.group
    }
}

impl HomClasses {
    pub fn new(group: Arc<FiniteGroup>, n: usize, p: u64) -> Result<Self> {
        assert!((1..=MAX_RANK).contains(&n), "rank must be between 1 and {MAX_RANK}");
        if group.order() > 1 << 16 {
            return Err(Error::TooLarge {
                what: group.name().to_string(),
                size: group.order(),
                cap: 1 << 16,
            });
        }
        let p_elements: Vec<u32> = group
            .elements()
            .filter(|&g| is_p_power(group.element_order(g) as u64, p))
            .collect();
        let mut classes = HomClasses {
            group,
            n,
            p,
            reps: Vec::new(),
            lookup: HashMap::new(),
        };
        let mut tuple = Vec::with_capacity(n);
        classes.extend(&p_elements, &mut tuple);
        Ok(classes)
    }

    fn extend(&mut self, p_elements: &[u32], tuple: &mut Vec<u32>) {
        if tuple.len() == self.n {
            let key = pack(tuple);
            if self.lookup.contains_key(&key) {
                return;
            }
            let class = self.reps.len() as u32;
            self.reps.push(tuple.clone());
            let g = &self.group;
            let mut conj = vec![0u32; self.n];
            for x in g.elements() {
                for (c, &a) in conj.iter_mut().zip(tuple.iter()) {
                    *c = g.conj(x, a);
                }
                self.lookup.entry(pack(&conj)).or_insert(class);
            }
            return;
        }
        for &a in p_elements {
            if tuple.iter().all(|&b| self.group.commute(a, b)) {
                tuple.push(a);
                self.extend(p_elements, tuple);
                tuple.pop();
            }
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn reps(&self) -> &[Vec<u32>] {
        &self.reps
    }

    pub fn rep(&self, class: usize) -> &[u32] {
        &self.reps[class]
    }

    /// Number of commuting p-power tuples.
    pub fn tuple_count(&self) -> usize {
        self.lookup.len()
    }

    /// Class of an arbitrary tuple, or `NotPPowerTuple` if it is not a
    /// commuting tuple of p-power elements.
    pub fn class_of(&self, tuple: &[u32]) -> Result<usize> {
        if tuple.len() != self.n {
            return Err(Error::NotPPowerTuple);
        }
        self.lookup.get(&pack(tuple)).map(|&c| c as usize).ok_or(Error::NotPPowerTuple)
    }

    /// The tuple `h_j = Π_i g_i^{T_ij}`, i.e. `α ∘ T` for `α: Z^n → G`.
    pub fn precompose_tuple(&self, tuple: &[u32], t: &IntMatrix) -> Vec<u32> {
        precompose(&self.group, tuple, t)
    }

    pub fn precompose(&self, class: usize, t: &IntMatrix) -> usize {
        let tuple = precompose(&self.group, &self.reps[class], t);
        self.class_of(&tuple).expect("precomposition of a commuting p-power tuple")
    }

    /// Post-composition with a homomorphism into another group.
    pub fn push_forward(&self, class: usize, hom: &GroupHom, target: &HomClasses) -> usize {
        let image: Vec<u32> = self.reps[class].iter().map(|&g| hom.apply(g)).collect();
        target.class_of(&image).expect("homomorphisms preserve commuting p-power tuples")
    }
}

/// Enumerates `hom(Z_p^n, G)/~`.
pub fn enumerate_hom_classes(group: &Arc<FiniteGroup>, n: usize, p: u64) -> Result<HomClasses> {
    HomClasses::new(group.clone(), n, p)
}

/// `h_j = Π_i g_i^{T_ij}` for a commuting tuple `g`.
pub fn precompose(group: &FiniteGroup, tuple: &[u32], t: &IntMatrix) -> Vec<u32> {
    let n = tuple.len();
    assert_eq!(t.rows(), n);
    (0..t.cols())
        .map(|j| {
            (0..n).fold(0u32, |acc, i| group.mul(acc, group.pow(tuple[i], t.get(i, j))))
        })
        .collect()
}

/// Value of `α` on an arbitrary vector `v ∈ Z^n`.
fn evaluate(group: &FiniteGroup, tuple: &[u32], v: &[BigInt]) -> u32 {
    tuple
        .iter()
        .zip(v)
        .fold(0u32, |acc, (&g, e)| group.mul(acc, group.pow(g, e)))
}

fn check_commuting_p_tuple(group: &FiniteGroup, tuple: &[u32], p: u64) -> Result<()> {
    for (i, &a) in tuple.iter().enumerate() {
        if !is_p_power(group.element_order(a) as u64, p) {
            return Err(Error::NotPPowerTuple);
        }
        if tuple[..i].iter().any(|&b| !group.commute(a, b)) {
            return Err(Error::NotPPowerTuple);
        }
    }
    Ok(())
}

/// An orbit of `Z^n` acting on points through permutations: the points with
/// a word `w_y ∈ Z^n` carrying the base point to `y`, and the stabilizer.
struct Orbit {
    points: Vec<(usize, Vec<BigInt>)>,
    stabilizer: LatticeBasis,
}

fn orbits(perms: &[&[u16]], degree: usize, p: u64) -> Result<Vec<Orbit>> {
    let n = perms.len();
    let mut seen = vec![false; degree];
    let mut out = Vec::new();
    for start in 0..degree {
        if seen[start] {
            continue;
        }
        let mut words: HashMap<usize, Vec<BigInt>> = HashMap::new();
        let mut points = Vec::new();
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        words.insert(start, vec![BigInt::from(0); n]);
        while let Some(y) = queue.pop_front() {
            points.push((y, words[&y].clone()));
            for (i, perm) in perms.iter().enumerate() {
                let z = perm[y] as usize;
                if !seen[z] {
                    seen[z] = true;
                    let mut w = words[&y].clone();
                    w[i] += 1;
                    words.insert(z, w);
                    queue.push_back(z);
                }
            }
        }
        // Schreier generators w_y + e_i - w_{σ_i y} span the stabilizer.
        let mut gens = Vec::new();
        for (y, wy) in &points {
            for (i, perm) in perms.iter().enumerate() {
                let z = perm[*y] as usize;
                let g: Vec<BigInt> = (0..n)
                    .map(|k| &wy[k] + BigInt::from(u8::from(k == i)) - &words[&z][k])
                    .collect();
                if g.iter().any(|x| x != &BigInt::from(0)) {
                    gens.push(g);
                }
            }
        }
        let size = points.len();
        // The orbit size annihilates Z^n / stabilizer.
        for i in 0..n {
            let mut e = vec![BigInt::from(0); n];
            e[i] = BigInt::from(size);
            gens.push(e);
        }
        let stabilizer = LatticeBasis::from_generators(p, &IntMatrix::from_columns(n, &gens))?;
        if stabilizer.index() != BigInt::from(size) || !is_p_power(size as u64, p) {
            return Err(Error::NotPPowerTuple);
        }
        out.push(Orbit { points, stabilizer });
    }
    Ok(out)
}

/// The sum `⊕ H_i` attached to a commuting p-power tuple of permutations:
/// one summand per orbit, with `Λ_{H_i}` the stabilizer of the orbit.
pub fn symm_tuple_to_sum(group: &FiniteGroup, tuple: &[u32], p: u64) -> Result<SumOfSubgroups> {
    check_commuting_p_tuple(group, tuple, p)?;
    let perms: Vec<&[u16]> = tuple.iter().map(|&g| group.perm(g)).collect();
    let summands = orbits(&perms, group.degree(), p)?
        .into_iter()
        .map(|o| TorsionSubgroup::from_annihilator(o.stabilizer))
        .collect::<Result<Vec<_>>>()?;
    Ok(SumOfSubgroups::new(summands))
}

pub fn symm_class_to_sum(classes: &HomClasses, class: usize) -> Result<SumOfSubgroups> {
    symm_tuple_to_sum(classes.group(), classes.rep(class), classes.p())
}

/// Coset representatives of each summand laid out consecutively, and the
/// action of the basis vectors on them.
struct LambdaSet {
    /// (summand index, coset representative) per point
    points: Vec<(usize, Vec<i64>)>,
    /// `moves[j][x] = (y, κ)` with `x + e_j = y + κ`, `κ ∈ Λ_i`
    moves: Vec<Vec<(usize, Vec<i64>)>>,
}

fn lambda_set(lattices: &[&LatticeBasis], n: usize) -> LambdaSet {
    let mut points = Vec::new();
    let mut position = HashMap::new();
    for (i, lat) in lattices.iter().enumerate() {
        for v in lat.coset_representatives() {
            position.insert((i, v.clone()), points.len());
            points.push((i, v));
        }
    }
    let moves = (0..n)
        .map(|j| {
            points
                .iter()
                .map(|(i, v)| {
                    let mut w = v.clone();
                    w[j] += 1;
                    let shifted = w.clone();
                    lattices[*i].reduce(&mut w);
                    let kappa: Vec<i64> = shifted.iter().zip(&w).map(|(a, b)| a - b).collect();
                    (position[&(*i, w)], kappa)
                })
                .collect()
        })
        .collect();
    LambdaSet { points, moves }
}

/// The permutation tuple of `⨿ Z^n / Λ_{H_i}` in `Σ_m`, `m = Σ |H_i|`.
pub fn sum_to_symm_tuple(group: &FiniteGroup, sum: &SumOfSubgroups) -> Result<Vec<u32>> {
    let m = sum.total() as usize;
    if group.degree() != m {
        return Err(Error::GroupMismatch(format!(
            "sum of total {m} needs a permutation group on {m} points"
        )));
    }
    let n = sum.summands().first().map_or(0, TorsionSubgroup::n);
    let lattices: Vec<&LatticeBasis> = sum.summands().iter().map(|h| h.annihilator_lattice()).collect();
    let set = lambda_set(&lattices, n);
    set.moves
        .iter()
        .map(|mv| {
            let perm: Vec<u16> = mv.iter().map(|(y, _)| *y as u16).collect();
            group.element_of_perm(&perm).ok_or(Error::NotPPowerTuple)
        })
        .collect()
}

pub fn sum_to_symm_class(classes: &HomClasses, sum: &SumOfSubgroups) -> Result<usize> {
    classes.class_of(&sum_to_symm_tuple(classes.group(), sum)?)
}

/// A formal sum of pairs `(H_i, [α_i])` with `α_i: Λ_{H_i} → G` written
/// on the Hermite basis of `Λ_{H_i}`. Summands are kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DecoratedSum {
    summands: Vec<(TorsionSubgroup, usize)>,
}

impl DecoratedSum {
    pub fn new(mut summands: Vec<(TorsionSubgroup, usize)>) -> Self {
        summands.sort();
        DecoratedSum { summands }
    }

    pub fn summands(&self) -> &[(TorsionSubgroup, usize)] {
        &self.summands
    }

    pub fn total(&self) -> u64 {
        self.summands.iter().map(|(h, _)| h.order()).sum()
    }

    /// The underlying undecorated sum.
    pub fn sum(&self) -> SumOfSubgroups {
        SumOfSubgroups::new(self.summands.iter().map(|(h, _)| h.clone()).collect())
    }
}

/// All decorated sums of total `m` over the classes of `G`.
pub fn enumerate_decorated_sums(base_classes: &HomClasses, m: u64) -> Vec<DecoratedSum> {
    let p = base_classes.p();
    let mut bound = 0;
    while p.pow(bound + 1) <= m {
        bound += 1;
    }
    let items: Vec<(TorsionSubgroup, usize)> = enumerate_subgroups_up_to(p, base_classes.n(), bound)
        .into_iter()
        .flat_map(|h| (0..base_classes.len()).map(move |c| (h.clone(), c)))
        .collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(
        items: &[(TorsionSubgroup, usize)],
        start: usize,
        remaining: u64,
        current: &mut Vec<(TorsionSubgroup, usize)>,
        out: &mut Vec<DecoratedSum>,
    ) {
        if remaining == 0 {
            out.push(DecoratedSum::new(current.clone()));
            return;
        }
        for i in start..items.len() {
            if items[i].0.order() <= remaining {
                current.push(items[i].clone());
                rec(items, i, remaining - items[i].0.order(), current, out);
                current.pop();
            }
        }
    }
    rec(&items, 0, m, &mut current, &mut out);
    out.sort();
    out
}

/// `hom(Λ, G≀Σ_m)/~ → Sum_m(qz, G)`: split the projection to `Σ_m` into
/// orbits and read the `G`-coordinate at the least point of each orbit on
/// the Hermite basis of its stabilizer.
pub fn wreath_tuple_to_decorated(
    wreath: &FiniteGroup,
    tuple: &[u32],
    base_classes: &HomClasses,
) -> Result<DecoratedSum> {
    let p = base_classes.p();
    let (_, top) = wreath.wreath_parts().ok_or_else(|| Error::GroupMismatch("expected a wreath product".into()))?;
    check_commuting_p_tuple(wreath, tuple, p)?;
    let tops: Vec<u32> = tuple.iter().map(|&w| wreath.wreath_decode(w).1).collect();
    let perms: Vec<&[u16]> = tops.iter().map(|&s| top.perm(s)).collect();
    let mut summands = Vec::new();
    for orbit in orbits(&perms, top.degree(), p)? {
        let base_point = orbit.points[0].0;
        let basis = orbit.stabilizer.basis().columns();
        let alpha: Vec<u32> = basis
            .iter()
            .map(|b| wreath.wreath_decode(evaluate(wreath, tuple, b)).0[base_point])
            .collect();
        let class = base_classes.class_of(&alpha)?;
        summands.push((TorsionSubgroup::from_annihilator(orbit.stabilizer)?, class));
    }
    Ok(DecoratedSum::new(summands))
}

pub fn wreath_class_to_decorated(
    classes: &HomClasses,
    class: usize,
    base_classes: &HomClasses,
) -> Result<DecoratedSum> {
    wreath_tuple_to_decorated(classes.group(), classes.rep(class), base_classes)
}

/// Inverse of [`wreath_tuple_to_decorated`]: the induced action on
/// `⨿ Z^n/Λ_i × G` with cocycle `α_i(κ)`.
pub fn decorated_to_wreath_tuple(
    wreath: &FiniteGroup,
    sum: &DecoratedSum,
    base_classes: &HomClasses,
) -> Result<Vec<u32>> {
    let (base, top) = wreath.wreath_parts().ok_or_else(|| Error::GroupMismatch("expected a wreath product".into()))?;
    if sum.total() as usize != top.degree() {
        return Err(Error::GroupMismatch("decorated sum total differs from wreath degree".into()));
    }
    let n = base_classes.n();
    let lattices: Vec<&LatticeBasis> = sum.summands().iter().map(|(h, _)| h.annihilator_lattice()).collect();
    let set = lambda_set(&lattices, n);
    set.moves
        .iter()
        .map(|mv| {
            let perm: Vec<u16> = mv.iter().map(|(y, _)| *y as u16).collect();
            let s = top.element_of_perm(&perm).expect("a permutation of the points");
            let c: Vec<u32> = mv
                .iter()
                .zip(&set.points)
                .map(|((_, kappa), (i, _))| {
                    let (h, class) = &sum.summands()[*i];
                    let kappa = IntMatrix::from_i64(n, 1, kappa);
                    let t = lattice::solve_integer(h.annihilator_lattice(), &kappa)
                        .expect("κ lies in the stabilizer");
                    evaluate(base, base_classes.rep(*class), &t.column(0))
                })
                .collect();
            Ok(wreath.wreath_encode(&c, s))
        })
        .collect()
}

pub fn decorated_to_wreath_class(
    classes: &HomClasses,
    sum: &DecoratedSum,
    base_classes: &HomClasses,
) -> Result<usize> {
    classes.class_of(&decorated_to_wreath_tuple(classes.group(), sum, base_classes)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_examples() {
        assert_eq!(FiniteGroup::symmetric(3).unwrap().order(), 6);
        let w = FiniteGroup::parse("wr(S2,2)").unwrap();
        assert_eq!(w.order(), 8);
        assert!(!w.is_abelian());
        let c = FiniteGroup::parse("C2xC4").unwrap();
        assert_eq!(c.order(), 8);
        assert!(c.is_abelian());
        assert!(matches!(FiniteGroup::symmetric(8), Err(Error::TooLarge { .. })));
        assert!(matches!(FiniteGroup::parse("wr(S3,4)"), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn spec_parsing() {
        for s in ["S3", "C4", "S2xC2", "wr(S2,2)", "wr(C2xC2,2)xS3", "wr(wr(C2,2),2)"] {
            let spec: GroupSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        for bad in ["", "S", "S0", "T3", "wr(S2)", "wr(S2,2", "S2x", "C-1"] {
            assert!(matches!(bad.parse::<GroupSpec>(), Err(Error::InvalidGroupSpec { .. })), "{bad}");
        }
    }

    #[test]
    fn group_axioms_and_identity() {
        for spec in ["S4", "C6", "S2xS3", "wr(C2,3)"] {
            let g = FiniteGroup::parse(spec).unwrap();
            for a in g.elements() {
                assert_eq!(g.mul(a, 0), a);
                assert_eq!(g.mul(0, a), a);
                assert_eq!(g.mul(a, g.inv(a)), 0);
                assert_eq!(g.pow_u32(a, g.element_order(a)), 0);
            }
        }
    }

    #[test]
    fn wreath_coordinates_round_trip() {
        let w = FiniteGroup::parse("wr(S3,2)").unwrap();
        let (base, top) = w.wreath_parts().unwrap();
        assert_eq!(base.order(), 6);
        assert_eq!(top.order(), 2);
        for g in w.elements() {
            let (c, s) = w.wreath_decode(g);
            assert_eq!(w.wreath_encode(&c, s), g);
            // (y, x) ↦ (c_x(y), s(x))
            let perm = w.perm(g);
            for x in 0..2 {
                for y in 0..3 {
                    let expect = top.perm(s)[x] as usize * 3 + base.perm(c[x])[y] as usize;
                    assert_eq!(perm[x * 3 + y] as usize, expect);
                }
            }
        }
    }

    /// Brute force: all pairs of commuting 2-power elements of S3 merged
    /// under simultaneous conjugation.
    #[test]
    fn hom_classes_of_s3_match_bruteforce() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let two_power: Vec<u32> = g.elements().filter(|&a| [1, 2].contains(&g.element_order(a))).collect();
        let mut pairs = Vec::new();
        for &a in &two_power {
            for &b in &two_power {
                if g.commute(a, b) {
                    pairs.push((a, b));
                }
            }
        }
        assert_eq!(pairs.len(), 10);
        let mut orbits: Vec<BTreeSet<(u32, u32)>> = Vec::new();
        for &(a, b) in &pairs {
            if orbits.iter().any(|o| o.contains(&(a, b))) {
                continue;
            }
            orbits.push(g.elements().map(|x| (g.conj(x, a), g.conj(x, b))).collect());
        }
        let classes = enumerate_hom_classes(&g, 2, 2).unwrap();
        assert_eq!(orbits.len(), 4);
        assert_eq!(classes.len(), 4);
        assert_eq!(classes.tuple_count(), 10);
        for o in &orbits {
            let min = o.iter().next().unwrap();
            assert!(classes.reps().contains(&vec![min.0, min.1]));
        }
    }

    #[test]
    fn hom_class_counts() {
        assert_eq!(enumerate_hom_classes(&FiniteGroup::trivial(), 2, 2).unwrap().len(), 1);
        assert_eq!(enumerate_hom_classes(&FiniteGroup::cyclic(2).unwrap(), 1, 2).unwrap().len(), 2);
        // p' elements are excluded
        assert_eq!(enumerate_hom_classes(&FiniteGroup::cyclic(3).unwrap(), 1, 2).unwrap().len(), 1);
    }

    #[test]
    fn precompose_examples() {
        let g = FiniteGroup::parse("C2xC2").unwrap();
        let classes = enumerate_hom_classes(&g, 2, 2).unwrap();
        for c in 0..classes.len() {
            assert_eq!(classes.precompose(c, &IntMatrix::identity(2)), c);
            assert_eq!(classes.precompose(c, &IntMatrix::scalar(2, 2)), 0);
        }
        let swap = IntMatrix::from_rows(&[&[0, 1], &[1, 0]]);
        let t = classes.precompose_tuple(&[1, 2], &swap);
        assert_eq!(t, vec![2, 1]);
    }

    #[test]
    fn symmetric_bijection_small_cases() {
        let s2 = FiniteGroup::symmetric(2).unwrap();
        let classes = enumerate_hom_classes(&s2, 1, 2).unwrap();
        let trivial = symm_class_to_sum(&classes, 0).unwrap();
        assert_eq!(trivial.summands(), &[TorsionSubgroup::trivial(2, 1), TorsionSubgroup::trivial(2, 1)]);
        let t = symm_class_to_sum(&classes, 1).unwrap();
        assert_eq!(t.summands(), &[TorsionSubgroup::full_torsion(2, 1, 1)]);
        assert_eq!(sum_to_symm_class(&classes, &t).unwrap(), 1);
        assert_eq!(sum_to_symm_class(&classes, &trivial).unwrap(), 0);
    }

    #[test]
    fn symm_tuple_rejects_bad_tuples() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let three_cycle = s3.element_of_perm(&[1, 2, 0]).unwrap();
        assert_eq!(symm_tuple_to_sum(&s3, &[three_cycle], 2), Err(Error::NotPPowerTuple));
        let t1 = s3.element_of_perm(&[1, 0, 2]).unwrap();
        let t2 = s3.element_of_perm(&[0, 2, 1]).unwrap();
        assert_eq!(symm_tuple_to_sum(&s3, &[t1, t2], 2), Err(Error::NotPPowerTuple));
    }

    #[test]
    fn fixed_coset_examples() {
        let s2 = FiniteGroup::symmetric(2).unwrap();
        assert_eq!(s2.fixed_cosets(&[0, 1], &[1]).unwrap(), vec![0]);
        assert_eq!(s2.fixed_cosets(&[0], &[0]).unwrap(), vec![0, 1]);
        assert!(s2.fixed_cosets(&[0], &[1]).unwrap().is_empty());
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(s3.fixed_cosets(&[0, 1, 2], &[0]), Err(Error::NotASubgroup));
    }

    #[test]
    fn fixed_cosets_conjugate_into_subgroup() {
        let s4 = FiniteGroup::symmetric(4).unwrap();
        let young = delta_embed(2, 2).unwrap();
        let h: Vec<u32> = young.source().elements().map(|g| young.apply(g)).collect();
        let in_h = s4.membership(&h).unwrap();
        let classes = enumerate_hom_classes(&s4, 2, 2).unwrap();
        for rep in classes.reps() {
            for g in s4.fixed_cosets(&h, rep).unwrap() {
                for &a in rep {
                    assert!(in_h[s4.conj(s4.inv(g), a) as usize]);
                }
            }
        }
    }

    #[test]
    fn delta_embed_examples() {
        let d = delta_embed(2, 3).unwrap();
        assert_eq!(d.apply(0), 0);
        assert!(d.is_injective());
        assert_eq!(d.source().order(), 12);
    }

    #[test]
    fn abelian_subgroups_of_s3() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let subs = s3.abelian_subgroups().unwrap();
        // {e}, three of order 2, one of order 3
        let sizes: Vec<usize> = subs.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 2, 2, 2, 3]);
        // brute force over all subsets closed under multiplication
        let mut brute = 0;
        for mask in 1u32..(1 << 6) {
            let set: Vec<u32> = (0..6).filter(|i| mask >> i & 1 == 1).collect();
            if s3.membership(&set).is_ok() && set.iter().all(|&a| set.iter().all(|&b| s3.commute(a, b))) {
                brute += 1;
            }
        }
        assert_eq!(brute, 5);
    }

    #[test]
    fn group_hom_checks() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let c2 = FiniteGroup::cyclic(2).unwrap();
        assert!(GroupHom::from_perm_embedding(c2.clone(), s3.clone()).is_ok());
        // sign map
        let sign = GroupHom::from_fn(s3.clone(), c2.clone(), |g| {
            let p = s3.perm(g);
            let inversions = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            (inversions % 2) as u32
        });
        assert!(sign.is_ok());
        let bad = GroupHom::from_fn(s3.clone(), c2, |g| u32::from(g == 1));
        assert!(matches!(bad, Err(Error::NotAHomomorphism)));
    }

    #[test]
    fn wreath_bijection_for_s2_wr_s2() {
        let base = FiniteGroup::symmetric(2).unwrap();
        let w = FiniteGroup::wreath(&base, 2).unwrap();
        let base_classes = enumerate_hom_classes(&base, 1, 2).unwrap();
        let classes = enumerate_hom_classes(&w, 1, 2).unwrap();
        let decorated = enumerate_decorated_sums(&base_classes, 2);
        assert_eq!(classes.len(), 5);
        assert_eq!(decorated.len(), 5);
        let mut images = BTreeSet::new();
        for c in 0..classes.len() {
            let d = wreath_class_to_decorated(&classes, c, &base_classes).unwrap();
            assert_eq!(decorated_to_wreath_class(&classes, &d, &base_classes).unwrap(), c);
            images.insert(d);
        }
        assert_eq!(images.into_iter().collect::<Vec<_>>(), decorated);
    }

    #[test]
    fn wreath_diagonal_tuples() {
        let base = FiniteGroup::cyclic(2).unwrap();
        let w = FiniteGroup::wreath(&base, 3).unwrap();
        let base_classes = enumerate_hom_classes(&base, 1, 2).unwrap();
        let diag = w.wreath_encode(&[1, 1, 1], 0);
        let d = wreath_tuple_to_decorated(&w, &[diag], &base_classes).unwrap();
        assert_eq!(d.summands().len(), 3);
        assert!(d.summands().iter().all(|(h, c)| h.is_trivial() && *c == 1));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn precompose_is_functorial(
                c in 0usize..17,
                t1 in proptest::collection::vec(-3i64..=3, 4),
                t2 in proptest::collection::vec(-3i64..=3, 4),
            ) {
                let s4 = FiniteGroup::symmetric(4).unwrap();
                let classes = enumerate_hom_classes(&s4, 2, 2).unwrap();
                let a = IntMatrix::from_i64(2, 2, &t1);
                let b = IntMatrix::from_i64(2, 2, &t2);
                let lhs = classes.precompose(classes.precompose(c, &a), &b);
                let rhs = classes.precompose(c, &(&a * &b));
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn precompose_ignores_representative(c in 0usize..17, x in 0u32..24, t in proptest::collection::vec(-3i64..=3, 4)) {
                let s4 = FiniteGroup::symmetric(4).unwrap();
                let classes = enumerate_hom_classes(&s4, 2, 2).unwrap();
                let tm = IntMatrix::from_i64(2, 2, &t);
                let conj: Vec<u32> = classes.rep(c).iter().map(|&a| s4.conj(x, a)).collect();
                let via_conj = classes.class_of(&classes.precompose_tuple(&conj, &tm)).unwrap();
                prop_assert_eq!(via_conj, classes.precompose(c, &tm));
            }
        }
    }
}
