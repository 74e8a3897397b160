//! Finite groups stored as Cayley tables.
//!
//! Element indices are zero-based. Groups share their table through an
//! `Arc`, so cloning a [`FiniteGroup`] is cheap.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::ab::{smith_normal_form_with_cols, Element, FiniteAbelianGroup};
use crate::error::{Error, Result};

pub const DEFAULT_ORDER_CAP: usize = 2000;

#[derive(PartialEq, Eq)]
struct GroupData {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
    label: String,
}

#[derive(Clone)]
pub struct FiniteGroup(Arc<GroupData>);

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.table == other.0.table && self.0.identity == other.0.identity)
    }
}

impl Eq for FiniteGroup {}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.0.label, self.order())
    }
}

impl FiniteGroup {
    /// Validates a Cayley table: latin square, two-sided identity, associativity.
    pub fn from_table(table: Vec<Vec<usize>>, label: impl Into<String>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        if n > DEFAULT_ORDER_CAP {
            return Err(Error::SizeCap {
                what: "group order",
                size: n,
                cap: DEFAULT_ORDER_CAP,
            });
        }
        let mut seen = vec![0usize; n];
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidTable(format!("row {i} has length {}", row.len())));
            }
            for (j, &x) in row.iter().enumerate() {
                if x >= n {
                    return Err(Error::InvalidTable(format!("entry ({i},{j}) = {x} out of range")));
                }
                if seen[x] == i + 1 {
                    return Err(Error::InvalidTable(format!("row {i} repeats element {x}")));
                }
                seen[x] = i + 1;
            }
        }
        for j in 0..n {
            let mut col = vec![false; n];
            for (i, row) in table.iter().enumerate() {
                if std::mem::replace(&mut col[row[j]], true) {
                    return Err(Error::InvalidTable(format!(
                        "column {j} repeats element {} (row {i})",
                        row[j]
                    )));
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::InvalidTable("no two-sided identity".into()))?;
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidTable(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(Self::from_valid_table(table, identity, label.into()))
    }

    fn from_valid_table(table: Vec<Vec<usize>>, identity: usize, label: String) -> Self {
        let n = table.len();
        let mut inverses = vec![0; n];
        for (a, row) in table.iter().enumerate() {
            inverses[a] = row.iter().position(|&x| x == identity).expect("latin row");
        }
        FiniteGroup(Arc::new(GroupData {
            table,
            identity,
            inverses,
            label,
        }))
    }

    /// Closure of permutations of `0..degree` under composition, with the
    /// product `(a·b)(x) = a(b(x))`. Element 0 is the identity.
    pub fn from_permutations(degree: usize, generators: &[Vec<usize>]) -> Result<Self> {
        Self::from_permutations_capped(degree, generators, DEFAULT_ORDER_CAP)
    }

    pub fn from_permutations_capped(
        degree: usize,
        generators: &[Vec<usize>],
        cap: usize,
    ) -> Result<Self> {
        for (i, g) in generators.iter().enumerate() {
            let mut hit = vec![false; degree];
            if g.len() != degree
                || g.iter().any(|&x| x >= degree || std::mem::replace(&mut hit[x], true))
            {
                return Err(Error::InvalidTable(format!(
                    "generator {i} is not a permutation of 0..{degree}"
                )));
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut elements = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                let prod: Vec<usize> = g.iter().map(|&x| elements[i][x]).collect();
                if !index.contains_key(&prod) {
                    if elements.len() == cap {
                        return Err(Error::SizeCap {
                            what: "group order",
                            size: cap + 1,
                            cap,
                        });
                    }
                    index.insert(prod.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(prod);
                }
            }
        }
        let table = elements
            .iter()
            .map(|a| {
                elements
                    .iter()
                    .map(|b| {
                        let ab: Vec<usize> = b.iter().map(|&x| a[x]).collect();
                        index[&ab]
                    })
                    .collect()
            })
            .collect();
        Ok(Self::from_valid_table(
            table,
            0,
            format!("perm group of degree {degree}"),
        ))
    }

    pub fn trivial() -> Self {
        Self::from_valid_table(vec![vec![0]], 0, "C1".into())
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_valid_table(table, 0, format!("C{n}"))
    }

    /// Dihedral group of order `2n`: element `r^i s^e` has index `i + n·e`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 1);
        let decode = |x: usize| (x % n, x / n);
        let table = (0..2 * n)
            .map(|a| {
                (0..2 * n)
                    .map(|b| {
                        let (i, e) = decode(a);
                        let (j, f) = decode(b);
                        // r^i s^e r^j s^f = r^(i ± j) s^(e+f)
                        let k = if e == 0 { (i + j) % n } else { (i + n - j) % n };
                        k + n * ((e + f) % 2)
                    })
                    .collect()
            })
            .collect();
        Self::from_valid_table(table, 0, format!("D{n}"))
    }

    /// Upper unitriangular 3×3 matrices over `Z/p`; `(a,b,c)` has index `a + p·b + p²·c`,
    /// with product `(a,b,c)(a',b',c') = (a+a', b+b', c+c'+a·b')`.
    pub fn heisenberg(p: usize) -> Self {
        assert!(p >= 2);
        let n = p * p * p;
        let decode = |x: usize| (x % p, (x / p) % p, x / (p * p));
        let table = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| {
                        let (a, b, c) = decode(x);
                        let (a2, b2, c2) = decode(y);
                        let (ra, rb, rc) = ((a + a2) % p, (b + b2) % p, (c + c2 + a * b2) % p);
                        ra + p * rb + p * p * rc
                    })
                    .collect()
            })
            .collect();
        Self::from_valid_table(table, 0, format!("Heis({p})"))
    }

    /// `G × H` with `(g, h)` at index `g·|H| + h`.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<Self> {
        let (m, n) = (g.order(), h.order());
        if m * n > DEFAULT_ORDER_CAP {
            return Err(Error::SizeCap {
                what: "group order",
                size: m * n,
                cap: DEFAULT_ORDER_CAP,
            });
        }
        let table = (0..m * n)
            .map(|x| {
                (0..m * n)
                    .map(|y| g.mul(x / n, y / n) * n + h.mul(x % n, y % n))
                    .collect()
            })
            .collect();
        Ok(Self::from_valid_table(
            table,
            g.identity() * n + h.identity(),
            format!("{}x{}", g.label(), h.label()),
        ))
    }

    pub fn with_label(&self, label: impl Into<String>) -> Self {
        Self::from_valid_table(self.0.table.clone(), self.0.identity, label.into())
    }

    pub fn order(&self) -> usize {
        self.0.table.len()
    }

    pub fn identity(&self) -> usize {
        self.0.identity
    }

    pub fn label(&self) -> &str {
        &self.0.label
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.0.table
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.0.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.0.inverses[a]
    }

    /// `g x g⁻¹`.
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// `a⁻¹ b⁻¹ a b`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        let l = self.mul(self.inv(a), self.inv(b));
        self.mul(l, self.mul(a, b))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity() {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// A small generating set, picked greedily by decreasing element order.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut by_order: Vec<usize> = self.elements().collect();
        let orders: Vec<usize> = by_order.iter().map(|&a| self.element_order(a)).collect();
        by_order.sort_by_key(|&a| (std::cmp::Reverse(orders[a]), a));
        let mut gens = Vec::new();
        let mut current = Subgroup::trivial(self);
        for a in by_order {
            if current.order() == self.order() {
                break;
            }
            if !current.contains(a) {
                gens.push(a);
                current = Subgroup::generated(self, &gens);
            }
        }
        gens
    }

    /// Elements in BFS order from the identity.
    pub(crate) fn bfs_order(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[self.identity()] = true;
        let mut order = vec![self.identity()];
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            head += 1;
            for &s in gens {
                let y = self.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    order.push(y);
                }
            }
        }
        order
    }

    pub fn commutator_subgroup(&self) -> Subgroup {
        let gens = self.generating_set();
        let comms: Vec<usize> = gens
            .iter()
            .flat_map(|&a| gens.iter().map(move |&b| (a, b)))
            .map(|(a, b)| self.commutator(a, b))
            .collect();
        normal_closure(self, &Subgroup::generated(self, &comms)).expect("generated subgroup")
    }
}

/// Subgroup of a finite group as a sorted element list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    elements: Vec<usize>,
    parent_order: usize,
}

impl Subgroup {
    pub fn generated(g: &FiniteGroup, gens: &[usize]) -> Self {
        let mut member = vec![false; g.order()];
        member[g.identity()] = true;
        let mut elements = vec![g.identity()];
        let mut head = 0;
        while head < elements.len() {
            let x = elements[head];
            head += 1;
            for &s in gens {
                let y = g.mul(x, s);
                if !member[y] {
                    member[y] = true;
                    elements.push(y);
                }
            }
        }
        elements.sort_unstable();
        Subgroup {
            elements,
            parent_order: g.order(),
        }
    }

    /// Validates that the given set is a subgroup.
    pub fn from_elements(g: &FiniteGroup, elements: &[usize]) -> Result<Self> {
        let mut member = vec![false; g.order()];
        for &x in elements {
            if x >= g.order() {
                return Err(Error::NotSubgroup(format!("element {x} out of range")));
            }
            member[x] = true;
        }
        if !member[g.identity()] {
            return Err(Error::NotSubgroup("identity missing".into()));
        }
        for a in g.elements().filter(|&a| member[a]) {
            if !member[g.inv(a)] {
                return Err(Error::NotSubgroup(format!("inverse of {a} missing")));
            }
            for b in g.elements().filter(|&b| member[b]) {
                if !member[g.mul(a, b)] {
                    return Err(Error::NotSubgroup(format!(
                        "product of {a} and {b} missing"
                    )));
                }
            }
        }
        Ok(Subgroup {
            elements: g.elements().filter(|&a| member[a]).collect(),
            parent_order: g.order(),
        })
    }

    pub fn trivial(g: &FiniteGroup) -> Self {
        Subgroup {
            elements: vec![g.identity()],
            parent_order: g.order(),
        }
    }

    pub fn whole(g: &FiniteGroup) -> Self {
        Subgroup {
            elements: g.elements().collect(),
            parent_order: g.order(),
        }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index(&self) -> usize {
        self.parent_order / self.order()
    }

    pub fn parent_order(&self) -> usize {
        self.parent_order
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.order() == self.parent_order
    }

    pub fn is_normal(&self, g: &FiniteGroup) -> bool {
        let gens = g.generating_set();
        self.elements
            .iter()
            .all(|&x| gens.iter().all(|&s| self.contains(g.conj(s, x))))
    }

    /// Greedy generating set of the subgroup.
    pub fn generators(&self, g: &FiniteGroup) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut current = Subgroup::trivial(g);
        for &x in self.elements.iter().rev() {
            if current.order() == self.order() {
                break;
            }
            if !current.contains(x) {
                gens.push(x);
                current = Subgroup::generated(g, &gens);
            }
        }
        gens
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        Subgroup {
            elements: self
                .elements
                .iter()
                .copied()
                .filter(|&x| other.contains(x))
                .collect(),
            parent_order: self.parent_order,
        }
    }

    /// The subgroup as a group in its own right, with its embedding.
    /// Element `i` of the new group is `self.elements()[i]`.
    pub fn as_group(&self, g: &FiniteGroup) -> (FiniteGroup, GroupHom) {
        let pos: HashMap<usize, usize> = self
            .elements
            .iter()
            .enumerate()
            .map(|(i, &x)| (x, i))
            .collect();
        let table = self
            .elements
            .iter()
            .map(|&a| self.elements.iter().map(|&b| pos[&g.mul(a, b)]).collect())
            .collect();
        let h = FiniteGroup::from_valid_table(
            table,
            pos[&g.identity()],
            format!("sub({}, order {})", g.label(), self.order()),
        );
        let emb = GroupHom {
            source: h.clone(),
            target: g.clone(),
            images: self.elements.clone(),
        };
        (h, emb)
    }
}

/// Smallest normal subgroup containing `s`.
pub fn normal_closure(g: &FiniteGroup, s: &Subgroup) -> Result<Subgroup> {
    if s.parent_order != g.order() {
        return Err(Error::NotSubgroup("subgroup of a different group".into()));
    }
    let gens = s.generators(g);
    let conjugates: Vec<usize> = g
        .elements()
        .flat_map(|x| gens.iter().map(move |&y| (x, y)))
        .map(|(x, y)| g.conj(x, y))
        .collect();
    Ok(Subgroup::generated(g, &conjugates))
}

/// `G/N` on minimal-index coset representatives, with the projection.
pub fn quotient_group(g: &FiniteGroup, n: &Subgroup) -> Result<(FiniteGroup, GroupHom)> {
    if n.parent_order != g.order() {
        return Err(Error::NotSubgroup("subgroup of a different group".into()));
    }
    if !n.is_normal(g) {
        return Err(Error::NotNormal);
    }
    let mut coset = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for x in g.elements() {
        if coset[x] != usize::MAX {
            continue;
        }
        for &k in n.elements() {
            coset[g.mul(x, k)] = reps.len();
        }
        reps.push(x);
    }
    let table = reps
        .iter()
        .map(|&a| reps.iter().map(|&b| coset[g.mul(a, b)]).collect())
        .collect();
    let q = FiniteGroup::from_valid_table(
        table,
        coset[g.identity()],
        format!("{}/N{}", g.label(), n.order()),
    );
    let proj = GroupHom {
        source: g.clone(),
        target: q.clone(),
        images: coset,
    };
    Ok((q, proj))
}

/// Homomorphism of finite groups as an element map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    source: FiniteGroup,
    target: FiniteGroup,
    images: Vec<usize>,
}

impl GroupHom {
    pub fn new(source: &FiniteGroup, target: &FiniteGroup, images: Vec<usize>) -> Result<Self> {
        if images.len() != source.order() || images.iter().any(|&y| y >= target.order()) {
            return Err(Error::InvalidHom("image list has the wrong shape".into()));
        }
        for a in source.elements() {
            for b in source.elements() {
                if images[source.mul(a, b)] != target.mul(images[a], images[b]) {
                    return Err(Error::InvalidHom(format!(
                        "multiplicativity fails at ({a},{b})"
                    )));
                }
            }
        }
        Ok(GroupHom {
            source: source.clone(),
            target: target.clone(),
            images,
        })
    }

    /// Extends an assignment on generators along the Cayley graph and checks it.
    pub fn from_generator_images(
        source: &FiniteGroup,
        target: &FiniteGroup,
        gens: &[usize],
        gen_images: &[usize],
    ) -> Result<Self> {
        if gens.len() != gen_images.len() {
            return Err(Error::InvalidHom("generator and image lists differ in length".into()));
        }
        if gen_images.iter().any(|&y| y >= target.order()) {
            return Err(Error::InvalidHom("generator image out of range".into()));
        }
        let mut images = vec![usize::MAX; source.order()];
        images[source.identity()] = target.identity();
        for x in source.bfs_order(gens) {
            for (k, &s) in gens.iter().enumerate() {
                let y = source.mul(x, s);
                if images[y] == usize::MAX {
                    images[y] = target.mul(images[x], gen_images[k]);
                }
            }
        }
        if images.contains(&usize::MAX) {
            return Err(Error::InvalidHom("generators do not generate the source".into()));
        }
        Self::new(source, target, images)
    }

    pub fn identity(g: &FiniteGroup) -> Self {
        GroupHom {
            source: g.clone(),
            target: g.clone(),
            images: g.elements().collect(),
        }
    }

    pub fn trivial(source: &FiniteGroup, target: &FiniteGroup) -> Self {
        GroupHom {
            source: source.clone(),
            target: target.clone(),
            images: vec![target.identity(); source.order()],
        }
    }

    pub fn source(&self) -> &FiniteGroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteGroup {
        &self.target
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn kernel(&self) -> Subgroup {
        let e = self.target.identity();
        Subgroup {
            elements: self
                .source
                .elements()
                .filter(|&x| self.images[x] == e)
                .collect(),
            parent_order: self.source.order(),
        }
    }

    pub fn image(&self) -> Subgroup {
        let mut hit = vec![false; self.target.order()];
        for &y in &self.images {
            hit[y] = true;
        }
        Subgroup {
            elements: self.target.elements().filter(|&y| hit[y]).collect(),
            parent_order: self.target.order(),
        }
    }

    /// Image of a subgroup of the source.
    pub fn image_of(&self, s: &Subgroup) -> Subgroup {
        let imgs: Vec<usize> = s.elements().iter().map(|&x| self.images[x]).collect();
        Subgroup::generated(&self.target, &imgs)
    }

    pub fn preimage(&self, s: &Subgroup) -> Subgroup {
        Subgroup {
            elements: self
                .source
                .elements()
                .filter(|&x| s.contains(self.images[x]))
                .collect(),
            parent_order: self.source.order(),
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &GroupHom) -> Result<GroupHom> {
        if inner.target != self.source {
            return Err(Error::InvalidHom("composition of incompatible maps".into()));
        }
        Ok(GroupHom {
            source: inner.source.clone(),
            target: self.target.clone(),
            images: inner.images.iter().map(|&y| self.images[y]).collect(),
        })
    }

    pub fn is_surjective(&self) -> bool {
        self.image().order() == self.target.order()
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().order() == 1
    }
}

/// `G^ab` in invariant-factor form with the projection on elements.
#[derive(Clone, Debug)]
pub struct Abelianization {
    pub group: FiniteAbelianGroup,
    /// Coordinates of the image of every element of `G`.
    pub images: Vec<Element>,
    pub commutator: Subgroup,
}

impl Abelianization {
    pub fn project(&self, x: usize) -> &Element {
        &self.images[x]
    }

    /// Image of a subgroup in `G^ab`, given by generator images.
    pub fn image_generators(&self, g: &FiniteGroup, s: &Subgroup) -> Vec<Element> {
        s.generators(g).iter().map(|&x| self.images[x].clone()).collect()
    }
}

pub fn abelianization(g: &FiniteGroup) -> Abelianization {
    let commutator = g.commutator_subgroup();
    let (q, proj) = quotient_group(g, &commutator).expect("commutator subgroup is normal");
    let gens = q.generating_set();
    let r = gens.len();

    // exponent vectors along a BFS tree; non-tree edges give the relations
    let mut vecs: Vec<Option<Vec<i64>>> = vec![None; q.order()];
    vecs[q.identity()] = Some(vec![0; r]);
    let mut relations: Vec<Vec<i64>> = Vec::new();
    for x in q.bfs_order(&gens) {
        let vx = vecs[x].clone().expect("reached in BFS order");
        for k in 0..r {
            let y = q.mul(x, gens[k]);
            let mut w = vx.clone();
            w[k] += 1;
            match &vecs[y] {
                None => vecs[y] = Some(w),
                Some(vy) => {
                    let rel: Vec<i64> = w.iter().zip(vy).map(|(a, b)| a - b).collect();
                    if rel.iter().any(|&c| c != 0) && !relations.contains(&rel) {
                        relations.push(rel);
                    }
                }
            }
        }
    }
    let snf = smith_normal_form_with_cols(&relations, r);
    let mut diag = snf.diagonal.clone();
    diag.resize(r, 0);
    let kept: Vec<usize> = (0..r).filter(|&j| diag[j] != 1).collect();
    let factors: Vec<u64> = kept.iter().map(|&j| diag[j] as u64).collect();
    let group = FiniteAbelianGroup::new(factors).expect("Smith diagonal is a divisibility chain");
    let coords = |v: &[i64]| -> Element {
        let full: Vec<i64> = (0..r)
            .map(|j| (0..r).map(|i| v[i] * snf.right[i][j]).sum())
            .collect();
        group.reduce(&kept.iter().map(|&j| full[j]).collect::<Vec<_>>())
    };
    let q_coords: Vec<Element> = vecs
        .iter()
        .map(|v| coords(v.as_ref().expect("all of Q is reached")))
        .collect();
    let images = g.elements().map(|x| q_coords[proj.apply(x)].clone()).collect();
    Abelianization {
        group,
        images,
        commutator,
    }
}
