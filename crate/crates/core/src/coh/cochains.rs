use crate::ab::{kernel_generators, AbHom, AbSubgroup, Element, FiniteAbelianGroup, Subquotient};
use crate::error::{Error, Result};
use crate::grp::{quotient_group, GroupHom, Subgroup};

use super::{fixed_submodule, GModule};

/// Default bound on `|G|^degree · rank(A)`.
pub const DEFAULT_COCHAIN_CAP: usize = 20_000;

/// Full table of a cochain: one value for degree 0, `f(g)` at index `g` for
/// degree 1, `f(g, h)` at index `g·|G| + h` for degree 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainValues {
    pub degree: usize,
    pub order: usize,
    pub values: Vec<Element>,
}

impl CochainValues {
    pub fn at1(&self, g: usize) -> &Element {
        &self.values[g]
    }

    pub fn at2(&self, g: usize, h: usize) -> &Element {
        &self.values[g * self.order + h]
    }
}

/// Which values of a cochain are free unknowns.
#[derive(Clone, Debug)]
struct Layout {
    degree: usize,
    gens: Vec<usize>,
    /// `(g, k)`: the value at `g` (degree 2 only) and generator `gens[k]`.
    slots: Vec<(usize, usize)>,
}

impl Layout {
    fn new(m: &GModule, degree: usize) -> Self {
        let g = m.group();
        let gens = g.generating_set();
        let slots = match degree {
            0 => vec![(0, 0)],
            1 => (0..gens.len()).map(|k| (0, k)).collect(),
            _ => g
                .elements()
                .filter(|&x| x != g.identity())
                .flat_map(|x| (0..gens.len()).map(move |k| (x, k)))
                .collect(),
        };
        Layout {
            degree,
            gens,
            slots,
        }
    }

    fn moduli(&self, a: &FiniteAbelianGroup) -> Vec<u64> {
        self.slots
            .iter()
            .flat_map(|_| a.factors().iter().copied())
            .collect()
    }

    /// Reads the unknowns off a full value table.
    fn read(&self, m: &GModule, vals: &CochainValues) -> Element {
        let r = m.coeff().rank();
        let mut x = Vec::with_capacity(self.slots.len() * r);
        for &(g, k) in &self.slots {
            let v = match self.degree {
                0 => &vals.values[0],
                1 => vals.at1(self.gens[k]),
                _ => vals.at2(g, self.gens[k]),
            };
            x.extend_from_slice(v);
        }
        x
    }
}

/// Extends unknowns to a full table along the BFS tree; returns the table
/// and the concatenated defects on non-tree edges. Both are linear in `x`.
fn extend(m: &GModule, layout: &Layout, x: &[i64]) -> (CochainValues, Vec<i64>) {
    let g = m.group();
    let a = m.coeff();
    let r = a.rank();
    let n = g.order();
    let e = g.identity();
    let block = |j: usize| -> &[i64] { &x[j * r..(j + 1) * r] };
    let mut defects = Vec::new();
    match layout.degree {
        0 => {
            let v = a.reduce(block(0));
            for &s in &layout.gens {
                defects.extend(a.sub(&m.act(s, &v), &v));
            }
            (
                CochainValues {
                    degree: 0,
                    order: n,
                    values: vec![v],
                },
                defects,
            )
        }
        1 => {
            let mut vals: Vec<Option<Element>> = vec![None; n];
            vals[e] = Some(a.zero());
            for y in g.bfs_order(&layout.gens) {
                let fy = vals[y].clone().expect("reached");
                for (k, &s) in layout.gens.iter().enumerate() {
                    let z = g.mul(y, s);
                    let cand = a.add(&fy, &m.act(y, block(k)));
                    match &vals[z] {
                        None => vals[z] = Some(cand),
                        Some(fz) => defects.extend(a.sub(&cand, fz)),
                    }
                }
            }
            let values = vals.into_iter().map(|v| v.expect("generating set")).collect();
            (
                CochainValues {
                    degree: 1,
                    order: n,
                    values,
                },
                defects,
            )
        }
        _ => {
            let sgen = layout.gens.len();
            let slot_of = |h: usize, k: usize| -> Option<usize> {
                // slots are ordered by element, skipping the identity
                if h == e {
                    None
                } else {
                    let pos = if h > e { h - 1 } else { h };
                    Some(pos * sgen + k)
                }
            };
            let order = g.bfs_order(&layout.gens);
            let mut values = vec![a.zero(); n * n];
            for gg in g.elements().filter(|&gg| gg != e) {
                let mut set = vec![false; n];
                set[e] = true;
                for &h in &order {
                    let fh = values[gg * n + h].clone();
                    let gh = g.mul(gg, h);
                    for (k, &s) in layout.gens.iter().enumerate() {
                        let z = g.mul(h, s);
                        // f(g, hs) = f(g, h) + f(gh, s) - g·f(h, s)
                        let mut cand = fh.clone();
                        if let Some(j) = slot_of(gh, k) {
                            cand = a.add(&cand, block(j));
                        }
                        if let Some(j) = slot_of(h, k) {
                            cand = a.sub(&cand, &m.act(gg, block(j)));
                        }
                        if set[z] {
                            defects.extend(a.sub(&cand, &values[gg * n + z]));
                        } else {
                            set[z] = true;
                            values[gg * n + z] = cand;
                        }
                    }
                }
            }
            (
                CochainValues {
                    degree: 2,
                    order: n,
                    values,
                },
                defects,
            )
        }
    }
}

/// `H^degree(G, A)` for degree 0, 1 or 2, with explicit cocycle representatives.
#[derive(Clone, Debug)]
pub struct CohomologyGroup {
    module: GModule,
    layout: Layout,
    sq: Subquotient,
    z_order: u128,
    b_order: u128,
}

impl CohomologyGroup {
    pub fn degree(&self) -> usize {
        self.layout.degree
    }

    pub fn module(&self) -> &GModule {
        &self.module
    }

    pub fn value(&self) -> &FiniteAbelianGroup {
        self.sq.group()
    }

    /// Order of the cocycle group.
    pub fn z_order(&self) -> u128 {
        self.z_order
    }

    /// Order of the coboundary group.
    pub fn b_order(&self) -> u128 {
        self.b_order
    }

    /// Generators used to parametrize cochains.
    pub fn generators(&self) -> &[usize] {
        &self.layout.gens
    }

    /// Cocycle representatives of the basis of [`Self::value`], as unknown vectors.
    pub fn representatives(&self) -> &[Element] {
        self.sq.reps()
    }

    pub fn values_of(&self, x: &[i64]) -> CochainValues {
        extend(&self.module, &self.layout, x).0
    }

    pub fn representative_values(&self) -> Vec<CochainValues> {
        self.representatives()
            .iter()
            .map(|x| self.values_of(x))
            .collect()
    }

    /// Class of a cocycle given by its unknowns, or `None` if it is not a cocycle.
    pub fn class_of(&self, x: &[i64]) -> Option<Element> {
        self.sq.coords(x)
    }

    /// Class of a normalized cocycle given by its full table.
    pub fn class_of_values(&self, vals: &CochainValues) -> Option<Element> {
        if vals.degree != self.degree() || vals.order != self.module.group().order() {
            return None;
        }
        let x = self.layout.read(&self.module, vals);
        let (rebuilt, defects) = extend(&self.module, &self.layout, &x);
        if rebuilt != *vals || defects.iter().any(|&d| d != 0) {
            return None;
        }
        self.class_of(&x)
    }

    /// Representative table of a class given in coordinates of [`Self::value`].
    pub fn lift_class(&self, coords: &[i64]) -> CochainValues {
        self.values_of(&self.sq.lift(coords))
    }

    /// Exhaustive check of the cocycle identity and normalization.
    pub fn is_cocycle(&self, vals: &CochainValues) -> bool {
        is_cocycle(&self.module, vals)
    }
}

/// Exhaustive check of the cocycle identity, including normalization in degree 2.
pub(crate) fn is_cocycle(m: &GModule, vals: &CochainValues) -> bool {
    let g = m.group();
    let a = m.coeff();
    let e = g.identity();
    match vals.degree {
        0 => g
            .elements()
            .all(|x| m.act(x, &vals.values[0]) == a.reduce(&vals.values[0])),
        1 => g.elements().all(|x| {
            g.elements().all(|y| {
                *vals.at1(g.mul(x, y)) == a.add(vals.at1(x), &m.act(x, vals.at1(y)))
            })
        }),
        _ => {
            let normalized = g
                .elements()
                .all(|x| a.is_zero(vals.at2(e, x)) && a.is_zero(vals.at2(x, e)));
            normalized
                && g.elements().all(|x| {
                    g.elements().all(|y| {
                        let xy = g.mul(x, y);
                        g.elements().all(|z| {
                            let lhs = a.add(&m.act(x, vals.at2(y, z)), vals.at2(x, g.mul(y, z)));
                            let rhs = a.add(vals.at2(xy, z), vals.at2(x, y));
                            lhs == rhs
                        })
                    })
                })
        }
    }
}

pub fn cohomology(m: &GModule, degree: usize) -> Result<CohomologyGroup> {
    cohomology_capped(m, degree, DEFAULT_COCHAIN_CAP)
}

pub fn cohomology_capped(m: &GModule, degree: usize, cap: usize) -> Result<CohomologyGroup> {
    if degree > 2 {
        return Err(Error::Precondition(format!(
            "direct computation covers degrees 0, 1 and 2, not {degree}"
        )));
    }
    let n = m.group().order();
    let r = m.coeff().rank();
    let size = n.saturating_pow(degree as u32).saturating_mul(r.max(1));
    if size > cap {
        return Err(Error::SizeCap {
            what: "cochain space",
            size,
            cap,
        });
    }
    let a = m.coeff();
    let layout = Layout::new(m, degree);
    let moduli = layout.moduli(a);
    let width = moduli.len();

    let (_, d0) = extend(m, &layout, &vec![0; width]);
    let mut rows = vec![vec![0i64; width]; d0.len()];
    let mut unit = vec![0i64; width];
    for c in 0..width {
        unit[c] = 1;
        let (_, d) = extend(m, &layout, &unit);
        unit[c] = 0;
        for (row, v) in rows.iter_mut().zip(d) {
            row[c] = v;
        }
    }
    let defect_moduli: Vec<u64> = (0..d0.len()).map(|i| a.factors()[i % r.max(1)]).collect();
    let z = kernel_generators(&moduli, &defect_moduli, &rows);
    let b = coboundary_generators(m, &layout);
    let sq = Subquotient::new(&moduli, &z, &b);
    let z_order = Subquotient::new(&moduli, &z, &[]).group().order();
    let b_order = Subquotient::new(&moduli, &b, &[]).group().order();
    Ok(CohomologyGroup {
        module: m.clone(),
        layout,
        sq,
        z_order,
        b_order,
    })
}

fn coboundary_generators(m: &GModule, layout: &Layout) -> Vec<Element> {
    let g = m.group();
    let a = m.coeff();
    let e = g.identity();
    match layout.degree {
        0 => Vec::new(),
        1 => a
            .basis()
            .iter()
            .map(|b| {
                layout
                    .slots
                    .iter()
                    .flat_map(|&(_, k)| a.sub(&m.act(layout.gens[k], b), b))
                    .collect()
            })
            .collect(),
        _ => {
            let mut out = Vec::new();
            for x in g.elements().filter(|&x| x != e) {
                for b in a.basis() {
                    let c = |y: usize| if y == x { b.clone() } else { a.zero() };
                    let v: Element = layout
                        .slots
                        .iter()
                        .flat_map(|&(gg, k)| {
                            let s = layout.gens[k];
                            let t = a.sub(&m.act(gg, &c(s)), &c(g.mul(gg, s)));
                            a.add(&t, &c(gg))
                        })
                        .collect();
                    out.push(v);
                }
            }
            out
        }
    }
}

/// Map `H^i(G, A) → H^i(K, A')` induced by `φ: K → G` and a compatible
/// `ψ: A → A'`, pulling cocycles back along `φ` and pushing values along `ψ`.
pub fn induced_map(
    src: &CohomologyGroup,
    tgt: &CohomologyGroup,
    phi: &GroupHom,
    psi: &AbHom,
) -> Result<AbHom> {
    if src.degree() != tgt.degree() {
        return Err(Error::Precondition("induced map between different degrees".into()));
    }
    if !src.module.is_compatible(&tgt.module, phi, psi) {
        return Err(Error::InvalidHom(
            "coefficient map is not compatible with the group map".into(),
        ));
    }
    let k = tgt.module.group();
    let nk = k.order();
    let images: Vec<Element> = src
        .representative_values()
        .iter()
        .map(|vals| {
            let values = match vals.degree {
                0 => vec![psi.apply(&vals.values[0])],
                1 => k.elements().map(|x| psi.apply(vals.at1(phi.apply(x)))).collect(),
                _ => k
                    .elements()
                    .flat_map(|x| k.elements().map(move |y| (x, y)))
                    .map(|(x, y)| psi.apply(vals.at2(phi.apply(x), phi.apply(y))))
                    .collect(),
            };
            let pulled = CochainValues {
                degree: vals.degree,
                order: nk,
                values,
            };
            tgt.class_of_values(&pulled).ok_or_else(|| {
                Error::Precondition("pulled-back cochain is not a normalized cocycle".into())
            })
        })
        .collect::<Result<_>>()?;
    AbHom::from_images(src.value().clone(), tgt.value().clone(), &images)
}

/// `G/N` acting on `A^N`, with the projection and the inclusion `A^N ⊆ A`.
pub(crate) fn quotient_module(m: &GModule, n: &Subgroup) -> Result<(GModule, GroupHom, AbHom)> {
    let g = m.group();
    let (q, proj) = quotient_group(g, n)?;
    let fixed = fixed_submodule(m, n)?;
    let incl = fixed.inclusion();
    let sub = fixed.group().clone();
    let qgens = q.generating_set();
    let mut mats = Vec::with_capacity(qgens.len());
    for &qs in &qgens {
        let lift = g
            .elements()
            .find(|&x| proj.apply(x) == qs)
            .expect("projection is surjective");
        let cols: Vec<Element> = sub
            .basis()
            .iter()
            .map(|b| {
                fixed
                    .coords(&m.act(lift, &incl.apply(b)))
                    .expect("A^N is stable under G")
            })
            .collect();
        mats.push(
            (0..sub.rank())
                .map(|i| cols.iter().map(|c| c[i]).collect())
                .collect(),
        );
    }
    let qm = GModule::from_generators(&q, &sub, &qgens, &mats)?;
    Ok((qm, proj, incl))
}

/// Inflation `H^i(G/N, A^N) → H^i(G, A)` into an already computed target.
pub fn inflation(target: &CohomologyGroup, n: &Subgroup) -> Result<AbHom> {
    let (qm, proj, incl) = quotient_module(&target.module, n)?;
    let src = cohomology(&qm, target.degree())?;
    induced_map(&src, target, &proj, &incl)
}

/// Restriction `H^i(G, A) → H^i(H, A)`, together with the target group.
pub fn restriction(source: &CohomologyGroup, h: &Subgroup) -> Result<(CohomologyGroup, AbHom)> {
    let (hm, emb) = source.module.restrict(h);
    let tgt = cohomology(&hm, source.degree())?;
    let id = AbHom::identity(source.module.coeff());
    let map = induced_map(source, &tgt, &emb, &id)?;
    Ok((tgt, map))
}

/// The image of inflation from `G/Ũ`, where `Ũ` is the normal closure of `U`.
pub fn h_nr(target: &CohomologyGroup, u: &Subgroup) -> Result<AbSubgroup> {
    let g = target.module.group();
    let closure = crate::grp::normal_closure(g, u)?;
    Ok(inflation(target, &closure)?.image())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ab::hom_group;
    use crate::grp::{abelianization, FiniteGroup};

    fn triv(g: &FiniteGroup, n: u64) -> GModule {
        GModule::trivial(g, &FiniteAbelianGroup::cyclic(n))
    }

    fn check_reps(h: &CohomologyGroup) {
        for v in h.representative_values() {
            assert!(h.is_cocycle(&v));
        }
        assert_eq!(h.z_order(), h.b_order() * h.value().order());
    }

    #[test]
    fn spec_examples() {
        let c3 = FiniteGroup::cyclic(3);
        let h = cohomology(&triv(&c3, 3), 1).unwrap();
        assert_eq!(h.value().factors(), &[3]);
        check_reps(&h);

        let c2 = FiniteGroup::cyclic(2);
        let neg = super::super::tests::negation(&c2, 1, 3);
        let h = cohomology(&neg, 1).unwrap();
        assert!(h.value().is_trivial());
        assert_eq!(h.z_order(), 3);
        assert_eq!(h.b_order(), 3);

        let h2 = cohomology(&triv(&c3, 3), 2).unwrap();
        assert_eq!(h2.value().factors(), &[3]);
        check_reps(&h2);
    }

    #[test]
    fn second_cohomology_values() {
        // H²(C_n, Z/m) = Z/gcd(n, m) for trivial action
        for (n, m, want) in [(2, 2, 2u128), (4, 2, 2), (4, 4, 4), (6, 4, 2), (3, 2, 1), (2, 3, 1)] {
            let h = cohomology(&triv(&FiniteGroup::cyclic(n), m), 2).unwrap();
            assert_eq!(h.value().order(), want, "C{n} with Z/{m}");
            check_reps(&h);
        }
        // H²(C2×C2, Z/2) = (Z/2)³
        let v4 = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)).unwrap();
        let h = cohomology(&triv(&v4, 2), 2).unwrap();
        assert_eq!(h.value().factors(), &[2, 2, 2]);
        check_reps(&h);
        // H²(C2, Z/3 by negation) = 0, H²(C2, Z/4 by negation) = Z/2
        let c2 = FiniteGroup::cyclic(2);
        let h = cohomology(&super::super::tests::negation(&c2, 1, 3), 2).unwrap();
        assert!(h.value().is_trivial());
        let h = cohomology(&super::super::tests::negation(&c2, 1, 4), 2).unwrap();
        assert_eq!(h.value().factors(), &[2]);
        check_reps(&h);
    }

    #[test]
    fn first_cohomology_is_hom_for_trivial_coefficients() {
        for g in [FiniteGroup::heisenberg(3), FiniteGroup::dihedral(4), FiniteGroup::cyclic(6)] {
            for p in [2u64, 3] {
                let h = cohomology(&triv(&g, p), 1).unwrap();
                let want = hom_group(&abelianization(&g).group, &FiniteAbelianGroup::cyclic(p));
                assert_eq!(h.value(), &want);
            }
        }
    }

    #[test]
    fn inflation_restriction_examples() {
        let c4 = FiniteGroup::cyclic(4);
        let h = cohomology(&triv(&c4, 2), 1).unwrap();
        let n = Subgroup::generated(&c4, &[2]);
        let inf = inflation(&h, &n).unwrap();
        assert!(inf.is_injective());
        assert_eq!(inf.image().order(), 2);
        assert!(inflation(&h, &Subgroup::whole(&c4)).unwrap().is_zero());
        assert!(inflation(&h, &Subgroup::trivial(&c4)).unwrap().is_isomorphism());

        let (tgt, res) = restriction(&h, &n).unwrap();
        assert_eq!(tgt.value().order(), 2);
        // Hom(C4, Z/2) → Hom(C2, Z/2) is zero: the character kills 2
        assert!(res.is_zero());
        let (_, res_all) = restriction(&h, &Subgroup::whole(&c4)).unwrap();
        assert!(res_all.is_isomorphism());
        let (_, res_triv) = restriction(&h, &Subgroup::trivial(&c4)).unwrap();
        assert!(res_triv.is_zero());

        let c2 = FiniteGroup::cyclic(2);
        let hc2 = cohomology(&triv(&c2, 2), 1).unwrap();
        let (t, r) = restriction(&hc2, &Subgroup::whole(&c2)).unwrap();
        assert_eq!(t.value().order(), 2);
        assert!(r.is_surjective());
    }

    #[test]
    fn unramified_parts() {
        let v4 = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)).unwrap();
        let h = cohomology(&triv(&v4, 2), 1).unwrap();
        // first factor: elements (1, 0) = index 2
        let u = Subgroup::generated(&v4, &[2]);
        assert_eq!(h_nr(&h, &u).unwrap().order(), 2);
        assert_eq!(h_nr(&h, &Subgroup::whole(&v4)).unwrap().order(), 1);
        assert_eq!(h_nr(&h, &Subgroup::trivial(&v4)).unwrap().order(), 4);
    }

    #[test]
    fn cap_is_enforced() {
        let g = FiniteGroup::cyclic(200);
        assert!(matches!(
            cohomology(&triv(&g, 2), 2),
            Err(Error::SizeCap { .. })
        ));
    }
}
