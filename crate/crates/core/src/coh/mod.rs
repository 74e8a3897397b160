//! Cohomology of finite groups with coefficients in finite modules.
//!
//! Cochains are parametrized by their values on a generating set: a crossed
//! homomorphism is fixed by `f(s)`, a normalized 2-cocycle by `f(g, s)`. The
//! remaining values follow from the cocycle identity along a BFS tree of the
//! Cayley graph, and the non-tree edges become linear constraints solved over
//! `Z/p^k`.

mod cochains;
mod shift;

use std::sync::Arc;

use crate::ab::{kernel_generators, AbHom, AbSubgroup, Element, FiniteAbelianGroup};
use crate::error::{Error, Result};
use crate::grp::{FiniteGroup, GroupHom, Subgroup};

pub use cochains::{
    cohomology, cohomology_capped, h_nr, induced_map, inflation, restriction, CochainValues,
    CohomologyGroup, DEFAULT_COCHAIN_CAP,
};
pub use shift::{
    coinduced_module, dimension_shift_check, dimension_shift_check_capped, high_degree_cohomology, Coinduced, DimensionShift,
};

/// Finite abelian group with an action of a finite group by automorphisms.
#[derive(Clone, Debug)]
pub struct GModule {
    group: FiniteGroup,
    coeff: FiniteAbelianGroup,
    action: Arc<Vec<AbHom>>,
}

impl PartialEq for GModule {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.coeff == other.coeff && self.action == other.action
    }
}

impl GModule {
    pub fn trivial(group: &FiniteGroup, coeff: &FiniteAbelianGroup) -> Self {
        let id = AbHom::identity(coeff);
        GModule {
            group: group.clone(),
            coeff: coeff.clone(),
            action: Arc::new(vec![id; group.order()]),
        }
    }

    /// Extends an action given on generators, checking that it is a
    /// homomorphism into `Aut(coeff)`.
    pub fn from_generators(
        group: &FiniteGroup,
        coeff: &FiniteAbelianGroup,
        gens: &[usize],
        matrices: &[Vec<Vec<i64>>],
    ) -> Result<Self> {
        if gens.len() != matrices.len() {
            return Err(Error::InvalidModule("generator and matrix counts differ".into()));
        }
        let mut gen_maps = Vec::with_capacity(gens.len());
        for (&s, m) in gens.iter().zip(matrices) {
            if s >= group.order() {
                return Err(Error::InvalidModule(format!("element {s} out of range")));
            }
            let h = AbHom::new(coeff.clone(), coeff.clone(), m.clone())
                .map_err(|e| Error::InvalidModule(format!("matrix of element {s}: {e}")))?;
            if !h.is_isomorphism() {
                return Err(Error::InvalidModule(format!(
                    "matrix of element {s} is not an automorphism"
                )));
            }
            gen_maps.push(h);
        }
        let mut action: Vec<Option<AbHom>> = vec![None; group.order()];
        action[group.identity()] = Some(AbHom::identity(coeff));
        for x in group.bfs_order(gens) {
            let ax = action[x].clone().expect("BFS order visits reached elements");
            for (k, &s) in gens.iter().enumerate() {
                let y = group.mul(x, s);
                let cand = ax.compose(&gen_maps[k])?;
                match &action[y] {
                    None => action[y] = Some(cand),
                    Some(existing) if *existing != cand => {
                        return Err(Error::InvalidModule(format!(
                            "action is not a homomorphism: element {x} times {s}"
                        )));
                    }
                    Some(_) => {}
                }
            }
        }
        let action: Option<Vec<AbHom>> = action.into_iter().collect();
        let action = action.ok_or_else(|| {
            Error::InvalidModule("elements with given matrices do not generate the group".into())
        })?;
        Ok(GModule {
            group: group.clone(),
            coeff: coeff.clone(),
            action: Arc::new(action),
        })
    }

    /// Action listed per element. An empty list is the trivial action; otherwise
    /// the listed elements must generate the group.
    pub fn from_element_action(
        group: &FiniteGroup,
        coeff: &FiniteAbelianGroup,
        entries: &[(usize, Vec<Vec<i64>>)],
    ) -> Result<Self> {
        if entries.is_empty() {
            return Ok(Self::trivial(group, coeff));
        }
        let gens: Vec<usize> = entries.iter().map(|(g, _)| *g).collect();
        let mats: Vec<Vec<Vec<i64>>> = entries.iter().map(|(_, m)| m.clone()).collect();
        Self::from_generators(group, coeff, &gens, &mats)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn coeff(&self) -> &FiniteAbelianGroup {
        &self.coeff
    }

    pub fn action(&self, g: usize) -> &AbHom {
        &self.action[g]
    }

    pub fn act(&self, g: usize, a: &[i64]) -> Element {
        self.action[g].apply(a)
    }

    pub fn is_trivial_action(&self) -> bool {
        let id = AbHom::identity(&self.coeff);
        self.action.iter().all(|h| *h == id)
    }

    /// Module over `K` through `φ: K → G`.
    pub fn pullback(&self, phi: &GroupHom) -> Result<GModule> {
        if phi.target() != &self.group {
            return Err(Error::InvalidHom("pullback along a map into another group".into()));
        }
        Ok(GModule {
            group: phi.source().clone(),
            coeff: self.coeff.clone(),
            action: Arc::new(
                phi.images()
                    .iter()
                    .map(|&g| self.action[g].clone())
                    .collect(),
            ),
        })
    }

    /// Restriction to a subgroup, as a module over the subgroup's own table.
    pub fn restrict(&self, h: &Subgroup) -> (GModule, GroupHom) {
        let (_, emb) = h.as_group(&self.group);
        let m = self.pullback(&emb).expect("embedding targets the module group");
        (m, emb)
    }

    /// Whether `ψ: self.coeff → other.coeff` is compatible with `φ: K → G`
    /// where `other` is a module over `K`: `ψ(φ(k)·a) = k·ψ(a)`.
    pub fn is_compatible(&self, other: &GModule, phi: &GroupHom, psi: &AbHom) -> bool {
        if phi.source() != &other.group || phi.target() != &self.group {
            return false;
        }
        if psi.source() != &self.coeff || psi.target() != &other.coeff {
            return false;
        }
        other.group.elements().all(|k| {
            self.coeff.basis().iter().all(|a| {
                psi.apply(&self.act(phi.apply(k), a)) == other.act(k, &psi.apply(a))
            })
        })
    }
}

/// `A^H` with its inclusion into `A`.
pub fn fixed_submodule(m: &GModule, h: &Subgroup) -> Result<AbSubgroup> {
    if h.parent_order() != m.group.order() {
        return Err(Error::NotSubgroup("subgroup of a different group".into()));
    }
    let gens = h.generators(&m.group);
    let r = m.coeff.rank();
    let factors = m.coeff.factors();
    let mut rows = Vec::with_capacity(gens.len() * r);
    let mut tgt = Vec::with_capacity(gens.len() * r);
    for &g in &gens {
        let mat = m.action(g).matrix();
        for i in 0..r {
            let row: Vec<i64> = (0..r)
                .map(|j| mat[i][j] - i64::from(i == j))
                .collect();
            rows.push(row);
            tgt.push(factors[i]);
        }
    }
    let kernel = kernel_generators(factors, &tgt, &rows);
    Ok(AbSubgroup::new(&m.coeff, kernel))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn negation(g: &FiniteGroup, gen: usize, n: u64) -> GModule {
        let a = FiniteAbelianGroup::cyclic(n);
        GModule::from_generators(g, &a, &[gen], &[vec![vec![-1]]]).unwrap()
    }

    #[test]
    fn fixed_points() {
        let c2 = FiniteGroup::cyclic(2);
        let m = negation(&c2, 1, 3);
        assert!(fixed_submodule(&m, &Subgroup::whole(&c2)).unwrap().group().is_trivial());
        assert_eq!(fixed_submodule(&m, &Subgroup::trivial(&c2)).unwrap().order(), 3);
        let t = GModule::trivial(&c2, &FiniteAbelianGroup::cyclic(4));
        assert_eq!(fixed_submodule(&t, &Subgroup::whole(&c2)).unwrap().order(), 4);
        let m4 = negation(&c2, 1, 4);
        let fixed = fixed_submodule(&m4, &Subgroup::whole(&c2)).unwrap();
        assert_eq!(fixed.order(), 2);
        assert!(fixed.contains(&[2]));
    }

    #[test]
    fn action_must_be_a_homomorphism() {
        let c3 = FiniteGroup::cyclic(3);
        let a = FiniteAbelianGroup::cyclic(3);
        // negation has order 2, not compatible with a generator of order 3
        assert!(GModule::from_generators(&c3, &a, &[1], &[vec![vec![-1]]]).is_err());
        // not an automorphism
        assert!(GModule::from_generators(&c3, &a, &[1], &[vec![vec![0]]]).is_err());
        // does not generate
        let c4 = FiniteGroup::cyclic(4);
        let b = FiniteAbelianGroup::cyclic(5);
        assert!(GModule::from_generators(&c4, &b, &[2], &[vec![vec![-1]]]).is_err());
        assert!(GModule::from_generators(&c4, &b, &[1], &[vec![vec![2]]]).is_ok());
    }
}
