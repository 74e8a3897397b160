//! `H¹` of a finite free product by enumeration.
//!
//! A crossed homomorphism on `*_t G_t` is the same as a crossed homomorphism
//! on every factor, chosen independently. Each factor's crossed homomorphisms
//! are found by trying every assignment of values to a generating set.

use std::collections::{HashSet, VecDeque};

use crate::ab::{Element, FiniteAbelianGroup, Subquotient};
use crate::coh::{CochainValues, GModule};
use crate::error::{Error, Result};
use crate::family::{ModuleFamily, TruncatedFamily};

/// Default bound on the number of candidate assignments tried per factor.
pub const DEFAULT_ENUMERATION_CAP: usize = 200_000;

#[derive(Clone, Debug)]
struct OracleFactor {
    name: String,
    module: GModule,
    gens: Vec<usize>,
    offset: usize,
    z_order: u128,
}

/// `H¹(*_t G_t, A) = ∏_t Z¹(G_t, A) / {(g ↦ g·a − a)_t}`.
///
/// Cocycles are stored by their values on each factor's generators, factor
/// after factor.
#[derive(Clone, Debug)]
pub struct OracleH1 {
    coeff: FiniteAbelianGroup,
    factors: Vec<OracleFactor>,
    moduli: Vec<u64>,
    sq: Subquotient,
    z_order: u128,
    fixed_order: u128,
}

/// Values of a crossed homomorphism on every element, from its values on `gens`.
/// `None` if the assignment does not extend.
fn extend(m: &GModule, gens: &[usize], on_gens: &[Element]) -> Option<Vec<Element>> {
    let g = m.group();
    let a = m.coeff();
    let mut f: Vec<Option<Element>> = vec![None; g.order()];
    f[g.identity()] = Some(a.zero());
    let mut queue = VecDeque::from([g.identity()]);
    while let Some(x) = queue.pop_front() {
        let fx = f[x].clone().expect("queued elements have values");
        for (s, fs) in gens.iter().zip(on_gens) {
            let y = g.mul(x, *s);
            if f[y].is_none() {
                f[y] = Some(a.add(&fx, &m.act(x, fs)));
                queue.push_back(y);
            }
        }
    }
    let f: Vec<Element> = f.into_iter().collect::<Option<_>>()?;
    let ok = g.elements().all(|x| {
        g.elements()
            .all(|y| f[g.mul(x, y)] == a.add(&f[x], &m.act(x, &f[y])))
    });
    ok.then_some(f)
}

fn lcm(a: u64, b: u64) -> u64 {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

/// Generators of the subgroup formed by `elements`, chosen greedily.
fn greedy_generators(a: &FiniteAbelianGroup, k: usize, elements: &[Vec<Element>]) -> Vec<Vec<Element>> {
    let zero = vec![a.zero(); k];
    let mut span: HashSet<Vec<Element>> = HashSet::from([zero]);
    let mut gens = Vec::new();
    for z in elements {
        if span.contains(z) {
            continue;
        }
        gens.push(z.clone());
        let old: Vec<Vec<Element>> = span.iter().cloned().collect();
        let order = z.iter().map(|x| a.element_order(x)).fold(1, lcm);
        for s in old {
            let mut cur = s;
            for _ in 1..order {
                cur = cur.iter().zip(z).map(|(x, y)| a.add(x, y)).collect();
                span.insert(cur.clone());
            }
        }
    }
    gens
}

fn crossed_homomorphisms(m: &GModule, gens: &[usize], cap: usize) -> Result<Vec<Vec<Element>>> {
    let a = m.coeff();
    let elems = a.elements();
    let size = elems.len().checked_pow(gens.len() as u32).unwrap_or(usize::MAX);
    if size > cap {
        return Err(Error::SizeCap {
            what: "crossed homomorphism candidates",
            size,
            cap,
        });
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; gens.len()];
    loop {
        let cand: Vec<Element> = idx.iter().map(|&i| elems[i].clone()).collect();
        if extend(m, gens, &cand).is_some() {
            out.push(cand);
        }
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Ok(out);
            }
            idx[pos] += 1;
            if idx[pos] < elems.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

impl OracleH1 {
    /// Oracle for the free product of the groups of `modules`, all acting on
    /// one coefficient group.
    pub fn from_modules(modules: &[(String, GModule)], cap: usize) -> Result<Self> {
        let coeff = match modules.first() {
            Some((_, m)) => m.coeff().clone(),
            None => FiniteAbelianGroup::trivial(),
        };
        if modules.iter().any(|(_, m)| m.coeff() != &coeff) {
            return Err(Error::InvalidModule("factors act on different groups".into()));
        }
        let r = coeff.rank();
        let mut factors = Vec::new();
        let mut moduli = Vec::new();
        let mut numerator = Vec::new();
        let mut z_order = 1u128;
        let mut total = 0usize;
        let mut per_factor = Vec::new();
        for (name, m) in modules {
            let gens = m.group().generating_set();
            let z = crossed_homomorphisms(m, &gens, cap)?;
            z_order *= z.len() as u128;
            let offset = total;
            total += gens.len() * r;
            for _ in &gens {
                moduli.extend_from_slice(coeff.factors());
            }
            per_factor.push(greedy_generators(&coeff, gens.len(), &z));
            factors.push(OracleFactor {
                name: name.clone(),
                module: m.clone(),
                gens,
                offset,
                z_order: z.len() as u128,
            });
        }
        for (f, gens) in factors.iter().zip(&per_factor) {
            for z in gens {
                let mut v = vec![0i64; total];
                for (j, val) in z.iter().enumerate() {
                    v[f.offset + j * r..f.offset + (j + 1) * r].copy_from_slice(val);
                }
                numerator.push(v);
            }
        }
        let principal = |a: &Element| -> Element {
            let mut v = vec![0i64; total];
            for f in &factors {
                for (j, &s) in f.gens.iter().enumerate() {
                    let d = coeff.sub(&f.module.act(s, a), a);
                    v[f.offset + j * r..f.offset + (j + 1) * r].copy_from_slice(&d);
                }
            }
            v
        };
        let denominator: Vec<Element> = coeff.basis().iter().map(principal).collect();
        let fixed_order = coeff
            .elements()
            .iter()
            .filter(|a| {
                factors
                    .iter()
                    .all(|f| f.gens.iter().all(|&s| f.module.act(s, a) == **a))
            })
            .count() as u128;
        let sq = Subquotient::new(&moduli, &numerator, &denominator);
        Ok(OracleH1 {
            coeff,
            factors,
            moduli,
            sq,
            z_order,
            fixed_order,
        })
    }

    pub fn value(&self) -> &FiniteAbelianGroup {
        self.sq.group()
    }

    pub fn coeff(&self) -> &FiniteAbelianGroup {
        &self.coeff
    }

    /// `|Z¹| = ∏_t |Z¹(G_t, A)|`, counted by enumeration.
    pub fn z_order(&self) -> u128 {
        self.z_order
    }

    /// `|B¹| = |A| / |A^G|`.
    pub fn b_order(&self) -> u128 {
        self.coeff.order() / self.fixed_order
    }

    /// `|A^G|`, counted by enumeration.
    pub fn fixed_order(&self) -> u128 {
        self.fixed_order
    }

    /// Whether `|H¹| · |B¹| = |Z¹|`.
    pub fn is_consistent(&self) -> bool {
        self.value().order() * self.b_order() == self.z_order
    }

    pub fn factor_names(&self) -> impl Iterator<Item = &str> {
        self.factors.iter().map(|f| f.name.as_str())
    }

    pub fn factor_order(&self, i: usize) -> u128 {
        self.factors[i].z_order
    }

    fn position(&self, name: &str) -> Option<usize> {
        self.factors.iter().position(|f| f.name == name)
    }

    /// Class of a cocycle given by its values on each factor's generators.
    pub fn class_of_generator_values(&self, per_factor: &[Vec<Element>]) -> Option<Element> {
        if per_factor.len() != self.factors.len() {
            return None;
        }
        let mut v = Vec::with_capacity(self.moduli.len());
        for (f, vals) in self.factors.iter().zip(per_factor) {
            if vals.len() != f.gens.len() || extend(&f.module, &f.gens, vals).is_none() {
                return None;
            }
            for x in vals {
                v.extend(self.coeff.reduce(x));
            }
        }
        self.sq.coords(&v)
    }

    /// Class of a cocycle given by its full value table on each factor.
    pub fn class_of_tables(&self, per_factor: &[CochainValues]) -> Option<Element> {
        let vals: Vec<Vec<Element>> = self
            .factors
            .iter()
            .zip(per_factor)
            .map(|(f, c)| f.gens.iter().map(|&s| c.at1(s).clone()).collect())
            .collect();
        let full_match = self.factors.iter().zip(per_factor).zip(&vals).all(|((f, c), v)| {
            c.degree == 1
                && extend(&f.module, &f.gens, v).map_or(false, |t| {
                    t.iter().enumerate().all(|(x, y)| *y == self.coeff.reduce(c.at1(x)))
                })
        });
        if !full_match {
            return None;
        }
        self.class_of_generator_values(&vals)
    }

    /// Values on generators of a representative of the class with these coordinates.
    pub fn representative(&self, coords: &[i64]) -> Vec<Vec<Element>> {
        let v = self.sq.lift(coords);
        let r = self.coeff.rank();
        self.factors
            .iter()
            .map(|f| {
                (0..f.gens.len())
                    .map(|j| v[f.offset + j * r..f.offset + (j + 1) * r].to_vec())
                    .collect()
            })
            .collect()
    }

    /// Full value table on factor `i` of a representative.
    pub fn representative_table(&self, coords: &[i64], i: usize) -> CochainValues {
        let f = &self.factors[i];
        let vals = &self.representative(coords)[i];
        CochainValues {
            degree: 1,
            order: f.module.group().order(),
            values: extend(&f.module, &f.gens, vals).expect("representatives are cocycles"),
        }
    }

    /// Generator values of `g ↦ g·a − a` on factor `name`, zero on the others.
    pub fn principal_on(&self, name: &str, a: &[i64]) -> Vec<Vec<Element>> {
        self.factors
            .iter()
            .map(|f| {
                f.gens
                    .iter()
                    .map(|&s| {
                        if f.name == name {
                            self.coeff.sub(&f.module.act(s, a), a)
                        } else {
                            self.coeff.zero()
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Rewrites per-factor generator values for another oracle, matching
    /// factors by name; factors missing here get the zero cocycle.
    pub fn transfer(&self, values: &[Vec<Element>], to: &OracleH1) -> Vec<Vec<Element>> {
        to.factors
            .iter()
            .map(|f| match self.position(&f.name) {
                Some(i) if self.factors[i].gens == f.gens => values[i].clone(),
                Some(i) => {
                    let table = extend(&self.factors[i].module, &self.factors[i].gens, &values[i])
                        .expect("cocycle values");
                    f.gens.iter().map(|&s| table[s].clone()).collect()
                }
                None => vec![self.coeff.zero(); f.gens.len()],
            })
            .collect()
    }
}

/// `H¹` of the free product over a truncation whose beyond-part is trivial.
pub fn oracle_h1(t: &TruncatedFamily, m: &ModuleFamily) -> Result<OracleH1> {
    oracle_h1_capped(t, m, DEFAULT_ENUMERATION_CAP)
}

pub fn oracle_h1_capped(t: &TruncatedFamily, m: &ModuleFamily, cap: usize) -> Result<OracleH1> {
    if !t.beyond_is_trivial() {
        return Err(Error::Precondition(
            "the tail quotient beyond the truncation is nontrivial".into(),
        ));
    }
    let finite = m.truncate(t)?;
    let modules: Vec<(String, GModule)> = finite
        .exceptional()
        .iter()
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    OracleH1::from_modules(&modules, cap)
}
