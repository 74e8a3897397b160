//! JSON formats for families, modules, towers and open sets.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::ab::FiniteAbelianGroup;
use crate::coh::GModule;
use crate::error::{Error, Result};
use crate::family::{
    FamilyMorphism, FamilySpec, Fiber, IndexImage, ModuleFamily, TailMap, Tower, STAR,
};
use crate::grp::{FiniteGroup, GroupHom, Subgroup};
use crate::topo::OpenSetSpec;

/// A finite group, by name or by explicit data, tagged by `kind`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupJson {
    Cyclic { n: usize },
    Dihedral { n: usize },
    Heisenberg { p: usize },
    Perm {
        degree: usize,
        generators: Vec<Vec<usize>>,
    },
    Table { table: Vec<Vec<usize>> },
    Product { factors: Vec<GroupJson> },
    /// `Z/d_1 × … × Z/d_k` with mixed-radix element indices.
    Ab { orders: Vec<usize> },
}

impl GroupJson {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupJson::Cyclic { n } if *n >= 1 => Ok(FiniteGroup::cyclic(*n)),
            GroupJson::Dihedral { n } if *n >= 1 => Ok(FiniteGroup::dihedral(*n)),
            GroupJson::Heisenberg { p } if *p >= 2 => Ok(FiniteGroup::heisenberg(*p)),
            GroupJson::Perm { degree, generators } => FiniteGroup::from_permutations(*degree, generators),
            GroupJson::Table { table } => FiniteGroup::from_table(table.clone(), "table"),
            GroupJson::Product { factors: parts } => {
                let mut g = FiniteGroup::trivial();
                for p in parts {
                    g = FiniteGroup::direct_product(&g, &p.build()?)?;
                }
                Ok(g)
            }
            GroupJson::Ab { orders } if orders.iter().all(|&d| d >= 1) => {
                let mut g = FiniteGroup::trivial();
                for &d in orders {
                    g = FiniteGroup::direct_product(&g, &FiniteGroup::cyclic(d))?;
                }
                Ok(g)
            }
            other => Err(Error::Parse(format!("invalid group description {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberJson {
    pub group: GroupJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgroup_generators: Option<Vec<usize>>,
    /// Explicit element list; must already be closed under multiplication.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgroup_elements: Option<Vec<usize>>,
}

impl FiberJson {
    pub fn build(&self) -> Result<Fiber> {
        let g = self.group.build()?;
        match (&self.subgroup_generators, &self.subgroup_elements) {
            (Some(_), Some(_)) => Err(Error::Parse(
                "give either subgroup_generators or subgroup_elements".into(),
            )),
            (Some(gens), None) => Fiber::generated(g, gens),
            (None, Some(els)) => {
                let sub = Subgroup::from_elements(&g, els)?;
                Fiber::new(g, sub)
            }
            (None, None) => {
                let sub = Subgroup::trivial(&g);
                Fiber::new(g, sub)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecJson {
    pub prime_set: Vec<u64>,
    #[serde(default)]
    pub exceptional: BTreeMap<String, FiberJson>,
    #[serde(default)]
    pub tail: Option<FiberJson>,
}

impl SpecJson {
    pub fn build(&self) -> Result<FamilySpec> {
        let exceptional = self
            .exceptional
            .iter()
            .map(|(k, f)| Ok((k.clone(), f.build().map_err(|e| Error::InvalidFamily(format!("fiber {k}: {e}")))?)))
            .collect::<Result<_>>()?;
        let tail = self
            .tail
            .as_ref()
            .map(|f| f.build().map_err(|e| Error::InvalidFamily(format!("tail: {e}"))))
            .transpose()?;
        FamilySpec::new(exceptional, tail, self.prime_set.iter().copied().collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionEntry {
    pub element: usize,
    pub matrix: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionJson {
    #[serde(default)]
    pub action: Vec<ActionEntry>,
}

/// Coefficients and per-fiber actions; missing fibers act trivially.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleJson {
    pub coeff: Vec<u64>,
    #[serde(default)]
    pub exceptional: BTreeMap<String, ActionJson>,
    #[serde(default)]
    pub tail: Option<ActionJson>,
}

fn build_action(g: &FiniteGroup, a: &FiniteAbelianGroup, act: &ActionJson) -> Result<GModule> {
    let entries: Vec<(usize, Vec<Vec<i64>>)> = act
        .action
        .iter()
        .map(|e| (e.element, e.matrix.clone()))
        .collect();
    GModule::from_element_action(g, a, &entries)
}

impl ModuleJson {
    pub fn build(&self, spec: &FamilySpec) -> Result<ModuleFamily> {
        let coeff = FiniteAbelianGroup::from_cyclic_orders(&self.coeff);
        let mut exceptional = BTreeMap::new();
        for (name, act) in &self.exceptional {
            let fiber = spec
                .exceptional()
                .get(name)
                .ok_or_else(|| Error::InvalidModule(format!("action for unknown index {name}")))?;
            let m = build_action(&fiber.group, &coeff, act)
                .map_err(|e| Error::InvalidModule(format!("fiber {name}: {e}")))?;
            exceptional.insert(name.clone(), m);
        }
        let tail = match (&self.tail, spec.tail()) {
            (Some(act), Some(f)) => Some(build_action(&f.group, &coeff, act)?),
            (Some(_), None) => return Err(Error::InvalidModule("tail action without a tail".into())),
            (None, _) => None,
        };
        ModuleFamily::new(spec, coeff, exceptional, tail)
    }

    /// Invariant factors are normalized, so `[2, 3]` describes `Z/6`.
    pub fn trivial(coeff: Vec<u64>) -> Self {
        ModuleJson {
            coeff,
            exceptional: BTreeMap::new(),
            tail: None,
        }
    }
}

/// Image of one source index: a target index (or `"*"`) and the fiber map
/// as the list of images of all elements.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndexMapJson {
    pub index: String,
    #[serde(default)]
    pub images: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TailMapJson {
    /// `"*"`: every tail index goes to the star.
    Star(String),
    Tail { images: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismJson {
    #[serde(default)]
    pub exceptional: BTreeMap<String, IndexMapJson>,
    #[serde(default)]
    pub tail: Option<TailMapJson>,
}

impl MorphismJson {
    pub fn build(&self, source: &FamilySpec, target: &FamilySpec) -> Result<FamilyMorphism> {
        let mut maps = BTreeMap::new();
        for (name, m) in &self.exceptional {
            let sf = source
                .exceptional()
                .get(name)
                .ok_or_else(|| Error::InvalidHom(format!("unknown source index {name}")))?;
            let entry = if m.index == STAR {
                if m.images.is_some() {
                    return Err(Error::InvalidHom(format!("index {name} goes to * but lists images")));
                }
                (IndexImage::Star, None)
            } else {
                let tf = target
                    .fiber(&m.index)
                    .ok_or_else(|| Error::InvalidHom(format!("unknown target index {}", m.index)))?;
                let images = m
                    .images
                    .clone()
                    .ok_or_else(|| Error::InvalidHom(format!("index {name} lacks fiber images")))?;
                (
                    IndexImage::Index(m.index.clone()),
                    Some(GroupHom::new(&sf.group, &tf.group, images)?),
                )
            };
            maps.insert(name.clone(), entry);
        }
        let tail = match (&self.tail, source.tail()) {
            (None, _) => None,
            (Some(TailMapJson::Star(s)), Some(_)) if s == STAR => Some(TailMap::Star),
            (Some(TailMapJson::Star(s)), _) => {
                return Err(Error::InvalidHom(format!("unknown tail image {s:?}")))
            }
            (Some(TailMapJson::Tail { images }), Some(sf)) => {
                let tf = target
                    .tail()
                    .ok_or_else(|| Error::InvalidHom("target has no tail".into()))?;
                Some(TailMap::Tail(GroupHom::new(&sf.group, &tf.group, images.clone())?))
            }
            (Some(_), None) => return Err(Error::InvalidHom("tail map without a source tail".into())),
        };
        FamilyMorphism::new(source.clone(), target.clone(), maps, tail)
    }
}

/// `transitions[i]` maps `levels[i + 1]` to `levels[i]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerJson {
    pub levels: Vec<SpecJson>,
    pub transitions: Vec<MorphismJson>,
}

impl TowerJson {
    pub fn build(&self) -> Result<Tower> {
        let levels = self
            .levels
            .iter()
            .map(SpecJson::build)
            .collect::<Result<Vec<_>>>()?;
        if self.transitions.len() + 1 != levels.len() {
            return Err(Error::Parse(
                "a tower needs one transition per adjacent pair of levels".into(),
            ));
        }
        let transitions = self
            .transitions
            .iter()
            .enumerate()
            .map(|(i, m)| m.build(&levels[i + 1], &levels[i]))
            .collect::<Result<Vec<_>>>()?;
        Tower::new(levels, transitions)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpenSetJson {
    #[serde(default)]
    pub exceptional: BTreeMap<String, BTreeSet<usize>>,
    #[serde(default)]
    pub tail_default: BTreeSet<usize>,
    /// Keyed by tail position, `"1"` for `tau1`.
    #[serde(default)]
    pub tail_exceptions: BTreeMap<usize, BTreeSet<usize>>,
    #[serde(default)]
    pub contains_star: bool,
}

impl OpenSetJson {
    pub fn build(&self, spec: &FamilySpec) -> Result<OpenSetSpec> {
        let v = OpenSetSpec {
            exceptional_parts: self.exceptional.clone(),
            tail_default: self.tail_default.clone(),
            tail_exceptions: self.tail_exceptions.clone(),
            contains_star: self.contains_star,
        };
        v.validate(spec)?;
        Ok(v)
    }
}

/// A morphism out of the main family, into `target`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetedMorphismJson {
    pub target: SpecJson,
    pub map: MorphismJson,
}

/// Input of the topology checks.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopoJson {
    #[serde(default)]
    pub sets: Vec<OpenSetJson>,
    #[serde(default)]
    pub morphisms: Vec<TargetedMorphismJson>,
}

pub fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}
