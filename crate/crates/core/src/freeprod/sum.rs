use crate::ab::{Element, FiniteAbelianGroup, Subquotient};

/// `⊕ A_i` in invariant-factor form, with block coordinates.
#[derive(Clone, Debug)]
pub(crate) struct BlockSum {
    parts: Vec<FiniteAbelianGroup>,
    offsets: Vec<usize>,
    sq: Subquotient,
}

impl BlockSum {
    pub fn new(parts: Vec<FiniteAbelianGroup>) -> Self {
        let mut offsets = Vec::with_capacity(parts.len());
        let mut moduli = Vec::new();
        for p in &parts {
            offsets.push(moduli.len());
            moduli.extend_from_slice(p.factors());
        }
        let sq = Subquotient::whole(&moduli);
        BlockSum { parts, offsets, sq }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        self.sq.group()
    }

    pub fn part(&self, i: usize) -> &FiniteAbelianGroup {
        &self.parts[i]
    }

    pub fn from_blocks(&self, blocks: &[Element]) -> Element {
        let flat: Element = blocks.iter().flatten().copied().collect();
        self.sq.coords(&flat).expect("whole ambient group")
    }

    /// Element with `x` in block `i` and zero elsewhere.
    #[cfg(test)]
    pub fn embed(&self, i: usize, x: &[i64]) -> Element {
        let blocks: Vec<Element> = self
            .parts
            .iter()
            .enumerate()
            .map(|(j, p)| if j == i { x.to_vec() } else { p.zero() })
            .collect();
        self.from_blocks(&blocks)
    }

    pub fn blocks(&self, coords: &[i64]) -> Vec<Element> {
        let flat = self.sq.lift(coords);
        self.parts
            .iter()
            .zip(&self.offsets)
            .map(|(p, &o)| flat[o..o + p.rank()].to_vec())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_roundtrip() {
        let s = BlockSum::new(vec![
            FiniteAbelianGroup::cyclic(2),
            FiniteAbelianGroup::trivial(),
            FiniteAbelianGroup::cyclic(3),
        ]);
        assert_eq!(s.group().factors(), &[6]);
        let x = s.from_blocks(&[vec![1], vec![], vec![2]]);
        assert_eq!(s.blocks(&x), vec![vec![1], vec![], vec![2]]);
        assert_eq!(s.blocks(&s.embed(2, &[1])), vec![vec![0], vec![], vec![1]]);
    }
}
