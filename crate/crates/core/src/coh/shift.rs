use crate::ab::{AbHom, Element, FiniteAbelianGroup, Subquotient};
use crate::error::{Error, Result};

use super::cochains::{cohomology_capped, CochainValues, DEFAULT_COCHAIN_CAP};
use super::GModule;

/// `Coind_G A = Maps(G, A)` with `(g·φ)(x) = φ(xg)`, the embedding
/// `a ↦ (x ↦ x·a)` and the cokernel `A'`.
///
/// Coordinates of `Coind_G A` are factor-major: entry `i·|G| + x` is the
/// `i`-th coordinate of `φ(x)`.
#[derive(Clone, Debug)]
pub struct Coinduced {
    pub coinduced: GModule,
    pub embedding: AbHom,
    pub cokernel: GModule,
    pub projection: AbHom,
    sq: Subquotient,
}

impl Coinduced {
    /// A lift of an element of `A'` to `Coind_G A`.
    pub fn lift(&self, coords: &[i64]) -> Element {
        self.sq.lift(coords)
    }
}

pub fn coinduced_module(m: &GModule) -> Result<Coinduced> {
    let g = m.group();
    let a = m.coeff();
    let n = g.order();
    let r = a.rank();
    let moduli: Vec<u64> = a
        .factors()
        .iter()
        .flat_map(|&d| std::iter::repeat(d).take(n))
        .collect();
    let big = FiniteAbelianGroup::new(moduli.clone())?;
    let gens = g.generating_set();
    let mats: Vec<Vec<Vec<i64>>> = gens
        .iter()
        .map(|&s| {
            let mut mat = vec![vec![0i64; n * r]; n * r];
            for i in 0..r {
                for x in 0..n {
                    mat[i * n + x][i * n + g.mul(x, s)] = 1;
                }
            }
            mat
        })
        .collect();
    let coinduced = GModule::from_generators(g, &big, &gens, &mats)?;

    let images: Vec<Element> = a
        .basis()
        .iter()
        .map(|b| {
            let mut v = vec![0i64; n * r];
            for x in 0..n {
                for (i, c) in m.act(x, b).into_iter().enumerate() {
                    v[i * n + x] = c;
                }
            }
            v
        })
        .collect();
    let embedding = AbHom::from_images(a.clone(), big.clone(), &images)?;

    let sq = Subquotient::new(&moduli, &big.basis(), &images);
    let quotient = sq.group().clone();
    let proj_images: Vec<Element> = big
        .basis()
        .iter()
        .map(|e| sq.coords(e).expect("basis lies in the numerator"))
        .collect();
    let projection = AbHom::from_images(big.clone(), quotient.clone(), &proj_images)?;
    let qmats: Vec<Vec<Vec<i64>>> = gens
        .iter()
        .map(|&s| {
            let cols: Vec<Element> = sq
                .reps()
                .iter()
                .map(|rep| projection.apply(&coinduced.act(s, rep)))
                .collect();
            (0..quotient.rank())
                .map(|i| cols.iter().map(|c| c[i]).collect())
                .collect()
        })
        .collect();
    let cokernel = GModule::from_generators(g, &quotient, &gens, &qmats)?;
    Ok(Coinduced {
        coinduced,
        embedding,
        cokernel,
        projection,
        sq,
    })
}

/// Outcome of comparing `H¹(G, A')` with `H²(G, A)` through the connecting map.
#[derive(Clone, Debug)]
pub struct DimensionShift {
    pub h1_shifted: FiniteAbelianGroup,
    pub h2: FiniteAbelianGroup,
    pub h1_coinduced: FiniteAbelianGroup,
    /// Connecting map `H¹(G, A') → H²(G, A)` on representatives.
    pub connecting: AbHom,
    pub passed: bool,
    pub failure: Option<String>,
}

pub fn dimension_shift_check(m: &GModule) -> Result<DimensionShift> {
    dimension_shift_check_capped(m, DEFAULT_COCHAIN_CAP)
}

pub fn dimension_shift_check_capped(m: &GModule, cap: usize) -> Result<DimensionShift> {
    let co = coinduced_module(m)?;
    let g = m.group();
    let n = g.order();
    let e = g.identity();
    let a = m.coeff();
    let h2 = cohomology_capped(m, 2, cap)?;
    let h1s = cohomology_capped(&co.cokernel, 1, cap)?;
    let h1c = cohomology_capped(&co.coinduced, 1, cap)?;
    let big = co.coinduced.coeff();

    let mut images = Vec::new();
    let mut failure = None;
    for f in h1s.representative_values() {
        let lifted: Vec<Element> = g.elements().map(|x| co.lift(f.at1(x))).collect();
        let mut values = Vec::with_capacity(n * n);
        for x in g.elements() {
            for y in g.elements() {
                let t = big.sub(&co.coinduced.act(x, &lifted[y]), &lifted[g.mul(x, y)]);
                let d = big.add(&t, &lifted[x]);
                if !co.sq.in_denominator(&d) && failure.is_none() {
                    failure = Some(format!("coboundary of the lift leaves A at ({x},{y})"));
                }
                values.push((0..a.rank()).map(|i| d[i * n + e]).collect());
            }
        }
        let c = CochainValues {
            degree: 2,
            order: n,
            values,
        };
        match h2.class_of_values(&c) {
            Some(cls) => images.push(cls),
            None => {
                failure.get_or_insert_with(|| "connecting image is not a cocycle".into());
                images.push(h2.value().zero());
            }
        }
    }
    let connecting = AbHom::from_images(h1s.value().clone(), h2.value().clone(), &images)
        .map_err(|e| Error::Precondition(format!("connecting map: {e}")))?;
    if failure.is_none() && !connecting.is_isomorphism() {
        failure = Some("connecting map is not an isomorphism".into());
    }
    if failure.is_none() && !h1c.value().is_trivial() {
        failure = Some(format!("H^1 of the coinduced module is {}", h1c.value()));
    }
    Ok(DimensionShift {
        h1_shifted: h1s.value().clone(),
        h2: h2.value().clone(),
        h1_coinduced: h1c.value().clone(),
        connecting,
        passed: failure.is_none(),
        failure,
    })
}

/// `H^i(G, A)`; degrees above 2 go through `i - 2` dimension shifts to `H²`.
pub fn high_degree_cohomology(m: &GModule, degree: usize, cap: usize) -> Result<FiniteAbelianGroup> {
    if degree <= 2 {
        return Ok(cohomology_capped(m, degree, cap)?.value().clone());
    }
    let mut cur = m.clone();
    for _ in 0..degree - 2 {
        let size = cur.group().order().saturating_mul(cur.coeff().rank());
        if size > cap {
            return Err(Error::SizeCap {
                what: "coinduced module",
                size,
                cap,
            });
        }
        cur = coinduced_module(&cur)?.cokernel;
    }
    Ok(cohomology_capped(&cur, 2, cap)?.value().clone())
}
