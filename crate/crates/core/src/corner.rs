//! Idempotents, corner rings `eRe`, Peirce decomposition, and the embedding of
//! `eRe x fRf` into the ambient ring.
//!
//! Corner carriers keep ambient element codes; nothing is re-indexed except
//! when a corner is explicitly materialized as a standalone ring with
//! [`CornerRing::to_finite_ring`].

use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::RingError;
use crate::regularity;
use crate::ring::{make_product_ring, Element, FiniteRing, Limits, RingView, UnitTable};

/// An idempotent `e` paired with its complement `f = 1 - e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Idempotent {
    e: Element,
    f: Element,
}

impl Idempotent {
    /// Verifies `e^2 = e` in `ring`.
    pub fn new(ring: &FiniteRing, e: Element) -> Result<Self, RingError> {
        ring.check(e)?;
        if ring.mul(e, e) != e {
            return Err(RingError::NotIdempotent(e));
        }
        Ok(Idempotent { e, f: ring.sub(ring.one(), e) })
    }

    pub(crate) fn new_unchecked(e: Element, f: Element) -> Self {
        Idempotent { e, f }
    }

    pub fn e(&self) -> Element {
        self.e
    }

    pub fn f(&self) -> Element {
        self.f
    }

    /// The idempotent `f` with complement `e`.
    pub fn complement(&self) -> Idempotent {
        Idempotent { e: self.f, f: self.e }
    }
}

/// All idempotents of `ring` in code order, including `0` and `1`.
pub fn idempotents(ring: &FiniteRing) -> &[Idempotent] {
    ring.idempotents()
}

/// The corner ring `eRe`, with identity `e` and ambient arithmetic.
pub struct CornerRing {
    ambient: FiniteRing,
    idempotent: Idempotent,
    carrier: Vec<Element>,
    units: OnceLock<UnitTable>,
    unit_regular: OnceLock<Vec<Option<(Element, Element)>>>,
}

impl std::fmt::Debug for CornerRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CornerRing")
            .field("ambient", &self.ambient.name())
            .field("e", &self.idempotent.e)
            .field("size", &self.carrier.len())
            .finish()
    }
}

/// Build `eRe` as the deduplicated set `{exe : x in R}`.
pub fn corner_ring(ring: &FiniteRing, idempotent: Idempotent) -> CornerRing {
    let e = idempotent.e;
    let mut carrier: Vec<Element> =
        (0..ring.size()).into_par_iter().map(|c| ring.mul(ring.mul(e, Element::from_code(c)), e)).collect();
    carrier.par_sort_unstable();
    carrier.dedup();
    CornerRing { ambient: ring.clone(), idempotent, carrier, units: OnceLock::new(), unit_regular: OnceLock::new() }
}

impl CornerRing {
    pub fn idempotent(&self) -> Idempotent {
        self.idempotent
    }

    pub fn carrier(&self) -> &[Element] {
        &self.carrier
    }

    /// Re-index the corner as a standalone table ring; position `i` in the
    /// carrier becomes code `i`.
    pub fn to_finite_ring(&self) -> Result<FiniteRing, RingError> {
        let n = self.carrier.len() as u32;
        if n > 1024 {
            return Err(RingError::CapExceeded { cardinality: n as u128, cap: 1024 });
        }
        let pos = |x: Element| -> Result<u32, RingError> {
            self.position(x)
                .map(|p| p as u32)
                .ok_or_else(|| RingError::OutsideCarrier { element: x, ring: self.label() })
        };
        let mut add = Vec::with_capacity((n * n) as usize);
        let mut mul = Vec::with_capacity((n * n) as usize);
        for &x in &self.carrier {
            for &y in &self.carrier {
                add.push(pos(self.ambient.add(x, y))?);
                mul.push(pos(self.ambient.mul(x, y))?);
            }
        }
        let neg = self.carrier.iter().map(|&x| pos(self.ambient.neg(x))).collect::<Result<_, _>>()?;
        FiniteRing::from_tables(self.label(), n, Element::from_code(pos(self.idempotent.e)?), add, neg, mul)
    }
}

impl RingView for CornerRing {
    fn ambient(&self) -> &FiniteRing {
        &self.ambient
    }

    fn len(&self) -> usize {
        self.carrier.len()
    }

    fn element_at(&self, index: usize) -> Element {
        self.carrier[index]
    }

    fn position(&self, x: Element) -> Option<usize> {
        self.carrier.binary_search(&x).ok()
    }

    fn contains(&self, x: Element) -> bool {
        let e = self.idempotent.e;
        self.ambient.contains(x) && self.ambient.mul(self.ambient.mul(e, x), e) == x
    }

    fn one(&self) -> Element {
        self.idempotent.e
    }

    fn units(&self) -> &UnitTable {
        self.units.get_or_init(|| {
            let e = self.idempotent.e;
            if e == self.ambient.one() {
                return self.ambient.unit_group().clone();
            }
            let pairs = self
                .carrier
                .par_iter()
                .filter_map(|&x| {
                    self.carrier
                        .iter()
                        .find(|&&y| self.ambient.mul(x, y) == e && self.ambient.mul(y, x) == e)
                        .map(|&y| (x, y))
                })
                .collect();
            UnitTable::new(pairs)
        })
    }

    fn unit_regular_table(&self) -> &[Option<(Element, Element)>] {
        self.unit_regular.get_or_init(|| regularity::unit_regular_sweep(self))
    }

    fn label(&self) -> String {
        format!("e{}R[{}]", self.idempotent.e, self.ambient.name())
    }
}

/// The four Peirce components of an element relative to `e` and `f = 1 - e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PeirceParts {
    /// `exe`
    pub ee: Element,
    /// `exf`
    pub ef: Element,
    /// `fxe`
    pub fe: Element,
    /// `fxf`
    pub ff: Element,
}

impl PeirceParts {
    pub fn sum(&self, ring: &FiniteRing) -> Element {
        ring.add(ring.add(self.ee, self.ef), ring.add(self.fe, self.ff))
    }

    /// Each part is fixed by its own sandwich (`e.ee.e = ee`, `e.ef.f = ef`, ...).
    pub fn sandwich_invariant(&self, ring: &FiniteRing, idem: Idempotent) -> bool {
        let (e, f) = (idem.e, idem.f);
        let s = |l, x, r| ring.mul(ring.mul(l, x), r);
        s(e, self.ee, e) == self.ee
            && s(e, self.ef, f) == self.ef
            && s(f, self.fe, e) == self.fe
            && s(f, self.ff, f) == self.ff
    }
}

pub fn peirce_decompose(ring: &FiniteRing, idem: Idempotent, x: Element) -> PeirceParts {
    let (e, f) = (idem.e, idem.f);
    let s = |l, r| ring.mul(ring.mul(l, x), r);
    PeirceParts { ee: s(e, e), ef: s(e, f), fe: s(f, e), ff: s(f, f) }
}

/// The map `(x, y) -> x + y` from `eRe x fRf` into `R`, with its verification.
#[derive(Debug)]
pub struct SubringEmbedding {
    pub corner_e: CornerRing,
    pub corner_f: CornerRing,
    /// `eRe x fRf` materialized as a product ring.
    pub product: FiniteRing,
    /// Image of each product code.
    pub images: Vec<Element>,
    pub injective: bool,
    pub additive: bool,
    pub multiplicative: bool,
    /// `(e, f)` maps to `1`.
    pub unital: bool,
    pub image_closed: bool,
}

impl SubringEmbedding {
    pub fn is_embedding(&self) -> bool {
        self.injective && self.additive && self.multiplicative && self.unital && self.image_closed
    }

    pub fn image(&self, d: Element) -> Element {
        self.images[d.code() as usize]
    }

    /// Product code of the pair `(x, y)` with `x in eRe`, `y in fRf`.
    pub fn pair(&self, x: Element, y: Element) -> Option<Element> {
        let i = self.corner_e.position(x)? as u32;
        let j = self.corner_f.position(y)? as u32;
        Some(Element::from_code(i * self.corner_f.len() as u32 + j))
    }
}

pub fn product_subring_embed(ring: &FiniteRing, idem: Idempotent) -> Result<SubringEmbedding, RingError> {
    let corner_e = corner_ring(ring, idem);
    let corner_f = corner_ring(ring, idem.complement());
    let de = corner_e.to_finite_ring()?;
    let df = corner_f.to_finite_ring()?;
    let product = make_product_ring(&de, &df, &Limits { size_cap: ring.size() as u64, ..Limits::default() })?;
    let m = corner_f.len() as u32;
    let images: Vec<Element> = product
        .elements()
        .map(|d| ring.add(corner_e.element_at((d.code() / m) as usize), corner_f.element_at((d.code() % m) as usize)))
        .collect();

    let mut sorted = images.clone();
    sorted.sort_unstable();
    sorted.dedup();
    let injective = sorted.len() == images.len();

    let n = product.size();
    let (additive, multiplicative, image_closed) = (0..n)
        .into_par_iter()
        .map(|p| {
            let p = Element::from_code(p);
            let mut ok = (true, true, true);
            for q in product.elements() {
                let (ip, iq) = (images[p.code() as usize], images[q.code() as usize]);
                let sum = ring.add(ip, iq);
                let prod = ring.mul(ip, iq);
                ok.0 &= images[product.add(p, q).code() as usize] == sum;
                ok.1 &= images[product.mul(p, q).code() as usize] == prod;
                ok.2 &= sorted.binary_search(&sum).is_ok() && sorted.binary_search(&prod).is_ok();
            }
            ok
        })
        .reduce(|| (true, true, true), |a, b| (a.0 && b.0, a.1 && b.1, a.2 && b.2));
    let unital = images[product.one().code() as usize] == ring.one();

    Ok(SubringEmbedding {
        corner_e,
        corner_f,
        product,
        images,
        injective,
        additive,
        multiplicative,
        unital,
        image_closed,
    })
}
