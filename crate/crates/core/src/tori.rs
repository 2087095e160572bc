//! Maximal tori of `SL_2(F_p)` and their characters.
//!
//! Three tori are built: the diagonal torus `A`, the centralizer `T_w` of the
//! Weyl element, and a non-split torus `T_ns` realized inside `F_{p^2}^x`.
//! Every torus is cyclic; elements are stored as powers of a generator.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::field::{prime_factors, Fp, PrimeField, QuadraticExtension};
use crate::sl2::{Mat2, Sl2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TorusKind {
    /// The diagonal torus `A`.
    Standard,
    /// The centralizer `T_w` of `w`.
    WeylCentralizer,
    /// Norm-one elements of `F_{p^2}`.
    NonSplit,
}

impl fmt::Display for TorusKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TorusKind::Standard => "A",
            TorusKind::WeylCentralizer => "Tw",
            TorusKind::NonSplit => "ns",
        })
    }
}

/// A cyclic maximal torus with `elements[j] = generator^j`.
#[derive(Clone, Debug)]
pub struct MaximalTorus {
    kind: TorusKind,
    field: PrimeField,
    elements: Vec<Sl2>,
    log: HashMap<Sl2, usize>,
    split: bool,
}

impl MaximalTorus {
    /// Builds the torus generated by the first element of `candidates` with order `order`.
    fn from_candidates(
        kind: TorusKind,
        f: &PrimeField,
        order: usize,
        candidates: impl IntoIterator<Item = Sl2>,
    ) -> Self {
        let generator = first_of_order(f, order, candidates);
        let mut elements = Vec::with_capacity(order);
        let mut g = Sl2::identity();
        for _ in 0..order {
            elements.push(g);
            g = g.mul(f, &generator);
        }
        let log = elements.iter().enumerate().map(|(j, g)| (*g, j)).collect();
        let mut torus = Self {
            kind,
            field: f.clone(),
            elements,
            log,
            split: false,
        };
        torus.split = is_split(&torus);
        torus
    }

    pub fn kind(&self) -> TorusKind {
        self.kind
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    /// `#T`.
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generator(&self) -> Sl2 {
        self.elements[1 % self.order()]
    }

    pub fn elements(&self) -> &[Sl2] {
        &self.elements
    }

    pub fn is_split(&self) -> bool {
        self.split
    }

    pub fn contains(&self, g: &Sl2) -> bool {
        self.log.contains_key(g)
    }

    /// The exponent `j` with `g = generator^j`.
    pub fn discrete_log(&self, g: &Sl2) -> Option<usize> {
        self.log.get(g).copied()
    }

    /// All characters `chi_0, ..., chi_{#T - 1}`.
    pub fn characters(&self) -> Vec<TorusCharacter<'_>> {
        (0..self.order()).map(|k| self.character(k)).collect()
    }

    pub fn character(&self, index: usize) -> TorusCharacter<'_> {
        TorusCharacter {
            torus: self,
            index: index % self.order(),
        }
    }

    /// `sigma_T = chi_{#T/2}`.
    pub fn quadratic_character(&self) -> TorusCharacter<'_> {
        self.character(self.order() / 2)
    }

    /// `chi_k(generator^j) = exp(2 pi i k j / #T)`.
    pub fn character_value(&self, k: usize, j: usize) -> Complex64 {
        let n = self.order();
        let r = ((k % n) * (j % n)) % n;
        Complex64::from_polar(1.0, 2.0 * PI * r as f64 / n as f64)
    }
}

fn first_of_order(f: &PrimeField, order: usize, candidates: impl IntoIterator<Item = Sl2>) -> Sl2 {
    let factors = prime_factors(order as u64);
    candidates
        .into_iter()
        .find(|g| {
            g.pow(f, order as u64).is_identity()
                && factors
                    .iter()
                    .all(|q| !g.pow(f, order as u64 / q).is_identity())
        })
        .expect("maximal torus is cyclic")
}

/// A character `chi_k` of a torus.
#[derive(Clone, Copy, Debug)]
pub struct TorusCharacter<'a> {
    torus: &'a MaximalTorus,
    index: usize,
}

impl<'a> TorusCharacter<'a> {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn torus(&self) -> &'a MaximalTorus {
        self.torus
    }

    /// `chi(g)`, or `None` when `g` is not in the torus.
    pub fn eval(&self, g: &Sl2) -> Option<Complex64> {
        self.torus
            .discrete_log(g)
            .map(|j| self.torus.character_value(self.index, j))
    }

    /// `chi(generator^j)`.
    pub fn at_power(&self, j: usize) -> Complex64 {
        self.torus.character_value(self.index, j)
    }

    /// For a character of order at most 2, its value as an integer sign.
    pub fn sign(&self, g: &Sl2) -> Option<i8> {
        self.eval(g).map(|z| if z.re > 0.0 { 1 } else { -1 })
    }
}

/// `A = {diag(a, 1/a)}`, enumerated by powers of `diag(r, 1/r)`.
pub fn standard_torus(f: &PrimeField) -> MaximalTorus {
    let r = f.primitive_root();
    let g = Sl2::diagonal(f, r).expect("primitive root is a unit");
    MaximalTorus::from_candidates(TorusKind::Standard, f, f.size() - 1, [g])
}

fn weyl_centralizer_order(f: &PrimeField) -> usize {
    if f.p() % 4 == 1 {
        f.size() - 1
    } else {
        f.size() + 1
    }
}

/// Elements `(a b; -b a)` of `T_w`, lazily, in lexicographic `(a, b)` order.
fn weyl_centralizer_points(f: &PrimeField) -> impl Iterator<Item = Sl2> + '_ {
    f.elements().flat_map(move |a| {
        let bs: Vec<Fp> = match f.sqrt(f.sub(Fp::ONE, f.mul(a, a))) {
            None => Vec::new(),
            Some(b) if b.is_zero() => vec![b],
            Some(b) => {
                let nb = f.neg(b);
                vec![b.min(nb), b.max(nb)]
            }
        };
        bs.into_iter()
            .map(move |b| Sl2::new(f, Mat2::new(a, b, f.neg(b), a)).expect("a^2 + b^2 = 1"))
    })
}

/// `T_w = {(a b; -b a) : a^2 + b^2 = 1}`.
pub fn weyl_centralizer(f: &PrimeField) -> MaximalTorus {
    let order = weyl_centralizer_order(f);
    MaximalTorus::from_candidates(TorusKind::WeylCentralizer, f, order, weyl_centralizer_points(f))
}

/// The generator of [`weyl_centralizer`], without building the element table.
pub fn weyl_centralizer_generator(f: &PrimeField) -> Sl2 {
    first_of_order(f, weyl_centralizer_order(f), weyl_centralizer_points(f))
}

/// `T_ns = {x + y sqrt(delta) : x^2 - delta y^2 = 1}` as matrices `(x delta y; y x)`.
pub fn nonsplit_torus(f: &PrimeField) -> MaximalTorus {
    let ext = QuadraticExtension::new(f);
    let delta = ext.delta();
    let mut points = Vec::with_capacity(f.size() + 1);
    for x in f.elements() {
        // y^2 = (x^2 - 1) / delta
        let rhs = f.mul(f.sub(f.mul(x, x), Fp::ONE), f.inv(delta).unwrap());
        if let Some(y) = f.sqrt(rhs) {
            points.push((x, y));
            if !y.is_zero() {
                points.push((x, f.neg(y)));
            }
        }
    }
    points.sort();
    let candidates = points.into_iter().map(|(x, y)| {
        Sl2::new(f, Mat2::new(x, f.mul(delta, y), y, x)).expect("norm one")
    });
    MaximalTorus::from_candidates(TorusKind::NonSplit, f, f.size() + 1, candidates)
}

/// Builds a torus by kind.
pub fn torus(f: &PrimeField, kind: TorusKind) -> MaximalTorus {
    match kind {
        TorusKind::Standard => standard_torus(f),
        TorusKind::WeylCentralizer => weyl_centralizer(f),
        TorusKind::NonSplit => nonsplit_torus(f),
    }
}

/// Whether the characteristic polynomial `t^2 - tr(g) t + 1` of the generator
/// has its roots in `F_p`.
pub fn is_split(t: &MaximalTorus) -> bool {
    let f = t.field();
    let tr = t.generator().matrix().trace(f);
    let disc = f.sub(f.mul(tr, tr), f.from_u64(4));
    if t.order() <= 2 {
        // only possible for tiny p where the generator is -I
        return t.order() == f.size() - 1;
    }
    assert!(!disc.is_zero(), "torus generator must be regular semisimple");
    f.legendre(disc) == 1
}

/// The conjugator `s = (1/2 eps/2; eps 1)` with `s T_w s^{-1} = A`, where `eps^2 = -1`.
pub fn conjugator_s(f: &PrimeField) -> crate::error::Result<Sl2> {
    let eps = f.sqrt_neg_one()?;
    let half = f.half();
    Sl2::new(f, Mat2::new(half, f.mul(eps, half), eps, Fp::ONE))
}
