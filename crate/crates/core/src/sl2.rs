//! 2x2 matrices over `F_p` and the group `SL_2(F_p)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Fp, PrimeField};
use crate::heisenberg::{HeisenbergElement, PlanePoint};

/// A general 2x2 matrix `(a b; c d)` over `F_p`, row-major.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2 {
    pub a: Fp,
    pub b: Fp,
    pub c: Fp,
    pub d: Fp,
}

impl Mat2 {
    pub fn new(a: Fp, b: Fp, c: Fp, d: Fp) -> Self {
        Self { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::new(Fp::ONE, Fp::ZERO, Fp::ZERO, Fp::ONE)
    }

    pub fn zero() -> Self {
        Self::new(Fp::ZERO, Fp::ZERO, Fp::ZERO, Fp::ZERO)
    }

    pub fn det(&self, f: &PrimeField) -> Fp {
        f.sub(f.mul(self.a, self.d), f.mul(self.b, self.c))
    }

    pub fn trace(&self, f: &PrimeField) -> Fp {
        f.add(self.a, self.d)
    }

    pub fn mul(&self, f: &PrimeField, o: &Mat2) -> Mat2 {
        Mat2 {
            a: f.add(f.mul(self.a, o.a), f.mul(self.b, o.c)),
            b: f.add(f.mul(self.a, o.b), f.mul(self.b, o.d)),
            c: f.add(f.mul(self.c, o.a), f.mul(self.d, o.c)),
            d: f.add(f.mul(self.c, o.b), f.mul(self.d, o.d)),
        }
    }

    pub fn add_scalar(&self, f: &PrimeField, s: Fp) -> Mat2 {
        Mat2::new(f.add(self.a, s), self.b, self.c, f.add(self.d, s))
    }

    pub fn inverse(&self, f: &PrimeField) -> Result<Mat2> {
        let di = f.inv(self.det(f))?;
        Ok(Mat2 {
            a: f.mul(self.d, di),
            b: f.neg(f.mul(self.b, di)),
            c: f.neg(f.mul(self.c, di)),
            d: f.mul(self.a, di),
        })
    }

    /// The matrix acting on the column vector `(t, w)`.
    pub fn apply(&self, f: &PrimeField, v: PlanePoint) -> PlanePoint {
        (
            f.add(f.mul(self.a, v.0), f.mul(self.b, v.1)),
            f.add(f.mul(self.c, v.0), f.mul(self.d, v.1)),
        )
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}

/// An element of `SL_2(F_p)`: a [`Mat2`] with determinant one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sl2(Mat2);

impl Sl2 {
    pub fn new(f: &PrimeField, m: Mat2) -> Result<Self> {
        let det = m.det(f);
        if det != Fp::ONE {
            return Err(Error::NotUnimodular(det.value()));
        }
        Ok(Self(m))
    }

    /// Builds from signed entries, reducing mod `p`.
    pub fn from_i64(f: &PrimeField, a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(f, Mat2::new(f.elem(a), f.elem(b), f.elem(c), f.elem(d)))
    }

    pub fn identity() -> Self {
        Self(Mat2::identity())
    }

    /// `w = (0 1; -1 0)`.
    pub fn weyl(f: &PrimeField) -> Self {
        Self(Mat2::new(Fp::ZERO, Fp::ONE, f.neg(Fp::ONE), Fp::ZERO))
    }

    /// `diag(a, 1/a)`.
    pub fn diagonal(f: &PrimeField, a: Fp) -> Result<Self> {
        Ok(Self(Mat2::new(a, Fp::ZERO, Fp::ZERO, f.inv(a)?)))
    }

    /// The lower unipotent `(1 0; b 1)`.
    pub fn lower_unipotent(b: Fp) -> Self {
        Self(Mat2::new(Fp::ONE, Fp::ZERO, b, Fp::ONE))
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0 == Mat2::identity()
    }

    pub fn mul(&self, f: &PrimeField, o: &Sl2) -> Sl2 {
        Sl2(self.0.mul(f, &o.0))
    }

    pub fn inverse(&self, f: &PrimeField) -> Sl2 {
        let m = &self.0;
        Sl2(Mat2::new(m.d, f.neg(m.b), f.neg(m.c), m.a))
    }

    pub fn pow(&self, f: &PrimeField, mut e: u64) -> Sl2 {
        let mut base = *self;
        let mut acc = Sl2::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base);
            }
            base = base.mul(f, &base);
            e >>= 1;
        }
        acc
    }

    /// `g - I` is invertible, i.e. the Cayley transform is defined.
    pub fn is_regular_for_cayley(&self, f: &PrimeField) -> bool {
        !self.0.add_scalar(f, f.neg(Fp::ONE)).det(f).is_zero()
    }

    /// The action on `H` through the plane coordinate, fixing the center.
    pub fn act(&self, f: &PrimeField, h: HeisenbergElement) -> HeisenbergElement {
        let (t, w) = self.0.apply(f, h.plane());
        HeisenbergElement::new(t, w, h.z)
    }

    /// All of `SL_2(F_p)` in lexicographic `(a, b, c, d)` order.
    pub fn enumerate(f: &PrimeField) -> impl Iterator<Item = Sl2> + '_ {
        let minus_one = f.neg(Fp::ONE);
        f.elements().flat_map(move |a| {
            f.elements().flat_map(move |b| {
                f.elements().flat_map(move |c| {
                    let bc = f.mul(b, c);
                    let ds: Vec<Fp> = if a.is_zero() {
                        if bc == minus_one {
                            f.elements().collect()
                        } else {
                            Vec::new()
                        }
                    } else {
                        vec![f.mul(f.add(Fp::ONE, bc), f.inv(a).unwrap())]
                    };
                    ds.into_iter().map(move |d| Sl2(Mat2::new(a, b, c, d)))
                })
            })
        })
    }
}

impl fmt::Display for Sl2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_is_lexicographic_and_complete() {
        for p in [3u64, 5, 7] {
            let f = PrimeField::new(p).unwrap();
            let all: Vec<_> = Sl2::enumerate(&f).collect();
            assert_eq!(all.len() as u64, p * (p * p - 1));
            assert!(all.windows(2).all(|w| w[0] < w[1]));
            assert!(all.iter().all(|g| g.matrix().det(&f) == Fp::ONE));
        }
    }

    #[test]
    fn group_operations() {
        let f = PrimeField::new(7).unwrap();
        let w = Sl2::weyl(&f);
        assert_eq!(w.pow(&f, 4), Sl2::identity());
        assert_eq!(w.pow(&f, 2), Sl2::from_i64(&f, -1, 0, 0, -1).unwrap());
        for g in Sl2::enumerate(&f).step_by(17) {
            assert!(g.mul(&f, &g.inverse(&f)).is_identity());
            assert_eq!(Mat2::inverse(g.matrix(), &f).unwrap(), *g.inverse(&f).matrix());
        }
        assert_eq!(
            Sl2::from_i64(&f, 2, 0, 0, 2),
            Err(Error::NotUnimodular(4))
        );
    }
}
