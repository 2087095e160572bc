//! The Heisenberg group `H = V x F_p`, its standard realization on `C(F_p)`,
//! and the Weyl transform between operators and kernel functions.
//!
//! Kernels are stored on the section `z = 0` only. The full kernel is
//! `K(v, z) = psi(-z) K(v, 0)`, and an operator is recovered from its kernel as
//! `A = sum_{v in V} K(v, 0) pi(v, 0)`. With that normalization the Weyl
//! transform and the reconstruction are exact inverses.

use num_complex::Complex64;

use crate::field::{Fp, PrimeField};
use crate::linalg::{OperatorMatrix, StateVector, ZERO};

/// A point `(t, w)` of the symplectic plane `V = F_p x F_p`.
pub type PlanePoint = (Fp, Fp);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HeisenbergElement {
    pub t: Fp,
    pub w: Fp,
    pub z: Fp,
}

impl HeisenbergElement {
    pub const IDENTITY: Self = Self {
        t: Fp::ZERO,
        w: Fp::ZERO,
        z: Fp::ZERO,
    };

    pub fn new(t: Fp, w: Fp, z: Fp) -> Self {
        Self { t, w, z }
    }

    /// The element `(v, 0)`.
    pub fn from_plane(v: PlanePoint) -> Self {
        Self::new(v.0, v.1, Fp::ZERO)
    }

    pub fn plane(&self) -> PlanePoint {
        (self.t, self.w)
    }
}

/// `omega((t, w), (t', w')) = t w' - w t'`.
pub fn symplectic_form(f: &PrimeField, v: PlanePoint, u: PlanePoint) -> Fp {
    f.sub(f.mul(v.0, u.1), f.mul(v.1, u.0))
}

/// `(v, z)(v', z') = (v + v', z + z' + omega(v, v') / 2)`.
pub fn h_mul(f: &PrimeField, h: HeisenbergElement, k: HeisenbergElement) -> HeisenbergElement {
    let twist = f.mul(f.half(), symplectic_form(f, h.plane(), k.plane()));
    HeisenbergElement {
        t: f.add(h.t, k.t),
        w: f.add(h.w, k.w),
        z: f.add(f.add(h.z, k.z), twist),
    }
}

pub fn h_inv(f: &PrimeField, h: HeisenbergElement) -> HeisenbergElement {
    HeisenbergElement {
        t: f.neg(h.t),
        w: f.neg(h.w),
        z: f.neg(h.z),
    }
}

/// Phase of `pi(t, w, z)` at `x`: `z + w x + w t / 2`.
///
/// Follows from `(t, w, z) = (t, 0, 0)(0, w, 0)(0, 0, z - t w / 2)` and the
/// generator actions `f(x + t)`, `psi(w x) f(x)`, `psi(z) f(x)`.
#[inline]
fn pi_phase(f: &PrimeField, h: HeisenbergElement, x: Fp) -> Fp {
    let wt_half = f.mul(f.half(), f.mul(h.w, h.t));
    f.add(f.add(h.z, f.mul(h.w, x)), wt_half)
}

/// `pi(h)[g](x) = psi(z + w x + w t / 2) g(x + t)`.
pub fn pi_apply(f: &PrimeField, h: HeisenbergElement, g: &[Complex64]) -> StateVector {
    StateVector::from_iterator(
        f.size(),
        f.elements()
            .map(|x| f.psi(pi_phase(f, h, x)) * g[f.add(x, h.t).index()]),
    )
}

/// The matrix of `pi(h)` in the delta basis.
pub fn pi_matrix(f: &PrimeField, h: HeisenbergElement) -> OperatorMatrix {
    let n = f.size();
    let mut m = OperatorMatrix::zeros(n, n);
    for x in f.elements() {
        m[(x.index(), f.add(x, h.t).index())] = f.psi(pi_phase(f, h, x));
    }
    m
}

/// A function on `V`, the `z = 0` section of a `psi^{-1}`-equivariant kernel on `H`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelTable {
    p: usize,
    values: Vec<Complex64>,
}

impl KernelTable {
    pub fn zeros(p: usize) -> Self {
        Self {
            p,
            values: vec![ZERO; p * p],
        }
    }

    pub fn from_fn(f: &PrimeField, mut k: impl FnMut(PlanePoint) -> Complex64) -> Self {
        let p = f.size();
        let mut values = Vec::with_capacity(p * p);
        for t in f.elements() {
            for w in f.elements() {
                values.push(k((t, w)));
            }
        }
        Self { p, values }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn get(&self, v: PlanePoint) -> Complex64 {
        self.values[v.0.index() * self.p + v.1.index()]
    }

    #[inline]
    pub fn set(&mut self, v: PlanePoint, value: Complex64) {
        self.values[v.0.index() * self.p + v.1.index()] = value;
    }

    /// The full kernel value `K(v, z) = psi(-z) K(v, 0)`.
    pub fn at(&self, f: &PrimeField, h: HeisenbergElement) -> Complex64 {
        f.psi(f.neg(h.z)) * self.get(h.plane())
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

/// `K_A(v, 0) = Tr(A pi((v, 0)^{-1})) / p`.
pub fn weyl_transform(f: &PrimeField, a: &OperatorMatrix) -> KernelTable {
    let psi = f.psi_table();
    let half = f.half();
    let mut k = KernelTable::zeros(f.size());
    for t in f.elements() {
        for w in f.elements() {
            // pi(-t, -w, 0) has entry psi(w t / 2 - w y) at (y, y - t).
            let base = f.mul(half, f.mul(w, t));
            let mut acc = ZERO;
            for y in f.elements() {
                let phase = f.sub(base, f.mul(w, y));
                acc += a[(f.sub(y, t).index(), y.index())] * psi[phase.index()];
            }
            k.set((t, w), acc / f.p() as f64);
        }
    }
    k
}

/// `A = sum_v K(v, 0) pi(v, 0)`, the inverse of [`weyl_transform`].
pub fn kernel_to_operator(f: &PrimeField, k: &KernelTable) -> OperatorMatrix {
    let n = f.size();
    let psi = f.psi_table();
    let half = f.half();
    let mut a = OperatorMatrix::zeros(n, n);
    for t in f.elements() {
        let t_half = f.mul(half, t);
        for x in f.elements() {
            // entry (x, x + t) collects psi(w (x + t/2)) over w
            let shift = f.add(x, t_half).index() as u64;
            let mut acc = ZERO;
            let mut phase = 0u64;
            for w in f.elements() {
                acc += k.get((t, w)) * psi[phase as usize];
                phase += shift;
                if phase >= f.p() {
                    phase -= f.p();
                }
            }
            a[(x.index(), f.add(x, t).index())] = acc;
        }
    }
    a
}

/// Convolution of kernels matching operator composition:
/// `kernel(A B) = convolve(kernel(A), kernel(B))`.
///
/// On the `z = 0` section this is the twisted convolution
/// `(K1 * K2)(u) = sum_v K1(v) K2(u - v) psi(omega(v, u) / 2)`.
pub fn convolve(f: &PrimeField, k1: &KernelTable, k2: &KernelTable) -> KernelTable {
    let half = f.half();
    KernelTable::from_fn(f, |u| {
        let mut acc = ZERO;
        for t in f.elements() {
            for w in f.elements() {
                let v = (t, w);
                let rest = (f.sub(u.0, t), f.sub(u.1, w));
                let twist = f.mul(half, symplectic_form(f, v, u));
                acc += k1.get(v) * k2.get(rest) * f.psi(twist);
            }
        }
        acc
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{delta, max_abs, max_abs_diff, unitarity_defect, ONE};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn field(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn random_element(rng: &mut impl Rng, f: &PrimeField) -> HeisenbergElement {
        let mut coord = || f.from_u64(rng.gen_range(0..f.p()));
        HeisenbergElement::new(coord(), coord(), coord())
    }

    fn elem(f: &PrimeField, t: i64, w: i64, z: i64) -> HeisenbergElement {
        HeisenbergElement::new(f.elem(t), f.elem(w), f.elem(z))
    }

    #[test]
    fn symplectic_form_examples() {
        let f = field(5);
        assert_eq!(symplectic_form(&f, (Fp(1), Fp(0)), (Fp(0), Fp(1))), Fp(1));
        assert_eq!(symplectic_form(&f, (Fp(3), Fp(2)), (Fp(3), Fp(2))), Fp(0));
        assert_eq!(symplectic_form(&f, (Fp(0), Fp(1)), (Fp(1), Fp(0))), Fp(4));
    }

    #[test]
    fn group_law_examples() {
        let f = field(5);
        let e = HeisenbergElement::IDENTITY;
        assert_eq!(h_mul(&f, e, e), e);
        assert_eq!(h_mul(&f, elem(&f, 1, 0, 0), elem(&f, 0, 1, 0)), elem(&f, 1, 1, 3));
        assert_eq!(h_inv(&field(7), e), e);
        assert_eq!(h_inv(&f, elem(&f, 1, 2, 3)), elem(&f, 4, 3, 2));
        assert_eq!(h_mul(&f, elem(&f, 1, 2, 3), elem(&f, 4, 3, 2)), e);
    }

    #[test]
    fn group_axioms_exhaustive_p3() {
        let f = field(3);
        let all: Vec<_> = (0..27)
            .map(|i| elem(&f, i / 9, (i / 3) % 3, i % 3))
            .collect();
        for &a in &all {
            assert_eq!(h_inv(&f, h_inv(&f, a)), a);
            assert_eq!(h_mul(&f, a, h_inv(&f, a)), HeisenbergElement::IDENTITY);
            for &b in &all {
                let center = elem(&f, 0, 0, b.z.value() as i64);
                assert_eq!(h_mul(&f, a, center), h_mul(&f, center, a));
                for &c in &all {
                    assert_eq!(
                        h_mul(&f, h_mul(&f, a, b), c),
                        h_mul(&f, a, h_mul(&f, b, c))
                    );
                }
            }
        }
    }

    #[test]
    fn group_axioms_random_p11() {
        let f = field(11);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let (a, b, c) = (
                random_element(&mut rng, &f),
                random_element(&mut rng, &f),
                random_element(&mut rng, &f),
            );
            assert_eq!(h_mul(&f, h_mul(&f, a, b), c), h_mul(&f, a, h_mul(&f, b, c)));
        }
        for _ in 0..100 {
            let a = random_element(&mut rng, &f);
            assert_eq!(h_mul(&f, a, h_inv(&f, a)), HeisenbergElement::IDENTITY);
        }
    }

    #[test]
    fn pi_matrix_examples() {
        let f = field(5);
        let id = OperatorMatrix::identity(5, 5);
        assert!(max_abs_diff(pi_matrix(&f, HeisenbergElement::IDENTITY).as_slice(), id.as_slice()) < 1e-15);
        let central = pi_matrix(&f, elem(&f, 0, 0, 1));
        let want = id.map(|z| z * f.psi(Fp(1)));
        assert!(max_abs_diff(central.as_slice(), want.as_slice()) < 1e-15);
        let moved = pi_matrix(&f, elem(&f, 1, 0, 0)) * delta(5, 0);
        assert!(max_abs_diff(moved.as_slice(), delta(5, 4).as_slice()) < 1e-15);
    }

    #[test]
    fn pi_is_a_representation_matching_generators() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for p in [3u64, 5, 7, 13, 31] {
            let f = field(p);
            for _ in 0..20 {
                let a = random_element(&mut rng, &f);
                let b = random_element(&mut rng, &f);
                let lhs = pi_matrix(&f, a) * pi_matrix(&f, b);
                let rhs = pi_matrix(&f, h_mul(&f, a, b));
                assert!(max_abs_diff(lhs.as_slice(), rhs.as_slice()) < 1e-10);
                assert!(unitarity_defect(&pi_matrix(&f, a)) < 1e-10);
                let g = StateVector::from_fn(p as usize, |i, _| Complex64::new(i as f64, 1.0));
                let applied = pi_apply(&f, a, g.as_slice());
                assert!(max_abs_diff(applied.as_slice(), (pi_matrix(&f, a) * &g).as_slice()) < 1e-12);
            }
        }
    }

    #[test]
    fn weyl_transform_examples() {
        let f = field(5);
        let k = weyl_transform(&f, &OperatorMatrix::identity(5, 5));
        for t in f.elements() {
            for w in f.elements() {
                let want = if t.is_zero() && w.is_zero() { 1.0 } else { 0.0 };
                assert!((k.get((t, w)) - want).norm() < 1e-12);
            }
        }
        let v0 = (Fp(2), Fp(3));
        let k = weyl_transform(&f, &pi_matrix(&f, HeisenbergElement::from_plane(v0)));
        for t in f.elements() {
            for w in f.elements() {
                let want = if (t, w) == v0 { ONE } else { ZERO };
                assert!((k.get((t, w)) - want).norm() < 1e-12);
            }
        }
        let k = weyl_transform(&f, &OperatorMatrix::zeros(5, 5));
        assert_eq!(max_abs(k.values()), 0.0);
    }

    #[test]
    fn kernel_reconstruction_examples() {
        let f = field(7);
        let mut k = KernelTable::zeros(7);
        k.set((Fp(0), Fp(0)), ONE);
        let a = kernel_to_operator(&f, &k);
        assert!(max_abs_diff(a.as_slice(), OperatorMatrix::identity(7, 7).as_slice()) < 1e-14);
        let a = kernel_to_operator(&f, &KernelTable::zeros(7));
        assert_eq!(max_abs(a.as_slice()), 0.0);
        let h = elem(&f, 3, 5, 2);
        let k = weyl_transform(&f, &pi_matrix(&f, h));
        assert!((k.at(&f, h) - ONE).norm() < 1e-12, "K(h) = psi(-z) K(v, 0)");
    }

    #[test]
    fn weyl_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for p in [3u64, 7, 13, 31] {
            let f = field(p);
            let n = p as usize;
            let a = OperatorMatrix::from_fn(n, n, |_, _| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let back = kernel_to_operator(&f, &weyl_transform(&f, &a));
            assert!(max_abs_diff(back.as_slice(), a.as_slice()) < 1e-10);
            let k = KernelTable::from_fn(&f, |_| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let again = weyl_transform(&f, &kernel_to_operator(&f, &k));
            assert!(max_abs_diff(again.values(), k.values()) < 1e-10);
        }
    }

    #[test]
    fn convolution_matches_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = field(5);
        let mut rand_op = || {
            OperatorMatrix::from_fn(5, 5, |_, _| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            })
        };
        let (a, b) = (rand_op(), rand_op());
        let lhs = weyl_transform(&f, &(&a * &b));
        let rhs = convolve(&f, &weyl_transform(&f, &a), &weyl_transform(&f, &b));
        assert!(max_abs_diff(lhs.values(), rhs.values()) < 1e-10);
    }
}
