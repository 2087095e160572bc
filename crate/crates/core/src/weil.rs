//! The Weil representation `rho: SL_2(F_p) -> U(C(F_p))`.
//!
//! On the dense subset `{g : g - I invertible}` the operator is defined by its
//! kernel
//!
//! ```text
//! K_g(v, 0) = sigma(-det(kappa(g) + I)) psi(omega(kappa(g) v, v) / 4) / p,
//! kappa(g) = (g + I)(g - I)^{-1},
//! ```
//!
//! and elsewhere by `rho(g) = rho(g g0) rho(g0)^{-1}` for an auxiliary `g0`.
//! The result is an honest (not projective) representation.
//!
//! The Bruhat forms (scalings `S_a`, chirps `M_b`, the DFT `F`) give a second,
//! `O(p log p)` route. They determine `rho(g)` only up to a unit scalar, which
//! [`FastWeil`] pins by evaluating one matrix entry of the kernel form.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::FastDft;
use crate::field::{Fp, PrimeField};
use crate::heisenberg::{kernel_to_operator, symplectic_form, KernelTable};
use crate::linalg::{OperatorMatrix, I, ONE, ZERO};
use crate::sl2::{Mat2, Sl2};

/// `kappa(g) = (g + I)(g - I)^{-1}`.
pub fn cayley(f: &PrimeField, g: &Sl2) -> Result<Mat2> {
    let m = g.matrix();
    let minus = m.add_scalar(f, f.neg(Fp::ONE));
    let inv = minus.inverse(f).map_err(|_| Error::CayleyUndefined)?;
    Ok(m.add_scalar(f, Fp::ONE).mul(f, &inv))
}

/// `sigma(-det(kappa(g) + I))`, the sign in front of the kernel.
pub fn kernel_sign(f: &PrimeField, g: &Sl2) -> Result<i8> {
    let k = cayley(f, g)?;
    let d = k.add_scalar(f, Fp::ONE).det(f);
    Ok(f.legendre(f.neg(d)))
}

/// The kernel of `rho(g)` on the `z = 0` section.
pub fn kernel_table(f: &PrimeField, g: &Sl2) -> Result<KernelTable> {
    f.require_dense()?;
    let k = cayley(f, g)?;
    let sign = kernel_sign(f, g)? as f64 / f.p() as f64;
    let quarter = f.mul(f.half(), f.half());
    let psi = f.psi_table();
    Ok(KernelTable::from_fn(f, |v| {
        let q = f.mul(quarter, symplectic_form(f, k.apply(f, v), v));
        psi[q.index()] * sign
    }))
}

/// `rho(g)` from the kernel formula. Requires `g - I` invertible.
pub fn rho_kernel(f: &PrimeField, g: &Sl2) -> Result<OperatorMatrix> {
    Ok(kernel_to_operator(f, &kernel_table(f, g)?))
}

/// First `g0` in lexicographic order with `g0 - I` and `g g0 - I` invertible.
pub fn auxiliary_element(f: &PrimeField, g: &Sl2) -> Result<Sl2> {
    Sl2::enumerate(f)
        .find(|g0| g0.is_regular_for_cayley(f) && g.mul(f, g0).is_regular_for_cayley(f))
        .ok_or(Error::NoAuxiliaryElement)
}

/// The Weil operator `rho(g)` as a dense matrix.
pub fn rho(f: &PrimeField, g: &Sl2) -> Result<OperatorMatrix> {
    f.require_dense()?;
    if g.is_identity() {
        return Ok(OperatorMatrix::identity(f.size(), f.size()));
    }
    if g.is_regular_for_cayley(f) {
        return rho_kernel(f, g);
    }
    let g0 = auxiliary_element(f, g)?;
    // rho(g0) is unitary, so its inverse is the adjoint.
    Ok(rho_kernel(f, &g.mul(f, &g0))? * rho_kernel(f, &g0)?.adjoint())
}

/// `Tr(rho(g))`.
///
/// For `g - I` invertible the reconstruction `sum_v K_g(v) pi(v)` has trace
/// `p K_g(0) = sigma(-det(kappa(g) + I))`, since only `pi(0)` has nonzero trace.
pub fn rho_trace(f: &PrimeField, g: &Sl2) -> Result<Complex64> {
    if g.is_identity() {
        return Ok(Complex64::new(f.p() as f64, 0.0));
    }
    if g.is_regular_for_cayley(f) {
        return Ok(Complex64::new(kernel_sign(f, g)? as f64, 0.0));
    }
    Ok(rho(f, g)?.trace())
}

/// A single matrix entry `rho(g)[x, y]` from the kernel form, in `O(p)`.
/// Requires `g - I` invertible.
pub fn rho_entry(f: &PrimeField, g: &Sl2, x: Fp, y: Fp) -> Result<Complex64> {
    let k = cayley(f, g)?;
    let sign = kernel_sign(f, g)? as f64 / f.p() as f64;
    let quarter = f.mul(f.half(), f.half());
    let t = f.sub(y, x);
    let shift = f.add(x, f.mul(f.half(), t));
    let mut acc = ZERO;
    for w in f.elements() {
        let v = (t, w);
        let phase = f.add(
            f.mul(quarter, symplectic_form(f, k.apply(f, v), v)),
            f.mul(w, shift),
        );
        acc += f.psi(phase);
    }
    Ok(acc * sign)
}

/// `S_a[f](x) = sigma(a) f(x / a)`, the action of `diag(a, 1/a)`.
pub fn scaling_op(f: &PrimeField, a: Fp) -> Result<OperatorMatrix> {
    f.require_dense()?;
    let ai = f.inv(a)?;
    let s = f.legendre(a) as f64;
    let n = f.size();
    let mut m = OperatorMatrix::zeros(n, n);
    for x in f.elements() {
        m[(x.index(), f.mul(ai, x).index())] = Complex64::new(s, 0.0);
    }
    Ok(m)
}

/// Phase `-b x^2 / 2` of the chirp `M_b` at `x`.
#[inline]
fn chirp_phase(f: &PrimeField, b: Fp, x: Fp) -> Fp {
    f.neg(f.mul(f.mul(b, f.half()), f.mul(x, x)))
}

/// `M_b[f](x) = psi(-b x^2 / 2) f(x)`, the action of `(1 0; b 1)`.
pub fn chirp_op(f: &PrimeField, b: Fp) -> Result<OperatorMatrix> {
    f.require_dense()?;
    let n = f.size();
    let mut m = OperatorMatrix::zeros(n, n);
    for x in f.elements() {
        m[(x.index(), x.index())] = f.psi(chirp_phase(f, b, x));
    }
    Ok(m)
}

/// The unitary DFT matrix `(psi(y x) / sqrt(p))_{y, x}`.
pub fn dft_matrix(f: &PrimeField) -> Result<OperatorMatrix> {
    f.require_dense()?;
    let n = f.size();
    let psi = f.psi_table();
    let scale = 1.0 / (f.p() as f64).sqrt();
    Ok(OperatorMatrix::from_fn(n, n, |y, x| {
        psi[(y * x) % n] * scale
    }))
}

/// `C = i^{(p - 1)/2}`, with `F = C rho(w)`.
pub fn dft_constant(f: &PrimeField) -> Complex64 {
    i_power((f.p() - 1) / 2)
}

/// `i^k`.
pub fn i_power(k: u64) -> Complex64 {
    match k % 4 {
        0 => ONE,
        1 => I,
        2 => -ONE,
        _ => -I,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BruhatCell {
    /// `g = u(b1) diag(a, 1/a)`, `rho(g) ~ M_{b1} S_a`.
    TorusUnipotent,
    /// `g = u(b2) w u(b1) diag(a, 1/a)`, `rho(g) ~ M_{b2} F M_{b1} S_a`.
    BigCell,
}

/// Factors of `g` in `SL_2 = UA u UwUA`, with `u(b) = (1 0; b 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BruhatFactorization {
    pub kind: BruhatCell,
    pub b1: Fp,
    pub b2: Fp,
    pub a: Fp,
}

pub fn bruhat_decompose(f: &PrimeField, g: &Sl2) -> BruhatFactorization {
    let m = g.matrix();
    if m.b.is_zero() {
        // (a 0; c d) = u(c/a) diag(a, 1/a)
        let a = m.a;
        let b1 = f.mul(m.c, f.inv(a).expect("det = 1 forces a != 0"));
        BruhatFactorization {
            kind: BruhatCell::TorusUnipotent,
            b1,
            b2: Fp::ZERO,
            a,
        }
    } else {
        // u(b2) w u(b1) diag(a, 1/a) = (b1 a, 1/a; a (b1 b2 - 1), b2 / a)
        let binv = f.inv(m.b).unwrap();
        BruhatFactorization {
            kind: BruhatCell::BigCell,
            b1: f.mul(m.a, m.b),
            b2: f.mul(m.d, binv),
            a: binv,
        }
    }
}

impl BruhatFactorization {
    /// Multiplies the 2x2 factors back together.
    pub fn recompose(&self, f: &PrimeField) -> Sl2 {
        let d = Sl2::diagonal(f, self.a).expect("a != 0");
        let u1 = Sl2::lower_unipotent(self.b1);
        match self.kind {
            BruhatCell::TorusUnipotent => u1.mul(f, &d),
            BruhatCell::BigCell => Sl2::lower_unipotent(self.b2)
                .mul(f, &Sl2::weyl(f))
                .mul(f, &u1)
                .mul(f, &d),
        }
    }

    /// The composed operator, equal to `rho(g)` up to a unit scalar.
    pub fn operator(&self, f: &PrimeField) -> Result<OperatorMatrix> {
        let base = chirp_op(f, self.b1)? * scaling_op(f, self.a)?;
        Ok(match self.kind {
            BruhatCell::TorusUnipotent => base,
            BruhatCell::BigCell => chirp_op(f, self.b2)? * dft_matrix(f)? * base,
        })
    }

    /// A nonzero entry `(x, y)` of [`Self::operator`] and its value.
    fn reference_entry(&self, f: &PrimeField) -> (Fp, Fp, Complex64) {
        let sigma = f.legendre(self.a) as f64;
        match self.kind {
            // entry (x, x / a) of M_b S_a is sigma(a) psi(-b x^2 / 2)
            BruhatCell::TorusUnipotent => {
                let x = Fp::ONE;
                let y = f.inv(self.a).unwrap();
                (x, y, f.psi(chirp_phase(f, self.b1, x)) * sigma)
            }
            // every entry of the big-cell product has modulus p^{-1/2}; (0, 0) is sigma(a) / sqrt(p)
            BruhatCell::BigCell => (
                Fp::ZERO,
                Fp::ZERO,
                Complex64::new(sigma / (f.p() as f64).sqrt(), 0.0),
            ),
        }
    }
}

/// `O(p log p)` application of Weil operators through the Bruhat forms.
pub struct FastWeil {
    field: PrimeField,
    dft: FastDft,
}

impl FastWeil {
    pub fn new(field: &PrimeField) -> Self {
        Self {
            field: field.clone(),
            dft: FastDft::new(field.size()),
        }
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn scale(&self, a: Fp, v: &[Complex64]) -> Vec<Complex64> {
        let f = &self.field;
        let ai = f.inv(a).expect("scaling by zero");
        let s = f.legendre(a) as f64;
        f.elements().map(|x| v[f.mul(ai, x).index()] * s).collect()
    }

    pub fn chirp(&self, b: Fp, v: &[Complex64]) -> Vec<Complex64> {
        let f = &self.field;
        if b.is_zero() {
            return v.to_vec();
        }
        f.elements()
            .map(|x| v[x.index()] * f.psi(chirp_phase(f, b, x)))
            .collect()
    }

    pub fn dft(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.dft.apply(v)
    }

    /// The Bruhat composition applied to `v`, without the unit scalar.
    pub fn apply_factorization(&self, bf: &BruhatFactorization, v: &[Complex64]) -> Vec<Complex64> {
        let u = self.chirp(bf.b1, &self.scale(bf.a, v));
        match bf.kind {
            BruhatCell::TorusUnipotent => u,
            BruhatCell::BigCell => self.chirp(bf.b2, &self.dft(&u)),
        }
    }

    /// The unit `c` with `rho(g) = c * (Bruhat composition of g)`, for `g - I` invertible.
    pub fn bruhat_scalar(&self, g: &Sl2) -> Result<Complex64> {
        let f = &self.field;
        let bf = bruhat_decompose(f, g);
        let (x, y, composed) = bf.reference_entry(f);
        let exact = rho_entry(f, g, x, y)?;
        let c = exact / composed;
        let residual = (c.norm() - 1.0).abs();
        if residual > 1e-6 {
            return Err(Error::NumericInconsistency {
                what: format!("Bruhat scalar of {g}"),
                residual,
            });
        }
        Ok(c / c.norm())
    }

    /// `rho(g) v` exactly (including the scalar), in `O(p log p)`.
    pub fn apply(&self, g: &Sl2, v: &[Complex64]) -> Result<Vec<Complex64>> {
        let f = &self.field;
        if v.len() != f.size() {
            return Err(Error::DimensionMismatch {
                expected: f.size(),
                found: v.len(),
            });
        }
        if g.is_identity() {
            return Ok(v.to_vec());
        }
        if !g.is_regular_for_cayley(f) {
            // rho(g) = rho(g g0) rho(g0^{-1}), both factors regular
            let g0 = auxiliary_element(f, g)?;
            let inner = self.apply(&g0.inverse(f), v)?;
            return self.apply(&g.mul(f, &g0), &inner);
        }
        let c = self.bruhat_scalar(g)?;
        let mut out = self.apply_factorization(&bruhat_decompose(f, g), v);
        out.iter_mut().for_each(|z| *z *= c);
        Ok(out)
    }
}
