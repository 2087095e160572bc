//! The discrete oscillator transform and its fast variant for split `T_w`.
//!
//! `Theta_T[f](chi) = <f, phi_chi>` pairs a signal with the canonical character
//! vectors. Equivalently `Theta_T = M_T o m_T`, a Mellin transform of the
//! matrix coefficient `g -> <f, rho(g^{-1}) phi>`.
//!
//! For `p = 1 mod 4` the conjugator `s` carries `T_w` onto the diagonal torus,
//! so with `phi = rho(s)^{-1} delta_1`
//!
//! ```text
//! Theta[f](Ad_s(chi)) = (1/(p-1)) sum_a sigma(a) chi(a) rho(s)[f](a),
//! ```
//!
//! which costs one fast Weil operator plus one FFT of length `p - 1`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::{ChirpZ, Sign};
use crate::field::{Fp, PrimeField};
use crate::linalg::{inner, StateVector, ZERO};
use crate::sl2::Sl2;
use crate::spectral::{BasisLabel, SpectralBasis};
use crate::tori::{weyl_centralizer_generator, MaximalTorus};
use crate::weil::FastWeil;

pub use crate::fft::fast_dft;
pub use crate::tori::conjugator_s;

/// Transform coefficients, one per label.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientVector {
    pub labels: Vec<BasisLabel>,
    pub values: Vec<Complex64>,
}

impl CoefficientVector {
    /// Coefficients labeled by character index alone.
    pub fn from_characters(characters: &[usize], values: Vec<Complex64>) -> Self {
        Self {
            labels: characters
                .iter()
                .map(|&character| BasisLabel { character, slot: 0 })
                .collect(),
            values,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The value at `character` (slot 0).
    pub fn get(&self, character: usize) -> Option<Complex64> {
        self.labels
            .iter()
            .position(|l| l.character == character && l.slot == 0)
            .map(|i| self.values[i])
    }
}

/// A function on a torus, indexed by the generator power `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusFunction {
    pub values: Vec<Complex64>,
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// `Theta_T[f](chi) = <f, phi_chi>` over the spectral support.
pub fn dot_transform(basis: &SpectralBasis, f: &[Complex64]) -> Result<CoefficientVector> {
    check_len(basis.p() as usize, f.len())?;
    let support = basis.support();
    let values = basis
        .entries()
        .iter()
        .map(|e| inner(f, e.vectors[0].as_slice()))
        .collect();
    Ok(CoefficientVector::from_characters(&support, values))
}

/// Coefficients of `f` against every basis vector.
pub fn full_analysis(basis: &SpectralBasis, f: &[Complex64]) -> Result<CoefficientVector> {
    check_len(basis.p() as usize, f.len())?;
    Ok(CoefficientVector {
        labels: basis.labels(),
        values: basis.vectors().map(|v| inner(f, v.as_slice())).collect(),
    })
}

/// `sum_label a_label phi_label`.
pub fn full_synthesis(basis: &SpectralBasis, a: &CoefficientVector) -> Result<StateVector> {
    if a.labels != basis.labels() {
        return Err(Error::LabelMismatch);
    }
    let mut out = StateVector::zeros(basis.p() as usize);
    for (v, c) in basis.vectors().zip(&a.values) {
        out += v * *c;
    }
    Ok(out)
}

/// `M_T[F](chi_k) = (1/#T) sum_j conj(chi_k(g^j)) F(g^j)` for every `k`.
pub fn mellin(t: &MaximalTorus, func: &TorusFunction) -> Result<Vec<Complex64>> {
    check_len(t.order(), func.values.len())?;
    let scale = 1.0 / t.order() as f64;
    Ok(ChirpZ::new(t.order(), Sign::Negative)
        .transform(&func.values)
        .into_iter()
        .map(|z| z * scale)
        .collect())
}

/// `m_T[f](g) = <f, rho(g^{-1}) phi>` for `g` running over generator powers.
pub fn matrix_coeff(t: &MaximalTorus, phi: &[Complex64], f: &[Complex64]) -> Result<TorusFunction> {
    let field = t.field();
    check_len(field.size(), phi.len())?;
    check_len(field.size(), f.len())?;
    let weil = FastWeil::new(field);
    let values = t
        .elements()
        .iter()
        .map(|g| Ok(inner(f, &weil.apply(&g.inverse(field), phi)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(TorusFunction { values })
}

/// `<f, P_chi phi>` for every character, computed as `M_T o m_T`.
pub fn theta_with_test_vector(t: &MaximalTorus, phi: &[Complex64], f: &[Complex64]) -> Result<Vec<Complex64>> {
    mellin(t, &matrix_coeff(t, phi, f)?)
}

/// `Theta_T` through the Mellin transform of the matrix coefficient against
/// `phi = sum_chi phi_chi`.
pub fn dot_integral_form(basis: &SpectralBasis, f: &[Complex64]) -> Result<CoefficientVector> {
    let t = basis.torus();
    let mut phi = StateVector::zeros(basis.p() as usize);
    for e in basis.entries() {
        phi += &e.vectors[0];
    }
    let all = theta_with_test_vector(t, phi.as_slice(), f)?;
    let support = basis.support();
    let values = support.iter().map(|&k| all[k]).collect();
    Ok(CoefficientVector::from_characters(&support, values))
}

fn require_split_weyl_torus(f: &PrimeField) -> Result<()> {
    if f.p() % 4 != 1 {
        return Err(Error::Unsupported(format!(
            "p = {} is 3 mod 4: T_w is non-split and no fast oscillator transform is known; \
             use the dense transform instead",
            f.p()
        )));
    }
    Ok(())
}

/// Fast application of `rho(s)` for the conjugator `s`.
pub struct RhoS {
    weil: FastWeil,
    s: Sl2,
}

impl RhoS {
    pub fn new(f: &PrimeField) -> Result<Self> {
        require_split_weyl_torus(f)?;
        Ok(Self {
            weil: FastWeil::new(f),
            s: conjugator_s(f)?,
        })
    }

    pub fn conjugator(&self) -> Sl2 {
        self.s
    }

    /// `rho(s) f` as scale, chirp, DFT, chirp, times the pinned scalar.
    pub fn apply(&self, f: &[Complex64]) -> Result<Vec<Complex64>> {
        self.weil.apply(&self.s, f)
    }
}

/// One-shot `rho(s) f`.
pub fn rho_s_fast(field: &PrimeField, f: &[Complex64]) -> Result<Vec<Complex64>> {
    RhoS::new(field)?.apply(f)
}

/// For each character index `k` of `A`, the index of `Ad_s(chi_k) = chi_k(s . s^{-1})` in `T_w`.
pub fn ad_s_labels(f: &PrimeField, tw: &MaximalTorus, a: &MaximalTorus) -> Result<Vec<usize>> {
    require_split_weyl_torus(f)?;
    let s = conjugator_s(f)?;
    let image = s.mul(f, &tw.generator()).mul(f, &s.inverse(f));
    let e = a.discrete_log(&image).ok_or(Error::NumericInconsistency {
        what: "s T_w s^-1 is not the diagonal torus".into(),
        residual: f64::INFINITY,
    })?;
    let n = a.order();
    Ok((0..n).map(|k| (k * e) % n).collect())
}

/// The fast oscillator transform for `p = 1 mod 4`, planned once per prime.
pub struct FastOscillator {
    rho_s: RhoS,
    mellin: ChirpZ,
    powers: Vec<Fp>,
    labels: Vec<usize>,
}

impl FastOscillator {
    pub fn new(f: &PrimeField) -> Result<Self> {
        let rho_s = RhoS::new(f)?;
        let r = f.primitive_root();
        let mut powers = Vec::with_capacity(f.size() - 1);
        let mut x = Fp::ONE;
        for _ in 0..f.size() - 1 {
            powers.push(x);
            x = f.mul(x, r);
        }
        // s g_w s^{-1} = diag(r^e, r^{-e}) pulls chi_k of A back to chi_{ke} of T_w
        let s = rho_s.conjugator();
        let image = s.mul(f, &weyl_centralizer_generator(f)).mul(f, &s.inverse(f));
        let e = powers
            .iter()
            .position(|&y| y == image.matrix().a)
            .ok_or(Error::NumericInconsistency {
                what: "s T_w s^-1 is not the diagonal torus".into(),
                residual: f64::INFINITY,
            })?;
        let n = f.size() - 1;
        Ok(Self {
            rho_s,
            mellin: ChirpZ::new(n, Sign::Positive),
            powers,
            labels: (0..n).map(|k| (k * e) % n).collect(),
        })
    }

    /// `T_w` character index of each output coefficient.
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// `Theta[f](chi)` for every character `chi` of `T_w`, in `O(p log p)`.
    pub fn transform(&self, f: &[Complex64]) -> Result<CoefficientVector> {
        let g = self.rho_s.apply(f)?;
        let n = self.powers.len();
        // sigma(r^j) = (-1)^j
        let sampled: Vec<Complex64> = self
            .powers
            .iter()
            .enumerate()
            .map(|(j, a)| if j % 2 == 0 { g[a.index()] } else { -g[a.index()] })
            .collect();
        let scale = 1.0 / n as f64;
        let coeffs = self.mellin.transform(&sampled);
        let mut values = vec![ZERO; n];
        for (k, z) in coeffs.into_iter().enumerate() {
            values[self.labels[k]] = z * scale;
        }
        let characters: Vec<usize> = (0..n).collect();
        Ok(CoefficientVector::from_characters(&characters, values))
    }
}

/// One-shot fast oscillator transform.
pub fn fot(field: &PrimeField, f: &[Complex64]) -> Result<CoefficientVector> {
    check_len(field.size(), f.len())?;
    FastOscillator::new(field)?.transform(f)
}

/// The test vector `phi = rho(s)^{-1} delta_1` of the fast transform.
pub fn fot_test_vector(f: &PrimeField) -> Result<Vec<Complex64>> {
    require_split_weyl_torus(f)?;
    let s = conjugator_s(f)?;
    let mut delta = vec![ZERO; f.size()];
    delta[1] = Complex64::new(1.0, 0.0);
    FastWeil::new(f).apply(&s.inverse(f), &delta)
}
