//! Character spaces of a torus, the canonical eigenbasis and the DFT
//! multiplicity tables.
//!
//! For a maximal torus `T` the Weil representation splits as
//! `H = sum_chi H_chi` with projectors `P_chi = (1/#T) sum_g conj(chi(g)) rho(g)`.
//! For split `T`, `dim H_chi = 1` except `dim H_{sigma_T} = 2`; for non-split `T`
//! it is `1` except `dim H_{sigma_T} = 0`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::{ChirpZ, Sign};
use crate::field::{Fp, PrimeField};
use crate::linalg::{count_fourth_roots, inner, unitary_eigenvalues, OperatorMatrix, StateVector, ZERO};
use crate::sl2::Sl2;
use crate::tori::{weyl_centralizer, MaximalTorus};
use crate::weil::{dft_constant, rho, rho_trace, FastWeil};

/// Phase convention for the eigenbasis vectors.
pub const PHASE_CONVENTION: &str = "projected deltas in index order, Gram-Schmidt, \
first coordinate with modulus > 1e-8 real positive";

const TRACE_GATE: f64 = 1e-6;
const SNAP_GATE: f64 = 1e-6;
const NEGLIGIBLE: f64 = 1e-8;

/// `P_chi_k` as a dense matrix.
pub fn projector(t: &MaximalTorus, k: usize) -> Result<OperatorMatrix> {
    let f = t.field();
    f.require_dense()?;
    let n = f.size();
    let mut acc = OperatorMatrix::zeros(n, n);
    for (j, g) in t.elements().iter().enumerate() {
        let c = t.character_value(k, j).conj();
        acc += rho(f, g)? * c;
    }
    Ok(acc / Complex64::new(t.order() as f64, 0.0))
}

/// All projectors `P_chi_0, ..., P_chi_{#T - 1}`, sharing the `rho(g)` evaluations.
pub fn projectors(t: &MaximalTorus) -> Result<Vec<OperatorMatrix>> {
    let f = t.field();
    f.require_dense()?;
    let n = f.size();
    let order = t.order();
    let mut out = vec![OperatorMatrix::zeros(n, n); order];
    for (j, g) in t.elements().iter().enumerate() {
        let r = rho(f, g)?;
        for (k, p) in out.iter_mut().enumerate() {
            *p += &r * t.character_value(k, j).conj();
        }
    }
    let scale = Complex64::new(1.0 / order as f64, 0.0);
    out.iter_mut().for_each(|p| *p *= scale);
    Ok(out)
}

/// `dim H_chi_k = Tr(P_chi_k)` for every `k`, rounded with a residual gate.
pub fn character_dims(t: &MaximalTorus) -> Result<Vec<usize>> {
    let f = t.field();
    let traces = t
        .elements()
        .iter()
        .map(|g| rho_trace(f, g))
        .collect::<Result<Vec<_>>>()?;
    (0..t.order())
        .map(|k| {
            let tr: Complex64 = traces
                .iter()
                .enumerate()
                .map(|(j, x)| x * t.character_value(k, j).conj())
                .sum::<Complex64>()
                / t.order() as f64;
            round_gated(tr, "projector trace")
        })
        .collect()
}

fn round_gated(z: Complex64, what: &str) -> Result<usize> {
    let r = z.re.round();
    let residual = (z - Complex64::new(r, 0.0)).norm();
    if residual >= TRACE_GATE || r < 0.0 {
        return Err(Error::NumericInconsistency {
            what: what.to_string(),
            residual,
        });
    }
    Ok(r as usize)
}

/// `dim H_chi_k` from the character sum
/// `(sigma(-1) sigma_T(-1) sum_{g != I} conj(chi(g)) sigma_T(g) + p) / #T`.
pub fn dims_closed_form(t: &MaximalTorus, k: usize) -> Result<usize> {
    let f = t.field();
    let half = t.order() / 2;
    let minus = Sl2::new(f, crate::sl2::Mat2::identity().add_scalar(f, f.elem(-2)))?;
    let j_minus = t.discrete_log(&minus).expect("-I lies in every maximal torus");
    let sign = f.legendre(f.neg(Fp::ONE)) as f64 * t.character_value(half, j_minus).re;
    let sum: Complex64 = (1..t.order())
        .map(|j| t.character_value(k, j).conj() * t.character_value(half, j))
        .sum();
    round_gated(
        (sum * sign + f.p() as f64) / t.order() as f64,
        "closed-form dimension",
    )
}

/// The character spaces of one character.
#[derive(Clone, Debug)]
pub struct SpectralEntry {
    pub character: usize,
    pub vectors: Vec<StateVector>,
}

/// An orthonormal basis of `C(F_p)` adapted to the character spaces of a torus.
#[derive(Clone, Debug)]
pub struct SpectralBasis {
    torus: MaximalTorus,
    entries: Vec<SpectralEntry>,
    dims: Vec<usize>,
}

/// Position of a vector in a [`SpectralBasis`]: its character and its slot
/// within `H_chi` (slot 1 only occurs for `sigma_T` of a split torus).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisLabel {
    pub character: usize,
    pub slot: usize,
}

impl SpectralBasis {
    pub fn torus(&self) -> &MaximalTorus {
        &self.torus
    }

    pub fn p(&self) -> u64 {
        self.torus.field().p()
    }

    /// Entries for the spectral support, ordered by character index.
    pub fn entries(&self) -> &[SpectralEntry] {
        &self.entries
    }

    /// `dim H_chi_k` for every `k`.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Characters with `H_chi != 0`.
    pub fn support(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.character).collect()
    }

    /// The representative `phi_chi`, the first vector of its entry.
    pub fn representative(&self, k: usize) -> Option<&StateVector> {
        self.entries
            .iter()
            .find(|e| e.character == k)
            .and_then(|e| e.vectors.first())
    }

    pub fn labels(&self) -> Vec<BasisLabel> {
        self.entries
            .iter()
            .flat_map(|e| {
                (0..e.vectors.len()).map(move |slot| BasisLabel {
                    character: e.character,
                    slot,
                })
            })
            .collect()
    }

    pub fn vectors(&self) -> impl Iterator<Item = &StateVector> {
        self.entries.iter().flat_map(|e| e.vectors.iter())
    }

    /// The basis as columns of a `p x p` matrix, in label order.
    pub fn matrix(&self) -> OperatorMatrix {
        let cols: Vec<StateVector> = self.vectors().cloned().collect();
        OperatorMatrix::from_columns(&cols)
    }

    pub fn len(&self) -> usize {
        self.entries.iter().map(|e| e.vectors.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `P_chi delta_j` for every character at once: `rho(g) delta_j` for all `g`
/// through the fast Weil action, then one Mellin transform per coordinate.
fn projected_delta(t: &MaximalTorus, weil: &FastWeil, mellin: &ChirpZ, j: usize) -> Result<Vec<StateVector>> {
    let f = t.field();
    let n = f.size();
    let order = t.order();
    let mut delta = vec![ZERO; n];
    delta[j] = Complex64::new(1.0, 0.0);
    let orbit = t
        .elements()
        .iter()
        .map(|g| weil.apply(g, &delta))
        .collect::<Result<Vec<_>>>()?;
    let mut out = vec![StateVector::zeros(n); order];
    let scale = 1.0 / order as f64;
    let mut column = vec![ZERO; order];
    for x in 0..n {
        for (m, v) in orbit.iter().enumerate() {
            column[m] = v[x];
        }
        for (k, z) in mellin.transform(&column).into_iter().enumerate() {
            out[k][x] = z * scale;
        }
    }
    Ok(out)
}

fn fix_phase(v: &mut StateVector) {
    if let Some(z) = v.iter().find(|z| z.norm() > NEGLIGIBLE).copied() {
        let u = z.conj() / z.norm();
        v.iter_mut().for_each(|x| *x *= u);
    }
}

/// The canonical eigenbasis of a torus.
pub fn eigenbasis(t: &MaximalTorus) -> Result<SpectralBasis> {
    let f = t.field();
    f.require_dense()?;
    let dims = character_dims(t)?;
    let total: usize = dims.iter().sum();
    if total != f.size() {
        return Err(Error::DimensionMismatch {
            expected: f.size(),
            found: total,
        });
    }
    let weil = FastWeil::new(f);
    let mellin = ChirpZ::new(t.order(), Sign::Negative);
    let mut found: Vec<Vec<StateVector>> = vec![Vec::new(); t.order()];
    let mut missing = total;
    for j in 0..f.size() {
        if missing == 0 {
            break;
        }
        let images = projected_delta(t, &weil, &mellin, j)?;
        for (k, mut v) in images.into_iter().enumerate() {
            if found[k].len() >= dims[k] {
                continue;
            }
            for u in &found[k] {
                let c = inner(v.as_slice(), u.as_slice());
                v -= u * c;
            }
            let nv = v.norm();
            if nv > NEGLIGIBLE {
                v /= Complex64::new(nv, 0.0);
                fix_phase(&mut v);
                found[k].push(v);
                missing -= 1;
            }
        }
    }
    if missing != 0 {
        return Err(Error::NumericInconsistency {
            what: "eigenbasis spans fewer than p vectors".into(),
            residual: missing as f64,
        });
    }
    let entries = found
        .into_iter()
        .enumerate()
        .filter(|(_, v)| !v.is_empty())
        .map(|(character, vectors)| SpectralEntry { character, vectors })
        .collect();
    Ok(SpectralBasis {
        torus: t.clone(),
        entries,
        dims,
    })
}

/// Multiplicities of the eigenvalues `1, -1, i, -i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct MultiplicityTable {
    pub m_plus1: usize,
    pub m_minus1: usize,
    pub m_plus_i: usize,
    pub m_minus_i: usize,
}

impl MultiplicityTable {
    pub fn from_array(a: [usize; 4]) -> Self {
        Self {
            m_plus1: a[0],
            m_minus1: a[1],
            m_plus_i: a[2],
            m_minus_i: a[3],
        }
    }

    /// Entries in the order `1, -1, i, -i`.
    pub fn as_array(&self) -> [usize; 4] {
        [self.m_plus1, self.m_minus1, self.m_plus_i, self.m_minus_i]
    }

    pub fn total(&self) -> usize {
        self.as_array().iter().sum()
    }
}

/// Index of a fourth root of unity in the order `1, -1, i, -i`.
pub fn fourth_root_slot(z: Complex64) -> usize {
    const ROOTS: [Complex64; 4] = [
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, -1.0),
    ];
    (0..4)
        .min_by(|&a, &b| (z - ROOTS[a]).norm().total_cmp(&(z - ROOTS[b]).norm()))
        .unwrap()
}

/// Slot of `C * lambda` given the slot of `lambda`, for `C = i^e`.
fn rotate_slot(slot: usize, e: u64) -> usize {
    // 1 -> i -> -1 -> -i -> 1
    const CYCLE: [usize; 4] = [0, 2, 1, 3];
    let pos = CYCLE.iter().position(|&s| s == slot).unwrap();
    CYCLE[(pos + (e % 4) as usize) % 4]
}

/// Multiplicities of `rho(w)` as `sum_{chi(w) = lambda} dim H_chi` over `T_w`.
pub fn rho_w_multiplicities(f: &PrimeField) -> Result<MultiplicityTable> {
    let t = weyl_centralizer(f);
    let dims = character_dims(&t)?;
    let jw = t.discrete_log(&Sl2::weyl(f)).expect("w lies in T_w");
    let mut m = [0usize; 4];
    for (k, d) in dims.iter().enumerate() {
        m[fourth_root_slot(t.character_value(k, jw))] += d;
    }
    Ok(MultiplicityTable::from_array(m))
}

/// Multiplicities of the DFT, from `F = C rho(w)`: `n_{C lambda} = m_lambda`.
pub fn dft_multiplicities(f: &PrimeField) -> Result<MultiplicityTable> {
    Ok(relabel_by_dft_constant(f.p(), &rho_w_multiplicities(f)?))
}

fn relabel_by_dft_constant(p: u64, m: &MultiplicityTable) -> MultiplicityTable {
    let e = (p - 1) / 2;
    let mut n = [0usize; 4];
    for (slot, v) in m.as_array().into_iter().enumerate() {
        n[rotate_slot(slot, e)] = v;
    }
    MultiplicityTable::from_array(n)
}

/// Closed-form multiplicities of `rho(w)` by `p mod 8`.
pub fn rho_w_multiplicities_closed_form(p: u64) -> MultiplicityTable {
    let l = (p / 4) as usize;
    MultiplicityTable::from_array(match p % 8 {
        1 => [l + 1, l, l, l],
        5 => [l, l + 1, l, l],
        3 => [l + 1, l, l + 1, l + 1],
        _ => [l, l + 1, l + 1, l + 1],
    })
}

/// Closed-form multiplicities of the DFT by `p mod 4`.
pub fn dft_multiplicities_closed_form(p: u64) -> MultiplicityTable {
    let l = (p / 4) as usize;
    MultiplicityTable::from_array(if p % 4 == 1 {
        [l + 1, l, l, l]
    } else {
        [l + 1, l + 1, l + 1, l]
    })
}

/// Eigenvalue counts of a unitary operator with spectrum in `{1, -1, i, -i}`.
pub fn numeric_multiplicities(a: &OperatorMatrix) -> Result<MultiplicityTable> {
    let (values, residual) = unitary_eigenvalues(a);
    if residual >= SNAP_GATE {
        return Err(Error::NumericInconsistency {
            what: "eigenvector residual".into(),
            residual,
        });
    }
    let (counts, dist) = count_fourth_roots(&values);
    if dist >= SNAP_GATE {
        return Err(Error::NumericInconsistency {
            what: "eigenvalue snap".into(),
            residual: dist,
        });
    }
    Ok(MultiplicityTable::from_array(counts))
}

/// The DFT eigenvalue `C chi(w)` of the `T_w` character `chi_k`.
pub fn dft_eigenvalue(t: &MaximalTorus, k: usize) -> Option<Complex64> {
    let f = t.field();
    let jw = t.discrete_log(&Sl2::weyl(f))?;
    Some(dft_constant(f) * t.character_value(k, jw))
}
