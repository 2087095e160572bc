//! Runtime verification suites: each check reports its largest observed error
//! against a tolerance.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::field::{Fp, PrimeField};
use crate::heisenberg::{h_mul, kernel_to_operator, pi_matrix, weyl_transform, HeisenbergElement};
use crate::linalg::{determinant, inner, max_abs_diff, unitarity_defect, OperatorMatrix, StateVector};
use crate::oscillator::{dot_integral_form, dot_transform, fast_dft, FastOscillator, RhoS};
use crate::sl2::{Mat2, Sl2};
use crate::spectral::{
    character_dims, dft_eigenvalue, dft_multiplicities, dft_multiplicities_closed_form,
    dims_closed_form, eigenbasis, numeric_multiplicities, projector, rho_w_multiplicities,
    rho_w_multiplicities_closed_form,
};
use crate::tori::{conjugator_s, nonsplit_torus, standard_torus, weyl_centralizer, MaximalTorus};
use crate::weil::{dft_constant, dft_matrix, kernel_sign, rho};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Heisenberg,
    Weil,
    Dft,
    Tori,
    Spectral,
    Multiplicities,
    Oscillator,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Heisenberg,
        Suite::Weil,
        Suite::Dft,
        Suite::Tori,
        Suite::Spectral,
        Suite::Multiplicities,
        Suite::Oscillator,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Heisenberg => "heisenberg",
            Suite::Weil => "weil",
            Suite::Dft => "dft",
            Suite::Tori => "tori",
            Suite::Spectral => "spectral",
            Suite::Multiplicities => "multiplicities",
            Suite::Oscillator => "oscillator",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite '{s}'"))
    }
}

/// Outcome of one check at one prime.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub p: u64,
    pub passed: bool,
    pub max_error: f64,
    pub tolerance: f64,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    pub seed: u64,
    pub dense_cap: Option<u64>,
    /// Added to `rho(w)[0, 0]` before the DFT relation check.
    pub perturb_rho_w: Option<f64>,
}

struct Recorder {
    p: u64,
    suite: Suite,
    out: Vec<CheckResult>,
}

impl Recorder {
    fn record(&mut self, name: &str, tolerance: f64, value: Result<f64>) {
        self.record_noted(name, tolerance, value.map(|e| (e, None)));
    }

    fn record_noted(&mut self, name: &str, tolerance: f64, value: Result<(f64, Option<String>)>) {
        let (max_error, note) = match value {
            Ok(v) => v,
            Err(e) => (f64::INFINITY, Some(e.to_string())),
        };
        self.out.push(CheckResult {
            name: format!("{}.{name}", self.suite),
            p: self.p,
            passed: max_error <= tolerance,
            max_error,
            tolerance,
            note,
        });
    }
}

fn random_sl2(rng: &mut impl Rng, f: &PrimeField) -> Sl2 {
    loop {
        let m = Mat2::new(
            f.from_u64(rng.gen_range(0..f.p())),
            f.from_u64(rng.gen_range(0..f.p())),
            f.from_u64(rng.gen_range(0..f.p())),
            f.from_u64(rng.gen_range(0..f.p())),
        );
        if let Ok(g) = Sl2::new(f, m) {
            return g;
        }
    }
}

fn random_h(rng: &mut impl Rng, f: &PrimeField) -> HeisenbergElement {
    HeisenbergElement::new(
        f.from_u64(rng.gen_range(0..f.p())),
        f.from_u64(rng.gen_range(0..f.p())),
        f.from_u64(rng.gen_range(0..f.p())),
    )
}

fn random_vector(rng: &mut impl Rng, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

fn mismatches(a: &[usize], b: &[usize]) -> f64 {
    a.iter().zip(b).filter(|(x, y)| x != y).count() as f64
}

fn tori(f: &PrimeField) -> [MaximalTorus; 3] {
    [standard_torus(f), weyl_centralizer(f), nonsplit_torus(f)]
}

fn heisenberg_suite(f: &PrimeField, rng: &mut ChaCha8Rng, r: &mut Recorder) {
    r.record("pi_homomorphism", 1e-10, {
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let (a, b) = (random_h(rng, f), random_h(rng, f));
            let lhs = pi_matrix(f, h_mul(f, a, b));
            let rhs = pi_matrix(f, a) * pi_matrix(f, b);
            worst = worst.max(max_abs_diff(lhs.as_slice(), rhs.as_slice()));
        }
        Ok(worst)
    });
    r.record("pi_unitary", 1e-10, Ok((0..20)
            .map(|_| unitarity_defect(&pi_matrix(f, random_h(rng, f))))
            .fold(0.0, f64::max)));
    r.record("weyl_round_trip", 1e-10, (|| {
        f.require_dense()?;
        let n = f.size();
        let a = OperatorMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let back = kernel_to_operator(f, &weyl_transform(f, &a));
        Ok(max_abs_diff(back.as_slice(), a.as_slice()))
    })());
}

fn weil_suite(f: &PrimeField, rng: &mut ChaCha8Rng, r: &mut Recorder) {
    r.record("rho_multiplicative", 1e-9, (|| {
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let (a, b) = (random_sl2(rng, f), random_sl2(rng, f));
            let lhs = rho(f, &a.mul(f, &b))?;
            let rhs = rho(f, &a)? * rho(f, &b)?;
            worst = worst.max(max_abs_diff(lhs.as_slice(), rhs.as_slice()));
        }
        Ok(worst)
    })());
    r.record("rho_intertwines_pi", 1e-9, (|| {
        let mut worst = 0.0f64;
        for _ in 0..10 {
            let (g, h) = (random_sl2(rng, f), random_h(rng, f));
            let rg = rho(f, &g)?;
            let lhs = &rg * pi_matrix(f, h) * rg.adjoint();
            let rhs = pi_matrix(f, g.act(f, h));
            worst = worst.max(max_abs_diff(lhs.as_slice(), rhs.as_slice()));
        }
        Ok(worst)
    })());
    r.record("rho_unitary", 1e-10, (|| {
        let mut worst = 0.0f64;
        for _ in 0..10 {
            worst = worst.max(unitarity_defect(&rho(f, &random_sl2(rng, f))?));
        }
        Ok(worst)
    })());
    r.record("det_rho_w", 1e-8, (|| {
        Ok((determinant(&rho(f, &Sl2::weyl(f))?) - 1.0).norm())
    })());
}

fn dft_suite(f: &PrimeField, opts: &VerifyOptions, rng: &mut ChaCha8Rng, r: &mut Recorder) {
    r.record("dft_equals_c_rho_w", 1e-9, (|| {
        let mut w = rho(f, &Sl2::weyl(f))?;
        if let Some(eps) = opts.perturb_rho_w {
            w[(0, 0)] += eps;
        }
        let c = dft_constant(f);
        Ok(max_abs_diff(dft_matrix(f)?.as_slice(), w.map(|z| z * c).as_slice()))
    })());
    r.record("dft_order_four", 1e-9, (|| {
        let d = dft_matrix(f)?;
        let d4 = &d * &d * &d * &d;
        Ok(max_abs_diff(d4.as_slice(), OperatorMatrix::identity(f.size(), f.size()).as_slice()))
    })());
    r.record("fast_dft_matches_dense", 1e-9, (|| {
        let x = random_vector(rng, f.size());
        let want = dft_matrix(f)? * StateVector::from_column_slice(&x);
        Ok(max_abs_diff(&fast_dft(&x), want.as_slice()))
    })());
}

fn tori_suite(f: &PrimeField, r: &mut Recorder) {
    let p = f.p();
    r.record("torus_orders", 0.0, {
        let mut bad = 0.0;
        for t in tori(f) {
            let want = if t.is_split() { p - 1 } else { p + 1 };
            if t.order() as u64 != want || !t.generator().pow(f, want).is_identity() {
                bad += 1.0;
            }
        }
        Ok(bad)
    });
    r.record("kernel_sign_on_tori", 0.0, (|| {
        let minus = Sl2::from_i64(f, -1, 0, 0, -1)?;
        let s_minus_one = f.legendre(f.neg(Fp::ONE));
        let mut bad = 0.0;
        for t in tori(f) {
            let sigma = t.quadratic_character();
            let st_minus = sigma.sign(&minus).unwrap();
            for g in &t.elements()[1..] {
                if s_minus_one * kernel_sign(f, g)? != st_minus * sigma.sign(g).unwrap() {
                    bad += 1.0;
                }
            }
        }
        Ok(bad)
    })());
    if p % 4 == 1 {
        r.record("conjugator_maps_tw_to_a", 0.0, (|| {
            let s = conjugator_s(f)?;
            let si = s.inverse(f);
            let a = standard_torus(f);
            Ok(weyl_centralizer(f)
                .elements()
                .iter()
                .filter(|g| !a.contains(&s.mul(f, g).mul(f, &si)))
                .count() as f64)
        })());
    }
}

fn spectral_suite(f: &PrimeField, r: &mut Recorder) {
    r.record("dims_match_closed_form", 0.0, (|| {
        let mut bad = 0.0;
        for t in tori(f) {
            let dims = character_dims(&t)?;
            let closed = (0..t.order())
                .map(|k| dims_closed_form(&t, k))
                .collect::<Result<Vec<_>>>()?;
            bad += mismatches(&dims, &closed);
            if dims.iter().sum::<usize>() != f.size() {
                bad += 1.0;
            }
        }
        Ok(bad)
    })());
    r.record("sigma_projector_idempotent", 1e-10, (|| {
        let t = weyl_centralizer(f);
        let pk = projector(&t, t.quadratic_character().index())?;
        Ok(max_abs_diff((&pk * &pk).as_slice(), pk.as_slice()))
    })());
    let basis = eigenbasis(&weyl_centralizer(f));
    r.record("eigenbasis_orthonormal", 1e-9, basis.clone().map(|b| {
        let m = b.matrix();
        let gram = m.adjoint() * &m;
        max_abs_diff(gram.as_slice(), OperatorMatrix::identity(f.size(), f.size()).as_slice())
    }));
    r.record("eigenbasis_dft_eigenvectors", 1e-8, basis.and_then(|b| {
        let d = dft_matrix(f)?;
        let mut worst = 0.0f64;
        for e in b.entries() {
            let mu = dft_eigenvalue(b.torus(), e.character).expect("w lies in T_w");
            for v in &e.vectors {
                worst = worst.max(max_abs_diff((&d * v).as_slice(), (v * mu).as_slice()));
            }
        }
        Ok(worst)
    }));
}

fn multiplicity_suite(f: &PrimeField, r: &mut Recorder) {
    let p = f.p();
    r.record("rho_w_multiplicities", 0.0, (|| {
        let m = rho_w_multiplicities(f)?;
        let numeric = numeric_multiplicities(&rho(f, &Sl2::weyl(f))?)?;
        let closed = rho_w_multiplicities_closed_form(p);
        Ok(mismatches(&m.as_array(), &numeric.as_array()) + mismatches(&m.as_array(), &closed.as_array()))
    })());
    r.record("dft_multiplicities", 0.0, (|| {
        let n = dft_multiplicities(f)?;
        let numeric = numeric_multiplicities(&dft_matrix(f)?)?;
        let closed = dft_multiplicities_closed_form(p);
        Ok(mismatches(&n.as_array(), &numeric.as_array()) + mismatches(&n.as_array(), &closed.as_array()))
    })());
}

fn oscillator_suite(f: &PrimeField, rng: &mut ChaCha8Rng, r: &mut Recorder) {
    r.record("integral_form_equals_direct", 1e-9, (|| {
        let mut worst = 0.0f64;
        for t in tori(f) {
            let basis = eigenbasis(&t)?;
            let x = random_vector(rng, f.size());
            let a = dot_transform(&basis, &x)?;
            let b = dot_integral_form(&basis, &x)?;
            worst = worst.max(max_abs_diff(&a.values, &b.values));
        }
        Ok(worst)
    })());
    if f.p() % 4 != 1 {
        return;
    }
    r.record("rho_s_preserves_norm", 1e-9, (|| {
        let x = random_vector(rng, f.size());
        let y = RhoS::new(f)?.apply(&x)?;
        Ok((crate::linalg::norm(&y) - crate::linalg::norm(&x)).abs())
    })());
    r.record("fot_matches_dense", 1e-8, (|| {
        let t = weyl_centralizer(f);
        let s = conjugator_s(f)?;
        let mut delta1 = StateVector::zeros(f.size());
        delta1[1] = Complex64::new(1.0, 0.0);
        let phi = rho(f, &s)?.adjoint() * delta1;
        let x = random_vector(rng, f.size());
        let fast = FastOscillator::new(f)?.transform(&x)?;
        let mut worst = 0.0f64;
        for k in 0..t.order() {
            let want = inner(&x, (projector(&t, k)? * &phi).as_slice());
            worst = worst.max((fast.values[k] - want).norm());
        }
        Ok(worst)
    })());
    r.record_noted("fot_singular_values", 1e-9, (|| {
        let n = f.size();
        let fast = FastOscillator::new(f)?;
        let mut m = OperatorMatrix::zeros(n - 1, n);
        for j in 0..n {
            let mut e = vec![Complex64::new(0.0, 0.0); n];
            e[j] = Complex64::new(1.0, 0.0);
            for (i, c) in fast.transform(&e)?.values.into_iter().enumerate() {
                m[(i, j)] = c;
            }
        }
        let scale = ((n - 1) as f64).sqrt();
        let sv = nalgebra::SymmetricEigen::new(&m * m.adjoint()).eigenvalues;
        let norm = sv.iter().fold(0.0f64, |a, &x| a.max(x.max(0.0).sqrt()));
        let worst = sv.iter().fold(0.0f64, |a, &x| a.max((x.max(0.0).sqrt() * scale - 1.0).abs()));
        Ok((worst, Some(format!("measured operator norm {norm:.12}, sqrt(p-1) * norm = {:.12}", norm * scale))))
    })());
}

/// Runs `suites` at prime `p`.
pub fn run_prime(p: u64, suites: &[Suite], opts: &VerifyOptions) -> Result<Vec<CheckResult>> {
    let mut f = PrimeField::new(p)?;
    if let Some(cap) = opts.dense_cap {
        f = f.with_dense_cap(cap);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ p.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut r = Recorder {
        p,
        suite: Suite::Heisenberg,
        out: Vec::new(),
    };
    for &suite in suites {
        r.suite = suite;
        match suite {
            Suite::Heisenberg => heisenberg_suite(&f, &mut rng, &mut r),
            Suite::Weil => weil_suite(&f, &mut rng, &mut r),
            Suite::Dft => dft_suite(&f, opts, &mut rng, &mut r),
            Suite::Tori => tori_suite(&f, &mut r),
            Suite::Spectral => spectral_suite(&f, &mut r),
            Suite::Multiplicities => multiplicity_suite(&f, &mut r),
            Suite::Oscillator => oscillator_suite(&f, &mut rng, &mut r),
        }
    }
    Ok(r.out)
}

/// Runs `suites` at every prime of `primes`.
pub fn run(primes: &[u64], suites: &[Suite], opts: &VerifyOptions) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for &p in primes {
        out.extend(run_prime(p, suites, opts)?);
    }
    Ok(out)
}

/// `true` when every check passed.
pub fn all_passed(results: &[CheckResult]) -> bool {
    results.iter().all(|c| c.passed)
}
