//! Acceptance suite. Runs every criterion at its stated tolerance and prints
//! one PASS/FAIL line per criterion.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use oscillator_core::field::odd_primes_in;
use oscillator_core::heisenberg::{kernel_to_operator, weyl_transform, HeisenbergElement};
use oscillator_core::linalg::{determinant, inner, max_abs_diff, unitarity_defect};
use oscillator_core::oscillator::{
    conjugator_s, dot_integral_form, dot_transform, FastOscillator,
};
use oscillator_core::spectral::{
    character_dims, dft_multiplicities, dims_closed_form, eigenbasis, numeric_multiplicities,
    projectors, rho_w_multiplicities,
};
use oscillator_core::tori::{nonsplit_torus, standard_torus, weyl_centralizer, MaximalTorus};
use oscillator_core::weil::{dft_matrix, kernel_sign, rho};
use oscillator_core::{OperatorMatrix, PrimeField, Sl2, StateVector};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn field(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

fn i_pow(k: u64) -> Complex64 {
    [ONE, Complex64::new(0.0, 1.0), -ONE, Complex64::new(0.0, -1.0)][(k % 4) as usize]
}

/// `(1/sqrt p) exp(2 pi i x y / p)`, built without the library.
fn dft_oracle(p: u64) -> OperatorMatrix {
    let n = p as usize;
    let s = 1.0 / (p as f64).sqrt();
    OperatorMatrix::from_fn(n, n, |y, x| {
        Complex64::from_polar(s, 2.0 * PI * ((x * y) % n) as f64 / p as f64)
    })
}

/// `pi(t, w, z) f(x) = exp(2 pi i (z + w x + w t / 2) / p) f(x + t)`, built without the library.
fn pi_oracle(p: u64, t: u64, w: u64, z: u64) -> OperatorMatrix {
    let n = p as usize;
    let half = p.div_ceil(2);
    let mut m = OperatorMatrix::zeros(n, n);
    for x in 0..p {
        let phase = (z + w * x + w * t % p * half) % p;
        m[(x as usize, ((x + t) % p) as usize)] =
            Complex64::from_polar(1.0, 2.0 * PI * phase as f64 / p as f64);
    }
    m
}

fn legendre(a: u64, p: u64) -> i8 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    let mut r = 1u64;
    let (mut b, mut e) = (a, (p - 1) / 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    if r == 1 { 1 } else { -1 }
}

fn all_tori(f: &PrimeField) -> [MaximalTorus; 3] {
    [standard_torus(f), weyl_centralizer(f), nonsplit_torus(f)]
}

fn random_vector(rng: &mut impl Rng, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

fn random_sl2(rng: &mut impl Rng, f: &PrimeField) -> Sl2 {
    let p = f.p() as i64;
    loop {
        let (a, b, c, d) = (
            rng.gen_range(0..p),
            rng.gen_range(0..p),
            rng.gen_range(0..p),
            rng.gen_range(0..p),
        );
        if let Ok(g) = Sl2::from_i64(f, a, b, c, d) {
            return g;
        }
    }
}

fn criterion_1() -> Outcome {
    let mut worst = 0.0f64;
    for p in odd_primes_in(3, 101) {
        let f = field(p);
        let oracle = dft_oracle(p);
        let c = i_pow((p - 1) / 2);
        let w = rho(&f, &Sl2::weyl(&f)).unwrap().map(|z| z * c);
        worst = worst
            .max(max_abs_diff(oracle.as_slice(), w.as_slice()))
            .max(max_abs_diff(oracle.as_slice(), dft_matrix(&f).unwrap().as_slice()));
    }
    outcome(worst <= 1e-9, format!("max |F - C rho(w)| = {worst:.2e} (tol 1e-9)"))
}

fn criterion_2() -> Outcome {
    let mut checked = 0usize;
    let mut bad = Vec::new();
    for p in odd_primes_in(3, 101) {
        let f = field(p);
        for t in all_tori(&f) {
            let n = t.order();
            let traces: Vec<Complex64> = t
                .elements()
                .iter()
                .map(|g| rho(&f, g).unwrap().trace())
                .collect();
            let dims = character_dims(&t).unwrap();
            for k in 0..n {
                let tr: Complex64 = traces
                    .iter()
                    .enumerate()
                    .map(|(j, x)| x * Complex64::from_polar(1.0, -2.0 * PI * ((k * j) % n) as f64 / n as f64))
                    .sum::<Complex64>()
                    / n as f64;
                let rounded = tr.re.round();
                let expected = match (k == n / 2, t.is_split()) {
                    (false, _) => 1.0,
                    (true, true) => 2.0,
                    (true, false) => 0.0,
                };
                let closed = dims_closed_form(&t, k).unwrap() as f64;
                if (tr - rounded).norm() >= 1e-6
                    || rounded != expected
                    || closed != expected
                    || dims[k] as f64 != expected
                {
                    bad.push(format!("p={p} {} k={k}", t.kind()));
                }
                checked += 1;
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("{checked} character spaces checked, {} mismatches {:?}", bad.len(), bad),
    )
}

/// Multiplicities of `rho(w)` in the order `1, -1, i, -i`, with `p = 4l + r`.
fn m_closed(p: u64) -> [usize; 4] {
    let l = (p / 4) as usize;
    match p % 8 {
        1 => [l + 1, l, l, l],
        5 => [l, l + 1, l, l],
        3 => [l + 1, l, l + 1, l + 1],
        _ => [l, l + 1, l + 1, l + 1],
    }
}

/// Multiplicities of the DFT in the order `1, -1, i, -i`.
fn n_closed(p: u64) -> [usize; 4] {
    let l = (p / 4) as usize;
    if p % 4 == 1 {
        [l + 1, l, l, l]
    } else {
        [l + 1, l + 1, l + 1, l]
    }
}

fn criterion_3() -> Outcome {
    let mut bad = Vec::new();
    let mut swapped_variant_misses = 0;
    let primes = odd_primes_in(3, 199);
    for &p in &primes {
        let f = field(p);
        let m = rho_w_multiplicities(&f).unwrap().as_array();
        let n = dft_multiplicities(&f).unwrap().as_array();
        let n_num = numeric_multiplicities(&dft_oracle(p)).unwrap().as_array();
        let m_num = numeric_multiplicities(&rho(&f, &Sl2::weyl(&f)).unwrap()).unwrap().as_array();
        if m != m_closed(p) || n != n_closed(p) || n != n_num || m != m_num {
            bad.push(p);
        }
        let mut swapped = m_closed(p);
        if p % 4 == 3 {
            swapped.swap(0, 1);
            if swapped != m_num {
                swapped_variant_misses += 1;
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{} primes, mismatching primes {:?}; note: the variant with m1 and m-1 exchanged \
             for p = 3 mod 4 disagrees with the numeric counts at {} primes",
            primes.len(),
            bad,
            swapped_variant_misses
        ),
    )
}

fn criterion_4() -> Outcome {
    let (mut worst_f, mut worst_w) = (0.0f64, 0.0f64);
    for p in odd_primes_in(3, 101) {
        let f = field(p);
        let want = i_pow(p * (p - 1) / 2);
        worst_f = worst_f.max((determinant(&dft_oracle(p)) - want).norm());
        worst_w = worst_w.max((determinant(&rho(&f, &Sl2::weyl(&f)).unwrap()) - ONE).norm());
    }
    outcome(
        worst_f <= 1e-6 && worst_w <= 1e-6,
        format!("max |det F - i^(p(p-1)/2)| = {worst_f:.2e}, max |det rho(w) - 1| = {worst_w:.2e} (tol 1e-6)"),
    )
}

fn criterion_5() -> Outcome {
    let mut checked = 0usize;
    let mut bad = 0usize;
    for p in odd_primes_in(3, 101) {
        let f = field(p);
        let minus = Sl2::from_i64(&f, -1, 0, 0, -1).unwrap();
        for t in all_tori(&f) {
            let sigma_t = |g: &Sl2| if t.discrete_log(g).unwrap() % 2 == 0 { 1i8 } else { -1 };
            let rhs_minus = sigma_t(&minus);
            for g in &t.elements()[1..] {
                // det(kappa(g) + I) = 4 / det(g - I) = 4 / (2 - tr g)
                let tr = g.matrix().trace(&f).value();
                let lhs = legendre(2 + p - tr, p);
                let via_kernel = legendre(p - 1, p) * kernel_sign(&f, g).unwrap();
                if lhs != rhs_minus * sigma_t(g) || via_kernel != lhs {
                    bad += 1;
                }
                checked += 1;
            }
        }
    }
    outcome(bad == 0, format!("{checked} torus elements, {bad} failures (exact)"))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut mult, mut inter, mut unit, mut weyl) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for p in [5u64, 7, 11, 13] {
        let f = field(p);
        for _ in 0..200 {
            let (a, b) = (random_sl2(&mut rng, &f), random_sl2(&mut rng, &f));
            let (ra, rb) = (rho(&f, &a).unwrap(), rho(&f, &b).unwrap());
            let rab = rho(&f, &a.mul(&f, &b)).unwrap();
            mult = mult.max(max_abs_diff(rab.as_slice(), (&ra * &rb).as_slice()));
            unit = unit.max(unitarity_defect(&ra)).max(unitarity_defect(&rb));
        }
        for _ in 0..100 {
            let g = random_sl2(&mut rng, &f);
            let (t, w, z) = (rng.gen_range(0..p), rng.gen_range(0..p), rng.gen_range(0..p));
            let gm = g.matrix();
            let (t2, w2) = (
                (gm.a.value() * t + gm.b.value() * w) % p,
                (gm.c.value() * t + gm.d.value() * w) % p,
            );
            let rg = rho(&f, &g).unwrap();
            let pi_h = pi_oracle(p, t, w, z);
            let lhs = &rg * &pi_h * rg.adjoint();
            inter = inter.max(max_abs_diff(lhs.as_slice(), pi_oracle(p, t2, w2, z).as_slice()));
            unit = unit.max(unitarity_defect(&pi_h)).max(unitarity_defect(&rg));
            let lib = oscillator_core::heisenberg::pi_matrix(
                &f,
                HeisenbergElement::new(f.from_u64(t), f.from_u64(w), f.from_u64(z)),
            );
            inter = inter.max(max_abs_diff(lib.as_slice(), pi_h.as_slice()));
        }
        for _ in 0..10 {
            let n = p as usize;
            let a = OperatorMatrix::from_fn(n, n, |_, _| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let back = kernel_to_operator(&f, &weyl_transform(&f, &a));
            weyl = weyl.max(max_abs_diff(back.as_slice(), a.as_slice()));
        }
    }
    outcome(
        mult <= 1e-9 && inter <= 1e-9 && unit <= 1e-10 && weyl <= 1e-10,
        format!(
            "multiplicativity {mult:.2e} (1e-9), intertwining {inter:.2e} (1e-9), \
             unitarity {unit:.2e} (1e-10), Weyl round trip {weyl:.2e} (1e-10)"
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut integral, mut conj) = (0.0f64, 0.0f64);
    for p in odd_primes_in(3, 61) {
        let f = field(p);
        for t in all_tori(&f) {
            let basis = eigenbasis(&t).unwrap();
            for _ in 0..5 {
                let x = random_vector(&mut rng, p as usize);
                let a = dot_transform(&basis, &x).unwrap();
                let b = dot_integral_form(&basis, &x).unwrap();
                integral = integral.max(max_abs_diff(&a.values, &b.values));
            }
        }
        if p % 4 != 1 {
            continue;
        }
        let tw = weyl_centralizer(&f);
        let a = standard_torus(&f);
        let s = conjugator_s(&f).unwrap();
        let rs = rho(&f, &s).unwrap();
        let si = s.inverse(&f);
        let pw = projectors(&tw).unwrap();
        let pa = projectors(&a).unwrap();
        // Ad_s(chi)(g) = chi(s g s^-1): match characters by their values on the T_w generator
        let image = a.discrete_log(&s.mul(&f, &tw.generator()).mul(&f, &si)).unwrap();
        let n = a.order();
        for _ in 0..5 {
            let phi = StateVector::from_vec(random_vector(&mut rng, p as usize));
            let x = StateVector::from_vec(random_vector(&mut rng, p as usize));
            let (sphi, sx) = (&rs * &phi, &rs * &x);
            for k in 0..n {
                let lhs = inner(x.as_slice(), (&pw[(k * image) % n] * &phi).as_slice());
                let rhs = inner(sx.as_slice(), (&pa[k] * &sphi).as_slice());
                conj = conj.max((lhs - rhs).norm());
            }
        }
    }
    outcome(
        integral <= 1e-9 && conj <= 1e-9,
        format!("integral form {integral:.2e}, conjugation identity {conj:.2e} (tol 1e-9)"),
    )
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for p in [5u64, 13, 17, 29] {
        let f = field(p);
        let s = conjugator_s(&f).unwrap();
        let mut d1 = StateVector::zeros(p as usize);
        d1[1] = ONE;
        let phi = rho(&f, &s).unwrap().adjoint() * d1;
        let ps = projectors(&weyl_centralizer(&f)).unwrap();
        let fast = FastOscillator::new(&f).unwrap();
        for _ in 0..20 {
            let x = random_vector(&mut rng, p as usize);
            let got = fast.transform(&x).unwrap();
            for (k, pk) in ps.iter().enumerate() {
                let want = inner(&x, (pk * &phi).as_slice());
                worst = worst.max((got.values[k] - want).norm());
            }
        }
    }
    outcome(worst <= 1e-8, format!("max deviation from dense definition {worst:.2e} (tol 1e-8)"))
}

fn time_fot(p: u64, reps: usize) -> Duration {
    let f = field(p);
    let mut rng = ChaCha8Rng::seed_from_u64(p);
    let x = random_vector(&mut rng, p as usize);
    (0..reps)
        .map(|_| {
            let start = Instant::now();
            let c = FastOscillator::new(&f).unwrap().transform(&x).unwrap();
            let elapsed = start.elapsed();
            assert_eq!(c.len(), p as usize - 1);
            elapsed
        })
        .min()
        .unwrap()
}

fn criterion_9() -> Outcome {
    // primes = 1 mod 4 near 25k, 50k, 100k, 200k
    let primes = [25013u64, 50021, 100049, 200033];
    for p in primes {
        assert!(oscillator_core::field::is_prime(p) && p % 4 == 1);
    }
    let times: Vec<Duration> = primes.iter().map(|&p| time_fot(p, 5)).collect();
    let at_1e5 = times[2].as_secs_f64();
    let ratios: Vec<f64> = times
        .windows(2)
        .map(|w| w[1].as_secs_f64() / w[0].as_secs_f64())
        .collect();
    let worst_ratio = ratios.iter().cloned().fold(0.0, f64::max);
    let listing: Vec<String> = primes
        .iter()
        .zip(&times)
        .map(|(p, t)| format!("p={p}: {:.1} ms", t.as_secs_f64() * 1e3))
        .collect();
    outcome(
        at_1e5 < 1.0 && worst_ratio <= 2.4,
        format!(
            "{}; doubling ratios {:?} (limit 2.4), p=100049 in {:.3} s (limit 1 s)",
            listing.join(", "),
            ratios.iter().map(|r| (r * 100.0).round() / 100.0).collect::<Vec<_>>(),
            at_1e5
        ),
    )
}

fn criterion_10() -> Outcome {
    let (mut gram, mut resid) = (0.0f64, 0.0f64);
    let roots = [ONE, -ONE, Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0)];
    for p in odd_primes_in(3, 101) {
        let f = field(p);
        let basis = eigenbasis(&weyl_centralizer(&f)).unwrap();
        let m = basis.matrix();
        let g = m.adjoint() * &m;
        let id = OperatorMatrix::identity(p as usize, p as usize);
        gram = gram.max(max_abs_diff(g.as_slice(), id.as_slice()));
        let dft = dft_oracle(p);
        for v in basis.vectors() {
            let fv = &dft * v;
            let rq = inner(fv.as_slice(), v.as_slice());
            let lambda = *roots
                .iter()
                .min_by(|a, b| (rq - **a).norm().total_cmp(&(rq - **b).norm()))
                .unwrap();
            resid = resid.max((fv - v * lambda).norm());
        }
    }
    outcome(
        gram <= 1e-9 && resid <= 1e-8,
        format!("Gram error {gram:.2e} (1e-9), eigen residual {resid:.2e} (1e-8)"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("DFT equals i^((p-1)/2) rho(w), p <= 101", criterion_1),
        ("character space dimensions, three tori, p <= 101", criterion_2),
        ("multiplicity tables, p <= 199", criterion_3),
        ("determinants of F and rho(w), p <= 101", criterion_4),
        ("kernel sign on tori, exact, p <= 101", criterion_5),
        ("representation integrity", criterion_6),
        ("integral form and conjugation identity, p <= 61", criterion_7),
        ("fast oscillator transform correctness", criterion_8),
        ("fast oscillator transform performance", criterion_9),
        ("eigenbasis integrity, p <= 101", criterion_10),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        if !result.passed {
            failures += 1;
        }
        println!(
            "criterion {:>2} {}: {} | {} [{:.1} s]",
            i + 1,
            if result.passed { "PASS" } else { "FAIL" },
            name,
            result.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
