use num_complex::Complex64;
use proptest::prelude::*;

use oscillator_core::field::PrimeField;
use oscillator_core::heisenberg::{pi_apply, HeisenbergElement};
use oscillator_core::linalg::{inner, max_abs_diff, norm};
use oscillator_core::oscillator::{dot_transform, fast_dft, full_analysis, full_synthesis, FastOscillator};
use oscillator_core::spectral::eigenbasis;
use oscillator_core::tori::{torus, TorusKind};
use oscillator_core::weil::{bruhat_decompose, dft_matrix, rho, FastWeil};
use oscillator_core::{Mat2, Sl2, StateVector};

const SMALL: [u64; 5] = [3, 5, 7, 11, 13];
const SPLIT: [u64; 4] = [5, 13, 17, 29];

fn legendre_by_euler(a: u64, p: u64) -> i8 {
    let mut r = 1u64;
    let (mut b, mut e) = (a % p, (p - 1) / 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    match r {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

fn sl2_from(f: &PrimeField, a: u64, b: u64, c: u64) -> Sl2 {
    let p = f.p();
    let a = a % (p - 1) + 1;
    let (b, c) = (b % p, c % p);
    let fa = f.from_u64(a);
    let d = f.div(f.add(f.from_u64(1), f.mul(f.from_u64(b), f.from_u64(c))), fa).unwrap();
    Sl2::new(f, Mat2::new(fa, f.from_u64(b), f.from_u64(c), d)).unwrap()
}

fn vector(values: &[(f64, f64)], p: usize) -> Vec<Complex64> {
    values.iter().cycle().take(p).map(|&(re, im)| Complex64::new(re, im)).collect()
}

fn entries() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..40)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_arithmetic_laws(pi in 0usize..5, a in 0u64..1000, b in 0u64..1000, c in 0u64..1000) {
        let f = PrimeField::new(SMALL[pi]).unwrap();
        let (x, y, z) = (f.from_u64(a), f.from_u64(b), f.from_u64(c));
        prop_assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
        prop_assert_eq!(f.sub(f.add(x, y), y), x);
        if !x.is_zero() {
            prop_assert_eq!(f.mul(x, f.inv(x).unwrap()), f.from_u64(1));
        }
        prop_assert_eq!(f.legendre(x), legendre_by_euler(a, f.p()));
    }

    #[test]
    fn bruhat_factorization_recomposes(pi in 0usize..5, a in 0u64..1000, b in 0u64..1000, c in 0u64..1000) {
        let f = PrimeField::new(SMALL[pi]).unwrap();
        let g = sl2_from(&f, a, b, c);
        prop_assert_eq!(bruhat_decompose(&f, &g).recompose(&f), g);
    }

    #[test]
    fn rho_is_multiplicative(pi in 0usize..5, g in (0u64..1000, 0u64..1000, 0u64..1000), h in (0u64..1000, 0u64..1000, 0u64..1000)) {
        let f = PrimeField::new(SMALL[pi]).unwrap();
        let g = sl2_from(&f, g.0, g.1, g.2);
        let h = sl2_from(&f, h.0, h.1, h.2);
        let lhs = rho(&f, &g.mul(&f, &h)).unwrap();
        let rhs = rho(&f, &g).unwrap() * rho(&f, &h).unwrap();
        prop_assert!(max_abs_diff(lhs.as_slice(), rhs.as_slice()) < 1e-9);
    }

    #[test]
    fn rho_intertwines_heisenberg(
        pi in 0usize..5,
        g in (0u64..1000, 0u64..1000, 0u64..1000),
        h in (0u64..1000, 0u64..1000, 0u64..1000),
        v in entries(),
    ) {
        let f = PrimeField::new(SMALL[pi]).unwrap();
        let g = sl2_from(&f, g.0, g.1, g.2);
        let h = HeisenbergElement::new(f.from_u64(h.0), f.from_u64(h.1), f.from_u64(h.2));
        let x = vector(&v, f.size());
        let r = rho(&f, &g).unwrap();
        let lhs = &r * pi_apply(&f, h, &x);
        let rhs = pi_apply(&f, g.act(&f, h), (&r * StateVector::from_column_slice(&x)).as_slice());
        prop_assert!(max_abs_diff(lhs.as_slice(), rhs.as_slice()) < 1e-9);
    }

    #[test]
    fn fast_weil_matches_dense(pi in 0usize..5, g in (0u64..1000, 0u64..1000, 0u64..1000), v in entries()) {
        let f = PrimeField::new(SMALL[pi]).unwrap();
        let g = sl2_from(&f, g.0, g.1, g.2);
        let x = vector(&v, f.size());
        let want = rho(&f, &g).unwrap() * StateVector::from_column_slice(&x);
        let got = FastWeil::new(&f).apply(&g, &x).unwrap();
        prop_assert!(max_abs_diff(&got, want.as_slice()) < 1e-9);
    }

    #[test]
    fn fast_dft_is_unitary_and_matches_dense(pi in 0usize..5, v in entries()) {
        let f = PrimeField::new(SMALL[pi]).unwrap();
        let x = vector(&v, f.size());
        let y = fast_dft(&x);
        prop_assert!((norm(&x) - norm(&y)).abs() < 1e-9);
        let want = dft_matrix(&f).unwrap() * StateVector::from_column_slice(&x);
        prop_assert!(max_abs_diff(&y, want.as_slice()) < 1e-9);
    }

    #[test]
    fn full_transform_round_trips(pi in 0usize..5, kind in 0usize..3, v in entries()) {
        let f = PrimeField::new(SMALL[pi]).unwrap();
        let kind = [TorusKind::WeylCentralizer, TorusKind::Standard, TorusKind::NonSplit][kind];
        let basis = eigenbasis(&torus(&f, kind)).unwrap();
        let x = vector(&v, f.size());
        let c = full_analysis(&basis, &x).unwrap();
        let c_norm = c.values.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        prop_assert!((c_norm - norm(&x)).abs() < 1e-9);
        let back = full_synthesis(&basis, &c).unwrap();
        prop_assert!(max_abs_diff(back.as_slice(), &x) < 1e-9);
    }

    #[test]
    fn dot_coefficients_are_inner_products(pi in 0usize..5, v in entries()) {
        let f = PrimeField::new(SMALL[pi]).unwrap();
        let basis = eigenbasis(&torus(&f, TorusKind::WeylCentralizer)).unwrap();
        let x = vector(&v, f.size());
        let c = dot_transform(&basis, &x).unwrap();
        prop_assert_eq!(c.len(), basis.support().len());
        for (label, value) in c.labels.iter().zip(&c.values) {
            let phi = basis.representative(label.character).unwrap();
            prop_assert!((inner(&x, phi.as_slice()) - value).norm() < 1e-9);
        }
    }

    #[test]
    fn fot_is_linear(pi in 0usize..4, v in entries(), u in entries(), s in -2.0f64..2.0) {
        let f = PrimeField::new(SPLIT[pi]).unwrap();
        let fast = FastOscillator::new(&f).unwrap();
        let x = vector(&v, f.size());
        let y = vector(&u, f.size());
        let combo: Vec<Complex64> = x.iter().zip(&y).map(|(a, b)| a * s + b).collect();
        let lhs = fast.transform(&combo).unwrap().values;
        let tx = fast.transform(&x).unwrap().values;
        let ty = fast.transform(&y).unwrap().values;
        let rhs: Vec<Complex64> = tx.iter().zip(&ty).map(|(a, b)| a * s + b).collect();
        prop_assert!(max_abs_diff(&lhs, &rhs) < 1e-9);
    }
}
