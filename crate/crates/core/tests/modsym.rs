use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use slopecert_core::linalg::{charpoly, Matrix, Rationals};
use slopecert_core::modsym::{
    cuspidal_dimension, hecke_charpoly_on_cuspforms, hecke_matrix, ModularSymbols, Sign,
};
use slopecert_core::traceformula::{dim_cusp_forms, trace_exact, SpaceSpec};

fn space(n: u64, k: u32) -> SpaceSpec {
    SpaceSpec::new(n, k).unwrap()
}

#[test]
fn plus_dimension_grid() {
    for n in 1..=30u64 {
        for k in (2..=12u32).step_by(2) {
            let s = space(n, k);
            let ms = ModularSymbols::new(s.clone(), Sign::Plus).unwrap();
            assert_eq!(cuspidal_dimension(&ms).unwrap() as u64, dim_cusp_forms(&s).unwrap(), "N = {n}, k = {k}");
        }
    }
}

#[test]
fn plus_dimensions_at_weights_6_and_26() {
    for n in (1..=83u64).filter(|n| n % 5 != 0) {
        for k in [6u32, 26] {
            let s = space(n, k);
            let ms = ModularSymbols::new(s.clone(), Sign::Plus).unwrap();
            assert_eq!(cuspidal_dimension(&ms).unwrap() as u64, dim_cusp_forms(&s).unwrap(), "N = {n}, k = {k}");
        }
    }
}

#[test]
fn traces_agree_with_trace_formula() {
    for n in 1..=20u64 {
        for k in [4u32, 6, 8, 10, 12] {
            let s = space(n, k);
            let ms = ModularSymbols::new(s.clone(), Sign::Plus).unwrap();
            let pres = ms.over(Rationals).unwrap();
            for l in [2u64, 3, 5, 7] {
                if n % l == 0 {
                    continue;
                }
                let t = pres.hecke_matrix(l).unwrap();
                let expected = trace_exact(&s, l).unwrap();
                assert_eq!(t.trace_in(&Rationals), BigRational::from_integer(expected), "N = {n}, k = {k}, l = {l}");
            }
        }
    }
}

#[test]
fn hecke_operators_commute() {
    let f = Rationals;
    for (n, k) in [(11u64, 4u32), (13, 6), (23, 2), (1, 24), (17, 8)] {
        for sign in [Sign::Plus, Sign::None] {
            let ms = ModularSymbols::new(space(n, k), sign).unwrap();
            let t2 = hecke_matrix(&ms, 2).unwrap();
            let t3 = hecke_matrix(&ms, 3).unwrap();
            assert_eq!(t2.mul_in(&f, &t3).unwrap(), t3.mul_in(&f, &t2).unwrap(), "N = {n}, k = {k}");
        }
    }
}

#[test]
fn full_charpoly_is_square_of_plus_charpoly() {
    for (n, k, l) in [(11u64, 2u32, 2u64), (11, 4, 3), (14, 6, 5), (1, 24, 2), (37, 2, 3), (26, 4, 7)] {
        let plus = hecke_charpoly_on_cuspforms(&ModularSymbols::new(space(n, k), Sign::Plus).unwrap(), l).unwrap();
        let full = hecke_charpoly_on_cuspforms(&ModularSymbols::new(space(n, k), Sign::None).unwrap(), l).unwrap();
        assert_eq!(full, plus.mul(&plus), "N = {n}, k = {k}, l = {l}");
    }
}

#[test]
fn multimodular_charpoly_matches_exact_matrix() {
    for (n, k, l) in [(14u64, 6u32, 5u64), (23, 4, 2), (9, 8, 7)] {
        let ms = ModularSymbols::new(space(n, k), Sign::Plus).unwrap();
        let cp = hecke_charpoly_on_cuspforms(&ms, l).unwrap();
        assert!(cp.is_integral());
        assert_eq!(cp.degree() as u64, dim_cusp_forms(&space(n, k)).unwrap());
        assert_eq!(cp, charpoly(&hecke_matrix(&ms, l).unwrap()).unwrap());
    }
}

#[test]
fn star_is_an_involution_with_balanced_eigenspaces() {
    let f = Rationals;
    for (n, k) in [(11u64, 2u32), (13, 4), (20, 6)] {
        let ms = ModularSymbols::new(space(n, k), Sign::None).unwrap();
        let pres = ms.over(f).unwrap();
        let star = pres.star_matrix();
        let d = star.rows();
        assert_eq!(star.mul_in(&f, &star).unwrap(), Matrix::identity(&f, d));
        // trace zero: the +1 and -1 eigenspaces have equal dimension
        assert!(star.trace_in(&f).is_zero());
        let plus = ModularSymbols::new(space(n, k), Sign::Plus).unwrap();
        let ps = plus.over(f).unwrap().star_matrix();
        assert_eq!(ps, Matrix::identity(&f, ps.rows()));
    }
}

#[test]
fn eigenvalue_of_delta() {
    // the weight-12 level-1 space is spanned by Delta; T_l acts by tau(l)
    let ms = ModularSymbols::new(space(1, 12), Sign::Plus).unwrap();
    for (l, tau) in [(2u64, -24i64), (3, 252), (5, 4830), (7, -16744), (11, 534612)] {
        let t = hecke_matrix(&ms, l).unwrap();
        assert_eq!(t.get(0, 0), &BigRational::from_integer(BigInt::from(tau)));
        let cp = hecke_charpoly_on_cuspforms(&ms, l).unwrap();
        assert_eq!(cp.integer_coeffs().unwrap(), vec![BigInt::one(), BigInt::from(-tau)]);
    }
}
