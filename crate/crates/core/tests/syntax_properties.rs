use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use vdm_core::cumulants::random_coefficient;
use vdm_core::funcspace::{PiecewisePoly, Poly};
use vdm_core::moments::{Letter, Word};
use vdm_core::rational::q;
use vdm_core::syntax::{parse_expr, parse_word, render_expr, render_word};

// 0 = X, 1 = X*, 2 = polynomial, 3 = two-piece coefficient
fn word(kinds: &[u8], seed: u64) -> Word {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let letters = kinds
        .iter()
        .map(|k| match k {
            0 => Letter::X,
            1 => Letter::XStar,
            2 => Letter::Coeff(random_coefficient(&mut rng)),
            _ => {
                let a = random_coefficient(&mut rng).pieces()[0].clone();
                let b = random_coefficient(&mut rng).pieces()[0].clone();
                Letter::Coeff(PiecewisePoly::new(vec![q(0, 1), q(1, 3), q(1, 1)], vec![a, b]).unwrap())
            }
        })
        .collect();
    Word::new(letters)
}

proptest! {
    #[test]
    fn words_round_trip(kinds in proptest::collection::vec(0u8..4, 0..10), seed: u64) {
        let w = word(&kinds, seed);
        let text = render_word(&w);
        prop_assert_eq!(parse_word(&text).unwrap(), w, "{}", text);
    }

    #[test]
    fn sums_round_trip(a in proptest::collection::vec(0u8..3, 1..6), b in proptest::collection::vec(0u8..3, 1..6), seed: u64) {
        let e = parse_expr(&format!("{} - {}", render_word(&word(&a, seed)), render_word(&word(&b, seed ^ 1)))).unwrap();
        prop_assert_eq!(parse_expr(&render_expr(&e)).unwrap(), e);
    }
}

#[test]
fn constant_coefficients_merge() {
    let w = Word::new(vec![
        Letter::Coeff(PiecewisePoly::from_poly(Poly::constant(q(2, 1)))),
        Letter::X,
        Letter::Coeff(PiecewisePoly::one()),
        Letter::XStar,
    ]);
    assert_eq!(render_word(&w), "[2] X X*");
}
