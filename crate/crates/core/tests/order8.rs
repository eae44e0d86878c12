use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use vdm_core::cumulants::{alpha, alpha_pc_sum, order8_corrections, random_coefficient, CumulantArgs, CumulantPattern};
use vdm_core::funcspace::PiecewisePoly;
use vdm_core::lambda::LambdaEngine;
use vdm_core::partitions::SetPartition;

// Each correction term as (traced groups, bare factors, traced Λ(i,j,k)·l, bare Λ(i,j,k)).
type Term = (&'static [&'static [usize]], &'static [usize], &'static [[usize; 4]], &'static [[usize; 3]]);

const X_FIRST: [Term; 4] = [
    (&[&[2, 6], &[10, 14]], &[4, 8, 12], &[[1, 3, 5, 7], [9, 11, 13, 15]], &[]),
    (&[&[2, 6, 10, 14], &[8, 12]], &[4], &[[1, 3, 5, 15], [7, 9, 11, 13]], &[]),
    (&[&[2, 14], &[6, 10]], &[4, 8, 12], &[[1, 3, 13, 15], [5, 7, 9, 11]], &[]),
    (&[&[2, 6, 10, 14], &[4, 8]], &[12], &[[1, 11, 13, 15], [3, 5, 7, 9]], &[]),
];

const STAR_FIRST: [Term; 4] = [
    (&[&[1, 5, 9, 13], &[3, 7], &[11, 15]], &[], &[[2, 4, 6, 8]], &[[10, 12, 14]]),
    (&[&[1, 13], &[3, 7, 11, 15], &[5, 9]], &[], &[[4, 6, 8, 10]], &[[2, 12, 14]]),
    (&[&[1, 5, 9, 13], &[3, 15], &[7, 11]], &[], &[[6, 8, 10, 12]], &[[2, 4, 14]]),
    (&[&[1, 5], &[3, 7, 11, 15], &[9, 13]], &[], &[[8, 10, 12, 14]], &[[2, 4, 6]]),
];

fn evaluate(term: &Term, b: &[PiecewisePoly], l: &LambdaEngine) -> PiecewisePoly {
    let pi4: SetPartition = "{1,3|2,4}".parse().unwrap();
    let bi = |i: usize| b[i - 1].clone();
    let mut acc = PiecewisePoly::one();
    for group in term.0 {
        acc = acc.scale(&PiecewisePoly::product(group.iter().map(|&i| &b[i - 1])).tau());
    }
    for &i in term.1 {
        acc = &acc * &bi(i);
    }
    for [i, j, k, m] in term.2 {
        acc = acc.scale(&l.tau_lambda(&pi4, &[bi(*i), bi(*j), bi(*k)], &bi(*m)).unwrap());
    }
    for [i, j, k] in term.3 {
        acc = &acc * &l.lambda_function(&pi4, &[bi(*i), bi(*j), bi(*k)]).unwrap();
    }
    acc
}

#[test]
fn corrections_match_independent_transcription() {
    let l = LambdaEngine::default();
    for seed in 0..3 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b: Vec<PiecewisePoly> = (0..15).map(|_| random_coefficient(&mut rng)).collect();
        for (pattern, table) in [(CumulantPattern::XFirst, &X_FIRST), (CumulantPattern::StarFirst, &STAR_FIRST)] {
            let args = CumulantArgs::new(8, pattern, b.clone()).unwrap();
            let got = order8_corrections(&args, &l).unwrap();
            for (k, term) in table.iter().enumerate() {
                assert_eq!(got[k], evaluate(term, &b, &l), "{pattern:?} term {}", k + 1);
            }
        }
    }
}

#[test]
fn order8_subtracts_corrections() {
    let l = LambdaEngine::default();
    for pattern in [CumulantPattern::XFirst, CumulantPattern::StarFirst] {
        let args = CumulantArgs::ones(8, pattern).unwrap();
        let ones = vec![PiecewisePoly::one(); 15];
        let table = if pattern == CumulantPattern::XFirst { &X_FIRST } else { &STAR_FIRST };
        let mut want = alpha_pc_sum(&args, &l).unwrap();
        for term in table {
            want = &want - &evaluate(term, &ones, &l);
        }
        assert_eq!(alpha(&args, &l).unwrap(), want, "{pattern:?}");
    }
}
