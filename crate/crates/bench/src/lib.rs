//! Fixtures shared by the benchmarks.

use qcluster::{CompatiblePair, ExchangeData, IntMatrix, QuantumSeed};

fn seed(lambda: &[Vec<i64>], btilde: &[Vec<i64>]) -> QuantumSeed {
    let btilde = IntMatrix::from_rows(btilde).expect("rectangular");
    let lambda = IntMatrix::from_rows(lambda).expect("rectangular");
    let pair = CompatiblePair::new(lambda, btilde.clone()).expect("compatible");
    QuantumSeed::new(
        pair,
        ExchangeData::with_defaults(&btilde).expect("valid defaults"),
    )
    .expect("valid seed")
}

pub fn g2() -> QuantumSeed {
    seed(&[vec![0, 1], vec![-1, 0]], &[vec![0, 1], vec![-3, 0]])
}

pub fn a2() -> QuantumSeed {
    seed(&[vec![0, 1], vec![-1, 0]], &[vec![0, 1], vec![-1, 0]])
}

pub fn b2_frozen() -> QuantumSeed {
    seed(
        &[vec![0, 1, 0], vec![-1, 0, 0], vec![0, 0, 0]],
        &[vec![0, 1], vec![-2, 0], vec![2, -1]],
    )
}
