use lowrankdisc::constants::{C_BAND, C_DECREMENT};
use lowrankdisc::constructions::{random_binary, tightness_matrix};
use lowrankdisc::decrement::{
    decrement_step, find_mono, zero_submatrix_sparse, DecrementConfig, DecrementTrace, SparseOutcome, Strategy,
};
use lowrankdisc::{BinaryMatrix, Rational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ratio_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn child_density(m: &BinaryMatrix, rows: &[usize], cols: &[usize]) -> Rational {
    Rational::new(m.count_in(rows, cols) as i128, (rows.len() * cols.len()) as i128)
}

/// Square even-sized matrices within the decrement regime `1/(8r) ≤ p ≤ 1/2`.
fn regime_corpus(seed: u64, count: usize) -> Vec<(BinaryMatrix, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let n = 2 * rng.random_range(2..=8);
        let density: f64 = rng.random_range(0.02..0.5);
        let m = BinaryMatrix::from_fn(n, n, |_, _| rng.random_bool(density));
        let r = m.rank();
        let p = m.density();
        if r == 0 || p > Rational::new(1, 2) || p * Rational::from_integer(8 * r as i128) < Rational::from_integer(1) {
            continue;
        }
        out.push((m, r));
    }
    out
}

#[test]
fn exact_step_meets_measured_decrement() {
    let cfg = DecrementConfig::default();
    let mut worst = f64::INFINITY;
    for (m, r) in regime_corpus(41, 400) {
        let (rect, strategy) = decrement_step(&m, &cfg).unwrap();
        assert_eq!(strategy, Strategy::Exact);
        assert_eq!((rect.rows.len() * 2, rect.cols.len() * 2), (m.m(), m.n()));
        let p = m.density();
        let drop = ratio_f64(p - child_density(&m, &rect.rows, &rect.cols));
        let scale = (ratio_f64(p) / r as f64).sqrt();
        worst = worst.min(drop / scale);
        assert!(
            drop >= C_DECREMENT * scale,
            "decrement {drop} < {C_DECREMENT}·{scale} on\n{m}"
        );
    }
    println!("smallest decrement / √(p/r) = {worst:.4}");
}

fn bands(trace: &DecrementTrace) -> Vec<(i32, usize)> {
    let mut counts = std::collections::BTreeMap::new();
    for step in &trace.steps {
        let k = (-ratio_f64(step.density).log2()).floor() as i32;
        *counts.entry(k).or_insert(0usize) += 1;
    }
    counts.into_iter().collect()
}

fn check_trace(trace: &DecrementTrace, worst: &mut f64) {
    for w in trace.steps.windows(2) {
        assert!(w[1].density <= w[0].density);
        assert_eq!(w[1].density, w[0].child_density);
    }
    for step in &trace.steps {
        assert!(step.child_density < step.density);
    }
    let root = (trace.rank as f64).sqrt();
    for (k, count) in bands(trace) {
        let cap = root * 2f64.powf(-k as f64 / 2.0);
        *worst = worst.max(count as f64 / cap);
        assert!(
            count as f64 <= C_BAND * cap,
            "band {k} holds {count} steps, cap {}",
            C_BAND * cap
        );
    }
}

#[test]
fn band_occupancy_within_measured_constant() {
    let half = Rational::new(1, 2);
    let mut worst: f64 = 0.0;
    for (r, n) in [(2usize, 64usize), (4, 64), (4, 128), (8, 128), (16, 128)] {
        for seed in 1..=3u64 {
            for compress in [true, false] {
                let m = tightness_matrix(r, half, n, n, seed).unwrap();
                let cfg = DecrementConfig {
                    seed,
                    compress,
                    oracle_limit: 16,
                    ..DecrementConfig::default()
                };
                let (res, trace) = find_mono(&m, &cfg).unwrap();
                assert!(res.verify(&m));
                check_trace(&trace, &mut worst);
            }
        }
    }
    println!("largest band count / (√r·2^(−k/2)) = {worst:.4}");
}

#[test]
fn step_on_blown_up_random_matrix() {
    let m = random_binary(3, Rational::new(1, 2), 7).unwrap().blow_up(4, 4).unwrap();
    let (rect, _) = decrement_step(&m, &DecrementConfig::default()).unwrap();
    assert!(child_density(&m, &rect.rows, &rect.cols) < m.density());
}

#[test]
fn identity_step_finds_empty_half() {
    let m = BinaryMatrix::identity(8);
    let (rect, strategy) = decrement_step(&m, &DecrementConfig::default()).unwrap();
    assert_eq!(strategy, Strategy::Exact);
    assert_eq!(m.count_in(&rect.rows, &rect.cols), 0);
    assert_eq!(rect.rows.len(), 4);
}

#[test]
fn blown_up_rank_four_finds_large_block() {
    let m = random_binary(4, Rational::new(1, 2), 3)
        .unwrap()
        .blow_up(64, 64)
        .unwrap();
    for compress in [true, false] {
        let cfg = DecrementConfig {
            compress,
            oracle_limit: 16,
            ..DecrementConfig::default()
        };
        let (res, trace) = find_mono(&m, &cfg).unwrap();
        assert!(res.verify(&m));
        let (a, b) = res.dims();
        assert!(a >= 16 && b >= 16, "{a}×{b}");
        assert!(trace.iterations() as f64 <= 20.0 * 2.0);
    }
}

#[test]
fn sparse_zero_block_on_planted_corpus() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..60 {
        let r = rng.random_range(1..=6usize);
        let n = 8 * r * rng.random_range(1..=4);
        let budget = (n * n / (8 * r)) as u64;
        // Ones confined to a (k×k) corner so the rank stays ≤ k ≤ r.
        let k = rng.random_range(1..=r);
        let mut rows: Vec<usize> = (0..n).collect();
        let mut cols: Vec<usize> = (0..n).collect();
        rows.shuffle(&mut rng);
        cols.shuffle(&mut rng);
        let pattern = BinaryMatrix::from_fn(k, k, |_, _| rng.random_bool(0.5));
        let blocks = rng.random_range(1..=(n / (4 * k)).max(1));
        let mut cells = Vec::new();
        for (i, &row) in rows.iter().enumerate().take(k * blocks) {
            for (j, &col) in cols.iter().enumerate().take(k * blocks) {
                if pattern.get(i % k, j % k) {
                    cells.push((row, col));
                }
            }
        }
        if cells.len() as u64 > budget {
            continue;
        }
        let m = BinaryMatrix::from_fn(n, n, |i, j| cells.contains(&(i, j)));
        assert!(m.rank() <= r);
        match zero_submatrix_sparse(&m, r).unwrap() {
            SparseOutcome::Zero { rows, cols } => {
                assert!(rows.len() * 4 >= n && cols.len() * 4 >= n);
                assert!(m.is_constant_on(&rows, &cols, false));
            }
            SparseOutcome::Permutation(p) => panic!("rank ≤ {r} but a permutation of size {} was found", p.size()),
        }
    }
}

#[test]
fn permutation_witness_certifies_rank() {
    let m = BinaryMatrix::identity(64);
    match zero_submatrix_sparse(&m, 8).unwrap() {
        SparseOutcome::Permutation(p) => {
            assert!(p.verify(&m));
            assert!(m.rank() >= p.size());
        }
        other => panic!("expected a permutation, got {other:?}"),
    }
}
