//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed.

use std::time::{Duration, Instant};

use lowrankdisc::constants::{C0_DISC, SANDWICH_FACTOR};
use lowrankdisc::constructions::{blowup_random, fixtures, tightness_matrix};
use lowrankdisc::decrement::{find_mono, zero_submatrix_sparse, DecrementConfig, SparseOutcome};
use lowrankdisc::experiment::{run_experiment, with_pool, write_csv, ExperimentConfig};
use lowrankdisc::linalg::SymMatrix;
use lowrankdisc::oracle::{self, Sign};
use lowrankdisc::spectral::{cubesum_bound, disc_of_psd, lowrank_bound, spectrum, witness, Tolerances, Witness};
use lowrankdisc::{BinaryMatrix, Rational, WeightedBinaryMatrix};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LIMIT: usize = oracle::DEFAULT_ORACLE_LIMIT;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    check(start.elapsed() <= limit, || {
        format!("took {:.1?}, limit {:?}", start.elapsed(), limit)
    })
}

fn random_matrix(rng: &mut ChaCha8Rng, m: usize, n: usize) -> BinaryMatrix {
    let density: f64 = rng.random_range(0.0..=1.0);
    BinaryMatrix::from_fn(m, n, |_, _| rng.random_bool(density))
}

/// Scaled naive optimum over all `(X, Y)` pairs: `max` and `min` of
/// `|M[X×Y]|·mn − |M|·|X|·|Y|`.
fn naive_extremes(m: &BinaryMatrix) -> (i64, i64) {
    let (rows, cols) = (m.m(), m.n());
    let cells = (rows * cols) as i64;
    let ones = m.ones() as i64;
    let (mut hi, mut lo) = (0i64, 0i64);
    for xs in 0u32..1 << rows {
        for ys in 0u32..1 << cols {
            let mut count = 0i64;
            for i in 0..rows {
                for j in 0..cols {
                    if xs >> i & 1 == 1 && ys >> j & 1 == 1 && m.get(i, j) {
                        count += 1;
                    }
                }
            }
            let v = count * cells - ones * xs.count_ones() as i64 * ys.count_ones() as i64;
            hi = hi.max(v);
            lo = lo.min(v);
        }
    }
    (hi, lo)
}

fn scaled(v: Rational, m: &BinaryMatrix) -> Rational {
    v * Rational::from_integer((m.m() * m.n()) as i128)
}

fn small_fixtures() -> Vec<BinaryMatrix> {
    let mut out = Vec::new();
    for a in 1..=5 {
        out.push(fixtures(&format!("identity({a})")).unwrap());
        out.push(fixtures(&format!("matching_complement({a})")).unwrap());
        for b in 1..=5 {
            out.push(fixtures(&format!("all_ones({a},{b})")).unwrap());
            out.push(fixtures(&format!("all_zeros({a},{b})")).unwrap());
        }
    }
    out
}

fn c1_oracle_matches_naive() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut corpus = small_fixtures();
    for _ in 0..10_000 {
        let (m, n) = (rng.random_range(1..=5), rng.random_range(1..=5));
        corpus.push(random_matrix(&mut rng, m, n));
    }
    for m in &corpus {
        let (hi, lo) = naive_extremes(m);
        let plus = oracle::best_rect(m, Sign::Plus, LIMIT).map_err(|e| e.to_string())?;
        let minus = oracle::best_rect(m, Sign::Minus, LIMIT).map_err(|e| e.to_string())?;
        check(scaled(plus.value, m) == Rational::from_integer(hi as i128), || {
            format!("disc⁺ mismatch on\n{m}")
        })?;
        check(scaled(minus.value, m) == Rational::from_integer(lo as i128), || {
            format!("disc⁻ mismatch on\n{m}")
        })?;
        check(plus.verify(m).unwrap() && minus.verify(m).unwrap(), || {
            format!("rectangle value not recomputable on\n{m}")
        })?;
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!("{} matrices, {:.1?}", corpus.len(), start.elapsed()))
}

/// 1,000 random matrices with dimensions in 1..=10, plus the same count with
/// even dimensions for the half-rectangle check.
fn corpus(seed: u64, even: bool) -> Vec<BinaryMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..1000)
        .map(|_| {
            let (m, n) = if even {
                (2 * rng.random_range(1..=5), 2 * rng.random_range(1..=5))
            } else {
                (rng.random_range(1..=10), rng.random_range(1..=10))
            };
            random_matrix(&mut rng, m, n)
        })
        .collect()
}

fn c2_pos_neg() -> Outcome {
    let three = Rational::from_integer(3);
    let mut count = 0;
    for m in corpus(202, false).iter().chain(&corpus(203, true)) {
        let p = oracle::disc_plus(m, LIMIT).unwrap();
        let q = oracle::disc_minus(m, LIMIT).unwrap();
        check(p <= three * q && q <= three * p, || {
            format!("disc⁺ = {p}, disc⁻ = {q} on\n{m}")
        })?;
        count += 1;
    }
    Ok(format!("{count} matrices"))
}

fn c3_half() -> Outcome {
    let mut count = 0;
    for m in corpus(203, true) {
        let half = oracle::best_half_rect(&m, Sign::Minus, LIMIT).unwrap();
        let q = oracle::disc_minus(&m, LIMIT).unwrap();
        check(half.value <= -q / Rational::from_integer(12), || {
            format!("half value {} vs disc⁻ {q} on\n{m}", half.value)
        })?;
        check(half.rows.len() * 2 == m.m() && half.cols.len() * 2 == m.n(), || {
            "not half sized".into()
        })?;
        count += 1;
    }
    Ok(format!("{count} even-dimension matrices"))
}

fn squared(m: &BinaryMatrix) -> (WeightedBinaryMatrix, f64) {
    let w = WeightedBinaryMatrix::square(m.clone()).unwrap();
    let scale = (w.rows() / m.m() as u64 * (w.cols() / m.n() as u64)) as f64;
    (w, scale)
}

fn ratio_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn c4_sandwich() -> Outcome {
    let tol = Tolerances::default();
    let twelve = Rational::from_integer(12);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for m in corpus(202, false).iter().chain(&corpus(203, true)) {
        let plus = oracle::disc_plus(m, LIMIT).unwrap();
        let d0 = oracle::disc0_plus(m, LIMIT).unwrap().value;
        check(plus <= d0 && d0 <= twelve * plus, || {
            format!("disc⁺ = {plus}, disc₀⁺ = {d0} on\n{m}")
        })?;
        if m.ones() == 0 {
            continue;
        }
        let (w, scale) = squared(m);
        let cert = witness(&w, &tol).map_err(|e| e.to_string())?;
        let cap = SANDWICH_FACTOR * scale * ratio_f64(plus);
        check(cert.disc_value <= cap + tol.num_tol(cap), || {
            format!("witness {} exceeds {cap} on\n{m}", cert.disc_value)
        })?;
        if cap > 0.0 {
            worst = worst.max(cert.disc_value / (scale * ratio_f64(plus)));
        }
        count += 1;
    }
    Ok(format!("{count} witnesses, largest disc(X)/disc⁺ = {worst:.3}"))
}

fn c5_cubesum() -> Outcome {
    let tol = Tolerances::default();
    let mut count = 0;
    let mut explicit_checked = 0;
    for m in corpus(202, false).iter().chain(&corpus(203, true)) {
        if m.ones() == 0 {
            continue;
        }
        let (w, _) = squared(m);
        let cert = witness(&w, &tol).map_err(|e| e.to_string())?;
        check(cert.diag_max <= 1.0 + 1e-8, || {
            format!("diag_max {} on\n{m}", cert.diag_max)
        })?;
        let s = spectrum(&w, &tol).unwrap();
        let bound = cubesum_bound(&s, w.max_degree());
        check(cert.disc_value >= bound - tol.num_tol(bound), || {
            format!("disc(X) = {} below cube sum {bound} on\n{m}", cert.disc_value)
        })?;
        if let (true, Witness::Spectral { coeffs, spectral }) = (m.is_square(), &cert.witness) {
            let x = SymMatrix::from_outer_products(m.m() + m.n(), &spectral.vectors, coeffs);
            let explicit = disc_of_psd(m, &x).map_err(|e| e.to_string())?;
            check(explicit >= bound - tol.num_tol(bound), || {
                format!("explicit disc(X) = {explicit} below cube sum {bound} on\n{m}")
            })?;
            explicit_checked += 1;
        }
        count += 1;
    }
    let i8 = WeightedBinaryMatrix::unit(BinaryMatrix::identity(8));
    let cert = witness(&i8, &tol).unwrap();
    check((cert.bound - 7.0).abs() <= 1e-6, || format!("I₈ bound {}", cert.bound))?;
    Ok(format!(
        "{count} matrices ({explicit_checked} with the explicit PSD matrix), I₈ bound {:.9}",
        cert.bound
    ))
}

/// Blow-up of a randomly permuted circulant: every degree equals `|S|·k`.
fn regular_low_rank(rng: &mut ChaCha8Rng) -> BinaryMatrix {
    let r0 = rng.random_range(4..=16usize);
    let s = rng.random_range(1..=r0 / 2);
    let mut shifts: Vec<usize> = (0..r0).collect();
    shifts.shuffle(rng);
    let set = &shifts[..s];
    let base = BinaryMatrix::from_fn(r0, r0, |i, j| set.contains(&((j + r0 - i) % r0)));
    let k = rng.random_range(1..=128 / r0);
    let big = base.blow_up(k, k).unwrap();
    let n = big.m();
    let mut rp: Vec<usize> = (0..n).collect();
    let mut cp: Vec<usize> = (0..n).collect();
    rp.shuffle(rng);
    cp.shuffle(rng);
    BinaryMatrix::from_fn(n, n, |i, j| big.get(rp[i], cp[j]))
}

fn c6_lowrank() -> Outcome {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut count = 0;
    let mut min_ratio = f64::INFINITY;
    while count < 200 {
        let m = regular_low_rank(&mut rng);
        let n = m.m() as u64;
        let d = m.ones() as f64 / n as f64;
        if 2 * m.ones() > n * n || m.max_degree() as f64 > 1.1 * d {
            continue;
        }
        let r = m.rank();
        let cert = witness(&WeightedBinaryMatrix::unit(m.clone()), &tol).map_err(|e| e.to_string())?;
        let target = lowrank_bound(n, m.ones(), r);
        check(cert.disc_value >= target - tol.num_tol(target), || {
            format!("n = {n}, d = {d}, r = {r}: disc(X) = {} < {target}", cert.disc_value)
        })?;
        min_ratio = min_ratio.min(cert.disc_value / target);
        count += 1;
    }
    Ok(format!(
        "{count} regular matrices, smallest disc(X)/bound = {min_ratio:.3}"
    ))
}

fn c7_disc_main() -> Outcome {
    let mut count = 0;
    let mut worst = f64::INFINITY;
    for m in corpus(202, false).iter().chain(&corpus(203, true)) {
        let p = m.density();
        if p > Rational::new(1, 2) || m.ones() == 0 {
            continue;
        }
        let r = m.rank() as f64;
        let pf = ratio_f64(p);
        let need = (m.m() * m.n()) as f64 * pf.min((pf / r).sqrt());
        let disc = ratio_f64(oracle::disc(m, LIMIT).unwrap());
        check(disc >= C0_DISC * need, || {
            format!("disc {disc} < {C0_DISC}·{need} on\n{m}")
        })?;
        worst = worst.min(disc / need);
        count += 1;
    }
    Ok(format!(
        "{count} matrices with p ≤ 1/2, smallest disc/(mn·min(p, √(p/r))) = {worst:.3}"
    ))
}

fn c8_blow_up() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let mut count = 0;
    for _ in 0..300 {
        let (m, n) = (rng.random_range(1..=6), rng.random_range(1..=6));
        let base = random_matrix(&mut rng, m, n);
        let (a, b) = (rng.random_range(1..=4), rng.random_range(1..=4));
        let big = base.blow_up(a, b).unwrap();
        check(big.density() == base.density(), || "density changed".into())?;
        check(big.rank() == base.rank(), || "rank changed".into())?;
        let scale = Rational::from_integer((a * b) as i128);
        check(
            oracle::disc_plus(&big, LIMIT).unwrap() == scale * oracle::disc_plus(&base, LIMIT).unwrap(),
            || format!("disc⁺ does not scale by {a}·{b} on\n{base}"),
        )?;
        count += 1;
    }
    Ok(format!("{count} blow-ups"))
}

/// Ones confined to a small block: base row/column 0 is empty and gets the
/// bulk of the multiplicity, rows and columns are then shuffled.
fn planted_sparse(rng: &mut ChaCha8Rng, r: usize, n: usize) -> BinaryMatrix {
    let base = BinaryMatrix::from_fn(r, r, |i, j| i > 0 && j > 0 && rng.random_bool(0.5));
    let smax = ((n as f64) / ((r - 1) as f64 * (8.0 * r as f64).sqrt())).floor() as usize;
    let s = rng.random_range(1..=smax.max(1));
    let mult = |_: ()| -> Vec<u64> {
        let mut v = vec![s as u64; r];
        v[0] = (n - (r - 1) * s) as u64;
        v
    };
    let w = WeightedBinaryMatrix::new(base, mult(()), mult(())).unwrap();
    let big = w.materialize().unwrap();
    let mut rp: Vec<usize> = (0..n).collect();
    let mut cp: Vec<usize> = (0..n).collect();
    rp.shuffle(rng);
    cp.shuffle(rng);
    BinaryMatrix::from_fn(n, n, |i, j| big.get(rp[i], cp[j]))
}

fn c9_toosparse() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut count = 0;
    let mut smallest = usize::MAX;
    for t in 0..100 {
        let r = [2, 4, 8][t % 3];
        let n = [64, 256][t / 3 % 2];
        let m = planted_sparse(&mut rng, r, n);
        check(8 * r as u64 * m.ones() <= (n * n) as u64, || {
            "planted density too high".into()
        })?;
        check(m.rank() <= r, || "planted rank too high".into())?;
        match zero_submatrix_sparse(&m, r).map_err(|e| e.to_string())? {
            SparseOutcome::Zero { rows, cols } => {
                check(rows.len() * 4 >= n && cols.len() * 4 >= n, || {
                    format!("block {}×{} below n/4 = {}", rows.len(), cols.len(), n / 4)
                })?;
                check(m.is_constant_on(&rows, &cols, false), || "block is not all zero".into())?;
                smallest = smallest.min(rows.len().min(cols.len()) * 100 / n);
            }
            SparseOutcome::Permutation(p) => return Err(format!("permutation branch fired with size {}", p.size())),
        }
        count += 1;
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!(
        "{count} instances, smallest side {smallest}% of n, {:.1?}",
        start.elapsed()
    ))
}

fn c10_find_mono() -> Outcome {
    let start = Instant::now();
    let n = 512;
    let half = Rational::new(1, 2);
    let mut lines = Vec::new();
    for r in [4usize, 9, 16] {
        for seed in [1u64, 2, 3] {
            let m = if n % r == 0 {
                tightness_matrix(r, half, n, n, seed).unwrap()
            } else {
                blowup_random(r, half, n, n, seed).unwrap()
            };
            let cfg = DecrementConfig {
                seed,
                ..DecrementConfig::default()
            };
            let (res, trace) = find_mono(&m, &cfg).map_err(|e| format!("r = {r}, seed {seed}: {e}"))?;
            check(res.verify(&m), || "result is not monochromatic".into())?;
            let min_dim = n as f64 / 2f64.powf(10.0 * (r as f64).sqrt());
            let (a, b) = res.dims();
            check(a as f64 >= min_dim && b as f64 >= min_dim, || format!("dims {a}×{b}"))?;
            let cap = 20.0 * (r as f64).sqrt();
            check(trace.iterations() as f64 <= cap, || {
                format!("{} iterations > {cap}", trace.iterations())
            })?;
            lines.push(format!("r={r} s={seed}: {a}×{b} in {} steps", trace.iterations()));
        }
    }
    within(start, Duration::from_secs(300))?;
    Ok(format!("{}; {:.1?}", lines.join(", "), start.elapsed()))
}

fn c11_tightness() -> Outcome {
    let start = Instant::now();
    let half = Rational::new(1, 2);
    let mut lines = Vec::new();
    for r in [12usize, 16, 20] {
        for seed in [1u64, 2] {
            let m = lowrankdisc::constructions::random_binary(r, half, seed).unwrap();
            let disc = ratio_f64(oracle::disc(&m, LIMIT).unwrap());
            let ratio = disc / (0.5f64.sqrt() * (r as f64).powf(1.5));
            check((0.05..=5.0).contains(&ratio), || {
                format!("r = {r}, seed {seed}: ratio {ratio}")
            })?;
            lines.push(format!("r={r} s={seed}: {ratio:.3}"));
        }
    }
    within(start, Duration::from_secs(600))?;
    Ok(format!("{}; {:.1?}", lines.join(", "), start.elapsed()))
}

const DETERMINISM_CONFIG: &str = r#"{
  "gens": [
    {"kind": "identity", "n": 8},
    {"kind": "random_dense", "m": 10, "n": 12, "p": "1/3"},
    {"kind": "blowup_random", "r": 4, "m": 64, "n": 64, "p": "1/2"},
    {"kind": "blowup_random", "r": 3, "m": 24, "n": 36, "p": "1/2"}
  ],
  "ops": ["disc_exact", "disc0", "bound", "mono"],
  "seeds": [1, 2],
  "timing": false
}"#;

fn c12_determinism() -> Outcome {
    let mut reports = Vec::new();
    for threads in [1usize, 8, 1, 8] {
        let mut cfg = ExperimentConfig::from_json(DETERMINISM_CONFIG).map_err(|e| e.to_string())?;
        cfg.threads = Some(threads);
        let rows = run_experiment(&cfg).map_err(|e| e.to_string())?;
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        reports.push(buf);
    }
    check(reports.windows(2).all(|w| w[0] == w[1]), || "CSV reports differ".into())?;

    let m = tightness_matrix(8, Rational::new(1, 2), 64, 64, 5).unwrap();
    let mut traces = Vec::new();
    for threads in [1usize, 8, 1, 8] {
        let cfg = DecrementConfig {
            seed: 11,
            compress: false,
            oracle_limit: 8,
            ..DecrementConfig::default()
        };
        let (res, trace) = with_pool(threads, || find_mono(&m, &cfg))
            .unwrap()
            .map_err(|e| e.to_string())?;
        let mut text = trace.json_lines().join("\n");
        text.push('\n');
        text.push_str(&res.json_line());
        traces.push(text);
    }
    check(traces.windows(2).all(|w| w[0] == w[1]), || "traces differ".into())?;
    Ok(format!(
        "{} CSV bytes and {} trace bytes identical over 4 runs (1 and 8 threads)",
        reports[0].len(),
        traces[0].len()
    ))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("1 oracle matches naive enumeration", c1_oracle_matches_naive),
        ("2 positive and negative discrepancy within factor 3", c2_pos_neg),
        ("3 half-sized rectangle keeps 1/12 of disc⁻", c3_half),
        ("4 relaxation sandwich", c4_sandwich),
        ("5 cube-sum certificate", c5_cubesum),
        ("6 low-rank spectral bound", c6_lowrank),
        ("7 discrepancy lower bound with c0 = 0.01", c7_disc_main),
        ("8 blow-up laws", c8_blow_up),
        ("9 sparse zero block", c9_toosparse),
        ("10 end-to-end monochromatic submatrix", c10_find_mono),
        ("11 tightness scaling", c11_tightness),
        ("12 determinism", c12_determinism),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                println!("FAIL criterion {name}: {why}");
                failed.push(name);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
