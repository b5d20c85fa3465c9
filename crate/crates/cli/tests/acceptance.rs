//! Acceptance suite: one pass/fail line per criterion.
//!
//! Runs without the libtest harness so the summary lines always print.

use std::collections::HashMap;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rayon::prelude::*;

use hurwitz_core::algebra::rational::{int, rat};
use hurwitz_core::constellation::{
    class_key, constellation_weight, euler_genus, make_constellation, make_constellation_in, sum_constellation_weights,
};
use hurwitz_core::hurwitz::{pure_hurwitz_bruteforce, pure_hurwitz_char, weighted_hurwitz, weighted_hurwitz_with};
use hurwitz_core::matrix_integral::{hciz_closed, ho_closed, verify_hciz, verify_ho};
use hurwitz_core::symmetric::partitions_of;
use hurwitz_core::tau::{connected_table, tau_table};
use hurwitz_core::{
    CharTables, Partition, ParamPoly, Permutation, ProductOrder, ProfileTuple, Rational, SpectralPair, Spectrum,
    VarContext, WeightGenSpec, DEFAULT_WORK_BOUND,
};

type Check = Result<String, String>;

/// `((L, M), μ, ν, d, H^d)`.
type GridRow = ((usize, usize), Partition, Partition, usize, ParamPoly);

/// Spectrum, factors, product order, exponents, coefficient.
type ExampleCase = (Spectrum, Vec<Permutation>, ProductOrder, Vec<u32>, Rational);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed <= limit, || format!("took {elapsed:.1?}, limit {limit:?}"))
}

fn p(parts: &[usize]) -> Partition {
    Partition::new(parts.to_vec()).unwrap()
}

fn tuple(ps: &[Partition]) -> ProfileTuple {
    ProfileTuple::new(ps.to_vec()).unwrap()
}

/// Ordered tuples of `k` partitions of `n`.
fn ordered_tuples(n: usize, k: usize) -> Vec<Vec<Partition>> {
    let parts = partitions_of(n);
    let mut out: Vec<Vec<Partition>> = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                parts.iter().map(move |q| {
                    let mut t = t.clone();
                    t.push(q.clone());
                    t
                })
            })
            .collect();
    }
    out
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let tables = CharTables::up_to(8);
    for n in 0..=8 {
        let t = tables.table(n).unwrap();
        let parts = t.partitions();
        let k = parts.len();
        for a in 0..k {
            for b in 0..k {
                // rows: Σ_μ χ_a(μ) χ_b(μ) / z_μ = δ_ab
                let row: Rational = (0..k)
                    .map(|m| Rational::from_integer(BigInt::from(t.by_index(a, m) * t.by_index(b, m))) / parts[m].z())
                    .sum();
                ensure(row == int((a == b) as i64), || format!("row orthogonality fails at N={n}"))?;
                // columns: Σ_λ χ_λ(a) χ_λ(b) = z_a δ_ab
                let col: i64 = (0..k).map(|l| t.by_index(l, a) * t.by_index(l, b)).sum();
                let expected = if a == b { parts[a].z_big() } else { BigInt::from(0) };
                ensure(BigInt::from(col) == expected, || format!("column orthogonality fails at N={n}"))?;
            }
        }
    }
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!("row and column orthogonality exact for N ≤ 8 in {:.2?}", start.elapsed()))
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let tables = CharTables::up_to(5);
    ensure(
        pure_hurwitz_bruteforce(&tuple(&[p(&[2, 1]), p(&[2, 1]), p(&[3])]), false, DEFAULT_WORK_BOUND).unwrap() == int(1),
        || "H((2,1),(2,1),(3)) != 1".into(),
    )?;
    ensure(
        pure_hurwitz_bruteforce(&tuple(&[p(&[3]), p(&[3]), p(&[3])]), false, DEFAULT_WORK_BOUND).unwrap() == rat(1, 3),
        || "H((3),(3),(3)) != 1/3".into(),
    )?;
    ensure(
        pure_hurwitz_bruteforce(&tuple(&[p(&[2, 1]), p(&[2, 1])]), false, DEFAULT_WORK_BOUND).unwrap() == rat(1, 2),
        || "H((2,1),(2,1)) != 1/2".into(),
    )?;
    // Brute force once per multiset (the count is symmetric in the profiles),
    // characters on every ordered tuple; N ≤ 3 is also brute-forced per ordered tuple.
    let mut checked = 0usize;
    for n in 1..=5 {
        for k in 2..=5 {
            let tuples = ordered_tuples(n, k);
            let mut multisets: Vec<Vec<Partition>> = tuples
                .iter()
                .map(|t| {
                    let mut s = t.clone();
                    s.sort();
                    s
                })
                .collect();
            multisets.sort();
            multisets.dedup();
            let brute: HashMap<Vec<Partition>, Rational> = multisets
                .par_iter()
                .map(|s| (s.clone(), pure_hurwitz_bruteforce(&tuple(s), false, DEFAULT_WORK_BOUND).unwrap()))
                .collect();
            for t in &tuples {
                let mut s = t.clone();
                s.sort();
                let by_char = pure_hurwitz_char(&tuple(t), &tables).unwrap();
                ensure(by_char == brute[&s], || format!("mismatch at {t:?}"))?;
                if n <= 3 {
                    let direct = pure_hurwitz_bruteforce(&tuple(t), false, DEFAULT_WORK_BOUND).unwrap();
                    ensure(direct == by_char, || format!("ordered brute force differs at {t:?}"))?;
                }
                checked += 1;
            }
        }
    }
    within(start.elapsed(), Duration::from_secs(300))?;
    Ok(format!("{checked} ordered tuples of length 2..5 agree, N ≤ 5, in {:.2?}", start.elapsed()))
}

const PAIRS: [(usize, usize); 5] = [(0, 1), (1, 1), (2, 1), (0, 2), (3, 0)];

/// Every `H^d_G(μ, ν)` with `N ≤ 5`, `d ≤ 4`, keyed by `(L, M, μ, ν, d)`.
fn weighted_grid(tables: &CharTables) -> Vec<GridRow> {
    let mut jobs = Vec::new();
    for &(l, m) in &PAIRS {
        for n in 0..=5 {
            for mu in partitions_of(n) {
                for nu in partitions_of(n) {
                    for d in 0..=4 {
                        jobs.push(((l, m), mu.clone(), nu.clone(), d));
                    }
                }
            }
        }
    }
    jobs.into_par_iter()
        .map(|((l, m), mu, nu, d)| {
            let h = weighted_hurwitz(&WeightGenSpec::symbolic(l, m), d, &mu, &nu, tables).unwrap();
            ((l, m), mu, nu, d, h)
        })
        .collect()
}

fn criterion_3(grid: &[GridRow], tables: &CharTables) -> Check {
    let start = Instant::now();
    let taus: HashMap<(usize, usize), _> = PAIRS
        .iter()
        .map(|&(l, m)| ((l, m), tau_table(&WeightGenSpec::symbolic(l, m), 5, 4, tables).unwrap()))
        .collect();
    for ((l, m), mu, nu, d, h) in grid {
        let coeff = taus[&(*l, *m)].entry(mu, nu).coeff(*d);
        ensure(&coeff == h, || format!("L={l} M={m} μ={mu} ν={nu} d={d}: {coeff} vs {h}"))?;
    }
    within(start.elapsed(), Duration::from_secs(600))?;
    Ok(format!("{} coefficients equal for 5 weight families, N ≤ 5, d ≤ 4", grid.len()))
}

fn criterion_4(tables: &CharTables) -> Check {
    let start = Instant::now();
    let mut compared = 0;
    for (l, m) in [(0, 1), (1, 1), (0, 2)] {
        let tau = tau_table(&WeightGenSpec::symbolic(l, m), 4, 3, tables).unwrap();
        for n in 0..=4 {
            let sum = sum_constellation_weights(n, l, m, 3, DEFAULT_WORK_BOUND).map_err(|e| e.to_string())?;
            ensure(sum.weight_slice(n) == tau.weight_slice(n), || format!("L={l} M={m} N={n} differs"))?;
            compared += sum.weight_slice(n).len();
        }
    }
    within(start.elapsed(), Duration::from_secs(900))?;
    Ok(format!("{compared} nonzero entries equal, N ≤ 4, dMax = 3, in {:.2?}", start.elapsed()))
}

fn cyc(n: usize, cycles: &[&[usize]]) -> Permutation {
    Permutation::from_cycles(n, cycles).unwrap()
}

fn planar() -> Vec<Permutation> {
    vec![
        cyc(5, &[&[1, 2, 3]]),
        cyc(5, &[&[1, 5, 3]]),
        cyc(5, &[&[1, 5], &[2, 3]]),
        cyc(5, &[&[1, 4]]),
        cyc(5, &[&[1, 4]]),
    ]
}

fn torus() -> Vec<Permutation> {
    vec![
        cyc(3, &[&[1, 2, 3]]),
        cyc(3, &[&[1, 2]]),
        cyc(3, &[&[2, 3]]),
        cyc(3, &[&[1, 2]]),
        cyc(3, &[&[1, 2]]),
    ]
}

fn criterion_5() -> Check {
    let cases: Vec<ExampleCase> = vec![
        (Spectrum::new(3, vec![]), planar(), ProductOrder::RightToLeft, vec![2, 2, 1], rat(1, 120)),
        (Spectrum::new(1, vec![2]), planar(), ProductOrder::RightToLeft, vec![2, 3], rat(-1, 120)),
        (Spectrum::new(0, vec![3]), planar(), ProductOrder::RightToLeft, vec![5], rat(1, 120)),
        (Spectrum::new(0, vec![1, 2]), planar(), ProductOrder::RightToLeft, vec![2, 3], rat(1, 120)),
        (Spectrum::new(3, vec![]), torus(), ProductOrder::LeftToRight, vec![1, 1, 1], rat(1, 6)),
        (Spectrum::new(0, vec![3]), torus(), ProductOrder::LeftToRight, vec![3], rat(1, 6)),
        (Spectrum::new(1, vec![2]), torus(), ProductOrder::LeftToRight, vec![1, 2], rat(1, 6)),
        (Spectrum::new(0, vec![1, 2]), torus(), ProductOrder::LeftToRight, vec![1, 2], rat(1, 6)),
    ];
    for (spectrum, factors, order, exps, coeff) in cases {
        let n = factors[0].degree();
        let c = make_constellation_in(order, &spectrum, factors).map_err(|e| e.to_string())?;
        let w = constellation_weight(&c);
        let expected = ParamPoly::monomial(spectrum.context(), exps.clone(), coeff.clone());
        let (mu, nu) = if n == 5 { (p(&[2, 1, 1, 1]), p(&[3, 1, 1])) } else { (p(&[2, 1]), p(&[3])) };
        ensure(w.w == expected, || format!("{spectrum:?}: {} vs {expected}", w.w))?;
        ensure(w.n == n && w.d == n, || format!("{spectrum:?}: γ^{} β^{}", w.n, w.d))?;
        ensure(w.mu == mu && w.nu == nu, || format!("{spectrum:?}: key ({}, {})", w.mu, w.nu))?;
    }
    Ok("8 worked-example weights reproduced with γ^N β^d exponents and (μ,ν) keys".into())
}

fn criterion_6(tables: &CharTables) -> Check {
    let start = Instant::now();
    let g = WeightGenSpec::symbolic(0, 1);
    let ctx = VarContext::new(0, 1);
    let conn = connected_table(&tau_table(&g, 4, 2, tables).unwrap()).unwrap();
    let mut compared = 0;
    for n in 1..=4 {
        for mu in partitions_of(n) {
            for nu in partitions_of(n) {
                let counted =
                    pure_hurwitz_bruteforce(&tuple(&[mu.clone(), nu.clone()]), true, DEFAULT_WORK_BOUND).unwrap();
                let entry = conn.entry(&mu, &nu);
                ensure(entry.coeff(0) == ParamPoly::constant(ctx, counted), || format!("β⁰ at ({mu},{nu})"))?;
                // higher orders from weighted transitive counts
                for d in 1..=2 {
                    let h = weighted_hurwitz_with(&g, d, &mu, &nu, |ps| {
                        pure_hurwitz_bruteforce(&ProfileTuple::new(ps.to_vec())?, true, DEFAULT_WORK_BOUND)
                    })
                    .unwrap();
                    ensure(entry.coeff(d) == h, || format!("β^{d} at ({mu},{nu})"))?;
                }
                compared += 1;
            }
        }
    }
    ensure(conn.entry(&p(&[1, 1]), &p(&[1, 1])).coeff(0).is_zero(), || "((1,1),(1,1)) != 0".into())?;
    ensure(
        conn.entry(&p(&[2]), &p(&[2])).coeff(0) == ParamPoly::constant(ctx, rat(1, 2)),
        || "((2),(2)) != 1/2".into(),
    )?;
    Ok(format!(
        "{compared} (μ,ν) pairs match transitive counts at β⁰..β², N ≤ 4, in {:.2?}",
        start.elapsed()
    ))
}

fn criterion_7() -> Check {
    let t = make_constellation_in(ProductOrder::LeftToRight, &Spectrum::new(3, vec![]), torus()).map_err(|e| e.to_string())?;
    let torus_genus = euler_genus(&class_key(&t));
    ensure(torus_genus == (0, Some(1)), || format!("torus gives {torus_genus:?}"))?;
    let s = make_constellation(&Spectrum::new(1, vec![2]), planar()).map_err(|e| e.to_string())?;
    let planar_genus = euler_genus(&class_key(&s));
    ensure(planar_genus == (2, Some(0)), || format!("planar gives {planar_genus:?}"))?;
    Ok("torus χ=0 g=1, planar N=5 χ=2 g=0".into())
}

fn criterion_8(grid: &[GridRow]) -> Check {
    let mut zeros = 0;
    for ((l, m), mu, nu, d, h) in grid {
        if (d + mu.colength() + nu.colength()) % 2 == 1 {
            ensure(h.is_zero(), || format!("L={l} M={m} μ={mu} ν={nu} d={d} is {h}"))?;
            zeros += 1;
        }
    }
    Ok(format!("{zeros} parity-forbidden coefficients vanish, N ≤ 5, d ≤ 4"))
}

fn criterion_9() -> Check {
    let mut worst_one: f64 = 0.0;
    for (a, b, gamma) in [(0.3, -0.7, 0.05), (1.0, 0.9, -0.05), (-0.2, 0.6, 0.01)] {
        let pair = SpectralPair::new(vec![a], vec![b]).unwrap();
        let v = hciz_closed(&pair, gamma).map_err(|e| e.to_string())?;
        let exact = (gamma * a * b).exp();
        worst_one = worst_one.max((v - exact).abs() / exact);
        let ratio = c_over_d_ho(&pair, gamma)?;
        ensure(ratio < 4.0 * f64::EPSILON, || format!("HO n=1 identity off by {ratio:e}"))?;
    }
    ensure(worst_one <= 2.0 * f64::EPSILON, || format!("n=1 HCIZ off by {worst_one:e}"))?;
    let tables = CharTables::up_to(12);
    let mut worst_hciz: f64 = 0.0;
    let spectra = [
        (vec![-0.9, 0.4], vec![0.2, 1.0]),
        (vec![0.1, 0.7], vec![-0.5, -0.3]),
        (vec![-1.0, 1.0], vec![-0.8, 0.6]),
    ];
    for (a, b) in &spectra {
        for gamma in [0.05, -0.05, 0.02] {
            let pair = SpectralPair::new(a.clone(), b.clone()).unwrap();
            for d1 in [1.0, 2.5] {
                let r = verify_hciz(&pair, gamma, d1, 12, &tables).map_err(|e| e.to_string())?;
                worst_hciz = worst_hciz.max(r.rel_err);
            }
        }
    }
    ensure(worst_hciz < 1e-8, || format!("n=2 HCIZ rel err {worst_hciz:e}"))?;
    let mut worst_ho: f64 = 0.0;
    for (a, b) in &spectra {
        for (c1, d1) in [(0.6, 1.1), (-0.4, 0.9), (1.5, 0.5)] {
            let pair = SpectralPair::new(a.clone(), b.clone()).unwrap();
            let r = verify_ho(&pair, c1, d1, 0.05, 10, &tables).map_err(|e| e.to_string())?;
            worst_ho = worst_ho.max(r.rel_err);
        }
    }
    ensure(worst_ho < 1e-6, || format!("n=2 HO rel err {worst_ho:e}"))?;
    Ok(format!(
        "n=1 HCIZ err {worst_one:.1e}; n=2 HCIZ max rel err {worst_hciz:.1e} (N_max=12); n=2 HO max rel err {worst_ho:.1e} (N_max=10)"
    ))
}

/// `|ho_closed - (1 - z a b)^{d_1/c_1}|` relative, at `n = 1`.
fn c_over_d_ho(pair: &SpectralPair, gamma: f64) -> Result<f64, String> {
    let (c1, d1) = (0.7, 1.3);
    let z = -gamma * c1 / d1;
    let exact = (1.0 - z * pair.a[0] * pair.b[0]).powf(d1 / c1);
    let v = ho_closed(pair, c1, d1, gamma).map_err(|e| e.to_string())?;
    Ok((v - exact).abs() / exact)
}

fn run_cli(args: &[&str]) -> (Vec<u8>, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_hurwitz"))
        .args(args)
        .env_remove("HURWITZ_WORK_BOUND")
        .output()
        .expect("run hurwitz");
    (out.stdout, out.status.code().unwrap_or(-1))
}

fn criterion_10() -> Check {
    let commands: Vec<Vec<&str>> = vec![
        vec!["pure", "--profiles", "(2,1);(2,1);(3)", "--connected"],
        vec!["weighted", "--L", "1", "--M", "1", "--dmax", "3", "--profiles", "(3,1);(2,2)"],
        vec!["table", "--L", "1", "--M", "2", "--Nmax", "4", "--dmax", "3"],
        vec!["table", "--L", "0", "--M", "1", "--Nmax", "4", "--dmax", "2", "--connected"],
        vec!["constellations", "--L", "1", "--spectrum", "1,1", "--Nmax", "3", "--dmax", "3"],
        vec!["verify", "tau", "--L", "0", "--M", "1", "--Nmax", "4", "--dmax", "3"],
        vec!["verify", "constellations", "--L", "1", "--M", "1", "--Nmax", "3", "--dmax", "2"],
        vec!["verify", "connected", "--Nmax", "3", "--dmax", "2"],
        vec!["verify", "hciz", "--n", "2", "--gamma", "0.05"],
        vec!["hciz", "--n", "2", "--c", "0.6", "--d", "1.1", "--Nmax", "10"],
    ];
    for args in &commands {
        let (first, code) = run_cli(args);
        let (second, code2) = run_cli(args);
        ensure(code == 0 && code2 == 0, || format!("{args:?} exited {code}/{code2}"))?;
        ensure(first == second, || format!("{args:?} output differs between runs"))?;
    }
    Ok(format!("{} commands byte-identical across two runs", commands.len()))
}

fn main() -> ExitCode {
    let tables = CharTables::up_to(5);
    let grid_start = Instant::now();
    let grid = weighted_grid(&tables);
    let grid_time = grid_start.elapsed();
    let results: Vec<(&str, Check)> = vec![
        ("1 character soundness", criterion_1()),
        ("2 oracle equivalence", criterion_2()),
        ("3 tau vs weighted Hurwitz", criterion_3(&grid, &tables).map(|s| format!("{s} ({grid_time:.2?} grid)"))),
        ("4 constellations vs tau", criterion_4(&tables)),
        ("5 example weights", criterion_5()),
        ("6 connected numbers", criterion_6(&tables)),
        ("7 genus fixtures", criterion_7()),
        ("8 parity", criterion_8(&grid)),
        ("9 HCIZ and HO numerics", criterion_9()),
        ("10 CLI determinism", criterion_10()),
    ];
    let mut failed = 0;
    for (name, result) in &results {
        match result {
            Ok(detail) => println!("criterion {name}: PASS ({detail})"),
            Err(why) => {
                failed += 1;
                println!("criterion {name}: FAIL ({why})");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
